#include "widomlab/harness.hpp"

int main(int argc, char** argv) { return widomlab::cli_main(argc, argv); }
