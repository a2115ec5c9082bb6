#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "widomlab/coefficients.hpp"
#include "widomlab/domains.hpp"
#include "widomlab/operators.hpp"
#include "widomlab/symbols.hpp"
#include "widomlab/test_functions.hpp"

namespace widomlab {

class ConfigError : public Error {
  public:
    using Error::Error;
};

struct Tolerances {
    double w0_rel = 0.01;
    double w1_rel = 0.10;
    // absolute thresholds used when the corresponding theory value vanishes
    double w0_abs = 1e-3;
    double w1_abs = 1e-3;
};

struct ExperimentConfig {
    std::string name = "experiment";
    int dim = 1;
    Domain lambda = Domain::interval(0.0, 1.0);
    Domain gamma = Domain::interval(-1.0, 1.0);
    MatrixSymbol a1 = constant_symbol(1, Matrix::Identity(1, 1));
    MatrixSymbol a2 = zero_symbol(1, 1);
    TestFunction h = identity_fn();
    std::vector<double> L_values;
    GridRule grid_rule{};
    int xi_resolution = 256;
    int quad_resolution = 512;
    int boundary_nodes = 1024;
    Tolerances tolerances{};
    bool compare_upper_half = false;   // compare theory against the stability fit
    std::optional<MatrixSymbol> symbol_b;  // direct coefficient mode for `coeff`
    std::string output_path;           // default CLI output target; empty = stdout
};

// Parses and validates a config document; errors name the offending JSON
// pointer (e.g. "/lambda/a: expected a number").
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

struct SweepRow {
    double L = 0.0;
    double trace = 0.0;
    int grid_points = 0;   // total grid nodes
    double clamp = 0.0;    // clamp magnitude reported by the trace
};

// One row per L, deterministic given the config; rows for distinct L execute
// in parallel on a bounded worker pool. Polynomial test functions use the
// direct matrix-power trace (no eigensolve).
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

struct AsymptoticFit {
    double c_d = 0.0;     // coefficient of L^d
    double c_log = 0.0;   // coefficient of L^(d-1) log L
    double c_1 = 0.0;     // coefficient of L^(d-1)
    std::vector<double> residuals;
    double condition_number = 0.0;
    // stability fit over the upper half of the L-range
    double upper_c_d = 0.0;
    double upper_c_log = 0.0;
    double upper_c_1 = 0.0;
};

// Ordinary least squares on the design columns {L^d, L^(d-1) log L, L^(d-1)}.
AsymptoticFit fit_two_term(const std::vector<SweepRow>& rows, int d);

struct TheoryReport {
    double w0 = 0.0;
    double w0_est_error = 0.0;
    double w1 = 0.0;
    long w1_nodes = 0;
};

// W0 = w0(tr h(Re A1); Lambda, Gamma) + w0(tr h(Re A2); Lambda, Gamma^c),
// W1 = w1(frak_U(h; Re A1, Re A2); dLambda, dGamma).
TheoryReport theory_coefficients(const ExperimentConfig& cfg);

struct CompareReport {
    AsymptoticFit fit;
    TheoryReport theory;
    double fitted_w0 = 0.0;   // the compared c_d (full or upper-half)
    double fitted_w1 = 0.0;   // the compared c_log
    double rel_err_w0 = 0.0;  // absolute error when theory vanishes
    double rel_err_w1 = 0.0;
    bool w0_abs_mode = false;
    bool w1_abs_mode = false;
    bool pass = false;
};

CompareReport compare_with_theory(const AsymptoticFit& fit, const ExperimentConfig& cfg);

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json fit_json(const AsymptoticFit& fit);
nlohmann::json report_json(const CompareReport& report, const ExperimentConfig& cfg,
                           const std::vector<SweepRow>& rows);

// Subcommands: coeff | operator | sweep | verify. Exit 0 on PASS, 2 on FAIL,
// 1 on error.
int cli_main(int argc, char** argv);

}  // namespace widomlab
