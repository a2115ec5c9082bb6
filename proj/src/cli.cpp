#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "widomlab/eig.hpp"
#include "widomlab/harness.hpp"
#include "widomlab/spectra.hpp"

namespace widomlab {

namespace {

using nlohmann::json;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open output file " + path);
    out << content;
}

void note_normalization(const ExperimentConfig& cfg) {
    if (cfg.h.normalization_shift() != 0.0)
        std::cerr << "note: test function '" << cfg.h.name() << "' normalized by "
                  << -cfg.h.normalization_shift() << " to enforce h(0) = 0\n";
}

int run_coeff(const std::string& config_path, std::string out_path) {
    ExperimentConfig cfg = load_config(config_path);
    if (out_path.empty()) out_path = cfg.output_path;
    json out;
    if (cfg.symbol_b) {
        CoefficientResult r0 = w0(*cfg.symbol_b, cfg.lambda,
                                  GammaRegion::direct(cfg.gamma), cfg.quad_resolution);
        BoundaryQuadrature bql = cfg.lambda.boundary_quadrature(cfg.boundary_nodes);
        BoundaryQuadrature bqg = cfg.gamma.boundary_quadrature(cfg.boundary_nodes);
        CoefficientResult r1 = w1(*cfg.symbol_b, bql, bqg);
        // refine the boundary quadrature once for an error estimate
        BoundaryQuadrature bql2 = cfg.lambda.boundary_quadrature(2 * cfg.boundary_nodes);
        BoundaryQuadrature bqg2 = cfg.gamma.boundary_quadrature(2 * cfg.boundary_nodes);
        CoefficientResult r1f = w1(*cfg.symbol_b, bql2, bqg2);
        out = json{{"W0", r0.value},
                   {"W1", r1f.value},
                   {"est_error", r0.est_error + std::abs(r1f.value - r1.value)}};
    } else {
        note_normalization(cfg);
        TheoryReport rep = theory_coefficients(cfg);
        out = json{{"W0", rep.w0}, {"W1", rep.w1}, {"est_error", rep.w0_est_error}};
    }
    write_output(out_path, out.dump(2) + "\n");
    return 0;
}

int run_operator(const std::string& config_path, double L, const std::string& out_path,
                 const std::string& dump_path) {
    ExperimentConfig cfg = load_config(config_path);
    GridSpec grid = grid_for_scale(cfg.lambda, L, cfg.grid_rule);
    DiscretizedOperator op =
        build_GL(cfg.a1, cfg.a2, cfg.lambda, cfg.gamma, L, grid, cfg.xi_resolution);
    if (!dump_path.empty()) dump_operator(op, dump_path);
    RealVector ev = hermitian_eigenvalues(op.matrix);
    std::string csv = "index,eigenvalue\n";
    char buf[48];
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%ld,%.17g\n", static_cast<long>(k), ev[k]);
        csv += buf;
    }
    write_output(out_path, csv);
    std::cerr << "operator: size " << op.size() << ", L = " << L
              << ", trace = " << op.trace_real() << "\n";
    return 0;
}

int run_sweep_cmd(const std::string& config_path, std::string out_path) {
    ExperimentConfig cfg = load_config(config_path);
    if (out_path.empty()) out_path = cfg.output_path;
    note_normalization(cfg);
    std::vector<SweepRow> rows = run_sweep(cfg);
    write_output(out_path, sweep_csv(rows));
    return 0;
}

int run_verify(const std::string& config_path, std::string out_path) {
    ExperimentConfig cfg = load_config(config_path);
    if (out_path.empty()) out_path = cfg.output_path;
    note_normalization(cfg);
    std::vector<SweepRow> rows = run_sweep(cfg);
    AsymptoticFit fit = fit_two_term(rows, cfg.dim);
    CompareReport rep = compare_with_theory(fit, cfg);
    write_output(out_path, report_json(rep, cfg, rows).dump(2) + "\n");
    return rep.pass ? 0 : 2;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"widomlab: spectral traces of truncated Wiener-Hopf operators and "
                 "their two-term asymptotics"};
    app.require_subcommand(1);

    std::string config_path, out_path, dump_path;
    double op_L = 100.0;

    CLI::App* coeff = app.add_subcommand(
        "coeff", "evaluate the asymptotic coefficients W0 and W1 for a config");
    coeff->add_option("--config", config_path, "experiment JSON")->required();
    coeff->add_option("--out", out_path, "output JSON path (default: stdout)");

    CLI::App* oper = app.add_subcommand(
        "operator", "build the discretized operator at one L and dump its spectrum");
    oper->add_option("--config", config_path, "experiment JSON")->required();
    oper->add_option("--L", op_L, "scaling parameter")->required();
    oper->add_option("--out", out_path, "spectrum CSV path (default: stdout)");
    oper->add_option("--dump", dump_path, "binary operator dump path");

    CLI::App* sweep = app.add_subcommand("sweep", "trace sweep over the configured L values");
    sweep->add_option("--config", config_path, "experiment JSON")->required();
    sweep->add_option("--out", out_path, "CSV output path (default: stdout)");

    CLI::App* verify = app.add_subcommand(
        "verify", "sweep, fit the two-term model and compare with the coefficients");
    verify->add_option("--config", config_path, "experiment JSON")->required();
    verify->add_option("--out", out_path, "JSON report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (coeff->parsed()) return run_coeff(config_path, out_path);
        if (oper->parsed()) return run_operator(config_path, op_L, out_path, dump_path);
        if (sweep->parsed()) return run_sweep_cmd(config_path, out_path);
        if (verify->parsed()) return run_verify(config_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace widomlab
