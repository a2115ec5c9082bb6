#include "widomlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "widomlab/spectra.hpp"

namespace widomlab {

namespace {

using nlohmann::json;

// JSON accessor carrying its pointer for error messages.
struct Node {
    const json& j;
    std::string ptr;

    std::string where() const { return ptr.empty() ? "/" : ptr; }

    Node field(const std::string& key) const {
        if (!j.is_object()) throw ConfigError(where() + ": expected an object");
        auto it = j.find(key);
        if (it == j.end())
            throw ConfigError(ptr + "/" + key + ": missing required field");
        return Node{*it, ptr + "/" + key};
    }
    std::optional<Node> maybe(const std::string& key) const {
        if (!j.is_object()) return std::nullopt;
        auto it = j.find(key);
        if (it == j.end()) return std::nullopt;
        return Node{*it, ptr + "/" + key};
    }
    double number() const {
        if (!j.is_number()) throw ConfigError(where() + ": expected a number");
        return j.get<double>();
    }
    int integer() const {
        if (!j.is_number_integer()) throw ConfigError(where() + ": expected an integer");
        return j.get<int>();
    }
    bool boolean() const {
        if (!j.is_boolean()) throw ConfigError(where() + ": expected a boolean");
        return j.get<bool>();
    }
    std::string str() const {
        if (!j.is_string()) throw ConfigError(where() + ": expected a string");
        return j.get<std::string>();
    }
    std::size_t size() const {
        if (!j.is_array()) throw ConfigError(where() + ": expected an array");
        return j.size();
    }
    Node item(std::size_t i) const {
        if (!j.is_array() || i >= j.size())
            throw ConfigError(where() + "/" + std::to_string(i) + ": missing array item");
        return Node{j[i], ptr + "/" + std::to_string(i)};
    }
};

Point parse_point(const Node& n, int dim) {
    if (n.size() != static_cast<std::size_t>(dim))
        throw ConfigError(n.where() + ": expected " + std::to_string(dim) +
                          " coordinates");
    Point p{0.0, 0.0};
    for (int k = 0; k < dim; ++k) p[k] = n.item(k).number();
    return p;
}

Domain parse_domain(const Node& n, int dim) {
    std::string kind = n.field("kind").str();
    try {
        if (kind == "interval")
            return Domain::interval(n.field("a").number(), n.field("b").number());
        if (kind == "box") {
            Box b;
            b.dim = dim;
            b.lo = parse_point(n.field("lo"), dim);
            b.hi = parse_point(n.field("hi"), dim);
            return Domain::box(b);
        }
        if (kind == "disk")
            return Domain::disk(parse_point(n.field("center"), 2),
                                n.field("radius").number());
        if (kind == "polygon") {
            Node verts = n.field("vertices");
            std::vector<Point> v;
            for (std::size_t i = 0; i < verts.size(); ++i)
                v.push_back(parse_point(verts.item(i), 2));
            return Domain::polygon(std::move(v));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(n.where() + ": " + e.what());
    }
    throw ConfigError(n.field("kind").where() + ": unknown domain kind '" + kind + "'");
}

Matrix parse_matrix(const Node& n) {
    std::size_t rows = n.size();
    if (rows == 0) throw ConfigError(n.where() + ": empty matrix");
    Matrix m(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Node row = n.item(i);
        if (row.size() != rows)
            throw ConfigError(row.where() + ": matrix must be square");
        for (std::size_t k = 0; k < rows; ++k) {
            Node e = row.item(k);
            if (e.j.is_number()) {
                m(i, k) = Complex(e.number(), 0.0);
            } else if (e.j.is_array() && e.size() == 2) {
                m(i, k) = Complex(e.item(0).number(), e.item(1).number());
            } else {
                throw ConfigError(e.where() + ": expected a number or [re, im]");
            }
        }
    }
    return m;
}

Box parse_box_like(const Node& n, int dim) {
    // accepts [a, b] for d=1 or {"lo": [...], "hi": [...]}
    if (n.j.is_array() && dim == 1 && n.size() == 2)
        return Box::interval(n.item(0).number(), n.item(1).number());
    Box b;
    b.dim = dim;
    b.lo = parse_point(n.field("lo"), dim);
    b.hi = parse_point(n.field("hi"), dim);
    return b;
}

std::function<double(const Point&)> parse_scalar_field(const Node& n, int dim) {
    std::string kind = n.field("kind").str();
    if (kind == "one") return [](const Point&) { return 1.0; };
    if (kind == "cos") {
        double freq = n.field("freq").number();
        double phase = n.maybe("phase") ? n.maybe("phase")->number() : 0.0;
        return [freq, phase](const Point& p) { return std::cos(freq * p[0] + phase); };
    }
    if (kind == "gaussian") {
        Point c = parse_point(n.field("center"), dim);
        double width = n.field("width").number();
        return [c, width, dim](const Point& p) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += (p[k] - c[k]) * (p[k] - c[k]);
            return std::exp(-s / (2.0 * width * width));
        };
    }
    throw ConfigError(n.field("kind").where() + ": unknown scalar field '" + kind + "'");
}

MatrixSymbol parse_symbol(const Node& n, int dim) {
    std::string kind = n.field("kind").str();
    try {
        if (kind == "zero") return zero_symbol(dim, n.field("n").integer());
        if (kind == "constant") return constant_symbol(dim, parse_matrix(n.field("matrix")));
        if (kind == "windowed_constant") {
            Box window = parse_box_like(n.field("window"), dim);
            Box plateau = parse_box_like(n.field("plateau"), dim);
            return windowed_constant(dim, parse_matrix(n.field("matrix")), window,
                                     plateau);
        }
        if (kind == "separable") {
            auto fx = parse_scalar_field(n.field("fx"), dim);
            auto gxi = parse_scalar_field(n.field("gxi"), dim);
            std::optional<Box> supp;
            if (auto s = n.maybe("support_xi")) supp = parse_box_like(*s, dim);
            return separable_symbol(dim, fx, parse_matrix(n.field("matrix")), gxi, supp,
                                    true);
        }
        if (kind == "bump") {
            return bump_symbol(dim, parse_matrix(n.field("matrix")),
                               parse_point(n.field("center_x"), dim),
                               n.field("width_x").number(),
                               parse_point(n.field("center_xi"), dim),
                               n.field("width_xi").number());
        }
        if (kind == "pauli_x") return noncommuting_pair(dim).first;
        if (kind == "upper_projector") return noncommuting_pair(dim).second;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(n.where() + ": " + e.what());
    }
    throw ConfigError(n.field("kind").where() + ": unknown symbol kind '" + kind + "'");
}

TestFunction parse_test_function(const Node& n) {
    std::string kind = n.field("kind").str();
    try {
        if (kind == "identity") return identity_fn();
        if (kind == "monomial") return monomial(n.field("p").integer());
        if (kind == "polynomial") {
            Node cs = n.field("coeffs");
            if (cs.size() < 2)
                throw ConfigError(cs.where() + ": need coefficients beyond the constant");
            // leading entry is the constant term; h(0)=0 normalization drops it
            std::vector<double> coeffs;
            for (std::size_t k = 1; k < cs.size(); ++k)
                coeffs.push_back(cs.item(k).number());
            return polynomial_fn(std::move(coeffs));
        }
        if (kind == "renyi") return renyi(n.field("alpha").number());
        if (kind == "von_neumann") return von_neumann();
        if (kind == "analytic_exp") return analytic_exp(n.field("scale").number());
        if (kind == "smooth_bump")
            return smooth_bump_fn(n.field("center").number(), n.field("width").number());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(n.where() + ": " + e.what());
    }
    throw ConfigError(n.field("kind").where() + ": unknown test function '" + kind +
                      "'");
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
    Node root{doc, ""};
    if (auto sv = root.maybe("schema_version")) {
        if (sv->integer() != 1)
            throw ConfigError(sv->where() + ": unsupported schema_version");
    }
    ExperimentConfig cfg;
    if (auto n = root.maybe("name")) cfg.name = n->str();
    if (auto n = root.maybe("dimension")) cfg.dim = n->integer();
    if (cfg.dim < 1 || cfg.dim > 2)
        throw ConfigError("/dimension: must be 1 or 2");

    cfg.lambda = parse_domain(root.field("lambda"), cfg.dim);
    cfg.gamma = parse_domain(root.field("gamma"), cfg.dim);
    if (cfg.lambda.dim() != cfg.dim)
        throw ConfigError("/lambda: dimension does not match /dimension");
    if (cfg.gamma.dim() != cfg.dim)
        throw ConfigError("/gamma: dimension does not match /dimension");

    if (auto n = root.maybe("symbol_a1")) cfg.a1 = parse_symbol(*n, cfg.dim);
    else cfg.a1 = constant_symbol(cfg.dim, Matrix::Identity(1, 1));
    if (auto n = root.maybe("symbol_a2")) cfg.a2 = parse_symbol(*n, cfg.dim);
    else cfg.a2 = zero_symbol(cfg.dim, cfg.a1.dim_n());
    if (cfg.a1.dim_n() != cfg.a2.dim_n())
        throw ConfigError("/symbol_a2: matrix dimension differs from /symbol_a1");

    if (auto n = root.maybe("test_function")) cfg.h = parse_test_function(*n);

    if (auto n = root.maybe("L_values")) {
        for (std::size_t i = 0; i < n->size(); ++i) {
            double L = n->item(i).number();
            if (L <= 0) throw ConfigError(n->item(i).where() + ": L must be positive");
            if (!cfg.L_values.empty() && L <= cfg.L_values.back())
                throw ConfigError(n->item(i).where() +
                                  ": L_values must be strictly increasing");
            cfg.L_values.push_back(L);
        }
    }

    if (auto n = root.maybe("grid_rule")) {
        if (auto v = n->maybe("max_h_times_L")) cfg.grid_rule.max_h_times_L = v->number();
        if (auto v = n->maybe("min_points")) cfg.grid_rule.min_points = v->integer();
        if (auto v = n->maybe("max_points")) cfg.grid_rule.max_points = v->integer();
        if (cfg.grid_rule.max_h_times_L <= 0)
            throw ConfigError(n->where() + "/max_h_times_L: must be positive");
    }
    if (auto n = root.maybe("xi_resolution")) cfg.xi_resolution = n->integer();
    if (auto n = root.maybe("quad_resolution")) cfg.quad_resolution = n->integer();
    if (auto n = root.maybe("boundary_nodes")) cfg.boundary_nodes = n->integer();

    if (auto n = root.maybe("tolerances")) {
        if (auto v = n->maybe("w0_rel")) cfg.tolerances.w0_rel = v->number();
        if (auto v = n->maybe("w1_rel")) cfg.tolerances.w1_rel = v->number();
        if (auto v = n->maybe("w0_abs")) cfg.tolerances.w0_abs = v->number();
        if (auto v = n->maybe("w1_abs")) cfg.tolerances.w1_abs = v->number();
    }
    if (auto n = root.maybe("compare_fit")) {
        std::string mode = n->str();
        if (mode == "upper_half") cfg.compare_upper_half = true;
        else if (mode != "full")
            throw ConfigError(n->where() + ": expected \"full\" or \"upper_half\"");
    }
    if (auto n = root.maybe("output")) cfg.output_path = n->str();
    if (auto n = root.maybe("symbol_b")) {
        cfg.symbol_b = parse_symbol(*n, cfg.dim);
        if (cfg.symbol_b->dim_n() != 1)
            throw ConfigError(n->where() + ": symbol_b must be scalar (n = 1)");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(doc);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    if (cfg.L_values.empty()) throw ConfigError("/L_values: must not be empty");
    std::vector<SweepRow> rows(cfg.L_values.size());
    std::vector<std::string> errors(cfg.L_values.size());
    parallel_for(cfg.L_values.size(), [&](std::size_t i) {
        double L = cfg.L_values[i];
        try {
            GridSpec grid = grid_for_scale(cfg.lambda, L, cfg.grid_rule);
            DiscretizedOperator op = build_GL(cfg.a1, cfg.a2, cfg.lambda, cfg.gamma, L,
                                              grid, cfg.xi_resolution);
            SweepRow row;
            row.L = L;
            row.grid_points = static_cast<int>(grid.size());
            if (cfg.h.is_polynomial()) {
                row.trace = trace_poly_direct(op, cfg.h.poly_coeffs());
                row.clamp = 0.0;
            } else {
                TraceResult tr = trace_of_function(op, cfg.h);
                row.trace = tr.value;
                row.clamp = tr.clamp_total;
            }
            rows[i] = row;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw Error("sweep failed at L=" + std::to_string(cfg.L_values[i]) + ": " +
                        errors[i]);
    return rows;
}

namespace {

struct OlsResult {
    double c0, c1, c2;
    double cond;
};

OlsResult ols_three(const std::vector<SweepRow>& rows, std::size_t begin, int d) {
    const std::size_t n = rows.size() - begin;
    Eigen::MatrixXd a(n, 3);
    Eigen::VectorXd b(n);
    for (std::size_t r = 0; r < n; ++r) {
        double L = rows[begin + r].L;
        a(r, 0) = std::pow(L, d);
        a(r, 1) = std::pow(L, d - 1) * std::log(L);
        a(r, 2) = std::pow(L, d - 1);
        b(r) = rows[begin + r].trace;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > smax * 1e-13))
        throw Error("rank-deficient design matrix (duplicated L values?)");
    Eigen::Vector3d c = svd.solve(b);
    return OlsResult{c(0), c(1), c(2), smax / smin};
}

}  // namespace

AsymptoticFit fit_two_term(const std::vector<SweepRow>& rows, int d) {
    if (rows.size() < 4) throw Error("fit_two_term requires at least 4 rows");
    if (d < 1 || d > 2) throw Error("fit_two_term requires d in {1, 2}");
    AsymptoticFit fit;
    OlsResult full = ols_three(rows, 0, d);
    fit.c_d = full.c0;
    fit.c_log = full.c1;
    fit.c_1 = full.c2;
    fit.condition_number = full.cond;
    fit.residuals.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double L = rows[r].L;
        double model = fit.c_d * std::pow(L, d) +
                       fit.c_log * std::pow(L, d - 1) * std::log(L) +
                       fit.c_1 * std::pow(L, d - 1);
        fit.residuals[r] = rows[r].trace - model;
    }
    std::size_t start = std::min(rows.size() - 3, rows.size() / 2);
    OlsResult upper = ols_three(rows, start, d);
    fit.upper_c_d = upper.c0;
    fit.upper_c_log = upper.c1;
    fit.upper_c_1 = upper.c2;
    return fit;
}

TheoryReport theory_coefficients(const ExperimentConfig& cfg) {
    TheoryReport rep;
    MatrixSymbol b1 = compose_trace(cfg.h, cfg.a1);
    CoefficientResult w0_1 =
        w0(b1, cfg.lambda, GammaRegion::direct(cfg.gamma), cfg.quad_resolution);
    rep.w0 = w0_1.value;
    rep.w0_est_error = w0_1.est_error;
    if (!cfg.a2.is_zero()) {
        MatrixSymbol b2 = compose_trace(cfg.h, cfg.a2);
        CoefficientResult w0_2 = w0(b2, cfg.lambda, GammaRegion::complement_of(cfg.gamma),
                                    cfg.quad_resolution);
        rep.w0 += w0_2.value;
        rep.w0_est_error += w0_2.est_error;
    }
    BoundaryQuadrature bql = cfg.lambda.boundary_quadrature(cfg.boundary_nodes);
    BoundaryQuadrature bqg = cfg.gamma.boundary_quadrature(cfg.boundary_nodes);
    CoefficientResult w1r = w1_jump(cfg.h, cfg.a1, cfg.a2, bql, bqg);
    rep.w1 = w1r.value;
    rep.w1_nodes = w1r.nodes_used;
    return rep;
}

CompareReport compare_with_theory(const AsymptoticFit& fit, const ExperimentConfig& cfg) {
    CompareReport rep;
    rep.fit = fit;
    rep.theory = theory_coefficients(cfg);
    rep.fitted_w0 = cfg.compare_upper_half ? fit.upper_c_d : fit.c_d;
    rep.fitted_w1 = cfg.compare_upper_half ? fit.upper_c_log : fit.c_log;

    bool pass_w0, pass_w1;
    if (std::abs(rep.theory.w0) < 1e-14) {
        rep.w0_abs_mode = true;
        rep.rel_err_w0 = std::abs(rep.fitted_w0);
        pass_w0 = rep.rel_err_w0 <= cfg.tolerances.w0_abs;
    } else {
        rep.rel_err_w0 = std::abs(rep.fitted_w0 - rep.theory.w0) / std::abs(rep.theory.w0);
        pass_w0 = rep.rel_err_w0 <= cfg.tolerances.w0_rel;
    }
    if (std::abs(rep.theory.w1) < 1e-14) {
        rep.w1_abs_mode = true;
        rep.rel_err_w1 = std::abs(rep.fitted_w1);
        pass_w1 = rep.rel_err_w1 <= cfg.tolerances.w1_abs;
    } else {
        rep.rel_err_w1 = std::abs(rep.fitted_w1 - rep.theory.w1) / std::abs(rep.theory.w1);
        pass_w1 = rep.rel_err_w1 <= cfg.tolerances.w1_rel;
    }
    rep.pass = pass_w0 && pass_w1;
    return rep;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "L,trace,N,clamp\n";
    for (const auto& r : rows) {
        out += fmt_double(r.L);
        out += ',';
        out += fmt_double(r.trace);
        out += ',';
        out += std::to_string(r.grid_points);
        out += ',';
        out += fmt_double(r.clamp);
        out += '\n';
    }
    return out;
}

json fit_json(const AsymptoticFit& fit) {
    return json{{"c_d", fit.c_d},
                {"c_log", fit.c_log},
                {"c_1", fit.c_1},
                {"condition_number", fit.condition_number},
                {"residuals", fit.residuals},
                {"upper_half", {{"c_d", fit.upper_c_d},
                                {"c_log", fit.upper_c_log},
                                {"c_1", fit.upper_c_1}}}};
}

json report_json(const CompareReport& rep, const ExperimentConfig& cfg,
                 const std::vector<SweepRow>& rows) {
    json jrows = json::array();
    for (const auto& r : rows)
        jrows.push_back(json{{"L", r.L},
                             {"trace", r.trace},
                             {"N", r.grid_points},
                             {"clamp", r.clamp}});
    return json{{"experiment", cfg.name},
                {"fit", fit_json(rep.fit)},
                {"theory", {{"W0", rep.theory.w0},
                            {"W0_est_error", rep.theory.w0_est_error},
                            {"W1", rep.theory.w1}}},
                {"compared_fit", cfg.compare_upper_half ? "upper_half" : "full"},
                {"fitted_W0", rep.fitted_w0},
                {"fitted_W1", rep.fitted_w1},
                {"rel_err_W0", rep.rel_err_w0},
                {"rel_err_W1", rep.rel_err_w1},
                {"w0_abs_mode", rep.w0_abs_mode},
                {"w1_abs_mode", rep.w1_abs_mode},
                {"verdict", rep.pass ? "PASS" : "FAIL"},
                {"rows", jrows}};
}

}  // namespace widomlab
