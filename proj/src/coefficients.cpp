#include "widomlab/coefficients.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "widomlab/eig.hpp"
#include "widomlab/quadrature.hpp"

namespace widomlab {

Matrix matrix_function(const TestFunction& h, const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("matrix_function requires a square matrix");
    double dev = max_hermitian_deviation(m);
    if (dev > 1e-10) throw Error("matrix not Hermitian");
    Matrix sym = 0.5 * (m + m.adjoint());
    EigenSystem es = hermitian_eigensystem(sym);
    RealVector hv(es.values.size());
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        double v = h(es.values[k]);
        if (std::isnan(v))
            throw Error("test function undefined at eigenvalue " +
                        std::to_string(es.values[k]));
        hv[k] = v;
    }
    return es.vectors * hv.asDiagonal() * es.vectors.adjoint();
}

namespace {

Complex symbol_scalar(const MatrixSymbol& b, const Point& x, const Point& xi) {
    return b(x, xi)(0, 0);
}

// Integral of b over lambda x region at one resolution.
double w0_pass(const MatrixSymbol& b, const Domain& lambda, const GammaRegion& gamma,
               int resolution, long& nodes) {
    const int d = lambda.dim();
    // xi nodes
    std::vector<VolumeNode> xi_nodes;
    if (!gamma.complement) {
        xi_nodes = gamma.domain.volume_quadrature(resolution);
    } else {
        if (!b.support_xi()) throw Error("non-integrable configuration");
        const Box& supp = *b.support_xi();
        if (d == 1 && gamma.domain.kind() == DomainKind::Interval) {
            // exact decomposition: support minus the interval
            double ga = gamma.domain.interval_a(), gb = gamma.domain.interval_b();
            auto add_piece = [&](double lo, double hi) {
                if (hi - lo < 1e-300) return;
                int res = std::max(2, resolution / 2);
                double h = (hi - lo) / res;
                for (int i = 0; i < res; ++i)
                    xi_nodes.push_back({{lo + (i + 0.5) * h, 0.0}, h});
            };
            add_piece(supp.lo[0], std::min(supp.hi[0], ga));
            add_piece(std::max(supp.lo[0], gb), supp.hi[0]);
        } else {
            // filtered midpoint grid over the support box
            Domain suppdom = Domain::box(supp);
            for (const auto& node : suppdom.volume_quadrature(resolution))
                if (!gamma.domain.contains(node.point)) xi_nodes.push_back(node);
        }
    }

    double xi_weight = 0.0;
    for (const auto& n : xi_nodes) xi_weight += n.weight;

    const double norm = std::pow(2.0 * M_PI, -d);

    if (b.constant()) {
        Point o{0.0, 0.0};
        double lam_weight = lambda.volume();
        nodes += static_cast<long>(xi_nodes.size());
        return norm * std::real(symbol_scalar(b, o, o)) * lam_weight * xi_weight;
    }

    std::vector<VolumeNode> x_nodes = lambda.volume_quadrature(resolution);
    nodes += static_cast<long>(x_nodes.size() + xi_nodes.size());

    if (b.dependence() == Dependence::XiOnly) {
        double s = 0.0;
        Point o{0.0, 0.0};
        for (const auto& xn : xi_nodes)
            s += xn.weight * std::real(symbol_scalar(b, o, xn.point));
        return norm * lambda.volume() * s;
    }
    if (b.dependence() == Dependence::XOnly) {
        double s = 0.0;
        Point o{0.0, 0.0};
        for (const auto& xn : x_nodes)
            s += xn.weight * std::real(symbol_scalar(b, xn.point, o));
        return norm * s * xi_weight;
    }

    std::vector<double> partial(x_nodes.size(), 0.0);
    parallel_for(x_nodes.size(), [&](std::size_t i) {
        double s = 0.0;
        for (const auto& xn : xi_nodes)
            s += xn.weight * std::real(symbol_scalar(b, x_nodes[i].point, xn.point));
        partial[i] = x_nodes[i].weight * s;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return norm * total;
}

}  // namespace

CoefficientResult w0(const MatrixSymbol& b, const Domain& lambda,
                     const GammaRegion& gamma, int resolution) {
    if (b.dim_n() != 1) throw Error("w0 requires a scalar (1x1) symbol");
    if (resolution < 2) throw Error("w0 requires resolution >= 2");
    CoefficientResult res;
    double coarse = w0_pass(b, lambda, gamma, resolution, res.nodes_used);
    double fine = w0_pass(b, lambda, gamma, 2 * resolution, res.nodes_used);
    res.value = fine;
    res.est_error = std::abs(fine - coarse);
    if (!std::isfinite(res.value)) throw Error("non-integrable configuration");
    return res;
}

CoefficientResult w1(const MatrixSymbol& b, const BoundaryQuadrature& d_lambda,
                     const BoundaryQuadrature& d_gamma) {
    if (b.dim_n() != 1) throw Error("w1 requires a scalar (1x1) symbol");
    if (d_lambda.dim != d_gamma.dim)
        throw Error("w1: boundary quadratures have mismatched dimensions");
    const int d = d_lambda.dim;
    CoefficientResult res;
    res.nodes_used =
        static_cast<long>(d_lambda.nodes.size() * d_gamma.nodes.size());
    if (d == 1) {
        double s = 0.0;
        for (const auto& xn : d_lambda.nodes)
            for (const auto& gn : d_gamma.nodes)
                s += std::real(symbol_scalar(b, xn.point, gn.point));
        res.value = s;
        return res;
    }
    const double norm = std::pow(2.0 * M_PI, -(d - 1));
    std::vector<double> partial(d_lambda.nodes.size(), 0.0);
    parallel_for(d_lambda.nodes.size(), [&](std::size_t i) {
        const auto& xn = d_lambda.nodes[i];
        double s = 0.0;
        for (const auto& gn : d_gamma.nodes) {
            double nn = std::abs(dot(xn.normal, gn.normal, d));
            if (nn == 0.0) continue;
            s += gn.weight * nn * std::real(symbol_scalar(b, xn.point, gn.point));
        }
        partial[i] = xn.weight * s;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    res.value = norm * total;
    return res;
}

namespace {

double singular_t_integral(const std::function<double(double, double)>& f,
                           const char* what) {
    QuadResult q = tanh_sinh_01(f, 1e-10, 12);
    if (!q.converged && q.est_error > 1e-9 * std::max(1.0, std::abs(q.value))) {
        throw Error(std::string(what) + ": quadrature did not converge (value=" +
                    std::to_string(q.value) + ", est_error=" +
                    std::to_string(q.est_error) + ", nodes=" +
                    std::to_string(q.nodes_used) + ")");
    }
    return q.value / (4.0 * M_PI * M_PI);
}

}  // namespace

double frak_A(const TestFunction& g, double b_value) {
    double gb = g(b_value);
    if (std::isnan(gb))
        throw Error("frak_A: test function undefined at b = " + std::to_string(b_value));
    auto f = [&](double t, double omt) -> double {
        return (g(t * b_value) - t * gb) / (t * omt);
    };
    return singular_t_integral(f, "frak_A");
}

double frak_U(const TestFunction& g, const Matrix& b1, const Matrix& b2) {
    if (b1.rows() != b1.cols() || b2.rows() != b2.cols() || b1.rows() != b2.rows())
        throw Error("frak_U requires Hermitian matrices of equal dimension");
    if (max_hermitian_deviation(b1) > 1e-10 || max_hermitian_deviation(b2) > 1e-10)
        throw Error("matrix not Hermitian");
    Matrix h1 = 0.5 * (b1 + b1.adjoint());
    Matrix h2 = 0.5 * (b2 + b2.adjoint());
    RealVector e1 = hermitian_eigenvalues(h1);
    RealVector e2 = hermitian_eigenvalues(h2);
    // spectra of B1 t + B2 (1-t) lie in the convex hull of the joint spectral
    // interval; rounding excursions beyond it are clamped so g is only ever
    // evaluated where the theory requires it to be defined
    const double hull_lo = std::min(e1.minCoeff(), e2.minCoeff());
    const double hull_hi = std::max(e1.maxCoeff(), e2.maxCoeff());
    auto g_sum = [&](const RealVector& ev) -> double {
        double s = 0.0;
        for (Eigen::Index k = 0; k < ev.size(); ++k) {
            double v = g(std::clamp(ev[k], hull_lo, hull_hi));
            if (std::isnan(v))
                throw Error("frak_U: test function '" + g.name() +
                            "' undefined at eigenvalue " + std::to_string(ev[k]));
            s += v;
        }
        return s;
    };
    double tg1 = g_sum(e1);
    double tg2 = g_sum(e2);
    auto f = [&](double t, double omt) -> double {
        Matrix h = t * h1 + omt * h2;
        double tg = g_sum(hermitian_eigenvalues(h));
        return (tg - t * tg1 - omt * tg2) / (t * omt);
    };
    return singular_t_integral(f, "frak_U");
}

double frak_U_symbolfield(const TestFunction& g, const MatrixSymbol& a1,
                          const MatrixSymbol& a2, const Point& x, const Point& xi) {
    Matrix m1 = a1(x, xi);
    Matrix m2 = a2(x, xi);
    return frak_U(g, 0.5 * (m1 + m1.adjoint()), 0.5 * (m2 + m2.adjoint()));
}

CoefficientResult w1_jump(const TestFunction& g, const MatrixSymbol& a1,
                          const MatrixSymbol& a2, const BoundaryQuadrature& d_lambda,
                          const BoundaryQuadrature& d_gamma) {
    if (d_lambda.dim != d_gamma.dim)
        throw Error("w1_jump: boundary quadratures have mismatched dimensions");
    const int d = d_lambda.dim;
    CoefficientResult res;
    res.nodes_used =
        static_cast<long>(d_lambda.nodes.size() * d_gamma.nodes.size());

    if (a1.constant() && a2.constant()) {
        Point o{0.0, 0.0};
        double u = frak_U_symbolfield(g, a1, a2, o, o);
        if (d == 1) {
            res.value = u * static_cast<double>(d_lambda.nodes.size() *
                                                d_gamma.nodes.size());
            return res;
        }
        double geom = 0.0;
        for (const auto& xn : d_lambda.nodes)
            for (const auto& gn : d_gamma.nodes)
                geom += xn.weight * gn.weight * std::abs(dot(xn.normal, gn.normal, d));
        res.value = u * geom * std::pow(2.0 * M_PI, -(d - 1));
        return res;
    }

    std::vector<double> partial(d_lambda.nodes.size(), 0.0);
    parallel_for(d_lambda.nodes.size(), [&](std::size_t i) {
        const auto& xn = d_lambda.nodes[i];
        double s = 0.0;
        for (const auto& gn : d_gamma.nodes) {
            double factor = 1.0;
            if (d >= 2) {
                factor = std::abs(dot(xn.normal, gn.normal, d)) * xn.weight * gn.weight;
                if (factor == 0.0) continue;
            }
            s += factor * frak_U_symbolfield(g, a1, a2, xn.point, gn.point);
        }
        partial[i] = s;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    res.value = d == 1 ? total : total * std::pow(2.0 * M_PI, -(d - 1));
    return res;
}

MatrixSymbol compose_trace(const TestFunction& h, const MatrixSymbol& a) {
    auto f = [h, a](const Point& x, const Point& xi) -> Matrix {
        Matrix m = a(x, xi);
        Matrix re = 0.5 * (m + m.adjoint());
        Matrix out(1, 1);
        out(0, 0) = matrix_function(h, re).trace();
        return out;
    };
    return MatrixSymbol(a.dim_d(), 1, f, a.dependence(), true, a.support_xi(),
                        a.constant());
}

}  // namespace widomlab
