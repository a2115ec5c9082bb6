#include "widomlab/symbols.hpp"

#include <cmath>
#include <random>

namespace widomlab {

MatrixSymbol::MatrixSymbol(int dim_d, int dim_n, EvalFn eval, Dependence dependence,
                           bool hermitian, std::optional<Box> support_xi,
                           bool constant)
    : dim_d_(dim_d),
      dim_n_(dim_n),
      eval_(std::move(eval)),
      dependence_(dependence),
      hermitian_(hermitian),
      support_xi_(std::move(support_xi)),
      constant_(constant) {
    if (dim_d_ < 1 || dim_d_ > 2) throw Error("symbol dimension d must be 1 or 2");
    if (dim_n_ < 1) throw Error("symbol matrix dimension n must be positive");
}

bool MatrixSymbol::is_zero() const {
    if (!constant_) return false;
    Point o{0.0, 0.0};
    return eval_(o, o).cwiseAbs().maxCoeff() == 0.0;
}

MatrixSymbol real_part(const MatrixSymbol& a) {
    auto f = [a](const Point& x, const Point& xi) -> Matrix {
        Matrix m = a(x, xi);
        return 0.5 * (m + m.adjoint()).eval();
    };
    return MatrixSymbol(a.dim_d(), a.dim_n(), f, a.dependence(), true, a.support_xi(),
                        a.constant());
}

MatrixSymbol symbol_power(const MatrixSymbol& a, int p) {
    if (p < 1)
        throw Error("symbol_power: p = 0 rejected; use an explicit identity symbol");
    auto f = [a, p](const Point& x, const Point& xi) -> Matrix {
        Matrix m = a(x, xi);
        Matrix out = m;
        for (int k = 1; k < p; ++k) out = (out * m).eval();
        return out;
    };
    return MatrixSymbol(a.dim_d(), a.dim_n(), f, a.dependence(), a.hermitian(),
                        a.support_xi(), a.constant());
}

MatrixSymbol scalar_trace(const MatrixSymbol& a) {
    auto f = [a](const Point& x, const Point& xi) -> Matrix {
        Matrix out(1, 1);
        out(0, 0) = a(x, xi).trace();
        return out;
    };
    return MatrixSymbol(a.dim_d(), 1, f, a.dependence(), a.hermitian(), a.support_xi(),
                        a.constant());
}

void verify_symbol_metadata(const MatrixSymbol& a, int n_samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(-3.0, 3.0);
    auto draw = [&]() -> Point {
        Point p{unit(rng), 0.0};
        if (a.dim_d() > 1) p[1] = unit(rng);
        return p;
    };
    Point x0 = draw(), xi0 = draw();
    for (int s = 0; s < n_samples; ++s) {
        Point x = draw(), xi = draw();
        Matrix m = a(x, xi);
        if (m.rows() != a.dim_n() || m.cols() != a.dim_n())
            throw Error("symbol eval returned wrong matrix dimension");
        if (a.hermitian() && max_hermitian_deviation(m) > 1e-12)
            throw Error("symbol declared hermitian but samples are not");
        if (a.dependence() == Dependence::XiOnly) {
            if ((a(x0, xi) - m).cwiseAbs().maxCoeff() > 1e-12)
                throw Error("symbol declared xi-only but depends on x");
        }
        if (a.dependence() == Dependence::XOnly) {
            if ((a(x, xi0) - m).cwiseAbs().maxCoeff() > 1e-12)
                throw Error("symbol declared x-only but depends on xi");
        }
        if (a.support_xi() && !a.support_xi()->contains(xi) &&
            m.cwiseAbs().maxCoeff() != 0.0)
            throw Error("symbol nonzero outside the declared momentum support");
    }
}

MatrixSymbol constant_symbol(int dim_d, const Matrix& m) {
    bool herm = max_hermitian_deviation(m) <= 1e-14;
    Matrix copy = m;
    auto f = [copy](const Point&, const Point&) -> Matrix { return copy; };
    return MatrixSymbol(dim_d, static_cast<int>(m.rows()), f, Dependence::XiOnly, herm,
                        std::nullopt, true);
}

MatrixSymbol zero_symbol(int dim_d, int dim_n) {
    Matrix z = Matrix::Zero(dim_n, dim_n);
    auto f = [z](const Point&, const Point&) -> Matrix { return z; };
    // empty support: a degenerate box nowhere satisfied would be awkward, so
    // declare a tiny box; the zero symbol is special-cased by the operators
    Box supp = Box::interval(0.0, 1e-300);
    supp.dim = dim_d;
    if (dim_d > 1) {
        supp.lo[1] = 0.0;
        supp.hi[1] = 1e-300;
    }
    return MatrixSymbol(dim_d, dim_n, f, Dependence::XiOnly, true, supp, true);
}

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

namespace {

double plateau_factor(double v, double plat_lo, double plat_hi, double win_lo,
                      double win_hi) {
    if (v >= plat_lo && v <= plat_hi) return 1.0;
    if (v <= win_lo || v >= win_hi) return 0.0;
    if (v < plat_lo) return smooth_step((v - win_lo) / (plat_lo - win_lo));
    return smooth_step((win_hi - v) / (win_hi - plat_hi));
}

}  // namespace

MatrixSymbol windowed_constant(int dim_d, const Matrix& m, const Box& window,
                               const Box& plateau) {
    if (!window.covers(plateau))
        throw Error("windowed_constant: plateau must lie inside the window");
    bool herm = max_hermitian_deviation(m) <= 1e-14;
    Matrix copy = m;
    Box win = window, plat = plateau;
    auto f = [copy, win, plat, dim_d](const Point&, const Point& xi) -> Matrix {
        double chi = 1.0;
        for (int k = 0; k < dim_d; ++k)
            chi *= plateau_factor(xi[k], plat.lo[k], plat.hi[k], win.lo[k], win.hi[k]);
        return (chi * copy).eval();
    };
    return MatrixSymbol(dim_d, static_cast<int>(m.rows()), f, Dependence::XiOnly, herm,
                        window, false);
}

MatrixSymbol separable_symbol(int dim_d, std::function<double(const Point&)> f_x,
                              const Matrix& m, std::function<double(const Point&)> g_xi,
                              std::optional<Box> support_xi, bool hermitian_fg_real) {
    bool herm = hermitian_fg_real && max_hermitian_deviation(m) <= 1e-14;
    Matrix copy = m;
    auto f = [copy, f_x, g_xi](const Point& x, const Point& xi) -> Matrix {
        return (f_x(x) * g_xi(xi) * copy).eval();
    };
    return MatrixSymbol(dim_d, static_cast<int>(m.rows()), f, Dependence::Both, herm,
                        std::move(support_xi), false);
}

namespace {

double bump(double u) {
    // exp(1 - 1/(1-u^2)) on (-1,1), 0 outside; peak value 1
    double u2 = u * u;
    if (u2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u2));
}

}  // namespace

MatrixSymbol bump_symbol(int dim_d, const Matrix& m, const Point& center_x,
                         double width_x, const Point& center_xi, double width_xi) {
    if (width_x <= 0 || width_xi <= 0) throw Error("bump_symbol: widths must be positive");
    bool herm = max_hermitian_deviation(m) <= 1e-14;
    Matrix copy = m;
    auto f = [=](const Point& x, const Point& xi) -> Matrix {
        double fx = 1.0, gxi = 1.0;
        for (int k = 0; k < dim_d; ++k) {
            fx *= bump((x[k] - center_x[k]) / width_x);
            gxi *= bump((xi[k] - center_xi[k]) / width_xi);
        }
        return (fx * gxi * copy).eval();
    };
    Box supp;
    supp.dim = dim_d;
    for (int k = 0; k < dim_d; ++k) {
        supp.lo[k] = center_xi[k] - width_xi;
        supp.hi[k] = center_xi[k] + width_xi;
    }
    return MatrixSymbol(dim_d, static_cast<int>(m.rows()), f, Dependence::Both, herm,
                        supp, false);
}

std::pair<MatrixSymbol, MatrixSymbol> noncommuting_pair(int dim_d) {
    Matrix sx(2, 2), pu(2, 2);
    sx << 0, 1, 1, 0;
    pu << 1, 0, 0, 0;
    return {constant_symbol(dim_d, sx), constant_symbol(dim_d, pu)};
}

}  // namespace widomlab
