#include "widomlab/operators.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "widomlab/quadrature.hpp"

namespace widomlab {

namespace {

// 8-point Gauss-Legendre on [-1,1] (shared with quadrature.cpp by value).
constexpr double kGlX[4] = {0.1834346424956498, 0.5255324099163290,
                            0.7966664774136267, 0.9602898564975363};
constexpr double kGlW[4] = {0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};

template <typename Fn>
Matrix gl_composite_matrix(const Fn& f, double a, double b, int panels, int n) {
    Matrix total = Matrix::Zero(n, n);
    if (panels < 1) panels = 1;
    double step = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * step;
        double half = 0.5 * step;
        for (int k = 0; k < 4; ++k) {
            total += (half * kGlW[k]) * (f(c + half * kGlX[k]) + f(c - half * kGlX[k]));
        }
    }
    return total;
}

// 1D interval factor of the indicator kernel: (L/2pi) Int_a^b e^{i L xi dx} dxi.
Complex interval_factor(double a, double b, double L, double dx) {
    double c = 0.5 * (a + b);
    double rho = 0.5 * (b - a);
    if (dx == 0.0) return Complex(L * rho / M_PI, 0.0);
    return std::polar(1.0, L * c * dx) * (std::sin(L * rho * dx) / (M_PI * dx));
}

Complex indicator_kernel_closed(const Domain& gamma, double L, const Point& delta) {
    switch (gamma.kind()) {
        case DomainKind::Interval:
            return interval_factor(gamma.interval_a(), gamma.interval_b(), L, delta[0]);
        case DomainKind::BoxKind: {
            const Box& b = gamma.box_data();
            return interval_factor(b.lo[0], b.hi[0], L, delta[0]) *
                   interval_factor(b.lo[1], b.hi[1], L, delta[1]);
        }
        case DomainKind::Disk: {
            double r = gamma.disk_radius();
            double nd = std::hypot(delta[0], delta[1]);
            Complex phase =
                std::polar(1.0, L * (gamma.disk_center()[0] * delta[0] +
                                     gamma.disk_center()[1] * delta[1]));
            if (nd == 0.0) return phase * (L * L * r * r / (4.0 * M_PI));
            return phase * (L * r * std::cyl_bessel_j(1, L * r * nd) / (2.0 * M_PI * nd));
        }
        default:
            throw Error("no closed-form kernel for this domain kind");
    }
}

using ScalarKernelFn = std::function<Complex(const Point&)>;
using BlockKernelFn = std::function<Matrix(const Point&)>;

ScalarKernelFn make_indicator_kernel(const Domain& gamma, double L, int xi_res) {
    if (gamma.kind() != DomainKind::Polygon) {
        return [gamma, L](const Point& d) { return indicator_kernel_closed(gamma, L, d); };
    }
    auto nodes = gamma.volume_quadrature(std::max(xi_res, 32));
    double norm = std::pow(L / (2.0 * M_PI), gamma.dim());
    return [nodes = std::move(nodes), L, norm](const Point& d) {
        Complex s = 0.0;
        for (const auto& q : nodes)
            s += q.weight * std::polar(1.0, L * (q.point[0] * d[0] + q.point[1] * d[1]));
        return norm * s;
    };
}

// kappa(delta) = (L/2pi)^d Int_region A(xi) e^{i L xi delta} dxi for a
// xi-only symbol.
BlockKernelFn make_multiplier_kernel(const MatrixSymbol& a, const Domain& region,
                                     double L, int xi_res) {
    const int n = a.dim_n();
    if (a.constant()) {
        Point o{0.0, 0.0};
        Matrix m = a(o, o);
        auto scalar = make_indicator_kernel(region, L, xi_res);
        return [scalar = std::move(scalar), m](const Point& d) -> Matrix {
            return scalar(d) * m;
        };
    }
    const int d = region.dim();
    const double norm = std::pow(L / (2.0 * M_PI), d);
    const int min_panels = std::max(4, xi_res / 8);
    Point o{0.0, 0.0};
    if (d == 1 && region.kind() == DomainKind::Interval) {
        double lo = region.interval_a(), hi = region.interval_b();
        return [a, lo, hi, L, norm, min_panels, n, o](const Point& delta) -> Matrix {
            int panels = oscillation_panels(L * std::abs(delta[0]), hi - lo, min_panels);
            auto f = [&](double xi) -> Matrix {
                return (std::polar(1.0, L * xi * delta[0]) * a(o, {xi, 0.0})).eval();
            };
            return norm * gl_composite_matrix(f, lo, hi, panels, n);
        };
    }
    if (d == 2 && region.kind() == DomainKind::BoxKind) {
        Box b = region.box_data();
        return [a, b, L, norm, min_panels, n, o](const Point& delta) -> Matrix {
            int px = oscillation_panels(L * std::abs(delta[0]), b.extent(0), min_panels);
            int py = oscillation_panels(L * std::abs(delta[1]), b.extent(1), min_panels);
            auto outer = [&](double xi0) -> Matrix {
                auto inner = [&](double xi1) -> Matrix {
                    return (std::polar(1.0, L * (xi0 * delta[0] + xi1 * delta[1])) *
                            a(o, {xi0, xi1}))
                        .eval();
                };
                return gl_composite_matrix(inner, b.lo[1], b.hi[1], py, n);
            };
            return norm * gl_composite_matrix(outer, b.lo[0], b.hi[0], px, n);
        };
    }
    // disk/polygon with varying symbol: quadrature over cached region nodes
    auto nodes = region.volume_quadrature(std::max(xi_res, 32));
    return [a, nodes = std::move(nodes), L, norm, n, o](const Point& delta) -> Matrix {
        Matrix s = Matrix::Zero(n, n);
        for (const auto& q : nodes)
            s += (q.weight *
                  std::polar(1.0, L * (q.point[0] * delta[0] + q.point[1] * delta[1]))) *
                 a(o, q.point);
        return s * norm;
    };
}

// Difference table over the grid lattice; kappa depends only on x - y.
Matrix assemble_translation_invariant(const GridSpec& grid, int n,
                                      const BlockKernelFn& kappa) {
    const int N = grid.points_per_axis;
    const int tx = 2 * N - 1;
    const int ty = grid.dim == 1 ? 1 : 2 * N - 1;
    const double w = grid.node_weight();
    std::vector<Matrix> table(static_cast<std::size_t>(tx) * ty);
    parallel_for(table.size(), [&](std::size_t idx) {
        int di = static_cast<int>(idx) / ty - (N - 1);
        int dj = grid.dim == 1 ? 0 : static_cast<int>(idx) % ty - (N - 1);
        Point delta{di * grid.spacing[0], grid.dim == 1 ? 0.0 : dj * grid.spacing[1]};
        table[idx] = (w * kappa(delta)).eval();
    });
    const std::size_t m = grid.size();
    Matrix out(m * n, m * n);
    parallel_for(m, [&](std::size_t i) {
        for (std::size_t j = 0; j < m; ++j) {
            int di = grid.lattice[i][0] - grid.lattice[j][0] + (N - 1);
            int dj = grid.dim == 1 ? 0 : grid.lattice[i][1] - grid.lattice[j][1] + (N - 1);
            out.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n,
                      n, n) = table[static_cast<std::size_t>(di) * ty + dj];
        }
    });
    return out;
}

Matrix lift_scalar_blocks(const Matrix& s, int n) {
    if (n == 1) return s;
    Matrix out = Matrix::Zero(s.rows() * n, s.cols() * n);
    for (Eigen::Index i = 0; i < s.rows(); ++i)
        for (Eigen::Index j = 0; j < s.cols(); ++j)
            for (int k = 0; k < n; ++k) out(i * n + k, j * n + k) = s(i, j);
    return out;
}

bool measure_hermitian(const Matrix& m) { return max_hermitian_deviation(m) <= 1e-12; }

// Clamp range from the sampled symbol range. Indicator-type spectra (inside
// [0,1]) clamp to exactly [0,1] so that entropy functions stay defined;
// anything wider keeps the sampled range with a small inflation.
std::pair<double, double> finalize_clamp_range(double lo, double hi) {
    if (lo >= -1e-12 && hi <= 1.0 + 1e-12) return {0.0, 1.0};
    return {lo - 1e-6, hi + 1e-6};
}

// Range of eigenvalues of Re A over samples, always including 0.
std::pair<double, double> symbol_range(const MatrixSymbol& a, const GridSpec& grid,
                                       const Box& window) {
    double lo = 0.0, hi = 0.0;
    auto account = [&](const Matrix& m) {
        Matrix re = 0.5 * (m + m.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(re, Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues().minCoeff());
        hi = std::max(hi, es.eigenvalues().maxCoeff());
    };
    Point o{0.0, 0.0};
    if (a.constant()) {
        account(a(o, o));
        return {lo, hi};
    }
    const int sx = 8, sxi = 24;
    for (int i = 0; i < sx; ++i) {
        Point x = grid.nodes.empty()
                      ? o
                      : grid.nodes[(i * grid.nodes.size()) / sx];
        for (int j = 0; j < sxi; ++j) {
            Point xi{window.lo[0] + (j + 0.5) * window.extent(0) / sxi, 0.0};
            if (window.dim > 1)
                xi[1] = window.lo[1] + ((j * 7) % sxi + 0.5) * window.extent(1) / sxi;
            account(a(x, xi));
        }
    }
    return {lo, hi};
}

Box derive_window(const MatrixSymbol& a, const GammaRegion& gamma) {
    Box gbox = gamma.domain.bounding_box();
    if (gamma.complement) {
        if (!a.support_xi()) throw Error("trace-class configuration violated");
        return Box::hull(gbox, *a.support_xi());
    }
    if (a.support_xi()) return Box::hull(gbox, *a.support_xi());
    return gbox;
}

DiscretizedOperator zero_operator(const Domain& lambda, double L, const GridSpec& grid,
                                  int n, Provenance prov) {
    DiscretizedOperator op;
    (void)lambda;
    op.matrix = Matrix::Zero(grid.size() * n, grid.size() * n);
    op.L = L;
    op.grid = grid;
    op.dim_n = n;
    op.hermitian = true;
    op.provenance = prov;
    op.spectral_range = finalize_clamp_range(0.0, 0.0);
    return op;
}

// Multiplier sandwich for xi-only symbols: 1_Lambda Op_L(A 1_region) 1_Lambda,
// with the complement realized as window-kernel minus Gamma-kernel.
Matrix multiplier_sandwich(const MatrixSymbol& a, const GammaRegion& gamma,
                           const Box& window, double L, const GridSpec& grid,
                           int xi_res) {
    const int n = a.dim_n();
    auto k_gamma = make_multiplier_kernel(a, gamma.domain, L, xi_res);
    if (!gamma.complement)
        return assemble_translation_invariant(grid, n, k_gamma);
    auto k_window = make_multiplier_kernel(a, Domain::box(window), L, xi_res);
    BlockKernelFn diff = [k_window = std::move(k_window),
                          k_gamma = std::move(k_gamma)](const Point& d) -> Matrix {
        return k_window(d) - k_gamma(d);
    };
    return assemble_translation_invariant(grid, n, diff);
}

DiscretizedOperator build_sandwich(const MatrixSymbol& a, const Domain& lambda,
                                   const GammaRegion& gamma, double L,
                                   const GridSpec& grid, int xi_res, bool symmetrized) {
    if (a.dim_d() != lambda.dim() || lambda.dim() != gamma.domain.dim())
        throw Error("symbol/domain dimension mismatch");
    const int n = a.dim_n();
    Provenance prov = symmetrized ? Provenance::SL : Provenance::TL;
    if (a.is_zero()) return zero_operator(lambda, L, grid, n, prov);

    Box window = derive_window(a, gamma);
    MatrixSymbol eff = symmetrized ? real_part(a) : a;

    DiscretizedOperator op;
    op.L = L;
    op.grid = grid;
    op.dim_n = n;
    op.provenance = prov;

    if (eff.dependence() == Dependence::XiOnly) {
        // momentum factors commute with the symbol: single multiplier sandwich
        op.matrix = multiplier_sandwich(eff, gamma, window, L, grid, xi_res);
    } else {
        DiscretizedOperator kg = kernel_indicator(gamma.domain, L, grid, xi_res);
        Matrix gamma_eff = kg.matrix;
        if (gamma.complement) {
            DiscretizedOperator kw =
                kernel_indicator(Domain::box(window), L, grid, xi_res);
            gamma_eff = kw.matrix - kg.matrix;
        }
        Matrix mid = kernel_symbol(eff, L, grid, window, xi_res).matrix;
        if (symmetrized) mid = 0.5 * (mid + mid.adjoint()).eval();
        Matrix lifted = lift_scalar_blocks(gamma_eff, n);
        op.matrix = lifted * mid * lifted;
    }

    if (symmetrized) {
        op.matrix = 0.5 * (op.matrix + op.matrix.adjoint()).eval();
        op.hermitian = true;
        auto range = symbol_range(eff, grid, window);
        op.spectral_range = finalize_clamp_range(range.first, range.second);
    } else {
        op.hermitian = measure_hermitian(op.matrix);
    }
    return op;
}

}  // namespace

GridSpec make_grid(const Domain& lambda, int points_per_axis) {
    if (points_per_axis < 1) throw Error("grid requires at least one point per axis");
    GridSpec g;
    g.dim = lambda.dim();
    g.points_per_axis = points_per_axis;
    g.cell = lambda.bounding_box();
    g.spacing[0] = g.cell.extent(0) / points_per_axis;
    if (g.dim > 1) g.spacing[1] = g.cell.extent(1) / points_per_axis;
    const int N = points_per_axis;
    if (g.dim == 1) {
        for (int i = 0; i < N; ++i) {
            Point p{g.cell.lo[0] + (i + 0.5) * g.spacing[0], 0.0};
            if (lambda.contains(p)) {
                g.nodes.push_back(p);
                g.lattice.push_back({i, 0});
            }
        }
    } else {
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                Point p{g.cell.lo[0] + (i + 0.5) * g.spacing[0],
                        g.cell.lo[1] + (j + 0.5) * g.spacing[1]};
                if (lambda.contains(p)) {
                    g.nodes.push_back(p);
                    g.lattice.push_back({i, j});
                }
            }
        }
    }
    if (g.nodes.empty()) throw Error("grid has no nodes inside the domain");
    g.full_lattice =
        g.nodes.size() == static_cast<std::size_t>(std::pow(N, g.dim) + 0.5);
    return g;
}

GridSpec grid_for_scale(const Domain& lambda, double L, const GridRule& rule) {
    if (L <= 0) throw Error("scale parameter L must be positive");
    Box cell = lambda.bounding_box();
    int n = rule.min_points;
    for (int k = 0; k < lambda.dim(); ++k) {
        int nk = static_cast<int>(std::ceil(cell.extent(k) * L / rule.max_h_times_L));
        n = std::max(n, nk);
    }
    if (n > rule.max_points)
        throw Error("grid rule would exceed max_points (" + std::to_string(n) + " > " +
                    std::to_string(rule.max_points) + ")");
    return make_grid(lambda, n);
}

DiscretizedOperator kernel_indicator(const Domain& gamma, double L,
                                     const GridSpec& grid, int xi_res) {
    if (gamma.dim() != grid.dim) throw Error("kernel_indicator: dimension mismatch");
    if (L <= 0) throw Error("kernel_indicator: L must be positive");
    DiscretizedOperator op;
    op.L = L;
    op.grid = grid;
    op.dim_n = 1;
    op.provenance = Provenance::RawKernel;
    auto kfn = make_indicator_kernel(gamma, L, xi_res);
    BlockKernelFn block = [&kfn](const Point& d) -> Matrix {
        Matrix m(1, 1);
        m(0, 0) = kfn(d);
        return m;
    };
    op.matrix = assemble_translation_invariant(grid, 1, block);
    op.hermitian = true;
    op.spectral_range = std::make_pair(0.0, 1.0);
    return op;
}

DiscretizedOperator kernel_symbol(const MatrixSymbol& a, double L, const GridSpec& grid,
                                  const Box& window, int xi_res) {
    if (a.dim_d() != grid.dim) throw Error("kernel_symbol: dimension mismatch");
    const int n = a.dim_n();
    DiscretizedOperator op;
    op.L = L;
    op.grid = grid;
    op.dim_n = n;
    op.provenance = Provenance::RawKernel;

    if (a.dependence() == Dependence::XiOnly) {
        auto kappa = make_multiplier_kernel(a, Domain::box(window), L, xi_res);
        op.matrix = assemble_translation_invariant(grid, n, kappa);
    } else {
        // left quantization: the symbol is evaluated at the output variable
        const double w = grid.node_weight();
        const double norm = std::pow(L / (2.0 * M_PI), grid.dim);
        const int min_panels = std::max(4, xi_res / 8);
        const std::size_t m = grid.size();
        op.matrix.resize(m * n, m * n);
        parallel_for(m, [&](std::size_t i) {
            const Point& x = grid.nodes[i];
            for (std::size_t j = 0; j < m; ++j) {
                Point delta = sub(x, grid.nodes[j]);
                Matrix block;
                if (grid.dim == 1) {
                    int panels =
                        oscillation_panels(L * std::abs(delta[0]), window.extent(0),
                                           min_panels);
                    auto f = [&](double xi) -> Matrix {
                        return (std::polar(1.0, L * xi * delta[0]) * a(x, {xi, 0.0}))
                            .eval();
                    };
                    block = gl_composite_matrix(f, window.lo[0], window.hi[0], panels, n);
                } else {
                    int px = oscillation_panels(L * std::abs(delta[0]), window.extent(0),
                                                min_panels);
                    int py = oscillation_panels(L * std::abs(delta[1]), window.extent(1),
                                                min_panels);
                    auto outer = [&](double xi0) -> Matrix {
                        auto inner = [&](double xi1) -> Matrix {
                            return (std::polar(1.0,
                                               L * (xi0 * delta[0] + xi1 * delta[1])) *
                                    a(x, {xi0, xi1}))
                                .eval();
                        };
                        return gl_composite_matrix(inner, window.lo[1], window.hi[1], py,
                                                   n);
                    };
                    block = gl_composite_matrix(outer, window.lo[0], window.hi[0], px, n);
                }
                op.matrix.block(static_cast<Eigen::Index>(i) * n,
                                static_cast<Eigen::Index>(j) * n, n, n) =
                    (w * norm) * block;
            }
        });
    }
    op.hermitian = measure_hermitian(op.matrix);
    return op;
}

DiscretizedOperator kernel_symbol(const MatrixSymbol& a, double L, const GridSpec& grid,
                                  int xi_res) {
    if (!a.support_xi()) throw Error("momentum window required");
    return kernel_symbol(a, L, grid, *a.support_xi(), xi_res);
}

DiscretizedOperator build_TL(const MatrixSymbol& a, const Domain& lambda,
                             const GammaRegion& gamma, double L, const GridSpec& grid,
                             int xi_res) {
    return build_sandwich(a, lambda, gamma, L, grid, xi_res, false);
}

DiscretizedOperator build_SL(const MatrixSymbol& a, const Domain& lambda,
                             const GammaRegion& gamma, double L, const GridSpec& grid,
                             int xi_res) {
    return build_sandwich(a, lambda, gamma, L, grid, xi_res, true);
}

namespace {

DiscretizedOperator build_pair(const MatrixSymbol& a1, const MatrixSymbol& a2,
                               const Domain& lambda, const Domain& gamma, double L,
                               const GridSpec& grid, int xi_res, bool symmetrized) {
    if (a1.dim_n() != a2.dim_n()) throw Error("symbols must share matrix dimension");
    Provenance prov = symmetrized ? Provenance::GL : Provenance::DL;
    DiscretizedOperator op1 = build_sandwich(a1, lambda, GammaRegion::direct(gamma), L,
                                             grid, xi_res, symmetrized);
    op1.provenance = prov;
    if (a2.is_zero()) return op1;
    if (!a2.support_xi()) throw Error("trace-class configuration violated");
    DiscretizedOperator op2 = build_sandwich(a2, lambda, GammaRegion::complement_of(gamma),
                                             L, grid, xi_res, symmetrized);
    op1.matrix += op2.matrix;
    if (symmetrized) {
        op1.hermitian = true;
        double lo = std::min(op1.spectral_range->first, op2.spectral_range->first);
        double hi = std::max(op1.spectral_range->second, op2.spectral_range->second);
        op1.spectral_range = std::make_pair(lo, hi);
    } else {
        op1.hermitian = measure_hermitian(op1.matrix);
        op1.spectral_range.reset();
    }
    return op1;
}

}  // namespace

DiscretizedOperator build_DL(const MatrixSymbol& a1, const MatrixSymbol& a2,
                             const Domain& lambda, const Domain& gamma, double L,
                             const GridSpec& grid, int xi_res) {
    return build_pair(a1, a2, lambda, gamma, L, grid, xi_res, false);
}

DiscretizedOperator build_GL(const MatrixSymbol& a1, const MatrixSymbol& a2,
                             const Domain& lambda, const Domain& gamma, double L,
                             const GridSpec& grid, int xi_res) {
    return build_pair(a1, a2, lambda, gamma, L, grid, xi_res, true);
}

void dump_operator(const DiscretizedOperator& op, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    char header[32] = {};
    std::memcpy(header, "WHOP", 4);
    auto put_u32 = [&](int offset, std::uint32_t v) {
        std::memcpy(header + offset, &v, 4);
    };
    put_u32(4, static_cast<std::uint32_t>(op.grid.dim));
    put_u32(8, static_cast<std::uint32_t>(op.dim_n));
    put_u32(12, static_cast<std::uint32_t>(op.grid.size()));
    put_u32(16, static_cast<std::uint32_t>(op.provenance));
    std::memcpy(header + 20, &op.L, 8);
    put_u32(28, static_cast<std::uint32_t>(op.matrix.rows()));
    out.write(header, 32);
    const Eigen::Index rows = op.matrix.rows();
    std::vector<float> row(static_cast<std::size_t>(rows) * 2);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < rows; ++j) {
            row[2 * j] = static_cast<float>(op.matrix(i, j).real());
            row[2 * j + 1] = static_cast<float>(op.matrix(i, j).imag());
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw Error("failed writing " + path);
}

DiscretizedOperator load_operator(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    char header[32];
    in.read(header, 32);
    if (!in || std::memcmp(header, "WHOP", 4) != 0)
        throw Error(path + " is not a WHOP operator dump");
    auto get_u32 = [&](int offset) {
        std::uint32_t v;
        std::memcpy(&v, header + offset, 4);
        return v;
    };
    DiscretizedOperator op;
    op.grid.dim = static_cast<int>(get_u32(4));
    op.dim_n = static_cast<int>(get_u32(8));
    op.grid.points_per_axis = 0;  // fixture: grid nodes are not serialized
    op.provenance = static_cast<Provenance>(get_u32(16));
    std::memcpy(&op.L, header + 20, 8);
    Eigen::Index rows = static_cast<Eigen::Index>(get_u32(28));
    op.matrix.resize(rows, rows);
    std::vector<float> row(static_cast<std::size_t>(rows) * 2);
    for (Eigen::Index i = 0; i < rows; ++i) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!in) throw Error("truncated operator dump " + path);
        for (Eigen::Index j = 0; j < rows; ++j)
            op.matrix(i, j) = Complex(row[2 * j], row[2 * j + 1]);
    }
    op.hermitian = max_hermitian_deviation(op.matrix) <= 1e-6;  // float32 fixture
    return op;
}

}  // namespace widomlab
