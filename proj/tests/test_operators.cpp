#include <doctest.h>

#include <cmath>
#include <cstdio>

#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"
#include "widomlab/eig.hpp"
#include "widomlab/operators.hpp"

using namespace widomlab;

namespace {

Point pt(double x) { return Point{x, 0.0}; }

Domain unit_interval() { return Domain::interval(0, 1); }
Domain gamma_sym() { return Domain::interval(-1, 1); }

}  // namespace

TEST_CASE("grid rule keeps h*L below the oscillation bound") {
    GridSpec g = grid_for_scale(unit_interval(), 100.0);
    CHECK(g.spacing[0] * 100.0 <= M_PI / 4.0 + 1e-12);
    CHECK(g.points_per_axis >= 127);
    for (const auto& n : g.nodes) CHECK(unit_interval().indicator(n) == 1);
    CHECK_THROWS_AS(grid_for_scale(unit_interval(), 1e9), Error);
}

TEST_CASE("sine kernel closed form: diagonal and zeros") {
    GridSpec g = make_grid(unit_interval(), 10);
    double L = 10.0 * M_PI;  // lattice spacing 0.1 puts x-y = pi/L on the grid
    DiscretizedOperator k = kernel_indicator(gamma_sym(), L, g);
    double h = g.spacing[0];
    CHECK(k.matrix(0, 0).real() == doctest::Approx(h * L / M_PI).epsilon(1e-14));
    CHECK(std::abs(k.matrix(1, 0)) <= 1e-14);  // sin(pi) / (pi (x-y))
    CHECK(k.hermitian);
}

TEST_CASE("asymmetric interval gamma carries the phase factor") {
    GridSpec g = make_grid(unit_interval(), 24);
    double L = 18.0;
    DiscretizedOperator k = kernel_indicator(Domain::interval(0.5, 2.5), L, g);
    double h = g.spacing[0];
    // oracle: direct Simpson of (L/2pi) Int e^{i L xi dx} dxi
    for (auto [i, j] : {std::pair{3, 17}, {0, 23}, {11, 11}}) {
        double dx = g.nodes[i][0] - g.nodes[j][0];
        Complex oracle = oracles::simpson_complex(
                             [&](double xi) { return std::polar(1.0, L * xi * dx); },
                             0.5, 2.5, 1 << 12) *
                         (L / (2 * M_PI)) * h;
        CHECK(std::abs(k.matrix(i, j) - oracle) <= 1e-10);
    }
}

TEST_CASE("2D box kernel factorizes into 1D sine kernels") {
    Domain lam2 = Domain::box(Box{{0, 0}, {1, 1}, 2});
    GridSpec g2 = make_grid(lam2, 12);
    GridSpec g1 = make_grid(unit_interval(), 12);
    double L = 9.0;
    DiscretizedOperator k2 =
        kernel_indicator(Domain::box(Box{{-1, -1}, {1, 1}, 2}), L, g2);
    DiscretizedOperator k1 = kernel_indicator(gamma_sym(), L, g1);
    Matrix kron = Eigen::kroneckerProduct(k1.matrix, k1.matrix).eval();
    CHECK((k2.matrix - kron).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("disk kernel matches a quadrature oracle") {
    Domain lam2 = Domain::box(Box{{0, 0}, {1, 1}, 2});
    GridSpec g2 = make_grid(lam2, 8);
    double L = 6.0;
    Domain disk = Domain::disk({0, 0}, 1.3);
    DiscretizedOperator k = kernel_indicator(disk, L, g2);
    double w = g2.node_weight();
    auto nodes = disk.volume_quadrature(512);
    for (auto [i, j] : {std::pair{0, 37}, {5, 60}, {11, 11}}) {
        Point d = sub(g2.nodes[i], g2.nodes[j]);
        Complex s = 0.0;
        for (const auto& q : nodes)
            s += q.weight * std::polar(1.0, L * (q.point[0] * d[0] + q.point[1] * d[1]));
        Complex oracle = s * std::pow(L / (2 * M_PI), 2) * w;
        CHECK(std::abs(k.matrix(i, j) - oracle) <= 1e-6);
    }
}

TEST_CASE("polygon momentum region: quadrature kernel converges to the box form") {
    Domain lam2 = Domain::box(Box{{0, 0}, {1, 1}, 2});
    GridSpec g2 = make_grid(lam2, 8);
    double L = 4.0;
    Domain square_poly = Domain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    Domain square_box = Domain::box(Box{{-1, -1}, {1, 1}, 2});
    DiscretizedOperator exact = kernel_indicator(square_box, L, g2);
    double coarse =
        (kernel_indicator(square_poly, L, g2, 64).matrix - exact.matrix)
            .cwiseAbs()
            .maxCoeff();
    double fine =
        (kernel_indicator(square_poly, L, g2, 256).matrix - exact.matrix)
            .cwiseAbs()
            .maxCoeff();
    CHECK(fine < coarse);
    CHECK(fine <= 1e-3);
}

TEST_CASE("kernel_symbol: constant identity reduces to the indicator kernel") {
    GridSpec g = make_grid(unit_interval(), 40);
    double L = 30.0;
    DiscretizedOperator ki = kernel_indicator(gamma_sym(), L, g);
    DiscretizedOperator ks = kernel_symbol(constant_symbol(1, Matrix::Identity(1, 1)),
                                           L, g, Box::interval(-1, 1));
    CHECK((ki.matrix - ks.matrix).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("kernel_symbol: diagonal constant symbol has zero off-diagonal blocks") {
    GridSpec g = make_grid(unit_interval(), 16);
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 3;
    DiscretizedOperator k =
        kernel_symbol(constant_symbol(1, d), 12.0, g, Box::interval(-1, 1));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            CHECK(std::abs(k.matrix(2 * i, 2 * j + 1)) == 0.0);
            CHECK(std::abs(k.matrix(2 * i + 1, 2 * j)) == 0.0);
            CHECK(std::abs(k.matrix(2 * i, 2 * j) * 1.5 -
                           k.matrix(2 * i + 1, 2 * j + 1)) <= 1e-14);
        }
}

TEST_CASE("kernel_symbol: smoothed cosine vs independent quadrature oracle") {
    GridSpec g = make_grid(unit_interval(), 32);
    double L = 10.0;
    Box window = Box::interval(-1, 1);
    Box plateau = Box::interval(-0.6, 0.6);
    // chi(xi) cos(xi): smooth, compactly supported in the window
    MatrixSymbol base =
        windowed_constant(1, Matrix::Identity(1, 1), window, plateau);
    MatrixSymbol a(1, 1,
                   [base](const Point& x, const Point& xi) {
                       return (std::cos(xi[0]) * base(x, xi)).eval();
                   },
                   Dependence::XiOnly, true, window);
    DiscretizedOperator k = kernel_symbol(a, L, g, window, 256);
    double h = g.spacing[0];
    Point o{0, 0};
    for (auto [i, j] : {std::pair{0, 31}, {7, 12}, {20, 20}, {3, 28}}) {
        double dx = g.nodes[i][0] - g.nodes[j][0];
        Complex oracle =
            oracles::simpson_complex(
                [&](double xi) {
                    return a(o, pt(xi))(0, 0) * std::polar(1.0, L * xi * dx);
                },
                -1.0, 1.0, 1 << 15) *
            (L / (2 * M_PI)) * h;
        CHECK(std::abs(k.matrix(i, j) - oracle) <= 1e-8);
    }
    CHECK_THROWS_WITH_AS(
        kernel_symbol(constant_symbol(1, Matrix::Identity(1, 1)), 10.0, g, 64),
        "momentum window required", Error);
}

TEST_CASE("build_TL: zero symbol, trace identity, volume trace") {
    GridSpec g = make_grid(unit_interval(), 800);
    double L = 200.0;
    DiscretizedOperator t0 = build_TL(zero_symbol(1, 1), unit_interval(),
                                      GammaRegion::direct(gamma_sym()), L, g);
    CHECK(t0.matrix.cwiseAbs().maxCoeff() == 0.0);

    // algebraic identity on the discretization: tr(K^2) = sum lambda_k^2
    DiscretizedOperator k = kernel_indicator(gamma_sym(), L, g);
    double tr_sq = k.matrix.cwiseProduct(k.matrix.transpose()).sum().real();
    RealVector ev = hermitian_eigenvalues(k.matrix);
    CHECK(tr_sq == doctest::Approx(ev.array().square().sum()).epsilon(1e-9));

    // xi-only symbols collapse to the multiplier sandwich, so tr T_L(1) is the
    // exact volume term L/pi
    DiscretizedOperator t1 =
        build_TL(constant_symbol(1, Matrix::Identity(1, 1)), unit_interval(),
                 GammaRegion::direct(gamma_sym()), L, g);
    CHECK(t1.trace_real() * M_PI / L == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((t1.matrix - k.matrix).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("build_SL: A=1 equals build_TL; constant Hermitian factorizes") {
    GridSpec g = make_grid(unit_interval(), 96);
    double L = 25.0;
    MatrixSymbol one = constant_symbol(1, Matrix::Identity(1, 1));
    DiscretizedOperator t = build_TL(one, unit_interval(),
                                     GammaRegion::direct(gamma_sym()), L, g);
    DiscretizedOperator s = build_SL(one, unit_interval(),
                                     GammaRegion::direct(gamma_sym()), L, g);
    CHECK((t.matrix - s.matrix).cwiseAbs().maxCoeff() == 0.0);

    Matrix m(2, 2);
    m << 1.0, Complex(0.5, -0.75), Complex(0.5, 0.75), -2.0;
    DiscretizedOperator sm = build_SL(constant_symbol(1, m), unit_interval(),
                                      GammaRegion::direct(gamma_sym()), L, g);
    Matrix factor = Eigen::kroneckerProduct(s.matrix, m).eval();
    CHECK((sm.matrix - factor).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sm.hermitian);
    CHECK(max_hermitian_deviation(sm.matrix) <= 1e-12);
}

TEST_CASE("build_SL is Hermitian for x-dependent symbols") {
    GridSpec g = make_grid(unit_interval(), 24);
    Matrix m(2, 2);
    m << 1.0, Complex(0, 1), Complex(0, -1), 0.5;
    MatrixSymbol a = bump_symbol(1, m, pt(0.5), 0.6, pt(0.0), 1.2);
    DiscretizedOperator s =
        build_SL(a, unit_interval(), GammaRegion::direct(gamma_sym()), 12.0, g, 64);
    CHECK(s.hermitian);
    CHECK(max_hermitian_deviation(s.matrix) <= 1e-12);
    RealVector ev = hermitian_eigenvalues(s.matrix);
    CHECK(ev.allFinite());
}

TEST_CASE("sine-kernel eigenvalues stay inside [0,1] up to the declared slack") {
    for (double L : {25.0, 50.0}) {
        GridSpec g = grid_for_scale(unit_interval(), L);
        DiscretizedOperator k = kernel_indicator(gamma_sym(), L, g);
        RealVector ev = hermitian_eigenvalues(k.matrix);
        CHECK(ev.minCoeff() >= -kSpectralSlack);
        CHECK(ev.maxCoeff() <= 1.0 + kSpectralSlack);
    }
}

TEST_CASE("build_DL: A2 = 0 reduces to T_L; complement needs compact support") {
    GridSpec g = make_grid(unit_interval(), 48);
    double L = 20.0;
    MatrixSymbol one = constant_symbol(1, Matrix::Identity(1, 1));
    DiscretizedOperator d = build_DL(one, zero_symbol(1, 1), unit_interval(),
                                     gamma_sym(), L, g);
    DiscretizedOperator t =
        build_TL(one, unit_interval(), GammaRegion::direct(gamma_sym()), L, g);
    CHECK((d.matrix - t.matrix).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.provenance == Provenance::DL);

    CHECK_THROWS_WITH_AS(build_DL(one, one, unit_interval(), gamma_sym(), L, g),
                         "trace-class configuration violated", Error);
}

TEST_CASE("build_GL: anti-Hermitian symbols give the zero operator") {
    GridSpec g = make_grid(unit_interval(), 32);
    Matrix anti(2, 2);
    anti << Complex(0, 1), Complex(0, 0.5), Complex(0, 0.5), Complex(0, -1);
    MatrixSymbol a1 = constant_symbol(1, anti);
    MatrixSymbol a2 = windowed_constant(1, anti, Box::interval(-2, 2),
                                        Box::interval(-1.5, 1.5));
    DiscretizedOperator gop =
        build_GL(a1, a2, unit_interval(), gamma_sym(), 15.0, g, 128);
    CHECK(gop.matrix.cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(gop.hermitian);
}

TEST_CASE("no-jump identity: D_L(A, A) equals the windowed operator exactly") {
    GridSpec g = make_grid(unit_interval(), 60);
    double L = 25.0;
    Box window = Box::interval(-2, 2);
    MatrixSymbol a = windowed_constant(1, Matrix::Identity(1, 1), window,
                                       Box::interval(-1.25, 1.25));
    DiscretizedOperator d = build_DL(a, a, unit_interval(), gamma_sym(), L, g, 128);
    DiscretizedOperator nojump = build_TL(
        a, unit_interval(), GammaRegion::direct(Domain::interval(-2, 2)), L, g, 128);
    CHECK((d.matrix - nojump.matrix).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("x-dependent sandwich: cross-term trace expansion on a 60-node grid") {
    // for x-dependent symbols the complement sandwich does not collapse:
    // K_G X K_G + K_c X K_c differs from K_w X K_w by the cross terms
    GridSpec g = make_grid(unit_interval(), 60);
    double L = 25.0;
    Box window = Box::interval(-2, 2);
    Matrix m = Matrix::Identity(1, 1);
    MatrixSymbol a = bump_symbol(1, m, pt(0.5), 0.7, pt(0.0), 2.0);
    REQUIRE(a.dependence() == Dependence::Both);

    DiscretizedOperator d = build_DL(a, a, unit_interval(), gamma_sym(), L, g, 96);
    DiscretizedOperator nojump = build_TL(
        a, unit_interval(), GammaRegion::direct(Domain::box(window)), L, g, 96);
    Matrix kg = kernel_indicator(gamma_sym(), L, g).matrix;
    Matrix kw = kernel_indicator(Domain::box(window), L, g).matrix;
    Matrix kc = kw - kg;
    Matrix ka = kernel_symbol(a, L, g, window, 96).matrix;

    Complex cross = (kg * ka * kc).trace() + (kc * ka * kg).trace();
    Complex lhs = d.matrix.trace() - nojump.matrix.trace();
    CHECK(std::abs(lhs + cross) <= 1e-10 * std::max(1.0, std::abs(cross)));
}

TEST_CASE("Nystrom refinement: trace increments shrink under N-doubling") {
    double L = 40.0;
    MatrixSymbol one = constant_symbol(1, Matrix::Identity(1, 1));
    auto trace_sq_at = [&](int n) {
        GridSpec g = make_grid(unit_interval(), n);
        DiscretizedOperator k = kernel_indicator(gamma_sym(), L, g);
        return k.matrix.cwiseProduct(k.matrix.transpose()).sum().real();
    };
    double t1 = trace_sq_at(64), t2 = trace_sq_at(128), t4 = trace_sq_at(256);
    CHECK(std::abs(t4 - t2) <= std::abs(t2 - t1));
}

TEST_CASE("uniform boundedness proxy: operator norm stable across L") {
    std::vector<MatrixSymbol> catalog = {
        windowed_constant(1, Matrix::Identity(1, 1), Box::interval(-1, 1),
                          Box::interval(-0.5, 0.5)),
        constant_symbol(1, Matrix::Identity(1, 1)),
    };
    for (const MatrixSymbol& sym : catalog) {
        auto norm_at = [&](double L) {
            GridSpec g = grid_for_scale(unit_interval(), L);
            DiscretizedOperator k = kernel_symbol(sym, L, g, Box::interval(-1, 1), 64);
            return operator_norm_estimate(k.matrix, 40);
        };
        double ref = norm_at(100.0);
        for (double L : {25.0, 50.0, 200.0, 400.0, 800.0}) {
            double s = norm_at(L);
            CHECK(s <= 1.5 * ref);
            CHECK(s >= ref / 1.5);
        }
    }
}

TEST_CASE("partial-lattice grids: disk and triangle spatial domains") {
    // Lambda not a box: the grid keeps only interior lattice nodes and the
    // difference-table assembly must still index correctly
    Domain gamma = Domain::box(Box{{-1, -1}, {1, 1}, 2});
    double L = 7.0;
    for (const Domain& lam : {Domain::disk({0.5, 0.5}, 0.5),
                              Domain::polygon({{0, 0}, {1, 0}, {0.5, 0.9}})}) {
        GridSpec g = make_grid(lam, 12);
        CHECK(g.size() < 144);  // strictly fewer than the full lattice
        for (const auto& p : g.nodes) CHECK(lam.indicator(p) == 1);
        DiscretizedOperator k = kernel_indicator(gamma, L, g);
        CHECK(k.hermitian);
        double w = g.node_weight();
        auto sine_factor = [L](double dx) {
            return dx == 0.0 ? L / M_PI : std::sin(L * dx) / (M_PI * dx);
        };
        for (std::size_t i : {std::size_t{0}, g.size() / 2, g.size() - 1}) {
            for (std::size_t j : {std::size_t{0}, g.size() - 1}) {
                Point d = sub(g.nodes[i], g.nodes[j]);
                double expect = w * sine_factor(d[0]) * sine_factor(d[1]);
                CHECK(std::abs(k.matrix(i, j) - expect) <= 1e-12);
            }
        }
    }
}

TEST_CASE("operator dump/load fixture roundtrip") {
    GridSpec g = make_grid(unit_interval(), 20);
    DiscretizedOperator k = kernel_indicator(gamma_sym(), 11.0, g);
    std::string path = "whop_fixture_test.bin";
    dump_operator(k, path);
    DiscretizedOperator back = load_operator(path);
    std::remove(path.c_str());
    CHECK(back.L == k.L);
    CHECK(back.dim_n == 1);
    CHECK(back.matrix.rows() == k.matrix.rows());
    // float32 fixture precision
    CHECK((back.matrix - k.matrix).cwiseAbs().maxCoeff() <= 1e-6);
}
