#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "widomlab/core.hpp"
#include "widomlab/domains.hpp"
#include "widomlab/symbols.hpp"

namespace widomlab {

// Declared slack for eigenvalues of indicator-type operators straying outside
// the symbol's range; the uniform-lattice kernels are positive-definite by
// construction, so this is solver roundoff headroom.
inline constexpr double kSpectralSlack = 1e-8;

struct GridRule {
    double max_h_times_L = M_PI / 4.0;  // >= 8 points per kernel oscillation
    int min_points = 16;
    int max_points = 8192;
};

// Uniform midpoint lattice over Lambda's bounding box, restricted to Lambda.
struct GridSpec {
    int dim = 1;
    int points_per_axis = 0;
    Box cell{};
    std::array<double, 2> spacing{0.0, 0.0};
    std::vector<Point> nodes;                   // x-major order
    std::vector<std::array<int, 2>> lattice;    // integer coordinates per node
    bool full_lattice = true;

    double node_weight() const { return dim == 1 ? spacing[0] : spacing[0] * spacing[1]; }
    std::size_t size() const { return nodes.size(); }
};

GridSpec make_grid(const Domain& lambda, int points_per_axis);
// Applies the resolution rule h*L <= max_h_times_L per axis.
GridSpec grid_for_scale(const Domain& lambda, double L, const GridRule& rule = {});

enum class Provenance { TL, SL, DL, GL, RawKernel };

struct DiscretizedOperator {
    Matrix matrix;  // (m*n) x (m*n), block row = node index * n + component
    double L = 1.0;
    GridSpec grid;
    int dim_n = 1;
    bool hermitian = false;
    Provenance provenance = Provenance::RawKernel;
    // clamp range for spectral traces, when the symbols imply one
    std::optional<std::pair<double, double>> spectral_range;

    double trace_real() const { return matrix.trace().real(); }
    std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

// Nystrom matrix of 1_Lambda Op_L(1_Gamma) 1_Lambda. Closed forms for
// interval/box (products of sine kernels) and disk (Bessel J1); polygons fall
// back to a xi-quadrature of the Fourier integral.
DiscretizedOperator kernel_indicator(const Domain& gamma, double L,
                                     const GridSpec& grid, int xi_res = 64);

// Nystrom matrix of the left-quantized symbol restricted to the grid:
// k(x,y) = (L/2pi)^d Int_window e^{i L xi (x-y)} A(x, xi) dxi.
DiscretizedOperator kernel_symbol(const MatrixSymbol& a, double L,
                                  const GridSpec& grid, const Box& window,
                                  int xi_res = 256);
// Window taken from the symbol's declared momentum support.
DiscretizedOperator kernel_symbol(const MatrixSymbol& a, double L,
                                  const GridSpec& grid, int xi_res = 256);

// Truncated Wiener-Hopf operators. For xi-only symbols the momentum factors
// commute and the build collapses to a single multiplier sandwich (the window
// of the symbol inside the Gamma-sandwich is Gamma itself); x-dependent
// symbols are built as the three-factor Nystrom product with the window
// supp_xi(A) united with Gamma.
DiscretizedOperator build_TL(const MatrixSymbol& a, const Domain& lambda,
                             const GammaRegion& gamma, double L, const GridSpec& grid,
                             int xi_res = 256);

// Symmetrized version; Hermitian by construction.
DiscretizedOperator build_SL(const MatrixSymbol& a, const Domain& lambda,
                             const GammaRegion& gamma, double L, const GridSpec& grid,
                             int xi_res = 256);

// D_L = T_L(A1; Lambda, Gamma) + T_L(A2; Lambda, Gamma^c). A2 must be
// compactly supported in momentum unless it is the zero symbol; the
// complement factor is realized through a window covering supp_xi(A2) and
// Gamma.
DiscretizedOperator build_DL(const MatrixSymbol& a1, const MatrixSymbol& a2,
                             const Domain& lambda, const Domain& gamma, double L,
                             const GridSpec& grid, int xi_res = 256);

// G_L = S_L(A1; Lambda, Gamma) + S_L(A2; Lambda, Gamma^c), Hermitian.
DiscretizedOperator build_GL(const MatrixSymbol& a1, const MatrixSymbol& a2,
                             const Domain& lambda, const Domain& gamma, double L,
                             const GridSpec& grid, int xi_res = 256);

// Binary fixture dump: 32-byte header {magic "WHOP", dims, provenance, L},
// then the matrix as row-major complex64 (float32 re/im) pairs, little-endian.
void dump_operator(const DiscretizedOperator& op, const std::string& path);
DiscretizedOperator load_operator(const std::string& path);

}  // namespace widomlab
