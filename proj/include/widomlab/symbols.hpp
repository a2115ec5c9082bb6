#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "widomlab/core.hpp"

namespace widomlab {

enum class Dependence { XiOnly, XOnly, Both };

// A matrix-valued symbol: an evaluable map (x, xi) -> n x n complex matrix
// with dependence/support/Hermiticity metadata. Symbols are immutable
// closures, not grids; discretization happens in the operators module, so one
// symbol serves every L and grid resolution. Smoothness is declared, not
// checked; Hermiticity and support declarations are verified by sampling.
class MatrixSymbol {
  public:
    using EvalFn = std::function<Matrix(const Point& x, const Point& xi)>;

    MatrixSymbol(int dim_d, int dim_n, EvalFn eval, Dependence dependence,
                 bool hermitian, std::optional<Box> support_xi = std::nullopt,
                 bool constant = false);

    Matrix operator()(const Point& x, const Point& xi) const { return eval_(x, xi); }

    int dim_d() const { return dim_d_; }
    int dim_n() const { return dim_n_; }
    Dependence dependence() const { return dependence_; }
    bool hermitian() const { return hermitian_; }
    const std::optional<Box>& support_xi() const { return support_xi_; }
    // constant symbols take the same value everywhere; enables closed-form
    // kernels and single-call frak_U caching
    bool constant() const { return constant_; }
    bool is_zero() const;

  private:
    int dim_d_;
    int dim_n_;
    EvalFn eval_;
    Dependence dependence_;
    bool hermitian_;
    std::optional<Box> support_xi_;
    bool constant_;
};

// Pointwise self-adjoint part (A + A*)/2; dependence and support preserved.
MatrixSymbol real_part(const MatrixSymbol& a);

// Pointwise matrix power, p >= 1. p = 0 is rejected; use an explicit identity
// symbol instead, keeping h(0)=0 conventions visible.
MatrixSymbol symbol_power(const MatrixSymbol& a, int p);

// Matrix-trace reduction to a scalar (1x1) symbol.
MatrixSymbol scalar_trace(const MatrixSymbol& a);

// Samples eval at deterministic pseudo-random points and checks the declared
// metadata (Hermiticity to 1e-12, xi-only/x-only consistency, support box).
// Throws on violation.
void verify_symbol_metadata(const MatrixSymbol& a, int n_samples = 32,
                            unsigned seed = 12345);

// ---- Built-in catalog ----

MatrixSymbol constant_symbol(int dim_d, const Matrix& m);
MatrixSymbol zero_symbol(int dim_d, int dim_n);

// C-infinity plateau cutoff: 1 on [0, inf) side of the transition; built from
// exp(-1/u). Exposed for tests and kernel oracles.
double smooth_step(double u);

// M * chi(xi) with chi a smooth plateau: chi = 1 on `plateau`, rolls off to 0
// at the edges of `window`, identically 0 outside. The declared momentum
// support is `window`.
MatrixSymbol windowed_constant(int dim_d, const Matrix& m, const Box& window,
                               const Box& plateau);

// Separable product f(x) * M * g(xi).
MatrixSymbol separable_symbol(int dim_d, std::function<double(const Point&)> f_x,
                              const Matrix& m, std::function<double(const Point&)> g_xi,
                              std::optional<Box> support_xi, bool hermitian_fg_real);

// Smooth bump localized in both variables: M * bump((x-cx)/wx) * bump((xi-cxi)/wxi).
MatrixSymbol bump_symbol(int dim_d, const Matrix& m, const Point& center_x,
                         double width_x, const Point& center_xi, double width_xi);

// Non-commuting constant Hermitian pair ([[0,1],[1,0]], diag(1,0)) for the
// two-sided jump coefficient tests.
std::pair<MatrixSymbol, MatrixSymbol> noncommuting_pair(int dim_d);

}  // namespace widomlab
