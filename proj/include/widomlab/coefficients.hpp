#pragma once

#include "widomlab/core.hpp"
#include "widomlab/domains.hpp"
#include "widomlab/symbols.hpp"
#include "widomlab/test_functions.hpp"

namespace widomlab {

struct CoefficientResult {
    double value = 0.0;
    double est_error = 0.0;
    long nodes_used = 0;
};

// Hermitian functional calculus: U diag(h(lambda_k)) U*. Inputs within 1e-10
// of Hermitian are symmetrized, anything worse is rejected.
Matrix matrix_function(const TestFunction& h, const Matrix& m);

// Volume coefficient: (2 pi)^{-d} Int_Lambda Int_Gamma b(x, xi) dxi dx.
// For a complement region the symbol must declare compact momentum support;
// the xi-integration is then restricted to support \ Gamma. The error
// estimate comes from resolution doubling.
CoefficientResult w0(const MatrixSymbol& b, const Domain& lambda,
                     const GammaRegion& gamma, int resolution);

// Boundary coefficient. d=1: plain sum of b over the boundary-point pairs.
// d>=2: (2 pi)^{-(d-1)} double sum with the |n_Lambda . n_Gamma| factor.
CoefficientResult w1(const MatrixSymbol& b, const BoundaryQuadrature& d_lambda,
                     const BoundaryQuadrature& d_gamma);

// Singular coefficient integrals over t in (0,1), evaluated by tanh-sinh
// quadrature which never touches the endpoints.
double frak_A(const TestFunction& g, double b_value);
double frak_U(const TestFunction& g, const Matrix& b1, const Matrix& b2);

// Pointwise evaluation of frak_U on the self-adjoint parts of two symbol
// fields; feeds the w1 surface sum.
double frak_U_symbolfield(const TestFunction& g, const MatrixSymbol& a1,
                          const MatrixSymbol& a2, const Point& x, const Point& xi);

// w1(frak_U(g; Re A1, Re A2); dLambda, dGamma). For constant symbol pairs the
// frak_U value is computed once; otherwise the double loop over boundary node
// pairs runs in parallel.
CoefficientResult w1_jump(const TestFunction& g, const MatrixSymbol& a1,
                          const MatrixSymbol& a2, const BoundaryQuadrature& d_lambda,
                          const BoundaryQuadrature& d_gamma);

// Scalar symbol (x, xi) -> tr h(Re A(x, xi)); support and dependence metadata
// carry over (h(0) = 0 keeps the support valid).
MatrixSymbol compose_trace(const TestFunction& h, const MatrixSymbol& a);

}  // namespace widomlab
