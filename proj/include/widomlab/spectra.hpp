#pragma once

#include <vector>

#include "widomlab/core.hpp"
#include "widomlab/operators.hpp"
#include "widomlab/test_functions.hpp"

namespace widomlab {

struct TraceResult {
    double value = 0.0;
    double clamp_total = 0.0;  // summed magnitude of eigenvalue clamping
    int clamped_count = 0;
    int n_eigenvalues = 0;
};

// tr h(op) = sum_k h(lambda_k) over the full Hermitian spectrum. Eigenvalues
// outside the operator's declared physical range are clamped into the closed
// range before h is applied; the clamp magnitude is reported, never silent.
TraceResult trace_of_function(const DiscretizedOperator& op, const TestFunction& h);

// sum_m omega_m tr(op^m) by explicit matrix powers; coeffs[k] multiplies
// op^(k+1). Works for non-Hermitian operators and serves as the polynomial
// oracle for trace_of_function.
double trace_poly_direct(const DiscretizedOperator& op,
                         const std::vector<double>& coeffs);

}  // namespace widomlab
