#pragma once

#include <functional>

#include "widomlab/core.hpp"

namespace widomlab {

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
    long nodes_used = 0;
    int levels = 0;
    bool converged = false;
};

// Tanh-sinh (double-exponential) rule on (0,1). The integrand receives t and
// 1-t separately; both are exact near the endpoints, which the substitution
// never evaluates. Node count doubles per level until the estimate stabilizes
// below rel_tol or the level cap (~2^16 nodes) is reached.
//
// Integrands with endpoint singularities up to t^(gamma-1), gamma > 0, and
// logarithmic singularities are handled.
QuadResult tanh_sinh_01(const std::function<double(double, double)>& f,
                        double rel_tol = 1e-10, int max_levels = 12);

// Composite Gauss-Legendre on [a,b] with `panels` equal panels of fixed order 8.
// Used for oscillatory Fourier-type integrals where the panel count is chosen
// from the oscillation frequency.
double gauss_legendre_composite(const std::function<double(double)>& f, double a,
                                double b, int panels);

Complex gauss_legendre_composite_c(const std::function<Complex(double)>& f, double a,
                                   double b, int panels);

// Panel count giving >= ~16 nodes per oscillation period of e^{i*freq*xi} on
// an interval of the given length.
int oscillation_panels(double freq, double length, int min_panels);

}  // namespace widomlab
