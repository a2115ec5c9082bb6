#pragma once

#include <functional>
#include <string>
#include <vector>

#include "widomlab/core.hpp"

namespace widomlab {

enum class FnClass { Polynomial, Analytic, Smooth, Hoelder };

// A scalar test function h with class tag and h(0) = 0 normalization. The
// normalization is automatic: construction subtracts h(0) and records the
// shift so callers can log it.
class TestFunction {
  public:
    TestFunction(std::string name, FnClass cls, std::function<double(double)> raw,
                 std::vector<double> poly_coeffs = {},
                 std::vector<double> singular_set = {}, double hoelder_gamma = 1.0);

    double operator()(double t) const { return raw_(t) - shift_; }

    const std::string& name() const { return name_; }
    FnClass fn_class() const { return cls_; }
    bool is_polynomial() const { return cls_ == FnClass::Polynomial; }
    // coefficients indexed from degree 1 (no constant term)
    const std::vector<double>& poly_coeffs() const { return poly_coeffs_; }
    const std::vector<double>& singular_set() const { return singular_set_; }
    double hoelder_gamma() const { return hoelder_gamma_; }
    double normalization_shift() const { return shift_; }

  private:
    std::string name_;
    FnClass cls_;
    std::function<double(double)> raw_;
    double shift_;
    std::vector<double> poly_coeffs_;
    std::vector<double> singular_set_;
    double hoelder_gamma_;
};

// ---- Catalog ----

TestFunction identity_fn();
TestFunction monomial(int p);
// coeffs[k] multiplies t^(k+1); a leading constant is not representable here
TestFunction polynomial_fn(std::vector<double> coeffs_from_degree_one);
// h_alpha(t) = ln(t^alpha + (1-t)^alpha)/(1-alpha), alpha in (0,1) u (1,inf);
// Hoelder with singular set {0,1}
TestFunction renyi(double alpha);
// -t ln t - (1-t) ln(1-t), the alpha -> 1 limit, h(0) = h(1) = 0
TestFunction von_neumann();
// exp(scale*t) - 1
TestFunction analytic_exp(double scale);
// compactly supported C-infinity bump centered away from its zeros
TestFunction smooth_bump_fn(double center, double width);

}  // namespace widomlab
