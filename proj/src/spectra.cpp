#include "widomlab/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "widomlab/eig.hpp"

namespace widomlab {

TraceResult trace_of_function(const DiscretizedOperator& op, const TestFunction& h) {
    if (!op.hermitian)
        throw Error("trace_of_function requires a Hermitian operator");
    RealVector ev = hermitian_eigenvalues(op.matrix);
    TraceResult res;
    res.n_eigenvalues = static_cast<int>(ev.size());
    double total = 0.0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        double lambda = ev[k];
        if (op.spectral_range) {
            double clamped =
                std::clamp(lambda, op.spectral_range->first, op.spectral_range->second);
            if (clamped != lambda) {
                res.clamp_total += std::abs(clamped - lambda);
                ++res.clamped_count;
                lambda = clamped;
            }
        }
        double v = h(lambda);
        if (std::isnan(v))
            throw Error("test function '" + h.name() + "' undefined at eigenvalue " +
                        std::to_string(lambda));
        total += v;
    }
    res.value = total;
    return res;
}

double trace_poly_direct(const DiscretizedOperator& op,
                         const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw Error("trace_poly_direct requires degree >= 1");
    const Matrix& m = op.matrix;
    double total = coeffs[0] * m.trace().real();
    if (coeffs.size() == 1) return total;
    Matrix power = m;  // holds m^(k-1) when computing the degree-k trace
    for (std::size_t k = 2; k <= coeffs.size(); ++k) {
        // tr(power * m) without materializing the product
        double tr_k = power.cwiseProduct(m.transpose()).sum().real();
        total += coeffs[k - 1] * tr_k;
        if (k < coeffs.size()) power = (power * m).eval();
    }
    return total;
}

}  // namespace widomlab
