#include "widomlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace widomlab {

namespace {

// Node of the map t(s) = sigmoid(pi*sinh(s)); weight includes dt/ds.
struct TsNode {
    double t;
    double one_minus_t;
    double weight;  // pi*cosh(s)*t*(1-t)
};

bool ts_node(double s, TsNode& out) {
    double z = M_PI * std::sinh(s);
    double t, omt;
    if (z >= 0) {
        double e = std::exp(-z);
        t = 1.0 / (1.0 + e);
        omt = e / (1.0 + e);
    } else {
        double e = std::exp(z);
        t = e / (1.0 + e);
        omt = 1.0 / (1.0 + e);
    }
    double w = M_PI * std::cosh(s) * t * omt;
    if (w == 0.0 || t == 0.0 || omt == 0.0) return false;
    out = TsNode{t, omt, w};
    return true;
}

// |s| beyond which t*(1-t) underflows and nodes contribute nothing.
constexpr double kSMax = 5.7;

}  // namespace

QuadResult tanh_sinh_01(const std::function<double(double, double)>& f,
                        double rel_tol, int max_levels) {
    QuadResult res;
    auto eval = [&](double s) -> double {
        TsNode node;
        if (!ts_node(s, node)) return 0.0;
        double v = f(node.t, node.one_minus_t);
        if (std::isnan(v))
            throw Error("tanh-sinh quadrature: integrand undefined at t = " +
                        std::to_string(node.t));
        ++res.nodes_used;
        return node.weight * v;
    };

    // Level 0: trapezoid with step 1 over |s| <= kSMax.
    double h = 1.0;
    double sum = eval(0.0);
    double l1 = std::abs(sum);
    for (double s = h; s <= kSMax; s += h) {
        double a = eval(s), b = eval(-s);
        sum += a + b;
        l1 += std::abs(a) + std::abs(b);
    }
    double integral = sum * h;
    double prev = integral;
    res.est_error = std::abs(integral);

    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double s = h; s <= kSMax; s += 2.0 * h) {
            double a = eval(s), b = eval(-s);
            add += a + b;
            l1 += std::abs(a) + std::abs(b);
        }
        sum += add;
        integral = sum * h;
        res.levels = level;
        res.est_error = std::abs(integral - prev);
        double scale = std::max(std::abs(integral), l1 * h);
        if (level >= 2 && res.est_error <= rel_tol * scale + 1e-300) {
            res.converged = true;
            break;
        }
        prev = integral;
    }
    res.value = integral;
    return res;
}

namespace {
// 8-point Gauss-Legendre on [-1,1].
constexpr double kGlX[4] = {0.1834346424956498, 0.5255324099163290,
                            0.7966664774136267, 0.9602898564975363};
constexpr double kGlW[4] = {0.3626837833783620, 0.3137066458778873,
                            0.2223810344533745, 0.1012285362903763};
}  // namespace

double gauss_legendre_composite(const std::function<double(double)>& f, double a,
                                double b, int panels) {
    if (panels < 1) panels = 1;
    double total = 0.0;
    double step = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * step;
        double half = 0.5 * step;
        double s = 0.0;
        for (int k = 0; k < 4; ++k)
            s += kGlW[k] * (f(c + half * kGlX[k]) + f(c - half * kGlX[k]));
        total += half * s;
    }
    return total;
}

Complex gauss_legendre_composite_c(const std::function<Complex(double)>& f, double a,
                                   double b, int panels) {
    if (panels < 1) panels = 1;
    Complex total = 0.0;
    double step = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * step;
        double half = 0.5 * step;
        Complex s = 0.0;
        for (int k = 0; k < 4; ++k)
            s += kGlW[k] * (f(c + half * kGlX[k]) + f(c - half * kGlX[k]));
        total += half * s;
    }
    return total;
}

int oscillation_panels(double freq, double length, int min_panels) {
    double periods = std::abs(freq) * length / (2.0 * M_PI);
    int panels = static_cast<int>(std::ceil(periods * 2.0)) + 1;
    return std::max(panels, min_panels);
}

}  // namespace widomlab
