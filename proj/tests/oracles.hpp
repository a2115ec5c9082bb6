// Independent brute-force oracles for the test suites. Everything here is
// deliberately written against plain loops and elementary quadrature rules so
// it shares no code path with the library implementations it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "widomlab/core.hpp"

namespace oracles {

using widomlab::Complex;
using widomlab::Matrix;

// Naive O(n^3) matrix product, jki loop order.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
    const Eigen::Index n = a.rows();
    Matrix c = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) {
            Complex bkj = b(k, j);
            for (Eigen::Index i = 0; i < n; ++i) c(i, j) += a(i, k) * bkj;
        }
    return c;
}

inline Matrix naive_power(const Matrix& a, int p) {
    Matrix out = a;
    for (int k = 1; k < p; ++k) out = naive_matmul(out, a);
    return out;
}

inline Complex naive_trace(const Matrix& a) {
    Complex t = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

// Permutation expansion of the monomial jump coefficient:
//   (2 pi)^2 U(id^p; B1, B2)
//     = sum_{k=1}^{p-1} Beta(k, p-k)/(k! (p-k)!)
//         sum_{pi in S_p} tr[C_{pi(1)} ... C_{pi(p)}]
//       - H_{p-1} (tr B1^p + tr B2^p),
// where C_j = B1 for j <= k and B2 otherwise, Beta(k, p-k) is the beta
// integral of t^{k-1} (1-t)^{p-k-1}, and H_m is the m-th harmonic number.
inline double frak_u_monomial_oracle(int p, const Matrix& b1, const Matrix& b2) {
    auto factorial = [](int m) {
        double f = 1.0;
        for (int i = 2; i <= m; ++i) f *= i;
        return f;
    };
    double total = 0.0;
    for (int k = 1; k <= p - 1; ++k) {
        double beta = factorial(k - 1) * factorial(p - k - 1) / factorial(p - 1);
        double weight = beta / (factorial(k) * factorial(p - k));
        std::vector<int> idx(static_cast<std::size_t>(p));
        std::iota(idx.begin(), idx.end(), 0);
        double perm_sum = 0.0;
        do {
            Matrix prod = Matrix::Identity(b1.rows(), b1.cols());
            for (int j : idx) prod = naive_matmul(prod, j < k ? b1 : b2);
            perm_sum += naive_trace(prod).real();
        } while (std::next_permutation(idx.begin(), idx.end()));
        total += weight * perm_sum;
    }
    double harmonic = 0.0;
    for (int m = 1; m <= p - 1; ++m) harmonic += 1.0 / m;
    total -= harmonic * (naive_trace(naive_power(b1, p)).real() +
                         naive_trace(naive_power(b2, p)).real());
    return total / (4.0 * M_PI * M_PI);
}

// Graded-mesh quadrature of Int_0^1 f(t) dt for integrands with endpoint
// singularities: substitute t = sin^2(u) and apply the composite midpoint
// rule in u. Midpoint never evaluates the endpoints, where the transformed
// integrand may have a nonzero or merely continuous limit.
template <typename F>
double graded_mesh_integral(const F& f, int panels = 1 << 17) {
    auto g = [&](double u) -> double {
        double s = std::sin(u), c = std::cos(u);
        double t = s * s;
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return f(t) * 2.0 * s * c;
    };
    double h = (M_PI / 2.0) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) sum += g((i + 0.5) * h);
    return sum * h;
}

// Composite Simpson for oscillatory Fourier integrals (kernel oracle).
template <typename F>
Complex simpson_complex(const F& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    double h = (b - a) / panels;
    Complex sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return sum * (h / 3.0);
}

// Deterministic random Hermitian matrix with entries O(1).
inline Matrix random_hermitian(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(u(rng), u(rng));
    return 0.5 * (m + m.adjoint());
}

// Commuting Hermitian pair: shared eigenbasis, random spectra.
inline std::pair<Matrix, Matrix> random_commuting_pair(int n, std::mt19937& rng) {
    Matrix h = random_hermitian(n, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
        d1(i) = u(rng);
        d2(i) = u(rng);
    }
    Matrix q = es.eigenvectors();
    return {q * d1.asDiagonal() * q.adjoint(), q * d2.asDiagonal() * q.adjoint()};
}

}  // namespace oracles
