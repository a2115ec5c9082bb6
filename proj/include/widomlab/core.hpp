#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace widomlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Spatial/momentum point. Only the first `dim` components are meaningful;
// unused components stay zero so d=1 and d=2 share one representation.
using Point = std::array<double, 2>;

inline double dot(const Point& a, const Point& b, int dim) {
    double s = a[0] * b[0];
    if (dim > 1) s += a[1] * b[1];
    return s;
}

inline double norm(const Point& a, int dim) { return std::sqrt(dot(a, a, dim)); }

inline Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }

// Axis-aligned box, the shared geometry primitive for momentum windows and
// bounding boxes.
struct Box {
    Point lo{0.0, 0.0};
    Point hi{0.0, 0.0};
    int dim = 1;

    static Box interval(double a, double b) { return Box{{a, 0.0}, {b, 0.0}, 1}; }

    double extent(int axis) const { return hi[axis] - lo[axis]; }

    double volume() const {
        double v = extent(0);
        if (dim > 1) v *= extent(1);
        return v;
    }

    bool contains(const Point& x) const {
        for (int k = 0; k < dim; ++k)
            if (x[k] <= lo[k] || x[k] >= hi[k]) return false;
        return true;
    }

    bool covers(const Box& other) const {
        for (int k = 0; k < dim; ++k)
            if (other.lo[k] < lo[k] - 1e-12 || other.hi[k] > hi[k] + 1e-12) return false;
        return true;
    }

    static Box hull(const Box& a, const Box& b) {
        Box h = a;
        for (int k = 0; k < a.dim; ++k) {
            h.lo[k] = std::min(a.lo[k], b.lo[k]);
            h.hi[k] = std::max(a.hi[k], b.hi[k]);
        }
        return h;
    }
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline double max_hermitian_deviation(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Worker pool size: WIDOMLAB_THREADS if set, otherwise hardware concurrency
// capped at 8.
inline int worker_count() {
    if (const char* env = std::getenv("WIDOMLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(hw > 8 ? 8 : hw);
}

namespace detail {
inline thread_local bool in_parallel_worker = false;
}

// Static partition of [0,n) over at most worker_count() threads. Each chunk
// writes disjoint state, so results do not depend on the pool size. Nested
// calls from worker threads run inline, bounding the total thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    int workers = worker_count();
    if (n == 0) return;
    if (workers <= 1 || n < 2 || detail::in_parallel_worker) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t begin = n * c / chunks;
        std::size_t end = n * (c + 1) / chunks;
        pool.emplace_back([&, begin, end]() {
            detail::in_parallel_worker = true;
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace widomlab
