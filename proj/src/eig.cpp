#include "widomlab/eig.hpp"

#ifdef WIDOMLAB_HAVE_LAPACKE
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>
#else
#include <Eigen/Eigenvalues>
#endif

namespace widomlab {

#ifdef WIDOMLAB_HAVE_LAPACKE

RealVector hermitian_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("eigensolve requires a square matrix");
    Matrix a = m;  // zheevd destroys its input
    lapack_int n = static_cast<lapack_int>(a.rows());
    RealVector w(n);
    lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data());
    if (info != 0) throw Error("zheevd failed with info " + std::to_string(info));
    return w;
}

EigenSystem hermitian_eigensystem(const Matrix& m) {
    if (m.rows() != m.cols()) throw Error("eigensolve requires a square matrix");
    EigenSystem sys;
    sys.vectors = m;
    lapack_int n = static_cast<lapack_int>(m.rows());
    sys.values.resize(n);
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                     sys.vectors.data(), n, sys.values.data());
    if (info != 0) throw Error("zheevd failed with info " + std::to_string(info));
    return sys;
}

#else

RealVector hermitian_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolve failed");
    return solver.eigenvalues();
}

EigenSystem hermitian_eigensystem(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolve failed");
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

#endif

double operator_norm_estimate(const Matrix& m, int iterations) {
    if (m.rows() == 0) return 0.0;
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols());
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXcd w = m * v;
        v = m.adjoint() * w;
        double nv = v.norm();
        if (nv == 0.0) return 0.0;
        v /= nv;
        sigma = std::sqrt(nv);
    }
    return sigma;
}

}  // namespace widomlab
