#pragma once

#include "widomlab/core.hpp"

namespace widomlab {

// Dense Hermitian eigensolves behind one interface. Backed by LAPACK (zheevd)
// when available, Eigen otherwise. Input is read as Hermitian from the lower
// triangle; eigenvalues are ascending.
RealVector hermitian_eigenvalues(const Matrix& m);

struct EigenSystem {
    RealVector values;
    Matrix vectors;  // columns
};

EigenSystem hermitian_eigensystem(const Matrix& m);

// Largest singular value by power iteration on M*M; deterministic start.
double operator_norm_estimate(const Matrix& m, int iterations = 60);

}  // namespace widomlab
