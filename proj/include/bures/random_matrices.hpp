#pragma once

#include <cstdint>
#include <vector>

#include "bures/random.hpp"
#include "bures/spd_core.hpp"

namespace bures {

inline Matrix random_gaussian_matrix(NormalStream& rng, Eigen::Index rows,
                                     Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.next();
  return m;
}

/// Haar-ish random orthogonal matrix from the QR factorization of a Gaussian
/// matrix, with the sign convention fixed by the diagonal of R.
inline Matrix random_orthogonal(NormalStream& rng, Eigen::Index n) {
  const Matrix g = random_gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

/// Random PD matrix Q diag(lambda) Q^T with eigenvalues uniform in
/// [lambda_lo, lambda_hi].
inline SpdMatrix random_pd(NormalStream& rng, Eigen::Index n,
                           double lambda_lo = 0.3, double lambda_hi = 3.0) {
  const Matrix q = random_orthogonal(rng, n);
  Vector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lambda(i) = lambda_lo + (lambda_hi - lambda_lo) * rng.next_unit();
  }
  return SpdMatrix(q * lambda.asDiagonal() * q.transpose());
}

/// Random symmetric matrix with standard normal entries (symmetrized).
inline SymMatrix random_sym(NormalStream& rng, Eigen::Index n) {
  return SymMatrix(random_gaussian_matrix(rng, n, n));
}

/// Random diagonal PD matrix (commuting-case oracle inputs).
inline SpdMatrix random_diagonal_pd(UniformStream& rng, Eigen::Index n,
                                    double lo = 0.3, double hi = 3.0) {
  Vector lambda(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lambda(i) = lo + (hi - lo) * rng.next_unit();
  }
  return SpdMatrix(Matrix(lambda.asDiagonal()));
}

}  // namespace bures
