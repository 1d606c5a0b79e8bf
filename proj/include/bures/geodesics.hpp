#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "bures/bures_metric.hpp"
#include "bures/spd_core.hpp"

namespace bures {

/// Optimal transport map T = A^{-1}#B between centered Gaussians with
/// covariances A and B. Pushforward identity: T A T = B.
struct TransportMap {
  SpdMatrix matrix;  // T
  SpdMatrix source;  // A
  SpdMatrix target;  // B
};

inline TransportMap transport_map(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  SpdMatrix t = geometric_mean(inverse(a), b);
  return TransportMap{std::move(t), a, b};
}

/// Bures-Wasserstein geodesic
///   gamma(t) = (1-t)^2 A + t^2 B + t(1-t)[(AB)^{1/2} + (BA)^{1/2}].
/// The cross term is precomputed as A T + (A T)^T with T = A^{-1}#B, which
/// keeps (AB)^{1/2} symmetric-by-construction.
class GeodesicPath {
 public:
  GeodesicPath(SpdMatrix a, SpdMatrix b)
      : a_(std::move(a)), b_(std::move(b)), cross_term_(make_cross(a_, b_)) {}

  const SpdMatrix& a() const { return a_; }
  const SpdMatrix& b() const { return b_; }
  const SymMatrix& cross_term() const { return cross_term_; }

  SpdMatrix evaluate(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ParamOutOfRangeError("geodesic parameter must lie in [0,1]");
    }
    const double s = 1.0 - t;
    return SpdMatrix(s * s * a_.matrix() + t * t * b_.matrix() +
                     t * s * cross_term_.matrix());
  }

  /// gamma'(t), linear in t.
  Matrix derivative(double t) const {
    return -2.0 * (1.0 - t) * a_.matrix() + 2.0 * t * b_.matrix() +
           (1.0 - 2.0 * t) * cross_term_.matrix();
  }

 private:
  static SymMatrix make_cross(const SpdMatrix& a, const SpdMatrix& b) {
    const TransportMap t = transport_map(a, b);
    const Matrix ab_root = a.matrix() * t.matrix.matrix();  // (AB)^{1/2}
    return SymMatrix(ab_root + ab_root.transpose());
  }

  SpdMatrix a_;
  SpdMatrix b_;
  SymMatrix cross_term_;
};

inline GeodesicPath geodesic(const SpdMatrix& a, const SpdMatrix& b) {
  return GeodesicPath(a, b);
}

/// Wasserstein mean A<>B = (A + B + (AB)^{1/2} + (BA)^{1/2}) / 4, the
/// geodesic midpoint.
inline SpdMatrix wasserstein_mean(const SpdMatrix& a, const SpdMatrix& b) {
  const GeodesicPath path(a, b);
  return SpdMatrix(0.25 * (a.matrix() + b.matrix() + path.cross_term().matrix()));
}

/// Riemannian inner product on tangent vectors at A:
///   <Y,Z>_A = sum_{ij} alpha_j y~_ij z~_ij / (alpha_i + alpha_j)^2
/// in A's eigenbasis; equals tr(K A H) for the Sylvester lifts of Y and Z.
inline double riemannian_inner(const SpdMatrix& a, const SymMatrix& y,
                               const SymMatrix& z) {
  if (a.dim() != y.dim() || a.dim() != z.dim()) {
    throw DimensionMismatchError("riemannian_inner dimension mismatch");
  }
  if (!a.strictly_pd()) {
    throw NotPdError("riemannian_inner requires a positive definite base point");
  }
  const SpectralDecomposition& dec = a.spectrum();
  const Matrix yt = dec.eigenvectors.transpose() * y.matrix() * dec.eigenvectors;
  const Matrix zt = dec.eigenvectors.transpose() * z.matrix() * dec.eigenvectors;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    for (Eigen::Index j = 0; j < a.dim(); ++j) {
      const double denom = dec.eigenvalues(i) + dec.eigenvalues(j);
      sum += dec.eigenvalues(j) * yt(i, j) * zt(i, j) / (denom * denom);
    }
  }
  return sum;
}

/// Gauss-Legendre nodes and weights on [0,1] via the Golub-Welsch
/// tridiagonal eigenproblem.
inline std::vector<std::pair<double, double>> gauss_legendre_01(int nodes) {
  if (nodes < 2) {
    throw ParamOutOfRangeError("quadrature requires at least 2 nodes");
  }
  Matrix jacobi = Matrix::Zero(nodes, nodes);
  for (int k = 1; k < nodes; ++k) {
    const double off = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = off;
    jacobi(k, k - 1) = off;
  }
  const SpectralDecomposition dec = eigh(jacobi);
  std::vector<std::pair<double, double>> result(nodes);
  for (int k = 0; k < nodes; ++k) {
    // eigenvalues come back nonincreasing; reverse to ascending nodes
    const int src = nodes - 1 - k;
    const double x = dec.eigenvalues(src);
    const double w = 2.0 * dec.eigenvectors(0, src) * dec.eigenvectors(0, src);
    result[k] = {0.5 * (x + 1.0), 0.5 * w};  // map [-1,1] -> [0,1]
  }
  return result;
}

/// Length of the geodesic by Gauss-Legendre quadrature of
/// sqrt(<gamma'(t), gamma'(t)>_{gamma(t)}); converges to d(A,B).
inline double curve_length(const GeodesicPath& path, int nodes = 64) {
  const auto rule = gauss_legendre_01(nodes);
  double length = 0.0;
  for (const auto& [t, w] : rule) {
    const SpdMatrix point = path.evaluate(t);
    const SymMatrix velocity(path.derivative(t));
    const double speed_sq = riemannian_inner(point, velocity, velocity);
    length += w * std::sqrt(std::max(speed_sq, 0.0));
  }
  return length;
}

}  // namespace bures
