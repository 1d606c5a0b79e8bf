#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bures/errors.hpp"

namespace bures {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative Frobenius tolerance for all reconstruction contracts.
inline constexpr double kReconTol = 1e-9;

inline Matrix symmetrized(const Matrix& m) {
  return 0.5 * (m + m.transpose());
}

inline double pd_threshold(double lambda_max) {
  return 1e-12 * std::max(1.0, lambda_max);
}

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// nonincreasing. Backend for every fractional power in the library.
struct SpectralDecomposition {
  Vector eigenvalues;   // nonincreasing
  Matrix eigenvectors;  // orthogonal, columns

  Matrix reconstruct() const {
    return symmetrized(eigenvectors * eigenvalues.asDiagonal() *
                       eigenvectors.transpose());
  }

  /// Q f(Lambda) Q^T, symmetrized.
  template <typename Fn>
  Matrix apply(Fn&& fn) const {
    Vector mapped = eigenvalues.unaryExpr(std::forward<Fn>(fn));
    return symmetrized(eigenvectors * mapped.asDiagonal() *
                       eigenvectors.transpose());
  }
};

inline SpectralDecomposition eigh(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition failed to converge");
  }
  const Eigen::Index n = sym.rows();
  SpectralDecomposition dec;
  dec.eigenvalues = solver.eigenvalues().reverse();
  dec.eigenvectors = solver.eigenvectors().rowwise().reverse();
  (void)n;
  return dec;
}

/// Dense real symmetric matrix; entries are symmetrized on construction.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m) : entries_(symmetrized(std::move(check(m)))) {}

  const Matrix& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

 private:
  static Matrix& check(Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw DimensionMismatchError("SymMatrix requires a nonempty square matrix");
    }
    return m;
  }
  Matrix entries_;
};

enum class Definiteness { kPositiveDefinite, kPositiveSemidefinite };

/// Validated real symmetric positive (semi)definite matrix.
///
/// Construction symmetrizes the entries and eigendecomposes them once; the
/// decomposition is cached and reused by every spectral operation. For PSD
/// inputs, eigenvalues in [-pd_threshold, 0] are clamped to 0 (rounding
/// noise); anything more negative is rejected.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix& m,
                     Definiteness definiteness = Definiteness::kPositiveDefinite)
      : definiteness_(definiteness) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw DimensionMismatchError("SpdMatrix requires a nonempty square matrix");
    }
    entries_ = symmetrized(m);
    spectrum_ = eigh(entries_);
    const double lambda_max = spectrum_.eigenvalues(0);
    const double lambda_min = spectrum_.eigenvalues(spectrum_.eigenvalues.size() - 1);
    const double thresh = pd_threshold(lambda_max);
    if (definiteness_ == Definiteness::kPositiveDefinite) {
      if (lambda_min < thresh) {
        throw NotPdError("matrix is not positive definite: min eigenvalue " +
                         std::to_string(lambda_min));
      }
    } else {
      if (lambda_min < -thresh) {
        throw NotPsdError("matrix is not positive semidefinite: min eigenvalue " +
                          std::to_string(lambda_min));
      }
      if (lambda_min < 0.0) {
        // clamp rounding noise, rebuild entries from the clamped spectrum
        spectrum_.eigenvalues = spectrum_.eigenvalues.cwiseMax(0.0);
        entries_ = spectrum_.reconstruct();
      }
    }
  }

  const Matrix& matrix() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }
  Definiteness definiteness() const { return definiteness_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }

  double trace() const { return entries_.trace(); }
  double min_eigenvalue() const {
    return spectrum_.eigenvalues(spectrum_.eigenvalues.size() - 1);
  }
  double max_eigenvalue() const { return spectrum_.eigenvalues(0); }
  double condition_number() const {
    const double lo = min_eigenvalue();
    return lo > 0.0 ? max_eigenvalue() / lo
                    : std::numeric_limits<double>::infinity();
  }

  bool strictly_pd() const {
    return min_eigenvalue() >= pd_threshold(max_eigenvalue());
  }

  /// A^p through the cached spectrum. Requires PD for negative p.
  Matrix power_matrix(double p) const {
    if (p < 0.0 && !strictly_pd()) {
      throw NotPdError("negative matrix power requires a positive definite matrix");
    }
    return spectrum_.apply([p](double x) { return std::pow(std::max(x, 0.0), p); });
  }

  Matrix sqrt_matrix() const { return power_matrix(0.5); }
  Matrix inv_sqrt_matrix() const { return power_matrix(-0.5); }
  Matrix inverse_matrix() const { return power_matrix(-1.0); }

 private:
  Matrix entries_;
  SpectralDecomposition spectrum_;
  Definiteness definiteness_;
};

/// Normalized positive weight vector; rescaled to sum 1 on construction.
class Weights {
 public:
  explicit Weights(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
      throw ParamOutOfRangeError("Weights requires at least one entry");
    }
    double sum = 0.0;
    for (double w : values_) {
      if (!(w > 0.0)) {
        throw ParamOutOfRangeError("weights must be strictly positive");
      }
      sum += w;
    }
    for (double& w : values_) w /= sum;
  }

  static Weights uniform(std::size_t m) {
    return Weights(std::vector<double>(m, 1.0));
  }

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t j) const { return values_[j]; }

 private:
  std::vector<double> values_;
};

inline void require_same_dim(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatchError("matrix dimensions differ: " +
                                 std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
  }
}

/// PSD square root of a raw symmetric matrix known to be PSD up to rounding.
/// Eigenvalues in [-pd_threshold, 0] are clamped; more negative is an error.
inline Matrix sqrt_psd_matrix(const Matrix& sym) {
  SpectralDecomposition dec = eigh(symmetrized(sym));
  const double thresh = pd_threshold(std::max(dec.eigenvalues(0), 0.0));
  if (dec.eigenvalues(dec.eigenvalues.size() - 1) < -thresh) {
    throw NotPsdError("intermediate product is not positive semidefinite");
  }
  return dec.apply([](double x) { return std::sqrt(std::max(x, 0.0)); });
}

/// Unique PSD square root.
inline SpdMatrix sqrt_psd(const SpdMatrix& a) {
  return SpdMatrix(a.sqrt_matrix(), a.definiteness());
}

inline SpdMatrix inverse(const SpdMatrix& a) {
  return SpdMatrix(a.inverse_matrix());
}

/// Pusz-Woronowicz geometric mean A#B = A^{1/2}(A^{-1/2}BA^{-1/2})^{1/2}A^{1/2}.
inline SpdMatrix geometric_mean(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  if (!a.strictly_pd() || !b.strictly_pd()) {
    throw NotPdError("geometric mean requires positive definite inputs");
  }
  const Matrix rs = a.sqrt_matrix();
  const Matrix ris = a.inv_sqrt_matrix();
  const Matrix inner = sqrt_psd_matrix(ris * b.matrix() * ris);
  return SpdMatrix(rs * inner * rs);
}

/// A#_t B = A^{1/2}(A^{-1/2}BA^{-1/2})^t A^{1/2}, t in [0,1].
inline SpdMatrix weighted_geometric(const SpdMatrix& a, const SpdMatrix& b,
                                    double t) {
  require_same_dim(a, b);
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ParamOutOfRangeError("weighted geometric mean requires t in [0,1]");
  }
  if (!a.strictly_pd() || !b.strictly_pd()) {
    throw NotPdError("weighted geometric mean requires positive definite inputs");
  }
  const Matrix rs = a.sqrt_matrix();
  const Matrix ris = a.inv_sqrt_matrix();
  const SpdMatrix conj(ris * b.matrix() * ris);
  return SpdMatrix(rs * conj.power_matrix(t) * rs);
}

/// Unique symmetric H with HA + AH = Y; in A's eigenbasis
/// h_ij = y_ij / (alpha_i + alpha_j).
inline SymMatrix sylvester_solve(const SpdMatrix& a, const SymMatrix& y) {
  if (a.dim() != y.dim()) {
    throw DimensionMismatchError("sylvester_solve dimension mismatch");
  }
  if (!a.strictly_pd()) {
    throw NotPdError("sylvester_solve requires a positive definite matrix");
  }
  const SpectralDecomposition& dec = a.spectrum();
  const Matrix y_tilde =
      dec.eigenvectors.transpose() * y.matrix() * dec.eigenvectors;
  Matrix h_tilde(a.dim(), a.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    for (Eigen::Index j = 0; j < a.dim(); ++j) {
      h_tilde(i, j) = y_tilde(i, j) / (dec.eigenvalues(i) + dec.eigenvalues(j));
    }
  }
  return SymMatrix(dec.eigenvectors * h_tilde * dec.eigenvectors.transpose());
}

/// Orthogonal polar factor U of B^{1/2}A^{1/2}, computed as
/// B^{1/2}A^{1/2}(A^{1/2}BA^{1/2})^{-1/2}. It is the minimizer of
/// ||A^{1/2} - B^{1/2}U|| over orthogonal U.
inline Matrix polar_unitary(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  if (!a.strictly_pd() || !b.strictly_pd()) {
    throw NotPdError("polar_unitary requires positive definite inputs");
  }
  const Matrix ra = a.sqrt_matrix();
  const Matrix rb = b.sqrt_matrix();
  const SpdMatrix prod(ra * b.matrix() * ra);
  return rb * ra * prod.inv_sqrt_matrix();
}

/// Loewner order test: A <= B iff lambda_min(B - A) >= -slack.
inline bool loewner_leq(const Matrix& a, const Matrix& b, double slack) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatchError("loewner_leq dimension mismatch");
  }
  const SpectralDecomposition dec = eigh(symmetrized(b - a));
  return dec.eigenvalues(dec.eigenvalues.size() - 1) >= -slack;
}

inline bool loewner_leq(const SymMatrix& a, const SymMatrix& b, double slack) {
  return loewner_leq(a.matrix(), b.matrix(), slack);
}

inline bool loewner_leq(const SpdMatrix& a, const SpdMatrix& b, double slack) {
  return loewner_leq(a.matrix(), b.matrix(), slack);
}

/// Power mean Q_{1/2} = (sum_j w_j A_j^{1/2})^2.
inline SpdMatrix power_mean_half(std::span<const SpdMatrix> as,
                                 const Weights& w) {
  if (as.empty() || as.size() != w.size()) {
    throw DimensionMismatchError("power_mean_half: |matrices| must equal |weights|");
  }
  for (std::size_t j = 1; j < as.size(); ++j) require_same_dim(as[0], as[j]);
  Matrix acc = Matrix::Zero(as[0].dim(), as[0].dim());
  for (std::size_t j = 0; j < as.size(); ++j) {
    if (!as[j].strictly_pd()) {
      throw NotPdError("power_mean_half requires positive definite inputs");
    }
    acc += w[j] * as[j].sqrt_matrix();
  }
  return SpdMatrix(acc * acc);
}

}  // namespace bures
