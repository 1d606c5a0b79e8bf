#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bures/bures_metric.hpp"
#include "bures/geodesics.hpp"
#include "bures/spd_core.hpp"

namespace bures {

struct BarycenterConfig {
  double tol = 1e-10;
  int max_iter = 500;
  std::optional<SpdMatrix> initial;
};

/// Fixed point Omega with per-iteration diagnostics. The trace sequence is
/// nondecreasing from index 1 onward and the variance sequence nonincreasing;
/// both include the initial iterate at index 0.
struct BarycenterSolution {
  SpdMatrix omega;
  int iterations = 0;
  std::vector<double> trace_sequence;
  std::vector<double> variance_sequence;
  std::vector<double> step_distances;  // d(S_n, S_{n+1})
  double residual = 0.0;               // relative fixed-point defect
  double stationarity_defect = 0.0;    // ||I - sum w_j (A_j # Omega^{-1})||_F
  bool converged = false;
  bool conditioning_warning = false;   // some A_j has eigenvalue ratio > 1e12
};

struct NotConvergedError : Error {
  NotConvergedError(const std::string& what, BarycenterSolution partial)
      : Error(what), solution(std::move(partial)) {}
  BarycenterSolution solution;
};

/// H_j(A) = A^{-1} # A_j, the transport map from A toward A_j.
inline SpdMatrix map_H_j(const SpdMatrix& a, const SpdMatrix& a_j) {
  return geometric_mean(inverse(a), a_j);
}

namespace detail {

inline void validate_ensemble(std::span<const SpdMatrix> as, const Weights& w) {
  if (as.empty() || as.size() != w.size()) {
    throw DimensionMismatchError("|matrices| must equal |weights|");
  }
  for (std::size_t j = 1; j < as.size(); ++j) require_same_dim(as[0], as[j]);
}

/// sum_j w_j (A^{1/2} A_j A^{1/2})^{1/2} in terms of a given root of A.
inline Matrix weighted_root_sum(const Matrix& root_a,
                                std::span<const SpdMatrix> as,
                                const Weights& w) {
  Matrix acc = Matrix::Zero(root_a.rows(), root_a.cols());
  for (std::size_t j = 0; j < as.size(); ++j) {
    acc += w[j] * sqrt_psd_matrix(root_a * as[j].matrix() * root_a);
  }
  return acc;
}

}  // namespace detail

/// One step of the barycentre iteration:
///   K(A) = A^{-1/2} (sum_j w_j (A^{1/2} A_j A^{1/2})^{1/2})^2 A^{-1/2}.
/// Cross-checked against the equivalent form H(A) A H(A) with
/// H(A) = sum_j w_j H_j(A); disagreement signals numerical corruption.
inline SpdMatrix map_K(const SpdMatrix& a, std::span<const SpdMatrix> as,
                       const Weights& w) {
  detail::validate_ensemble(as, w);
  require_same_dim(a, as[0]);
  if (!a.strictly_pd()) {
    throw NotPdError("map_K requires a positive definite iterate");
  }
  const Matrix root = a.sqrt_matrix();
  const Matrix inv_root = a.inv_sqrt_matrix();
  const Matrix s = detail::weighted_root_sum(root, as, w);
  const SpdMatrix k(inv_root * s * s * inv_root);

  Matrix h = Matrix::Zero(a.dim(), a.dim());
  for (std::size_t j = 0; j < as.size(); ++j) {
    h += w[j] * map_H_j(a, as[j]).matrix();
  }
  const Matrix k_alt = h * a.matrix() * h;
  const double defect = (k.matrix() - k_alt).norm() / k.matrix().norm();
  if (defect > kReconTol) {
    throw NumericalError("the two routes to K(A) disagree: relative defect " +
                         std::to_string(defect));
  }
  return k;
}

/// V(A) = sum_j w_j d^2(A, A_j).
inline double variance(const SpdMatrix& a, std::span<const SpdMatrix> as,
                       const Weights& w) {
  detail::validate_ensemble(as, w);
  require_same_dim(a, as[0]);
  double v = 0.0;
  for (std::size_t j = 0; j < as.size(); ++j) {
    const double d = bures_distance(a, as[j]).d;
    v += w[j] * d * d;
  }
  return v;
}

/// Relative fixed-point defect of X against sum_j w_j (X^{1/2}A_jX^{1/2})^{1/2}.
inline double fixed_point_residual(const SpdMatrix& x,
                                   std::span<const SpdMatrix> as,
                                   const Weights& w) {
  const Matrix s = detail::weighted_root_sum(x.sqrt_matrix(), as, w);
  return (x.matrix() - s).norm() / x.matrix().norm();
}

/// ||I - sum_j w_j (A_j # X^{-1})||_F, the first-order stationarity defect.
inline double stationarity_defect(const SpdMatrix& x,
                                  std::span<const SpdMatrix> as,
                                  const Weights& w) {
  Matrix acc = Matrix::Zero(x.dim(), x.dim());
  const SpdMatrix x_inv = inverse(x);
  for (std::size_t j = 0; j < as.size(); ++j) {
    acc += w[j] * geometric_mean(as[j], x_inv).matrix();
  }
  return (Matrix::Identity(x.dim(), x.dim()) - acc).norm();
}

/// Wasserstein barycentre via the fixed-point iteration S_{n+1} = K(S_n).
/// Convergence requires both a small relative step and a small fixed-point
/// residual. Default start: the arithmetic mean of the ensemble.
inline BarycenterSolution barycenter(std::span<const SpdMatrix> as,
                                     const Weights& w,
                                     const BarycenterConfig& cfg = {}) {
  detail::validate_ensemble(as, w);
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw ParamOutOfRangeError("barycenter requires tol > 0 and max_iter >= 1");
  }
  for (const SpdMatrix& a : as) {
    if (!a.strictly_pd()) {
      throw NotPdError("barycenter requires positive definite inputs");
    }
  }
  bool warn = false;
  for (const SpdMatrix& a : as) {
    if (a.condition_number() > 1e12) warn = true;
  }

  auto finalize = [&](SpdMatrix omega, BarycenterSolution&& sol) {
    sol.omega = std::move(omega);
    sol.residual = fixed_point_residual(sol.omega, as, w);
    sol.stationarity_defect = stationarity_defect(sol.omega, as, w);
    sol.conditioning_warning = warn;
    return std::move(sol);
  };

  if (as.size() == 1) {
    // degenerate ensemble: the barycentre is the single matrix
    BarycenterSolution sol{as[0]};
    sol.trace_sequence = {as[0].trace()};
    sol.variance_sequence = {0.0};
    sol.converged = true;
    return finalize(as[0], std::move(sol));
  }

  SpdMatrix current = [&] {
    if (cfg.initial) {
      require_same_dim(*cfg.initial, as[0]);
      if (!cfg.initial->strictly_pd()) {
        throw NotPdError("barycenter initial iterate must be positive definite");
      }
      return *cfg.initial;
    }
    Matrix mean = Matrix::Zero(as[0].dim(), as[0].dim());
    for (std::size_t j = 0; j < as.size(); ++j) mean += w[j] * as[j].matrix();
    return SpdMatrix(mean);
  }();

  BarycenterSolution sol{current};
  sol.conditioning_warning = warn;
  sol.trace_sequence.push_back(current.trace());
  sol.variance_sequence.push_back(variance(current, as, w));

  for (int n = 0; n < cfg.max_iter; ++n) {
    SpdMatrix next = map_K(current, as, w);
    sol.iterations = n + 1;
    sol.trace_sequence.push_back(next.trace());
    sol.variance_sequence.push_back(variance(next, as, w));
    sol.step_distances.push_back(bures_distance(current, next).d);
    const double rel_step =
        (next.matrix() - current.matrix()).norm() / current.matrix().norm();
    current = std::move(next);
    if (rel_step <= cfg.tol &&
        fixed_point_residual(current, as, w) <= cfg.tol) {
      sol.converged = true;
      return finalize(std::move(current), std::move(sol));
    }
  }
  throw NotConvergedError(
      "barycenter iteration did not converge within " +
          std::to_string(cfg.max_iter) + " iterations",
      finalize(std::move(current), std::move(sol)));
}

}  // namespace bures
