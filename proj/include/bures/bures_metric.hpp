#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "bures/spd_core.hpp"

namespace bures {

/// Distance together with the fidelity and traces it is built from.
/// Invariant: d^2 == trace_a + trace_b - 2*fidelity.
struct DistanceReport {
  double d = 0.0;
  double fidelity = 0.0;
  double trace_a = 0.0;
  double trace_b = 0.0;
};

/// F(A,B) = tr (A^{1/2} B A^{1/2})^{1/2}.
inline double fidelity(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  const Matrix ra = a.sqrt_matrix();
  const Matrix root = sqrt_psd_matrix(ra * b.matrix() * ra);
  return root.trace();
}

/// Bures-Wasserstein distance d(A,B) = [tr A + tr B - 2 F(A,B)]^{1/2}.
inline DistanceReport bures_distance(const SpdMatrix& a, const SpdMatrix& b) {
  DistanceReport report;
  report.fidelity = fidelity(a, b);
  report.trace_a = a.trace();
  report.trace_b = b.trace();
  double bracket = report.trace_a + report.trace_b - 2.0 * report.fidelity;
  if (bracket < -1e-12) {
    throw NegativeDiscriminantError(
        "d^2 bracket is negative beyond rounding: " + std::to_string(bracket));
  }
  // |bracket| <= 1e-12 is rounding noise from the trace cancellation; clamping
  // both sides makes d(A,A) exactly zero
  report.d = std::abs(bracket) <= 1e-12 ? 0.0 : std::sqrt(bracket);
  return report;
}

/// Hellinger distance rho(A,B) = ||A^{1/2} - B^{1/2}||_F. Equals d in the
/// commuting case and dominates it in general.
inline double hellinger(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  return (a.sqrt_matrix() - b.sqrt_matrix()).norm();
}

/// Affine-invariant distance delta(A,B) = ||log A^{-1/2} B A^{-1/2}||_F,
/// computed spectrally from the PD conjugation.
inline double affine_invariant_delta(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  if (!a.strictly_pd() || !b.strictly_pd()) {
    throw NotPdError("affine_invariant_delta requires positive definite inputs");
  }
  const Matrix ris = a.inv_sqrt_matrix();
  const SpdMatrix conj(ris * b.matrix() * ris);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < conj.dim(); ++i) {
    const double lg = std::log(conj.spectrum().eigenvalues(i));
    sum += lg * lg;
  }
  return std::sqrt(sum);
}

struct CheckClause {
  std::string name;
  bool pass = false;
  double defect = 0.0;  // how far the clause is from holding
};

struct CheckReport {
  double fidelity_value = 0.0;
  std::vector<CheckClause> clauses;
  bool all_pass() const {
    for (const auto& c : clauses)
      if (!c.pass) return false;
    return true;
  }
};

/// Verifies the three variational characterizations of the fidelity at the
/// minimizer X0 = A^{-1}#B, and dominance of the objective over the supplied
/// probe matrices. Returns a structured report rather than asserting, so a
/// caller can aggregate.
inline CheckReport fidelity_variational_check(const SpdMatrix& a,
                                              const SpdMatrix& b,
                                              std::span<const SpdMatrix> probes) {
  require_same_dim(a, b);
  if (!a.strictly_pd() || !b.strictly_pd()) {
    throw NotPdError("fidelity_variational_check requires positive definite inputs");
  }
  CheckReport report;
  const double f = fidelity(a, b);
  report.fidelity_value = f;
  const double scale = std::max(std::abs(f), 1.0);

  const SpdMatrix x0 = geometric_mean(inverse(a), b);
  const Matrix x0_inv = x0.inverse_matrix();
  const double tr_ax = (a.matrix() * x0.matrix()).trace();
  const double tr_bxinv = (b.matrix() * x0_inv).trace();

  auto push = [&report](std::string name, double defect, double tol) {
    report.clauses.push_back({std::move(name), defect <= tol, defect});
  };

  push("half_trace_objective_equals_fidelity",
       std::abs(0.5 * (tr_ax + tr_bxinv) - f) / scale, 1e-9);
  push("geometric_mean_of_traces_equals_fidelity",
       std::abs(std::sqrt(tr_ax * tr_bxinv) - f) / scale, 1e-9);
  push("trace_balance_at_minimizer", std::abs(tr_ax - tr_bxinv) / scale, 1e-9);

  double worst_probe_gap = 0.0;  // positive when a probe beats X0
  for (const SpdMatrix& x : probes) {
    require_same_dim(a, x);
    if (!x.strictly_pd()) {
      throw NotPdError("fidelity_variational_check probes must be positive definite");
    }
    const double obj = 0.5 * ((a.matrix() * x.matrix()).trace() +
                              (b.matrix() * x.inverse_matrix()).trace());
    worst_probe_gap = std::max(worst_probe_gap, (f - obj) / scale);
  }
  push("probes_never_beat_minimizer", worst_probe_gap, 1e-9);

  // M = (AB)^{1/2} taken as A(A^{-1}#B): the attaining point of the
  // congruence characterization. M B^{-1} M^T = A and tr M = F(A,B).
  const Matrix m = a.matrix() * x0.matrix();
  const double congruence_defect =
      (m * b.inverse_matrix() * m.transpose() - a.matrix()).norm() /
      std::max(a.matrix().norm(), 1e-300);
  push("congruence_attainment", congruence_defect, kReconTol);
  push("cross_term_trace_equals_fidelity", std::abs(m.trace() - f) / scale, 1e-9);

  return report;
}

}  // namespace bures
