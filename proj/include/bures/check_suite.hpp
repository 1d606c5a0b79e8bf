#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bures/barycentre.hpp"
#include "bures/bures_metric.hpp"
#include "bures/coupling.hpp"
#include "bures/geodesics.hpp"
#include "bures/random_matrices.hpp"
#include "bures/spd_core.hpp"

namespace bures {

struct PropertyResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst_defect = 0.0;
  std::string note;
  bool pass() const { return failures == 0; }
};

namespace check_detail {

class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }

  /// defect <= 0 means the property holds with margin.
  void record(double defect) {
    ++result_.trials;
    result_.worst_defect = std::max(result_.worst_defect, defect);
    if (defect > 0.0) ++result_.failures;
  }
  void record_bool(bool ok) { record(ok ? 0.0 : 1.0); }
  void note(std::string text) { result_.note = std::move(text); }
  PropertyResult take() { return std::move(result_); }

 private:
  PropertyResult result_;
};

struct Ensemble {
  std::vector<SpdMatrix> matrices;
  Weights weights;
};

inline Ensemble random_ensemble(NormalStream& rng, Eigen::Index dim, int m) {
  Ensemble e{{}, Weights::uniform(static_cast<std::size_t>(m))};
  std::vector<double> w;
  for (int j = 0; j < m; ++j) {
    e.matrices.push_back(random_pd(rng, dim));
    w.push_back(0.25 + rng.next_unit());
  }
  e.weights = Weights(std::move(w));
  return e;
}

}  // namespace check_detail

/// Runs every library invariant either on user-supplied ensembles or on
/// `trials` seeded random ones. Deterministic in (seed, trials, input).
class CheckSuite {
 public:
  CheckSuite(std::optional<check_detail::Ensemble> input, int trials,
             std::uint64_t seed)
      : input_(std::move(input)), trials_(std::max(trials, 1)), seed_(seed) {}

  static CheckSuite from_random(int trials, std::uint64_t seed) {
    return CheckSuite(std::nullopt, trials, seed);
  }
  static CheckSuite from_input(std::vector<SpdMatrix> matrices, Weights weights,
                               int trials, std::uint64_t seed) {
    return CheckSuite(check_detail::Ensemble{std::move(matrices), std::move(weights)},
                      trials, seed);
  }

  std::vector<PropertyResult> run() const {
    std::vector<PropertyResult> out;
    out.push_back(spd_core_reconstruction());
    out.push_back(geometric_mean_properties());
    out.push_back(agm_trace_inequality());
    out.push_back(harmonic_geometric_arithmetic_chain());
    out.push_back(metric_axioms());
    out.push_back(orbit_minimality());
    out.push_back(density_matrix_identity());
    out.push_back(unitary_congruence_invariance());
    out.push_back(hellinger_dominates_distance());
    out.push_back(affine_invariant_symmetries());
    out.push_back(fidelity_variational());
    out.push_back(geodesic_endpoints_and_interpolation());
    out.push_back(geodesic_loewner_bounds());
    out.push_back(geodesic_semigroup());
    out.push_back(riemannian_inner_dual_formula());
    out.push_back(curve_length_matches_distance());
    out.push_back(nonmonotonicity_witness());
    out.push_back(harmonic_lower_bound_search());
    out.push_back(barycenter_invariants());
    out.push_back(trace_inequalities());
    out.push_back(strict_concavity());
    out.push_back(commuting_case_oracles());
    out.push_back(coupling_plan_invariants());
    return out;
  }

 private:
  // Iterates `fn` over pairs: either all distinct pairs of the input
  // ensemble, or `trials_` random pairs of the given dimension range.
  template <typename Fn>
  void for_pairs(std::uint64_t stream, Fn&& fn) const {
    if (input_) {
      NormalStream rng(seed_, stream);
      const auto& ms = input_->matrices;
      for (std::size_t i = 0; i < ms.size(); ++i)
        for (std::size_t j = i + 1; j < ms.size(); ++j) fn(ms[i], ms[j], rng);
      if (ms.size() == 1) fn(ms[0], ms[0], rng);
    } else {
      NormalStream rng(seed_, stream);
      for (int t = 0; t < trials_; ++t) {
        const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.next_unit() * 5);
        fn(random_pd(rng, dim), random_pd(rng, dim), rng);
      }
    }
  }

  template <typename Fn>
  void for_ensembles(std::uint64_t stream, Fn&& fn) const {
    if (input_) {
      NormalStream rng(seed_, stream);
      fn(input_->matrices, input_->weights, rng);
    } else {
      NormalStream rng(seed_, stream);
      const int reps = std::max(trials_ / 10, 1);
      for (int t = 0; t < reps; ++t) {
        const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.next_unit() * 4);
        const int m = 2 + static_cast<int>(rng.next_unit() * 3);
        auto e = check_detail::random_ensemble(rng, dim, m);
        fn(e.matrices, e.weights, rng);
      }
    }
  }

  PropertyResult spd_core_reconstruction() const {
    check_detail::Recorder rec("sqrt_psd reconstruction and commutation");
    for_pairs(1, [&](const SpdMatrix& a, const SpdMatrix&, NormalStream&) {
      const Matrix r = sqrt_psd(a).matrix();
      const double scale = a.matrix().norm();
      const double recon = (r * r - a.matrix()).norm() / scale;
      const double commute = (r * a.matrix() - a.matrix() * r).norm() / scale;
      rec.record(std::max(recon, commute) - kReconTol);
    });
    return rec.take();
  }

  PropertyResult geometric_mean_properties() const {
    check_detail::Recorder rec("geometric mean symmetry and Riccati identity");
    for_pairs(2, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      const SpdMatrix g = geometric_mean(a, b);
      const double scale = g.matrix().norm();
      const double sym =
          (g.matrix() - geometric_mean(b, a).matrix()).norm() / scale;
      const double riccati =
          (g.matrix() * a.inverse_matrix() * g.matrix() - b.matrix()).norm() /
          b.matrix().norm();
      rec.record(std::max(sym, riccati) - kReconTol);
    });
    return rec.take();
  }

  PropertyResult agm_trace_inequality() const {
    check_detail::Recorder rec("arithmetic-geometric mean trace inequality");
    for_pairs(3, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      const double f = fidelity(a, b);
      const double arith = 0.5 * (a.trace() + b.trace());
      rec.record(f - arith - 1e-12);
      if ((a.matrix() - b.matrix()).norm() > 1e-6) {
        rec.record(1e-15 - (arith - f));  // strict gap
      }
    });
    return rec.take();
  }

  PropertyResult harmonic_geometric_arithmetic_chain() const {
    check_detail::Recorder rec("harmonic <= geometric <= arithmetic operator chain");
    for_pairs(4, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      const SpdMatrix g = geometric_mean(a, b);
      const Matrix harmonic =
          SpdMatrix(0.5 * (a.inverse_matrix() + b.inverse_matrix()))
              .inverse_matrix();
      const Matrix arith = 0.5 * (a.matrix() + b.matrix());
      rec.record_bool(loewner_leq(harmonic, g.matrix(), 1e-9) &&
                      loewner_leq(g.matrix(), arith, 1e-9));
    });
    return rec.take();
  }

  PropertyResult metric_axioms() const {
    check_detail::Recorder rec("metric axioms for the Bures-Wasserstein distance");
    for_pairs(5, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream& rng) {
      const SpdMatrix c = input_ ? a : random_pd(rng, a.dim());
      const double dab = bures_distance(a, b).d;
      const double dba = bures_distance(b, a).d;
      const double dac = bures_distance(a, c).d;
      const double dcb = bures_distance(c, b).d;
      rec.record(bures_distance(a, a).d - 1e-12);
      rec.record(std::abs(dab - dba) - 1e-10);
      rec.record(dab - (dac + dcb) - 1e-9);
    });
    return rec.take();
  }

  PropertyResult orbit_minimality() const {
    check_detail::Recorder rec("orbit minimality of the polar alignment");
    for_pairs(6, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream& rng) {
      const double d = bures_distance(a, b).d;
      const Matrix q = random_orthogonal(rng, a.dim());
      const double generic = (a.sqrt_matrix() - b.sqrt_matrix() * q).norm();
      rec.record(d - generic - 1e-9);
      const Matrix u = polar_unitary(a, b);
      const double aligned = (a.sqrt_matrix() - b.sqrt_matrix() * u).norm();
      rec.record(std::abs(aligned - d) - 1e-9);
      rec.record((u.transpose() * u -
                  Matrix::Identity(a.dim(), a.dim())).norm() - kReconTol);
    });
    return rec.take();
  }

  PropertyResult density_matrix_identity() const {
    check_detail::Recorder rec("half d^2 = 1 - F for unit-trace states");
    for_pairs(7, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      const SpdMatrix an(a.matrix() / a.trace());
      const SpdMatrix bn(b.matrix() / b.trace());
      const DistanceReport rep = bures_distance(an, bn);
      rec.record(std::abs(0.5 * rep.d * rep.d - (1.0 - rep.fidelity)) - 1e-12);
    });
    return rec.take();
  }

  PropertyResult unitary_congruence_invariance() const {
    check_detail::Recorder rec("distance invariance under orthogonal congruence");
    for_pairs(8, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream& rng) {
      const Matrix q = random_orthogonal(rng, a.dim());
      const double d = bures_distance(a, b).d;
      const double d_conj =
          bures_distance(SpdMatrix(q * a.matrix() * q.transpose()),
                         SpdMatrix(q * b.matrix() * q.transpose()))
              .d;
      rec.record(std::abs(d - d_conj) - 1e-10);
    });
    return rec.take();
  }

  PropertyResult hellinger_dominates_distance() const {
    check_detail::Recorder rec("Hellinger distance dominates the metric");
    for_pairs(9, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      rec.record(bures_distance(a, b).d - hellinger(a, b) - 1e-12);
    });
    return rec.take();
  }

  PropertyResult affine_invariant_symmetries() const {
    check_detail::Recorder rec("affine-invariant delta symmetry and congruence");
    for_pairs(10, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream& rng) {
      const double delta = affine_invariant_delta(a, b);
      rec.record(std::abs(delta - affine_invariant_delta(b, a)) - 1e-10);
      rec.record(std::abs(delta - affine_invariant_delta(inverse(a), inverse(b))) -
                 1e-9);
      Matrix x = random_gaussian_matrix(rng, a.dim(), a.dim());
      x += 3.0 * Matrix::Identity(a.dim(), a.dim());  // keep invertible
      const double delta_conj =
          affine_invariant_delta(SpdMatrix(x * a.matrix() * x.transpose()),
                                 SpdMatrix(x * b.matrix() * x.transpose()));
      rec.record(std::abs(delta - delta_conj) / std::max(delta, 1.0) - 1e-9);
    });
    return rec.take();
  }

  PropertyResult fidelity_variational() const {
    check_detail::Recorder rec("variational characterizations of fidelity");
    for_pairs(11, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream& rng) {
      std::vector<SpdMatrix> probes;
      for (int k = 0; k < 20; ++k) probes.push_back(random_pd(rng, a.dim()));
      rec.record_bool(fidelity_variational_check(a, b, probes).all_pass());
    });
    return rec.take();
  }

  PropertyResult geodesic_endpoints_and_interpolation() const {
    check_detail::Recorder rec("geodesic endpoints and distance interpolation");
    for_pairs(12, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      const GeodesicPath path(a, b);
      rec.record((path.evaluate(0.0).matrix() - a.matrix()).norm() /
                     a.matrix().norm() - kReconTol);
      rec.record((path.evaluate(1.0).matrix() - b.matrix()).norm() /
                     b.matrix().norm() - kReconTol);
      const double d = bures_distance(a, b).d;
      for (double t : {0.25, 0.5, 0.75}) {
        const double dt = bures_distance(a, path.evaluate(t)).d;
        rec.record(std::abs(dt - t * d) / std::max(d, 1e-12) - 1e-8);
      }
    });
    return rec.take();
  }

  PropertyResult geodesic_loewner_bounds() const {
    check_detail::Recorder rec("geodesic below the chord; cross term below A+B");
    for_pairs(13, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      const GeodesicPath path(a, b);
      const Matrix sum = a.matrix() + b.matrix();
      rec.record_bool(loewner_leq(path.cross_term().matrix(), sum, 1e-9));
      for (double t = 0.1; t < 0.95; t += 0.1) {
        const Matrix chord = (1.0 - t) * a.matrix() + t * b.matrix();
        rec.record_bool(loewner_leq(path.evaluate(t).matrix(), chord, 1e-9));
      }
    });
    return rec.take();
  }

  PropertyResult geodesic_semigroup() const {
    check_detail::Recorder rec("geodesic reparametrization semigroup");
    for_pairs(14, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream& rng) {
      const GeodesicPath path(a, b);
      const double s = rng.next_unit();
      const double t = rng.next_unit();
      const double u = rng.next_unit();
      const GeodesicPath inner(path.evaluate(s), path.evaluate(t));
      const Matrix lhs = inner.evaluate(u).matrix();
      const Matrix rhs = path.evaluate((1.0 - u) * s + u * t).matrix();
      rec.record((lhs - rhs).norm() / rhs.norm() - 1e-8);
    });
    return rec.take();
  }

  PropertyResult riemannian_inner_dual_formula() const {
    check_detail::Recorder rec("Riemannian inner product matches tr(KAH)");
    for_pairs(15, [&](const SpdMatrix& a, const SpdMatrix&, NormalStream& rng) {
      const SymMatrix y = random_sym(rng, a.dim());
      const SymMatrix z = random_sym(rng, a.dim());
      const double spectral = riemannian_inner(a, y, z);
      const SymMatrix h = sylvester_solve(a, y);
      const SymMatrix k = sylvester_solve(a, z);
      const double lifted = (k.matrix() * a.matrix() * h.matrix()).trace();
      rec.record(std::abs(spectral - lifted) - 1e-10);
      rec.record(1e-15 - riemannian_inner(a, y, y));  // positivity
    });
    return rec.take();
  }

  PropertyResult curve_length_matches_distance() const {
    check_detail::Recorder rec("quadrature curve length equals the distance");
    for_pairs(16, [&](const SpdMatrix& a, const SpdMatrix& b, NormalStream&) {
      const double d = bures_distance(a, b).d;
      const double len = curve_length(GeodesicPath(a, b), 64);
      rec.record(std::abs(len - d) / std::max(d, 1e-12) - 1e-6);
    });
    return rec.take();
  }

  PropertyResult nonmonotonicity_witness() const {
    check_detail::Recorder rec("mean is not above its argument (2x2 witness)");
    Matrix a(2, 2), b(2, 2);
    a << 1, 1, 1, 2;
    b << 3, 1, 1, 2;
    const SpdMatrix mean = wasserstein_mean(SpdMatrix(a), SpdMatrix(b));
    const SpectralDecomposition gap = eigh(mean.matrix() - a);
    rec.record(gap.eigenvalues(gap.eigenvalues.size() - 1));  // must be negative
    return rec.take();
  }

  // Falsifiable search for the harmonic lower bound; a found violation is
  // recorded in the note, absence does not fail the suite.
  PropertyResult harmonic_lower_bound_search() const {
    check_detail::Recorder rec("harmonic lower bound on the mean (search)");
    NormalStream rng(seed_, 17);
    int found_at = -1;
    for (int t = 0; t < 1000; ++t) {
      const SpdMatrix a = random_pd(rng, 2, 0.05, 5.0);
      const SpdMatrix b = random_pd(rng, 2, 0.05, 5.0);
      const Matrix harmonic =
          SpdMatrix(0.5 * (a.inverse_matrix() + b.inverse_matrix()))
              .inverse_matrix();
      rec.record(0.0);
      if (!loewner_leq(harmonic, wasserstein_mean(a, b).matrix(), 0.0)) {
        found_at = t;
        break;
      }
    }
    rec.note(found_at >= 0
                 ? "violation witnessed at trial " + std::to_string(found_at)
                 : "no violation found in 1000 trials");
    return rec.take();
  }

  PropertyResult barycenter_invariants() const {
    check_detail::Recorder rec("barycentre monotonicity, bounds and uniqueness");
    for_ensembles(18, [&](std::span<const SpdMatrix> as, const Weights& w,
                          NormalStream& rng) {
      const BarycenterSolution sol = barycenter(as, w);
      rec.record_bool(sol.converged);
      for (std::size_t n = 1; n + 1 < sol.trace_sequence.size(); ++n) {
        rec.record(sol.trace_sequence[n] - sol.trace_sequence[n + 1] - 1e-12);
      }
      for (std::size_t n = 0; n + 1 < sol.variance_sequence.size(); ++n) {
        rec.record(sol.variance_sequence[n + 1] - sol.variance_sequence[n] - 1e-12);
      }
      Matrix arith = Matrix::Zero(as[0].dim(), as[0].dim());
      for (std::size_t j = 0; j < as.size(); ++j) arith += w[j] * as[j].matrix();
      rec.record_bool(loewner_leq(sol.omega.matrix(), arith, 1e-9));

      // Thm 10 sharpened variance drop at a random point
      const SpdMatrix probe = random_pd(rng, as[0].dim());
      const SpdMatrix mapped = map_K(probe, as, w);
      const double drop = variance(probe, as, w) - variance(mapped, as, w);
      const double step = bures_distance(probe, mapped).d;
      rec.record(step * step - drop - 1e-9);
      rec.record_bool(loewner_leq(mapped.matrix(), arith, 1e-9));

      // uniqueness: restart from a distinct initial
      BarycenterConfig cfg;
      cfg.initial = random_pd(rng, as[0].dim());
      const BarycenterSolution again = barycenter(as, w, cfg);
      rec.record((sol.omega.matrix() - again.omega.matrix()).norm() /
                     sol.omega.matrix().norm() - 10.0 * cfg.tol);

      // permutation invariance
      std::vector<SpdMatrix> perm(as.rbegin(), as.rend());
      std::vector<double> wperm(w.values().rbegin(), w.values().rend());
      const BarycenterSolution rev = barycenter(perm, Weights(wperm));
      rec.record((sol.omega.matrix() - rev.omega.matrix()).norm() - 1e-10);
    });
    return rec.take();
  }

  PropertyResult trace_inequalities() const {
    check_detail::Recorder rec("trace inequalities for the barycentre map");
    for_ensembles(19, [&](std::span<const SpdMatrix> as, const Weights& w,
                          NormalStream& rng) {
      const SpdMatrix a = random_pd(rng, as[0].dim());
      const SpdMatrix k = map_K(a, as, w);
      double lhs = 0.0;
      for (std::size_t j = 0; j < as.size(); ++j) {
        const Matrix rj = as[j].sqrt_matrix();
        lhs += w[j] * sqrt_psd_matrix(rj * k.matrix() * rj).trace();
      }
      rec.record(k.trace() - lhs - 1e-9);

      // A = I specialization
      const SpdMatrix k_at_identity =
          map_K(SpdMatrix(Matrix::Identity(as[0].dim(), as[0].dim())), as, w);
      double lhs_id = 0.0;
      for (std::size_t j = 0; j < as.size(); ++j) {
        const Matrix rj = as[j].sqrt_matrix();
        lhs_id += w[j] * sqrt_psd_matrix(rj * k_at_identity.matrix() * rj).trace();
      }
      rec.record(k_at_identity.trace() - lhs_id - 1e-9);
    });
    return rec.take();
  }

  PropertyResult strict_concavity() const {
    check_detail::Recorder rec("strict concavity of the trace square root");
    for_pairs(20, [&](const SpdMatrix& x, const SpdMatrix& y, NormalStream& rng) {
      if ((x.matrix() - y.matrix()).norm() <= 1e-3) return;
      const double alpha = 0.1 + 0.8 * rng.next_unit();
      const double beta = 1.0 - alpha;
      const double mixed =
          sqrt_psd(SpdMatrix(alpha * x.matrix() + beta * y.matrix())).matrix().trace();
      const double split = alpha * sqrt_psd(x).matrix().trace() +
                           beta * sqrt_psd(y).matrix().trace();
      rec.record(split - mixed + 1e-15);  // strict: mixed > split
    });
    return rec.take();
  }

  PropertyResult commuting_case_oracles() const {
    check_detail::Recorder rec("commuting case: power mean and Hellinger collapse");
    NormalStream rng(seed_, 21);
    UniformStream unit(seed_, 4021);
    const int reps = std::max(trials_ / 20, 1);
    for (int t = 0; t < reps; ++t) {
      const Eigen::Index dim = 2 + static_cast<Eigen::Index>(unit.next_unit() * 4);
      const int m = 2 + static_cast<int>(unit.next_unit() * 3);
      std::vector<SpdMatrix> as;
      for (int j = 0; j < m; ++j) as.push_back(random_diagonal_pd(unit, dim));
      const Weights w = Weights::uniform(static_cast<std::size_t>(m));
      const BarycenterSolution sol = barycenter(as, w);
      const SpdMatrix q_half = power_mean_half(as, w);
      rec.record((sol.omega.matrix() - q_half.matrix()).norm() /
                     q_half.matrix().norm() - 1e-9);
      rec.record(std::abs(bures_distance(as[0], as[1]).d -
                          hellinger(as[0], as[1])) - 1e-12);
    }
    (void)rng;
    return rec.take();
  }

  PropertyResult coupling_plan_invariants() const {
    check_detail::Recorder rec("coupling maps partition identity and pushforward");
    for_ensembles(22, [&](std::span<const SpdMatrix> as, const Weights& w,
                          NormalStream&) {
      const CouplingPlan plan = build_coupling(as, w);
      Matrix r_sum = Matrix::Zero(plan.omega.dim(), plan.omega.dim());
      for (std::size_t j = 0; j < plan.r_maps.size(); ++j) {
        r_sum += w[j] * plan.r_maps[j].matrix();
      }
      rec.record((r_sum - Matrix::Identity(plan.omega.dim(), plan.omega.dim()))
                     .norm() - 1e-8);
      for (std::size_t j = 1; j < as.size(); ++j) {
        const Matrix& p = plan.pair_maps[j - 1];
        rec.record((p * as[0].matrix() * p.transpose() - as[j].matrix()).norm() /
                       as[j].matrix().norm() - 1e-7);
      }
      rec.record(std::abs(plan.optimal_value - plan.omega.trace()));
    });
    return rec.take();
  }

  std::optional<check_detail::Ensemble> input_;
  int trials_;
  std::uint64_t seed_;
};

}  // namespace bures
