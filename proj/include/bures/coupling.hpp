#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bures/barycentre.hpp"
#include "bures/geodesics.hpp"
#include "bures/random.hpp"
#include "bures/spd_core.hpp"

namespace bures {

/// The m-coupling solution: barycentre Omega, maps R_j = Omega^{-1}#A_j,
/// composed pair maps R_j R_1^{-1} (j >= 2), and the optimal value tr Omega.
struct CouplingPlan {
  SpdMatrix omega;
  std::vector<SpdMatrix> r_maps;
  std::vector<Matrix> pair_maps;  // R_j R_1^{-1}, j >= 2
  double optimal_value = 0.0;     // tr Omega
  std::vector<SpdMatrix> marginals;
  Weights weights;
};

/// Seeded Monte Carlo estimate; deterministic given (seed, samples).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline constexpr std::uint64_t kMcChunk = 1 << 16;

/// Partial sums of a scalar cost over seed-derived substreams, merged in
/// ascending chunk order.
template <typename PerSample>
McEstimate mc_accumulate(std::uint64_t samples, std::uint64_t seed,
                         PerSample&& per_sample) {
  if (samples < 1) {
    throw ParamOutOfRangeError("Monte Carlo requires at least one sample");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t done = 0;
  for (std::uint64_t chunk = 0; done < samples; ++chunk) {
    const std::uint64_t count = std::min(kMcChunk, samples - done);
    NormalStream rng(seed, chunk);
    double chunk_sum = 0.0;
    double chunk_sum_sq = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double c = per_sample(rng);
      chunk_sum += c;
      chunk_sum_sq += c * c;
    }
    sum += chunk_sum;
    sum_sq += chunk_sum_sq;
    done += count;
  }
  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.mean = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(samples) * est.mean * est.mean) /
                          static_cast<double>(samples - 1));
    est.std_error = std::sqrt(var / static_cast<double>(samples));
  }
  return est;
}

inline Vector draw_standard_normal(NormalStream& rng, Eigen::Index n) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.next();
  return z;
}

}  // namespace detail

/// Solves the m-coupling problem: the barycentre gives Omega, the maps
/// R_j = Omega^{-1}#A_j satisfy sum_j w_j R_j = I and R_j Omega R_j = A_j;
/// the maximum value of E||sum w_j x_j||^2 is tr Omega.
inline CouplingPlan build_coupling(std::span<const SpdMatrix> as,
                                   const Weights& w,
                                   const BarycenterConfig& cfg = {}) {
  BarycenterSolution bary = barycenter(as, w, cfg);
  CouplingPlan plan{std::move(bary.omega), {}, {}, 0.0,
                    std::vector<SpdMatrix>(as.begin(), as.end()), w};
  const SpdMatrix omega_inv = inverse(plan.omega);
  Matrix r_sum = Matrix::Zero(plan.omega.dim(), plan.omega.dim());
  for (std::size_t j = 0; j < as.size(); ++j) {
    plan.r_maps.push_back(geometric_mean(omega_inv, as[j]));
    r_sum += w[j] * plan.r_maps.back().matrix();
    const double pushforward_defect =
        (plan.r_maps[j].matrix() * plan.omega.matrix() * plan.r_maps[j].matrix() -
         as[j].matrix())
            .norm() /
        as[j].matrix().norm();
    if (pushforward_defect > kReconTol) {
      throw NumericalError("coupling map fails R_j Omega R_j = A_j");
    }
  }
  const double partition_defect =
      (r_sum - Matrix::Identity(plan.omega.dim(), plan.omega.dim())).norm();
  if (partition_defect > kReconTol * std::sqrt(static_cast<double>(plan.omega.dim()))) {
    throw NumericalError("coupling maps fail sum_j w_j R_j = I");
  }
  const Matrix r1_inv = plan.r_maps[0].inverse_matrix();
  for (std::size_t j = 1; j < as.size(); ++j) {
    plan.pair_maps.push_back(plan.r_maps[j].matrix() * r1_inv);
  }
  plan.optimal_value = plan.omega.trace();
  return plan;
}

/// Estimates E||x - Tx||^2 for x ~ N(0, A) and T the optimal transport map
/// to B; converges to d^2(A,B).
inline McEstimate mc_pair_cost(const SpdMatrix& a, const SpdMatrix& b,
                               std::uint64_t samples, std::uint64_t seed) {
  const TransportMap t = transport_map(a, b);
  const Matrix root_a = a.sqrt_matrix();
  const Matrix residual_map =
      Matrix::Identity(a.dim(), a.dim()) - t.matrix.matrix();
  return detail::mc_accumulate(samples, seed, [&](NormalStream& rng) {
    const Vector x = root_a * detail::draw_standard_normal(rng, a.dim());
    return (residual_map * x).squaredNorm();
  });
}

/// Estimates E||sum_j w_j x_j||^2 under the coupled tuple x_j = R_j R_1^{-1} x_1;
/// converges to tr Omega. Each sample cross-checks the collapsed form
/// sum_j w_j x_j = R_1^{-1} x_1.
inline McEstimate mc_coupling_value(const CouplingPlan& plan, const Weights& w,
                                    std::uint64_t samples, std::uint64_t seed) {
  if (w.size() != plan.r_maps.size()) {
    throw DimensionMismatchError("mc_coupling_value weight count mismatch");
  }
  const Eigen::Index n = plan.omega.dim();
  const Matrix root_a1 = plan.marginals[0].sqrt_matrix();
  const Matrix r1_inv = plan.r_maps[0].inverse_matrix();
  return detail::mc_accumulate(samples, seed, [&](NormalStream& rng) {
    const Vector x1 = root_a1 * detail::draw_standard_normal(rng, n);
    Vector combined = w[0] * x1;
    for (std::size_t j = 1; j < plan.r_maps.size(); ++j) {
      combined += w[j] * (plan.pair_maps[j - 1] * x1);
    }
    const Vector collapsed = r1_inv * x1;
    if ((combined - collapsed).norm() >
        1e-9 * std::max(1.0, collapsed.norm())) {
      throw NumericalError("coupled sum disagrees with R_1^{-1} x_1");
    }
    return combined.squaredNorm();
  });
}

}  // namespace bures
