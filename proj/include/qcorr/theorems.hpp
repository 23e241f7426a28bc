// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/bell.hpp"
#include "qcorr/discord.hpp"
#include "qcorr/measurement.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Executable checks of the factorization law, the residual-quantumness
// identity, the projective dead end, the multi-outcome extension and the
// weak-measurement chain. Failures are reported, never thrown.

struct ChainStep {
  std::size_t n = 0;
  double tqd_n = 0.0;
  double qcc_n = 0.0;
  double partial_sum = 0.0;
};

struct ChainReport {
  std::vector<ChainStep> steps;
  double strength = 0.0;
  double predicted_decay = 0.0;  // overlap factor sech x
  double initial_tqd = 0.0;
};

struct WorstCase {
  std::uint64_t seed = 0;
  double x = 0.0;
  BlochProjectorPair basis{0.0, 0.0};
};

struct VerificationReport {
  std::string theorem;
  std::size_t trials = 0;
  double max_abs_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  WorstCase worst_case;
  // Per-strength deviation of the completed series from tqd; populated by
  // the corollary verifier only.
  std::vector<std::pair<double, double>> deviation_trend;
};

namespace detail {

// Chains below this are treated as fully drained; remaining rows are
// recorded as exact zeros.
inline constexpr double kChainFloor = 1e-10;

struct ErrorTracker {
  double max_error = 0.0;
  WorstCase worst;

  void update(double err, std::uint64_t seed, double x,
              const BlochProjectorPair& basis) {
    if (err > max_error) {
      max_error = err;
      worst = WorstCase{seed, x, basis};
    }
  }
};

inline VerificationReport finish(std::string theorem, std::size_t trials,
                                 double tolerance, ErrorTracker tracker) {
  VerificationReport report;
  report.theorem = std::move(theorem);
  report.trials = trials;
  report.max_abs_error = tracker.max_error;
  report.tolerance = tolerance;
  report.passed = tracker.max_error <= tolerance;
  report.worst_case = tracker.worst;
  return report;
}

inline BlochProjectorPair random_basis(GaussianSampler& sampler) {
  const double theta = std::acos(1.0 - 2.0 * sampler.uniform01());
  const double phi = 2.0 * M_PI * sampler.uniform01();
  return {theta, phi};
}

}  // namespace detail

// Factorization law: independently optimized qcc against
// (1 - overlap) * tqd on Ginibre states.
inline VerificationReport verify_theorem1(std::size_t trials,
                                          std::uint64_t seed,
                                          const std::vector<double>& strengths,
                                          double tol, std::size_t dim_b = 2,
                                          const OptimizerOptions& opt = {}) {
  detail::ErrorTracker tracker;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = seed + t;
    const DensityMatrix rho = random_state(dim_b, 2 * dim_b, trial_seed);
    const double d = tqd(rho, opt).value;
    for (double x : strengths) {
      const OptimizationResult w = qcc(rho, x, opt);
      const double predicted = (1.0 - overlap_factor(x)) * d;
      tracker.update(std::abs(w.value - predicted), trial_seed, x, w.basis);
    }
  }
  return detail::finish("theorem1", trials, tol, tracker);
}

// Residual identity: the post-weak-measured state at the qcc-optimal
// basis has tqd equal to tqd - qcc, cross-checked against overlap * tqd.
inline VerificationReport verify_theorem2(std::size_t trials,
                                          std::uint64_t seed,
                                          const std::vector<double>& strengths,
                                          double tol, std::size_t dim_b = 2,
                                          const OptimizerOptions& opt = {}) {
  detail::ErrorTracker tracker;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = seed + t;
    const DensityMatrix rho = random_state(dim_b, 2 * dim_b, trial_seed);
    const double d = tqd(rho, opt).value;
    for (double x : strengths) {
      const OptimizationResult w = qcc(rho, x, opt);
      const DensityMatrix after =
          channel_two_outcome(rho, TwoOutcomeWeakMeasurement(x, w.basis));
      const double d_after = tqd(after, opt).value;
      const double err =
          std::max(std::abs(d_after - (d - w.value)),
                   std::abs(d_after - overlap_factor(x) * d));
      tracker.update(err, trial_seed, x, w.basis);
    }
  }
  return detail::finish("theorem2", trials, tol, tracker);
}

// Projective dead end: after any projective measurement on A the qcc
// vanishes for every strength. The projection basis is random, not the
// optimal one; the statement quantifies over all of them.
inline VerificationReport verify_theorem3(std::size_t trials,
                                          std::uint64_t seed,
                                          const std::vector<double>& strengths,
                                          double tol, std::size_t dim_b = 2,
                                          const OptimizerOptions& opt = {}) {
  detail::ErrorTracker tracker;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = seed + t;
    const DensityMatrix rho = random_state(dim_b, 2 * dim_b, trial_seed);
    detail::GaussianSampler sampler(trial_seed ^ 0x9e3779b97f4a7c15ULL);
    const BlochProjectorPair projection = detail::random_basis(sampler);
    const DensityMatrix projected = projective_channel(rho, projection);
    for (double x : strengths) {
      tracker.update(qcc(projected, x, opt).value, trial_seed, x, projection);
    }
  }
  return detail::finish("theorem3", trials, tol, tracker);
}

struct CoefficientSet {
  std::vector<double> alphas;
  std::vector<double> betas;
};

// Representative n-outcome coefficient sets for n in {2, 3, 4}, covering
// the two-outcome reduction, the projective case, a generic three-outcome
// set, the identity channel and a generic four-outcome set.
inline std::vector<CoefficientSet> default_coefficient_sets() {
  const auto [a1, b1] = weak_coefficients(1.0);
  const double r3 = 1.0 / std::sqrt(3.0);
  return {
      {{a1, b1}, {b1, a1}},
      {{1.0, 0.0}, {0.0, 1.0}},
      {{0.8, 0.6, 0.0}, {0.0, 0.6, 0.8}},
      {{r3, r3, r3}, {r3, r3, r3}},
      {{0.7, 0.1, 0.5, 0.5}, {0.5, 0.5, 0.1, 0.7}},
  };
}

// Multi-outcome extension: qcc_multi against (1 - sum alpha_i beta_i) * tqd.
inline VerificationReport verify_theorem4(
    std::size_t trials, std::uint64_t seed,
    const std::vector<CoefficientSet>& coeff_sets, double tol,
    std::size_t dim_b = 2, const OptimizerOptions& opt = {}) {
  std::vector<double> factors;
  for (const CoefficientSet& set : coeff_sets) {
    factors.push_back(MultiOutcomeWeakMeasurement(
                          set.alphas, set.betas, BlochProjectorPair::z_basis())
                          .overlap());
  }
  detail::ErrorTracker tracker;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = seed + t;
    const DensityMatrix rho = random_state(dim_b, 2 * dim_b, trial_seed);
    const double d = tqd(rho, opt).value;
    for (std::size_t s = 0; s < coeff_sets.size(); ++s) {
      const OptimizationResult w =
          qcc_multi(rho, coeff_sets[s].alphas, coeff_sets[s].betas, opt);
      const double predicted = (1.0 - factors[s]) * d;
      // The strength slot of the worst case carries the overlap factor;
      // an n-outcome set has no scalar strength.
      tracker.update(std::abs(w.value - predicted), trial_seed, factors[s],
                     w.basis);
    }
  }
  return detail::finish("theorem4", trials, tol, tracker);
}

// Iterates rho_{n+1} = Pi_2(rho_n) at each step's qcc-optimal basis,
// recording tqd_n, qcc_n and the running sum of extracted quantumness.
inline ChainReport run_chain(const DensityMatrix& rho, double x,
                             std::size_t n_steps,
                             const OptimizerOptions& opt = {}) {
  if (n_steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_steps must be >= 1");
  }
  if (!(x > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "chain strength must be positive");
  }
  ChainReport report;
  report.strength = x;
  report.predicted_decay = overlap_factor(x);

  DensityMatrix state = rho;
  double partial = 0.0;
  bool drained = false;
  for (std::size_t n = 0; n < n_steps; ++n) {
    ChainStep step;
    step.n = n;
    if (!drained) {
      const OptimizationResult t = tqd(state, opt);
      step.tqd_n = t.value;
      if (n == 0) report.initial_tqd = t.value;
      if (t.value < detail::kChainFloor) {
        drained = true;
        step.tqd_n = 0.0;
        step.qcc_n = 0.0;
      } else {
        const OptimizationResult w = qcc(state, x, opt);
        step.qcc_n = w.value;
        partial += w.value;
        state = channel_two_outcome(state,
                                    TwoOutcomeWeakMeasurement(x, w.basis));
      }
    }
    step.partial_sum = partial;
    report.steps.push_back(step);
  }
  return report;
}

// Series check of the chain corollary. The head of each series is run
// numerically (per-step comparison against the geometric law); past the
// head the series is continued with the exact geometric form, truncated
// at the N(x) where the decay factor drops below 1e-10, and the tail
// beyond N(x) is summed in closed form.
inline VerificationReport verify_corollary_sum(
    const DensityMatrix& rho, const std::vector<double>& x_values, double tol,
    std::size_t numeric_head = 25, const OptimizerOptions& opt = {}) {
  detail::ErrorTracker tracker;
  VerificationReport report;
  const double d0 = tqd(rho, opt).value;

  for (double x : x_values) {
    if (!(x > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "corollary strengths must be positive");
    }
    const double q = overlap_factor(x);
    // Smallest N with q^{N+1} < 1e-10.
    const std::size_t series_n =
        (q <= 0.0) ? 0
                   : static_cast<std::size_t>(
                         std::floor(std::log(1e-10) / std::log(q)));
    const std::size_t head = std::min(series_n, numeric_head);

    const ChainReport chain = run_chain(rho, x, head + 1, opt);
    BlochProjectorPair basis = BlochProjectorPair::z_basis();
    for (const ChainStep& step : chain.steps) {
      const double predicted = (1.0 - q) * std::pow(q, step.n) * d0;
      if (step.tqd_n > 0.0 || predicted > detail::kChainFloor) {
        tracker.update(std::abs(step.qcc_n - predicted), 0, x, basis);
      }
    }

    const double measured_partial = chain.steps.back().partial_sum;
    const double tail_start = std::pow(q, static_cast<double>(head) + 1.0);
    const double tail_end = std::pow(q, static_cast<double>(series_n) + 1.0);
    const double partial_n = measured_partial + (tail_start - tail_end) * d0;
    tracker.update(std::abs(partial_n - (1.0 - tail_end) * d0), 0, x, basis);

    const double completed = partial_n + tail_end * d0;
    report.deviation_trend.emplace_back(x, std::abs(completed - d0));
    tracker.update(std::abs(completed - d0), 0, x, basis);
  }

  VerificationReport out =
      detail::finish("corollary", x_values.size(), tol, tracker);
  out.deviation_trend = std::move(report.deviation_trend);
  return out;
}

}  // namespace qcorr
