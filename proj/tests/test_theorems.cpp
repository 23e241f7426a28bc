// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_support.hpp"

using namespace qcorr;

namespace {
double sech(double x) { return 1.0 / std::cosh(x); }
}  // namespace

TEST_CASE("factorization law verifier", "[theorems]") {
  const VerificationReport report =
      verify_theorem1(20, 1, {0.1, 1.0, 5.0}, 1e-6);
  INFO("max error " << report.max_abs_error);
  REQUIRE(report.passed);
  REQUIRE(report.trials == 20);

  // x = 0: both sides vanish identically.
  const VerificationReport trivial = verify_theorem1(1, 1, {0.0}, 1e-12);
  REQUIRE(trivial.passed);
  REQUIRE(trivial.max_abs_error <= 1e-15);
}

TEST_CASE("residual identity verifier", "[theorems]") {
  const VerificationReport report = verify_theorem2(8, 1, {0.5, 2.0}, 1e-6);
  INFO("max error " << report.max_abs_error);
  REQUIRE(report.passed);

  // Bell-diagonal reference: D(rho~) = sech(1) * 0.2 after the optimal
  // weak measurement at x = 1.
  const DensityMatrix rho = bell_diagonal({0.1, 0.2, 0.3});
  const OptimizationResult w = qcc(rho, 1.0);
  const DensityMatrix after =
      channel_two_outcome(rho, TwoOutcomeWeakMeasurement(1.0, w.basis));
  REQUIRE(tqd(after).value ==
          Catch::Approx(0.12961085473277708).margin(1e-6));

  // x = 0 leaves the state unchanged.
  const DensityMatrix same =
      channel_two_outcome(rho, TwoOutcomeWeakMeasurement(
                                   0.0, BlochProjectorPair::z_basis()));
  REQUIRE(same.matrix().approx_equal(rho.matrix(), 1e-14));

  // Projective limit: nothing remains.
  const OptimizationResult wp = qcc(rho, 20.0);
  const DensityMatrix drained =
      channel_two_outcome(rho, TwoOutcomeWeakMeasurement(20.0, wp.basis));
  REQUIRE(tqd(drained).value <= 1e-7);
}

TEST_CASE("projective dead-end verifier", "[theorems]") {
  const VerificationReport report =
      verify_theorem3(10, 1, {0.1, 0.5, 1.0, 2.0, 5.0}, 1e-7);
  INFO("max error " << report.max_abs_error);
  REQUIRE(report.passed);

  // Bell-diagonal z projection has zero qcc at every strength.
  const DensityMatrix projected = bell_post_projective({0.1, 0.2, 0.3});
  for (double x : {0.2, 1.0, 20.0}) {
    REQUIRE(qcc(projected, x).value <= 1e-7);
  }
}

TEST_CASE("multi-outcome verifier and coefficient sets", "[theorems]") {
  // The generic three-outcome set has overlap 0.36, so the reduction
  // factor is 0.64.
  const MultiOutcomeWeakMeasurement three({0.8, 0.6, 0.0}, {0.0, 0.6, 0.8},
                                          BlochProjectorPair::z_basis());
  REQUIRE(three.overlap() == Catch::Approx(0.36).margin(1e-15));

  const std::vector<CoefficientSet> sets = default_coefficient_sets();
  REQUIRE(sets.size() == 5);

  const VerificationReport report = verify_theorem4(6, 1, sets, 1e-6);
  INFO("max error " << report.max_abs_error);
  REQUIRE(report.passed);
}

TEST_CASE("chain on a Bell-diagonal state follows the geometric law",
          "[theorems]") {
  const DensityMatrix rho = bell_diagonal({0.1, 0.2, 0.3});
  const double q = sech(1.0);
  const ChainReport report = run_chain(rho, 1.0, 10);

  REQUIRE(report.steps.size() == 10);
  REQUIRE(report.predicted_decay == Catch::Approx(q).margin(1e-15));
  REQUIRE(report.initial_tqd == Catch::Approx(0.2).margin(1e-7));

  double prev_partial = 0.0;
  for (const ChainStep& step : report.steps) {
    const double qn = std::pow(q, static_cast<double>(step.n));
    REQUIRE(step.tqd_n == Catch::Approx(qn * 0.2).margin(2e-6));
    REQUIRE(step.qcc_n == Catch::Approx((1.0 - q) * qn * 0.2).margin(2e-6));
    REQUIRE(step.partial_sum >= prev_partial);
    REQUIRE(step.partial_sum <= report.initial_tqd + 1e-8);
    prev_partial = step.partial_sum;
  }

  // Two weak measurements leave (2 alpha beta)^2 |c2| of the discord and
  // the next extraction costs (1 - 2 alpha beta) of that.
  REQUIRE(report.steps[2].qcc_n ==
          Catch::Approx((1.0 - q) * q * q * 0.2).margin(2e-6));

  // Finite partial sums match the closed geometric sum.
  const double n_steps = static_cast<double>(report.steps.size());
  REQUIRE(report.steps.back().partial_sum ==
          Catch::Approx((1.0 - std::pow(q, n_steps)) * 0.2).margin(1e-5));
}

TEST_CASE("chain decay ratio equals the overlap factor", "[theorems]") {
  const DensityMatrix rho = random_state(2, 4, 321);
  const double x = 1.0;
  const ChainReport report = run_chain(rho, x, 6);
  for (std::size_t n = 0; n + 1 < report.steps.size(); ++n) {
    if (report.steps[n].tqd_n > 1e-6 && report.steps[n + 1].tqd_n > 0.0) {
      const double ratio = report.steps[n + 1].tqd_n / report.steps[n].tqd_n;
      REQUIRE(ratio == Catch::Approx(sech(x)).epsilon(1e-5));
    }
  }
}

TEST_CASE("chain edge cases", "[theorems]") {
  // Projective strength drains everything in one step.
  const DensityMatrix rho = bell_diagonal({0.1, 0.2, 0.3});
  const ChainReport one = run_chain(rho, 20.0, 2);
  REQUIRE(one.steps[0].qcc_n ==
          Catch::Approx(one.steps[0].tqd_n).margin(1e-7));
  REQUIRE(one.steps[1].tqd_n <= 1e-7);

  // Zero-discord input: rows stay exactly zero.
  const ChainReport flat = run_chain(bell_diagonal({0.0, 0.0, 0.4}), 1.0, 4);
  for (const ChainStep& step : flat.steps) {
    REQUIRE(step.tqd_n == 0.0);
    REQUIRE(step.qcc_n == 0.0);
    REQUIRE(step.partial_sum == 0.0);
  }

  REQUIRE_THROWS_AS(run_chain(rho, 1.0, 0), Error);
  REQUIRE_THROWS_AS(run_chain(rho, 0.0, 3), Error);
}

TEST_CASE("corollary series verifier", "[theorems]") {
  const DensityMatrix rho = bell_diagonal({0.1, 0.2, 0.3});
  const VerificationReport report =
      verify_corollary_sum(rho, {0.5, 0.2, 0.1, 0.05}, 1e-6, 8);
  INFO("max error " << report.max_abs_error);
  REQUIRE(report.passed);
  REQUIRE(report.deviation_trend.size() == 4);
  for (const auto& [x, deviation] : report.deviation_trend) {
    REQUIRE(deviation <= 1e-6);
  }

  const VerificationReport trivial =
      verify_corollary_sum(bell_diagonal({0.0, 0.0, 0.4}), {0.5, 0.1}, 1e-9, 4);
  REQUIRE(trivial.passed);
  REQUIRE(trivial.max_abs_error <= 1e-12);
}
