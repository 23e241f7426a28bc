// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/config.hpp"
#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measurement.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Coarse grid over the half-sphere followed by compass-search refinement.
// theta in [0, pi/2] suffices: swapping pi1 <-> pi2 leaves every objective
// here invariant. The default step tolerance is tighter than the argmin
// accuracy the values need because objectives with a zero minimum behave
// linearly, not quadratically, around the optimal basis.
// max_refine_iterations is a safety valve, not a budget the search is
// expected to reach: the phi coordinate degenerates at the poles, where
// compass search can spend a while circling before the step halves.
struct OptimizerOptions {
  std::size_t theta_points = 64;
  std::size_t phi_points = 128;
  std::size_t max_refine_iterations = 50000;
  double step_tolerance = 1e-9;
};

struct OptimizationResult {
  double value = 0.0;
  BlochProjectorPair basis{0.0, 0.0};
  std::size_t objective_evaluations = 0;
  std::size_t refinement_rounds = 0;
  bool converged = false;
};

namespace detail {

// Global minimization of a smooth objective over measurement bases.
// Ties on the grid resolve to the smallest (theta, phi) scanned, which
// keeps regression outputs deterministic.
template <typename Objective>
OptimizationResult minimize_over_bases(Objective&& objective,
                                       const OptimizerOptions& opt) {
  if (opt.theta_points < 2 || opt.phi_points < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "grid must have at least 2 theta and 1 phi points");
  }
  OptimizationResult res;
  auto eval = [&](double theta, double phi) {
    ++res.objective_evaluations;
    return objective(BlochProjectorPair(theta, phi));
  };

  const double dtheta = 0.5 * M_PI / static_cast<double>(opt.theta_points - 1);
  const double dphi = 2.0 * M_PI / static_cast<double>(opt.phi_points);

  double best_theta = 0.0, best_phi = 0.0;
  double best = eval(0.0, 0.0);
  for (std::size_t i = 0; i < opt.theta_points; ++i) {
    const double theta = static_cast<double>(i) * dtheta;
    // theta = 0 is a pole; every phi gives the same basis.
    const std::size_t phis = (i == 0) ? 1 : opt.phi_points;
    for (std::size_t j = (i == 0) ? 1 : 0; j < phis; ++j) {
      const double phi = static_cast<double>(j) * dphi;
      const double v = eval(theta, phi);
      if (v < best) {
        best = v;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  double step_theta = dtheta;
  double step_phi = dphi;
  while (std::max(step_theta, step_phi) >= opt.step_tolerance &&
         res.refinement_rounds < opt.max_refine_iterations) {
    ++res.refinement_rounds;
    const double cand_theta[4] = {best_theta - step_theta,
                                  best_theta + step_theta, best_theta,
                                  best_theta};
    const double cand_phi[4] = {best_phi, best_phi, best_phi - step_phi,
                                best_phi + step_phi};
    double move_best = best;
    int move_idx = -1;
    for (int k = 0; k < 4; ++k) {
      const double v = eval(cand_theta[k], cand_phi[k]);
      if (v < move_best) {
        move_best = v;
        move_idx = k;
      }
    }
    if (move_idx >= 0) {
      best = move_best;
      best_theta = cand_theta[move_idx];
      best_phi = cand_phi[move_idx];
    } else {
      step_theta *= 0.5;
      step_phi *= 0.5;
    }
  }
  res.converged = std::max(step_theta, step_phi) < opt.step_tolerance;
  if (!res.converged) {
    throw Error(ErrorCode::ConvergenceFailure,
                "basis refinement stalled above the step tolerance after " +
                    std::to_string(res.refinement_rounds) + " rounds");
  }
  res.value = best;
  res.basis = BlochProjectorPair(best_theta, best_phi);
  return res;
}

// Rotates rho into the measurement eigenbasis on A and zeroes the
// diagonal blocks, producing pi1 rho pi2 + pi2 rho pi1 up to the basis
// rotation (which leaves the trace norm unchanged). Only the (0,1) block
// of the rotation is formed; the (1,0) block is its adjoint.
inline ComplexMatrix offdiag_block_matrix(const ComplexMatrix& rho,
                                          std::size_t dim_b,
                                          const BlochProjectorPair& basis) {
  const ComplexMatrix v = basis.ket();
  ComplexMatrix u(2, 2);  // columns |n>, |n_perp>
  u(0, 0) = v(0, 0);
  u(1, 0) = v(1, 0);
  u(0, 1) = -std::conj(v(1, 0));
  u(1, 1) = std::conj(v(0, 0));

  ComplexMatrix out(2 * dim_b, 2 * dim_b);
  for (std::size_t ap = 0; ap < 2; ++ap)
    for (std::size_t bp = 0; bp < 2; ++bp) {
      const Complex w = std::conj(u(ap, 0)) * u(bp, 1);
      if (w == Complex(0.0, 0.0)) continue;
      for (std::size_t i = 0; i < dim_b; ++i)
        for (std::size_t j = 0; j < dim_b; ++j)
          out(i, dim_b + j) += w * rho(ap * dim_b + i, bp * dim_b + j);
    }
  for (std::size_t i = 0; i < dim_b; ++i)
    for (std::size_t j = 0; j < dim_b; ++j)
      out(dim_b + j, i) = std::conj(out(i, dim_b + j));
  return out;
}

}  // namespace detail

// || pi1 rho pi2 + pi2 rho pi1 ||_1 for measurement on A; zero exactly
// when rho is block-diagonal in this basis.
inline double offdiag_objective(const DensityMatrix& rho,
                                const BlochProjectorPair& basis) {
  return trace_norm(
      detail::offdiag_block_matrix(rho.matrix(), rho.dim_b(), basis));
}

// Trace-norm quantum discord: min over bases of offdiag_objective.
inline OptimizationResult tqd(const DensityMatrix& rho,
                              const OptimizerOptions& opt = {}) {
  return detail::minimize_over_bases(
      [&](const BlochProjectorPair& basis) {
        return offdiag_objective(rho, basis);
      },
      opt);
}

// Quantum correlation cost of a two-outcome weak measurement of strength
// x: min over bases of || rho - Pi_2(rho) ||_1. The channel image is built
// from the measurement operators at every evaluation; the factorization
// through the overlap factor is never used here, so it stays an
// independently testable prediction (see qcc_via_factorization for the
// shortcut).
inline OptimizationResult qcc(const DensityMatrix& rho, double x,
                              const OptimizerOptions& opt = {}) {
  const auto [alpha, beta] = weak_coefficients(x);
  if (x == 0.0) {
    // Identity channel; nothing to optimize.
    OptimizationResult res;
    res.converged = true;
    return res;
  }
  return detail::minimize_over_bases(
      [&, alpha = alpha, beta = beta](const BlochProjectorPair& basis) {
        const ComplexMatrix p1 = basis.projector1();
        const ComplexMatrix p2 = basis.projector2();
        const ComplexMatrix image = detail::two_outcome_image_raw(
            rho.matrix(), alpha * p1 + beta * p2, beta * p1 + alpha * p2,
            rho.dim_b());
        return trace_norm(rho.matrix() - image);
      },
      opt);
}

// n-outcome variant: min over bases of || rho - Pi_n(rho) ||_1.
inline OptimizationResult qcc_multi(const DensityMatrix& rho,
                                    const std::vector<double>& alphas,
                                    const std::vector<double>& betas,
                                    const OptimizerOptions& opt = {}) {
  // Validates the coefficient vectors once up front.
  MultiOutcomeWeakMeasurement probe(alphas, betas,
                                    BlochProjectorPair::z_basis());
  (void)probe;
  return detail::minimize_over_bases(
      [&](const BlochProjectorPair& basis) {
        MultiOutcomeWeakMeasurement m(alphas, betas, basis);
        ComplexMatrix image(rho.dim(), rho.dim());
        for (std::size_t i = 0; i < m.outcomes(); ++i) {
          image += detail::sandwich_on_a(m.operator_for(i), rho.matrix(),
                                         rho.dim_b());
        }
        return trace_norm(rho.matrix() - image);
      },
      opt);
}

// Fast path: (1 - 2 alpha beta) * tqd. Matches qcc up to optimizer
// tolerance by the factorization law.
inline double qcc_via_factorization(const DensityMatrix& rho, double x,
                                    const OptimizerOptions& opt = {}) {
  return (1.0 - overlap_factor(x)) * tqd(rho, opt).value;
}

// Residual quantumness: tqd - qcc, both freshly optimized. Equals
// sech(x) * tqd up to optimizer tolerance.
inline double residual_quantumness(const DensityMatrix& rho, double x,
                                   const OptimizerOptions& opt = {}) {
  return tqd(rho, opt).value - qcc(rho, x, opt).value;
}

// Entropic super quantum discord:
//   min over bases of p(+x) S(rho_B|+) + p(-x) S(rho_B|-)
//   + S(rho_A) - S(rho_AB).
// Branches with probability below kZeroProbability drop out (0 * log 0).
inline OptimizationResult super_quantum_discord(
    const DensityMatrix& rho, double x, const OptimizerOptions& opt = {}) {
  (void)weak_coefficients(x);  // strength validation
  const double s_a = von_neumann_entropy(rho.reduced_a());
  const double s_ab = von_neumann_entropy(rho.matrix());
  OptimizationResult res = detail::minimize_over_bases(
      [&](const BlochProjectorPair& basis) {
        const auto branches =
            conditional_states(rho, TwoOutcomeWeakMeasurement(x, basis));
        double cond = 0.0;
        for (const ConditionalBranch* b :
             {&branches.first, &branches.second}) {
          if (!b->zero_probability) {
            cond += b->probability * von_neumann_entropy(b->state_b);
          }
        }
        return cond;
      },
      opt);
  res.value += s_a - s_ab;
  return res;
}

// The quantities the compute surface reports for one (state, strength)
// pair. qcc <= tqd up to optimizer tolerance since the reduction factor
// 1 - overlap lies in [0, 1].
struct CorrelationReport {
  double tqd = 0.0;
  double qcc = 0.0;
  double overlap_factor = 0.0;
  double residual = 0.0;
  BlochProjectorPair basis_tqd{0.0, 0.0};
  BlochProjectorPair basis_qcc{0.0, 0.0};
};

inline CorrelationReport correlation_report(const DensityMatrix& rho,
                                            double x,
                                            const OptimizerOptions& opt = {}) {
  const OptimizationResult t = tqd(rho, opt);
  const OptimizationResult w = qcc(rho, x, opt);
  CorrelationReport report;
  report.tqd = t.value;
  report.qcc = w.value;
  report.overlap_factor = overlap_factor(x);
  report.residual = t.value - w.value;
  report.basis_tqd = t.basis;
  report.basis_qcc = w.basis;
  return report;
}

}  // namespace qcorr
