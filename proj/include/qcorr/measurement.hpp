// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/config.hpp"
#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Orthogonal rank-1 qubit projectors pi1 = |n><n|, pi2 = I - pi1 with
// |n> = (cos(theta/2), e^{i phi} sin(theta/2)). Angles are canonicalized
// to theta in [0, pi], phi in [0, 2 pi); the projectors are insensitive
// to the global phase dropped by the reflection rule.
class BlochProjectorPair {
 public:
  BlochProjectorPair(double theta, double phi) {
    theta = std::fmod(theta, 2.0 * M_PI);
    if (theta < 0.0) theta += 2.0 * M_PI;
    if (theta > M_PI) {
      theta = 2.0 * M_PI - theta;
      phi += M_PI;
    }
    phi = std::fmod(phi, 2.0 * M_PI);
    if (phi < 0.0) phi += 2.0 * M_PI;
    theta_ = theta;
    phi_ = phi;
  }

  static BlochProjectorPair z_basis() { return {0.0, 0.0}; }

  double theta() const { return theta_; }
  double phi() const { return phi_; }

  // Column vector |n>
  ComplexMatrix ket() const {
    ComplexMatrix v(2, 1);
    v(0, 0) = std::cos(0.5 * theta_);
    v(1, 0) = std::polar(std::sin(0.5 * theta_), phi_);
    return v;
  }

  ComplexMatrix projector1() const {
    const ComplexMatrix v = ket();
    return v * v.adjoint();
  }

  ComplexMatrix projector2() const {
    return ComplexMatrix::identity(2) - projector1();
  }

 private:
  double theta_, phi_;
};

// alpha = sqrt((1 - tanh x)/2), beta = sqrt((1 + tanh x)/2). Strengths at
// or above kProjectiveStrength collapse to (alpha, beta) = (0, 1) exactly.
inline std::pair<double, double> weak_coefficients(double x) {
  if (!(x >= 0.0)) {
    throw Error(ErrorCode::InvalidCoefficients,
                "measurement strength must be a nonnegative real");
  }
  if (x == 0.0) return {M_SQRT1_2, M_SQRT1_2};
  if (x >= kProjectiveStrength) return {0.0, 1.0};
  const double t = std::tanh(x);
  return {std::sqrt(0.5 * (1.0 - t)), std::sqrt(0.5 * (1.0 + t))};
}

// 2 alpha beta = sech x, the off-diagonal coherence surviving one
// two-outcome weak measurement. Evaluated as 1/cosh so it is exactly 1 at
// x = 0; exactly 0 in the projective regime by the clamp above.
inline double overlap_factor(double x) {
  if (!(x >= 0.0)) {
    throw Error(ErrorCode::InvalidCoefficients,
                "measurement strength must be a nonnegative real");
  }
  if (x >= kProjectiveStrength) return 0.0;
  return 1.0 / std::cosh(x);
}

class TwoOutcomeWeakMeasurement {
 public:
  TwoOutcomeWeakMeasurement(double x, BlochProjectorPair basis)
      : x_(x), basis_(basis) {
    std::tie(alpha_, beta_) = weak_coefficients(x);
  }

  double x() const { return x_; }
  const BlochProjectorPair& basis() const { return basis_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double overlap() const { return overlap_factor(x_); }
  bool projective() const { return alpha_ == 0.0; }

 private:
  double x_;
  BlochProjectorPair basis_;
  double alpha_, beta_;
};

// P(+x) = alpha pi1 + beta pi2 and P(-x) = beta pi1 + alpha pi2, as 2x2
// Hermitian PSD operators on A.
inline std::pair<ComplexMatrix, ComplexMatrix> weak_operators(
    const TwoOutcomeWeakMeasurement& m) {
  const ComplexMatrix p1 = m.basis().projector1();
  const ComplexMatrix p2 = m.basis().projector2();
  return {m.alpha() * p1 + m.beta() * p2, m.beta() * p1 + m.alpha() * p2};
}

// n-outcome weak measurement P(i) = alphas[i] pi1 + betas[i] pi2 with
// sum alphas^2 = sum betas^2 = 1. Coefficients must be nonnegative so the
// overlap factor sum_i alphas[i] betas[i] stays within [0, 1]; signed
// coefficient sets are rejected.
class MultiOutcomeWeakMeasurement {
 public:
  MultiOutcomeWeakMeasurement(std::vector<double> alphas,
                              std::vector<double> betas,
                              BlochProjectorPair basis)
      : alphas_(std::move(alphas)), betas_(std::move(betas)), basis_(basis) {
    if (alphas_.empty() || alphas_.size() != betas_.size()) {
      throw Error(ErrorCode::InvalidCoefficients,
                  "coefficient vectors must be nonempty and equal length");
    }
    double sum_a2 = 0.0, sum_b2 = 0.0;
    for (std::size_t i = 0; i < alphas_.size(); ++i) {
      if (!(alphas_[i] >= 0.0) || !(betas_[i] >= 0.0)) {
        throw Error(ErrorCode::InvalidCoefficients,
                    "coefficients must be nonnegative, outcome " +
                        std::to_string(i));
      }
      sum_a2 += alphas_[i] * alphas_[i];
      sum_b2 += betas_[i] * betas_[i];
    }
    if (std::abs(sum_a2 - 1.0) > 1e-10 || std::abs(sum_b2 - 1.0) > 1e-10) {
      throw Error(ErrorCode::InvalidCoefficients,
                  "normalization violated: sum alpha^2 = " +
                      std::to_string(sum_a2) + ", sum beta^2 = " +
                      std::to_string(sum_b2));
    }
  }

  std::size_t outcomes() const { return alphas_.size(); }
  const std::vector<double>& alphas() const { return alphas_; }
  const std::vector<double>& betas() const { return betas_; }
  const BlochProjectorPair& basis() const { return basis_; }

  double overlap() const {
    double s = 0.0;
    for (std::size_t i = 0; i < alphas_.size(); ++i)
      s += alphas_[i] * betas_[i];
    return s;
  }

  ComplexMatrix operator_for(std::size_t i) const {
    return alphas_[i] * basis_.projector1() + betas_[i] * basis_.projector2();
  }

 private:
  std::vector<double> alphas_, betas_;
  BlochProjectorPair basis_;
};

namespace detail {

// (op ox I_B) rho (op ox I_B)^dag on raw matrices; op is 2x2 on A.
// Worked blockwise: out block (a, b) = sum_{a', b'} op(a, a')
// conj(op(b, b')) rho block (a', b'). This sits inside the optimizer's
// objective, so it avoids forming the Kronecker factors.
inline ComplexMatrix sandwich_on_a(const ComplexMatrix& op,
                                   const ComplexMatrix& rho,
                                   std::size_t dim_b) {
  ComplexMatrix out(2 * dim_b, 2 * dim_b);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t ap = 0; ap < 2; ++ap)
        for (std::size_t bp = 0; bp < 2; ++bp) {
          const Complex w = op(a, ap) * std::conj(op(b, bp));
          if (w == Complex(0.0, 0.0)) continue;
          for (std::size_t i = 0; i < dim_b; ++i)
            for (std::size_t j = 0; j < dim_b; ++j)
              out(a * dim_b + i, b * dim_b + j) +=
                  w * rho(ap * dim_b + i, bp * dim_b + j);
        }
  return out;
}

inline ComplexMatrix two_outcome_image_raw(const ComplexMatrix& rho,
                                           const ComplexMatrix& p_plus,
                                           const ComplexMatrix& p_minus,
                                           std::size_t dim_b) {
  return sandwich_on_a(p_plus, rho, dim_b) +
         sandwich_on_a(p_minus, rho, dim_b);
}

}  // namespace detail

// Pi_2(rho) = P(+x) rho P(+x)^dag + P(-x) rho P(-x)^dag, operators on A.
inline DensityMatrix channel_two_outcome(const DensityMatrix& rho,
                                         const TwoOutcomeWeakMeasurement& m) {
  const auto [p_plus, p_minus] = weak_operators(m);
  return DensityMatrix::trusted(
      detail::two_outcome_image_raw(rho.matrix(), p_plus, p_minus,
                                    rho.dim_b()),
      rho.dim_b());
}

// Pi_n(rho) = sum_i P(i) rho P(i)^dag
inline DensityMatrix channel_multi_outcome(
    const DensityMatrix& rho, const MultiOutcomeWeakMeasurement& m) {
  ComplexMatrix out(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < m.outcomes(); ++i) {
    out += detail::sandwich_on_a(m.operator_for(i), rho.matrix(),
                                 rho.dim_b());
  }
  return DensityMatrix::trusted(std::move(out), rho.dim_b());
}

// pi1 rho pi1 + pi2 rho pi2; idempotent for a fixed basis.
inline DensityMatrix projective_channel(const DensityMatrix& rho,
                                        const BlochProjectorPair& basis) {
  const ComplexMatrix image =
      detail::sandwich_on_a(basis.projector1(), rho.matrix(), rho.dim_b()) +
      detail::sandwich_on_a(basis.projector2(), rho.matrix(), rho.dim_b());
  return DensityMatrix::trusted(image, rho.dim_b());
}

// One conditional outcome of a weak measurement on A. Branches whose
// probability falls below kZeroProbability are flagged rather than fatal;
// the state is left zero-filled in that case.
struct ConditionalBranch {
  ComplexMatrix state_b;  // dimB x dimB
  double probability = 0.0;
  bool zero_probability = false;
};

// Normalized conditional states of B for the outcomes P(+x), P(-x), with
// their probabilities (which sum to 1).
inline std::pair<ConditionalBranch, ConditionalBranch> conditional_states(
    const DensityMatrix& rho, const TwoOutcomeWeakMeasurement& m) {
  const auto [p_plus, p_minus] = weak_operators(m);
  auto branch = [&](const ComplexMatrix& op) {
    const ComplexMatrix image =
        detail::sandwich_on_a(op, rho.matrix(), rho.dim_b());
    ConditionalBranch b;
    b.probability = image.trace().real();
    if (b.probability < kZeroProbability) {
      b.zero_probability = true;
      b.state_b = ComplexMatrix(rho.dim_b(), rho.dim_b());
    } else {
      b.state_b = partial_trace(image, 2, rho.dim_b(), Subsystem::B) *
                  Complex(1.0 / b.probability, 0.0);
    }
    return b;
  };
  return {branch(p_plus), branch(p_minus)};
}

}  // namespace qcorr
