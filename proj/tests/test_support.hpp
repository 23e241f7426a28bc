// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test suites: independent oracles and random
// object generators. Everything here stays off the library's computation
// paths so the checks remain independent.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qcorr/qcorr.hpp"

namespace test_support {

using qcorr::Complex;
using qcorr::ComplexMatrix;

inline ComplexMatrix pauli_x() { return {2, 2, {0, 1, 1, 0}}; }
inline ComplexMatrix pauli_y() {
  return {2, 2, {0, Complex(0, -1), Complex(0, 1), 0}};
}
inline ComplexMatrix pauli_z() { return {2, 2, {1, 0, 0, -1}}; }

// Characteristic polynomial via Faddeev-LeVerrier; coefficients of
// lambda^n + c[n-1] lambda^{n-1} + ... + c[0]. Real for Hermitian input.
inline std::vector<double> characteristic_polynomial(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> coeff(n + 1, 0.0);
  coeff[n] = 1.0;
  ComplexMatrix m = a;
  double c = -m.trace().real();
  coeff[n - 1] = c;
  for (std::size_t k = 2; k <= n; ++k) {
    ComplexMatrix shifted = m;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += c;
    m = a * shifted;
    c = -m.trace().real() / static_cast<double>(k);
    coeff[n - k] = c;
  }
  return coeff;
}

inline double evaluate_polynomial(const std::vector<double>& coeff,
                                  double x) {
  long double acc = 0.0L;
  for (std::size_t k = coeff.size(); k-- > 0;) {
    acc = acc * x + coeff[k];
  }
  return static_cast<double>(acc);
}

// All-real root finder: dense scan over the Gershgorin interval followed
// by bisection on every sign change. Adequate for the random Hermitian
// matrices used in tests, whose spectra are simple.
inline std::vector<double> polynomial_real_roots(
    const std::vector<double>& coeff, const ComplexMatrix& a) {
  double radius = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) row += std::abs(a(i, j));
    radius = std::max(radius, row);
  }
  radius += 1.0;

  const std::size_t scan_points = 20000;
  std::vector<double> roots;
  double prev_x = -radius;
  double prev_v = evaluate_polynomial(coeff, prev_x);
  for (std::size_t i = 1; i <= scan_points; ++i) {
    const double x =
        -radius + 2.0 * radius * static_cast<double>(i) / scan_points;
    const double v = evaluate_polynomial(coeff, x);
    if (prev_v == 0.0) {
      roots.push_back(prev_x);
    } else if ((prev_v < 0.0) != (v < 0.0)) {
      double lo = prev_x, hi = x, flo = prev_v;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = evaluate_polynomial(coeff, mid);
        if (fmid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) == (fmid < 0.0)) {
          lo = mid;
          flo = fmid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_v = v;
  }
  return roots;
}

// Seeded Ginibre matrix through the library's documented sampler.
inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols,
                             std::uint64_t seed) {
  qcorr::detail::GaussianSampler sampler(seed);
  ComplexMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      g(i, j) = sampler.standard_complex_normal();
  return g;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  const ComplexMatrix g = ginibre(n, n, seed);
  ComplexMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
  return h;
}

// Gram-Schmidt on Ginibre columns.
inline ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  const ComplexMatrix g = ginibre(n, n, seed);
  ComplexMatrix q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Complex> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = g(i, j);
    for (std::size_t prev = 0; prev < j; ++prev) {
      Complex overlap = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        overlap += std::conj(q(i, prev)) * col[i];
      for (std::size_t i = 0; i < n; ++i) col[i] -= overlap * q(i, prev);
    }
    double norm = 0.0;
    for (const Complex& z : col) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = col[i] / norm;
  }
  return q;
}

// Random CPTP map on a d-dimensional system as a normalized Kraus set.
inline std::vector<ComplexMatrix> random_kraus_set(std::size_t dim,
                                                   std::size_t count,
                                                   std::uint64_t seed) {
  std::vector<ComplexMatrix> raw;
  for (std::size_t k = 0; k < count; ++k)
    raw.push_back(ginibre(dim, dim, seed + 1000 * (k + 1)));

  ComplexMatrix s(dim, dim);
  for (const ComplexMatrix& g : raw) s += g.adjoint() * g;
  const qcorr::EigenDecomposition eig = qcorr::hermitian_eigs(s);
  ComplexMatrix inv_sqrt(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k)
        acc += eig.eigenvectors(i, k) *
               (1.0 / std::sqrt(eig.eigenvalues[k])) *
               std::conj(eig.eigenvectors(j, k));
      inv_sqrt(i, j) = acc;
    }
  std::vector<ComplexMatrix> kraus;
  for (const ComplexMatrix& g : raw) kraus.push_back(g * inv_sqrt);
  return kraus;
}

// (I_A ox Lambda)(rho) for a Kraus set acting on B.
inline qcorr::DensityMatrix apply_channel_on_b(
    const qcorr::DensityMatrix& rho,
    const std::vector<ComplexMatrix>& kraus) {
  ComplexMatrix out(rho.dim(), rho.dim());
  const ComplexMatrix id_a = ComplexMatrix::identity(2);
  for (const ComplexMatrix& k : kraus) {
    const ComplexMatrix w = qcorr::tensor(id_a, k);
    out += w * rho.matrix() * w.adjoint();
  }
  return qcorr::DensityMatrix::trusted(std::move(out), rho.dim_b());
}

// Uniform basis draw for property tests.
inline qcorr::BlochProjectorPair random_basis(std::uint64_t seed) {
  qcorr::detail::GaussianSampler sampler(seed);
  const double theta = std::acos(1.0 - 2.0 * sampler.uniform01());
  const double phi = 2.0 * M_PI * sampler.uniform01();
  return {theta, phi};
}

// Entropic discord with explicit projective conditional states; the
// independent cross-check for the projective limit of the super discord.
inline double projective_entropic_discord(const qcorr::DensityMatrix& rho,
                                          const qcorr::OptimizerOptions& opt) {
  const double s_a = qcorr::von_neumann_entropy(rho.reduced_a());
  const double s_ab = qcorr::von_neumann_entropy(rho.matrix());
  const qcorr::OptimizationResult res = qcorr::detail::minimize_over_bases(
      [&](const qcorr::BlochProjectorPair& basis) {
        double cond = 0.0;
        for (const ComplexMatrix& proj :
             {basis.projector1(), basis.projector2()}) {
          const ComplexMatrix image =
              qcorr::detail::sandwich_on_a(proj, rho.matrix(), rho.dim_b());
          const double p = image.trace().real();
          if (p > 1e-12) {
            const ComplexMatrix cond_state =
                qcorr::partial_trace(image, 2, rho.dim_b(),
                                     qcorr::Subsystem::B) *
                Complex(1.0 / p, 0.0);
            cond += p * qcorr::von_neumann_entropy(cond_state);
          }
        }
        return cond;
      },
      opt);
  return res.value + s_a - s_ab;
}

}  // namespace test_support
