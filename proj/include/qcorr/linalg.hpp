// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/config.hpp"
#include "qcorr/error.hpp"

namespace qcorr {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns are orthonormal eigenvectors
};

namespace detail {

// One complex Jacobi rotation zeroing A(p,q). The pivot is reduced to the
// real symmetric case by factoring out the phase of A(p,q), then rotated
// with the standard stable tangent formula. A is updated in place on rows
// and columns p, q; V, when present, accumulates the rotations.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix* v, std::size_t p,
                          std::size_t q) {
  const std::size_t n = a.rows();
  const Complex apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const Complex phase = apq / r;  // e^{i psi}

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * r);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // W = [[c, s], [-s e^{-i psi}, c e^{-i psi}]] acting on columns (p, q).
  const Complex wqp = -s * std::conj(phase);
  const Complex wqq = c * std::conj(phase);

  for (std::size_t k = 0; k < n; ++k) {  // A <- A W
    const Complex akp = a(k, p), akq = a(k, q);
    a(k, p) = c * akp + wqp * akq;
    a(k, q) = s * akp + wqq * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {  // A <- W^dag A
    const Complex apk = a(p, k), aqk = a(q, k);
    a(p, k) = c * apk + std::conj(wqp) * aqk;
    a(q, k) = s * apk + std::conj(wqq) * aqk;
  }
  if (v != nullptr) {
    for (std::size_t k = 0; k < n; ++k) {  // V <- V W
      const Complex vkp = (*v)(k, p), vkq = (*v)(k, q);
      (*v)(k, p) = c * vkp + wqp * vkq;
      (*v)(k, q) = s * vkp + wqq * vkq;
    }
  }

  // Exact by construction; kills rounding residue on the pivot.
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = Complex(a(p, p).real(), 0.0);
  a(q, q) = Complex(a(q, q).real(), 0.0);
}

inline double max_offdiag(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j)));
  return m;
}

// Symmetrized working copy for the Jacobi iteration, after the
// preconditions shared by every Hermitian entry point.
inline ComplexMatrix checked_hermitian_copy(const ComplexMatrix& a,
                                            ErrorCode on_failure) {
  if (!a.is_square()) {
    throw Error(on_failure, "matrix is not square");
  }
  if (!a.all_finite()) {
    throw Error(on_failure, "matrix has non-finite entries");
  }
  const double herr = a.hermiticity_error();
  if (herr > kHermitianTol) {
    throw Error(on_failure, "max |A - A^dag| = " + std::to_string(herr));
  }
  const std::size_t n = a.rows();
  ComplexMatrix work(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      work(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return work;
}

// Cyclic sweeps until every off-diagonal entry falls below the threshold.
inline void jacobi_diagonalize(ComplexMatrix& work, ComplexMatrix* v) {
  const std::size_t n = work.rows();
  const double tol = kJacobiOffdiagTol * std::max(1.0, work.frobenius_norm());
  bool converged = (n <= 1) || max_offdiag(work) <= tol;
  for (std::size_t sweep = 0; sweep < kJacobiMaxSweeps && !converged;
       ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::abs(work(p, q)) > tol) jacobi_rotate(work, v, p, q);
    converged = max_offdiag(work) <= tol;
  }
  if (!converged) {
    throw Error(ErrorCode::ConvergenceFailure,
                "Jacobi sweeps exhausted, off-diagonal residue " +
                    std::to_string(max_offdiag(work)));
  }
}

}  // namespace detail

// Cyclic Jacobi diagonalization of a Hermitian matrix. Robustness over
// speed: every matrix here is <= 64x64.
inline EigenDecomposition hermitian_eigs(const ComplexMatrix& a) {
  ComplexMatrix work =
      detail::checked_hermitian_copy(a, ErrorCode::NonHermitianInput);
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);
  detail::jacobi_diagonalize(work, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return work(i, i).real() < work(j, j).real();
  });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = work(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i)
      out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

// Eigenvalues only (ascending), skipping the eigenvector accumulation.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  ComplexMatrix work =
      detail::checked_hermitian_copy(a, ErrorCode::NonHermitianInput);
  detail::jacobi_diagonalize(work, nullptr);
  std::vector<double> values(a.rows());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = work(i, i).real();
  std::sort(values.begin(), values.end());
  return values;
}

// Sum of absolute eigenvalues. Only the Hermitian case is supported; every
// trace norm taken in this library is of a Hermitian difference.
inline double trace_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (double lam : hermitian_eigenvalues(a)) s += std::abs(lam);
  return s;
}

// Kronecker product, row-major convention: (A ox B)[i*rB+k][j*cB+l] = A_ij B_kl.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b,
                            std::size_t dimension_cap = kDimensionCap) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  if (rows > dimension_cap || cols > dimension_cap) {
    throw Error(ErrorCode::DimensionOverflow,
                "product dimension " + std::to_string(std::max(rows, cols)) +
                    " exceeds cap " + std::to_string(dimension_cap));
  }
  ComplexMatrix out(rows, cols);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

enum class Subsystem { A, B };

// Reduced matrix on the kept subsystem of a (dimA*dimB)-dimensional M,
// subsystem order A ox B.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a,
                                   std::size_t dim_b, Subsystem keep) {
  if (!m.is_square() || m.rows() != dim_a * dim_b) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix dimension " + std::to_string(m.rows()) +
                    " != dimA*dimB = " + std::to_string(dim_a * dim_b));
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < dim_b; ++k)
          s += m(i * dim_b + k, j * dim_b + k);
        out(i, j) = s;
      }
    return out;
  }
  ComplexMatrix out(dim_b, dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < dim_a; ++i)
        s += m(i * dim_b + k, i * dim_b + l);
      out(k, l) = s;
    }
  return out;
}

// -sum lambda log2 lambda with 0 log 0 = 0. Eigenvalues within kPsdTol
// below zero are clamped; anything more negative rejects the input.
inline double von_neumann_entropy(const ComplexMatrix& rho) {
  ComplexMatrix work =
      detail::checked_hermitian_copy(rho, ErrorCode::InvalidDensityMatrix);
  const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (tr_err > kTraceTol) {
    throw Error(ErrorCode::InvalidDensityMatrix,
                "trace deviates from 1 by " + std::to_string(tr_err));
  }
  detail::jacobi_diagonalize(work, nullptr);
  double entropy = 0.0;
  for (std::size_t i = 0; i < work.rows(); ++i) {
    const double lam = work(i, i).real();
    if (lam < -kPsdTol) {
      throw Error(ErrorCode::InvalidDensityMatrix,
                  "negative eigenvalue " + std::to_string(lam));
    }
    if (lam > 0.0) entropy -= lam * std::log2(lam);
  }
  return std::max(entropy, 0.0);
}

}  // namespace qcorr
