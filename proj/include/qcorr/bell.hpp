// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "qcorr/measurement.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// Closed forms for Bell-diagonal states, used as the analytic oracle
// against the numeric optimizers. The textbook expressions assume
// |c3| > |c2| > |c1|; local rotations swapping Pauli axes extend them to
// unordered coefficients, which is what the sorted forms below implement.

namespace detail {

inline std::array<double, 3> sorted_abs_coeffs(const BellDiagonalParams& p) {
  std::array<double, 3> c = {std::abs(p.c1), std::abs(p.c2), std::abs(p.c3)};
  std::sort(c.begin(), c.end());
  return c;
}

inline void check_tetrahedron(const BellDiagonalParams& p) {
  if (!p.inside_tetrahedron()) {
    throw Error(ErrorCode::NotPositive,
                "Bell-diagonal parameters outside the state tetrahedron, "
                "min population " +
                    std::to_string(p.min_population()));
  }
}

}  // namespace detail

// Trace-norm discord of a Bell-diagonal state: the intermediate of the
// absolute coefficients. Measuring along the largest-|c| axis leaves the
// larger of the remaining two as the off-diagonal norm.
inline double bell_tqd(const BellDiagonalParams& p) {
  detail::check_tetrahedron(p);
  return detail::sorted_abs_coeffs(p)[1];
}

// (1 - sech x) * bell_tqd
inline double bell_qcc(const BellDiagonalParams& p, double x) {
  return (1.0 - overlap_factor(x)) * bell_tqd(p);
}

// Coefficient map of one weak measurement along the largest-|c| axis:
// that coefficient survives, the other two shrink by the overlap factor.
inline BellDiagonalParams bell_post_weak(const BellDiagonalParams& p,
                                         double x) {
  detail::check_tetrahedron(p);
  const double q = overlap_factor(x);
  // Ties prefer the z axis, matching the textbook ordering.
  std::size_t largest = 2;
  const std::array<double, 3> c = {std::abs(p.c1), std::abs(p.c2),
                                   std::abs(p.c3)};
  if (c[1] > c[2] && c[1] >= c[0]) largest = 1;
  if (c[0] > c[2] && c[0] > c[1]) largest = 0;
  BellDiagonalParams out = p;
  if (largest != 0) out.c1 *= q;
  if (largest != 1) out.c2 *= q;
  if (largest != 2) out.c3 *= q;
  return out;
}

// Final state after the projective z measurement:
// (|0><0| ox (I + c3 sigma3) + |1><1| ox (I - c3 sigma3)) / 4.
// Block-diagonal, so both its tqd and qcc vanish.
inline DensityMatrix bell_post_projective(const BellDiagonalParams& p) {
  detail::check_tetrahedron(p);
  ComplexMatrix m(4, 4);
  m(0, 0) = 0.25 * (1.0 + p.c3);
  m(1, 1) = 0.25 * (1.0 - p.c3);
  m(2, 2) = 0.25 * (1.0 - p.c3);
  m(3, 3) = 0.25 * (1.0 + p.c3);
  return DensityMatrix::trusted(std::move(m), 2);
}

}  // namespace qcorr
