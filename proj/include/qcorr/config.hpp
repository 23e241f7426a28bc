// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace qcorr {

inline constexpr const char* kVersion = "0.1.0";

// Numerical tolerances used for validation throughout the library.
// Sized for double precision and matrices of dimension <= kDimensionCap.
inline constexpr double kHermitianTol = 1e-10;   // max |A_ij - conj(A_ji)|
inline constexpr double kTraceTol = 1e-8;        // |Tr(rho) - 1|
inline constexpr double kPsdTol = 1e-10;         // eigenvalues >= -kPsdTol
inline constexpr double kUnitaryTol = 1e-10;     // max |(U^dag U - I)_ij|

// Jacobi eigensolver: stop once every off-diagonal entry is below
// kJacobiOffdiagTol * max(1, ||A||_F).
inline constexpr double kJacobiOffdiagTol = 1e-13;
inline constexpr std::size_t kJacobiMaxSweeps = 100;

// Hard cap on total matrix dimension (dimA * dimB <= 64, i.e. dimB <= 32).
inline constexpr std::size_t kDimensionCap = 64;

// Measurement strengths at or above this are exactly projective:
// tanh(20) differs from 1 by less than double-precision resolution.
inline constexpr double kProjectiveStrength = 20.0;

// Conditional-state branches with probability below this are flagged
// (and dropped from entropy averages under the 0*log 0 convention).
inline constexpr double kZeroProbability = 1e-12;

}  // namespace qcorr
