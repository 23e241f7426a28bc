// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "qcorr/complex_matrix.hpp"
#include "qcorr/config.hpp"
#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"

namespace qcorr {

// PRNG contract: mt19937_64 (fully specified by the C++ standard) with
// Box-Muller normals built from explicit 53-bit uniforms, so sampled
// states are bit-identical across platforms for a fixed seed.
inline constexpr const char* kPrngAlgorithm = "mt19937_64+box-muller";

namespace detail {

class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // E|z|^2 = 1
  Complex standard_complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex(re * M_SQRT1_2, im * M_SQRT1_2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace detail

// Validated bipartite state on C^2 ox C^dimB, subsystem A (the measured
// qubit) first in the Kronecker order.
class DensityMatrix {
 public:
  static constexpr std::size_t kDimA = 2;

  static DensityMatrix from_matrix(const ComplexMatrix& raw,
                                   std::size_t dim_b) {
    check_dim_b(dim_b);
    const std::size_t dim = kDimA * dim_b;
    if (!raw.is_square() || raw.rows() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                      " matrix, got " + std::to_string(raw.rows()) + "x" +
                      std::to_string(raw.cols()));
    }
    if (!raw.all_finite()) {
      throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
    }
    const double herr = raw.hermiticity_error();
    if (herr > kHermitianTol) {
      throw Error(ErrorCode::NotHermitian,
                  "max |A - A^dag| = " + std::to_string(herr));
    }
    const double tr_err = std::abs(raw.trace() - Complex(1.0, 0.0));
    if (tr_err > kTraceTol) {
      throw Error(ErrorCode::NotUnitTrace,
                  "trace " + std::to_string(raw.trace().real()) +
                      " deviates from 1 by " + std::to_string(tr_err));
    }
    const EigenDecomposition eig = hermitian_eigs(raw);
    if (eig.eigenvalues.front() < -kPsdTol) {
      throw Error(ErrorCode::NotPositive,
                  "smallest eigenvalue " +
                      std::to_string(eig.eigenvalues.front()));
    }
    return DensityMatrix(raw, dim_b);
  }

  // For outputs whose validity is guaranteed by construction (channel
  // images, unitary conjugations). Skips the eigenvalue check.
  static DensityMatrix trusted(ComplexMatrix mat, std::size_t dim_b) {
    check_dim_b(dim_b);
    assert(mat.rows() == kDimA * dim_b && mat.is_square());
    return DensityMatrix(std::move(mat), dim_b);
  }

  std::size_t dim_a() const { return kDimA; }
  std::size_t dim_b() const { return dim_b_; }
  std::size_t dim() const { return kDimA * dim_b_; }
  const ComplexMatrix& matrix() const { return mat_; }

  ComplexMatrix reduced_a() const {
    return partial_trace(mat_, kDimA, dim_b_, Subsystem::A);
  }
  ComplexMatrix reduced_b() const {
    return partial_trace(mat_, kDimA, dim_b_, Subsystem::B);
  }

  double purity() const { return (mat_ * mat_).trace().real(); }

 private:
  DensityMatrix(ComplexMatrix mat, std::size_t dim_b)
      : dim_b_(dim_b), mat_(std::move(mat)) {}

  static void check_dim_b(std::size_t dim_b) {
    if (dim_b < 2 || kDimA * dim_b > kDimensionCap) {
      throw Error(ErrorCode::DimensionMismatch,
                  "dimB must lie in [2, " +
                      std::to_string(kDimensionCap / kDimA) + "], got " +
                      std::to_string(dim_b));
    }
  }

  std::size_t dim_b_;
  ComplexMatrix mat_;
};

// Correlation coefficients (c1, c2, c3) of a two-qubit Bell-diagonal state.
struct BellDiagonalParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  // Populations in the Bell basis; all four must be >= -kPsdTol for the
  // parameters to lie inside the state tetrahedron.
  std::array<double, 4> bell_populations() const {
    return {0.25 * (1.0 + c1 - c2 + c3), 0.25 * (1.0 - c1 + c2 + c3),
            0.25 * (1.0 + c1 + c2 - c3), 0.25 * (1.0 - c1 - c2 - c3)};
  }

  double min_population() const {
    const auto pops = bell_populations();
    return *std::min_element(pops.begin(), pops.end());
  }

  bool inside_tetrahedron() const { return min_population() >= -kPsdTol; }
};

namespace detail {

inline const std::array<ComplexMatrix, 4>& pauli_matrices() {
  static const std::array<ComplexMatrix, 4> sigma = {
      ComplexMatrix::identity(2),
      ComplexMatrix(2, 2, {0, 1, 1, 0}),
      ComplexMatrix(2, 2, {0, Complex(0, -1), Complex(0, 1), 0}),
      ComplexMatrix(2, 2, {1, 0, 0, -1})};
  return sigma;
}

}  // namespace detail

// rho = (I + sum_k c_k sigma_k ox sigma_k) / 4
inline DensityMatrix bell_diagonal(const BellDiagonalParams& p) {
  if (!p.inside_tetrahedron()) {
    throw Error(ErrorCode::NotPositive,
                "Bell-diagonal parameters outside the state tetrahedron, "
                "min population " +
                    std::to_string(p.min_population()));
  }
  const auto& sigma = detail::pauli_matrices();
  ComplexMatrix m = tensor(sigma[0], sigma[0]);
  m += p.c1 * tensor(sigma[1], sigma[1]);
  m += p.c2 * tensor(sigma[2], sigma[2]);
  m += p.c3 * tensor(sigma[3], sigma[3]);
  m *= 0.25;
  return DensityMatrix::trusted(std::move(m), 2);
}

// rho = G G^dag / Tr(G G^dag) with G a (2 dimB) x rank complex Ginibre
// matrix. Deterministic for a fixed seed.
inline DensityMatrix random_state(std::size_t dim_b, std::size_t rank,
                                  std::uint64_t seed) {
  if (dim_b < 2 || DensityMatrix::kDimA * dim_b > kDimensionCap) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimB out of range: " + std::to_string(dim_b));
  }
  const std::size_t dim = DensityMatrix::kDimA * dim_b;
  if (rank < 1 || rank > dim) {
    throw Error(ErrorCode::InvalidRank,
                "rank must lie in [1, " + std::to_string(dim) + "], got " +
                    std::to_string(rank));
  }
  detail::GaussianSampler sampler(seed);
  ComplexMatrix g(dim, rank);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < rank; ++j)
      g(i, j) = sampler.standard_complex_normal();

  ComplexMatrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= 1.0 / tr;
  return DensityMatrix::trusted(std::move(rho), dim_b);
}

inline void check_unitary(const ComplexMatrix& u, const std::string& label) {
  if (!u.is_square()) {
    throw Error(ErrorCode::NotUnitary, label + " is not square");
  }
  const ComplexMatrix gram = u.adjoint() * u;
  const double dev = (gram - ComplexMatrix::identity(u.rows())).max_abs();
  if (dev > kUnitaryTol) {
    throw Error(ErrorCode::NotUnitary,
                label + ": max |U^dag U - I| = " + std::to_string(dev));
  }
}

// (uA ox uB) rho (uA ox uB)^dag
inline DensityMatrix local_unitary(const DensityMatrix& rho,
                                   const ComplexMatrix& u_a,
                                   const ComplexMatrix& u_b) {
  if (u_a.rows() != 2 || u_b.rows() != rho.dim_b()) {
    throw Error(ErrorCode::DimensionMismatch,
                "local unitary dimensions do not match the state");
  }
  check_unitary(u_a, "uA");
  check_unitary(u_b, "uB");
  const ComplexMatrix u = tensor(u_a, u_b);
  return DensityMatrix::trusted(conjugate_by(u, rho.matrix()), rho.dim_b());
}

}  // namespace qcorr
