// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"

using namespace qcorr;
namespace ts = test_support;

namespace {

ComplexMatrix reconstruct(const EigenDecomposition& eig) {
  const std::size_t n = eig.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        acc += eig.eigenvectors(i, k) * eig.eigenvalues[k] *
               std::conj(eig.eigenvectors(j, k));
      out(i, j) = acc;
    }
  return out;
}

}  // namespace

TEST_CASE("hermitian_eigs on diagonal and Pauli matrices", "[linalg]") {
  const EigenDecomposition diag =
      hermitian_eigs(ComplexMatrix(2, 2, {1, 0, 0, -1}));
  REQUIRE(diag.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-14));
  REQUIRE(diag.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));

  const EigenDecomposition sx = hermitian_eigs(ts::pauli_x());
  REQUIRE(sx.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-13));
  REQUIRE(sx.eigenvalues[1] == Catch::Approx(1.0).margin(1e-13));
}

TEST_CASE("hermitian_eigs matches the characteristic-polynomial oracle",
          "[linalg]") {
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u}) {
    const ComplexMatrix h = ts::random_hermitian(4, seed);
    const EigenDecomposition eig = hermitian_eigs(h);
    const std::vector<double> roots =
        ts::polynomial_real_roots(ts::characteristic_polynomial(h), h);
    REQUIRE(roots.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
      REQUIRE(eig.eigenvalues[k] == Catch::Approx(roots[k]).margin(1e-9));
    }
  }
}

TEST_CASE("hermitian_eigs invariants on random matrices", "[linalg]") {
  // 1000 seeded matrices across sizes 2, 4, 8, 16.
  std::size_t checked = 0;
  for (std::size_t n : {2u, 4u, 8u, 16u}) {
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
      const ComplexMatrix h = ts::random_hermitian(n, 1000 * n + seed);
      const EigenDecomposition eig = hermitian_eigs(h);
      REQUIRE(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));

      const double scale = std::max(1.0, h.frobenius_norm());
      REQUIRE((reconstruct(eig) - h).frobenius_norm() <= 1e-10 * scale);

      const ComplexMatrix gram =
          eig.eigenvectors.adjoint() * eig.eigenvectors;
      REQUIRE((gram - ComplexMatrix::identity(n)).max_abs() <= 1e-10);
      ++checked;
    }
  }
  REQUIRE(checked == 1000);
}

TEST_CASE("hermitian_eigs rejects non-Hermitian input", "[linalg]") {
  ComplexMatrix bad(2, 2, {0, 1, 0, 0});
  REQUIRE_THROWS_AS(hermitian_eigs(bad), Error);
  try {
    hermitian_eigs(bad);
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::NonHermitianInput);
  }
  REQUIRE_THROWS_AS(hermitian_eigs(ComplexMatrix(2, 3)), Error);
}

TEST_CASE("trace_norm basics", "[linalg]") {
  REQUIRE(trace_norm(ComplexMatrix(3, 3)) == 0.0);
  REQUIRE(trace_norm(ComplexMatrix(2, 2, {1, 0, 0, -1})) ==
          Catch::Approx(2.0).margin(1e-13));

  // rho - Pi_2(rho) for the Bell-diagonal state c = (0.1, 0.2, 0.3),
  // z basis, x = 1: a direct 4x4 eigensolve of the difference must give
  // (1 - sech 1) * 0.2.
  const DensityMatrix rho = bell_diagonal({0.1, 0.2, 0.3});
  const TwoOutcomeWeakMeasurement m(1.0, BlochProjectorPair::z_basis());
  const DensityMatrix image = channel_two_outcome(rho, m);
  const double value = trace_norm(rho.matrix() - image.matrix());
  REQUIRE(value == Catch::Approx(0.070389145267222920).margin(1e-12));
}

TEST_CASE("trace_norm unitary invariance and triangle inequality",
          "[linalg]") {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ComplexMatrix h = ts::random_hermitian(4, 7000 + seed);
    const ComplexMatrix u = ts::random_unitary(4, 8000 + seed);
    REQUIRE(trace_norm(conjugate_by(u, h)) ==
            Catch::Approx(trace_norm(h)).margin(1e-9));

    const ComplexMatrix g = ts::random_hermitian(4, 9000 + seed);
    REQUIRE(trace_norm(h + g) <= trace_norm(h) + trace_norm(g) + 1e-9);
  }
}

TEST_CASE("tensor product structure", "[linalg]") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  REQUIRE(tensor(i2, i2).approx_equal(ComplexMatrix::identity(4), 0.0));

  const ComplexMatrix ket0(2, 2, {1, 0, 0, 0});
  const ComplexMatrix expected(4, 4,
                               {1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                0});
  REQUIRE(tensor(ket0, ts::pauli_z()).approx_equal(expected, 0.0));

  const ComplexMatrix xx = tensor(ts::pauli_x(), ts::pauli_x());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      REQUIRE(xx(i, j) == Complex(i + j == 3 ? 1.0 : 0.0, 0.0));
}

TEST_CASE("tensor rejects oversized products", "[linalg]") {
  const ComplexMatrix a = ComplexMatrix::identity(8);
  const ComplexMatrix b = ComplexMatrix::identity(16);
  REQUIRE_THROWS_AS(tensor(a, b), Error);
  try {
    tensor(a, b);
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::DimensionOverflow);
  }
}

TEST_CASE("partial_trace identities", "[linalg]") {
  // Tr_B |00><00| = |0><0|
  ComplexMatrix pure(4, 4);
  pure(0, 0) = 1.0;
  const ComplexMatrix reduced = partial_trace(pure, 2, 2, Subsystem::A);
  REQUIRE(reduced(0, 0) == Complex(1.0, 0.0));
  REQUIRE(reduced.trace() == Complex(1.0, 0.0));

  // Tr_A of the Bell state is maximally mixed.
  const DensityMatrix bell = bell_diagonal({1.0, -1.0, 1.0});
  const ComplexMatrix marginal =
      partial_trace(bell.matrix(), 2, 2, Subsystem::B);
  REQUIRE(marginal.approx_equal(0.5 * ComplexMatrix::identity(2), 1e-15));

  // Tr_A(sigma_z ox sigma_x) = 0
  const ComplexMatrix zero =
      partial_trace(tensor(ts::pauli_z(), ts::pauli_x()), 2, 2, Subsystem::B);
  REQUIRE(zero.max_abs() == 0.0);

  REQUIRE_THROWS_AS(partial_trace(ComplexMatrix(5, 5), 2, 2, Subsystem::A),
                    Error);
}

TEST_CASE("partial_trace of a tensor product factorizes", "[linalg]") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const ComplexMatrix a = ts::random_hermitian(2, 300 + seed);
    const ComplexMatrix b = ts::random_hermitian(3, 600 + seed);
    const ComplexMatrix product = tensor(a, b);
    const ComplexMatrix back = partial_trace(product, 2, 3, Subsystem::A);
    REQUIRE(back.approx_equal(a * b.trace(), 1e-10));
    const ComplexMatrix trace_preserved =
        partial_trace(product, 2, 3, Subsystem::B);
    REQUIRE(std::abs((trace_preserved.trace() - product.trace())) <= 1e-12);
  }
}

TEST_CASE("von_neumann_entropy reference values", "[linalg]") {
  REQUIRE(von_neumann_entropy(0.5 * ComplexMatrix::identity(2)) ==
          Catch::Approx(1.0).margin(1e-12));

  // Any pure state has zero entropy.
  ComplexMatrix pure(4, 4);
  pure(0, 0) = 1.0;
  REQUIRE(von_neumann_entropy(pure) == Catch::Approx(0.0).margin(1e-12));

  // diag(alpha^2, beta^2) at x = 1: binary entropy of (1 - tanh 1)/2,
  // evaluated independently of the library.
  const double p = 0.5 * (1.0 - std::tanh(1.0));
  ComplexMatrix cond(2, 2);
  cond(0, 0) = p;
  cond(1, 1) = 1.0 - p;
  REQUIRE(von_neumann_entropy(cond) ==
          Catch::Approx(0.52706534100316161).margin(1e-12));
}

TEST_CASE("von_neumann_entropy rejects invalid density matrices",
          "[linalg]") {
  ComplexMatrix two = ComplexMatrix::identity(2);  // trace 2
  REQUIRE_THROWS_AS(von_neumann_entropy(two), Error);

  ComplexMatrix indefinite(2, 2, {1.5, 0, 0, -0.5});
  REQUIRE_THROWS_AS(von_neumann_entropy(indefinite), Error);
  try {
    von_neumann_entropy(indefinite);
  } catch (const Error& e) {
    REQUIRE(e.code() == ErrorCode::InvalidDensityMatrix);
  }
}

TEST_CASE("entropy is additive over tensor products", "[linalg]") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const DensityMatrix a = random_state(2, 4, 400 + seed);
    const ComplexMatrix rho_a = a.reduced_a();
    const ComplexMatrix rho_b = a.reduced_b();
    const ComplexMatrix product = tensor(rho_a, rho_b);
    REQUIRE(von_neumann_entropy(product) ==
            Catch::Approx(von_neumann_entropy(rho_a) +
                          von_neumann_entropy(rho_b))
                .margin(1e-9));
  }
}
