#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qspec/error.hpp"
#include "qspec/linalg.hpp"
#include "qspec/rng.hpp"

using namespace qspec;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I1{0.0, 1.0};

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = rng.normal();
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = cplx(rng.normal(), rng.normal());
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

ComplexMatrix rebuild(const HermitianEigen& e) {
  return e.vectors * ComplexMatrix::diagonal(e.values) * e.vectors.adjoint();
}

// 0.999 quantile of chi-square with 15 degrees of freedom.
constexpr double kChi2Crit15 = 37.697;

}  // namespace

TEST_CASE("eigenvalues of Pauli Y") {
  const auto e = eig_hermitian(pauli('Y'));
  REQUIRE(e.values.size() == 2);
  CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("diagonal input keeps its spectrum and permuted identity columns") {
  const std::vector<double> d{3.0, 1.0, 2.0};
  const auto e = eig_hermitian(ComplexMatrix::diagonal(d));
  CHECK(e.values == std::vector<double>{1.0, 2.0, 3.0});
  for (std::size_t k = 0; k < 3; ++k) {
    int ones = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double a = std::abs(e.vectors(i, k));
      CHECK((a < 1e-15 || std::abs(a - 1.0) < 1e-15));
      ones += a > 0.5;
    }
    CHECK(ones == 1);
  }
}

TEST_CASE("eigendecomposition reconstructs random Hermitian matrices") {
  std::uint64_t seed = 11;
  for (std::size_t n : {2, 4, 8, 16}) {
    for (int t = 0; t < 25; ++t) {
      const ComplexMatrix h = random_hermitian(n, seed++);
      const auto e = eig_hermitian(h);
      CHECK(std::is_sorted(e.values.begin(), e.values.end()));
      CHECK(max_abs_diff(rebuild(e), h) <= 1e-10 * (1.0 + h.frobenius()));
      const ComplexMatrix vv = e.vectors.adjoint() * e.vectors;
      CHECK(max_abs_diff(vv, ComplexMatrix::identity(n)) < 1e-12);
    }
  }
}

TEST_CASE("eigensolver handles degenerate spectra") {
  const ComplexMatrix u = haar_unitary(6, 3);
  const std::vector<double> d{1.0, 1.0, 1.0, -2.0, -2.0, 5.0};
  const ComplexMatrix h = u * ComplexMatrix::diagonal(d) * u.adjoint();
  const auto e = eig_hermitian(h);
  const std::vector<double> expect{-2.0, -2.0, 1.0, 1.0, 1.0, 5.0};
  for (std::size_t k = 0; k < 6; ++k) CHECK(e.values[k] == doctest::Approx(expect[k]).epsilon(1e-12));
  CHECK(max_abs_diff(rebuild(e), h) < 1e-11);
}

TEST_CASE("eigensolver rejects non-Hermitian input") {
  ComplexMatrix m(2);
  m(0, 1) = 1.0;
  try {
    eig_hermitian(m);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
}

TEST_CASE("unitary_from_generator examples") {
  const ComplexMatrix z = pauli('Z');
  CHECK(max_abs_diff(unitary_from_generator(z, 0.0), ComplexMatrix::identity(2)) < 1e-15);
  const ComplexMatrix u = unitary_from_generator(z, kPi / 2);
  CHECK(std::abs(u(0, 0) - (-I1)) < 1e-15);
  CHECK(std::abs(u(1, 1) - I1) < 1e-15);
  CHECK(std::abs(u(0, 1)) < 1e-15);
}

TEST_CASE("one-parameter group law") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ComplexMatrix h = random_hermitian(4, 100 + seed);
    Rng rng(seed);
    const double a = rng.uniform(-3, 3);
    const double b = rng.uniform(-3, 3);
    const ComplexMatrix lhs = unitary_from_generator(h, a + b);
    const ComplexMatrix rhs = unitary_from_generator(h, a) * unitary_from_generator(h, b);
    CHECK(max_abs_diff(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("haar_unitary is unitary and deterministic") {
  for (std::size_t n : {1, 2, 5, 8}) {
    const ComplexMatrix u = haar_unitary(n, 77);
    CHECK(max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(n)) < 1e-12);
    CHECK(u == haar_unitary(n, 77));
  }
  CHECK_FALSE(haar_unitary(4, 1) == haar_unitary(4, 2));
}

TEST_CASE("Haar eigenphases are uniform (chi-square, 16 bins)") {
  // Haar eigenphases have a uniform marginal density on the circle.
  constexpr int bins = 16;
  std::vector<int> counts(bins, 0);
  int total = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const ComplexMatrix u = haar_unitary(4, 9000 + seed);
    // U is normal, so A = (U + U^dagger)/2 and B = (U - U^dagger)/(2i) share
    // its eigenvectors; a generic combination A + cB separates them.
    ComplexMatrix a = u;
    a += u.adjoint();
    a *= cplx(0.5, 0.0);
    ComplexMatrix b = u;
    b -= u.adjoint();
    b *= cplx(0.0, -0.5);
    ComplexMatrix mix = a;
    ComplexMatrix scaled = b;
    scaled *= cplx(std::numbers::sqrt2 / 3.0, 0.0);
    mix += scaled;
    const auto e = eig_hermitian(mix);
    for (std::size_t k = 0; k < 4; ++k) {
      const std::vector<cplx> v = [&] {
        std::vector<cplx> col(4);
        for (std::size_t i = 0; i < 4; ++i) col[i] = e.vectors(i, k);
        return col;
      }();
      const auto uv = u.apply(v);
      cplx z = 0.0;
      for (std::size_t i = 0; i < 4; ++i) z += std::conj(v[i]) * uv[i];
      double phase = std::arg(z);
      if (phase < 0) phase += 2 * kPi;
      counts[std::min(bins - 1, static_cast<int>(phase / (2 * kPi) * bins))]++;
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / bins;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < kChi2Crit15);
}

TEST_CASE("commutator examples and Jacobi identity") {
  CHECK(commutator(pauli('Z'), pauli('Z')).frobenius() == 0.0);
  ComplexMatrix two_i_z = pauli('Z');
  two_i_z *= cplx(0.0, 2.0);
  CHECK(max_abs_diff(commutator(pauli('X'), pauli('Y')), two_i_z) < 1e-15);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ComplexMatrix a = random_hermitian(4, 500 + seed);
    const ComplexMatrix b = random_hermitian(4, 600 + seed);
    const ComplexMatrix c = random_hermitian(4, 700 + seed);
    ComplexMatrix sum = commutator(a, commutator(b, c));
    sum += commutator(b, commutator(c, a));
    sum += commutator(c, commutator(a, b));
    CHECK(sum.frobenius() < 1e-10);
  }
}

TEST_CASE("frob_trace examples") {
  const auto id = frob_trace(ComplexMatrix::identity(4));
  CHECK(id.frobenius == 2.0);
  CHECK(id.trace == cplx(4.0, 0.0));
  const auto y = frob_trace(pauli('Y'));
  CHECK(y.frobenius == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(y.trace == cplx(0.0, 0.0));
  const auto z = frob_trace(ComplexMatrix::zero(3));
  CHECK(z.frobenius == 0.0);
  CHECK(z.trace == cplx(0.0, 0.0));
}

TEST_CASE("kron and Pauli strings put qubit 0 first") {
  const ComplexMatrix zi = pauli_string("ZI");
  CHECK(zi == kron(pauli('Z'), pauli('I')));
  // diag(1, 1, -1, -1): the sign follows the most significant bit.
  CHECK(zi(0, 0) == cplx(1, 0));
  CHECK(zi(1, 1) == cplx(1, 0));
  CHECK(zi(2, 2) == cplx(-1, 0));
  CHECK(zi(3, 3) == cplx(-1, 0));
  CHECK_THROWS_AS(pauli('Q'), Error);
}

TEST_CASE("one-sided Jacobi SVD") {
  RealMatrix a(4, 3);
  a.data = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  const RealSvd svd = svd_jacobi(a);
  REQUIRE(svd.singular_values.size() == 3);
  CHECK(std::is_sorted(svd.singular_values.rbegin(), svd.singular_values.rend()));
  // Rank 2: the smallest singular value vanishes and its right vector spans
  // the null space (1, -2, 1)/sqrt(6).
  CHECK(svd.singular_values[2] < 1e-12);
  double dot = 0.0;
  const double nv[3] = {1 / std::sqrt(6.0), -2 / std::sqrt(6.0), 1 / std::sqrt(6.0)};
  for (std::size_t i = 0; i < 3; ++i) dot += svd.v.data[i * 3 + 2] * nv[i];
  CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-12));
  double fro2 = 0.0;
  for (double x : a.data) fro2 += x * x;
  double s2 = 0.0;
  for (double s : svd.singular_values) s2 += s * s;
  CHECK(s2 == doctest::Approx(fro2).epsilon(1e-12));
}

TEST_CASE("Rng streams are reproducible and distinct") {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng s1 = Rng(5).split(1), s2 = Rng(5).split(2);
  CHECK(s1.next_u64() != s2.next_u64());
  Rng u(9);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
    mean += x;
  }
  CHECK(mean / 20000 == doctest::Approx(0.5).epsilon(0.02));
}
