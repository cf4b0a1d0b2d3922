#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qspec/bounds.hpp"
#include "qspec/error.hpp"
#include "qspec/rng.hpp"

using namespace qspec;

namespace {

constexpr double kPi = std::numbers::pi;

// Uniform tensor grid on [0, 2 pi)^d with `n` points per axis.
std::vector<std::vector<double>> tensor_grid(int d, int n) {
  std::vector<std::vector<double>> pts;
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> p(d);
    for (int j = 0; j < d; ++j) p[j] = 2.0 * kPi * idx[j] / n;
    pts.push_back(p);
    int j = d - 1;
    while (j >= 0 && idx[j] == n - 1) idx[j--] = 0;
    if (j < 0) break;
    ++idx[j];
  }
  return pts;
}

FourierSeries random_series(int d, int max_freq, int modes, std::uint64_t seed) {
  Rng rng(seed);
  FourierSeries h(d);
  for (int m = 0; m < modes; ++m) {
    MultiIndex s(d);
    for (int& c : s) c = static_cast<int>(std::floor(rng.uniform(-max_freq, max_freq + 1)));
    h.set(s, cplx(rng.normal(), rng.normal()));
  }
  return h;
}

// Dense complex solve by Gaussian elimination with partial pivoting.
std::vector<cplx> solve(std::vector<std::vector<cplx>> a, std::vector<cplx> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<cplx> x(n);
  for (std::size_t r = n; r-- > 0;) {
    cplx acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= a[r][k] * x[k];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace

TEST_CASE("SobolevParams requires r > d/2") {
  CHECK_NOTHROW(SobolevParams(1, 0.6));
  CHECK_THROWS_AS(SobolevParams(2, 1.0), Error);
  CHECK(SobolevParams(3, 2.5).alpha() == 1.0);
}

TEST_CASE("sobolev_norm examples") {
  FourierSeries zero_mode(2);
  zero_mode.set({0, 0}, 1.0);
  CHECK(sobolev_norm(zero_mode, 3.7) == 1.0);

  FourierSeries three(3);
  three.set({1, 1, 1}, 1.0);
  CHECK(sobolev_norm(three, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("truncation_error examples") {
  FourierSeries h(2);
  h.set({1, 0}, 0.5);
  h.set({0, -2}, cplx(0.0, 1.0));
  CHECK(truncation_error(h, 2.0) == 0.0);
  CHECK(truncation_error(h, 1.5) == doctest::Approx(1.0).epsilon(1e-15));

  const SobolevParams p(2, 2.0);
  const FourierSeries w = annulus_witness(p, 5.0);
  CHECK(truncation_error(w, 5.0) == doctest::Approx(w.l2_norm()).epsilon(1e-15));
  CHECK(truncate(w, 5.0).size() == 0);
}

TEST_CASE("annulus points match a brute-force count") {
  for (int d = 1; d <= 3; ++d) {
    for (double K : {1.0, 2.5, 4.0}) {
      const int m = static_cast<int>(2 * K) + 1;
      std::size_t count = 0;
      for (int a = -m; a <= m; ++a)
        for (int b = (d >= 2 ? -m : 0); b <= (d >= 2 ? m : 0); ++b)
          for (int c = (d >= 3 ? -m : 0); c <= (d >= 3 ? m : 0); ++c) {
            const double n2 = a * a + b * b + c * c;
            if (n2 > K * K && n2 <= 4 * K * K) ++count;
          }
      CHECK(annulus_points(d, K).size() == count);
    }
  }
}

TEST_CASE("annulus size grows like K^d") {
  for (int d = 1; d <= 3; ++d) {
    // Volume of the shell K < |s| <= 2K is V_d (2^d - 1) K^d.
    const double unit_ball = d == 1 ? 2.0 : d == 2 ? kPi : 4.0 * kPi / 3.0;
    const double shell = unit_ball * ((1 << d) - 1);
    for (double K : {4.0, 8.0, 16.0, 32.0, 64.0}) {
      if (d == 3 && K > 32.0) continue;
      const double ratio = static_cast<double>(annulus_points(d, K).size()) / std::pow(K, d);
      CHECK(ratio > 0.5 * shell);
      CHECK(ratio < 1.5 * shell);
    }
  }
}

TEST_CASE("annulus witness: unit norm and energy identity") {
  for (int d = 1; d <= 3; ++d) {
    const SobolevParams p(d, 0.5 * d + 0.75);
    for (double K : {2.0, 3.0, 6.0}) {
      const FourierSeries w = annulus_witness(p, K);
      CHECK(sobolev_norm(w, p.r()) == doctest::Approx(1.0).epsilon(1e-12));
      const auto pts = annulus_points(d, K);
      const double c0sq = 1.0 / static_cast<double>(pts.size());
      double sum = 0.0;
      for (const auto& s : pts) sum += std::pow(1.0 + static_cast<double>(squared_norm(s)), -p.r());
      const double e = truncation_error(w, K);
      CHECK(e * e == doctest::Approx(c0sq * sum).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(annulus_witness(SobolevParams(1, 2.0), 0.5), Error);
}

TEST_CASE("witness error decays at rate -r") {
  const std::vector<double> k1{4, 8, 16, 32, 64};
  const LowerCurve c1 = minimax_lower_curve(SobolevParams(1, 2.0), k1);
  CHECK(std::abs(c1.fitted_slope + 2.0) < 0.1);
  CHECK(c1.paper_exponent == -1.5);

  const std::vector<double> k2{4, 8, 16, 32};
  const LowerCurve c2 = minimax_lower_curve(SobolevParams(2, 2.0), k2);
  CHECK(std::abs(c2.fitted_slope + 2.0) < 0.2);
  CHECK(c2.paper_exponent == -1.0);
  for (std::size_t k = 1; k < c2.errors.size(); ++k) CHECK(c2.errors[k] < c2.errors[k - 1]);
}

TEST_CASE("jackson_upper examples") {
  FourierSeries single(1);
  single.set({5}, 1.0);
  const SobolevParams p(1, 2.0);
  CHECK(truncation_error(single, 5.0) == 0.0);
  const JacksonBound jb = jackson_upper(single, p, 5.0);
  CHECK(jb.rigorous >= 0.0);
  CHECK(jb.paper_form >= 0.0);

  FourierSeries h = random_unit_ball_series(p, 10, 12, 99);
  CHECK(sobolev_norm(h, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(jackson_upper(h, p, 4.0).rigorous == doctest::Approx(1.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("rigorous bound dominates the truncation error on random series") {
  for (int d = 1; d <= 3; ++d) {
    const SobolevParams p(d, 0.5 * d + 1.0);
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const FourierSeries h = random_unit_ball_series(p, 8, 12, 300 + seed);
      for (double K = 1.0; K <= 10.0; K += 0.5) {
        CHECK(truncation_error(h, K) <= jackson_upper(h, p, K).rigorous * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("empirical Jackson constant") {
  const SobolevParams p(1, 2.0);
  const FourierSeries h = random_unit_ball_series(p, 10, 20, 5);
  const std::vector<double> K{1, 2, 3, 4};
  double expect = 0.0;
  for (double k : K) expect = std::max(expect, truncation_error(h, k) / std::pow(k, -1.5));
  CHECK(empirical_jackson_constant(h, p, K) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("limit_probe examples") {
  const std::vector<std::pair<double, int>> pairs{{4.0, 4}, {7.3, 1}, {0.6, 1}};
  const auto v = limit_probe(pairs);
  CHECK(v[0] == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 1.0);

  std::vector<std::pair<double, int>> seq;
  for (int k = 1; k <= 10; ++k) seq.emplace_back((1 << k) / 2.0 + 1.0, 1 << k);
  const auto s = limit_probe(seq);
  for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] < s[k - 1]);
  CHECK(s.back() < 1e-3);
}

TEST_CASE("Parseval on a tensor grid") {
  for (int d = 1; d <= 2; ++d) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const int M = 6;
      const FourierSeries h = random_series(d, M, 15, 40 + seed);
      const auto grid = tensor_grid(d, 2 * M + 2);
      double mean_sq = 0.0;
      for (const auto& phi : grid) mean_sq += std::norm(h.evaluate(phi));
      mean_sq /= static_cast<double>(grid.size());
      CHECK(std::sqrt(mean_sq) == doctest::Approx(h.l2_norm()).epsilon(1e-8));
    }
  }
}

TEST_CASE("least squares on a grid recovers the Fourier truncation") {
  for (int d = 1; d <= 2; ++d) {
    const int M = d == 1 ? 8 : 5;
    const FourierSeries h = random_series(d, M, d == 1 ? 12 : 25, 70 + d);
    const double K = d == 1 ? 4.0 : 3.0;
    // Every s with |s| <= K.
    std::vector<MultiIndex> basis;
    const int m = static_cast<int>(K);
    for (int a = -m; a <= m; ++a)
      for (int b = (d == 2 ? -m : 0); b <= (d == 2 ? m : 0); ++b) {
        MultiIndex s = d == 1 ? MultiIndex{a} : MultiIndex{a, b};
        if (squared_norm(s) <= K * K) basis.push_back(s);
      }

    const auto grid = tensor_grid(d, 2 * M + 3);
    const std::size_t nb = basis.size();
    std::vector<std::vector<cplx>> ata(nb, std::vector<cplx>(nb, 0.0));
    std::vector<cplx> atb(nb, 0.0);
    for (const auto& phi : grid) {
      const cplx y = h.evaluate(phi);
      std::vector<cplx> row(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        double dot = 0.0;
        for (int j = 0; j < d; ++j) dot += basis[k][j] * phi[j];
        row[k] = std::polar(1.0, -dot);
      }
      for (std::size_t i = 0; i < nb; ++i) {
        atb[i] += std::conj(row[i]) * y;
        for (std::size_t k = 0; k < nb; ++k) ata[i][k] += std::conj(row[i]) * row[k];
      }
    }
    const auto coef = solve(ata, atb);
    const FourierSeries hk = truncate(h, K);
    for (std::size_t k = 0; k < nb; ++k) CHECK(std::abs(coef[k] - hk.at(basis[k])) < 1e-8);

    double resid = 0.0;
    for (const auto& phi : grid) {
      cplx fit = 0.0;
      for (std::size_t k = 0; k < nb; ++k) {
        double dot = 0.0;
        for (int j = 0; j < d; ++j) dot += basis[k][j] * phi[j];
        fit += coef[k] * std::polar(1.0, -dot);
      }
      resid += std::norm(h.evaluate(phi) - fit);
    }
    resid = std::sqrt(resid / static_cast<double>(grid.size()));
    CHECK(resid == doctest::Approx(truncation_error(h, K)).epsilon(1e-8));
  }
}

TEST_CASE("fit_line is exact on a line") {
  const std::vector<double> x{0, 1, 2, 3};
  const std::vector<double> y{1, -1, -3, -5};
  const auto [slope, intercept] = fit_line(x, y);
  CHECK(slope == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(intercept == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("random unit-ball series are reproducible") {
  const SobolevParams p(2, 1.5);
  const FourierSeries a = random_unit_ball_series(p, 6, 20, 11);
  const FourierSeries b = random_unit_ball_series(p, 6, 20, 11);
  CHECK(a.coeffs() == b.coeffs());
  CHECK(a.size() == 20);
}
