#include <cmath>
#include <map>
#include <numbers>

#include "doctest.h"
#include "qspec/error.hpp"
#include "qspec/experiments.hpp"
#include "qspec/rng.hpp"

using namespace qspec;

namespace {

constexpr double kPi = std::numbers::pi;

// Two-sided exact p from the null distribution of W+ built by a subset-sum
// recursion over doubled ranks.
double wilcoxon_dp(const std::vector<double>& diffs) {
  std::vector<double> abs_d;
  for (double d : diffs)
    if (d != 0.0) abs_d.push_back(std::abs(d));
  const std::size_t n = abs_d.size();
  std::vector<int> rank2(n);
  for (std::size_t i = 0; i < n; ++i) {
    int less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (abs_d[j] < abs_d[i]) ++less;
      if (abs_d[j] == abs_d[i]) ++equal;
    }
    rank2[i] = 2 * less + equal + 1;
  }
  int observed = 0, total = 0;
  std::size_t k = 0;
  for (double d : diffs) {
    if (d == 0.0) continue;
    if (d > 0) observed += rank2[k];
    total += rank2[k];
    ++k;
  }
  std::vector<double> count(total + 1, 0.0);
  count[0] = 1.0;
  for (int r : rank2)
    for (int s = total; s >= r; --s) count[s] += count[s - r];
  double le = 0.0, ge = 0.0, all = 0.0;
  for (int s = 0; s <= total; ++s) {
    all += count[s];
    if (s <= observed) le += count[s];
    if (s >= observed) ge += count[s];
  }
  return std::min(1.0, 2.0 * std::min(le, ge) / all);
}

std::vector<std::pair<double, double>> pairs_from(const std::vector<double>& diffs) {
  std::vector<std::pair<double, double>> p;
  for (double d : diffs) p.emplace_back(d, 0.0);
  return p;
}

TrainConfig tiny_config() {
  TrainConfig cfg;
  cfg.n = 2;
  cfg.L = 2;
  cfg.dataset_size = 20;
  cfg.epochs = 3;
  cfg.seeds = {1, 2};
  cfg.b_models = {1.0, 10.0};
  return cfg;
}

}  // namespace

TEST_CASE("gen_dataset ranges and determinism") {
  CircuitSpec spec;
  spec.n = 3;
  for (int l = 0; l < 5; ++l) spec.generators.push_back(make_generator(8, 10.0, 50 + l));
  spec.entangler = ring_entangler(3);
  spec.observable = z_observable(3, 0);
  const Circuit target(spec);
  const Dataset a = gen_dataset(target, 1000, 9);
  const Dataset b = gen_dataset(target, 1000, 9);
  REQUIRE(a.size() == 1000);
  const std::vector<double> ones(5, 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x >= -1.0);
    CHECK(a[i].x <= 1.0);
    CHECK(std::abs(a[i].y) <= 1.0 + 1e-12);
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
  CHECK(a[7].y == doctest::Approx(target.forward(ones, a[7].x)).epsilon(1e-15));
}

TEST_CASE("mse_and_grad_fd agrees with per-sample central differences") {
  CircuitSpec spec;
  spec.n = 2;
  for (int l = 0; l < 3; ++l) spec.generators.push_back(make_generator(4, 2.0, 70 + l));
  spec.entangler = ring_entangler(2);
  spec.observable = z_observable(2, 0);
  const Circuit model(spec);
  Rng rng(4);
  std::vector<StateVector> enc;
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    xs.push_back(rng.uniform(-1, 1));
    ys.push_back(rng.uniform(-1, 1));
    enc.push_back(model.encoded_state(xs.back()));
  }
  const std::vector<double> theta{0.3, -1.1, 2.0};
  const double h = 1e-5;
  const auto [loss, grad] = mse_and_grad_fd(model, theta, enc, ys, h);

  double ref_loss = 0.0;
  std::vector<double> ref_grad(3, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = model.forward(theta, xs[i]) - ys[i];
    ref_loss += r * r / 12.0;
    const auto g = grad_fd(model, theta, xs[i], h);
    for (std::size_t k = 0; k < 3; ++k) ref_grad[k] += 2.0 * r * g[k] / 12.0;
  }
  CHECK(loss == doctest::Approx(ref_loss).epsilon(1e-12));
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(grad[k] - ref_grad[k]) < 1e-9);
}

TEST_CASE("flat landscape leaves theta unchanged") {
  CircuitSpec spec;
  spec.n = 2;
  spec.generators = {ComplexMatrix::zero(4), ComplexMatrix::zero(4)};
  spec.entangler = ring_entangler(2);
  spec.observable = z_observable(2, 0);
  const Circuit model(spec);
  Dataset data;
  for (int i = 0; i < 10; ++i) data.push_back({-1.0 + 0.2 * i, 0.1 * i});
  for (std::size_t batch : {std::size_t{0}, std::size_t{1}, std::size_t{3}}) {
    AdamOptions opts;
    opts.epochs = 20;
    opts.lr = 0.1;
    opts.batch_size = batch;
    const auto r = adam_train(model, data, opts, {0.5, -0.5});
    CHECK(r.theta_final == std::vector<double>{0.5, -0.5});
    CHECK(r.final_loss == doctest::Approx(r.initial_loss).epsilon(1e-15));
  }
}

TEST_CASE("Adam descends on a one-parameter toy problem") {
  CircuitSpec spec;
  spec.n = 1;
  spec.generators = {pauli('Y')};
  spec.observable = z_observable(1, 0);
  const Circuit model(spec);
  const std::vector<double> truth{1.0};
  Dataset data;
  for (int i = 0; i < 25; ++i) {
    const double x = -1.0 + i / 12.0;
    data.push_back({x, model.forward(truth, x)});
  }
  AdamOptions opts;
  opts.lr = 0.01;
  opts.epochs = 500;
  const auto r = adam_train(model, data, opts, {0.2});
  CHECK(r.final_loss < r.initial_loss);
  CHECK(r.final_loss < 1e-5);
  CHECK(r.rmse == doctest::Approx(std::sqrt(r.final_loss)));
}

TEST_CASE("minibatch training is reproducible") {
  const TrainConfig cfg = [] {
    TrainConfig c = tiny_config();
    c.batch_size = 4;
    c.lr = 1e-3;
    return c;
  }();
  const auto a = spectrum_matching_experiment(cfg);
  const auto b = spectrum_matching_experiment(cfg);
  REQUIRE(a.runs.size() == 4);
  for (std::size_t k = 0; k < a.runs.size(); ++k) {
    CHECK(a.runs[k].result.theta_final == b.runs[k].result.theta_final);
    CHECK(a.runs[k].result.rmse == b.runs[k].result.rmse);
  }
}

TEST_CASE("spectrum matching report layout") {
  TrainConfig cfg = tiny_config();
  cfg.b_models = {0.1, 1.0, 10.0};
  const auto r = spectrum_matching_experiment(cfg, 2);
  REQUIRE(r.runs.size() == 6);
  CHECK(r.runs[0].b_model == 0.1);
  CHECK(r.runs[0].seed == 1);
  CHECK(r.runs[1].seed == 2);
  CHECK(r.runs[5].b_model == 10.0);
  REQUIRE(r.mean_rmse.size() == 3);
  const auto b1 = r.rmse_for(1.0);
  CHECK(r.mean_rmse[1] == doctest::Approx((b1[0] + b1[1]) / 2).epsilon(1e-15));
  REQUIRE(r.wilcoxon.has_value());
  CHECK(r.wilcoxon->n_used + r.wilcoxon->zeros_dropped == 2);
  for (const auto& run : r.runs) {
    CHECK(run.result.rmse >= 0.0);
    CHECK(run.result.theta_init.size() == 2);
    for (double t : run.result.theta_init) {
      CHECK(t >= -kPi);
      CHECK(t < kPi);
    }
  }
  // Thread count does not change results.
  const auto serial = spectrum_matching_experiment(cfg, 1);
  for (std::size_t k = 0; k < r.runs.size(); ++k) CHECK(serial.runs[k].result.rmse == r.runs[k].result.rmse);
}

TEST_CASE("shared generator basis reuses the target eigenvectors") {
  TrainConfig cfg = tiny_config();
  cfg.share_generator_basis = true;
  cfg.b_models = {10.0};
  cfg.epochs = 1;
  cfg.lr = 1e-12;
  const auto shared = spectrum_matching_experiment(cfg);
  cfg.share_generator_basis = false;
  const auto fresh = spectrum_matching_experiment(cfg);
  CHECK(shared.runs[0].result.rmse != fresh.runs[0].result.rmse);
}

TEST_CASE("wilcoxon_exact examples") {
  std::vector<double> pos;
  for (int i = 1; i <= 10; ++i) pos.push_back(0.1 * i);
  const auto all_pos = wilcoxon_exact(pairs_from(pos));
  CHECK(all_pos.p_two_sided == 2.0 / 1024.0);
  CHECK(all_pos.w_plus == 55.0);
  CHECK(all_pos.w_minus == 0.0);

  CHECK(wilcoxon_exact(pairs_from({1.0, -1.0})).p_two_sided == 1.0);

  const auto with_zero = wilcoxon_exact(pairs_from({0.0, 1.0, 2.0}));
  CHECK(with_zero.zeros_dropped == 1);
  CHECK(with_zero.n_used == 2);

  try {
    wilcoxon_exact(pairs_from({0.0, 0.0}));
    FAIL("expected AllZeroDifferences");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AllZeroDifferences);
  }
}

TEST_CASE("wilcoxon_exact agrees with a subset-sum oracle, ties included") {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 14;
    std::vector<double> d(n);
    // Coarse rounding forces ties and occasional zeros.
    for (double& x : d) x = std::round(rng.uniform(-3, 3) * 2.0) / 2.0;
    bool any = false;
    for (double x : d) any = any || x != 0.0;
    if (!any) continue;
    CHECK(wilcoxon_exact(pairs_from(d)).p_two_sided == doctest::Approx(wilcoxon_dp(d)).epsilon(1e-14));
  }
}

TEST_CASE("wilcoxon_exact is invariant under affine maps of both members") {
  Rng rng(14);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::pair<double, double>> p(8);
    for (auto& [a, b] : p) {
      a = std::round(rng.uniform(0, 8));
      b = std::round(rng.uniform(0, 8));
    }
    bool any = false;
    for (auto& [a, b] : p) any = any || a != b;
    if (!any) continue;
    const double base = wilcoxon_exact(p).p_two_sided;
    for (double scale : {2.0, 0.5, -3.0}) {
      std::vector<std::pair<double, double>> q = p;
      for (auto& [a, b] : q) {
        a = scale * a + 7.0;
        b = scale * b + 7.0;
      }
      CHECK(wilcoxon_exact(q).p_two_sided == base);
    }
  }
}

TEST_CASE("analytic variance oracle") {
  CHECK(analytic_variance_oracle(0.0) == 0.0);
  CHECK(analytic_variance_oracle(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(analytic_variance_oracle(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  // Direct quadrature of (2w sin 2w theta)^2 over [-2 pi, 2 pi] (the mean is 0 by symmetry).
  for (double w : {0.1, 0.3, 0.77}) {
    const int n = 200000;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double th = -2 * kPi + 4 * kPi * (k + 0.5) / n;
      const double g = 2 * w * std::sin(2 * w * th);
      acc += g * g;
    }
    CHECK(analytic_variance_oracle(w) == doctest::Approx(acc / n).epsilon(1e-8));
  }
}

TEST_CASE("variance sweep: shape, eta and Monte Carlo accuracy") {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  const auto big = variance_sweep(grid, 100000, 42);
  REQUIRE(big.points.size() == grid.size());
  CHECK(big.points[0].variance == 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const auto& p = big.points[k];
    CHECK(std::abs(p.variance - p.analytic_variance) <= 0.02 * p.analytic_variance);
    CHECK(p.variance >= big.points[k - 1].variance);
    CHECK(p.eta < big.points[k - 1].eta);
    CHECK(p.eta == doctest::Approx(2.0 / std::sqrt(1.0 + grid[k] * grid[k])).epsilon(1e-12));
  }
  CHECK(big.points[0].eta == 2.0);

  const auto small_a = variance_sweep(grid, 50, 7);
  const auto small_b = variance_sweep(grid, 50, 7, 3);
  for (std::size_t k = 0; k < grid.size(); ++k) CHECK(small_a.points[k].variance == small_b.points[k].variance);
  CHECK_THROWS_AS(variance_sweep(grid, 1, 7), Error);
}

TEST_CASE("center-weighted generator") {
  const ComplexMatrix h = center_weighted_generator(0.5);
  CHECK(h(0, 0) == cplx(1.0, 0.0));
  CHECK(h(0, 1) == cplx(0.0, -0.5));
  CHECK(h(1, 0) == cplx(0.0, 0.5));
}

TEST_CASE("config parsing") {
  const TrainConfig kv = parse_train_config("# comment\nepochs = 7\nseeds = 3, 4\nb_models = [1, 10]\nentangler = chain\n");
  CHECK(kv.epochs == 7);
  CHECK(kv.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(kv.b_models == std::vector<double>{1.0, 10.0});
  CHECK(kv.entangler == EntanglerKind::Chain);
  CHECK(kv.n == 3);

  const TrainConfig js = parse_train_config(R"({"lr": 0.001, "dataset_size": 50, "share_generator_basis": true, "seeds": [5]})");
  CHECK(js.lr == 0.001);
  CHECK(js.dataset_size == 50);
  CHECK(js.share_generator_basis);
  CHECK(js.seeds == std::vector<std::uint64_t>{5});

  CHECK_THROWS_AS(parse_train_config("bogus = 1"), Error);
  CHECK_THROWS_AS(parse_train_config("epochs = ten"), Error);
  CHECK_THROWS_AS(parse_train_config("seeds = 1, 1"), Error);
  CHECK_THROWS_AS(parse_train_config("lr = 0"), Error);
  CHECK_THROWS_AS(parse_train_config("{\"epochs\": }"), Error);
}

TEST_CASE("fast profile") {
  const TrainConfig f = TrainConfig::fast();
  CHECK(f.dataset_size == 200);
  CHECK(f.epochs == 100);
  CHECK(f.seeds.size() == 6);
  const TrainConfig d;
  CHECK(d.dataset_size == 1000);
  CHECK(d.epochs == 500);
  CHECK(d.lr == 1e-5);
  CHECK(d.seeds.size() == 10);
}
