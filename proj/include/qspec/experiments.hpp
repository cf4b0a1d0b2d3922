#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qspec/qsim.hpp"

namespace qspec {

/// Spectrum-matching training setup. Defaults are the paper-scale profile.
struct TrainConfig {
  int n = 3;
  int L = 5;
  std::size_t dataset_size = 1000;
  double lr = 1e-5;
  int epochs = 500;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double b_target = 10.0;
  std::vector<double> b_models{0.1, 1.0, 10.0};
  double fd_step = 1e-5;
  std::size_t batch_size = 10;  // samples per Adam step; 0 = full batch
  bool share_generator_basis = false;
  EntanglerKind entangler = EntanglerKind::Ring;

  /// 200 samples, 100 epochs, 6 seeds.
  static TrainConfig fast();
  void validate() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Splits `key = value` lines (with # comments) or a single JSON object into
/// ordered entries. JSON arrays become comma-separated values.
ConfigEntries parse_config_entries(const std::string& text);
std::string read_text_file(const std::string& path);

/// Applies `key = value` lines or a single JSON object on top of `cfg`.
/// Unknown keys are rejected.
TrainConfig parse_train_config(const std::string& text, TrainConfig cfg = {});
TrainConfig load_train_config(const std::string& path, TrainConfig cfg = {});

struct Sample {
  double x;
  double y;
};
using Dataset = std::vector<Sample>;

/// x ~ U[-1, 1], y = target circuit at theta = (1, ..., 1).
Dataset gen_dataset(const Circuit& target, std::size_t count, std::uint64_t seed);

struct AdamOptions {
  double lr = 1e-5;
  int epochs = 500;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double fd_step = 1e-5;
  std::size_t batch_size = 0;  // 0 = full batch; otherwise shuffled minibatches per epoch
  std::uint64_t shuffle_seed = 0;
};

struct TrainResult {
  std::vector<double> theta_init;
  std::vector<double> theta_final;
  double initial_loss = 0.0;  // MSE before the first step
  double final_loss = 0.0;    // MSE after the last step
  double rmse = 0.0;          // sqrt(final_loss)
};

/// Mean squared error and its central-difference gradient over the dataset.
std::pair<double, std::vector<double>> mse_and_grad_fd(const Circuit& model, std::span<const double> theta,
                                                       std::span<const StateVector> encoded,
                                                       std::span<const double> targets, double step);

/// Full-batch Adam on the MSE starting from theta_init.
TrainResult adam_train(const Circuit& model, const Dataset& data, const AdamOptions& opts,
                       std::vector<double> theta_init);
/// Same, with theta_init ~ U[-pi, pi) drawn from `seed`.
TrainResult adam_train(const Circuit& model, const Dataset& data, const TrainConfig& cfg, std::uint64_t seed);

struct WilcoxonResult {
  double p_two_sided = 1.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n_used = 0;
  std::size_t zeros_dropped = 0;
};

/// Exact two-sided signed-rank test on a - b by enumerating all 2^n sign
/// assignments. Ties get average ranks. n <= 20 after dropping zeros.
WilcoxonResult wilcoxon_exact(std::span<const std::pair<double, double>> pairs);

struct ModelRun {
  std::uint64_t seed = 0;
  double b_model = 0.0;
  TrainResult result;
};

struct TrainReport {
  TrainConfig config;
  std::vector<ModelRun> runs;  // sorted by (b index, seed)
  std::vector<double> mean_rmse;   // per b_model
  std::vector<double> std_rmse;    // sample standard deviation per b_model
  std::optional<WilcoxonResult> wilcoxon;  // b = 1 vs b = 10 when both present

  std::vector<double> rmse_for(double b_model) const;
};

/// Seeds and models are independent units; `threads` of them run at once and
/// results are assembled in a fixed order.
TrainReport spectrum_matching_experiment(const TrainConfig& cfg, std::size_t threads = 1);

struct VariancePoint {
  double weight = 0.0;
  double variance = 0.0;
  double eta = 0.0;
  double analytic_variance = 0.0;
};

struct VarianceSweepReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<VariancePoint> points;
};

/// H = w (I (x) Y) + I (x) I, O = I (x) Z, |00>, theta ~ U[-2 pi, 2 pi].
VarianceSweepReport variance_sweep(std::span<const double> weights, std::size_t samples, std::uint64_t seed,
                                   std::size_t threads = 1);

/// Population variance of -2w sin(2 w theta), theta ~ U[-2 pi, 2 pi].
double analytic_variance_oracle(double w);

/// Generator and observable used by the sweep.
ComplexMatrix center_weighted_generator(double w);

/// Hardware concurrency, capped by QSPEC_THREADS when set.
std::size_t threads_from_env();

}  // namespace qspec
