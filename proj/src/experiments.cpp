#include "qspec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qspec/dla.hpp"
#include "qspec/error.hpp"
#include "qspec/rng.hpp"

namespace qspec {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream ids for Rng::split within one run seed.
constexpr std::uint64_t kDatasetStream = 1;
constexpr std::uint64_t kTargetStream = 100;
constexpr std::uint64_t kModelStream = 1000;
constexpr std::uint64_t kInitStream = 5000;

void run_parallel(std::size_t units, std::size_t threads, const std::function<void(std::size_t)>& work) {
  threads = std::max<std::size_t>(1, std::min(threads, units));
  if (threads == 1) {
    for (std::size_t k = 0; k < units; ++k) work(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k = next++; k < units; k = next++) work(k);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == '[' || c == ']') {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + key + "': not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::InvalidArgument, "config key '" + key + "': not a boolean: '" + v + "'");
}

void apply_key(TrainConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "n") {
    cfg.n = static_cast<int>(to_double(key, value));
  } else if (key == "L") {
    cfg.L = static_cast<int>(to_double(key, value));
  } else if (key == "dataset_size") {
    cfg.dataset_size = static_cast<std::size_t>(to_double(key, value));
  } else if (key == "lr") {
    cfg.lr = to_double(key, value);
  } else if (key == "epochs") {
    cfg.epochs = static_cast<int>(to_double(key, value));
  } else if (key == "seeds") {
    cfg.seeds.clear();
    for (const auto& s : split_list(value)) cfg.seeds.push_back(static_cast<std::uint64_t>(to_double(key, s)));
  } else if (key == "b_target") {
    cfg.b_target = to_double(key, value);
  } else if (key == "b_models") {
    cfg.b_models.clear();
    for (const auto& s : split_list(value)) cfg.b_models.push_back(to_double(key, s));
  } else if (key == "fd_step") {
    cfg.fd_step = to_double(key, value);
  } else if (key == "batch_size") {
    cfg.batch_size = static_cast<std::size_t>(to_double(key, value));
  } else if (key == "share_generator_basis") {
    cfg.share_generator_basis = to_bool(key, value);
  } else if (key == "entangler") {
    cfg.entangler = parse_entangler(value);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
}

std::string json_scalar_text(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ",") + json_scalar_text(e);
    return out;
  }
  return v.dump();
}

}  // namespace

TrainConfig TrainConfig::fast() {
  TrainConfig cfg;
  cfg.dataset_size = 200;
  cfg.epochs = 100;
  cfg.seeds = {1, 2, 3, 4, 5, 6};
  return cfg;
}

void TrainConfig::validate() const {
  if (n < 1 || n > 10) throw Error(ErrorCode::InvalidArgument, "n must be in [1, 10]");
  if (L < 1) throw Error(ErrorCode::InvalidArgument, "L must be >= 1");
  if (dataset_size < 1) throw Error(ErrorCode::InvalidArgument, "dataset_size must be >= 1");
  if (!(lr > 0.0)) throw Error(ErrorCode::InvalidArgument, "lr must be > 0");
  if (epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (!(fd_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "fd_step must be > 0");
  if (seeds.empty()) throw Error(ErrorCode::InvalidArgument, "at least one seed required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw Error(ErrorCode::InvalidArgument, "seeds must be distinct");
  }
  if (b_models.empty()) throw Error(ErrorCode::InvalidArgument, "at least one b_model required");
  if (b_target < 0.0) throw Error(ErrorCode::InvalidArgument, "b_target must be >= 0");
  for (double b : b_models)
    if (b < 0.0) throw Error(ErrorCode::InvalidArgument, "b_models must be >= 0");
}

ConfigEntries parse_config_entries(const std::string& text) {
  ConfigEntries entries;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::InvalidArgument, std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config JSON must be an object");
    for (const auto& [key, value] : j.items()) entries.emplace_back(key, json_scalar_text(value));
    return entries;
  }
  std::istringstream in(body);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TrainConfig parse_train_config(const std::string& text, TrainConfig cfg) {
  for (const auto& [key, value] : parse_config_entries(text)) apply_key(cfg, key, value);
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::string& path, TrainConfig cfg) {
  return parse_train_config(read_text_file(path), std::move(cfg));
}

Dataset gen_dataset(const Circuit& target, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> ones(target.depth(), 1.0);
  Dataset data;
  data.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = rng.uniform(-1.0, 1.0);
    data.push_back({x, target.forward(ones, x)});
  }
  return data;
}

namespace {

// The model written in the eigenbases of its layers. Layer l is diagonal in
// its own frame, W_l = V_l^dagger V_{l-1} moves between frames, and the
// observable is pulled into the last frame once. Central differences then
// cost one phase multiply per shifted layer plus the remaining frame changes.
class EigenFrameModel {
 public:
  EigenFrameModel(const Circuit& model, double step) : dim_(model.dim()), depth_(model.depth()), step_(step) {
    if (depth_ == 0) throw Error(ErrorCode::InvalidArgument, "model has no layers");
    for (std::size_t l = 0; l < depth_; ++l) {
      const HermitianEigen& e = model.layer_eigen(l);
      lambda_.push_back(e.values);
      if (l > 0) transitions_.push_back(model.layer_eigen(l).vectors.adjoint() * model.layer_eigen(l - 1).vectors);
      std::vector<cplx> plus(dim_), minus(dim_);
      for (std::size_t k = 0; k < dim_; ++k) {
        plus[k] = std::polar(1.0, -step * e.values[k]);
        minus[k] = std::conj(plus[k]);
      }
      shift_plus_.push_back(std::move(plus));
      shift_minus_.push_back(std::move(minus));
    }
    first_adjoint_ = model.layer_eigen(0).vectors.adjoint();
    const ComplexMatrix& last = model.layer_eigen(depth_ - 1).vectors;
    observable_ = last.adjoint() * model.spec().observable * last;
  }

  std::vector<cplx> to_frame(const StateVector& encoded) const { return first_adjoint_.apply(encoded.amplitudes); }

  /// Mean squared error and its central-difference gradient over the samples
  /// frames[idx[j]] with targets[idx[j]].
  std::pair<double, std::vector<double>> loss_and_grad(std::span<const double> theta,
                                                       std::span<const std::vector<cplx>> frames,
                                                       std::span<const double> targets,
                                                       std::span<const std::size_t> idx) const {
    if (theta.size() != depth_) throw Error(ErrorCode::DimMismatch, "parameter count");
    std::vector<std::vector<cplx>> phase(depth_, std::vector<cplx>(dim_));
    for (std::size_t l = 0; l < depth_; ++l)
      for (std::size_t k = 0; k < dim_; ++k) phase[l][k] = std::polar(1.0, -theta[l] * lambda_[l][k]);

    std::vector<std::vector<cplx>> inputs(depth_, std::vector<cplx>(dim_));
    std::vector<cplx> z(dim_), tmp(dim_);
    double loss = 0.0;
    std::vector<double> grad(depth_, 0.0);
    // Runs layers l..L-1 on z, whose layer-l phase is already applied.
    auto finish = [&](std::size_t l) {
      for (std::size_t k = l + 1; k < depth_; ++k) {
        matvec(transitions_[k - 1], z, tmp);
        for (std::size_t i = 0; i < dim_; ++i) z[i] = phase[k][i] * tmp[i];
      }
      return quadratic(z, tmp);
    };
    for (std::size_t j : idx) {
      inputs[0] = frames[j];
      for (std::size_t l = 0; l + 1 < depth_; ++l) {
        for (std::size_t i = 0; i < dim_; ++i) z[i] = phase[l][i] * inputs[l][i];
        matvec(transitions_[l], z, inputs[l + 1]);
      }
      for (std::size_t i = 0; i < dim_; ++i) z[i] = phase[depth_ - 1][i] * inputs[depth_ - 1][i];
      const double resid = quadratic(z, tmp) - targets[j];
      loss += resid * resid;
      for (std::size_t l = 0; l < depth_; ++l) {
        for (std::size_t i = 0; i < dim_; ++i) z[i] = phase[l][i] * shift_plus_[l][i] * inputs[l][i];
        const double f_plus = finish(l);
        for (std::size_t i = 0; i < dim_; ++i) z[i] = phase[l][i] * shift_minus_[l][i] * inputs[l][i];
        const double f_minus = finish(l);
        grad[l] += 2.0 * resid * (f_plus - f_minus) / (2.0 * step_);
      }
    }
    const auto m = static_cast<double>(idx.size());
    for (double& g : grad) g /= m;
    return {loss / m, grad};
  }

 private:
  void matvec(const ComplexMatrix& a, const std::vector<cplx>& x, std::vector<cplx>& y) const {
    for (std::size_t r = 0; r < dim_; ++r) {
      cplx acc = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) acc += a(r, c) * x[c];
      y[r] = acc;
    }
  }

  double quadratic(const std::vector<cplx>& z, std::vector<cplx>& scratch) const {
    matvec(observable_, z, scratch);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) acc += (std::conj(z[i]) * scratch[i]).real();
    return acc;
  }

  std::size_t dim_;
  std::size_t depth_;
  double step_;
  std::vector<std::vector<double>> lambda_;
  std::vector<ComplexMatrix> transitions_;
  std::vector<std::vector<cplx>> shift_plus_, shift_minus_;
  ComplexMatrix first_adjoint_;
  ComplexMatrix observable_;
};

std::vector<std::size_t> iota_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

std::pair<double, std::vector<double>> mse_and_grad_fd(const Circuit& model, std::span<const double> theta,
                                                       std::span<const StateVector> encoded,
                                                       std::span<const double> targets, double step) {
  if (encoded.size() != targets.size() || encoded.empty()) {
    throw Error(ErrorCode::InvalidArgument, "dataset must be nonempty and consistent");
  }
  const EigenFrameModel frame(model, step);
  std::vector<std::vector<cplx>> frames;
  for (const auto& psi : encoded) frames.push_back(frame.to_frame(psi));
  return frame.loss_and_grad(theta, frames, targets, iota_indices(targets.size()));
}

TrainResult adam_train(const Circuit& model, const Dataset& data, const AdamOptions& opts,
                       std::vector<double> theta_init) {
  if (data.empty()) throw Error(ErrorCode::InvalidArgument, "training data is empty");
  if (theta_init.size() != model.depth()) throw Error(ErrorCode::DimMismatch, "initial parameter count");

  const EigenFrameModel frame(model, opts.fd_step);
  std::vector<std::vector<cplx>> frames;
  std::vector<double> targets;
  frames.reserve(data.size());
  for (const auto& s : data) {
    frames.push_back(frame.to_frame(model.encoded_state(s.x)));
    targets.push_back(s.y);
  }
  const std::vector<std::size_t> all = iota_indices(data.size());

  TrainResult out;
  out.theta_init = theta_init;
  std::vector<double> theta = std::move(theta_init);
  std::vector<double> m1(theta.size(), 0.0), m2(theta.size(), 0.0);
  double b1t = 1.0, b2t = 1.0;
  auto adam_step = [&](const std::vector<double>& grad) {
    b1t *= opts.beta1;
    b2t *= opts.beta2;
    for (std::size_t k = 0; k < theta.size(); ++k) {
      m1[k] = opts.beta1 * m1[k] + (1.0 - opts.beta1) * grad[k];
      m2[k] = opts.beta2 * m2[k] + (1.0 - opts.beta2) * grad[k] * grad[k];
      const double mhat = m1[k] / (1.0 - b1t);
      const double vhat = m2[k] / (1.0 - b2t);
      theta[k] -= opts.lr * mhat / (std::sqrt(vhat) + opts.eps);
    }
  };

  out.initial_loss = frame.loss_and_grad(theta, frames, targets, all).first;
  const std::size_t batch = opts.batch_size == 0 ? data.size() : std::min(opts.batch_size, data.size());
  if (batch == data.size()) {
    for (int epoch = 0; epoch < opts.epochs; ++epoch) adam_step(frame.loss_and_grad(theta, frames, targets, all).second);
  } else {
    Rng shuffle(opts.shuffle_seed);
    std::vector<std::size_t> order = all;
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
      for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[shuffle.next_u64() % (i + 1)]);
      for (std::size_t start = 0; start < order.size(); start += batch) {
        const std::size_t count = std::min(batch, order.size() - start);
        adam_step(frame.loss_and_grad(theta, frames, targets, std::span(order).subspan(start, count)).second);
      }
    }
  }

  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = model.forward_from(theta, model.encoded_state(data[i].x)) - targets[i];
    loss += r * r;
  }
  out.final_loss = loss / static_cast<double>(data.size());
  out.rmse = std::sqrt(out.final_loss);
  out.theta_final = std::move(theta);
  return out;
}

TrainResult adam_train(const Circuit& model, const Dataset& data, const TrainConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> init(model.depth());
  for (auto& t : init) t = rng.uniform(-kPi, kPi);
  AdamOptions opts;
  opts.lr = cfg.lr;
  opts.epochs = cfg.epochs;
  opts.fd_step = cfg.fd_step;
  opts.batch_size = cfg.batch_size;
  opts.shuffle_seed = rng.next_u64();
  return adam_train(model, data, opts, std::move(init));
}

WilcoxonResult wilcoxon_exact(std::span<const std::pair<double, double>> pairs) {
  WilcoxonResult res;
  std::vector<double> diffs;
  for (const auto& [a, b] : pairs) {
    const double d = a - b;
    if (d == 0.0) {
      ++res.zeros_dropped;
    } else {
      diffs.push_back(d);
    }
  }
  if (diffs.empty()) throw Error(ErrorCode::AllZeroDifferences, "every paired difference is zero");
  const std::size_t n = diffs.size();
  if (n > 20) throw Error(ErrorCode::InvalidArgument, "exact enumeration limited to 20 nonzero pairs");
  res.n_used = n;

  // Doubled average ranks keep tied ranks integral.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(diffs[i]) < std::abs(diffs[j]); });
  std::vector<long long> rank2(n);
  std::size_t k = 0;
  while (k < n) {
    std::size_t e = k;
    while (e + 1 < n && std::abs(diffs[order[e + 1]]) == std::abs(diffs[order[k]])) ++e;
    const auto avg2 = static_cast<long long>(k + 1 + e + 1);  // 2 * mean of ranks k+1..e+1
    for (std::size_t t = k; t <= e; ++t) rank2[order[t]] = avg2;
    k = e + 1;
  }

  long long observed = 0;
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += rank2[i];
    if (diffs[i] > 0.0) observed += rank2[i];
  }
  res.w_plus = static_cast<double>(observed) / 2.0;
  res.w_minus = static_cast<double>(total - observed) / 2.0;

  std::uint64_t le = 0, ge = 0;
  const std::uint64_t assignments = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < assignments; ++mask) {
    long long w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) w += rank2[i];
    if (w <= observed) ++le;
    if (w >= observed) ++ge;
  }
  const double tail = static_cast<double>(std::min(le, ge)) / static_cast<double>(assignments);
  res.p_two_sided = std::min(1.0, 2.0 * tail);
  return res;
}

std::vector<double> TrainReport::rmse_for(double b_model) const {
  std::vector<double> out;
  for (const auto& r : runs)
    if (r.b_model == b_model) out.push_back(r.result.rmse);
  return out;
}

TrainReport spectrum_matching_experiment(const TrainConfig& cfg, std::size_t threads) {
  cfg.validate();
  const std::size_t dim = std::size_t{1} << cfg.n;
  const std::size_t S = cfg.seeds.size();
  const std::size_t B = cfg.b_models.size();

  struct SeedSetup {
    std::vector<std::uint64_t> target_haar;
    Dataset data;
  };
  std::vector<SeedSetup> setups(S);
  const auto entangler = make_entangler(cfg.entangler, cfg.n);
  const auto observable = z_observable(cfg.n, 0);

  run_parallel(S, threads, [&](std::size_t si) {
    const Rng root(cfg.seeds[si]);
    CircuitSpec spec{cfg.n, {}, entangler, observable};
    auto& setup = setups[si];
    for (int l = 0; l < cfg.L; ++l) {
      const std::uint64_t haar = root.split(kTargetStream + static_cast<std::uint64_t>(l)).next_u64();
      setup.target_haar.push_back(haar);
      spec.generators.push_back(make_generator(dim, cfg.b_target, haar));
    }
    const Circuit target(std::move(spec));
    setup.data = gen_dataset(target, cfg.dataset_size, root.split(kDatasetStream).next_u64());
  });

  TrainReport report;
  report.config = cfg;
  report.runs.resize(S * B);
  run_parallel(S * B, threads, [&](std::size_t unit) {
    const std::size_t bi = unit / S;
    const std::size_t si = unit % S;
    const Rng root(cfg.seeds[si]);
    CircuitSpec spec{cfg.n, {}, entangler, observable};
    for (int l = 0; l < cfg.L; ++l) {
      const std::uint64_t haar =
          cfg.share_generator_basis
              ? setups[si].target_haar[static_cast<std::size_t>(l)]
              : root.split(kModelStream + 16 * bi + static_cast<std::uint64_t>(l)).next_u64();
      spec.generators.push_back(make_generator(dim, cfg.b_models[bi], haar));
    }
    const Circuit model(std::move(spec));
    const std::uint64_t init_seed = root.split(kInitStream + bi).next_u64();
    report.runs[unit] = ModelRun{cfg.seeds[si], cfg.b_models[bi], adam_train(model, setups[si].data, cfg, init_seed)};
  });

  for (std::size_t bi = 0; bi < B; ++bi) {
    double mean = 0.0;
    for (std::size_t si = 0; si < S; ++si) mean += report.runs[bi * S + si].result.rmse;
    mean /= static_cast<double>(S);
    double var = 0.0;
    for (std::size_t si = 0; si < S; ++si) {
      const double d = report.runs[bi * S + si].result.rmse - mean;
      var += d * d;
    }
    report.mean_rmse.push_back(mean);
    report.std_rmse.push_back(S > 1 ? std::sqrt(var / static_cast<double>(S - 1)) : 0.0);
  }

  const auto b1 = std::find(cfg.b_models.begin(), cfg.b_models.end(), 1.0);
  const auto b10 = std::find(cfg.b_models.begin(), cfg.b_models.end(), 10.0);
  if (b1 != cfg.b_models.end() && b10 != cfg.b_models.end() && S <= 20) {
    const auto i1 = static_cast<std::size_t>(b1 - cfg.b_models.begin());
    const auto i10 = static_cast<std::size_t>(b10 - cfg.b_models.begin());
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t si = 0; si < S; ++si) {
      pairs.emplace_back(report.runs[i1 * S + si].result.rmse, report.runs[i10 * S + si].result.rmse);
    }
    try {
      report.wilcoxon = wilcoxon_exact(pairs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AllZeroDifferences) throw;
    }
  }
  return report;
}

ComplexMatrix center_weighted_generator(double w) {
  return pauli_string("IY") * cplx(w, 0.0) + pauli_string("II");
}

double analytic_variance_oracle(double w) {
  if (w < 0.0) throw Error(ErrorCode::DomainError, "weight must be >= 0");
  if (w == 0.0) return 0.0;
  return 4.0 * w * w * (0.5 - std::sin(8.0 * kPi * w) / (16.0 * kPi * w));
}

VarianceSweepReport variance_sweep(std::span<const double> weights, std::size_t samples, std::uint64_t seed,
                                   std::size_t threads) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "variance needs at least 2 samples");
  for (double w : weights)
    if (w < 0.0 || w > 1.0) throw Error(ErrorCode::DomainError, "weights must lie in [0, 1]");

  VarianceSweepReport report;
  report.samples = samples;
  report.seed = seed;
  report.points.resize(weights.size());
  const ComplexMatrix observable = pauli_string("IZ");
  const StateVector zero = StateVector::basis(4, 0);

  run_parallel(weights.size(), threads, [&](std::size_t k) {
    const double w = weights[k];
    const ComplexMatrix h = center_weighted_generator(w);
    const HermitianEigen eig = eig_hermitian(h);
    Rng rng = Rng(seed).split(k);
    std::vector<double> grads(samples);
    for (auto& g : grads) g = grad_analytic_1p(eig, h, rng.uniform(-2.0 * kPi, 2.0 * kPi), observable, zero);
    double mean = 0.0;
    for (double g : grads) mean += g;
    mean /= static_cast<double>(samples);
    double ss = 0.0;
    for (double g : grads) ss += (g - mean) * (g - mean);
    report.points[k] = {w, ss / static_cast<double>(samples - 1), eta(h), analytic_variance_oracle(w)};
  });
  return report;
}

std::size_t threads_from_env() {
  std::size_t hw = std::max<unsigned>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QSPEC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return std::min<std::size_t>(hw, static_cast<std::size_t>(v));
  }
  return hw;
}

}  // namespace qspec
