#include "qspec/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qspec/acceptance.hpp"
#include "qspec/bounds.hpp"
#include "qspec/dla.hpp"
#include "qspec/error.hpp"
#include "qspec/experiments.hpp"
#include "qspec/report.hpp"
#include "qspec/rng.hpp"
#include "qspec/spectrum.hpp"

namespace qspec {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, "not a finite number: '" + t + "'");
  }
  return v;
}

// Rethrows list parse failures as usage errors that name the flag.
template <class F>
auto for_flag(const std::string& flag, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::vector<std::uint64_t> parse_seed_list(const std::string& flag, const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (double v : for_flag(flag, [&] { return parse_number_list(text); })) {
    if (v < 0 || v != std::floor(v)) throw UsageError(flag + ": seeds must be non-negative integers");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  return seeds;
}

// "-1,1" after a flag would otherwise be taken for a short option.
std::vector<std::string> join_negative_values(const std::vector<std::string>& argv) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < argv.size(); ++k) {
    const std::string& a = argv[k];
    const bool is_long_flag = a.size() > 2 && a.rfind("--", 0) == 0 && a.find('=') == std::string::npos;
    if (is_long_flag && k + 1 < argv.size()) {
      const std::string& next = argv[k + 1];
      if (next.size() > 1 && next[0] == '-' && (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
        out.push_back(a + "=" + next);
        ++k;
        continue;
      }
    }
    out.push_back(a);
  }
  return out;
}

struct Emitted {
  Json config = Json::object();
  std::vector<std::uint64_t> seeds;
  Json result;
  std::vector<CsvTable> tables;
  Json timings;
  int exit_code = 0;
};

CsvTable scalar_table(const std::vector<std::pair<std::string, std::string>>& kv) {
  CsvTable t{{"key", "value"}, {}};
  for (const auto& [k, v] : kv) t.rows.push_back({k, v});
  return t;
}

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// ---- spectrum ---------------------------------------------------------------

struct SpectrumArgs {
  std::vector<std::string> eigs;
  std::vector<std::string> pauli;
  std::vector<double> haar_b;
  std::size_t dim = 8;
  double tol = kGapTolerance;
};

Emitted run_spectrum(const SpectrumArgs& a, std::uint64_t seed) {
  struct Param {
    std::string source;
    std::vector<double> eigenvalues;
    std::optional<ComplexMatrix> matrix;
  };
  std::vector<Param> params;
  for (const auto& e : a.eigs) {
    params.push_back({"eigs:" + e, for_flag("--eigs", [&] { return parse_number_list(e); }), std::nullopt});
  }
  for (const auto& p : a.pauli) {
    ComplexMatrix m = for_flag("--pauli", [&] { return parse_pauli_sum(p); });
    params.push_back({"pauli:" + p, eig_hermitian(m).values, m});
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < a.haar_b.size(); ++k) {
    ComplexMatrix m = make_generator(a.dim, a.haar_b[k], rng.split(k).next_u64());
    params.push_back({"haar_b:" + format_number(a.haar_b[k]), eig_hermitian(m).values, m});
  }
  if (params.empty()) throw UsageError("spectrum: give at least one --eigs, --pauli or --haar-b");

  Emitted em;
  em.config = Json{{"eigs", a.eigs}, {"pauli", a.pauli}, {"haar_b", a.haar_b}, {"dim", a.dim}, {"tol", a.tol}};
  em.seeds = {seed};

  Json per = Json::array();
  std::vector<NormalizedGapSet> normalized;
  std::vector<ComplexMatrix> matrices;
  double omega_max = 0.0;
  CsvTable params_table{{"param", "source", "omega_max", "gamma", "width"}, {}};
  CsvTable gaps_table{{"param", "gap", "int_gap"}, {}};
  for (std::size_t j = 0; j < params.size(); ++j) {
    const GapSet g = gap_set(params[j].eigenvalues, a.tol);
    const NormalizedGapSet ng = normalize_gaps(g);
    omega_max = std::max(omega_max, g.omega_max);
    Json entry{{"source", params[j].source}, {"eigenvalues", params[j].eigenvalues}};
    entry.update(to_json(g));
    entry["normalized"] = to_json(ng);
    per.push_back(entry);
    params_table.rows.push_back({std::to_string(j), csv_text(params[j].source), format_number(g.omega_max),
                                 format_number(ng.gamma), std::to_string(ng.width())});
    for (std::size_t k = 0; k < g.gaps.size(); ++k) {
      gaps_table.rows.push_back({std::to_string(j), format_number(g.gaps[k]),
                                 k < ng.int_gaps.size() ? std::to_string(ng.int_gaps[k]) : ""});
    }
    normalized.push_back(ng);
    if (params[j].matrix) matrices.push_back(*params[j].matrix);
  }
  const FrequencyEnvelope env = envelope(normalized);
  const double radius_bound = std::sqrt(static_cast<double>(env.d)) * omega_max;
  Json envelope_json = to_json(env);
  envelope_json.erase("per_param");
  std::optional<double> scan;
  if (env.d <= 6) scan = coverage_radius_scan(normalized);

  em.result = Json{{"parameters", per},
                   {"envelope", envelope_json},
                   {"K_cov_scan", scan ? Json(*scan) : Json(nullptr)},
                   {"radius_bound_sqrt_d_omega_max", radius_bound}};
  std::vector<std::pair<std::string, std::string>> scalars{{"d", std::to_string(env.d)},
                                                          {"K_l2", format_number(env.K_l2)},
                                                          {"K_l1", format_number(env.K_l1)},
                                                          {"K_cov", format_number(env.K_cov)},
                                                          {"radius_bound_sqrt_d_omega_max", format_number(radius_bound)}};
  if (scan) scalars.emplace_back("K_cov_scan", format_number(*scan));
  if (matrices.size() >= 2) {
    const CommutingReport cr = commuting_report(matrices);
    em.result["commuting"] = to_json(cr);
    scalars.emplace_back("commuting_pairs", std::to_string(cr.commuting_count));
  }
  em.tables = {params_table, gaps_table, scalar_table(scalars)};
  return em;
}

// ---- bounds -----------------------------------------------------------------

struct BoundsArgs {
  int d = 1;
  double r = 2.0;
  std::string K;
  std::size_t series = 20;
  int box = 10;
  std::size_t modes = 40;
  std::string pairs;
};

Emitted run_bounds_lower(const BoundsArgs& a) {
  const std::vector<double> K = for_flag("--K", [&] { return parse_number_list(a.K.empty() ? "4,8,16,32" : a.K); });
  const SobolevParams p(a.d, a.r);
  const LowerCurve c = minimax_lower_curve(p, K);
  Emitted em;
  em.config = Json{{"d", a.d}, {"r", a.r}, {"K", K}};
  em.result = to_json(c);
  em.tables = to_csv(c);
  return em;
}

Emitted run_bounds_upper(const BoundsArgs& a, std::uint64_t seed) {
  const std::vector<double> K = for_flag("--K", [&] { return parse_number_list(a.K.empty() ? "1,2,3,4,5,6,7,8" : a.K); });
  const SobolevParams p(a.d, a.r);
  Emitted em;
  em.config = Json{{"d", a.d}, {"r", a.r}, {"K", K}, {"series", a.series}, {"box", a.box}, {"modes", a.modes}};
  CsvTable curve{{"series", "K", "truncation_error", "rigorous_bound", "paper_form"}, {}};
  Json series = Json::array();
  std::size_t violations = 0;
  double worst_constant = 0.0;
  for (std::size_t s = 0; s < a.series; ++s) {
    const std::uint64_t sseed = seed + s;
    em.seeds.push_back(sseed);
    const FourierSeries h = random_unit_ball_series(p, a.box, a.modes, sseed);
    Json errs = Json::array();
    Json rig = Json::array();
    Json paper = Json::array();
    for (double k : K) {
      const double e = truncation_error(h, k);
      const JacksonBound jb = jackson_upper(h, p, k);
      if (e > jb.rigorous * (1.0 + 1e-12)) ++violations;
      errs.push_back(e);
      rig.push_back(jb.rigorous);
      paper.push_back(jb.paper_form);
      curve.rows.push_back({std::to_string(s), format_number(k), format_number(e), format_number(jb.rigorous),
                            format_number(jb.paper_form)});
    }
    const double c = empirical_jackson_constant(h, p, K);
    worst_constant = std::max(worst_constant, c);
    series.push_back(Json{{"seed", sseed},
                          {"sobolev_norm", sobolev_norm(h, a.r)},
                          {"errors", errs},
                          {"rigorous_bound", rig},
                          {"paper_form", paper},
                          {"empirical_constant", c}});
  }
  em.result = Json{{"series", series}, {"violations", violations}, {"max_empirical_constant", worst_constant}};
  em.tables = {curve, scalar_table({{"violations", std::to_string(violations)},
                                    {"max_empirical_constant", format_number(worst_constant)}})};
  return em;
}

Emitted run_bounds_limit(const BoundsArgs& a) {
  std::vector<std::pair<double, int>> pairs;
  if (a.pairs.empty()) {
    for (int k = 1; k <= 10; ++k) {
      const int d = 1 << k;
      pairs.emplace_back(d / 2.0 + 1.0, d);
    }
  } else {
    std::stringstream ss(a.pairs);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw UsageError("--pairs: expected r:d, got '" + item + "'");
      const double r = for_flag("--pairs", [&] { return parse_double(item.substr(0, colon)); });
      const double d = for_flag("--pairs", [&] { return parse_double(item.substr(colon + 1)); });
      if (d < 1 || d != std::floor(d)) throw UsageError("--pairs: d must be a positive integer");
      pairs.emplace_back(r, static_cast<int>(d));
    }
  }
  const std::vector<double> values = limit_probe(pairs);
  Emitted em;
  Json cfg_pairs = Json::array();
  Json pts = Json::array();
  CsvTable t{{"r", "d", "value"}, {}};
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    cfg_pairs.push_back(Json{{"r", pairs[k].first}, {"d", pairs[k].second}});
    pts.push_back(Json{{"r", pairs[k].first}, {"d", pairs[k].second}, {"value", values[k]}});
    t.rows.push_back({format_number(pairs[k].first), std::to_string(pairs[k].second), format_number(values[k])});
  }
  em.config = Json{{"pairs", cfg_pairs}};
  em.result = Json{{"points", pts}};
  em.tables = {t};
  return em;
}

// ---- dla --------------------------------------------------------------------

Emitted run_dla(const std::vector<std::string>& paulis, const std::string& preset) {
  std::vector<std::string> terms = paulis;
  if (!preset.empty()) {
    if (preset == "su2") {
      terms = {"X", "Y"};
    } else if (preset == "u2") {
      terms = {"I", "X", "Y", "Z"};
    } else if (preset == "abelian2") {
      terms = {"ZI", "IZ"};
    } else {
      throw UsageError("--preset: unknown preset '" + preset + "' (su2, u2, abelian2)");
    }
  }
  if (terms.empty()) throw UsageError("dla: give --pauli or --preset");
  std::vector<ComplexMatrix> gens;
  for (const auto& t : terms) gens.push_back(for_flag("--pauli", [&] { return parse_pauli_sum(t); }));
  const DlaReport r = dla_report(gens);
  Emitted em;
  em.config = Json{{"generators", terms}, {"preset", preset}};
  em.result = to_json(r);
  em.result["generators"] = terms;
  if (gens.size() >= 2) em.result["commuting"] = to_json(commuting_report(gens));
  CsvTable etas{{"generator", "eta"}, {}};
  for (std::size_t k = 0; k < terms.size(); ++k) {
    etas.rows.push_back({csv_text(terms[k]), format_number(r.eta_per_generator[k])});
  }
  em.tables = {scalar_table({{"dim", std::to_string(r.dim)},
                             {"center_dim", std::to_string(r.center_dim)},
                             {"derived_dim", std::to_string(r.derived_dim)}}),
               etas};
  return em;
}

// ---- train / variance / selftest -------------------------------------------

struct TrainArgs {
  bool fast = false;
  std::string seeds;
  std::optional<int> epochs;
  std::optional<std::size_t> samples;
  std::optional<double> lr;
  std::optional<double> fd_step;
  std::optional<double> b_target;
  std::optional<std::size_t> batch_size;
  std::string b_models;
  bool share = false;
  std::string entangler;
};

Emitted run_train(const TrainArgs& a, const std::string& config_path, std::optional<std::uint64_t> base_seed,
                  std::size_t threads) {
  TrainConfig cfg = a.fast ? TrainConfig::fast() : TrainConfig{};
  if (!config_path.empty()) cfg = for_flag("--config", [&] { return load_train_config(config_path, cfg); });
  if (base_seed) {
    const std::size_t count = cfg.seeds.size();
    cfg.seeds.clear();
    for (std::size_t k = 0; k < count; ++k) cfg.seeds.push_back(*base_seed + k);
  }
  if (!a.seeds.empty()) cfg.seeds = parse_seed_list("--seeds", a.seeds);
  if (a.epochs) cfg.epochs = *a.epochs;
  if (a.samples) cfg.dataset_size = *a.samples;
  if (a.lr) cfg.lr = *a.lr;
  if (a.fd_step) cfg.fd_step = *a.fd_step;
  if (a.b_target) cfg.b_target = *a.b_target;
  if (a.batch_size) cfg.batch_size = *a.batch_size;
  if (!a.b_models.empty()) cfg.b_models = for_flag("--b-models", [&] { return parse_number_list(a.b_models); });
  if (a.share) cfg.share_generator_basis = true;
  if (!a.entangler.empty()) cfg.entangler = for_flag("--entangler", [&] { return parse_entangler(a.entangler); });
  for_flag("train", [&] {
    cfg.validate();
    return 0;
  });

  const TrainReport r = spectrum_matching_experiment(cfg, threads);
  Emitted em;
  em.config = to_json(cfg);
  em.seeds = cfg.seeds;
  em.result = to_json(r);
  em.tables = to_csv(r);
  return em;
}

struct VarianceArgs {
  std::string weights;
  std::optional<std::size_t> samples;
};

Emitted run_variance(const VarianceArgs& a, const std::string& config_path, std::optional<std::uint64_t> seed_opt,
                     std::size_t threads) {
  std::string weights = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  std::size_t samples = 50;
  std::uint64_t seed = 0;
  if (!config_path.empty()) {
    for_flag("--config", [&] {
      for (const auto& [key, value] : parse_config_entries(read_text_file(config_path))) {
        if (key == "weights") {
          weights = value;
        } else if (key == "samples") {
          samples = static_cast<std::size_t>(parse_double(value));
        } else if (key == "seed") {
          seed = static_cast<std::uint64_t>(parse_double(value));
        } else {
          throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
        }
      }
      return 0;
    });
  }
  if (!a.weights.empty()) weights = a.weights;
  if (a.samples) samples = *a.samples;
  if (seed_opt) seed = *seed_opt;
  const std::vector<double> w = for_flag("--weights", [&] { return parse_number_list(weights); });
  if (samples < 2) throw UsageError("--samples: need at least 2 samples");

  const VarianceSweepReport r = variance_sweep(w, samples, seed, threads);
  Emitted em;
  em.config = Json{{"weights", w}, {"samples", samples}};
  em.seeds = {seed};
  em.result = to_json(r);
  em.tables = to_csv(r);
  return em;
}

Emitted run_selftest(bool full, std::size_t threads) {
  AcceptanceOptions opts;
  opts.paper_scale_training = full;
  opts.threads = threads;
  const std::vector<CriterionOutcome> outcomes = run_acceptance(opts);
  Emitted em;
  em.config = Json{{"full", full}};
  em.result = acceptance_payload(outcomes);
  em.timings = Json::array();
  CsvTable t{{"criterion", "name", "values_ok"}, {}};
  for (const auto& c : outcomes) {
    em.timings.push_back(Json{{"id", c.id},
                              {"seconds", c.seconds},
                              {"budget_seconds", c.budget_seconds},
                              {"within_budget", c.within_budget()},
                              {"stages", c.timings}});
    t.rows.push_back({std::to_string(c.id), csv_text(c.name), c.values_ok ? "true" : "false"});
    if (!c.passed()) em.exit_code = 1;
  }
  em.tables = {t};
  return em;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty number list");
  return out;
}

ComplexMatrix parse_pauli_sum(std::string_view expr) {
  const std::string s = [&] {
    std::string t;
    for (char c : expr)
      if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    return t;
  }();
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty Pauli expression");

  std::optional<ComplexMatrix> total;
  std::size_t pos = 0;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    } else if (total) {
      throw Error(ErrorCode::InvalidArgument, "expected '+' or '-' at position " + std::to_string(pos));
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') {
      // exponent sign inside a coefficient such as 1e-3*X
      if ((s[end] == 'e' || s[end] == 'E') && end + 1 < s.size() && (s[end + 1] == '-' || s[end + 1] == '+') &&
          end > pos && std::isdigit(static_cast<unsigned char>(s[end - 1]))) {
        end += 2;
        continue;
      }
      ++end;
    }
    const std::string term = s.substr(pos, end - pos);
    const auto star = term.find('*');
    double coeff = sign;
    std::string letters = term;
    if (star != std::string::npos) {
      coeff *= parse_double(term.substr(0, star));
      letters = term.substr(star + 1);
    }
    if (letters.empty()) throw Error(ErrorCode::InvalidArgument, "missing Pauli string in '" + term + "'");
    ComplexMatrix m = pauli_string(letters);
    m *= cplx(coeff, 0.0);
    if (!total) {
      total = std::move(m);
    } else {
      if (total->dim() != m.dim()) {
        throw Error(ErrorCode::DimMismatch, "Pauli strings of different length in '" + std::string(expr) + "'");
      }
      *total += m;
    }
    pos = end;
  }
  return *total;
}

int dispatch(const std::vector<std::string>& argv_in, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"qspec: Fourier spectra, approximation bounds and Lie-algebraic diagnostics of parameterized circuits",
               "qspec"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string config_path;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", out_path, "Write the report to PATH instead of stdout");
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--config", config_path, "Config file (key = value lines or a JSON object)")
      ->check(CLI::ExistingFile);

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "Gap sets, normalization, frequency envelope, K and K_cov");
  spectrum->add_option("--eigs", sp.eigs, "Comma-separated eigenvalues of one generator (repeatable)");
  spectrum->add_option("--pauli", sp.pauli, "Pauli-sum generator such as 0.5*XZ+ZI (repeatable)");
  spectrum->add_option("--haar-b", sp.haar_b, "Haar-rotated grid generator with eigenvalues in [-b, b] (repeatable)");
  spectrum->add_option("--dim", sp.dim, "Matrix size for --haar-b")->check(CLI::Range(1, 64));
  spectrum->add_option("--tol", sp.tol, "Gap clustering tolerance")->check(CLI::PositiveNumber);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Minimax lower bound, Jackson upper bound, high-dimensional limit");
  bounds->require_subcommand(1);
  auto* lower = bounds->add_subcommand("lower", "Annulus-witness error curve and fitted slope");
  auto* upper = bounds->add_subcommand("upper", "Truncation errors of random unit-ball functions against the bound");
  auto* limit = bounds->add_subcommand("limit", "d^{-(r - d/2)} for (r, d) pairs");
  for (auto* sub : {lower, upper}) {
    sub->add_option("--d", ba.d, "Torus dimension")->check(CLI::Range(1, 4));
    sub->add_option("--r", ba.r, "Sobolev smoothness (r > d/2)");
    sub->add_option("--K", ba.K, "Comma-separated band radii");
  }
  upper->add_option("--series", ba.series, "Number of random functions")->check(CLI::Range(1, 10000));
  upper->add_option("--box", ba.box, "Frequency box half-width")->check(CLI::Range(1, 64));
  upper->add_option("--modes", ba.modes, "Nonzero modes per function")->check(CLI::Range(1, 100000));
  limit->add_option("--pairs", ba.pairs, "Comma-separated r:d pairs");

  std::vector<std::string> dla_paulis;
  std::string dla_preset;
  auto* dla = app.add_subcommand("dla", "Lie closure, center, derived algebra and eta");
  dla->add_option("--pauli", dla_paulis, "Pauli-sum generator (repeatable)");
  dla->add_option("--preset", dla_preset, "su2, u2 or abelian2");

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "Spectrum-matching experiment");
  train->add_flag("--fast", ta.fast, "200 samples, 100 epochs, 6 seeds");
  train->add_option("--seeds", ta.seeds, "Comma-separated seeds");
  train->add_option("--epochs", ta.epochs, "Adam epochs")->check(CLI::PositiveNumber);
  train->add_option("--samples", ta.samples, "Dataset size")->check(CLI::PositiveNumber);
  train->add_option("--lr", ta.lr, "Adam learning rate")->check(CLI::PositiveNumber);
  train->add_option("--fd-step", ta.fd_step, "Central-difference step")->check(CLI::PositiveNumber);
  train->add_option("--b-target", ta.b_target, "Target spectrum half-width");
  train->add_option("--batch-size", ta.batch_size, "Minibatch size (0 = full batch)");
  train->add_option("--b-models", ta.b_models, "Comma-separated model spectrum half-widths");
  train->add_flag("--share-generator-basis", ta.share, "Models reuse the target's Haar eigenbases");
  train->add_option("--entangler", ta.entangler, "ring or chain");

  VarianceArgs va;
  auto* variance = app.add_subcommand("variance", "Gradient variance against center weight");
  variance->add_option("--weights", va.weights, "Comma-separated center weights");
  variance->add_option("--samples", va.samples, "Samples per weight")->check(CLI::PositiveNumber);

  bool full = false;
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_flag("--full", full, "Include the paper-scale training run");

  std::vector<std::string> args = join_negative_values(
      std::vector<std::string>(argv_in.begin() + (argv_in.empty() ? 0 : 1), argv_in.end()));
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qspec: " << e.what() << "\n";
    return 2;
  }

  const std::size_t threads = threads_from_env();
  Emitted em;
  std::string name;
  try {
    if (spectrum->parsed()) {
      name = "spectrum";
      em = run_spectrum(sp, seed.value_or(0));
    } else if (bounds->parsed()) {
      if (lower->parsed()) {
        name = "bounds lower";
        em = run_bounds_lower(ba);
      } else if (upper->parsed()) {
        name = "bounds upper";
        em = run_bounds_upper(ba, seed.value_or(7000));
      } else {
        name = "bounds limit";
        em = run_bounds_limit(ba);
      }
    } else if (dla->parsed()) {
      name = "dla";
      em = run_dla(dla_paulis, dla_preset);
    } else if (train->parsed()) {
      name = "train";
      em = run_train(ta, config_path, seed, threads);
    } else if (variance->parsed()) {
      name = "variance";
      em = run_variance(va, config_path, seed, threads);
    } else if (selftest->parsed()) {
      name = "selftest";
      em = run_selftest(full, threads);
    }
  } catch (const UsageError& e) {
    err << "qspec: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "qspec: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::DomainError ? 2 : 1;
  } catch (const std::exception& e) {
    err << "qspec: " << e.what() << "\n";
    return 1;
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json manifest{{"tool", "qspec"},
                {"version", kToolVersion},
                {"subcommand", name},
                {"config", em.config},
                {"seeds", em.seeds},
                {"threads", threads},
                {"duration_seconds", seconds}};
  if (!em.timings.is_null()) manifest["timings"] = em.timings;

  std::string text;
  if (format == "json") {
    text = Json{{"manifest", manifest}, {"result", em.result}}.dump(2) + "\n";
  } else {
    text = "# manifest: " + manifest.dump() + "\n" + render_csv(em.tables);
  }
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(out_path);
    if (!file) {
      err << "qspec: --out: cannot open '" << out_path << "'\n";
      return 2;
    }
    file << text;
  }
  return em.exit_code;
}

}  // namespace qspec
