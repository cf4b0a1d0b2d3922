#include "qspec/report.hpp"

#include <cstdio>
#include <sstream>

namespace qspec {

Json to_json(const GapSet& g) { return Json{{"gaps", g.gaps}, {"omega_max", g.omega_max}}; }

Json to_json(const NormalizedGapSet& g) {
  return Json{{"gamma", g.gamma}, {"int_gaps", g.int_gaps}, {"width", g.width()}};
}

Json to_json(const FrequencyEnvelope& env) {
  Json per = Json::array();
  for (const auto& g : env.per_param) per.push_back(to_json(g));
  return Json{{"d", env.d}, {"K_l2", env.K_l2}, {"K_l1", env.K_l1}, {"K_cov", env.K_cov}, {"per_param", per}};
}

Json to_json(const CommutingReport& r) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back(Json{{"i", p.i}, {"j", p.j}, {"commute", p.commute}, {"commutator_norm", p.commutator_norm}});
  }
  return Json{{"pairs", pairs}, {"commuting_count", r.commuting_count}};
}

Json to_json(const LowerCurve& c) {
  return Json{{"K", c.K},
              {"errors", c.errors},
              {"annulus_sizes", c.annulus_sizes},
              {"fitted_slope", c.fitted_slope},
              {"fitted_intercept", c.fitted_intercept},
              {"paper_exponent", c.paper_exponent}};
}

Json to_json(const DlaReport& r) {
  return Json{{"dim", r.dim},
              {"center_dim", r.center_dim},
              {"derived_dim", r.derived_dim},
              {"eta_per_generator", r.eta_per_generator}};
}

Json to_json(const TrainConfig& cfg) {
  return Json{{"n", cfg.n},
              {"L", cfg.L},
              {"dataset_size", cfg.dataset_size},
              {"lr", cfg.lr},
              {"epochs", cfg.epochs},
              {"seeds", cfg.seeds},
              {"b_target", cfg.b_target},
              {"b_models", cfg.b_models},
              {"fd_step", cfg.fd_step},
              {"batch_size", cfg.batch_size},
              {"share_generator_basis", cfg.share_generator_basis},
              {"entangler", to_string(cfg.entangler)}};
}

Json to_json(const WilcoxonResult& w) {
  return Json{{"p_two_sided", w.p_two_sided},
              {"w_plus", w.w_plus},
              {"w_minus", w.w_minus},
              {"n_used", w.n_used},
              {"zeros_dropped", w.zeros_dropped}};
}

Json to_json(const TrainReport& r) {
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    runs.push_back(Json{{"seed", run.seed},
                        {"b_model", run.b_model},
                        {"rmse", run.result.rmse},
                        {"initial_loss", run.result.initial_loss},
                        {"final_loss", run.result.final_loss},
                        {"theta_init", run.result.theta_init},
                        {"theta_final", run.result.theta_final}});
  }
  Json summary = Json::array();
  for (std::size_t k = 0; k < r.config.b_models.size(); ++k) {
    summary.push_back(
        Json{{"b_model", r.config.b_models[k]}, {"mean_rmse", r.mean_rmse[k]}, {"std_rmse", r.std_rmse[k]}});
  }
  return Json{{"config", to_json(r.config)},
              {"summary", summary},
              {"wilcoxon_b1_vs_b10", r.wilcoxon ? to_json(*r.wilcoxon) : Json(nullptr)},
              {"runs", runs}};
}

Json to_json(const VarianceSweepReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) {
    pts.push_back(Json{{"weight", p.weight},
                       {"variance", p.variance},
                       {"eta", p.eta},
                       {"analytic_variance", p.analytic_variance}});
  }
  return Json{{"samples", r.samples}, {"seed", r.seed}, {"points", pts}};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_csv(const std::vector<CsvTable>& tables) {
  std::ostringstream out;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    if (t > 0) out << '\n';
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
      out << '\n';
    };
    line(tables[t].header);
    for (const auto& row : tables[t].rows) line(row);
  }
  return out.str();
}

std::vector<CsvTable> to_csv(const TrainReport& r) {
  CsvTable runs{{"seed", "b_model", "rmse", "initial_loss", "final_loss"}, {}};
  for (const auto& run : r.runs) {
    runs.rows.push_back({std::to_string(run.seed), format_number(run.b_model), format_number(run.result.rmse),
                         format_number(run.result.initial_loss), format_number(run.result.final_loss)});
  }
  CsvTable summary{{"b_model", "mean_rmse", "std_rmse"}, {}};
  for (std::size_t k = 0; k < r.config.b_models.size(); ++k) {
    summary.rows.push_back(
        {format_number(r.config.b_models[k]), format_number(r.mean_rmse[k]), format_number(r.std_rmse[k])});
  }
  CsvTable scalars{{"key", "value"}, {}};
  if (r.wilcoxon) {
    scalars.rows.push_back({"wilcoxon_p_two_sided", format_number(r.wilcoxon->p_two_sided)});
    scalars.rows.push_back({"wilcoxon_w_plus", format_number(r.wilcoxon->w_plus)});
    scalars.rows.push_back({"wilcoxon_n_used", std::to_string(r.wilcoxon->n_used)});
  }
  return {runs, summary, scalars};
}

std::vector<CsvTable> to_csv(const VarianceSweepReport& r) {
  CsvTable curve{{"weight", "variance", "eta", "analytic_variance"}, {}};
  for (const auto& p : r.points) {
    curve.rows.push_back({format_number(p.weight), format_number(p.variance), format_number(p.eta),
                          format_number(p.analytic_variance)});
  }
  CsvTable scalars{{"key", "value"}, {{"samples", std::to_string(r.samples)}, {"seed", std::to_string(r.seed)}}};
  return {curve, scalars};
}

std::vector<CsvTable> to_csv(const LowerCurve& c) {
  CsvTable curve{{"K", "error", "annulus_size"}, {}};
  for (std::size_t k = 0; k < c.K.size(); ++k) {
    curve.rows.push_back({format_number(c.K[k]), format_number(c.errors[k]), std::to_string(c.annulus_sizes[k])});
  }
  CsvTable scalars{{"key", "value"},
                   {{"fitted_slope", format_number(c.fitted_slope)},
                    {"fitted_intercept", format_number(c.fitted_intercept)},
                    {"paper_exponent", format_number(c.paper_exponent)}}};
  return {curve, scalars};
}

}  // namespace qspec
