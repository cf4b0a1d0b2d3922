#include "qspec/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>

#include "qspec/rng.hpp"

namespace qspec {

namespace {

constexpr double kPi = std::numbers::pi;

CriterionOutcome timed(int id, std::string name, double budget,
                       const std::function<bool(Json&, CriterionOutcome&)>& body) {
  CriterionOutcome out;
  out.id = id;
  out.name = std::move(name);
  out.budget_seconds = budget;
  const auto t0 = std::chrono::steady_clock::now();
  out.details = Json::object();
  out.values_ok = body(out.details, out);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

struct OneParamInstance {
  int n;
  ComplexMatrix h;
  StateVector phi;
  ComplexMatrix observable;
};

// Random Hermitian generators (Haar eigenbasis, Gaussian spectrum), random
// product states and random Hermitian observables for n in {1, 2}.
std::vector<OneParamInstance> one_param_instances() {
  std::vector<OneParamInstance> out;
  for (std::uint64_t k = 0; k < 20; ++k) {
    Rng rng = Rng(20240917).split(k);
    const int n = 1 + static_cast<int>(k % 2);
    const std::size_t dim = std::size_t{1} << n;

    const ComplexMatrix u = haar_unitary(dim, rng.next_u64());
    std::vector<double> lambda(dim);
    for (auto& l : lambda) l = 2.0 * rng.normal();
    const ComplexMatrix h0 = u * ComplexMatrix::diagonal(lambda) * u.adjoint();
    const ComplexMatrix h = (h0 + h0.adjoint()) * cplx(0.5, 0.0);

    StateVector phi{{1.0}};
    for (int q = 0; q < n; ++q) {
      const double a = rng.uniform(0.0, kPi);
      const double b = rng.uniform(-kPi, kPi);
      const std::vector<cplx> qubit{std::cos(0.5 * a), std::polar(std::sin(0.5 * a), b)};
      std::vector<cplx> next;
      for (const auto& x : phi.amplitudes)
        for (const auto& y : qubit) next.push_back(x * y);
      phi.amplitudes = std::move(next);
    }

    ComplexMatrix g(dim);
    for (auto& z : g.data()) z = cplx(rng.normal(), rng.normal());
    const ComplexMatrix o = (g + g.adjoint()) * cplx(0.5, 0.0);
    out.push_back({n, h, phi, o});
  }
  return out;
}

double simulate_expectation(const ComplexMatrix& h, const StateVector& phi, const ComplexMatrix& o, double theta) {
  const auto psi = unitary_from_generator(h, theta).apply(phi.amplitudes);
  const auto o_psi = o.apply(psi);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) acc += std::conj(psi[i]) * o_psi[i];
  return acc.real();
}

double spearman(std::span<const double> x, std::span<const double> y) {
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t k = 0;
    while (k < idx.size()) {
      std::size_t e = k;
      while (e + 1 < idx.size() && v[idx[e + 1]] == v[idx[k]]) ++e;
      for (std::size_t t = k; t <= e; ++t) r[idx[t]] = 0.5 * static_cast<double>(k + e) + 1.0;
      k = e + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const auto n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

CriterionOutcome criterion_trig_poly_equivalence() {
  return timed(1, "trig-poly coefficient reconstruction matches simulation", 10.0, [](Json& d, CriterionOutcome&) {
    double worst = 0.0;
    for (const auto& inst : one_param_instances()) {
      const auto coeffs = trig_poly_coeffs(inst.h, inst.phi, inst.observable);
      for (int k = 0; k < 100; ++k) {
        const double theta = -5.0 + 10.0 * k / 99.0;
        worst = std::max(worst, std::abs(simulate_expectation(inst.h, inst.phi, inst.observable, theta) -
                                         evaluate_trig_poly(coeffs, theta)));
      }
    }
    d["instances"] = 20;
    d["grid_points"] = 100;
    d["max_abs_deviation"] = worst;
    d["tolerance"] = 1e-9;
    return worst <= 1e-9;
  });
}

CriterionOutcome criterion_frequency_support() {
  return timed(2, "frequency support lies in the generator gap set", 10.0, [](Json& d, CriterionOutcome&) {
    std::size_t checked = 0;
    std::size_t outside = 0;
    for (const auto& inst : one_param_instances()) {
      const GapSet gaps = gap_set(eig_hermitian(inst.h).values);
      for (const auto& c : trig_poly_coeffs(inst.h, inst.phi, inst.observable)) {
        if (std::abs(c.a) <= 1e-10) continue;
        ++checked;
        const bool hit = std::any_of(gaps.gaps.begin(), gaps.gaps.end(),
                                     [&](double g) { return std::abs(g - c.omega) <= 1e-9; });
        if (!hit) ++outside;
      }
    }
    d["frequencies_checked"] = checked;
    d["outside_gap_set"] = outside;
    return checked > 0 && outside == 0;
  });
}

CriterionOutcome criterion_witness_rate() {
  return timed(3, "annulus witness error decays at slope -r", 30.0, [](Json& d, CriterionOutcome&) {
    const std::vector<double> k1{4, 8, 16, 32, 64};
    const std::vector<double> k2{4, 8, 16, 32};
    const LowerCurve c1 = minimax_lower_curve(SobolevParams(1, 2.0), k1);
    const LowerCurve c2 = minimax_lower_curve(SobolevParams(2, 2.0), k2);
    d["d1_r2"] = to_json(c1);
    d["d2_r2"] = to_json(c2);
    d["d1_r2"]["tolerance"] = 0.1;
    d["d2_r2"]["tolerance"] = 0.2;
    return std::abs(c1.fitted_slope + 2.0) <= 0.1 && std::abs(c2.fitted_slope + 2.0) <= 0.2;
  });
}

CriterionOutcome criterion_jackson_upper() {
  return timed(4, "Jackson upper bound holds on random unit-ball series", 10.0, [](Json& d, CriterionOutcome&) {
    const SobolevParams p(2, 2.0);
    std::size_t violations = 0;
    std::size_t non_monotone = 0;
    double worst_ratio = 0.0;
    double c_max = 0.0;
    const std::vector<double> ks{1, 2, 3, 4, 5, 6, 7, 8};
    for (std::uint64_t s = 0; s < 20; ++s) {
      const FourierSeries h = random_unit_ball_series(p, 10, 40, 7000 + s);
      double prev = INFINITY;
      for (double K : ks) {
        const double err = truncation_error(h, K);
        const JacksonBound b = jackson_upper(h, p, K);
        if (err > b.rigorous) ++violations;
        if (err > prev) ++non_monotone;
        prev = err;
        worst_ratio = std::max(worst_ratio, err / b.rigorous);
      }
      c_max = std::max(c_max, empirical_jackson_constant(h, p, ks));
    }
    d["series"] = 20;
    d["violations"] = violations;
    d["non_monotone_steps"] = non_monotone;
    d["max_error_over_rigorous"] = worst_ratio;
    d["empirical_constant_paper_form"] = c_max;
    return violations == 0 && non_monotone == 0;
  });
}

CriterionOutcome criterion_coverage_radius() {
  return timed(5, "coverage radius formula and lattice scan", 5.0, [](Json& d, CriterionOutcome&) {
    bool ok = true;
    const NormalizedGapSet unit{1.0, {-1, 0, 1}};
    const NormalizedGapSet trivial{1.0, {0}};
    Json unit_values = Json::array();
    for (std::size_t dim = 1; dim <= 3; ++dim) {
      const std::vector<NormalizedGapSet> sets(dim, unit);
      const double k = coverage_radius(sets);
      unit_values.push_back(k);
      ok = ok && k == 2.0 && coverage_radius_scan(sets) == 2.0;
    }
    d["unit_gaps_K_cov_d1_d2_d3"] = unit_values;

    for (std::size_t dim = 1; dim <= 3; ++dim)
      for (std::size_t pos = 0; pos < dim; ++pos) {
        std::vector<NormalizedGapSet> sets(dim, NormalizedGapSet{1.0, {-2, -1, 0, 1, 2}});
        sets[pos] = trivial;
        ok = ok && coverage_radius(sets) == 1.0 && coverage_radius_scan(sets) == 1.0;
      }

    // Random symmetric integer gap sets in [-4, 4].
    std::size_t disagreements = 0;
    Rng rng(515);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t dim = 1 + rng.next_u64() % 3;
      std::vector<NormalizedGapSet> sets(dim);
      for (auto& g : sets) {
        std::vector<long long> pos;
        for (long long v = 1; v <= 4; ++v)
          if (rng.uniform() < 0.6) pos.push_back(v);
        for (auto it = pos.rbegin(); it != pos.rend(); ++it) g.int_gaps.push_back(-*it);
        g.int_gaps.push_back(0);
        g.int_gaps.insert(g.int_gaps.end(), pos.begin(), pos.end());
      }
      if (coverage_radius(sets) != coverage_radius_scan(sets)) ++disagreements;
    }
    d["random_configurations"] = 200;
    d["formula_scan_disagreements"] = disagreements;
    return ok && disagreements == 0;
  });
}

CriterionOutcome criterion_variance_sweep(std::size_t threads) {
  return timed(6, "gradient variance versus center weight", 30.0, [threads](Json& d, CriterionOutcome&) {
    const std::vector<double> grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    const VarianceSweepReport big = variance_sweep(grid, 100000, 42, threads);
    bool ok = big.points[0].variance == 0.0;
    double worst_rel = 0.0;
    for (std::size_t k = 1; k < big.points.size(); ++k) {
      const auto& p = big.points[k];
      worst_rel = std::max(worst_rel, std::abs(p.variance - p.analytic_variance) / p.analytic_variance);
    }
    ok = ok && worst_rel <= 0.02;

    const VarianceSweepReport small = variance_sweep(grid, 50, 42, threads);
    std::vector<double> vars;
    double eta_err = 0.0;
    bool eta_decreasing = true;
    for (std::size_t k = 0; k < small.points.size(); ++k) {
      const auto& p = small.points[k];
      vars.push_back(p.variance);
      eta_err = std::max(eta_err, std::abs(p.eta - 2.0 / std::sqrt(1.0 + p.weight * p.weight)));
      if (k > 0 && !(p.eta < small.points[k - 1].eta)) eta_decreasing = false;
    }
    const double rho = spearman(grid, vars);
    ok = ok && small.points[0].variance == 0.0 && rho >= 0.9 && eta_err <= 1e-12 && eta_decreasing;

    d["variance_at_zero"] = big.points[0].variance;
    d["mc_samples"] = 100000;
    d["max_relative_error"] = worst_rel;
    d["paper_samples"] = 50;
    d["paper_samples_variances"] = vars;
    d["spearman_weight_vs_variance"] = rho;
    d["eta_max_abs_error"] = eta_err;
    d["eta_strictly_decreasing"] = eta_decreasing;
    return ok;
  });
}

CriterionOutcome criterion_spectrum_matching(const AcceptanceOptions& opts) {
  const double budget = opts.paper_scale_training ? 45.0 * 60.0 + 5.0 * 60.0 : 5.0 * 60.0;
  return timed(7, "spectrum matching: b=10 beats b=1", budget, [&opts](Json& d, CriterionOutcome& out) {
    const auto run = [&](const TrainConfig& cfg) {
      const auto t0 = std::chrono::steady_clock::now();
      TrainReport r = spectrum_matching_experiment(cfg, opts.threads);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return std::pair{std::move(r), secs};
    };
    auto summarize = [](const TrainReport& r) {
      Json j{{"b_models", r.config.b_models}, {"mean_rmse", r.mean_rmse}, {"std_rmse", r.std_rmse}};
      j["wilcoxon_p_b1_vs_b10"] = r.wilcoxon ? Json(r.wilcoxon->p_two_sided) : Json(nullptr);
      j["rmse_b1"] = r.rmse_for(1.0);
      j["rmse_b10"] = r.rmse_for(10.0);
      return j;
    };
    auto mean_of = [](const TrainReport& r, double b) {
      const auto v = r.rmse_for(b);
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    };

    const auto [fast, fast_secs] = run(TrainConfig::fast());
    out.timings["fast_profile_seconds"] = fast_secs;
    out.sub_budgets_ok = fast_secs <= 5.0 * 60.0;
    bool ok = mean_of(fast, 10.0) < mean_of(fast, 1.0);
    d["fast_profile"] = summarize(fast);
    if (opts.paper_scale_training) {
      const auto [full, full_secs] = run(TrainConfig{});
      d["paper_scale"] = summarize(full);
      out.timings["paper_scale_seconds"] = full_secs;
      out.sub_budgets_ok = out.sub_budgets_ok && full_secs <= 45.0 * 60.0;
      ok = ok && mean_of(full, 10.0) < mean_of(full, 1.0) && full.wilcoxon &&
           full.wilcoxon->p_two_sided <= 0.05;
    }
    return ok;
  });
}

CriterionOutcome criterion_wilcoxon_exact() {
  return timed(8, "exact Wilcoxon p for 10 positive differences", 1.0, [](Json& d, CriterionOutcome&) {
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 10; ++i) pairs.emplace_back(1.0 + 0.1 * i, 0.5);
    const WilcoxonResult w = wilcoxon_exact(pairs);
    d["p_two_sided"] = w.p_two_sided;
    d["expected"] = 2.0 / 1024.0;
    const double rounded = std::round(w.p_two_sided * 1e4) / 1e4;
    d["rounded_4dp"] = rounded;
    return w.p_two_sided == 2.0 / 1024.0 && rounded == 0.002;
  });
}

CriterionOutcome criterion_dla_suite() {
  return timed(9, "dynamical Lie algebra dimensions and eta", 5.0, [](Json& d, CriterionOutcome&) {
    const auto dim_of = [](std::vector<ComplexMatrix> gens) { return lie_closure(gens).dim(); };
    const std::size_t z = dim_of({pauli('Z')});
    const std::size_t xy = dim_of({pauli('X'), pauli('Y')});
    const std::size_t abelian = dim_of({pauli_string("ZI"), pauli_string("IZ")});
    const LieBasis u2 = lie_closure(std::vector<ComplexMatrix>{pauli('I'), pauli('X'), pauli('Y'), pauli('Z')});
    const std::size_t center = center_basis(u2).size();
    const std::size_t derived = derived_algebra(u2).size();
    const double eta_id = eta(ComplexMatrix::identity(8));
    const double eta_traceless = eta(pauli_string("XZY"));
    d["dim_Z"] = z;
    d["dim_XY"] = xy;
    d["dim_ZI_IZ"] = abelian;
    d["u2_dim"] = u2.dim();
    d["u2_center_dim"] = center;
    d["u2_derived_dim"] = derived;
    d["eta_identity_8"] = eta_id;
    d["eta_traceless"] = eta_traceless;
    return z == 1 && xy == 3 && abelian == 2 && u2.dim() == 4 && center == 1 && derived == 3 &&
           center + derived == 4 && eta_id == std::sqrt(8.0) && eta_traceless == 0.0;
  });
}

std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionOutcome> out;
  out.push_back(criterion_trig_poly_equivalence());
  out.push_back(criterion_frequency_support());
  out.push_back(criterion_witness_rate());
  out.push_back(criterion_jackson_upper());
  out.push_back(criterion_coverage_radius());
  out.push_back(criterion_variance_sweep(opts.threads));
  out.push_back(criterion_spectrum_matching(opts));
  out.push_back(criterion_wilcoxon_exact());
  out.push_back(criterion_dla_suite());
  return out;
}

Json acceptance_payload(const std::vector<CriterionOutcome>& outcomes) {
  Json list = Json::array();
  for (const auto& c : outcomes) {
    list.push_back(Json{{"id", c.id}, {"name", c.name}, {"values_ok", c.values_ok}, {"details", c.details}});
  }
  return Json{{"criteria", list}};
}

}  // namespace qspec
