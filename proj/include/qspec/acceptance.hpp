#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qspec/report.hpp"

namespace qspec {

struct AcceptanceOptions {
  /// Criterion 7 at paper scale (n=3, L=5, 1000 samples, 500 epochs,
  /// 10 seeds) in addition to the fast-profile ordering check.
  bool paper_scale_training = false;
  std::size_t threads = 1;
};

struct CriterionOutcome {
  int id = 0;
  std::string name;
  bool values_ok = false;   // the numeric checks
  double seconds = 0.0;     // wall clock; not part of the result payload
  double budget_seconds = 0.0;
  bool sub_budgets_ok = true;  // per-stage limits inside one criterion
  Json details;                // deterministic values backing the verdict
  Json timings = Json::object();

  bool within_budget() const noexcept { return seconds <= budget_seconds && sub_budgets_ok; }
  bool passed() const noexcept { return values_ok && within_budget(); }
};

CriterionOutcome criterion_trig_poly_equivalence();      // 1
CriterionOutcome criterion_frequency_support();          // 2
CriterionOutcome criterion_witness_rate();               // 3
CriterionOutcome criterion_jackson_upper();              // 4
CriterionOutcome criterion_coverage_radius();            // 5
CriterionOutcome criterion_variance_sweep(std::size_t threads);           // 6
CriterionOutcome criterion_spectrum_matching(const AcceptanceOptions&);   // 7
CriterionOutcome criterion_wilcoxon_exact();             // 8
CriterionOutcome criterion_dla_suite();                  // 9

/// Criteria 1-9 in order.
std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& opts);

/// {criteria: [...]} without timings, so repeated runs compare byte-for-byte.
Json acceptance_payload(const std::vector<CriterionOutcome>& outcomes);

}  // namespace qspec
