#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qspec/bounds.hpp"
#include "qspec/dla.hpp"
#include "qspec/experiments.hpp"
#include "qspec/spectrum.hpp"

namespace qspec {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

Json to_json(const GapSet& g);
Json to_json(const NormalizedGapSet& g);
Json to_json(const FrequencyEnvelope& env);
Json to_json(const CommutingReport& r);
Json to_json(const LowerCurve& c);
Json to_json(const DlaReport& r);
Json to_json(const TrainConfig& cfg);
Json to_json(const WilcoxonResult& w);
Json to_json(const TrainReport& r);
Json to_json(const VarianceSweepReport& r);

/// A flat table; CSV output is a sequence of these separated by blank lines.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Decimal with 17 significant digits.
std::string format_number(double v);
std::string render_csv(const std::vector<CsvTable>& tables);

std::vector<CsvTable> to_csv(const TrainReport& r);
std::vector<CsvTable> to_csv(const VarianceSweepReport& r);
std::vector<CsvTable> to_csv(const LowerCurve& c);

}  // namespace qspec
