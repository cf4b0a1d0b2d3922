#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qspec/linalg.hpp"

namespace qspec {

inline constexpr double kGapTolerance = 1e-9;
inline constexpr double kCommensurateTolerance = 1e-9;
/// Normalizations producing integer gaps beyond this are rejected.
inline constexpr long long kMaxIntegerGap = 1'000'000;

/// All eigenvalue differences of one generator. Sorted, symmetric about 0.
struct GapSet {
  std::vector<double> gaps;
  double omega_max = 0.0;
};

/// Gaps expressed as integer multiples of a common scale gamma.
struct NormalizedGapSet {
  double gamma = 1.0;
  std::vector<long long> int_gaps;

  long long width() const noexcept { return int_gaps.empty() ? 0 : int_gaps.back(); }
  bool contains(long long k) const noexcept;
};

struct FrequencyEnvelope {
  std::size_t d = 0;
  std::vector<NormalizedGapSet> per_param;
  double K_l2 = 0.0;
  double K_l1 = 0.0;
  double K_cov = 0.0;
};

struct CommutingPair {
  std::size_t i = 0;
  std::size_t j = 0;
  bool commute = false;
  double commutator_norm = 0.0;
};

struct CommutingReport {
  std::vector<CommutingPair> pairs;
  std::size_t commuting_count = 0;
};

GapSet gap_set(std::span<const double> values, double tol = kGapTolerance);

/// Approximate-GCD normalization. Throws NonCommensurate when no common scale
/// exists at tolerance `tol`.
NormalizedGapSet normalize_gaps(const GapSet& g, double tol = kCommensurateTolerance);

FrequencyEnvelope envelope(std::vector<NormalizedGapSet> per_param);

/// Smallest Euclidean norm of an integer point outside the product of the
/// per-parameter integer gap sets. Since every factor contains 0, the minimum
/// is attained on a coordinate axis.
double coverage_radius(std::span<const NormalizedGapSet> per_param);

/// Same quantity by scanning the box prod_j [min-1, max+1]. Limited to d <= 6.
double coverage_radius_scan(std::span<const NormalizedGapSet> per_param);

/// Product-envelope membership of an integer frequency vector.
bool in_envelope(std::span<const NormalizedGapSet> per_param, std::span<const long long> s);

CommutingReport commuting_report(std::span<const ComplexMatrix> generators, double tol = 1e-10);

}  // namespace qspec
