#include "qspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "qspec/error.hpp"

namespace qspec {

bool NormalizedGapSet::contains(long long k) const noexcept {
  return std::binary_search(int_gaps.begin(), int_gaps.end(), k);
}

GapSet gap_set(std::span<const double> values, double tol) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "gap_set needs at least one eigenvalue");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite eigenvalue");
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> diffs;
  for (std::size_t p = 0; p < sorted.size(); ++p)
    for (std::size_t q = p + 1; q < sorted.size(); ++q) diffs.push_back(sorted[q] - sorted[p]);
  std::sort(diffs.begin(), diffs.end());

  // Cluster nonnegative differences; anything within tol of 0 is 0.
  std::vector<double> positive;
  std::size_t k = 0;
  while (k < diffs.size() && diffs[k] <= tol) ++k;
  while (k < diffs.size()) {
    const double start = diffs[k];
    double sum = 0.0;
    std::size_t count = 0;
    while (k < diffs.size() && diffs[k] - start <= tol) {
      sum += diffs[k];
      ++count;
      ++k;
    }
    positive.push_back(sum / static_cast<double>(count));
  }

  GapSet out;
  out.gaps.reserve(2 * positive.size() + 1);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) out.gaps.push_back(-*it);
  out.gaps.push_back(0.0);
  out.gaps.insert(out.gaps.end(), positive.begin(), positive.end());
  out.omega_max = positive.empty() ? 0.0 : positive.back();
  return out;
}

namespace {

// Euclid on reals. Returns a value below `floor` when the pair has no common
// scale above it.
double real_gcd(double a, double b, double accept, double floor) {
  if (a < b) std::swap(a, b);
  while (b >= floor) {
    const double r = std::abs(a - b * std::round(a / b));
    if (r <= accept) return b;
    a = b;
    b = r;
  }
  return b;
}

}  // namespace

NormalizedGapSet normalize_gaps(const GapSet& g, double tol) {
  std::vector<double> positive;
  for (double x : g.gaps)
    if (x > 0.0) positive.push_back(x);
  if (positive.empty()) return NormalizedGapSet{1.0, {0}};

  const double scale = std::max(1.0, g.omega_max);
  const double accept = tol * scale;

  double gamma = positive.front();
  for (std::size_t k = 1; k < positive.size(); ++k) {
    gamma = real_gcd(positive[k], gamma, accept, tol);
    if (gamma < tol) {
      throw Error(ErrorCode::NonCommensurate,
                  "no common gap scale >= " + std::to_string(tol) + " (gap " + std::to_string(positive[k]) + ")");
    }
  }

  // Least-squares refinement of gamma over all positive gaps.
  double num = 0.0;
  double den = 0.0;
  for (double p : positive) {
    const double n = std::round(p / gamma);
    if (n > static_cast<double>(kMaxIntegerGap)) {
      throw Error(ErrorCode::NonCommensurate, "implausible normalization: integer gap exceeds 1e6");
    }
    num += p * n;
    den += n * n;
  }
  gamma = num / den;

  NormalizedGapSet out;
  out.gamma = gamma;
  std::vector<long long> pos_ints;
  for (double p : positive) {
    const double n = std::round(p / gamma);
    if (std::abs(p - gamma * n) > accept || n > static_cast<double>(kMaxIntegerGap)) {
      throw Error(ErrorCode::NonCommensurate, "gap " + std::to_string(p) + " is not a multiple of " +
                                                  std::to_string(gamma));
    }
    pos_ints.push_back(static_cast<long long>(n));
  }
  std::sort(pos_ints.begin(), pos_ints.end());
  pos_ints.erase(std::unique(pos_ints.begin(), pos_ints.end()), pos_ints.end());
  for (auto it = pos_ints.rbegin(); it != pos_ints.rend(); ++it) out.int_gaps.push_back(-*it);
  out.int_gaps.push_back(0);
  out.int_gaps.insert(out.int_gaps.end(), pos_ints.begin(), pos_ints.end());
  return out;
}

double coverage_radius(std::span<const NormalizedGapSet> per_param) {
  if (per_param.empty()) throw Error(ErrorCode::InvalidArgument, "coverage_radius needs d >= 1");
  long long best = std::numeric_limits<long long>::max();
  for (const auto& g : per_param) {
    long long v = 1;
    while (g.contains(v) && g.contains(-v)) ++v;
    best = std::min(best, v);
  }
  return static_cast<double>(best);
}

double coverage_radius_scan(std::span<const NormalizedGapSet> per_param) {
  const std::size_t d = per_param.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "coverage_radius_scan needs d >= 1");
  if (d > 6) throw Error(ErrorCode::DomainError, "lattice scan limited to d <= 6");
  std::vector<long long> lo(d), hi(d), s(d);
  for (std::size_t j = 0; j < d; ++j) {
    lo[j] = per_param[j].int_gaps.front() - 1;
    hi[j] = per_param[j].int_gaps.back() + 1;
    s[j] = lo[j];
  }
  long long best = std::numeric_limits<long long>::max();
  while (true) {
    if (!in_envelope(per_param, s)) {
      long long n2 = 0;
      for (long long c : s) n2 += c * c;
      best = std::min(best, n2);
    }
    std::size_t j = 0;
    while (j < d && s[j] == hi[j]) {
      s[j] = lo[j];
      ++j;
    }
    if (j == d) break;
    ++s[j];
  }
  return std::sqrt(static_cast<double>(best));
}

bool in_envelope(std::span<const NormalizedGapSet> per_param, std::span<const long long> s) {
  if (s.size() != per_param.size()) throw Error(ErrorCode::DimMismatch, "frequency vector length");
  for (std::size_t j = 0; j < s.size(); ++j)
    if (!per_param[j].contains(s[j])) return false;
  return true;
}

FrequencyEnvelope envelope(std::vector<NormalizedGapSet> per_param) {
  if (per_param.empty()) throw Error(ErrorCode::InvalidArgument, "envelope needs d >= 1");
  FrequencyEnvelope env;
  env.d = per_param.size();
  double sq = 0.0;
  double l1 = 0.0;
  for (const auto& g : per_param) {
    const auto w = static_cast<double>(g.width());
    sq += w * w;
    l1 += w;
  }
  env.K_l2 = std::sqrt(sq);
  env.K_l1 = l1;
  env.K_cov = coverage_radius(per_param);
  env.per_param = std::move(per_param);
  return env;
}

CommutingReport commuting_report(std::span<const ComplexMatrix> generators, double tol) {
  CommutingReport report;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].dim() != generators.front().dim()) {
      throw Error(ErrorCode::DimMismatch, "generator " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      const double nrm = commutator(generators[i], generators[j]).frobenius();
      const double scale = generators[i].frobenius() * generators[j].frobenius();
      const bool commute = nrm <= tol * scale;
      report.pairs.push_back({i, j, commute, nrm});
      if (commute) ++report.commuting_count;
    }
  return report;
}

}  // namespace qspec
