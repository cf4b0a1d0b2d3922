#include "qspec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "qspec/error.hpp"
#include "qspec/rng.hpp"

namespace qspec {

namespace {
constexpr double kPrune = 1e-300;
}

SobolevParams::SobolevParams(int d, double r) : d_(d), r_(r) {
  if (d < 1) throw Error(ErrorCode::DomainError, "torus dimension must be >= 1");
  if (!(r > 0.5 * d)) {
    throw Error(ErrorCode::DomainError, "smoothness r must exceed d/2 (r=" + std::to_string(r) +
                                            ", d=" + std::to_string(d) + ")");
  }
}

FourierSeries::FourierSeries(int d) : d_(d) {
  if (d < 1) throw Error(ErrorCode::DomainError, "torus dimension must be >= 1");
}

void FourierSeries::set(const MultiIndex& s, cplx b) {
  if (static_cast<int>(s.size()) != d_) throw Error(ErrorCode::DimMismatch, "multi-index length");
  if (std::abs(b) <= kPrune) {
    coeffs_.erase(s);
    return;
  }
  coeffs_[s] = b;
}

cplx FourierSeries::at(const MultiIndex& s) const {
  auto it = coeffs_.find(s);
  return it == coeffs_.end() ? cplx{} : it->second;
}

double FourierSeries::l2_norm() const {
  double s = 0.0;
  for (const auto& [idx, b] : coeffs_) s += std::norm(b);
  return std::sqrt(s);
}

cplx FourierSeries::evaluate(std::span<const double> phi) const {
  if (static_cast<int>(phi.size()) != d_) throw Error(ErrorCode::DimMismatch, "evaluation point");
  cplx acc = 0.0;
  for (const auto& [idx, b] : coeffs_) {
    double dot = 0.0;
    for (int k = 0; k < d_; ++k) dot += idx[k] * phi[k];
    acc += b * std::polar(1.0, -dot);
  }
  return acc;
}

void FourierSeries::scale(double factor) {
  for (auto& [idx, b] : coeffs_) b *= factor;
}

long long squared_norm(const MultiIndex& s) noexcept {
  long long n = 0;
  for (int c : s) n += static_cast<long long>(c) * c;
  return n;
}

double sobolev_norm(const FourierSeries& h, double r) {
  double s = 0.0;
  for (const auto& [idx, b] : h.coeffs()) {
    s += std::pow(1.0 + static_cast<double>(squared_norm(idx)), r) * std::norm(b);
  }
  return std::sqrt(s);
}

double truncation_error(const FourierSeries& h, double K) {
  if (K < 0.0) throw Error(ErrorCode::DomainError, "truncation radius must be >= 0");
  const double K2 = K * K;
  double tail = 0.0;
  for (const auto& [idx, b] : h.coeffs())
    if (static_cast<double>(squared_norm(idx)) > K2) tail += std::norm(b);
  return std::sqrt(tail);
}

FourierSeries truncate(const FourierSeries& h, double K) {
  FourierSeries out(h.d());
  const double K2 = K * K;
  for (const auto& [idx, b] : h.coeffs())
    if (static_cast<double>(squared_norm(idx)) <= K2) out.set(idx, b);
  return out;
}

std::vector<MultiIndex> annulus_points(int d, double K) {
  if (d < 1) throw Error(ErrorCode::DomainError, "torus dimension must be >= 1");
  const double lo2 = K * K;
  const double hi2 = 4.0 * K * K;
  const int m = static_cast<int>(std::floor(2.0 * K));
  std::vector<MultiIndex> pts;
  MultiIndex s(d, -m);
  while (true) {
    const auto n2 = static_cast<double>(squared_norm(s));
    if (n2 > lo2 && n2 <= hi2) pts.push_back(s);
    int j = d - 1;
    while (j >= 0 && s[j] == m) {
      s[j] = -m;
      --j;
    }
    if (j < 0) break;
    ++s[j];
  }
  return pts;
}

FourierSeries annulus_witness(const SobolevParams& p, double K) {
  if (K < 1.0) throw Error(ErrorCode::DomainError, "witness radius must be >= 1");
  const auto pts = annulus_points(p.d(), K);
  if (pts.empty()) throw Error(ErrorCode::EmptyAnnulus, "no lattice points with K < |s| <= 2K");
  const double c0 = 1.0 / std::sqrt(static_cast<double>(pts.size()));
  FourierSeries h(p.d());
  for (const auto& s : pts) {
    h.set(s, c0 * std::pow(1.0 + static_cast<double>(squared_norm(s)), -0.5 * p.r()));
  }
  return h;
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "fit_line needs >= 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

LowerCurve minimax_lower_curve(const SobolevParams& p, std::span<const double> K_list) {
  if (K_list.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 radii");
  for (std::size_t k = 0; k < K_list.size(); ++k) {
    if (K_list[k] < 1.0) throw Error(ErrorCode::DomainError, "radii must be >= 1");
    if (k > 0 && !(K_list[k] > K_list[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "radii must be strictly increasing");
    }
  }
  LowerCurve out;
  out.paper_exponent = 0.5 * p.d() - p.r();
  std::vector<double> lx, ly;
  for (double K : K_list) {
    const auto h = annulus_witness(p, K);
    const double err = truncation_error(h, K);
    out.K.push_back(K);
    out.errors.push_back(err);
    out.annulus_sizes.push_back(h.size());
    lx.push_back(std::log(K));
    ly.push_back(std::log(err));
  }
  std::tie(out.fitted_slope, out.fitted_intercept) = fit_line(lx, ly);
  return out;
}

JacksonBound jackson_upper(const FourierSeries& h, const SobolevParams& p, double K) {
  if (K < 1.0) throw Error(ErrorCode::DomainError, "bandwidth K must be >= 1");
  const double norm = sobolev_norm(h, p.r());
  return {std::pow(1.0 + K * K, -0.5 * p.r()) * norm, std::pow(K, 0.5 * p.d() - p.r()) * norm};
}

double empirical_jackson_constant(const FourierSeries& h, const SobolevParams& p,
                                  std::span<const double> K_list) {
  double c = 0.0;
  for (double K : K_list) c = std::max(c, truncation_error(h, K) / std::pow(K, 0.5 * p.d() - p.r()));
  return c;
}

std::vector<double> limit_probe(std::span<const std::pair<double, int>> r_d_pairs) {
  std::vector<double> out;
  out.reserve(r_d_pairs.size());
  for (const auto& [r, d] : r_d_pairs) {
    if (d < 1) throw Error(ErrorCode::DomainError, "d must be >= 1");
    const double alpha = r - 0.5 * d;
    if (!(alpha > 0.0)) {
      throw Error(ErrorCode::DomainError, "r must exceed d/2 (r=" + std::to_string(r) + ", d=" +
                                              std::to_string(d) + ")");
    }
    out.push_back(std::exp(-alpha * std::log(static_cast<double>(d))));
  }
  return out;
}

FourierSeries random_unit_ball_series(const SobolevParams& p, int box, std::size_t modes,
                                      std::uint64_t seed) {
  if (box < 0) throw Error(ErrorCode::InvalidArgument, "box half-width must be >= 0");
  const int d = p.d();
  const double side = 2.0 * box + 1.0;
  const double capacity = std::pow(side, d);
  if (static_cast<double>(modes) > capacity) {
    throw Error(ErrorCode::InvalidArgument, "more modes requested than lattice points in the box");
  }
  Rng support_rng = Rng(seed).split(1);
  Rng coeff_rng = Rng(seed).split(2);
  std::set<MultiIndex> support;
  while (support.size() < modes) {
    MultiIndex s(d);
    for (auto& c : s) {
      c = static_cast<int>(support_rng.next_u64() % static_cast<std::uint64_t>(side)) - box;
    }
    support.insert(s);
  }
  FourierSeries h(d);
  for (const auto& s : support) {
    const double re = coeff_rng.normal();
    const double im = coeff_rng.normal();
    h.set(s, cplx(re, im));
  }
  const double norm = sobolev_norm(h, p.r());
  if (norm > 0.0) h.scale(1.0 / norm);
  return h;
}

}  // namespace qspec
