#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qspec/linalg.hpp"

namespace qspec {

/// Torus dimension d and Sobolev smoothness r, with r > d/2.
class SobolevParams {
 public:
  SobolevParams(int d, double r);

  int d() const noexcept { return d_; }
  double r() const noexcept { return r_; }
  double alpha() const noexcept { return r_ - 0.5 * d_; }

 private:
  int d_;
  double r_;
};

using MultiIndex = std::vector<int>;

/// h(phi) = sum_s b_s exp(-i s.phi) with finitely many nonzero b_s.
class FourierSeries {
 public:
  explicit FourierSeries(int d);

  int d() const noexcept { return d_; }
  const std::map<MultiIndex, cplx>& coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Sets b_s; coefficients with |b| <= 1e-300 are dropped.
  void set(const MultiIndex& s, cplx b);
  cplx at(const MultiIndex& s) const;

  /// Sqrt of sum |b_s|^2 (Parseval).
  double l2_norm() const;
  cplx evaluate(std::span<const double> phi) const;
  void scale(double factor);

 private:
  int d_;
  std::map<MultiIndex, cplx> coeffs_;
};

long long squared_norm(const MultiIndex& s) noexcept;

double sobolev_norm(const FourierSeries& h, double r);

/// Best L2 approximation error from the band {||s||_2 <= K}.
double truncation_error(const FourierSeries& h, double K);

/// Fourier truncation h_K.
FourierSeries truncate(const FourierSeries& h, double K);

/// Lattice points with K < ||s||_2 <= 2K, in lexicographic order.
std::vector<MultiIndex> annulus_points(int d, double K);

/// Unit-Sobolev-norm function with energy on the annulus K < ||s|| <= 2K.
FourierSeries annulus_witness(const SobolevParams& p, double K);

struct LowerCurve {
  std::vector<double> K;
  std::vector<double> errors;
  std::vector<std::size_t> annulus_sizes;
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  double paper_exponent = 0.0;  // d/2 - r
};

LowerCurve minimax_lower_curve(const SobolevParams& p, std::span<const double> K_list);

struct JacksonBound {
  double rigorous = 0.0;    // (1 + K^2)^{-r/2} ||h||_r
  double paper_form = 0.0;  // K^{d/2 - r} ||h||_r
};

JacksonBound jackson_upper(const FourierSeries& h, const SobolevParams& p, double K);

/// max_K truncation_error(h, K) / K^{d/2 - r}: the constant the stated
/// K^{d/2-r} form would need for this h.
double empirical_jackson_constant(const FourierSeries& h, const SobolevParams& p,
                                  std::span<const double> K_list);

/// d^{-(r - d/2)} evaluated as exp(-(r - d/2) ln d).
std::vector<double> limit_probe(std::span<const std::pair<double, int>> r_d_pairs);

/// Random series with `modes` distinct frequencies in [-box, box]^d, complex
/// Gaussian coefficients, rescaled to unit Sobolev norm.
FourierSeries random_unit_ball_series(const SobolevParams& p, int box, std::size_t modes,
                                      std::uint64_t seed);

/// Ordinary least squares y = slope * x + intercept.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace qspec
