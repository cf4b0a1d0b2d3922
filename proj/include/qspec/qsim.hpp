#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qspec/linalg.hpp"

namespace qspec {

/// Qubit 0 is the most significant tensor factor.
struct StateVector {
  std::vector<cplx> amplitudes;

  std::size_t dim() const noexcept { return amplitudes.size(); }
  double norm() const noexcept;
  static StateVector basis(std::size_t dim, std::size_t index);
};

using CnotPair = std::pair<int, int>;  // (control, target)

enum class EntanglerKind { Ring, Chain };

/// CNOT ring 0->1, ..., n-1->0; a single 0->1 for n = 2; empty for n = 1.
std::vector<CnotPair> ring_entangler(int n);
/// CNOT chain 0->1, ..., n-2->n-1.
std::vector<CnotPair> chain_entangler(int n);
std::vector<CnotPair> make_entangler(EntanglerKind kind, int n);
EntanglerKind parse_entangler(std::string_view name);
const char* to_string(EntanglerKind kind);

/// Z on `qubit`, identity elsewhere.
ComplexMatrix z_observable(int n, int qubit);

/// |psi> = U_L ... U_1 U_enta RY(x)^{(x)n} |0...0>, U_l = exp(-i theta_l H_l).
struct CircuitSpec {
  int n = 1;
  std::vector<ComplexMatrix> generators;
  std::vector<CnotPair> entangler;
  ComplexMatrix observable;

  std::size_t depth() const noexcept { return generators.size(); }
  /// Throws DimMismatch / NotHermitian / InvalidArgument on a bad spec.
  void validate() const;
};

/// H = U diag(grid from -b_max to b_max) U^dagger with U Haar(seed).
ComplexMatrix make_generator(std::size_t dim, double b_max, std::uint64_t seed);
/// Same spectrum construction with a caller-supplied unitary.
ComplexMatrix make_generator(const ComplexMatrix& unitary, double b_max);

/// Immutable compiled circuit: caches one eigendecomposition per generator.
class Circuit {
 public:
  explicit Circuit(CircuitSpec spec);

  const CircuitSpec& spec() const noexcept { return spec_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t depth() const noexcept { return eigs_.size(); }
  const HermitianEigen& layer_eigen(std::size_t l) const { return eigs_.at(l); }

  /// State after encoding and entangler; independent of theta.
  StateVector encoded_state(double x) const;
  /// In-place exp(-i theta H_l) |psi>.
  void apply_layer(std::size_t l, double theta, StateVector& psi) const;
  ComplexMatrix layer_unitary(std::size_t l, double theta) const;
  double expectation(const StateVector& psi) const;

  double forward(std::span<const double> theta, double x) const;
  double forward_from(std::span<const double> theta, const StateVector& encoded) const;

 private:
  CircuitSpec spec_;
  std::size_t dim_;
  std::vector<HermitianEigen> eigs_;
  std::vector<double> observable_diag_;  // nonempty when the observable is diagonal
};

/// Convenience wrapper; builds a Circuit per call.
double circuit_forward(const CircuitSpec& spec, std::span<const double> theta, double x);

/// Applies the product encoding RY(x) on every qubit of |0...0>.
StateVector encode_ry(int n, double x);
void apply_cnot(int n, int control, int target, StateVector& psi);

struct TrigCoefficient {
  double omega;
  cplx a;
};

/// f(theta) = <phi|U^dagger O U|phi> = sum_omega a_omega exp(-i theta omega),
/// with a_omega = sum_{lambda_q - lambda_p = omega} conj(<p|phi>) <q|phi> O_pq.
/// Sorted by omega; one entry per distinct gap (tolerance 1e-9).
std::vector<TrigCoefficient> trig_poly_coeffs(const ComplexMatrix& h, const StateVector& phi,
                                              const ComplexMatrix& observable);
double evaluate_trig_poly(std::span<const TrigCoefficient> coeffs, double theta);

/// Central differences per coordinate.
std::vector<double> grad_fd(const Circuit& circuit, std::span<const double> theta, double x, double step);

/// d/dtheta <s|U^dagger O U|s> = 2 Re <Us| O (-i H) |Us>.
double grad_analytic_1p(const ComplexMatrix& h, double theta, const ComplexMatrix& observable,
                        const StateVector& state);
/// Same with a precomputed eigendecomposition of h.
double grad_analytic_1p(const HermitianEigen& eig, const ComplexMatrix& h, double theta,
                        const ComplexMatrix& observable, const StateVector& state);

}  // namespace qspec
