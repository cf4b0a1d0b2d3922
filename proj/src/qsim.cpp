#include "qspec/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qspec/error.hpp"

namespace qspec {

double StateVector::norm() const noexcept {
  double s = 0.0;
  for (const auto& z : amplitudes) s += std::norm(z);
  return std::sqrt(s);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  StateVector s{std::vector<cplx>(dim)};
  s.amplitudes.at(index) = 1.0;
  return s;
}

std::vector<CnotPair> ring_entangler(int n) {
  if (n < 2) return {};
  if (n == 2) return {{0, 1}};
  std::vector<CnotPair> out;
  for (int q = 0; q < n; ++q) out.emplace_back(q, (q + 1) % n);
  return out;
}

std::vector<CnotPair> chain_entangler(int n) {
  std::vector<CnotPair> out;
  for (int q = 0; q + 1 < n; ++q) out.emplace_back(q, q + 1);
  return out;
}

std::vector<CnotPair> make_entangler(EntanglerKind kind, int n) {
  return kind == EntanglerKind::Ring ? ring_entangler(n) : chain_entangler(n);
}

EntanglerKind parse_entangler(std::string_view name) {
  if (name == "ring") return EntanglerKind::Ring;
  if (name == "chain") return EntanglerKind::Chain;
  throw Error(ErrorCode::InvalidArgument, "entangler must be 'ring' or 'chain', got '" + std::string(name) + "'");
}

const char* to_string(EntanglerKind kind) { return kind == EntanglerKind::Ring ? "ring" : "chain"; }

ComplexMatrix z_observable(int n, int qubit) {
  if (qubit < 0 || qubit >= n) throw Error(ErrorCode::InvalidArgument, "observable qubit out of range");
  std::string letters(static_cast<std::size_t>(n), 'I');
  letters[static_cast<std::size_t>(qubit)] = 'Z';
  return pauli_string(letters);
}

void CircuitSpec::validate() const {
  if (n < 1 || n > 10) throw Error(ErrorCode::InvalidArgument, "qubit count must be in [1, 10]");
  const std::size_t dim = std::size_t{1} << n;
  for (std::size_t l = 0; l < generators.size(); ++l) {
    if (generators[l].dim() != dim) {
      throw Error(ErrorCode::DimMismatch, "generator " + std::to_string(l) + " has dim " +
                                              std::to_string(generators[l].dim()) + ", expected " +
                                              std::to_string(dim));
    }
    if (!generators[l].is_hermitian()) throw Error(ErrorCode::NotHermitian, "generator " + std::to_string(l));
  }
  if (observable.dim() != dim) throw Error(ErrorCode::DimMismatch, "observable dimension");
  if (!observable.is_hermitian()) throw Error(ErrorCode::NotHermitian, "observable");
  for (const auto& [c, t] : entangler) {
    if (c == t || c < 0 || t < 0 || c >= n || t >= n) {
      throw Error(ErrorCode::InvalidArgument, "bad CNOT (" + std::to_string(c) + ", " + std::to_string(t) + ")");
    }
  }
}

ComplexMatrix make_generator(const ComplexMatrix& unitary, double b_max) {
  const std::size_t dim = unitary.dim();
  if (dim < 2) throw Error(ErrorCode::InvalidArgument, "generator dimension must be >= 2");
  if (b_max < 0.0) throw Error(ErrorCode::InvalidArgument, "b_max must be >= 0");
  std::vector<double> grid(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    grid[k] = -b_max + 2.0 * b_max * static_cast<double>(k) / static_cast<double>(dim - 1);
  }
  ComplexMatrix h(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < dim; ++k) acc += unitary(i, k) * grid[k] * std::conj(unitary(j, k));
      h(i, j) = acc;
    }
  // Exact Hermiticity: average with the adjoint.
  for (std::size_t i = 0; i < dim; ++i) {
    h(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < dim; ++j) {
      const cplx avg = 0.5 * (h(i, j) + std::conj(h(j, i)));
      h(i, j) = avg;
      h(j, i) = std::conj(avg);
    }
  }
  return h;
}

ComplexMatrix make_generator(std::size_t dim, double b_max, std::uint64_t seed) {
  return make_generator(haar_unitary(dim, seed), b_max);
}

StateVector encode_ry(int n, double x) {
  const std::size_t dim = std::size_t{1} << n;
  const double c = std::cos(0.5 * x);
  const double s = std::sin(0.5 * x);
  StateVector psi{std::vector<cplx>(dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    double amp = 1.0;
    for (int q = 0; q < n; ++q) amp *= ((i >> (n - 1 - q)) & 1U) ? s : c;
    psi.amplitudes[i] = amp;
  }
  return psi;
}

void apply_cnot(int n, int control, int target, StateVector& psi) {
  const std::size_t cmask = std::size_t{1} << (n - 1 - control);
  const std::size_t tmask = std::size_t{1} << (n - 1 - target);
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(psi.amplitudes[i], psi.amplitudes[i | tmask]);
  }
}

Circuit::Circuit(CircuitSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  dim_ = std::size_t{1} << spec_.n;
  eigs_.reserve(spec_.generators.size());
  for (const auto& h : spec_.generators) eigs_.push_back(eig_hermitian(h));
  if (spec_.observable.is_diagonal()) {
    observable_diag_.resize(dim_);
    for (std::size_t i = 0; i < dim_; ++i) observable_diag_[i] = spec_.observable(i, i).real();
  }
}

StateVector Circuit::encoded_state(double x) const {
  StateVector psi = encode_ry(spec_.n, x);
  for (const auto& [c, t] : spec_.entangler) apply_cnot(spec_.n, c, t, psi);
  return psi;
}

void Circuit::apply_layer(std::size_t l, double theta, StateVector& psi) const {
  const HermitianEigen& e = eigs_.at(l);
  if (psi.dim() != dim_) throw Error(ErrorCode::DimMismatch, "state dimension");
  std::vector<cplx> coeff(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(e.vectors(i, k)) * psi.amplitudes[i];
    coeff[k] = acc * std::polar(1.0, -theta * e.values[k]);
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) acc += e.vectors(i, k) * coeff[k];
    psi.amplitudes[i] = acc;
  }
}

ComplexMatrix Circuit::layer_unitary(std::size_t l, double theta) const {
  return unitary_from_eigen(eigs_.at(l), theta);
}

double Circuit::expectation(const StateVector& psi) const {
  if (psi.dim() != dim_) throw Error(ErrorCode::DimMismatch, "state dimension");
  if (!observable_diag_.empty()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) acc += observable_diag_[i] * std::norm(psi.amplitudes[i]);
    return acc;
  }
  const auto o_psi = spec_.observable.apply(psi.amplitudes);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) acc += std::conj(psi.amplitudes[i]) * o_psi[i];
  return acc.real();
}

double Circuit::forward_from(std::span<const double> theta, const StateVector& encoded) const {
  if (theta.size() != depth()) {
    throw Error(ErrorCode::DimMismatch, "expected " + std::to_string(depth()) + " parameters, got " +
                                            std::to_string(theta.size()));
  }
  StateVector psi = encoded;
  for (std::size_t l = 0; l < depth(); ++l) apply_layer(l, theta[l], psi);
  return expectation(psi);
}

double Circuit::forward(std::span<const double> theta, double x) const {
  return forward_from(theta, encoded_state(x));
}

double circuit_forward(const CircuitSpec& spec, std::span<const double> theta, double x) {
  return Circuit(spec).forward(theta, x);
}

std::vector<TrigCoefficient> trig_poly_coeffs(const ComplexMatrix& h, const StateVector& phi,
                                              const ComplexMatrix& observable) {
  const std::size_t n = h.dim();
  if (phi.dim() != n || observable.dim() != n) throw Error(ErrorCode::DimMismatch, "trig_poly_coeffs");
  const HermitianEigen e = eig_hermitian(h);
  const ComplexMatrix& v = e.vectors;
  const ComplexMatrix o_eig = v.adjoint() * observable * v;  // O_pq = <p|O|q>
  std::vector<cplx> amp(n);                                  // <p|phi>
  for (std::size_t p = 0; p < n; ++p) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(v(i, p)) * phi.amplitudes[i];
    amp[p] = acc;
  }

  std::vector<TrigCoefficient> terms;
  terms.reserve(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      terms.push_back({e.values[q] - e.values[p], std::conj(amp[p]) * amp[q] * o_eig(p, q)});
    }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const TrigCoefficient& a, const TrigCoefficient& b) { return a.omega < b.omega; });

  constexpr double kTol = 1e-9;
  std::vector<TrigCoefficient> out;
  std::size_t k = 0;
  while (k < terms.size()) {
    const double start = terms[k].omega;
    double wsum = 0.0;
    std::size_t count = 0;
    cplx a = 0.0;
    while (k < terms.size() && terms[k].omega - start <= kTol) {
      wsum += terms[k].omega;
      a += terms[k].a;
      ++count;
      ++k;
    }
    out.push_back({wsum / static_cast<double>(count), a});
  }
  return out;
}

double evaluate_trig_poly(std::span<const TrigCoefficient> coeffs, double theta) {
  cplx acc = 0.0;
  for (const auto& c : coeffs) acc += c.a * std::polar(1.0, -theta * c.omega);
  return acc.real();
}

std::vector<double> grad_fd(const Circuit& circuit, std::span<const double> theta, double x, double step) {
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be > 0");
  const StateVector encoded = circuit.encoded_state(x);
  std::vector<double> shifted(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  for (std::size_t l = 0; l < theta.size(); ++l) {
    shifted[l] = theta[l] + step;
    const double plus = circuit.forward_from(shifted, encoded);
    shifted[l] = theta[l] - step;
    const double minus = circuit.forward_from(shifted, encoded);
    shifted[l] = theta[l];
    grad[l] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

double grad_analytic_1p(const ComplexMatrix& h, double theta, const ComplexMatrix& observable,
                        const StateVector& state) {
  return grad_analytic_1p(eig_hermitian(h), h, theta, observable, state);
}

double grad_analytic_1p(const HermitianEigen& eig, const ComplexMatrix& h, double theta,
                        const ComplexMatrix& observable, const StateVector& state) {
  const std::size_t n = h.dim();
  if (observable.dim() != n || state.dim() != n) throw Error(ErrorCode::DimMismatch, "grad_analytic_1p");
  const ComplexMatrix u = unitary_from_eigen(eig, theta);
  const auto psi = u.apply(state.amplitudes);
  auto h_psi = h.apply(psi);
  for (auto& z : h_psi) z *= cplx(0.0, -1.0);
  const auto o_h_psi = observable.apply(h_psi);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(psi[i]) * o_h_psi[i];
  return 2.0 * acc.real();
}

}  // namespace qspec
