#include "qspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qspec/error.hpp"
#include "qspec/rng.hpp"

namespace qspec {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NonCommensurate: return "NonCommensurate";
    case ErrorCode::EmptyAnnulus: return "EmptyAnnulus";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimCap: return "DimCap";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::AllZeroDifferences: return "AllZeroDifferences";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, std::string(where) + ": " + std::to_string(a.dim()) +
                                            " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "matrix dimension must be >= 1");
  if (data_.size() != dim * dim) {
    throw Error(ErrorCode::DimMismatch, "entry count does not match dim*dim");
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

double ComplexMatrix::frobenius() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

cplx ComplexMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

bool ComplexMatrix::is_hermitian() const noexcept {
  const double tol = 1e-12 * (1.0 + frobenius());
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

bool ComplexMatrix::is_diagonal() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (i != j && (*this)(i, j) != cplx{}) return false;
  return true;
}

void ComplexMatrix::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw Error(ErrorCode::DimMismatch, "matrix-vector product");
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    const cplx* row = &data_[i * dim_];
    cplx acc = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> x) const {
  std::vector<cplx> y(dim_);
  apply(x, y);
  return y;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) noexcept {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "matrix product");
  const std::size_t n = a.dim();
  ComplexMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

HermitianEigen eig_hermitian(const ComplexMatrix& h) {
  if (!h.is_hermitian()) throw Error(ErrorCode::NotHermitian, "eig_hermitian input");
  const std::size_t n = h.dim();
  ComplexMatrix a = h;
  ComplexMatrix v = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double target = 1e-13 * h.frobenius();
  constexpr int kMaxSweeps = 100;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
    const double off = off_norm();
    if (off <= target || off == 0.0) {
      converged = true;
      break;
    }
    if (sweep == kMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx z = a(p, q);
        const double mag = std::abs(z);
        if (mag == 0.0) continue;
        // Phase P = diag(1, e^{-i phi}) makes the 2x2 block real symmetric,
        // then a real rotation R diagonalizes it. W = P R.
        const cplx phase = z / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double angle = 0.5 * std::atan2(2.0 * mag, aqq - app);
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const cplx wpp = c;
        const cplx wpq = s;
        const cplx wqp = -s * std::conj(phase);
        const cplx wqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * wpp + akq * wqp;
          a(k, q) = akp * wpq + akq * wqq;
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * wpp + vkq * wqp;
          v(k, q) = vkp * wpq + vkq * wqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(wpp) * apk + std::conj(wqp) * aqk;
          a(q, k) = std::conj(wpq) * apk + std::conj(wqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence, "Jacobi sweep budget exhausted at dim " + std::to_string(n));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

ComplexMatrix unitary_from_eigen(const HermitianEigen& eig, double theta) {
  const std::size_t n = eig.values.size();
  std::vector<cplx> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, -theta * eig.values[k]);
  ComplexMatrix u(n);
  const auto& v = eig.vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += v(i, k) * phases[k] * std::conj(v(j, k));
      u(i, j) = acc;
    }
  return u;
}

ComplexMatrix unitary_from_generator(const ComplexMatrix& h, double theta) {
  return unitary_from_eigen(eig_hermitian(h), theta);
}

ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  // Columns of a complex Ginibre matrix, stored column-major for Gram-Schmidt.
  std::vector<std::vector<cplx>> cols(dim, std::vector<cplx>(dim));
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      cols[j][i] = cplx(re, im) * std::sqrt(0.5);
    }

  // Modified Gram-Schmidt with a second pass. The resulting R has a real
  // positive diagonal, which is the phase-corrected QR that makes Q Haar.
  for (std::size_t j = 0; j < dim; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj = 0.0;
        for (std::size_t i = 0; i < dim; ++i) proj += std::conj(cols[k][i]) * cols[j][i];
        for (std::size_t i = 0; i < dim; ++i) cols[j][i] -= proj * cols[k][i];
      }
    }
    double nrm = 0.0;
    for (const auto& z : cols[j]) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    for (auto& z : cols[j]) z /= nrm;
  }

  ComplexMatrix u(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) u(i, j) = cols[j][i];
  return u;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

FrobTrace frob_trace(const ComplexMatrix& m) noexcept { return {m.frobenius(), m.trace()}; }

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "inner product");
  double s = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) s += (std::conj(da[k]) * db[k]).real();
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return out;
}

ComplexMatrix pauli(char letter) {
  const cplx i{0.0, 1.0};
  switch (letter) {
    case 'I': return ComplexMatrix(2, {1.0, 0.0, 0.0, 1.0});
    case 'X': return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case 'Y': return ComplexMatrix(2, {0.0, -i, i, 0.0});
    case 'Z': return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
    default:
      throw Error(ErrorCode::InvalidArgument, std::string("unknown Pauli letter '") + letter + "'");
  }
}

ComplexMatrix pauli_string(std::string_view letters) {
  if (letters.empty()) throw Error(ErrorCode::InvalidArgument, "empty Pauli string");
  ComplexMatrix out = pauli(letters.front());
  for (std::size_t k = 1; k < letters.size(); ++k) out = kron(out, pauli(letters[k]));
  return out;
}

RealSvd svd_jacobi(RealMatrix a) {
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  RealMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  constexpr int kMaxSweeps = 60;
  constexpr double kEps = 1e-15;
  bool rotated = true;
  for (int sweep = 0; sweep < kMaxSweeps && rotated; ++sweep) {
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += a(i, p) * a(i, p);
          beta += a(i, q) * a(i, q);
          gamma += a(i, p) * a(i, q);
        }
        if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double xp = a(i, p);
          const double xq = a(i, q);
          a(i, p) = c * xp - s * xq;
          a(i, q) = s * xp + c * xq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double xp = v(i, p);
          const double xq = v(i, q);
          v(i, p) = c * xp - s * xq;
          v(i, q) = s * xp + c * xq;
        }
      }
    }
  }
  if (rotated) throw Error(ErrorCode::NoConvergence, "one-sided Jacobi SVD");

  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
    sv[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sv[i] > sv[j]; });

  RealSvd out{std::vector<double>(n), RealMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.singular_values[k] = sv[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace qspec
