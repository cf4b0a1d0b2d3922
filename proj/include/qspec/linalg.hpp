#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qspec {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  double frobenius() const noexcept;
  cplx trace() const noexcept;
  bool is_hermitian() const noexcept;
  bool is_diagonal() const noexcept;

  /// y = M x
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  std::vector<cplx> apply(std::span<const cplx> x) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s) noexcept;

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

/// Eigenvalues ascending; column k of `vectors` is the eigenvector for values[k].
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

struct FrobTrace {
  double frobenius;
  cplx trace;
};

/// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius norm
/// drops to 1e-13 * ||H||_F; gives up after 100 sweeps.
HermitianEigen eig_hermitian(const ComplexMatrix& h);

/// exp(-i theta H) = V diag(exp(-i theta lambda)) V^dagger.
ComplexMatrix unitary_from_generator(const ComplexMatrix& h, double theta);
ComplexMatrix unitary_from_eigen(const HermitianEigen& eig, double theta);

/// Haar-distributed unitary from a seeded complex Ginibre matrix.
ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

FrobTrace frob_trace(const ComplexMatrix& m) noexcept;

/// Re Tr(A^dagger B).
double real_inner(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Single-qubit Pauli by letter (I, X, Y, Z).
ComplexMatrix pauli(char letter);

/// Tensor product of Paulis, leftmost letter is qubit 0 (most significant).
ComplexMatrix pauli_string(std::string_view letters);

/// Dense real matrix used for small real-valued linear systems.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  RealMatrix() = default;
  RealMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) noexcept { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data[i * cols + j]; }
};

/// Singular values (descending) and right singular vectors (columns of v).
struct RealSvd {
  std::vector<double> singular_values;
  RealMatrix v;
};

/// One-sided (Hestenes) Jacobi SVD.
RealSvd svd_jacobi(RealMatrix a);

}  // namespace qspec
