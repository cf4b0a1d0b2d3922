#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qspec/linalg.hpp"

namespace qspec {

inline constexpr double kLieTolerance = 1e-8;

/// Orthonormal (under Re Tr(A^dagger B)) anti-Hermitian basis of a real Lie
/// algebra of N x N matrices.
struct LieBasis {
  std::size_t dim_matrix = 0;
  std::vector<ComplexMatrix> elements;

  std::size_t dim() const noexcept { return elements.size(); }
};

struct DlaReport {
  std::size_t dim = 0;
  std::size_t center_dim = 0;
  std::size_t derived_dim = 0;
  std::vector<double> eta_per_generator;
};

/// Lie closure of {i H_j}. Breadth-first over bracket pairs; each bracket is
/// orthogonalized (two Gram-Schmidt passes) and kept if its residual norm
/// exceeds tol. max_dim = 0 means N^2.
LieBasis lie_closure(std::span<const ComplexMatrix> generators, double tol = kLieTolerance,
                     std::size_t max_dim = 0);

/// Null space of the adjoint action written in the coordinates of g.
std::vector<ComplexMatrix> center_basis(const LieBasis& g, double tol = kLieTolerance);

/// Orthonormal basis of span{[X_i, X_j]}.
std::vector<ComplexMatrix> derived_algebra(const LieBasis& g, double tol = kLieTolerance);

/// |Tr G| / ||G||_F.
double eta(const ComplexMatrix& g);

DlaReport dla_report(std::span<const ComplexMatrix> generators, double tol = kLieTolerance);

/// Orthogonalizes `x` against `basis` (two passes) and returns the residual.
ComplexMatrix orthogonal_residual(const ComplexMatrix& x, std::span<const ComplexMatrix> basis);

}  // namespace qspec
