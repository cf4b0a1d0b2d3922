#include "qspec/dla.hpp"

#include <cmath>
#include <deque>
#include <string>
#include <utility>

#include "qspec/error.hpp"

namespace qspec {

ComplexMatrix orthogonal_residual(const ComplexMatrix& x, std::span<const ComplexMatrix> basis) {
  ComplexMatrix r = x;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const double c = real_inner(b, r);
      if (c != 0.0) r -= b * cplx(c, 0.0);
    }
  }
  return r;
}

namespace {

// Appends x to basis if its residual survives; returns true on growth.
bool try_append(std::vector<ComplexMatrix>& basis, const ComplexMatrix& x, double tol) {
  ComplexMatrix r = orthogonal_residual(x, basis);
  const double nrm = r.frobenius();
  if (nrm <= tol) return false;
  r *= cplx(1.0 / nrm, 0.0);
  basis.push_back(std::move(r));
  return true;
}

}  // namespace

LieBasis lie_closure(std::span<const ComplexMatrix> generators, double tol, std::size_t max_dim) {
  if (generators.empty()) throw Error(ErrorCode::InvalidArgument, "lie_closure needs generators");
  const std::size_t n = generators.front().dim();
  const std::size_t cap = max_dim == 0 ? n * n : max_dim;
  if (cap > n * n) throw Error(ErrorCode::InvalidArgument, "max_dim exceeds N^2");

  LieBasis g{n, {}};
  auto grow = [&](const ComplexMatrix& x) {
    const std::size_t before = g.elements.size();
    if (!try_append(g.elements, x, tol)) return false;
    if (g.elements.size() > cap) {
      throw Error(ErrorCode::DimCap, "closure dimension would exceed " + std::to_string(cap));
    }
    return g.elements.size() > before;
  };

  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto enqueue_new = [&] {
    const std::size_t k = g.elements.size() - 1;
    for (std::size_t j = 0; j < k; ++j) queue.emplace_back(j, k);
  };

  for (const auto& h : generators) {
    if (h.dim() != n) throw Error(ErrorCode::DimMismatch, "generators must share a dimension");
    if (!h.is_hermitian()) throw Error(ErrorCode::NotHermitian, "lie_closure generator");
    if (grow(h * cplx(0.0, 1.0))) enqueue_new();
  }

  while (!queue.empty()) {
    const auto [a, b] = queue.front();
    queue.pop_front();
    if (grow(commutator(g.elements[a], g.elements[b]))) enqueue_new();
  }
  return g;
}

std::vector<ComplexMatrix> center_basis(const LieBasis& g, double tol) {
  const std::size_t D = g.dim();
  if (D == 0) return {};
  // Row block b of the map c -> sum_a c_a [X_a, X_b], in g's coordinates.
  RealMatrix ad(D * D, D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) {
      const ComplexMatrix br = commutator(g.elements[a], g.elements[b]);
      for (std::size_t c = 0; c < D; ++c) ad(b * D + c, a) = real_inner(g.elements[c], br);
    }
  const RealSvd svd = svd_jacobi(std::move(ad));

  std::vector<ComplexMatrix> center;
  for (std::size_t k = 0; k < D; ++k) {
    if (svd.singular_values[k] > tol) continue;
    ComplexMatrix z(g.dim_matrix);
    for (std::size_t a = 0; a < D; ++a) z += g.elements[a] * cplx(svd.v(a, k), 0.0);
    center.push_back(std::move(z));
  }
  return center;
}

std::vector<ComplexMatrix> derived_algebra(const LieBasis& g, double tol) {
  std::vector<ComplexMatrix> basis;
  for (std::size_t a = 0; a < g.dim(); ++a)
    for (std::size_t b = a + 1; b < g.dim(); ++b) try_append(basis, commutator(g.elements[a], g.elements[b]), tol);
  return basis;
}

double eta(const ComplexMatrix& g) {
  // sqrt(|Tr G|^2 / ||G||_F^2) keeps eta(I_N) = sqrt(N) exact.
  double frob2 = 0.0;
  for (const cplx& z : g.data()) frob2 += std::norm(z);
  if (frob2 <= 1e-300) throw Error(ErrorCode::ZeroMatrix, "eta of a zero generator");
  return std::sqrt(std::norm(g.trace()) / frob2);
}

DlaReport dla_report(std::span<const ComplexMatrix> generators, double tol) {
  const LieBasis g = lie_closure(generators, tol);
  DlaReport report;
  report.dim = g.dim();
  report.center_dim = center_basis(g, tol).size();
  report.derived_dim = derived_algebra(g, tol).size();
  for (const auto& h : generators) report.eta_per_generator.push_back(eta(h));
  return report;
}

}  // namespace qspec
