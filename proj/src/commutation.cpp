#include "spsys/commutation.hpp"

namespace spsys {

CommutationRelation::CommutationRelation(int m, int n, ComplexMatrix u, double tol)
    : m_(m), n_(n), u_(std::move(u)), cache_(std::make_shared<Cache>()) {
  if (m < 0 || n < 0) throw Error("commutation relation: negative dimension");
  const auto mn = static_cast<Eigen::Index>(m) * n;
  if (u_.rows() != mn || u_.cols() != mn)
    throw Error("commutation relation: u must be " + std::to_string(mn) + "x" +
                std::to_string(mn));
  if (!is_unitary(u_, tol)) throw Error("commutation relation: u is not unitary");
}

CommutationRelation CommutationRelation::flip(int m, int n) {
  ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(m) * n,
                                        static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) u(i * n + j, j * m + i) = 1.0;
  return {m, n, std::move(u)};
}

CommutationRelation CommutationRelation::scalar(Complex lambda) {
  ComplexMatrix u(1, 1);
  u(0, 0) = lambda;
  return {1, 1, std::move(u)};
}

Complex CommutationRelation::coefficient(int k, int l, int i, int j) const {
  return u_(k * n_ + l, j * m_ + i);
}

ComplexMatrix lift_one_n(const CommutationRelation& cr, int n_pow) {
  if (n_pow < 0) throw Error("lift_one_n: negative power");
  const auto m = static_cast<std::size_t>(cr.m());
  const auto n = static_cast<std::size_t>(cr.n());
  ComplexMatrix result = identity(n * ipow(m, n_pow));
  for (int k = 1; k <= n_pow; ++k) {
    // k-th factor from the right: I_{E^{k-1}} ⊗ u ⊗ I_{E^{n_pow-k}}.
    const ComplexMatrix factor =
        kron(kron(identity(ipow(m, k - 1)), cr.matrix()), identity(ipow(m, n_pow - k)));
    result = factor * result;
  }
  return result;
}

ComplexMatrix lift_m_n(const CommutationRelation& cr, int m_pow, int n_pow) {
  if (m_pow < 0 || n_pow < 0) throw Error("lift_m_n: negative power");
  const auto m = static_cast<std::size_t>(cr.m());
  const auto n = static_cast<std::size_t>(cr.n());
  if (m_pow == 0 || n_pow == 0) return identity(ipow(n, m_pow) * ipow(m, n_pow));
  const ComplexMatrix one = lift_one_n(cr, n_pow);
  ComplexMatrix result = identity(ipow(n, m_pow) * ipow(m, n_pow));
  for (int k = 1; k <= m_pow; ++k) {
    // I_{F^{m_pow-k}} ⊗ u^{(1,n_pow)} ⊗ I_{F^{k-1}}
    const ComplexMatrix factor =
        kron(kron(identity(ipow(n, m_pow - k)), one), identity(ipow(n, k - 1)));
    result = factor * result;
  }
  return result;
}

const ComplexMatrix& big_w(const CommutationRelation& cr, Degree left, Degree right) {
  if (left.i < 0 || left.j < 0 || right.i < 0 || right.j < 0)
    throw Error("big_w: negative degree");
  const Degree total = left + right;
  const std::size_t dim = fiber_dim(cr.m(), cr.n(), total);
  if (dim > cr.cell_bound())
    throw Error("big_w: block " + to_string(left) + "+" + to_string(right) + " of dimension " +
                std::to_string(dim) + " exceeds the cell bound " +
                std::to_string(cr.cell_bound()));
  const auto key = std::make_tuple(left.i, left.j, right.i, right.j);
  auto& cache = *cr.cache_;
  {
    std::lock_guard lock(cache.mutex);
    if (auto it = cache.w.find(key); it != cache.w.end()) return *it->second;
  }
  const auto m = static_cast<std::size_t>(cr.m());
  const auto n = static_cast<std::size_t>(cr.n());
  auto w = std::make_shared<const ComplexMatrix>(
      kron(kron(identity(ipow(m, left.i)), lift_m_n(cr, left.j, right.i)),
           identity(ipow(n, right.j))));
  std::lock_guard lock(cache.mutex);
  auto [it, inserted] = cache.w.emplace(key, std::move(w));
  return *it->second;
}

ComplexVector fock_product(const CommutationRelation& cr, Degree dx, const ComplexVector& x,
                           Degree dy, const ComplexVector& y) {
  if (static_cast<std::size_t>(x.size()) != fiber_dim(cr.m(), cr.n(), dx) ||
      static_cast<std::size_t>(y.size()) != fiber_dim(cr.m(), cr.n(), dy))
    throw Error("fock_product: vector length does not match degree");
  if (dx.j == 0 || dy.i == 0) return kron(x, y);
  return big_w(cr, dx, dy) * kron(x, y);
}

}  // namespace spsys
