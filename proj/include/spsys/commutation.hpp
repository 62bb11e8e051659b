#pragma once

#include "spsys/tensor_linalg.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace spsys {

/// Upper bound on dim E^{⊗(i+k)} ⊗ F^{⊗(j+l)} for any materialized W.
inline constexpr std::size_t kDefaultCellBound = 4096;

/// A unitary u : F ⊗ E → E ⊗ F stored as its operator matrix. Columns are
/// indexed by f_j ⊗ e_i (flat j*m + i), rows by e_k ⊗ f_l (flat k*n + l), so
/// u(f_j ⊗ e_i) = Σ_{k,l} u_{(k,l),(i,j)} e_k ⊗ f_l.
class CommutationRelation {
 public:
  CommutationRelation(int m, int n, ComplexMatrix u, double tol = 1e-9);

  /// u(f_j ⊗ e_i) = e_i ⊗ f_j.
  static CommutationRelation flip(int m, int n);
  /// m = n = 1, u = [lambda].
  static CommutationRelation scalar(Complex lambda);

  int m() const { return m_; }
  int n() const { return n_; }
  const ComplexMatrix& matrix() const { return u_; }

  /// u_{(k,l),(i,j)}, 0-based.
  Complex coefficient(int k, int l, int i, int j) const;

  std::size_t cell_bound() const { return cell_bound_; }
  void set_cell_bound(std::size_t bound) { cell_bound_ = bound; }

 private:
  friend const ComplexMatrix& big_w(const CommutationRelation&, Degree, Degree);

  struct Cache {
    std::mutex mutex;
    std::map<std::tuple<int, int, int, int>, std::shared_ptr<const ComplexMatrix>> w;
  };

  int m_;
  int n_;
  ComplexMatrix u_;
  std::size_t cell_bound_ = kDefaultCellBound;
  std::shared_ptr<Cache> cache_;
};

/// u^{(1,p)} : F ⊗ E^{⊗p} → E^{⊗p} ⊗ F, the product of p adjacent swaps
/// (I_{E^{p-1}} ⊗ u) ⋯ (u ⊗ I_{E^{p-1}}). p = 0 gives I_F.
ComplexMatrix lift_one_n(const CommutationRelation& cr, int n_pow);

/// u^{(q,p)} : F^{⊗q} ⊗ E^{⊗p} → E^{⊗p} ⊗ F^{⊗q}; the last F is moved first.
/// Either power 0 gives the identity of the appropriate space.
ComplexMatrix lift_m_n(const CommutationRelation& cr, int m_pow, int n_pow);

/// W_{(i,j),(k,l)} = I_{E^i} ⊗ u^{(j,k)} ⊗ I_{F^l}. Results are memoized per
/// relation; throws when the block exceeds the relation's cell bound.
const ComplexMatrix& big_w(const CommutationRelation& cr, Degree left, Degree right);

/// The algebraic Fock product x · y = W_{dx,dy}(x ⊗ y).
ComplexVector fock_product(const CommutationRelation& cr, Degree dx, const ComplexVector& x,
                           Degree dy, const ComplexVector& y);

}  // namespace spsys
