#pragma once

#include "spsys/subproduct.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace spsys {

/// The X-Fock space truncated at total degree D: ⊕_{i+j≤D} X(i,j), each block
/// carried in the orthonormal basis returned by SubproductSystem::fiber_basis.
/// Blocks are ordered by total degree, then by i descending, so the vacuum Δ
/// is coordinate 0.
class TruncatedFock {
 public:
  explicit TruncatedFock(SubproductSystem sps);

  const SubproductSystem& system() const { return sps_; }
  const std::vector<Degree>& blocks() const { return blocks_; }
  std::size_t total_dim() const { return total_dim_; }

  std::size_t block_dim(Degree d) const;
  std::size_t offset(Degree d) const;
  /// Columns: orthonormal basis of X(d) inside E^{⊗i} ⊗ F^{⊗j}.
  const ComplexMatrix& basis(Degree d) const;

  /// Embeds a fiber vector as a Fock vector (block coordinates).
  ComplexVector embed(Degree d, const ComplexVector& x) const;

 private:
  SubproductSystem sps_;
  std::vector<Degree> blocks_;
  std::map<Degree, std::size_t> offsets_;
  std::map<Degree, ComplexMatrix> bases_;
  std::size_t total_dim_ = 0;
};

/// An operator on a truncated Fock space.
class FockOperator {
 public:
  FockOperator(std::shared_ptr<const TruncatedFock> fock, ComplexMatrix matrix);

  static FockOperator identity(std::shared_ptr<const TruncatedFock> fock);
  static FockOperator zero(std::shared_ptr<const TruncatedFock> fock);

  const TruncatedFock& fock() const { return *fock_; }
  const std::shared_ptr<const TruncatedFock>& fock_ptr() const { return fock_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  ComplexMatrix& mutable_matrix() { return matrix_; }

  /// The block sending X(from) to X(to).
  ComplexMatrix block(Degree to, Degree from) const;

  FockOperator operator+(const FockOperator& o) const;
  FockOperator operator-(const FockOperator& o) const;
  FockOperator operator*(const FockOperator& o) const;
  FockOperator operator*(Complex s) const;

 private:
  void check_same(const FockOperator& o) const;

  std::shared_ptr<const TruncatedFock> fock_;
  ComplexMatrix matrix_;
};

FockOperator operator*(Complex s, const FockOperator& t);

/// Default tolerance for fiber membership of creation-operator symbols.
inline constexpr double kFiberTol = 1e-8;

/// L_x for x ∈ X(d): maps block (k,l) to block d + (k,l) by
/// ξ ↦ p W(x ⊗ ξ). Blocks that would exceed D map to zero.
FockOperator creation_operator(const std::shared_ptr<const TruncatedFock>& fock, Degree d,
                               const ComplexVector& x, double tol = kFiberTol);

/// L_x rebuilt as sums of products of degree-(1,0) and degree-(0,1) creation
/// operators: peel off the first tensor letter and recurse.
FockOperator creation_via_generators(const std::shared_ptr<const TruncatedFock>& fock,
                                     Degree d, const ComplexVector& x, double tol = kFiberTol);

/// (‖L_x‖, ‖x‖).
std::pair<double, double> op_norm_check(const std::shared_ptr<const TruncatedFock>& fock,
                                        Degree d, const ComplexVector& x,
                                        double tol = kFiberTol);

/// Φ_{(i,j)}(T) = Σ_{(k,l)} p_{(k+i,l+j)} T p_{(k,l)}. Negative shifts are allowed.
FockOperator fourier_coefficient(const FockOperator& t, Degree shift);

/// Φ̃_k(T) = Σ_{i+j=k, i,j≥0} Φ_{(i,j)}(T).
FockOperator fourier_total(const FockOperator& t, int k);

/// Σ_{k=0}^{P} (1 − k/P) Φ̃_k(T).
FockOperator cesaro_reconstruct(const FockOperator& t, int p);

/// The (Δ, Δ) entry of T.
Complex vacuum_character(const FockOperator& t);

}  // namespace spsys
