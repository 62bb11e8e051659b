#pragma once

#include "spsys/commutative_polynomial.hpp"
#include "spsys/ncpoly.hpp"
#include "spsys/subproduct.hpp"
#include "spsys/variety.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace spsys {

/// Σ_{i<k} c_i t^i in C[t]/(t^k).
class TruncatedPolynomial {
 public:
  explicit TruncatedPolynomial(int k);
  TruncatedPolynomial(int k, std::vector<Complex> coeffs);

  static TruncatedPolynomial constant(int k, Complex c);
  /// c·t (zero when k ≤ 1).
  static TruncatedPolynomial linear(int k, Complex c);

  int order() const { return k_; }
  const std::vector<Complex>& coefficients() const { return c_; }
  Complex operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double max_abs() const;

  TruncatedPolynomial operator+(const TruncatedPolynomial& o) const;
  TruncatedPolynomial operator-(const TruncatedPolynomial& o) const;
  TruncatedPolynomial operator*(const TruncatedPolynomial& o) const;
  TruncatedPolynomial operator*(Complex s) const;

 private:
  void check(const TruncatedPolynomial& o) const;

  int k_;
  std::vector<Complex> c_;
};

/// Evaluates p with every variable replaced by an element of C_k[t].
TruncatedPolynomial evaluate_truncated(const CommutativePolynomial& p,
                                       const std::vector<TruncatedPolynomial>& args, int k);

struct InvariantPair {
  int m = 0;
  int n = 0;
  /// dim X(1,0) + dim X(0,1).
  int dim_sum = 0;
  /// Minimal total degree of a nonzero element of J_X; absent when J_X has no
  /// nonzero element up to the truncation degree, meaning k_X ≥ D + 1.
  std::optional<int> k_x;
  int truncation = 0;

  std::string k_x_string() const;
};

/// k_X is read off the generators: a homogeneous ideal's lowest nonzero
/// component is spanned by its lowest-degree generators.
InvariantPair compute_invariants(const SubproductSystem& sps, double tol = kDefaultRankTol);

/// β_ζ(T) for T a polynomial in the generators L_{e_i} ↦ z_i, L_{f_j} ↦ w_j:
/// substitutes ζ_i t and reduces mod t^k. Throws when k > k_X (or k > D + 1
/// when k_X is only known to exceed D), where the value would depend on the
/// representative.
TruncatedPolynomial beta_homomorphism(const InvariantPair& inv, const ComplexVector& zeta,
                                      int k, const NCPolynomial& t);
TruncatedPolynomial beta_homomorphism(const SubproductSystem& sps, const ComplexVector& zeta,
                                      int k, const NCPolynomial& t);

/// Relative tolerance for derivative and C_k[t] vanishing tests.
inline constexpr double kDefaultMultiplicityTol = 1e-8;

/// All partial derivatives of p of total order ≤ k − 1 vanish at pt. Computed
/// from the Taylor expansion p(pt + y); a derivative counts as zero when it is
/// at most tol times the largest coefficient of p.
bool root_multiplicity_at_least(const CommutativePolynomial& p, const ComplexVector& pt, int k,
                                double tol = kDefaultMultiplicityTol);

/// True iff `p(pt + tζ + t²c_2 + … + t^{k-1}c_{k-1}) = 0` in C_k[t] for all
/// of `trials` random choices of ζ and c_i.
bool curve_criterion(const CommutativePolynomial& p, const ComplexVector& pt, int k, int trials,
                     std::mt19937_64& rng, double tol = kDefaultMultiplicityTol);

/// root_multiplicity_at_least and curve_criterion agree.
bool multi_equivalence_check(const CommutativePolynomial& p, const ComplexVector& pt, int k,
                             int trials, std::mt19937_64& rng,
                             double tol = kDefaultMultiplicityTol);

/// Every generator vanishes to order ≥ kY at pt: the necessary condition for
/// pt to be the image of Y's vacuum character under an isomorphism.
bool vacuum_image_constraint(const std::vector<CommutativePolynomial>& gens,
                             const PolyballPoint& pt, int k_y,
                             double tol = kDefaultMultiplicityTol);
bool vacuum_image_constraint(const SubproductSystem& x, const PolyballPoint& pt, int k_y,
                             double tol = kDefaultMultiplicityTol);

struct IsoWitness {
  bool switched = false;
  /// X(1,0) → Y(π(1,0)) and X(0,1) → Y(π(0,1)).
  ComplexMatrix b;
  ComplexMatrix c;
  double residual = 0.0;
};

struct IsoOptions {
  double tol = 1e-6;
  int restarts = 50;
  int iterations = 200;
  std::uint64_t seed = 0;
};

struct IsoBranch {
  bool switched = false;
  /// Dimension profiles differ under this π: no isomorphism with this π.
  bool refuted = false;
  std::optional<Degree> mismatch;
  /// Best residual found by the search (absent for refuted branches).
  std::optional<double> best_residual;
};

struct IsoResult {
  enum class Outcome { kRefuted, kWitness, kInconclusive };
  Outcome outcome = Outcome::kInconclusive;
  std::optional<IsoWitness> witness;
  std::vector<IsoBranch> branches;
};

std::string to_string(IsoResult::Outcome outcome);

/// The intertwining residual of (B, C) for a given π: fiber compatibility
/// ‖p^Y V_d − V_d p^X_d‖ plus multiplicativity
/// ‖(V_{s+t} p^X W^X − p^Y W^Y (V_s ⊗ V_t))(p^X_s ⊗ p^X_t)‖ over all degrees
/// and splits up to D (Frobenius norms, combined in quadrature).
double iso_residual(const SubproductSystem& x, const SubproductSystem& y, bool switched,
                    const ComplexMatrix& b, const ComplexMatrix& c);

/// Searches for a unitarily implemented isomorphism X → Y. Refuted only when
/// both branches fail the dimension test; a missing witness otherwise is
/// inconclusive. Throws when the truncation degrees differ.
IsoResult iso_search(const SubproductSystem& x, const SubproductSystem& y,
                     const IsoOptions& options = {});

}  // namespace spsys
