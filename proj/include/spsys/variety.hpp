#pragma once

#include "spsys/commutative_polynomial.hpp"
#include "spsys/subproduct.hpp"

#include <random>
#include <vector>

namespace spsys {

/// Default absolute tolerance for |g(pt)| and the ball radii.
inline constexpr double kDefaultMemberTol = 1e-8;

/// A point (z, w) ∈ C^m × C^n.
struct PolyballPoint {
  ComplexVector z;
  ComplexVector w;

  /// (z_1..z_m, w_1..w_n) as one vector, the layout CommutativePolynomial expects.
  ComplexVector joined() const;
};

/// q^x = Σ_word x_word z_{s_1}⋯z_{s_i} w_{t_1}⋯w_{t_j} for x ∈ E^{⊗i} ⊗ F^{⊗j}.
CommutativePolynomial qx_polynomial(int m, int n, Degree d, const ComplexVector& x);

/// Generators of the commutative ideal J_X up to the truncation degree: the
/// abelianized P_{i,j} and q^x for an orthonormal basis x of every complement
/// fiber. Zero polynomials are dropped, and within each bidegree a candidate
/// is kept only if it is not already a combination of monomial multiples of
/// the generators kept so far.
std::vector<CommutativePolynomial> variety_generators(const SubproductSystem& sps,
                                                      double tol = kDefaultRankTol);

double polyball_norm(const PolyballPoint& pt);

/// ‖z‖ ≤ 1 + tol, ‖w‖ ≤ 1 + tol and |g(pt)| ≤ tol for every generator g
/// rescaled to unit largest coefficient.
bool polyball_membership(const PolyballPoint& pt, const std::vector<CommutativePolynomial>& gens,
                         double tol = kDefaultMemberTol);

struct CharacterValue {
  Complex value;
  /// The point fails polyball_membership; the value is then only a formal
  /// evaluation of q^x, not a character of the tensor algebra.
  bool outside_variety = false;
};

/// α_{(z,w)}(L_x) = q^x(z, w) for x ∈ X(d).
CharacterValue character_eval(const SubproductSystem& sps, const PolyballPoint& pt, Degree d,
                              const ComplexVector& x, double tol = kDefaultMemberTol);

/// (w = 0 and ‖z‖ ≤ 1) or (z = 0 and ‖w‖ ≤ 1), up to tol.
bool in_c_set(const PolyballPoint& pt, double tol = kDefaultMemberTol);

/// Every generator has bidegree (a, b) with a > 0 and b > 0.
bool is_good(const std::vector<CommutativePolynomial>& gens);
bool is_good(const SubproductSystem& sps, double tol = kDefaultRankTol);

/// Uniform sample of the product of the closed unit balls of C^m and C^n.
PolyballPoint sample_polyball(int m, int n, std::mt19937_64& rng);

/// Uniform sample of the cross C^{m,n}: a point of one ball, zero in the other.
PolyballPoint sample_c_set(int m, int n, std::mt19937_64& rng);

/// Sampled check that C^{m,n} lies in the variety; agrees with is_good.
bool c_set_contained(const std::vector<CommutativePolynomial>& gens, int m, int n,
                     int samples, std::mt19937_64& rng, double tol = kDefaultMemberTol);

}  // namespace spsys
