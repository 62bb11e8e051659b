#pragma once

#include "spsys/commutative_polynomial.hpp"
#include "spsys/subproduct.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spsys {

/// z_{index+1} or w_{index+1}; indices are 0-based.
struct Letter {
  enum class Kind { kZ, kW };
  Kind kind;
  int index;
  auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

/// Letter counts (#z, #w).
Degree word_degree(const Word& w);
/// "z1w2z1"; the empty word is "".
std::string word_to_string(const Word& w);
/// Parses tokens z<k>/w<k> (1-based); validates against m and n.
Word parse_word(const std::string& s, int m, int n);

/// Element of C<z_1..z_m, w_1..w_n>. Zero coefficients are never stored.
class NCPolynomial {
 public:
  NCPolynomial() = default;

  static NCPolynomial constant(Complex c);
  static NCPolynomial monomial(Word w, Complex c = 1.0);
  static NCPolynomial z(int index);
  static NCPolynomial w(int index);

  const std::map<Word, Complex>& terms() const { return terms_; }
  void add_term(const Word& w, Complex c);
  Complex coefficient(const Word& w) const;
  bool is_zero() const { return terms_.empty(); }
  double coefficient_norm() const;

  NCPolynomial operator+(const NCPolynomial& o) const;
  NCPolynomial operator-(const NCPolynomial& o) const;
  NCPolynomial operator*(const NCPolynomial& o) const;
  NCPolynomial operator*(Complex s) const;

  std::string to_string() const;

 private:
  std::map<Word, Complex> terms_;
};

/// Homogeneous pieces of a vector in the algebraic Fock space, keyed by degree.
using GradedVector = std::map<Degree, ComplexVector>;

/// Φ: each word is evaluated as the algebraic-Fock product of its letters
/// (z_i ↦ e_i, w_j ↦ f_j), then extended linearly.
GradedVector phi_map(const NCPolynomial& p, const CommutationRelation& cr);

/// Ψ: e_{s_1}⊗…⊗f_{t_j} ↦ z_{s_1}…w_{t_j}, extended linearly.
NCPolynomial psi_map(const GradedVector& x, int m, int n);

/// P_{i,j} = w_j z_i − Σ_{k,l} u_{(k,l),(i,j)} z_k w_l, ordered by (i, j).
std::vector<NCPolynomial> commutation_generators(const CommutationRelation& cr);

/// The commutative image: letters sorted, coefficients combined.
CommutativePolynomial abelianize(const NCPolynomial& p, int m, int n);

/// The common letter counts (#z, #w) of all monomials; absent when they
/// differ or when p = 0.
std::optional<Degree> is_homogeneous(const NCPolynomial& p);

struct IdealSystem {
  SubproductSystem system;
  /// True when some P_{i,j} is not in the span of the supplied generators,
  /// i.e. the ideal used is larger than the one generated by the input.
  bool commutation_generators_added = false;
};

/// The subproduct system whose fiber X(i,j) is the orthogonal complement of
/// Φ of the (i,j)-component of the ideal generated by `generators` and the
/// P_{i,j}. Throws on non-homogeneous generators, an improper ideal, and
/// ideals meeting degree (1,0) or (0,1) (which would break standardness).
IdealSystem ideal_to_subproduct(const std::vector<NCPolynomial>& generators,
                                const CommutationRelation& cr, int truncation,
                                double tol = kDefaultRankTol);

/// Orthonormal basis (columns) of Φ(ideal)_(i,j) for every degree up to D.
std::map<Degree, ComplexMatrix> ideal_components(const std::vector<NCPolynomial>& generators,
                                                 const CommutationRelation& cr, int truncation,
                                                 double tol = kDefaultRankTol);

/// The P_{i,j} followed by Ψ of an orthonormal basis of each complement
/// E^{⊗i} ⊗ F^{⊗j} ⊖ X(i,j).
std::vector<NCPolynomial> subproduct_to_ideal(const SubproductSystem& sps);

}  // namespace spsys
