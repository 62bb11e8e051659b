#pragma once

#include "spsys/commutation.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace spsys {

/// A downward-closed set of degrees.
using StaircaseSet = std::set<Degree>;

bool is_downward_closed(const StaircaseSet& degrees);

/// All degrees with i + j ≤ D, ordered by total degree, then by i descending.
std::vector<Degree> degrees_up_to(int truncation);

/// A standard subproduct system truncated at total degree D: a commutation
/// relation plus projections p_{(i,j)} on E^{⊗i} ⊗ F^{⊗j} for every i + j ≤ D.
/// Statements about a system are statements about this D-jet.
class SubproductSystem {
 public:
  SubproductSystem(CommutationRelation cr, int truncation,
                   std::map<Degree, ComplexMatrix> projections);

  /// The product system: every fiber is the full tensor space.
  static SubproductSystem full(const CommutationRelation& cr, int truncation);

  const CommutationRelation& relation() const { return cr_; }
  int m() const { return cr_.m(); }
  int n() const { return cr_.n(); }
  int truncation() const { return truncation_; }

  bool contains(Degree d) const;
  const ComplexMatrix& projection(Degree d) const;
  const std::map<Degree, ComplexMatrix>& projections() const { return proj_; }

  /// Orthonormal basis (columns) of X(i,j); see range_basis.
  ComplexMatrix fiber_basis(Degree d) const;
  /// Orthonormal basis of E^{⊗i} ⊗ F^{⊗j} ⊖ X(i,j).
  ComplexMatrix complement_basis(Degree d) const;

  /// Copy with one fiber replaced.
  SubproductSystem with_projection(Degree d, ComplexMatrix p) const;

 private:
  CommutationRelation cr_;
  int truncation_;
  std::map<Degree, ComplexMatrix> proj_;
};

/// W (p_a ⊗ p_b) W*, the image of X(a) ⊗ X(b) in degree a + b.
ComplexMatrix product_projection(const CommutationRelation& cr, Degree a,
                                 const ComplexMatrix& pa, Degree b, const ComplexMatrix& pb);

struct Violation {
  enum class Kind { kShape, kNotProjection, kStandardness, kLeftInequality, kRightInequality };
  Kind kind;
  Degree degree;
  Degree left;   // split degree.left + degree.right == degree; unset for non-split kinds
  Degree right;
  double defect = 0.0;
  std::string message;
};

std::string to_string(Violation::Kind kind);

struct ValidationReport {
  int truncation = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks standardness, projection-ness, and for every split (a)+(b) of every
/// degree both p ≤ W(p_a ⊗ I)W* and p ≤ W(I ⊗ p_b)W*. Never throws on bad data.
ValidationReport validate(const SubproductSystem& sps, double tol = kDefaultRankTol);

/// Same checks restricted to the given degrees (used for partial data).
ValidationReport validate_partial(const CommutationRelation& cr,
                                  const std::map<Degree, ComplexMatrix>& partial,
                                  double tol = kDefaultRankTol);

/// The maximal standard subproduct system agreeing with `partial` on its
/// staircase L = keys(partial) ∪ {(0,0),(1,0),(0,1)}. Degrees outside L are
/// filled in order of total degree with the meet over all proper splits of
/// W(p_a ⊗ p_b)W*. Throws if L is not downward closed or the partial data
/// violates the projection inequalities.
SubproductSystem maximal_completion(const CommutationRelation& cr,
                                    const std::map<Degree, ComplexMatrix>& partial,
                                    int truncation, double tol = kDefaultRankTol);

/// The meet over proper splits at `d`, computed from the fibers of `sps`.
ComplexMatrix split_meet(const SubproductSystem& sps, Degree d, double tol = kDefaultRankTol);

/// True iff X(d) equals the intersection over proper splits of W(X(a) ⊗ X(b)).
/// `d` must lie outside L.
bool fiber_formula_check(const SubproductSystem& sps, Degree d, const StaircaseSet& staircase,
                         double tol = kDefaultRankTol);

/// Joins two one-variable systems along the axes: row[i] = p_{(i,0)},
/// col[j] = p_{(0,j)} (index 0 is the scalar fiber) and completes maximally.
/// Axis degrees beyond the supplied lists are completed as well.
SubproductSystem adjoin_over_n(const std::vector<ComplexMatrix>& row,
                               const std::vector<ComplexMatrix>& col,
                               const CommutationRelation& cr, int truncation,
                               double tol = kDefaultRankTol);

std::map<Degree, std::size_t> dimension_profile(const SubproductSystem& sps);

}  // namespace spsys
