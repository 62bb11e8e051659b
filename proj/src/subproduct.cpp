#include "spsys/subproduct.hpp"

#include <algorithm>

namespace spsys {

namespace {

constexpr double kSubspaceTol = 1e-7;

bool is_standard_degree(Degree d) { return d.total() <= 1; }

ComplexMatrix standard_projection(const CommutationRelation& cr, Degree d) {
  return identity(fiber_dim(cr.m(), cr.n(), d));
}

std::vector<std::pair<Degree, Degree>> proper_splits(Degree d) {
  std::vector<std::pair<Degree, Degree>> out;
  for (int a = 0; a <= d.i; ++a)
    for (int b = 0; b <= d.j; ++b) {
      const Degree left{a, b};
      const Degree right = d - left;
      if (left.total() == 0 || right.total() == 0) continue;
      out.emplace_back(left, right);
    }
  return out;
}

void check_degrees(const std::map<Degree, ComplexMatrix>& proj, const CommutationRelation& cr,
                   std::vector<Violation>& out, double tol) {
  for (const auto& [d, p] : proj) {
    const auto dim = static_cast<Eigen::Index>(fiber_dim(cr.m(), cr.n(), d));
    if (p.rows() != dim || p.cols() != dim) {
      out.push_back({Violation::Kind::kShape, d, {}, {}, 0.0,
                     "p" + to_string(d) + " must be " + std::to_string(dim) + "x" +
                         std::to_string(dim)});
      continue;
    }
    if (!is_projection(p, tol)) {
      const double defect = std::max(max_abs(p - p.adjoint()), max_abs(p * p - p));
      out.push_back({Violation::Kind::kNotProjection, d, {}, {}, defect,
                     "p" + to_string(d) + " is not an orthogonal projection"});
      continue;
    }
    if (is_standard_degree(d)) {
      const double defect = max_abs(p - standard_projection(cr, d));
      if (defect > tol)
        out.push_back({Violation::Kind::kStandardness, d, {}, {}, defect,
                       "p" + to_string(d) + " must be the identity"});
    }
  }
}

bool well_formed(const std::map<Degree, ComplexMatrix>& proj, const CommutationRelation& cr,
                 Degree d, double tol) {
  auto it = proj.find(d);
  if (it == proj.end()) return false;
  const auto dim = static_cast<Eigen::Index>(fiber_dim(cr.m(), cr.n(), d));
  return it->second.rows() == dim && it->second.cols() == dim && is_projection(it->second, tol);
}

void check_inequalities(const std::map<Degree, ComplexMatrix>& proj,
                        const CommutationRelation& cr, std::vector<Violation>& out,
                        double tol) {
  for (const auto& [d, p] : proj) {
    if (!well_formed(proj, cr, d, tol)) continue;
    for (const auto& [a, b] : proper_splits(d)) {
      if (!well_formed(proj, cr, a, tol) || !well_formed(proj, cr, b, tol)) continue;
      const ComplexMatrix ia = identity(fiber_dim(cr.m(), cr.n(), a));
      const ComplexMatrix ib = identity(fiber_dim(cr.m(), cr.n(), b));
      const ComplexMatrix left = product_projection(cr, a, proj.at(a), b, ib);
      const ComplexMatrix right = product_projection(cr, a, ia, b, proj.at(b));
      const double dl = max_abs(p * left * p - p);
      const double dr = max_abs(p * right * p - p);
      if (dl > tol)
        out.push_back({Violation::Kind::kLeftInequality, d, a, b, dl,
                       "p" + to_string(d) + " not below W(p" + to_string(a) + " ⊗ I)W*"});
      if (dr > tol)
        out.push_back({Violation::Kind::kRightInequality, d, a, b, dr,
                       "p" + to_string(d) + " not below W(I ⊗ p" + to_string(b) + ")W*"});
    }
  }
}

}  // namespace

bool is_downward_closed(const StaircaseSet& degrees) {
  for (const Degree d : degrees) {
    if (d.i < 0 || d.j < 0) return false;
    if (d.i > 0 && !degrees.contains(Degree{d.i - 1, d.j})) return false;
    if (d.j > 0 && !degrees.contains(Degree{d.i, d.j - 1})) return false;
  }
  return true;
}

std::vector<Degree> degrees_up_to(int truncation) {
  std::vector<Degree> out;
  for (int t = 0; t <= truncation; ++t)
    for (int i = t; i >= 0; --i) out.push_back({i, t - i});
  return out;
}

SubproductSystem::SubproductSystem(CommutationRelation cr, int truncation,
                                   std::map<Degree, ComplexMatrix> projections)
    : cr_(std::move(cr)), truncation_(truncation), proj_(std::move(projections)) {
  if (truncation < 0) throw Error("subproduct system: negative truncation degree");
  for (const Degree d : degrees_up_to(truncation)) {
    auto it = proj_.find(d);
    if (it == proj_.end()) throw Error("subproduct system: missing fiber " + to_string(d));
    const auto dim = static_cast<Eigen::Index>(fiber_dim(cr_.m(), cr_.n(), d));
    if (it->second.rows() != dim || it->second.cols() != dim)
      throw Error("subproduct system: p" + to_string(d) + " must be " + std::to_string(dim) +
                  "x" + std::to_string(dim));
  }
  for (const auto& [d, p] : proj_)
    if (d.i < 0 || d.j < 0 || d.total() > truncation)
      throw Error("subproduct system: fiber " + to_string(d) + " outside truncation");
}

SubproductSystem SubproductSystem::full(const CommutationRelation& cr, int truncation) {
  std::map<Degree, ComplexMatrix> proj;
  for (const Degree d : degrees_up_to(truncation)) proj[d] = standard_projection(cr, d);
  return {cr, truncation, std::move(proj)};
}

bool SubproductSystem::contains(Degree d) const { return proj_.contains(d); }

const ComplexMatrix& SubproductSystem::projection(Degree d) const {
  auto it = proj_.find(d);
  if (it == proj_.end())
    throw Error("degree " + to_string(d) + " is beyond the truncation degree " +
                std::to_string(truncation_));
  return it->second;
}

ComplexMatrix SubproductSystem::fiber_basis(Degree d) const {
  return range_basis(projection(d));
}

ComplexMatrix SubproductSystem::complement_basis(Degree d) const {
  const ComplexMatrix& p = projection(d);
  return range_basis(identity(static_cast<std::size_t>(p.rows())) - p);
}

SubproductSystem SubproductSystem::with_projection(Degree d, ComplexMatrix p) const {
  auto proj = proj_;
  if (!proj.contains(d)) throw Error("with_projection: degree " + to_string(d) + " not present");
  proj[d] = std::move(p);
  return {cr_, truncation_, std::move(proj)};
}

ComplexMatrix product_projection(const CommutationRelation& cr, Degree a,
                                 const ComplexMatrix& pa, Degree b, const ComplexMatrix& pb) {
  ComplexMatrix t = kron(pa, pb);
  if (a.j == 0 || b.i == 0) return t;
  const ComplexMatrix& w = big_w(cr, a, b);
  return w * t * w.adjoint();
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kShape: return "shape";
    case Violation::Kind::kNotProjection: return "not-projection";
    case Violation::Kind::kStandardness: return "standardness";
    case Violation::Kind::kLeftInequality: return "left-inequality";
    case Violation::Kind::kRightInequality: return "right-inequality";
  }
  return "unknown";
}

ValidationReport validate(const SubproductSystem& sps, double tol) {
  ValidationReport report;
  report.truncation = sps.truncation();
  check_degrees(sps.projections(), sps.relation(), report.violations, tol);
  check_inequalities(sps.projections(), sps.relation(), report.violations, tol);
  return report;
}

ValidationReport validate_partial(const CommutationRelation& cr,
                                  const std::map<Degree, ComplexMatrix>& partial, double tol) {
  ValidationReport report;
  int top = 0;
  for (const auto& [d, p] : partial) top = std::max(top, d.total());
  report.truncation = top;
  check_degrees(partial, cr, report.violations, tol);
  check_inequalities(partial, cr, report.violations, tol);
  return report;
}

SubproductSystem maximal_completion(const CommutationRelation& cr,
                                    const std::map<Degree, ComplexMatrix>& partial,
                                    int truncation, double tol) {
  if (truncation < 0) throw Error("completion: negative truncation degree");
  std::map<Degree, ComplexMatrix> proj;
  StaircaseSet staircase;
  for (const auto& [d, p] : partial) {
    if (d.i < 0 || d.j < 0) throw Error("completion: negative degree " + to_string(d));
    if (d.total() > truncation) continue;
    proj[d] = p;
    staircase.insert(d);
  }
  for (const Degree d : {Degree{0, 0}, Degree{1, 0}, Degree{0, 1}}) {
    if (d.total() > truncation) continue;
    if (!proj.contains(d)) proj[d] = standard_projection(cr, d);
    staircase.insert(d);
  }
  if (!is_downward_closed(staircase))
    throw Error("completion: the given degrees are not downward closed");
  const ValidationReport report = validate_partial(cr, proj, tol);
  if (!report.ok())
    throw Error("completion: partial data invalid at " + to_string(report.violations.front().degree) +
                ": " + report.violations.front().message);
  for (const Degree d : degrees_up_to(truncation)) {
    if (staircase.contains(d)) continue;
    std::vector<ComplexMatrix> parts;
    for (const auto& [a, b] : proper_splits(d))
      parts.push_back(product_projection(cr, a, proj.at(a), b, proj.at(b)));
    proj[d] = meet_projections(parts, tol);
  }
  return {cr, truncation, std::move(proj)};
}

ComplexMatrix split_meet(const SubproductSystem& sps, Degree d, double tol) {
  const auto splits = proper_splits(d);
  if (splits.empty()) return identity(fiber_dim(sps.m(), sps.n(), d));
  std::vector<ComplexMatrix> parts;
  for (const auto& [a, b] : splits)
    parts.push_back(
        product_projection(sps.relation(), a, sps.projection(a), b, sps.projection(b)));
  return meet_projections(parts, tol);
}

bool fiber_formula_check(const SubproductSystem& sps, Degree d, const StaircaseSet& staircase,
                         double tol) {
  if (staircase.contains(d)) throw Error("fiber_formula_check: degree lies in the staircase");
  const ComplexMatrix& p = sps.projection(d);
  const ComplexMatrix q = split_meet(sps, d, tol);
  return projection_rank(p) == projection_rank(q) && projection_leq(p, q, kSubspaceTol);
}

SubproductSystem adjoin_over_n(const std::vector<ComplexMatrix>& row,
                               const std::vector<ComplexMatrix>& col,
                               const CommutationRelation& cr, int truncation, double tol) {
  std::map<Degree, ComplexMatrix> partial;
  for (std::size_t i = 0; i < row.size(); ++i)
    partial[{static_cast<int>(i), 0}] = row[i];
  for (std::size_t j = 0; j < col.size(); ++j) {
    const Degree d{0, static_cast<int>(j)};
    if (j == 0 && partial.contains(d) && max_abs(partial[d] - col[0]) > tol)
      throw Error("adjoin: the two axes disagree at (0,0)");
    partial[d] = col[j];
  }
  return maximal_completion(cr, partial, truncation, tol);
}

std::map<Degree, std::size_t> dimension_profile(const SubproductSystem& sps) {
  std::map<Degree, std::size_t> out;
  for (const auto& [d, p] : sps.projections()) out[d] = projection_rank(p);
  return out;
}

}  // namespace spsys
