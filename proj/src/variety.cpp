#include "spsys/variety.hpp"

#include "spsys/ncpoly.hpp"

#include <cmath>

namespace spsys {

ComplexVector PolyballPoint::joined() const {
  ComplexVector out(z.size() + w.size());
  out << z, w;
  return out;
}

CommutativePolynomial qx_polynomial(int m, int n, Degree d, const ComplexVector& x) {
  if (static_cast<std::size_t>(x.size()) != fiber_dim(m, n, d))
    throw Error("q^x: vector length does not match degree " + to_string(d));
  CommutativePolynomial q(m, n);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x(k) == Complex(0.0)) continue;
    const TensorIndex t = TensorIndex::from_flat(m, n, d, static_cast<std::size_t>(k));
    CommutativePolynomial::Exponents e(static_cast<std::size_t>(m + n), 0);
    for (int p = 0; p < d.total(); ++p) {
      const int letter = t.word[static_cast<std::size_t>(p)];
      ++e[static_cast<std::size_t>(p < d.i ? letter : m + letter)];
    }
    q.add_term(e, x(k));
  }
  return q;
}

namespace {

ComplexVector coefficient_vector(const CommutativePolynomial& p,
                                 const std::vector<CommutativePolynomial::Exponents>& basis) {
  ComplexVector v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) v(static_cast<Eigen::Index>(k)) = p.coefficient(basis[k]);
  return v;
}

// Incrementally maintained orthonormal basis of a subspace of polynomials of
// one bidegree, in monomial coordinates.
class DegreeSpan {
 public:
  explicit DegreeSpan(std::vector<CommutativePolynomial::Exponents> monomials)
      : monomials_(std::move(monomials)) {}

  /// Adds p; returns true iff it enlarged the span (relative residual > tol).
  bool add(const CommutativePolynomial& p, double tol) {
    ComplexVector v = coefficient_vector(p, monomials_);
    const double norm = v.norm();
    if (norm == 0.0) return false;
    v /= norm;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis_) v -= b * b.dot(v);
    const double r = v.norm();
    if (r <= tol) return false;
    basis_.push_back(v / r);
    return true;
  }

 private:
  std::vector<CommutativePolynomial::Exponents> monomials_;
  std::vector<ComplexVector> basis_;
};

CommutativePolynomial monomial(int m, int n, const CommutativePolynomial::Exponents& e) {
  CommutativePolynomial p(m, n);
  p.add_term(e, 1.0);
  return p;
}

}  // namespace

std::vector<CommutativePolynomial> variety_generators(const SubproductSystem& sps, double tol) {
  const int m = sps.m(), n = sps.n();
  std::map<Degree, std::vector<CommutativePolynomial>> candidates;
  for (const NCPolynomial& p : commutation_generators(sps.relation()))
    candidates[{1, 1}].push_back(abelianize(p, m, n));
  for (const Degree d : degrees_up_to(sps.truncation())) {
    const ComplexMatrix basis = sps.complement_basis(d);
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
      candidates[d].push_back(qx_polynomial(m, n, d, basis.col(c)));
  }

  std::vector<CommutativePolynomial> kept;
  for (const Degree d : degrees_up_to(std::max(sps.truncation(), 2))) {
    auto it = candidates.find(d);
    if (it == candidates.end()) continue;
    DegreeSpan span(monomials_of_bidegree(m, n, d));
    for (const CommutativePolynomial& g : kept) {
      const Degree dg = *g.bidegree();
      if (!dg.dominated_by(d)) continue;
      for (const auto& e : monomials_of_bidegree(m, n, d - dg)) span.add(g * monomial(m, n, e), tol);
    }
    for (const CommutativePolynomial& q : it->second) {
      const double scale = q.max_abs_coefficient();
      if (scale <= tol) continue;
      const CommutativePolynomial clean = q.pruned(scale * 1e-12);
      if (span.add(clean, tol)) kept.push_back(clean);
    }
  }
  return kept;
}

double polyball_norm(const PolyballPoint& pt) { return std::max(pt.z.norm(), pt.w.norm()); }

bool polyball_membership(const PolyballPoint& pt, const std::vector<CommutativePolynomial>& gens,
                         double tol) {
  if (pt.z.norm() > 1.0 + tol || pt.w.norm() > 1.0 + tol) return false;
  const ComplexVector x = pt.joined();
  for (const auto& g : gens)
    if (std::abs(g.normalized().evaluate(x)) > tol) return false;
  return true;
}

CharacterValue character_eval(const SubproductSystem& sps, const PolyballPoint& pt, Degree d,
                              const ComplexVector& x, double tol) {
  if (pt.z.size() != sps.m() || pt.w.size() != sps.n())
    throw Error("character_eval: point has the wrong dimensions");
  CharacterValue out;
  out.value = qx_polynomial(sps.m(), sps.n(), d, x).evaluate(pt.joined());
  out.outside_variety = !polyball_membership(pt, variety_generators(sps), tol);
  return out;
}

bool in_c_set(const PolyballPoint& pt, double tol) {
  return (pt.w.norm() <= tol && pt.z.norm() <= 1.0 + tol) ||
         (pt.z.norm() <= tol && pt.w.norm() <= 1.0 + tol);
}

bool is_good(const std::vector<CommutativePolynomial>& gens) {
  for (const auto& g : gens) {
    const auto d = g.bidegree();
    if (!d) throw Error("is_good: generator is not bihomogeneous");
    if (d->i == 0 || d->j == 0) return false;
  }
  return true;
}

bool is_good(const SubproductSystem& sps, double tol) {
  return is_good(variety_generators(sps, tol));
}

namespace {

// Uniform point of the closed unit ball of C^dim (real dimension 2·dim).
ComplexVector ball_sample(int dim, std::mt19937_64& rng) {
  if (dim == 0) return {};
  ComplexVector v = random_vector(static_cast<std::size_t>(dim), rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double radius = std::pow(unit(rng), 1.0 / (2.0 * dim));
  return v * (radius / v.norm());
}

}  // namespace

PolyballPoint sample_polyball(int m, int n, std::mt19937_64& rng) {
  PolyballPoint pt;
  pt.z = ball_sample(m, rng);
  pt.w = ball_sample(n, rng);
  return pt;
}

PolyballPoint sample_c_set(int m, int n, std::mt19937_64& rng) {
  std::bernoulli_distribution pick_z(0.5);
  PolyballPoint pt{ComplexVector::Zero(m), ComplexVector::Zero(n)};
  if ((pick_z(rng) && m > 0) || n == 0)
    pt.z = ball_sample(m, rng);
  else
    pt.w = ball_sample(n, rng);
  return pt;
}

bool c_set_contained(const std::vector<CommutativePolynomial>& gens, int m, int n, int samples,
                     std::mt19937_64& rng, double tol) {
  for (int k = 0; k < samples; ++k)
    if (!polyball_membership(sample_c_set(m, n, rng), gens, tol)) return false;
  return true;
}

}  // namespace spsys
