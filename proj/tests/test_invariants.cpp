#include "spsys/invariants.hpp"
#include "random_systems.hpp"
#include "test_util.hpp"

using namespace spsys;
using spsys::testing::random_relation;
using spsys::testing::random_system;
using spsys::testing::rng;

namespace {

SubproductSystem truncated_free(const CommutationRelation& cr, int D) {
  std::map<Degree, ComplexMatrix> proj;
  for (const Degree d : degrees_up_to(D)) {
    const auto k = static_cast<Eigen::Index>(fiber_dim(cr.m(), cr.n(), d));
    proj[d] = d.total() <= 1 ? ComplexMatrix(ComplexMatrix::Identity(k, k))
                             : ComplexMatrix(ComplexMatrix::Zero(k, k));
  }
  return {cr, D, proj};
}

CommutativePolynomial var(int m, int n, bool w, int k) {
  return CommutativePolynomial::variable(m, n, w, k);
}

ComplexVector vec(std::initializer_list<Complex> xs) {
  ComplexVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (Complex x : xs) v(k++) = x;
  return v;
}

// Partial derivative ∂^α p, computed symbolically.
CommutativePolynomial derivative(const CommutativePolynomial& p, std::size_t v) {
  CommutativePolynomial out(p.m(), p.n());
  for (const auto& [e, c] : p.terms()) {
    if (e[v] == 0) continue;
    auto f = e;
    --f[v];
    out.add_term(f, c * static_cast<double>(e[v]));
  }
  return out;
}

bool derivative_oracle(const CommutativePolynomial& p, const ComplexVector& pt, int k) {
  std::vector<CommutativePolynomial> layer{p};
  const double scale = p.max_abs_coefficient();
  for (int order = 0; order < k; ++order) {
    std::vector<CommutativePolynomial> next;
    for (const auto& q : layer) {
      if (std::abs(q.evaluate(pt)) > 1e-8 * scale) return false;
      for (std::size_t v = 0; v < pt.size(); ++v) next.push_back(derivative(q, v));
    }
    layer = std::move(next);
  }
  return true;
}

// Y = X transported by unitaries B on E and C on F, with u conjugated to match.
SubproductSystem transport(const SubproductSystem& x, const ComplexMatrix& b,
                           const ComplexMatrix& c) {
  const ComplexMatrix uy = kron(b, c) * x.relation().matrix() * kron(c, b).adjoint();
  const CommutationRelation cry(x.m(), x.n(), uy);
  std::map<Degree, ComplexMatrix> proj;
  for (const Degree d : degrees_up_to(x.truncation())) {
    ComplexMatrix v = identity(1);
    for (int k = 0; k < d.i; ++k) v = kron(v, b);
    for (int k = 0; k < d.j; ++k) v = kron(v, c);
    proj[d] = v * x.projection(d) * v.adjoint();
  }
  return {cry, x.truncation(), proj};
}

}  // namespace

TEST(TruncatedPolynomial, Arithmetic) {
  const TruncatedPolynomial a(3, {1.0, 2.0, 3.0});
  const TruncatedPolynomial b(3, {0.0, 1.0, 0.0});
  const auto p = a * b;
  EXPECT_EQ(p[0], Complex(0.0));
  EXPECT_EQ(p[1], Complex(1.0));
  EXPECT_EQ(p[2], Complex(2.0));
  EXPECT_EQ((b * b * b).max_abs(), 0.0);
  EXPECT_THROW(a + TruncatedPolynomial(2), Error);
}

TEST(Invariants, TruncatedFreeOneTwo) {
  const auto inv = compute_invariants(truncated_free(CommutationRelation::flip(1, 2), 4));
  EXPECT_EQ(inv.dim_sum, 3);
  EXPECT_EQ(inv.k_x, 2);
}

TEST(Invariants, FullFlipSystem) {
  const auto inv = compute_invariants(SubproductSystem::full(CommutationRelation::flip(2, 1), 3));
  EXPECT_EQ(inv.dim_sum, 3);
  EXPECT_FALSE(inv.k_x.has_value());
  EXPECT_EQ(inv.k_x_string(), ">=4");
}

TEST(Invariants, ScalarRelation) {
  const auto inv = compute_invariants(SubproductSystem::full(CommutationRelation::scalar(-1.0), 3));
  EXPECT_EQ(inv.dim_sum, 2);
  EXPECT_EQ(inv.k_x, 2);
}

TEST(Invariants, BasisChangeInvariance) {
  for (int trial = 0; trial < 10; ++trial) {
    const auto sps = random_system(4);
    const auto inv = compute_invariants(sps);
    // Rebuild every projection from a rotated orthonormal basis of its range.
    std::map<Degree, ComplexMatrix> proj;
    for (const Degree d : degrees_up_to(4)) {
      const ComplexMatrix b = sps.fiber_basis(d);
      const ComplexMatrix rot = b * random_unitary(static_cast<std::size_t>(b.cols()), rng());
      proj[d] = rot * rot.adjoint();
    }
    const auto again = compute_invariants(SubproductSystem(sps.relation(), 4, proj));
    EXPECT_EQ(again.dim_sum, inv.dim_sum);
    EXPECT_EQ(again.k_x, inv.k_x);
  }
}

TEST(Beta, Examples) {
  const auto sps = truncated_free(CommutationRelation::flip(2, 1), 3);
  const ComplexVector zeta = vec({2.0, 0.0, 0.0});
  const auto one = beta_homomorphism(sps, zeta, 2, NCPolynomial::constant(1.0));
  EXPECT_EQ(one[0], Complex(1.0));
  EXPECT_EQ(one[1], Complex(0.0));
  const auto z1 = beta_homomorphism(sps, zeta, 2, NCPolynomial::z(0));
  EXPECT_EQ(z1[0], Complex(0.0));
  EXPECT_EQ(z1[1], Complex(2.0));
  for (const auto& p : commutation_generators(sps.relation()))
    EXPECT_LE(beta_homomorphism(sps, random_vector(3, rng()), 2, p).max_abs(), 1e-12);
}

TEST(Beta, RefusesBeyondKx) {
  const auto sps = truncated_free(CommutationRelation::flip(2, 1), 3);
  EXPECT_THROW(beta_homomorphism(sps, random_vector(3, rng()), 3, NCPolynomial::z(0)), Error);
  const auto full = SubproductSystem::full(CommutationRelation::flip(1, 1), 3);
  EXPECT_NO_THROW(beta_homomorphism(full, random_vector(2, rng()), 4, NCPolynomial::z(0)));
  EXPECT_THROW(beta_homomorphism(full, random_vector(2, rng()), 5, NCPolynomial::z(0)), Error);
}

TEST(Beta, Multiplicative) {
  const auto sps = SubproductSystem::full(CommutationRelation::flip(1, 1), 4);
  const auto inv = compute_invariants(sps);
  for (int trial = 0; trial < 20; ++trial) {
    NCPolynomial t = NCPolynomial::constant(Complex(0.3, 1.0)) + NCPolynomial::z(0) * Complex(2.0) +
                     NCPolynomial::w(0) * NCPolynomial::z(0) * Complex(0, 1);
    NCPolynomial s = NCPolynomial::w(0) + NCPolynomial::constant(-1.0) +
                     NCPolynomial::z(0) * NCPolynomial::z(0) * NCPolynomial::w(0);
    const ComplexVector zeta = random_vector(2, rng());
    const auto lhs = beta_homomorphism(inv, zeta, 4, t * s);
    const auto rhs = beta_homomorphism(inv, zeta, 4, t) * beta_homomorphism(inv, zeta, 4, s);
    EXPECT_LE((lhs - rhs).max_abs(), 1e-9);
  }
}

TEST(RootMultiplicity, Examples) {
  const auto z = var(1, 0, false, 0);
  EXPECT_TRUE(root_multiplicity_at_least(z * z, vec({0.0}), 2));
  EXPECT_FALSE(root_multiplicity_at_least(z * z, vec({0.0}), 3));
  const auto zz = var(1, 1, false, 0), w = var(1, 1, true, 0);
  const auto p = (zz - w) * (zz - w) * (zz + CommutativePolynomial::constant(1, 1, 1.0));
  const Complex c(0.3, -0.7);
  EXPECT_TRUE(root_multiplicity_at_least(p, vec({c, c}), 2));
  EXPECT_TRUE(derivative_oracle(p, vec({c, c}), 2));
  EXPECT_FALSE(root_multiplicity_at_least(p, vec({c, c}), 3));
  EXPECT_FALSE(derivative_oracle(p, vec({c, c}), 3));
}

TEST(RootMultiplicity, MatchesSymbolicDerivatives) {
  std::uniform_int_distribution<int> kdist(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    // p = (linear form vanishing at pt)^a · (random quadratic) + noise of low order.
    const int m = 2, n = 1;
    const ComplexVector pt = random_vector(3, rng()) * 0.5;
    CommutativePolynomial lin(m, n);
    const ComplexVector a = random_vector(3, rng());
    for (int v = 0; v < 3; ++v) lin = lin + var(m, n, v >= m, v >= m ? v - m : v) * a(v);
    lin = lin - CommutativePolynomial::constant(m, n, (a.transpose() * pt)(0));
    CommutativePolynomial p = CommutativePolynomial::constant(m, n, 1.0);
    const int power = kdist(rng());
    for (int k = 0; k < power; ++k) p = p * lin;
    p = p * (var(m, n, false, 0) * var(m, n, true, 0) + CommutativePolynomial::constant(m, n, 2.0));
    const int k = kdist(rng());
    EXPECT_EQ(root_multiplicity_at_least(p, pt, k), derivative_oracle(p, pt, k));
    EXPECT_EQ(root_multiplicity_at_least(p, pt, k), k <= power);
  }
}

TEST(MultiEquivalence, Examples) {
  const auto z = var(1, 1, false, 0), w = var(1, 1, true, 0);
  EXPECT_TRUE(multi_equivalence_check(z * w, vec({0.0, 0.0}), 2, 10, rng()));
  EXPECT_TRUE(root_multiplicity_at_least(z * w, vec({0.0, 0.0}), 2));
  EXPECT_TRUE(multi_equivalence_check(z, vec({0.0, 0.0}), 2, 10, rng()));
  EXPECT_FALSE(root_multiplicity_at_least(z, vec({0.0, 0.0}), 2));
}

TEST(MultiEquivalence, RandomHomogeneousAtOrigin) {
  for (int trial = 0; trial < 20; ++trial) {
    CommutativePolynomial p(2, 1);
    std::uniform_int_distribution<int> deg(1, 3);
    const Degree d{deg(rng()), deg(rng()) - 1};
    for (const auto& e : monomials_of_bidegree(2, 1, d)) p.add_term(e, random_vector(1, rng())(0));
    const int k = d.total();
    EXPECT_TRUE(multi_equivalence_check(p, ComplexVector::Zero(3), k, 5, rng()));
    EXPECT_TRUE(root_multiplicity_at_least(p, ComplexVector::Zero(3), k));
    EXPECT_FALSE(root_multiplicity_at_least(p, ComplexVector::Zero(3), k + 1));
  }
}

TEST(VacuumImage, Examples) {
  const auto z = var(1, 1, false, 0), w = var(1, 1, true, 0);
  const std::vector<CommutativePolynomial> gens{z * w};
  const PolyballPoint origin{vec({0.0}), vec({0.0})};
  EXPECT_TRUE(vacuum_image_constraint(gens, origin, 2));
  EXPECT_FALSE(vacuum_image_constraint(gens, {vec({0.5}), vec({0.0})}, 2));
  EXPECT_TRUE(vacuum_image_constraint(gens, {vec({0.5}), vec({0.0})}, 1));
  EXPECT_TRUE(vacuum_image_constraint({}, {vec({0.9}), vec({0.3})}, 3));
}

TEST(IsoSearch, SelfIsomorphism) {
  const auto sps = random_system(3);
  const auto r = iso_search(sps, sps, {.tol = 1e-6, .restarts = 2, .iterations = 20, .seed = 1});
  ASSERT_EQ(r.outcome, IsoResult::Outcome::kWitness);
  EXPECT_FALSE(r.witness->switched);
  EXPECT_LT(r.witness->residual, 1e-12);
}

TEST(IsoSearch, SwitchWitnessAndDimensionRefutation) {
  const auto x12 = truncated_free(CommutationRelation::flip(1, 2), 4);
  const auto x21 = truncated_free(CommutationRelation::flip(2, 1), 4);
  const auto x30 = truncated_free(CommutationRelation::flip(3, 0), 4);
  const auto r = iso_search(x12, x21);
  ASSERT_EQ(r.outcome, IsoResult::Outcome::kWitness);
  EXPECT_TRUE(r.witness->switched);
  EXPECT_LT(r.witness->residual, 1e-9);
  EXPECT_TRUE(is_unitary(r.witness->b, 1e-10));
  EXPECT_TRUE(is_unitary(r.witness->c, 1e-10));
  const auto refuted = iso_search(x12, x30);
  EXPECT_EQ(refuted.outcome, IsoResult::Outcome::kRefuted);
  ASSERT_EQ(refuted.branches.size(), 2u);
  EXPECT_TRUE(refuted.branches[0].refuted && refuted.branches[1].refuted);
  EXPECT_THROW(iso_search(x12, truncated_free(CommutationRelation::flip(2, 1), 3)), Error);
}

TEST(IsoSearch, DistinctScalarRelationsNotMatched) {
  const auto x = SubproductSystem::full(CommutationRelation::scalar(1.0), 3);
  const auto y = SubproductSystem::full(CommutationRelation::scalar(Complex(0.0, 1.0)), 3);
  const auto r = iso_search(x, y, {.tol = 1e-6, .restarts = 5, .iterations = 50, .seed = 3});
  EXPECT_EQ(r.outcome, IsoResult::Outcome::kInconclusive);
  EXPECT_NE(compute_invariants(x).k_x, compute_invariants(y).k_x);
}

TEST(IsoSearch, FindsHiddenUnitaryConjugate) {
  const auto x = maximal_completion(random_relation(2, 2), {}, 3);
  const ComplexMatrix b = random_unitary(2, rng());
  const ComplexMatrix c = random_unitary(2, rng());
  const auto y = transport(x, b, c);
  EXPECT_LT(iso_residual(x, y, false, b, c), 1e-10);
  const auto r = iso_search(x, y, {.tol = 1e-6, .restarts = 20, .iterations = 200, .seed = 7});
  ASSERT_EQ(r.outcome, IsoResult::Outcome::kWitness);
  EXPECT_LT(r.witness->residual, 1e-6);
}

TEST(IsoSearch, WitnessImpliesEqualInvariants) {
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = random_system(3);
    const auto y = transport(x, random_unitary(static_cast<std::size_t>(x.m()), rng()),
                             random_unitary(static_cast<std::size_t>(x.n()), rng()));
    const auto r = iso_search(x, y, {.tol = 1e-6, .restarts = 20, .iterations = 200, .seed = 1});
    ASSERT_EQ(r.outcome, IsoResult::Outcome::kWitness);
    const auto a = compute_invariants(x);
    const auto b = compute_invariants(y);
    EXPECT_EQ(a.dim_sum, b.dim_sum);
    EXPECT_EQ(a.k_x, b.k_x);
  }
}
