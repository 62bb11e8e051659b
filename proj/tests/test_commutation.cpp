#include "spsys/commutation.hpp"
#include "test_util.hpp"

#include <map>
#include <vector>

using namespace spsys;
using spsys::testing::matrices_near;
using spsys::testing::rng;

namespace {

// A mixed word: letters tagged E (false) or F (true).
struct Letter {
  bool is_f;
  int index;
  auto operator<=>(const Letter&) const = default;
};
using Word = std::vector<Letter>;
using Vec = std::map<Word, Complex>;

// Replace the adjacent pair (f_j, e_i) at positions (pos, pos+1) by u(f_j ⊗ e_i).
Vec swap_at(const CommutationRelation& cr, const Vec& v, std::size_t pos) {
  Vec out;
  for (const auto& [w, c] : v) {
    EXPECT_TRUE(w[pos].is_f && !w[pos + 1].is_f);
    const int j = w[pos].index, i = w[pos + 1].index;
    for (int k = 0; k < cr.m(); ++k)
      for (int l = 0; l < cr.n(); ++l) {
        Word nw = w;
        nw[pos] = {false, k};
        nw[pos + 1] = {true, l};
        out[nw] += cr.coefficient(k, l, i, j) * c;
      }
  }
  return out;
}

// Naive lift: starting from F^q ⊗ E^p, push the last F through all E's, then
// the one before it, and so on.
Vec naive_lift(const CommutationRelation& cr, Vec v, int q, int p) {
  for (int f = q - 1; f >= 0; --f)
    for (int s = 0; s < p; ++s) v = swap_at(cr, v, static_cast<std::size_t>(f + s));
  return v;
}

ComplexMatrix naive_lift_matrix(const CommutationRelation& cr, int q, int p) {
  const int m = cr.m(), n = cr.n();
  // Source basis F^q ⊗ E^p, row-major with F letters first.
  const std::size_t dim = ipow(n, q) * ipow(m, p);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                          static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    // Source letters: reuse TensorIndex with the roles of m and n swapped.
    const TensorIndex src = TensorIndex::from_flat(n, m, {q, p}, col);
    Word w;
    for (int k = 0; k < q; ++k) w.push_back({true, src.word[static_cast<std::size_t>(k)]});
    for (int k = 0; k < p; ++k) w.push_back({false, src.word[static_cast<std::size_t>(q + k)]});
    const Vec image = naive_lift(cr, Vec{{w, 1.0}}, q, p);
    for (const auto& [iw, c] : image) {
      TensorIndex t{{p, q}, {}};
      for (const auto& l : iw) t.word.push_back(l.index);
      out(static_cast<Eigen::Index>(t.flat(m, n)), static_cast<Eigen::Index>(col)) += c;
    }
  }
  return out;
}

CommutationRelation random_relation(int m, int n) {
  return {m, n, random_unitary(static_cast<std::size_t>(m * n), rng())};
}

ComplexVector random_fiber_vector(int m, int n, Degree d) {
  return random_vector(fiber_dim(m, n, d), rng());
}

}  // namespace

TEST(CommutationRelation, RejectsNonUnitary) {
  ComplexMatrix u(1, 1);
  u(0, 0) = 2.0;
  EXPECT_THROW(CommutationRelation(1, 1, u), Error);
  EXPECT_THROW(CommutationRelation(2, 1, identity(3)), Error);
}

TEST(CommutationRelation, FlipCoefficients) {
  const auto cr = CommutationRelation::flip(2, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 3; ++l)
          EXPECT_EQ(cr.coefficient(k, l, i, j), Complex(k == i && l == j ? 1.0 : 0.0));
}

TEST(LiftOneN, ScalarCube) {
  const Complex lambda = std::polar(1.0, 0.7);
  const auto cr = CommutationRelation::scalar(lambda);
  const ComplexMatrix l = lift_one_n(cr, 3);
  ASSERT_EQ(l.rows(), 1);
  EXPECT_NEAR(std::abs(l(0, 0) - lambda * lambda * lambda), 0.0, 1e-14);
}

TEST(LiftOneN, BaseCaseIsU) {
  const auto cr = random_relation(2, 2);
  EXPECT_TRUE(matrices_near(lift_one_n(cr, 1), cr.matrix(), 1e-14));
  EXPECT_TRUE(matrices_near(lift_one_n(cr, 0), identity(2), 0.0));
}

TEST(LiftOneN, FlipIsSlotPermutation) {
  const auto cr = CommutationRelation::flip(2, 2);
  const ComplexMatrix l = lift_one_n(cr, 3);
  // f_t ⊗ e_a ⊗ e_b ⊗ e_c ↦ e_a ⊗ e_b ⊗ e_c ⊗ f_t.
  for (int t = 0; t < 2; ++t)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          const auto src = TensorIndex{{1, 3}, {t, a, b, c}}.flat(2, 2);
          const auto dst = TensorIndex{{3, 1}, {a, b, c, t}}.flat(2, 2);
          EXPECT_EQ(l(static_cast<Eigen::Index>(dst), static_cast<Eigen::Index>(src)),
                    Complex(1.0));
        }
  EXPECT_TRUE(is_unitary(l, 1e-12));
}

TEST(LiftMN, ScalarPower) {
  const Complex lambda = std::polar(1.0, 0.3);
  const auto cr = CommutationRelation::scalar(lambda);
  EXPECT_NEAR(std::abs(lift_m_n(cr, 2, 3)(0, 0) - std::pow(lambda, 6)), 0.0, 1e-13);
}

TEST(LiftMN, BaseCaseIsU) {
  const auto cr = random_relation(2, 3);
  EXPECT_TRUE(matrices_near(lift_m_n(cr, 1, 1), cr.matrix(), 1e-14));
}

TEST(LiftMN, MatchesNaiveSlotOracle) {
  for (const auto& [m, n] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 2}}) {
    const auto cr = random_relation(m, n);
    for (int q = 1; q <= 2; ++q)
      for (int p = 1; p <= 3; ++p) {
        if (ipow(m, p) * ipow(n, q) > 200) continue;
        const ComplexMatrix lifted = lift_m_n(cr, q, p);
        EXPECT_TRUE(matrices_near(lifted, naive_lift_matrix(cr, q, p), 1e-12))
            << "m=" << m << " n=" << n << " q=" << q << " p=" << p;
        EXPECT_TRUE(is_unitary(lifted, 1e-9));
      }
  }
}

TEST(BigW, IdentityWhenTrivialSplit) {
  const auto cr = random_relation(2, 2);
  EXPECT_TRUE(matrices_near(big_w(cr, {0, 0}, {1, 1}), identity(4), 0.0));
  EXPECT_TRUE(matrices_near(big_w(cr, {1, 1}, {0, 0}), identity(4), 0.0));
  EXPECT_TRUE(matrices_near(big_w(cr, {2, 0}, {1, 1}), identity(16), 0.0));
}

TEST(BigW, ScalarCase) {
  const Complex lambda = std::polar(1.0, 1.1);
  const auto cr = CommutationRelation::scalar(lambda);
  for (int j = 0; j <= 2; ++j)
    for (int k = 0; k <= 2; ++k) {
      const ComplexMatrix& w = big_w(cr, {1, j}, {k, 1});
      EXPECT_NEAR(std::abs(w(0, 0) - std::pow(lambda, j * k)), 0.0, 1e-13);
    }
}

TEST(BigW, FlipExchangesMiddleSlots) {
  const auto cr = CommutationRelation::flip(2, 2);
  const ComplexMatrix& w = big_w(cr, {1, 1}, {1, 1});
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          // e_a ⊗ f_b ⊗ e_c ⊗ f_d ↦ e_a ⊗ e_c ⊗ f_b ⊗ f_d; both index as 2-adic words.
          const std::size_t src = ((a * 2 + b) * 2 + c) * 2 + d;
          const std::size_t dst = ((a * 2 + c) * 2 + b) * 2 + d;
          EXPECT_EQ(w(static_cast<Eigen::Index>(dst), static_cast<Eigen::Index>(src)),
                    Complex(1.0));
        }
}

TEST(BigW, EveryBlockUnitary) {
  const auto cr = random_relation(2, 2);
  for (const Degree a : {Degree{1, 1}, Degree{0, 2}, Degree{2, 1}})
    for (const Degree b : {Degree{1, 0}, Degree{2, 0}, Degree{1, 1}})
      EXPECT_TRUE(is_unitary(big_w(cr, a, b), 1e-9));
}

TEST(BigW, CellBound) {
  auto cr = random_relation(2, 2);
  cr.set_cell_bound(64);
  EXPECT_NO_THROW(big_w(cr, {1, 2}, {2, 1}));
  EXPECT_THROW(big_w(cr, {2, 2}, {2, 1}), Error);
}

TEST(FockProduct, Associative) {
  for (const auto& [m, n] : {std::pair{1, 1}, {2, 1}, {2, 2}}) {
    const auto cr = random_relation(m, n);
    const std::vector<Degree> degs{{0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}};
    for (const Degree dx : degs)
      for (const Degree dy : degs)
        for (const Degree dz : degs) {
          if ((dx + dy + dz).total() > 5) continue;
          const ComplexVector x = random_fiber_vector(m, n, dx);
          const ComplexVector y = random_fiber_vector(m, n, dy);
          const ComplexVector z = random_fiber_vector(m, n, dz);
          const ComplexVector xy_z =
              fock_product(cr, dx + dy, fock_product(cr, dx, x, dy, y), dz, z);
          const ComplexVector x_yz =
              fock_product(cr, dx, x, dy + dz, fock_product(cr, dy, y, dz, z));
          EXPECT_LE((xy_z - x_yz).cwiseAbs().maxCoeff(), 1e-9)
              << to_string(dx) << to_string(dy) << to_string(dz);
        }
  }
}

TEST(FockProduct, RejectsWrongLength) {
  const auto cr = CommutationRelation::flip(2, 1);
  EXPECT_THROW(fock_product(cr, {1, 0}, ComplexVector::Ones(3), {0, 1}, ComplexVector::Ones(1)),
               Error);
}
