#include "spsys/expr.hpp"
#include "spsys/io.hpp"

#include "random_systems.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace spsys;
using spsys::testing::matrices_near;
using spsys::testing::rng;

namespace {

const char* kSmallDoc = R"({
  "schema_version": 1,
  "m": 1,
  "n": 1,
  "D": 2,
  "u": [[[0, 1]]],
  "fibers": [
    {"i": 2, "j": 0, "basis": [[[1, 0]]]},
    {"i": 1, "j": 1, "basis": [[[1, 0]]]},
    {"i": 0, "j": 2, "basis": []}
  ],
  "metadata": {"name": "small"}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return s.replace(pos, from.size(), to);
}

std::string parse_error_of(const std::string& text) {
  try {
    system_from_document(parse_system_document(text, "doc"));
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(StableNumber, RoundsToTwelveDigitsAndSnapsTinyValues) {
  EXPECT_EQ(stable_number(0.1 + 0.2), 0.3);
  EXPECT_EQ(stable_number(1.0 / 3.0), 0.333333333333);
  EXPECT_EQ(stable_number(5e-14), 0.0);
  EXPECT_EQ(stable_number(-5e-14), 0.0);
  EXPECT_FALSE(std::signbit(stable_number(-0.0)));
  EXPECT_EQ(stable_number(stable_number(2.0 / 7.0)), stable_number(2.0 / 7.0));
}

TEST(ParseComplex, AcceptsCommonForms) {
  EXPECT_EQ(parse_complex("1.5"), Complex(1.5, 0));
  EXPECT_EQ(parse_complex("-2i"), Complex(0, -2));
  EXPECT_EQ(parse_complex("i"), Complex(0, 1));
  EXPECT_EQ(parse_complex("-i"), Complex(0, -1));
  EXPECT_EQ(parse_complex("0.5-0.25i"), Complex(0.5, -0.25));
  EXPECT_EQ(parse_complex("1e-3+2e-1i"), Complex(1e-3, 0.2));
  EXPECT_EQ(parse_complex("3+i"), Complex(3, 1));
  EXPECT_EQ(parse_complex(" 2 - 1i "), Complex(2, -1));
  for (const char* bad : {"", "abc", "1+", "+", "1..2", "2ii"})
    EXPECT_THROW(parse_complex(bad), ParseError) << bad;
  const ComplexVector v = parse_complex_list("1,i,-2");
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v(1), Complex(0, 1));
  EXPECT_EQ(parse_complex_list("").size(), 0);
}

TEST(SystemDocument, RandomSystemsRoundTrip) {
  for (int trial = 0; trial < 5; ++trial) {
    const SubproductSystem sps = spsys::testing::random_system(3);
    const std::string text = serialize(to_json(document_from_system(sps)));
    const SubproductSystem back = system_from_document(parse_system_document(text));
    for (const auto& [d, p] : sps.projections())
      EXPECT_TRUE(matrices_near(back.projection(d), p, 1e-10)) << to_string(d);
    EXPECT_TRUE(matrices_near(back.relation().matrix(), sps.relation().matrix(), 1e-11));
    // Re-serializing a parsed document does not touch the numbers again.
    EXPECT_EQ(serialize(to_json(parse_system_document(text))), text);
  }
}

TEST(SystemDocument, MissingLowDegreesDefaultToFullSpace) {
  const SubproductSystem sps = system_from_document(parse_system_document(kSmallDoc));
  EXPECT_TRUE(matrices_near(sps.projection({1, 0}), identity(1), 0));
  EXPECT_TRUE(matrices_near(sps.projection({0, 2}), ComplexMatrix::Zero(1, 1), 0));
  const SystemDocument doc = parse_system_document(kSmallDoc);
  EXPECT_EQ(doc.metadata["name"], "small");
  EXPECT_EQ(doc.vectors({0, 1}).size(), 1u);
  EXPECT_THROW(doc.vectors({3, 0}), Error);
}

TEST(SystemDocument, SyntaxErrorsCarryLineContext) {
  const std::string bad = replace(kSmallDoc, "\"D\": 2,", "\"D\": 2");
  const std::string msg = parse_error_of(bad);
  EXPECT_NE(msg.find("doc:6:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("\"u\""), std::string::npos) << msg;
  EXPECT_NE(msg.find('^'), std::string::npos) << msg;
}

TEST(SystemDocument, SchemaErrorsNameThePath) {
  struct Case {
    std::string text;
    std::string fragment;
  };
  const std::vector<Case> cases{
      {replace(kSmallDoc, "\"schema_version\": 1", "\"schema_version\": 7"), "unsupported"},
      {replace(kSmallDoc, "\"m\": 1,", ""), "missing key \"m\""},
      {replace(kSmallDoc, "[[[1, 0]]]},\n    {\"i\": 1", "[[[1, 0], [0, 0]]]},\n    {\"i\": 1"),
       "$.fibers[0].basis[0]"},
      {replace(kSmallDoc, "\"i\": 1, \"j\": 1", "\"i\": 2, \"j\": 0"), "duplicate"},
      {replace(kSmallDoc, "\"i\": 0, \"j\": 2", "\"i\": 0, \"j\": 3"), "exceeds D"},
      {replace(kSmallDoc, "[[[0, 1]]]", "[[[0, 2]]]"), "$.u"},
      {replace(kSmallDoc, "{\"i\": 1, \"j\": 1, \"basis\": [[[1, 0]]]},", ""),
       "missing fiber (1,1)"},
      {replace(kSmallDoc, "[[[0, 1]]]", "[[\"x\"]]"), "$.u[0][0]"},
  };
  for (const Case& c : cases) {
    const std::string msg = parse_error_of(c.text);
    EXPECT_NE(msg.find(c.fragment), std::string::npos) << c.fragment << " / " << msg;
  }
}

TEST(SystemDocument, NonOrthonormalSpanningVectorsAreAccepted) {
  const std::string text =
      replace(kSmallDoc, "\"basis\": []", "\"basis\": [[[2, 0]], [[0, 3]]]");
  const SubproductSystem sps = system_from_document(parse_system_document(text));
  EXPECT_TRUE(matrices_near(sps.projection({0, 2}), identity(1), 1e-12));
}

TEST(Serialize, KeepsShortArraysOnOneLine) {
  Json j = Json::object();
  j["a"] = Json::array({1, 2});
  j["b"] = Json{{"x", 1}, {"y", Json::array({0.5, 0.0})}};
  j["c"] = Json::array({Json::array({Json::array({1.0, 0.0})}), Json::array()});
  EXPECT_EQ(serialize(j),
            "{\n"
            "  \"a\": [1, 2],\n"
            "  \"b\": {\"x\": 1, \"y\": [0.5, 0.0]},\n"
            "  \"c\": [\n"
            "    [[1.0, 0.0]],\n"
            "    []\n"
            "  ]\n"
            "}\n");
}

TEST(NCPolynomialJson, RoundTripAndErrors) {
  NCPolynomial p = NCPolynomial::monomial(parse_word("z1w2z1", 2, 2), Complex(1, -2)) +
                   NCPolynomial::w(1) * Complex(0.5);
  const Json j = ncpoly_to_json(p);
  const NCPolynomial q = ncpoly_from_json(j, 2, 2);
  EXPECT_EQ(q.terms(), p.terms());
  EXPECT_TRUE(ncpoly_from_json(Json::array(), 1, 1).is_zero());
  const Json bad = Json::parse(R"([{"word": "z3", "coeff": [1, 0]}])");
  try {
    ncpoly_from_json(bad, 2, 2, "g");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("g[0].word"), std::string::npos) << e.what();
  }
}

TEST(IdealDocument, Parses) {
  const std::string text = R"({"schema_version": 1, "m": 1, "n": 1, "D": 2, "u": [[1]],
    "generators": [[{"word": "z1z1", "coeff": 2}], []]})";
  const IdealDocument doc = parse_ideal_document(text);
  ASSERT_EQ(doc.generators.size(), 2u);
  EXPECT_EQ(doc.generators[0].coefficient(parse_word("z1z1", 1, 1)), Complex(2, 0));
  EXPECT_TRUE(doc.generators[1].is_zero());
  const IdealDocument again = parse_ideal_document(serialize(to_json(doc)));
  EXPECT_EQ(again.generators[0].terms(), doc.generators[0].terms());
}

// Expressions.

namespace {

FiberVectorLookup standard_lookup(const SubproductSystem& sps) {
  return [&sps](Degree d, int k) -> ComplexVector { return sps.fiber_basis(d).col(k - 1); };
}

}  // namespace

TEST(Expression, ParseErrorsReportColumns) {
  struct Case {
    std::string text;
    std::string fragment;
  };
  const std::vector<Case> cases{
      {"", "empty"},
      {"(* e1", "column 1: unclosed"},
      {"(* e1 f1))", "column 10: trailing"},
      {"(/ e1 f1)", "column 2: unknown operator"},
      {"(* e1 g2)", "column 7: unknown symbol"},
      {"(c 1)", "two real numbers"},
      {"x1_2", "x<i>_<j>_<k>"},
      {"e0", "1-based"},
      {"(+)", "at least one"},
  };
  for (const Case& c : cases) {
    try {
      parse_expression(c.text);
      ADD_FAILURE() << "accepted " << c.text;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(c.fragment), std::string::npos)
          << c.text << " / " << e.what();
    }
  }
}

TEST(Expression, PrintsAndReparses) {
  for (const char* text : {"(+ (* e1 f2) (* (c 1 -2) x2_1_1) (- I) (- e2 f1))", "2.5", "(* 2i e1)"}) {
    const ExprNode a = parse_expression(text);
    EXPECT_EQ(to_string(parse_expression(to_string(a))), to_string(a)) << text;
  }
  EXPECT_EQ(to_string(parse_expression("(c 1 2)")), "(c 1.0 2.0)");
}

TEST(Expression, OperatorValueMatchesDirectConstruction) {
  const SubproductSystem sps = SubproductSystem::full(spsys::testing::random_relation(2, 2), 3);
  auto fock = std::make_shared<const TruncatedFock>(sps);
  const auto lookup = standard_lookup(sps);
  const FockOperator e1 = creation_operator(fock, {1, 0}, sps.fiber_basis({1, 0}).col(0));
  const FockOperator f2 = creation_operator(fock, {0, 1}, sps.fiber_basis({0, 1}).col(1));
  const FockOperator x = creation_operator(fock, {1, 1}, sps.fiber_basis({1, 1}).col(2));
  const FockOperator id = FockOperator::identity(fock);
  const FockOperator expected = e1 * f2 * Complex(0, 1) + x - id * Complex(3, 0) - f2;
  const FockOperator got = evaluate_operator(
      parse_expression("(- (+ (* i e1 f2) x1_1_3) (* 3 I) f2)"), fock, lookup);
  EXPECT_TRUE(matrices_near(got.matrix(), expected.matrix(), 1e-12));
  EXPECT_THROW(evaluate_operator(parse_expression("e3"), fock, lookup), ParseError);
  EXPECT_THROW(evaluate_operator(parse_expression("x4_0_1"), fock, lookup), ParseError);
}

TEST(Expression, PolynomialValueFollowsLetters) {
  const SubproductSystem sps = SubproductSystem::full(CommutationRelation::flip(2, 1), 2);
  const auto lookup = standard_lookup(sps);
  const NCPolynomial p =
      evaluate_polynomial(parse_expression("(+ (* e2 f1 e1) (- 2) x1_1_2)"), 2, 1, lookup);
  NCPolynomial expected = NCPolynomial::z(1) * NCPolynomial::w(0) * NCPolynomial::z(0) -
                          NCPolynomial::constant(2.0) +
                          NCPolynomial::z(1) * NCPolynomial::w(0);
  EXPECT_EQ(p.terms(), expected.terms());
}
