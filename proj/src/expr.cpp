#include "spsys/expr.hpp"

#include "spsys/io.hpp"

#include <cctype>
#include <sstream>

namespace spsys {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < s.size()) {
    const char ch = s[k];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++k;
    } else if (ch == '(' || ch == ')') {
      out.push_back({std::string(1, ch), k + 1});
      ++k;
    } else {
      const std::size_t start = k;
      while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k])) && s[k] != '(' &&
             s[k] != ')')
        ++k;
      out.push_back({s.substr(start, k - start), start + 1});
    }
  }
  return out;
}

[[noreturn]] void fail(std::size_t column, const std::string& what) {
  throw ParseError("expression column " + std::to_string(column) + ": " + what);
}

int parse_index(const std::string& s, std::size_t column, const std::string& token) {
  if (s.empty() || s.size() > 6) fail(column, "bad index in \"" + token + "\"");
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) fail(column, "bad index in \"" + token + "\"");
  return std::stoi(s);
}

ExprNode atom(const Token& t) {
  ExprNode node;
  node.column = t.column;
  const std::string& s = t.text;
  if (s == "I") {
    node.kind = ExprNode::Kind::kIdentity;
    return node;
  }
  if ((s[0] == 'e' || s[0] == 'f') && s.size() > 1 &&
      std::isdigit(static_cast<unsigned char>(s[1]))) {
    node.kind = s[0] == 'e' ? ExprNode::Kind::kE : ExprNode::Kind::kF;
    node.index = parse_index(s.substr(1), t.column, s);
    if (node.index < 1) fail(t.column, "indices are 1-based in \"" + s + "\"");
    return node;
  }
  if (s[0] == 'x') {
    const std::size_t u1 = s.find('_');
    const std::size_t u2 = u1 == std::string::npos ? u1 : s.find('_', u1 + 1);
    if (u2 == std::string::npos) fail(t.column, "expected x<i>_<j>_<k>, got \"" + s + "\"");
    node.kind = ExprNode::Kind::kFiberVector;
    node.degree = {parse_index(s.substr(1, u1 - 1), t.column, s),
                   parse_index(s.substr(u1 + 1, u2 - u1 - 1), t.column, s)};
    node.index = parse_index(s.substr(u2 + 1), t.column, s);
    if (node.index < 1) fail(t.column, "indices are 1-based in \"" + s + "\"");
    return node;
  }
  try {
    node.value = parse_complex(s);
  } catch (const ParseError&) {
    fail(t.column, "unknown symbol \"" + s + "\"");
  }
  return node;
}

ExprNode parse_node(const std::vector<Token>& tokens, std::size_t& pos) {
  if (pos >= tokens.size()) fail(tokens.empty() ? 1 : tokens.back().column, "unexpected end of expression");
  const Token& t = tokens[pos++];
  if (t.text == ")") fail(t.column, "unexpected \")\"");
  if (t.text != "(") return atom(t);
  if (pos >= tokens.size()) fail(t.column, "unclosed \"(\"");
  const Token& head = tokens[pos++];
  ExprNode node;
  node.column = head.column;
  std::vector<ExprNode> args;
  while (true) {
    if (pos >= tokens.size()) fail(t.column, "unclosed \"(\"");
    if (tokens[pos].text == ")") {
      ++pos;
      break;
    }
    args.push_back(parse_node(tokens, pos));
  }
  if (head.text == "+" || head.text == "*") {
    if (args.empty()) fail(head.column, "\"" + head.text + "\" needs at least one argument");
    node.kind = head.text == "+" ? ExprNode::Kind::kSum : ExprNode::Kind::kProduct;
  } else if (head.text == "-") {
    if (args.empty()) fail(head.column, "\"-\" needs at least one argument");
    node.kind = args.size() == 1 ? ExprNode::Kind::kNegate : ExprNode::Kind::kDifference;
  } else if (head.text == "c") {
    if (args.size() != 2 || args[0].kind != ExprNode::Kind::kNumber ||
        args[1].kind != ExprNode::Kind::kNumber || args[0].value.imag() != 0.0 ||
        args[1].value.imag() != 0.0)
      fail(head.column, "\"c\" takes two real numbers");
    node.kind = ExprNode::Kind::kNumber;
    node.value = Complex(args[0].value.real(), args[1].value.real());
    return node;
  } else {
    fail(head.column, "unknown operator \"" + head.text + "\"");
  }
  node.args = std::move(args);
  return node;
}

template <class Value, class Leaf, class Scalar>
Value fold(const ExprNode& node, const Leaf& leaf, const Scalar& scalar) {
  using K = ExprNode::Kind;
  switch (node.kind) {
    case K::kNumber:
      return scalar(node.value);
    case K::kIdentity:
      return scalar(Complex(1.0));
    case K::kE:
    case K::kF:
    case K::kFiberVector:
      return leaf(node);
    case K::kNegate:
      return fold<Value>(node.args[0], leaf, scalar) * Complex(-1.0);
    case K::kSum:
    case K::kProduct:
    case K::kDifference: {
      Value acc = fold<Value>(node.args[0], leaf, scalar);
      for (std::size_t k = 1; k < node.args.size(); ++k) {
        Value next = fold<Value>(node.args[k], leaf, scalar);
        if (node.kind == K::kSum) acc = acc + next;
        else if (node.kind == K::kProduct) acc = acc * next;
        else acc = acc - next;
      }
      return acc;
    }
  }
  throw Error("unreachable expression kind");
}

ComplexVector leaf_vector(const ExprNode& node, int m, int n, const FiberVectorLookup& lookup,
                          Degree& d) {
  if (node.kind == ExprNode::Kind::kFiberVector) {
    d = node.degree;
    if (d.total() == 0) fail(node.column, "x0_0_k is a scalar; write a number instead");
    try {
      return lookup(d, node.index);
    } catch (const Error& e) {
      fail(node.column, e.what());
    }
  }
  const bool is_e = node.kind == ExprNode::Kind::kE;
  const int dim = is_e ? m : n;
  if (node.index > dim)
    fail(node.column, std::string(is_e ? "e" : "f") + std::to_string(node.index) +
                          " exceeds dimension " + std::to_string(dim));
  d = is_e ? Degree{1, 0} : Degree{0, 1};
  ComplexVector v = ComplexVector::Zero(dim);
  v(node.index - 1) = 1.0;
  return v;
}

}  // namespace

ExprNode parse_expression(const std::string& text) {
  const std::vector<Token> tokens = tokenize(text);
  if (tokens.empty()) fail(1, "empty expression");
  std::size_t pos = 0;
  ExprNode node = parse_node(tokens, pos);
  if (pos != tokens.size()) fail(tokens[pos].column, "trailing input \"" + tokens[pos].text + "\"");
  return node;
}

std::string to_string(const ExprNode& node) {
  using K = ExprNode::Kind;
  switch (node.kind) {
    case K::kNumber:
      if (node.value.imag() == 0.0) return Json(stable_number(node.value.real())).dump();
      return "(c " + Json(stable_number(node.value.real())).dump() + " " +
             Json(stable_number(node.value.imag())).dump() + ")";
    case K::kIdentity:
      return "I";
    case K::kE:
      return "e" + std::to_string(node.index);
    case K::kF:
      return "f" + std::to_string(node.index);
    case K::kFiberVector:
      return "x" + std::to_string(node.degree.i) + "_" + std::to_string(node.degree.j) + "_" +
             std::to_string(node.index);
    default:
      break;
  }
  std::string head = node.kind == K::kSum ? "+" : node.kind == K::kProduct ? "*" : "-";
  std::string out = "(" + head;
  for (const ExprNode& a : node.args) out += " " + to_string(a);
  return out + ")";
}

FockOperator evaluate_operator(const ExprNode& node,
                               const std::shared_ptr<const TruncatedFock>& fock,
                               const FiberVectorLookup& lookup, double tol) {
  const int m = fock->system().m();
  const int n = fock->system().n();
  auto leaf = [&](const ExprNode& x) {
    Degree d;
    const ComplexVector v = leaf_vector(x, m, n, lookup, d);
    if (d.total() > fock->system().truncation())
      fail(x.column, "degree " + to_string(d) + " exceeds the truncation");
    try {
      return creation_operator(fock, d, v, tol);
    } catch (const Error& e) {
      fail(x.column, e.what());
    }
  };
  auto scalar = [&](Complex c) { return FockOperator::identity(fock) * c; };
  return fold<FockOperator>(node, leaf, scalar);
}

NCPolynomial evaluate_polynomial(const ExprNode& node, int m, int n,
                                 const FiberVectorLookup& lookup) {
  auto leaf = [&](const ExprNode& x) {
    Degree d;
    const ComplexVector v = leaf_vector(x, m, n, lookup, d);
    return psi_map(GradedVector{{d, v}}, m, n);
  };
  auto scalar = [](Complex c) { return NCPolynomial::constant(c); };
  return fold<NCPolynomial>(node, leaf, scalar);
}

}  // namespace spsys
