#pragma once

#include "spsys/fock.hpp"
#include "spsys/ncpoly.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace spsys {

/// Prefix expressions over creation operators:
///
///   expr := number | (c re im) | I | e<k> | f<k> | x<i>_<j>_<k>
///         | (+ expr...) | (* expr...) | (- expr) | (- expr expr...)
///
/// e<k> is L_{e_k}, f<k> is L_{f_k}, x<i>_<j>_<k> is L_x for the k-th listed
/// vector of fiber (i,j); all indices are 1-based. Numbers are complex
/// literals such as 2, -0.5, 1e-3, 2i, 1-1i.
struct ExprNode {
  enum class Kind { kNumber, kIdentity, kE, kF, kFiberVector, kSum, kProduct, kNegate, kDifference };
  Kind kind = Kind::kNumber;
  Complex value;
  /// Letter index for kE/kF, vector index for kFiberVector (1-based as written).
  int index = 0;
  Degree degree;
  std::vector<ExprNode> args;
  /// 1-based column of the node in the source text.
  std::size_t column = 0;
};

/// Throws ParseError with the column of the offending token.
ExprNode parse_expression(const std::string& text);

std::string to_string(const ExprNode& node);

/// Looks up the k-th (1-based) listed vector of fiber d.
using FiberVectorLookup = std::function<ComplexVector(Degree d, int k)>;

FockOperator evaluate_operator(const ExprNode& node,
                               const std::shared_ptr<const TruncatedFock>& fock,
                               const FiberVectorLookup& lookup, double tol = kFiberTol);

/// The same expression as an element of C<z, w>: e_k ↦ z_k, f_k ↦ w_k and
/// x ↦ Ψ(x).
NCPolynomial evaluate_polynomial(const ExprNode& node, int m, int n,
                                 const FiberVectorLookup& lookup);

}  // namespace spsys
