#pragma once

#include "spsys/tensor_linalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spsys {

/// An element of C[z_1..z_m, w_1..w_n]. Monomials are exponent vectors of
/// length m + n (z exponents first).
class CommutativePolynomial {
 public:
  using Exponents = std::vector<int>;

  CommutativePolynomial(int m, int n);

  static CommutativePolynomial constant(int m, int n, Complex c);
  /// z_{index+1} (kind_w = false) or w_{index+1} (kind_w = true), 0-based index.
  static CommutativePolynomial variable(int m, int n, bool kind_w, int index);

  int m() const { return m_; }
  int n() const { return n_; }
  const std::map<Exponents, Complex>& terms() const { return terms_; }

  /// Adds c to the coefficient of the monomial; exact zeros are removed.
  void add_term(const Exponents& e, Complex c);
  Complex coefficient(const Exponents& e) const;

  bool is_zero() const { return terms_.empty(); }
  double max_abs_coefficient() const;
  /// Copy scaled so the largest coefficient has modulus 1; zero stays zero.
  CommutativePolynomial normalized() const;
  /// Drops coefficients with modulus ≤ tol.
  CommutativePolynomial pruned(double tol) const;

  /// (degree in z, degree in w) shared by every monomial, if any.
  std::optional<Degree> bidegree() const;
  int total_degree() const;

  /// Evaluates at (z, w); point has length m + n.
  Complex evaluate(const ComplexVector& point) const;

  CommutativePolynomial operator+(const CommutativePolynomial& o) const;
  CommutativePolynomial operator-(const CommutativePolynomial& o) const;
  CommutativePolynomial operator*(const CommutativePolynomial& o) const;
  CommutativePolynomial operator*(Complex s) const;

  /// E.g. "(1-1i)*z1*w1^2"; "0" for the zero polynomial.
  std::string to_string() const;

 private:
  void check_compatible(const CommutativePolynomial& o) const;

  int m_;
  int n_;
  std::map<Exponents, Complex> terms_;
};

/// Bidegree of a monomial.
Degree monomial_bidegree(const CommutativePolynomial::Exponents& e, int m);

/// All exponent vectors of the given bidegree, larger leading exponents first.
std::vector<CommutativePolynomial::Exponents> monomials_of_bidegree(int m, int n, Degree d);

std::string format_complex(Complex c);

}  // namespace spsys
