#include "spsys/commutative_polynomial.hpp"

#include <cmath>
#include <sstream>

namespace spsys {

CommutativePolynomial::CommutativePolynomial(int m, int n) : m_(m), n_(n) {
  if (m < 0 || n < 0) throw Error("polynomial: negative number of variables");
}

CommutativePolynomial CommutativePolynomial::constant(int m, int n, Complex c) {
  CommutativePolynomial p(m, n);
  p.add_term(Exponents(static_cast<std::size_t>(m + n), 0), c);
  return p;
}

CommutativePolynomial CommutativePolynomial::variable(int m, int n, bool kind_w, int index) {
  if (index < 0 || index >= (kind_w ? n : m)) throw Error("polynomial: variable out of range");
  CommutativePolynomial p(m, n);
  Exponents e(static_cast<std::size_t>(m + n), 0);
  e[static_cast<std::size_t>(kind_w ? m + index : index)] = 1;
  p.add_term(e, 1.0);
  return p;
}

void CommutativePolynomial::add_term(const Exponents& e, Complex c) {
  if (e.size() != static_cast<std::size_t>(m_ + n_))
    throw Error("polynomial: exponent vector has the wrong length");
  for (int x : e)
    if (x < 0) throw Error("polynomial: negative exponent");
  Complex& slot = terms_[e];
  slot += c;
  if (slot == Complex(0.0)) terms_.erase(e);
}

Complex CommutativePolynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

double CommutativePolynomial::max_abs_coefficient() const {
  double r = 0.0;
  for (const auto& [e, c] : terms_) r = std::max(r, std::abs(c));
  return r;
}

CommutativePolynomial CommutativePolynomial::normalized() const {
  const double s = max_abs_coefficient();
  if (s == 0.0) return *this;
  return *this * Complex(1.0 / s);
}

CommutativePolynomial CommutativePolynomial::pruned(double tol) const {
  CommutativePolynomial out(m_, n_);
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) out.terms_[e] = c;
  return out;
}

Degree monomial_bidegree(const CommutativePolynomial::Exponents& e, int m) {
  Degree d;
  for (std::size_t k = 0; k < e.size(); ++k) (static_cast<int>(k) < m ? d.i : d.j) += e[k];
  return d;
}

std::optional<Degree> CommutativePolynomial::bidegree() const {
  std::optional<Degree> d;
  for (const auto& [e, c] : terms_) {
    const Degree here = monomial_bidegree(e, m_);
    if (d && *d != here) return std::nullopt;
    d = here;
  }
  return d;
}

int CommutativePolynomial::total_degree() const {
  int t = 0;
  for (const auto& [e, c] : terms_) t = std::max(t, monomial_bidegree(e, m_).total());
  return t;
}

Complex CommutativePolynomial::evaluate(const ComplexVector& point) const {
  if (point.size() != m_ + n_) throw Error("polynomial: point has the wrong dimension");
  Complex sum = 0.0;
  for (const auto& [e, c] : terms_) {
    Complex term = c;
    for (std::size_t k = 0; k < e.size(); ++k)
      for (int p = 0; p < e[k]; ++p) term *= point(static_cast<Eigen::Index>(k));
    sum += term;
  }
  return sum;
}

void CommutativePolynomial::check_compatible(const CommutativePolynomial& o) const {
  if (m_ != o.m_ || n_ != o.n_) throw Error("polynomial: variable sets differ");
}

CommutativePolynomial CommutativePolynomial::operator+(const CommutativePolynomial& o) const {
  check_compatible(o);
  CommutativePolynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

CommutativePolynomial CommutativePolynomial::operator-(const CommutativePolynomial& o) const {
  return *this + o * Complex(-1.0);
}

CommutativePolynomial CommutativePolynomial::operator*(const CommutativePolynomial& o) const {
  check_compatible(o);
  CommutativePolynomial r(m_, n_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      Exponents e = a;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += b[k];
      r.add_term(e, ca * cb);
    }
  return r;
}

CommutativePolynomial CommutativePolynomial::operator*(Complex s) const {
  CommutativePolynomial r(m_, n_);
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

std::string format_complex(Complex c) {
  std::ostringstream os;
  os.precision(12);
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << "i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

std::string CommutativePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  // Highest monomials first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!out.empty()) out += " + ";
    std::string mono;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      const bool is_w = static_cast<int>(k) >= m_;
      mono += (is_w ? "w" : "z") + std::to_string(is_w ? k - m_ + 1 : k + 1);
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    if (mono.empty()) {
      out += format_complex(c);
    } else if (c == Complex(1.0)) {
      out += mono;
    } else {
      out += format_complex(c) + "*" + mono;
    }
  }
  return out;
}

namespace {

void enumerate(std::size_t pos, int remaining, std::size_t end,
               CommutativePolynomial::Exponents& cur,
               std::vector<CommutativePolynomial::Exponents>& out) {
  if (pos + 1 == end) {
    cur[pos] = remaining;
    out.push_back(cur);
    cur[pos] = 0;
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[pos] = k;
    enumerate(pos + 1, remaining - k, end, cur, out);
  }
  cur[pos] = 0;
}

}  // namespace

std::vector<CommutativePolynomial::Exponents> monomials_of_bidegree(int m, int n, Degree d) {
  if ((m == 0 && d.i > 0) || (n == 0 && d.j > 0)) return {};
  std::vector<CommutativePolynomial::Exponents> zs, ws;
  CommutativePolynomial::Exponents cz(static_cast<std::size_t>(m), 0);
  CommutativePolynomial::Exponents cw(static_cast<std::size_t>(n), 0);
  if (m > 0) enumerate(0, d.i, static_cast<std::size_t>(m), cz, zs); else zs.push_back({});
  if (n > 0) enumerate(0, d.j, static_cast<std::size_t>(n), cw, ws); else ws.push_back({});
  std::vector<CommutativePolynomial::Exponents> out;
  for (const auto& a : zs)
    for (const auto& b : ws) {
      auto e = a;
      e.insert(e.end(), b.begin(), b.end());
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace spsys
