#include "spsys/ncpoly.hpp"

#include <cctype>
#include <cmath>

namespace spsys {

Degree word_degree(const Word& w) {
  Degree d;
  for (const Letter& l : w) (l.kind == Letter::Kind::kZ ? d.i : d.j) += 1;
  return d;
}

std::string word_to_string(const Word& w) {
  std::string s;
  for (const Letter& l : w)
    s += (l.kind == Letter::Kind::kZ ? "z" : "w") + std::to_string(l.index + 1);
  return s;
}

Word parse_word(const std::string& s, int m, int n) {
  Word w;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char c = s[pos];
    if (c != 'z' && c != 'w') throw Error("word \"" + s + "\": expected z or w at " +
                                          std::to_string(pos));
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw Error("word \"" + s + "\": missing index after " + c);
    const int k = std::stoi(s.substr(start, pos - start));
    const bool is_z = c == 'z';
    if (k < 1 || k > (is_z ? m : n))
      throw Error("word \"" + s + "\": letter " + c + std::to_string(k) + " out of range");
    w.push_back({is_z ? Letter::Kind::kZ : Letter::Kind::kW, k - 1});
  }
  return w;
}

NCPolynomial NCPolynomial::constant(Complex c) { return monomial({}, c); }

NCPolynomial NCPolynomial::monomial(Word w, Complex c) {
  NCPolynomial p;
  p.add_term(w, c);
  return p;
}

NCPolynomial NCPolynomial::z(int index) { return monomial({{Letter::Kind::kZ, index}}); }
NCPolynomial NCPolynomial::w(int index) { return monomial({{Letter::Kind::kW, index}}); }

void NCPolynomial::add_term(const Word& w, Complex c) {
  Complex& slot = terms_[w];
  slot += c;
  if (slot == Complex(0.0)) terms_.erase(w);
}

Complex NCPolynomial::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

double NCPolynomial::coefficient_norm() const {
  double s = 0.0;
  for (const auto& [w, c] : terms_) s += std::norm(c);
  return std::sqrt(s);
}

NCPolynomial NCPolynomial::operator+(const NCPolynomial& o) const {
  NCPolynomial r = *this;
  for (const auto& [w, c] : o.terms_) r.add_term(w, c);
  return r;
}

NCPolynomial NCPolynomial::operator-(const NCPolynomial& o) const { return *this + o * -1.0; }

NCPolynomial NCPolynomial::operator*(const NCPolynomial& o) const {
  NCPolynomial r;
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) {
      Word w = a;
      w.insert(w.end(), b.begin(), b.end());
      r.add_term(w, ca * cb);
    }
  return r;
}

NCPolynomial NCPolynomial::operator*(Complex s) const {
  NCPolynomial r;
  for (const auto& [w, c] : terms_) r.add_term(w, c * s);
  return r;
}

std::string NCPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [w, c] : terms_) {
    if (!out.empty()) out += " + ";
    const std::string word = word_to_string(w);
    if (word.empty()) {
      out += format_complex(c);
    } else if (c == Complex(1.0)) {
      out += word;
    } else {
      out += format_complex(c) + "*" + word;
    }
  }
  return out;
}

namespace {

ComplexVector letter_vector(const CommutationRelation& cr, const Letter& l) {
  const int dim = l.kind == Letter::Kind::kZ ? cr.m() : cr.n();
  if (l.index < 0 || l.index >= dim)
    throw Error(std::string("letter ") + (l.kind == Letter::Kind::kZ ? "z" : "w") +
                std::to_string(l.index + 1) + " out of range");
  return ComplexVector::Unit(dim, l.index);
}

ComplexVector phi_word(const Word& w, const CommutationRelation& cr) {
  ComplexVector cur = ComplexVector::Ones(1);
  Degree d;
  for (const Letter& l : w) {
    const Degree dl = l.kind == Letter::Kind::kZ ? Degree{1, 0} : Degree{0, 1};
    cur = fock_product(cr, d, cur, dl, letter_vector(cr, l));
    d = d + dl;
  }
  return cur;
}

}  // namespace

GradedVector phi_map(const NCPolynomial& p, const CommutationRelation& cr) {
  GradedVector out;
  for (const auto& [w, c] : p.terms()) {
    const Degree d = word_degree(w);
    ComplexVector v = c * phi_word(w, cr);
    auto it = out.find(d);
    if (it == out.end())
      out.emplace(d, std::move(v));
    else
      it->second += v;
  }
  return out;
}

NCPolynomial psi_map(const GradedVector& x, int m, int n) {
  NCPolynomial p;
  for (const auto& [d, v] : x) {
    if (static_cast<std::size_t>(v.size()) != fiber_dim(m, n, d))
      throw Error("psi_map: vector length does not match degree " + to_string(d));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (v(k) == Complex(0.0)) continue;
      const TensorIndex t = TensorIndex::from_flat(m, n, d, static_cast<std::size_t>(k));
      Word w;
      for (int p_ = 0; p_ < d.total(); ++p_)
        w.push_back({p_ < d.i ? Letter::Kind::kZ : Letter::Kind::kW,
                     t.word[static_cast<std::size_t>(p_)]});
      p.add_term(w, v(k));
    }
  }
  return p;
}

std::vector<NCPolynomial> commutation_generators(const CommutationRelation& cr) {
  std::vector<NCPolynomial> out;
  for (int i = 0; i < cr.m(); ++i)
    for (int j = 0; j < cr.n(); ++j) {
      NCPolynomial p = NCPolynomial::w(j) * NCPolynomial::z(i);
      for (int k = 0; k < cr.m(); ++k)
        for (int l = 0; l < cr.n(); ++l) {
          const Complex c = cr.coefficient(k, l, i, j);
          if (c != Complex(0.0)) p = p - NCPolynomial::z(k) * NCPolynomial::w(l) * c;
        }
      out.push_back(std::move(p));
    }
  return out;
}

CommutativePolynomial abelianize(const NCPolynomial& p, int m, int n) {
  CommutativePolynomial out(m, n);
  for (const auto& [w, c] : p.terms()) {
    CommutativePolynomial::Exponents e(static_cast<std::size_t>(m + n), 0);
    for (const Letter& l : w) {
      const int slot = l.kind == Letter::Kind::kZ ? l.index : m + l.index;
      if (l.index < 0 || l.index >= (l.kind == Letter::Kind::kZ ? m : n))
        throw Error("abelianize: letter out of range");
      ++e[static_cast<std::size_t>(slot)];
    }
    out.add_term(e, c);
  }
  return out;
}

std::optional<Degree> is_homogeneous(const NCPolynomial& p) {
  std::optional<Degree> d;
  for (const auto& [w, c] : p.terms()) {
    const Degree here = word_degree(w);
    if (d && *d != here) return std::nullopt;
    d = here;
  }
  return d;
}

namespace {

struct SortedGenerators {
  std::map<Degree, std::vector<ComplexVector>> images;
  std::vector<const NCPolynomial*> top_degree_one_one;
};

SortedGenerators sort_generators(const std::vector<NCPolynomial>& generators,
                                 const CommutationRelation& cr, double tol) {
  SortedGenerators out;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const NCPolynomial& g = generators[k];
    if (g.is_zero()) continue;
    const auto d = is_homogeneous(g);
    if (!d) throw Error("generator " + std::to_string(k + 1) + " is not homogeneous: " +
                        g.to_string());
    if (d->total() == 0) throw Error("improper ideal: generator " + std::to_string(k + 1) +
                                     " is a nonzero constant");
    const GradedVector img = phi_map(g, cr);
    const ComplexVector& v = img.at(*d);
    // Φ(g) may vanish exactly in exact arithmetic (g in the span of the
    // P_{i,j}); compare against the coefficient scale before normalizing.
    if (v.norm() <= tol * g.coefficient_norm()) continue;
    if (d->total() == 1)
      throw Error("generator " + std::to_string(k + 1) + " has degree " + to_string(*d) +
                  "; a standard system needs X(1,0) = E and X(0,1) = F");
    out.images[*d].push_back(v / v.norm());
  }
  return out;
}

ComplexMatrix stack(const std::vector<ComplexVector>& cols, std::size_t dim) {
  ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = cols[k];
  return m;
}

}  // namespace

std::map<Degree, ComplexMatrix> ideal_components(const std::vector<NCPolynomial>& generators,
                                                 const CommutationRelation& cr, int truncation,
                                                 double tol) {
  const SortedGenerators sorted = sort_generators(generators, cr, tol);
  const int m = cr.m(), n = cr.n();
  std::map<Degree, ComplexMatrix> comp;
  for (const Degree d : degrees_up_to(truncation)) {
    const std::size_t dim = fiber_dim(m, n, d);
    std::vector<ComplexVector> cands;
    if (auto it = sorted.images.find(d); it != sorted.images.end())
      cands = it->second;
    // Every a·g·b with a or b nonempty starts or ends with a letter.
    const auto extend = [&](Degree step, int letters) {
      const Degree prev = d - step;
      if (prev.i < 0 || prev.j < 0) return;
      const ComplexMatrix& basis = comp.at(prev);
      for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        const ComplexVector v = basis.col(c);
        for (int s = 0; s < letters; ++s) {
          const ComplexVector g = ComplexVector::Unit(letters, s);
          cands.push_back(fock_product(cr, step, g, prev, v));
          cands.push_back(fock_product(cr, prev, v, step, g));
        }
      }
    };
    extend({1, 0}, m);
    extend({0, 1}, n);
    comp[d] = range_basis(projection_onto_columns(stack(cands, dim), tol));
  }
  return comp;
}

IdealSystem ideal_to_subproduct(const std::vector<NCPolynomial>& generators,
                                const CommutationRelation& cr, int truncation, double tol) {
  const auto comp = ideal_components(generators, cr, truncation, tol);
  std::map<Degree, ComplexMatrix> proj;
  for (const auto& [d, basis] : comp) {
    if (d.total() == 0 && basis.cols() > 0) throw Error("improper ideal: it contains 1");
    proj[d] = identity(static_cast<std::size_t>(basis.rows())) - basis * basis.adjoint();
  }

  // Are the P_{i,j} already in the span of the degree-(1,1) generators?
  const auto ps = commutation_generators(cr);
  bool added = false;
  if (!ps.empty()) {
    std::vector<NCPolynomial> given;
    for (const auto& g : generators)
      if (!g.is_zero() && is_homogeneous(g) == Degree{1, 1}) given.push_back(g);
    std::map<Word, Eigen::Index> index;
    for (const auto& g : given)
      for (const auto& [w, c] : g.terms()) index.emplace(w, static_cast<Eigen::Index>(index.size()));
    for (const auto& g : ps)
      for (const auto& [w, c] : g.terms()) index.emplace(w, static_cast<Eigen::Index>(index.size()));
    const auto to_matrix = [&](const std::vector<NCPolynomial>& polys) {
      ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(index.size()),
                                            static_cast<Eigen::Index>(polys.size()));
      for (std::size_t k = 0; k < polys.size(); ++k)
        for (const auto& [w, c] : polys[k].terms()) a(index.at(w), static_cast<Eigen::Index>(k)) = c;
      return a;
    };
    const ComplexMatrix g = to_matrix(given);
    ComplexMatrix both(g.rows(), g.cols() + static_cast<Eigen::Index>(ps.size()));
    both << g, to_matrix(ps);
    added = numeric_rank(both, tol) > (g.cols() == 0 ? 0 : numeric_rank(g, tol));
  }
  return {SubproductSystem(cr, truncation, std::move(proj)), added};
}

std::vector<NCPolynomial> subproduct_to_ideal(const SubproductSystem& sps) {
  std::vector<NCPolynomial> out = commutation_generators(sps.relation());
  for (const Degree d : degrees_up_to(sps.truncation())) {
    const ComplexMatrix basis = sps.complement_basis(d);
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
      out.push_back(psi_map({{d, basis.col(c)}}, sps.m(), sps.n()));
  }
  return out;
}

}  // namespace spsys
