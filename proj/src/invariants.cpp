#include "spsys/invariants.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace spsys {

TruncatedPolynomial::TruncatedPolynomial(int k) : k_(k), c_(static_cast<std::size_t>(k), 0.0) {
  if (k < 0) throw Error("C_k[t]: negative order");
}

TruncatedPolynomial::TruncatedPolynomial(int k, std::vector<Complex> coeffs)
    : k_(k), c_(std::move(coeffs)) {
  if (k < 0) throw Error("C_k[t]: negative order");
  c_.resize(static_cast<std::size_t>(k), 0.0);
}

TruncatedPolynomial TruncatedPolynomial::constant(int k, Complex c) {
  TruncatedPolynomial p(k);
  if (k > 0) p.c_[0] = c;
  return p;
}

TruncatedPolynomial TruncatedPolynomial::linear(int k, Complex c) {
  TruncatedPolynomial p(k);
  if (k > 1) p.c_[1] = c;
  return p;
}

double TruncatedPolynomial::max_abs() const {
  double r = 0.0;
  for (const Complex& c : c_) r = std::max(r, std::abs(c));
  return r;
}

void TruncatedPolynomial::check(const TruncatedPolynomial& o) const {
  if (k_ != o.k_) throw Error("C_k[t]: orders differ");
}

TruncatedPolynomial TruncatedPolynomial::operator+(const TruncatedPolynomial& o) const {
  check(o);
  TruncatedPolynomial r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

TruncatedPolynomial TruncatedPolynomial::operator-(const TruncatedPolynomial& o) const {
  return *this + o * -1.0;
}

TruncatedPolynomial TruncatedPolynomial::operator*(const TruncatedPolynomial& o) const {
  check(o);
  TruncatedPolynomial r(k_);
  for (int i = 0; i < k_; ++i)
    for (int j = 0; i + j < k_; ++j)
      r.c_[static_cast<std::size_t>(i + j)] +=
          c_[static_cast<std::size_t>(i)] * o.c_[static_cast<std::size_t>(j)];
  return r;
}

TruncatedPolynomial TruncatedPolynomial::operator*(Complex s) const {
  TruncatedPolynomial r = *this;
  for (Complex& c : r.c_) c *= s;
  return r;
}

TruncatedPolynomial evaluate_truncated(const CommutativePolynomial& p,
                                       const std::vector<TruncatedPolynomial>& args, int k) {
  if (args.size() != static_cast<std::size_t>(p.m() + p.n()))
    throw Error("evaluate_truncated: wrong number of arguments");
  TruncatedPolynomial sum(k);
  for (const auto& [e, c] : p.terms()) {
    TruncatedPolynomial term = TruncatedPolynomial::constant(k, c);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (int q = 0; q < e[v]; ++q) term = term * args[v];
    sum = sum + term;
  }
  return sum;
}

std::string InvariantPair::k_x_string() const {
  return k_x ? std::to_string(*k_x) : ">=" + std::to_string(truncation + 1);
}

InvariantPair compute_invariants(const SubproductSystem& sps, double tol) {
  InvariantPair inv;
  inv.m = sps.m();
  inv.n = sps.n();
  inv.truncation = sps.truncation();
  const auto profile = dimension_profile(sps);
  if (sps.truncation() >= 1)
    inv.dim_sum = static_cast<int>(profile.at({1, 0}) + profile.at({0, 1}));
  for (const auto& g : variety_generators(sps, tol)) {
    const int d = g.total_degree();
    if (!inv.k_x || d < *inv.k_x) inv.k_x = d;
  }
  return inv;
}

TruncatedPolynomial beta_homomorphism(const InvariantPair& inv, const ComplexVector& zeta, int k,
                                      const NCPolynomial& t) {
  if (zeta.size() != inv.m + inv.n) throw Error("beta: ζ must have m + n entries");
  if (k < 1) throw Error("beta: the order k must be positive");
  const int limit = inv.k_x ? *inv.k_x : inv.truncation + 1;
  if (k > limit)
    throw Error("beta: order " + std::to_string(k) + " exceeds k_X = " + inv.k_x_string() +
                "; the value would depend on the representative");
  TruncatedPolynomial out(k);
  std::vector<Complex> coeffs(static_cast<std::size_t>(k), 0.0);
  for (const auto& [word, c] : t.terms()) {
    if (static_cast<int>(word.size()) >= k) continue;
    Complex prod = c;
    for (const Letter& l : word) {
      const int slot = l.kind == Letter::Kind::kZ ? l.index : inv.m + l.index;
      if (l.index < 0 || l.index >= (l.kind == Letter::Kind::kZ ? inv.m : inv.n))
        throw Error("beta: letter out of range");
      prod *= zeta(slot);
    }
    coeffs[word.size()] += prod;
  }
  return {k, std::move(coeffs)};
}

TruncatedPolynomial beta_homomorphism(const SubproductSystem& sps, const ComplexVector& zeta,
                                      int k, const NCPolynomial& t) {
  return beta_homomorphism(compute_invariants(sps), zeta, k, t);
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Coefficients of p(pt + y) in y of total degree < k.
std::map<CommutativePolynomial::Exponents, Complex> taylor_low(const CommutativePolynomial& p,
                                                               const ComplexVector& pt, int k) {
  std::map<CommutativePolynomial::Exponents, Complex> out;
  const std::size_t nv = static_cast<std::size_t>(p.m() + p.n());
  for (const auto& [e, c] : p.terms()) {
    CommutativePolynomial::Exponents alpha(nv, 0);
    std::function<void(std::size_t, int, Complex)> rec = [&](std::size_t v, int budget,
                                                            Complex acc) {
      if (v == nv) {
        out[alpha] += acc;
        return;
      }
      for (int a = 0; a <= std::min(e[v], budget); ++a) {
        alpha[v] = a;
        const Complex base = pt(static_cast<Eigen::Index>(v));
        rec(v + 1, budget - a, acc * binomial(e[v], a) * std::pow(base, e[v] - a));
      }
      alpha[v] = 0;
    };
    rec(0, k - 1, c);
  }
  return out;
}

}  // namespace

bool root_multiplicity_at_least(const CommutativePolynomial& p, const ComplexVector& pt, int k,
                                double tol) {
  if (pt.size() != p.m() + p.n()) throw Error("root multiplicity: point has the wrong dimension");
  if (k <= 0 || p.is_zero()) return true;
  const double scale = p.max_abs_coefficient();
  for (const auto& [alpha, c] : taylor_low(p, pt, k))
    if (std::abs(c) > tol * scale) return false;
  return true;
}

bool curve_criterion(const CommutativePolynomial& p, const ComplexVector& pt, int k, int trials,
                     std::mt19937_64& rng, double tol) {
  const int nv = p.m() + p.n();
  if (pt.size() != nv) throw Error("curve criterion: point has the wrong dimension");
  if (k <= 0 || p.is_zero()) return true;
  const double scale = p.max_abs_coefficient();
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<TruncatedPolynomial> args;
    double magnitude = 1.0;
    for (int v = 0; v < nv; ++v) {
      std::vector<Complex> coeffs(static_cast<std::size_t>(k));
      coeffs[0] = pt(v);
      const ComplexVector r = random_vector(static_cast<std::size_t>(std::max(k - 1, 0)), rng);
      for (int i = 1; i < k; ++i) coeffs[static_cast<std::size_t>(i)] = r(i - 1);
      for (const Complex& c : coeffs) magnitude = std::max(magnitude, std::abs(c));
      args.emplace_back(k, std::move(coeffs));
    }
    const TruncatedPolynomial value = evaluate_truncated(p, args, k);
    const double bound = tol * scale * std::pow(magnitude, p.total_degree());
    if (value.max_abs() > bound) return false;
  }
  return true;
}

bool multi_equivalence_check(const CommutativePolynomial& p, const ComplexVector& pt, int k,
                             int trials, std::mt19937_64& rng, double tol) {
  return root_multiplicity_at_least(p, pt, k, tol) == curve_criterion(p, pt, k, trials, rng, tol);
}

bool vacuum_image_constraint(const std::vector<CommutativePolynomial>& gens,
                             const PolyballPoint& pt, int k_y, double tol) {
  const ComplexVector x = pt.joined();
  for (const auto& g : gens)
    if (!root_multiplicity_at_least(g, x, k_y, tol)) return false;
  return true;
}

bool vacuum_image_constraint(const SubproductSystem& x, const PolyballPoint& pt, int k_y,
                             double tol) {
  return vacuum_image_constraint(variety_generators(x), pt, k_y, tol);
}

std::string to_string(IsoResult::Outcome outcome) {
  switch (outcome) {
    case IsoResult::Outcome::kRefuted: return "refuted";
    case IsoResult::Outcome::kWitness: return "witness";
    case IsoResult::Outcome::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

Degree image(Degree d, bool switched) { return switched ? spsys::switched(d) : d; }

struct Split {
  Degree s, t;
  ComplexMatrix x_side;  // p^X_{s+t} W^X (p^X_s ⊗ p^X_t)
  ComplexMatrix y_side;  // p^Y_{π(s+t)} W^Y_{πs,πt}
  ComplexMatrix p_st;    // p^X_s ⊗ p^X_t
};

class IsoProblem {
 public:
  IsoProblem(const SubproductSystem& x, const SubproductSystem& y, bool switched)
      : x_(x), y_(y), switched_(switched) {
    const auto& cx = x.relation();
    const auto& cy = y.relation();
    for (const Degree d : degrees_up_to(x.truncation())) {
      if (switched && d.i > 0 && d.j > 0) reorder_[d] = lift_m_n(cy, d.i, d.j);
      for (int a = 0; a <= d.i; ++a)
        for (int b = 0; b <= d.j; ++b) {
          const Degree s{a, b};
          const Degree t = d - s;
          if (s.total() == 0 || t.total() == 0) continue;
          Split sp{s, t, {}, {}, kron(x.projection(s), x.projection(t))};
          ComplexMatrix wx = sp.p_st;
          if (s.j != 0 && t.i != 0) wx = big_w(cx, s, t) * wx;
          sp.x_side = x.projection(d) * wx;
          const Degree ps = image(s, switched), pt = image(t, switched);
          sp.y_side = y.projection(image(d, switched));
          if (ps.j != 0 && pt.i != 0) sp.y_side = sp.y_side * big_w(cy, ps, pt);
          splits_.push_back(std::move(sp));
        }
    }
  }

  std::map<Degree, ComplexMatrix> lifts(const ComplexMatrix& b, const ComplexMatrix& c) const {
    std::map<Degree, ComplexMatrix> v;
    for (const Degree d : degrees_up_to(x_.truncation())) {
      ComplexMatrix m = identity(1);
      for (int k = 0; k < d.i; ++k) m = kron(m, b);
      for (int k = 0; k < d.j; ++k) m = kron(m, c);
      if (auto it = reorder_.find(d); it != reorder_.end()) m = it->second * m;
      v[d] = std::move(m);
    }
    return v;
  }

  /// All residual entries, stacked.
  std::vector<Complex> residuals(const ComplexMatrix& b, const ComplexMatrix& c) const {
    const auto v = lifts(b, c);
    std::vector<Complex> out;
    const auto append = [&](const ComplexMatrix& m) {
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index q = 0; q < m.cols(); ++q) out.push_back(m(r, q));
    };
    for (const auto& [d, vd] : v)
      append(y_.projection(image(d, switched_)) * vd - vd * x_.projection(d));
    for (const Split& sp : splits_)
      append(v.at(sp.s + sp.t) * sp.x_side - sp.y_side * kron(v.at(sp.s), v.at(sp.t)) * sp.p_st);
    return out;
  }

  double residual(const ComplexMatrix& b, const ComplexMatrix& c) const {
    double s = 0.0;
    for (const Complex& r : residuals(b, c)) s += std::norm(r);
    return std::sqrt(s);
  }

 private:
  const SubproductSystem& x_;
  const SubproductSystem& y_;
  bool switched_;
  std::map<Degree, ComplexMatrix> reorder_;
  std::vector<Split> splits_;
};

ComplexMatrix polar_unitary(const ComplexMatrix& a) {
  if (a.size() == 0) return a;
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Basis of skew-Hermitian k×k matrices (k² real directions).
std::vector<ComplexMatrix> skew_basis(Eigen::Index k) {
  std::vector<ComplexMatrix> out;
  const Complex i(0.0, 1.0);
  for (Eigen::Index r = 0; r < k; ++r) {
    ComplexMatrix a = ComplexMatrix::Zero(k, k);
    a(r, r) = i;
    out.push_back(a);
    for (Eigen::Index s = r + 1; s < k; ++s) {
      ComplexMatrix re = ComplexMatrix::Zero(k, k), im = ComplexMatrix::Zero(k, k);
      re(r, s) = 1.0;
      re(s, r) = -1.0;
      im(r, s) = i;
      im(s, r) = i;
      out.push_back(re);
      out.push_back(im);
    }
  }
  return out;
}

Eigen::VectorXd to_real(const std::vector<Complex>& r) {
  Eigen::VectorXd v(2 * static_cast<Eigen::Index>(r.size()));
  for (std::size_t k = 0; k < r.size(); ++k) {
    v(2 * static_cast<Eigen::Index>(k)) = r[k].real();
    v(2 * static_cast<Eigen::Index>(k) + 1) = r[k].imag();
  }
  return v;
}

struct LocalResult {
  ComplexMatrix b, c;
  double residual;
};

// Levenberg–Marquardt in the tangent space, retracting to the unitary group
// through the polar factor of (B(I + A), C(I + A')).
LocalResult refine(const IsoProblem& prob, ComplexMatrix b, ComplexMatrix c, int iterations,
                   double target) {
  const auto sb = skew_basis(b.rows());
  const auto sc = skew_basis(c.rows());
  const std::size_t np = sb.size() + sc.size();
  const auto step = [&](const Eigen::VectorXd& delta, ComplexMatrix& nb, ComplexMatrix& nc) {
    ComplexMatrix ab = ComplexMatrix::Zero(b.rows(), b.cols());
    ComplexMatrix ac = ComplexMatrix::Zero(c.rows(), c.cols());
    for (std::size_t k = 0; k < sb.size(); ++k) ab += delta(static_cast<Eigen::Index>(k)) * sb[k];
    for (std::size_t k = 0; k < sc.size(); ++k)
      ac += delta(static_cast<Eigen::Index>(sb.size() + k)) * sc[k];
    nb = polar_unitary(b + b * ab);
    nc = polar_unitary(c + c * ac);
  };

  Eigen::VectorXd r = to_real(prob.residuals(b, c));
  double f = r.squaredNorm();
  double mu = 1e-3;
  const double h = 1e-7;
  for (int it = 0; it < iterations && std::sqrt(f) > target && np > 0; ++it) {
    Eigen::MatrixXd jac(r.size(), static_cast<Eigen::Index>(np));
    for (std::size_t k = 0; k < np; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(np));
      e(static_cast<Eigen::Index>(k)) = h;
      ComplexMatrix nb, nc;
      step(e, nb, nc);
      jac.col(static_cast<Eigen::Index>(k)) = (to_real(prob.residuals(nb, nc)) - r) / h;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 12; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
      const Eigen::VectorXd delta = lhs.ldlt().solve(-g);
      ComplexMatrix nb, nc;
      step(delta, nb, nc);
      const Eigen::VectorXd nr = to_real(prob.residuals(nb, nc));
      const double nf = nr.squaredNorm();
      if (nf < f) {
        improved = f - nf > 1e-15 * f;
        b = std::move(nb);
        c = std::move(nc);
        r = nr;
        f = nf;
        mu = std::max(mu / 3.0, 1e-12);
        break;
      }
      mu *= 4.0;
    }
    if (!improved) break;
  }
  return {b, c, std::sqrt(f)};
}

std::optional<Degree> profile_mismatch(const SubproductSystem& x, const SubproductSystem& y,
                                       bool switched) {
  const auto px = dimension_profile(x);
  const auto py = dimension_profile(y);
  for (const auto& [d, r] : px)
    if (py.at(image(d, switched)) != r) return d;
  return std::nullopt;
}

}  // namespace

double iso_residual(const SubproductSystem& x, const SubproductSystem& y, bool switched,
                    const ComplexMatrix& b, const ComplexMatrix& c) {
  if (x.truncation() != y.truncation())
    throw Error("iso: truncation degrees differ (" + std::to_string(x.truncation()) + " vs " +
                std::to_string(y.truncation()) + ")");
  return IsoProblem(x, y, switched).residual(b, c);
}

IsoResult iso_search(const SubproductSystem& x, const SubproductSystem& y,
                     const IsoOptions& options) {
  if (x.truncation() != y.truncation())
    throw Error("iso: truncation degrees differ (" + std::to_string(x.truncation()) + " vs " +
                std::to_string(y.truncation()) + ")");
  if (x.truncation() < 1) throw Error("iso: truncation degree must be at least 1");
  IsoResult result;
  std::mt19937_64 rng(options.seed);
  bool all_refuted = true;
  for (const bool sw : {false, true}) {
    IsoBranch branch;
    branch.switched = sw;
    branch.mismatch = profile_mismatch(x, y, sw);
    if (branch.mismatch) {
      branch.refuted = true;
      result.branches.push_back(branch);
      continue;
    }
    all_refuted = false;
    const IsoProblem prob(x, y, sw);
    const auto mb = static_cast<std::size_t>(x.m());
    const auto mc = static_cast<std::size_t>(x.n());
    double best = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < options.restarts && !result.witness; ++restart) {
      ComplexMatrix b = restart == 0 ? identity(mb) : random_unitary(mb, rng);
      ComplexMatrix c = restart == 0 ? identity(mc) : random_unitary(mc, rng);
      const LocalResult local = refine(prob, b, c, options.iterations, options.tol * 1e-3);
      best = std::min(best, local.residual);
      if (local.residual < options.tol)
        result.witness = IsoWitness{sw, local.b, local.c, local.residual};
    }
    branch.best_residual = best;
    result.branches.push_back(branch);
    if (result.witness) break;
  }
  if (result.witness)
    result.outcome = IsoResult::Outcome::kWitness;
  else if (all_refuted)
    result.outcome = IsoResult::Outcome::kRefuted;
  else
    result.outcome = IsoResult::Outcome::kInconclusive;
  return result;
}

}  // namespace spsys
