#include "spsys/tensor_linalg.hpp"

#include <algorithm>
#include <cmath>

namespace spsys {

std::string to_string(Degree d) {
  return "(" + std::to_string(d.i) + "," + std::to_string(d.j) + ")";
}

std::size_t ipow(std::size_t base, int exponent) {
  if (exponent < 0) throw Error("ipow: negative exponent");
  std::size_t r = 1;
  for (int k = 0; k < exponent; ++k) r *= base;
  return r;
}

std::size_t fiber_dim(int m, int n, Degree d) {
  return ipow(static_cast<std::size_t>(m), d.i) * ipow(static_cast<std::size_t>(n), d.j);
}

std::size_t TensorIndex::flat(int m, int n) const {
  if (word.size() != static_cast<std::size_t>(degree.total()))
    throw Error("TensorIndex: word length does not match degree");
  std::size_t idx = 0;
  for (int p = 0; p < degree.total(); ++p) {
    const int base = p < degree.i ? m : n;
    const int letter = word[static_cast<std::size_t>(p)];
    if (letter < 0 || letter >= base) throw Error("TensorIndex: letter out of range");
    idx = idx * static_cast<std::size_t>(base) + static_cast<std::size_t>(letter);
  }
  return idx;
}

TensorIndex TensorIndex::from_flat(int m, int n, Degree d, std::size_t flat) {
  TensorIndex t{d, std::vector<int>(static_cast<std::size_t>(d.total()))};
  for (int p = d.total() - 1; p >= 0; --p) {
    const auto base = static_cast<std::size_t>(p < d.i ? m : n);
    t.word[static_cast<std::size_t>(p)] = static_cast<int>(flat % base);
    flat /= base;
  }
  return t;
}

ComplexMatrix identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return ComplexMatrix::Identity(k, k);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector r(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) r.segment(i * b.size(), b.size()) = a(i) * b;
  return r;
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const ComplexMatrix id = identity(static_cast<std::size_t>(a.rows()));
  return max_abs(a * a.adjoint() - id) <= tol && max_abs(a.adjoint() * a - id) <= tol;
}

bool is_projection(const ComplexMatrix& p, double tol) {
  if (p.rows() != p.cols()) return false;
  return max_abs(p - p.adjoint()) <= tol && max_abs(p * p - p) <= tol;
}

namespace {

Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

}  // namespace

double operator_norm(const ComplexMatrix& a) {
  const auto s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

std::size_t numeric_rank(const ComplexMatrix& a, double tol) {
  const auto s = singular_values(a);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol * s(0)) ++r;
  return r;
}

std::size_t projection_rank(const ComplexMatrix& p) {
  const auto s = singular_values(p);
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > 0.5) ++r;
  return r;
}

namespace {

// Singular values at or below tol * max(sigma_max, floor) count as zero.
ComplexMatrix column_span_projection(const ComplexMatrix& columns, double tol, double floor) {
  const Eigen::Index d = columns.rows();
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  if (columns.size() == 0) return p;
  Eigen::JacobiSVD<ComplexMatrix> svd(columns, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return p;
  const double cut = tol * std::max(s(0), floor);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  const ComplexMatrix u = svd.matrixU().leftCols(r);
  p = u * u.adjoint();
  return p;
}

}  // namespace

ComplexMatrix projection_onto_columns(const ComplexMatrix& columns, double tol) {
  return column_span_projection(columns, tol, 0.0);
}

ComplexMatrix projection_onto_span(std::span<const ComplexVector> vectors, double tol) {
  if (vectors.empty())
    throw Error("projection_onto_span: empty list with unspecified dimension");
  return projection_onto_span(vectors, static_cast<std::size_t>(vectors.front().size()), tol);
}

ComplexMatrix projection_onto_span(std::span<const ComplexVector> vectors,
                                   std::size_t dim, double tol) {
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix cols(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != d) throw Error("projection_onto_span: vector length mismatch");
    cols.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  return projection_onto_columns(cols, tol);
}

ComplexMatrix meet_projections(std::span<const ComplexMatrix> ps, double tol) {
  if (ps.empty()) throw Error("meet_projections: empty list");
  const Eigen::Index d = ps.front().rows();
  ComplexMatrix kernels(d, d * static_cast<Eigen::Index>(ps.size()));
  const ComplexMatrix id = identity(static_cast<std::size_t>(d));
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (ps[k].rows() != d || ps[k].cols() != d)
      throw Error("meet_projections: dimension mismatch");
    kernels.middleCols(static_cast<Eigen::Index>(k) * d, d) = id - ps[k];
  }
  // Kernels of projections live on the unit scale, so round-off in an
  // (almost) identity input must not set the rank threshold.
  ComplexMatrix meet = id - column_span_projection(kernels, tol, 1.0);
  // Re-symmetrize; the subtraction leaves O(eps) skew parts.
  return (meet + meet.adjoint()) / 2.0;
}

ComplexMatrix range_basis(const ComplexMatrix& p) {
  const Eigen::Index d = p.rows();
  const auto rank = static_cast<Eigen::Index>(projection_rank(p));
  ComplexMatrix basis(d, rank);
  ComplexMatrix residual = p;
  std::vector<bool> used(static_cast<std::size_t>(p.cols()), false);
  for (Eigen::Index r = 0; r < rank; ++r) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    for (Eigen::Index c = 0; c < residual.cols(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double nrm = residual.col(c).norm();
      if (nrm > best_norm * (1.0 + 1e-12)) {
        best_norm = nrm;
        best = c;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    ComplexVector v = residual.col(best);
    // Two passes of Gram-Schmidt against the accepted columns.
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index q = 0; q < r; ++q) v -= basis.col(q) * basis.col(q).dot(v);
    v /= v.norm();
    basis.col(r) = v;
    for (Eigen::Index c = 0; c < residual.cols(); ++c)
      residual.col(c) -= v * v.dot(residual.col(c));
  }
  return basis;
}

bool projection_leq(const ComplexMatrix& p, const ComplexMatrix& q, double tol) {
  return max_abs(p * q * p - p) <= tol;
}

}  // namespace spsys
