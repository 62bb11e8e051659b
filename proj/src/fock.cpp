#include "spsys/fock.hpp"

namespace spsys {

TruncatedFock::TruncatedFock(SubproductSystem sps) : sps_(std::move(sps)) {
  blocks_ = degrees_up_to(sps_.truncation());
  for (const Degree d : blocks_) {
    offsets_[d] = total_dim_;
    bases_[d] = sps_.fiber_basis(d);
    total_dim_ += static_cast<std::size_t>(bases_[d].cols());
  }
}

std::size_t TruncatedFock::block_dim(Degree d) const {
  return static_cast<std::size_t>(basis(d).cols());
}

std::size_t TruncatedFock::offset(Degree d) const {
  auto it = offsets_.find(d);
  if (it == offsets_.end()) throw Error("Fock space has no block " + to_string(d));
  return it->second;
}

const ComplexMatrix& TruncatedFock::basis(Degree d) const {
  auto it = bases_.find(d);
  if (it == bases_.end()) throw Error("Fock space has no block " + to_string(d));
  return it->second;
}

ComplexVector TruncatedFock::embed(Degree d, const ComplexVector& x) const {
  const ComplexMatrix& b = basis(d);
  if (x.size() != b.rows()) throw Error("embed: vector length does not match " + to_string(d));
  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(total_dim_));
  out.segment(static_cast<Eigen::Index>(offset(d)), b.cols()) = b.adjoint() * x;
  return out;
}

FockOperator::FockOperator(std::shared_ptr<const TruncatedFock> fock, ComplexMatrix matrix)
    : fock_(std::move(fock)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(fock_->total_dim());
  if (matrix_.rows() != n || matrix_.cols() != n)
    throw Error("Fock operator: matrix size does not match the Fock space");
}

FockOperator FockOperator::identity(std::shared_ptr<const TruncatedFock> fock) {
  const auto n = fock->total_dim();
  return {std::move(fock), spsys::identity(n)};
}

FockOperator FockOperator::zero(std::shared_ptr<const TruncatedFock> fock) {
  const auto n = static_cast<Eigen::Index>(fock->total_dim());
  return {std::move(fock), ComplexMatrix::Zero(n, n)};
}

ComplexMatrix FockOperator::block(Degree to, Degree from) const {
  return matrix_.block(static_cast<Eigen::Index>(fock_->offset(to)),
                       static_cast<Eigen::Index>(fock_->offset(from)),
                       static_cast<Eigen::Index>(fock_->block_dim(to)),
                       static_cast<Eigen::Index>(fock_->block_dim(from)));
}

void FockOperator::check_same(const FockOperator& o) const {
  if (fock_ != o.fock_) throw Error("Fock operators act on different Fock spaces");
}

FockOperator FockOperator::operator+(const FockOperator& o) const {
  check_same(o);
  return {fock_, matrix_ + o.matrix_};
}

FockOperator FockOperator::operator-(const FockOperator& o) const {
  check_same(o);
  return {fock_, matrix_ - o.matrix_};
}

FockOperator FockOperator::operator*(const FockOperator& o) const {
  check_same(o);
  return {fock_, matrix_ * o.matrix_};
}

FockOperator FockOperator::operator*(Complex s) const { return {fock_, matrix_ * s}; }

FockOperator operator*(Complex s, const FockOperator& t) { return t * s; }

namespace {

void check_in_fiber(const TruncatedFock& fock, Degree d, const ComplexVector& x, double tol) {
  const SubproductSystem& sps = fock.system();
  if (!sps.contains(d))
    throw Error("degree " + to_string(d) + " exceeds the truncation degree " +
                std::to_string(sps.truncation()));
  const ComplexMatrix& p = sps.projection(d);
  if (x.size() != p.rows())
    throw Error("vector of length " + std::to_string(x.size()) + " does not fit fiber " +
                to_string(d));
  if ((p * x - x).norm() > tol * std::max(1.0, x.norm()))
    throw Error("vector is not in the fiber X" + to_string(d));
}

}  // namespace

FockOperator creation_operator(const std::shared_ptr<const TruncatedFock>& fock, Degree d,
                               const ComplexVector& x, double tol) {
  check_in_fiber(*fock, d, x, tol);
  const SubproductSystem& sps = fock->system();
  const CommutationRelation& cr = sps.relation();
  FockOperator out = FockOperator::zero(fock);
  ComplexMatrix& m = out.mutable_matrix();
  const ComplexMatrix xm = x;
  for (const Degree src : fock->blocks()) {
    const Degree dst = d + src;
    if (dst.total() > sps.truncation()) continue;
    const ComplexMatrix& bs = fock->basis(src);
    const ComplexMatrix& bt = fock->basis(dst);
    if (bs.cols() == 0 || bt.cols() == 0) continue;
    ComplexMatrix image = kron(xm, bs);
    if (d.j != 0 && src.i != 0) image = big_w(cr, d, src) * image;
    m.block(static_cast<Eigen::Index>(fock->offset(dst)),
            static_cast<Eigen::Index>(fock->offset(src)), bt.cols(), bs.cols()) =
        bt.adjoint() * image;
  }
  return out;
}

FockOperator creation_via_generators(const std::shared_ptr<const TruncatedFock>& fock,
                                     Degree d, const ComplexVector& x, double tol) {
  check_in_fiber(*fock, d, x, tol);
  if (d.total() == 0) return x(0) * FockOperator::identity(fock);
  if (d.total() == 1) return creation_operator(fock, d, x, tol);
  const SubproductSystem& sps = fock->system();
  const int m = sps.m(), n = sps.n();
  // x = Σ_s g_s ⊗ x_s with g_s the first letter (e_s if i > 0, else f_s).
  const bool peel_e = d.i > 0;
  const Degree first = peel_e ? Degree{1, 0} : Degree{0, 1};
  const Degree rest = d - first;
  const int letters = peel_e ? m : n;
  const auto rest_dim = static_cast<Eigen::Index>(fiber_dim(m, n, rest));
  const ComplexMatrix& p_rest = sps.projection(rest);
  FockOperator out = FockOperator::zero(fock);
  for (int s = 0; s < letters; ++s) {
    const ComplexVector xs = p_rest * x.segment(s * rest_dim, rest_dim);
    if (xs.norm() == 0.0) continue;
    const ComplexVector g = ComplexVector::Unit(letters, s);
    out = out + creation_operator(fock, first, g, tol) *
                    creation_via_generators(fock, rest, xs, tol);
  }
  return out;
}

std::pair<double, double> op_norm_check(const std::shared_ptr<const TruncatedFock>& fock,
                                        Degree d, const ComplexVector& x, double tol) {
  return {operator_norm(creation_operator(fock, d, x, tol).matrix()), x.norm()};
}

FockOperator fourier_coefficient(const FockOperator& t, Degree shift) {
  const TruncatedFock& fock = t.fock();
  FockOperator out = FockOperator::zero(t.fock_ptr());
  ComplexMatrix& m = out.mutable_matrix();
  for (const Degree src : fock.blocks()) {
    const Degree dst = src + shift;
    if (dst.i < 0 || dst.j < 0 || dst.total() > fock.system().truncation()) continue;
    const auto r = static_cast<Eigen::Index>(fock.offset(dst));
    const auto c = static_cast<Eigen::Index>(fock.offset(src));
    const auto h = static_cast<Eigen::Index>(fock.block_dim(dst));
    const auto w = static_cast<Eigen::Index>(fock.block_dim(src));
    m.block(r, c, h, w) = t.matrix().block(r, c, h, w);
  }
  return out;
}

FockOperator fourier_total(const FockOperator& t, int k) {
  FockOperator out = FockOperator::zero(t.fock_ptr());
  for (int i = 0; i <= k; ++i) out = out + fourier_coefficient(t, {i, k - i});
  return out;
}

FockOperator cesaro_reconstruct(const FockOperator& t, int p) {
  if (p < 1) throw Error("cesaro_reconstruct: P must be at least 1");
  FockOperator out = FockOperator::zero(t.fock_ptr());
  for (int k = 0; k < p; ++k)
    out = out + (1.0 - static_cast<double>(k) / p) * fourier_total(t, k);
  return out;
}

Complex vacuum_character(const FockOperator& t) { return t.matrix()(0, 0); }

}  // namespace spsys
