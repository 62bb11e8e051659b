#pragma once

#include <Eigen/Dense>

#include <compare>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spsys {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// Singular values below tol * sigma_max are treated as zero.
inline constexpr double kDefaultRankTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bidegree (i, j): i copies of E followed by j copies of F.
struct Degree {
  int i = 0;
  int j = 0;

  constexpr int total() const { return i + j; }
  constexpr Degree operator+(Degree o) const { return {i + o.i, j + o.j}; }
  constexpr Degree operator-(Degree o) const { return {i - o.i, j - o.j}; }
  constexpr bool operator==(const Degree&) const = default;
  constexpr auto operator<=>(const Degree&) const = default;
  constexpr bool dominated_by(Degree o) const { return i <= o.i && j <= o.j; }
};

constexpr Degree switched(Degree d) { return {d.j, d.i}; }

std::string to_string(Degree d);

/// Integer power with 0^0 = 1.
std::size_t ipow(std::size_t base, int exponent);

/// dim(E^{⊗i} ⊗ F^{⊗j}) for dim E = m, dim F = n.
std::size_t fiber_dim(int m, int n, Degree d);

/// A basis word e_{s_1}⊗…⊗e_{s_i}⊗f_{t_1}⊗…⊗f_{t_j}; letters are 0-based,
/// E letters first. The flat index is row-major with s_1 most significant.
struct TensorIndex {
  Degree degree;
  std::vector<int> word;

  std::size_t flat(int m, int n) const;
  static TensorIndex from_flat(int m, int n, Degree d, std::size_t flat);
};

ComplexMatrix identity(std::size_t n);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Largest absolute entry; 0 for an empty matrix.
double max_abs(const ComplexMatrix& a);

bool is_unitary(const ComplexMatrix& a, double tol = 1e-10);
bool is_projection(const ComplexMatrix& p, double tol = kDefaultRankTol);

/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

/// Number of singular values above tol * sigma_max.
std::size_t numeric_rank(const ComplexMatrix& a, double tol = kDefaultRankTol);

/// Rank of a (near-)projection: the number of singular values above 1/2.
/// Unlike numeric_rank this is absolute, so round-off on a zero projection
/// does not register as rank.
std::size_t projection_rank(const ComplexMatrix& p);

/// Orthogonal projection onto the column span of `columns`.
ComplexMatrix projection_onto_columns(const ComplexMatrix& columns,
                                      double tol = kDefaultRankTol);

/// Orthogonal projection onto span(vectors). Throws on an empty list since
/// the ambient dimension is then unknown; use the overload taking `dim`.
ComplexMatrix projection_onto_span(std::span<const ComplexVector> vectors,
                                   double tol = kDefaultRankTol);
ComplexMatrix projection_onto_span(std::span<const ComplexVector> vectors,
                                   std::size_t dim,
                                   double tol = kDefaultRankTol);

/// Projection onto the intersection of the ranges, computed as the
/// complement of the span of the stacked kernels (I - p_k).
ComplexMatrix meet_projections(std::span<const ComplexMatrix> ps,
                               double tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of the range of a projection. Columns of p
/// are taken greedily by largest residual, so p = I or any coordinate
/// projection yields standard basis vectors exactly.
ComplexMatrix range_basis(const ComplexMatrix& p);

/// p ≤ q in the projection order, tested as ‖p q p − p‖_max ≤ tol.
bool projection_leq(const ComplexMatrix& p, const ComplexMatrix& q,
                    double tol = kDefaultRankTol);

/// Haar-distributed random unitary.
template <class Rng>
ComplexMatrix random_unitary(std::size_t n, Rng& rng);

template <class Rng>
ComplexVector random_vector(std::size_t n, Rng& rng);


template <class Rng>
ComplexVector random_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = Complex(normal(rng), normal(rng));
  return v;
}

template <class Rng>
ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto sz = static_cast<Eigen::Index>(n);
  ComplexMatrix g(sz, sz);
  for (Eigen::Index r = 0; r < sz; ++r)
    for (Eigen::Index c = 0; c < sz; ++c) g(r, c) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (Eigen::Index c = 0; c < sz; ++c) {
    const Complex d = r(c, c);
    if (std::abs(d) > 0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

}  // namespace spsys
