#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kusuoka/errors.hpp"

namespace kusuoka {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Eigen::MatrixXd;
using Eigen::VectorXd;

long binomial(int n, int k);

/// Lexicographically ordered q-subsets of {0, ..., d-1}; these index a basis of q-forms.
class QFormBasis {
 public:
  QFormBasis(int d, int q);

  int d() const { return d_; }
  int q() const { return q_; }
  int size() const { return static_cast<int>(subsets_.size()); }
  const std::vector<std::vector<int>>& subsets() const { return subsets_; }

 private:
  int d_;
  int q_;
  std::vector<std::vector<int>> subsets_;
};

/// Matrix of the pull-back w -> w(A., ..., A.) on q-forms.
///
/// Entry (J, I) is the minor det A[I, J], so q = 1 gives the transpose of A and
/// the pull-back of a product AB is pullback(B) * pullback(A).
template <typename Derived>
Matrix<typename Derived::Scalar> pullback_matrix(const Eigen::MatrixBase<Derived>& a, int q) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw ArgumentError("pullback_matrix: matrix must be square");
  const int d = static_cast<int>(a.rows());
  if (q < 1 || q > d) throw ArgumentError("pullback_matrix: degree out of range");
  if (!a.allFinite()) throw ArgumentError("pullback_matrix: non-finite entries");

  const QFormBasis basis(d, q);
  const int c = basis.size();
  Matrix<Scalar> p(c, c);
  Matrix<Scalar> minor(q, q);
  for (int ii = 0; ii < c; ++ii) {
    const auto& rows = basis.subsets()[ii];
    for (int jj = 0; jj < c; ++jj) {
      const auto& cols = basis.subsets()[jj];
      for (int r = 0; r < q; ++r)
        for (int s = 0; s < q; ++s) minor(r, s) = a(rows[r], cols[s]);
      p(jj, ii) = minor.determinant();
    }
  }
  return p;
}

/// Psi(A) = P^T A P.
template <typename DerivedP, typename DerivedA>
auto push_forward(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedA>& a) {
  if (p.rows() != a.rows() || a.rows() != a.cols())
    throw ArgumentError("push_forward: dimension mismatch");
  return (p.transpose() * a * p).eval();
}

/// Adjoint of push_forward under the HS pairing: P A P^T.
template <typename DerivedP, typename DerivedA>
auto push_forward_adjoint(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedA>& a) {
  if (p.cols() != a.rows() || a.rows() != a.cols())
    throw ArgumentError("push_forward_adjoint: dimension mismatch");
  return (p * a * p.transpose()).eval();
}

/// (A, B)_HS = tr(A^T B).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar hs_inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArgumentError("hs_inner: dimension mismatch");
  return a.cwiseProduct(b).sum();
}

/// Hilbert projective distance log(lmax / lmin) of the pencil (A, B) on the PD cone.
double hilbert_metric(const MatrixXd& a, const MatrixXd& b);

/// Hilbert distance on the product cone of per-state PD blocks.
double hilbert_metric(std::span<const MatrixXd> a, std::span<const MatrixXd> b);

/// Extreme generalized eigenvalues of B relative to A, both PD.
std::pair<double, double> pencil_range(const MatrixXd& a, const MatrixXd& b);

/// HS-orthonormal basis of C x C symmetric matrices: E_ii, then (E_ij + E_ji)/sqrt(2) for i < j,
/// enumerated row by row over the upper triangle.
class SymBasis {
 public:
  explicit SymBasis(int c);

  int form_dim() const { return c_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  MatrixXd element(int k) const;

  template <typename Scalar>
  Vector<Scalar> coords(const Matrix<Scalar>& a) const {
    Vector<Scalar> v(size());
    for (int k = 0; k < size(); ++k) {
      auto [i, j] = pairs_[k];
      v(k) = i == j ? a(i, i) : Scalar(kSqrt2) * Scalar(0.5) * (a(i, j) + a(j, i));
    }
    return v;
  }

  template <typename Scalar>
  Matrix<Scalar> matrix(const Vector<Scalar>& v) const {
    Matrix<Scalar> a = Matrix<Scalar>::Zero(c_, c_);
    for (int k = 0; k < size(); ++k) {
      auto [i, j] = pairs_[k];
      if (i == j) {
        a(i, i) = v(k);
      } else {
        a(i, j) = v(k) / Scalar(kSqrt2);
        a(j, i) = a(i, j);
      }
    }
    return a;
  }

  /// m x m matrix of a linear map on symmetric matrices in this basis.
  template <typename Op>
  MatrixXd represent(Op&& op) const {
    MatrixXd out(size(), size());
    for (int l = 0; l < size(); ++l) out.col(l) = coords<double>(op(element(l)));
    return out;
  }

 private:
  static constexpr double kSqrt2 = 1.41421356237309504880;
  int c_;
  std::vector<std::pair<int, int>> pairs_;
};

SymBasis sym_basis(int c);

/// Pull-backs and push-forward operators of a family of linear maps at degree q.
struct PushForwardFamily {
  PushForwardFamily(std::span<const MatrixXd> linear_parts, int q);

  int q;
  int d;
  int form_dim;
  SymBasis basis;
  std::vector<MatrixXd> pullbacks;
  std::vector<MatrixXd> psi;
  std::vector<MatrixXd> psi_t;

  int symbols() const { return static_cast<int>(pullbacks.size()); }
  int block_size() const { return basis.size(); }
};

/// Symmetric part of a matrix; keeps round-off asymmetry from accumulating.
inline MatrixXd symmetrize(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

/// Eigenvalues of a symmetric matrix, ascending.
VectorXd sym_eigenvalues(const MatrixXd& a);

}  // namespace kusuoka
