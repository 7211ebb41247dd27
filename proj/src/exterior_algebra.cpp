#include "kusuoka/exterior_algebra.hpp"

#include <cmath>
#include <limits>

namespace kusuoka {

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

QFormBasis::QFormBasis(int d, int q) : d_(d), q_(q) {
  if (d < 1) throw ArgumentError("QFormBasis: dimension must be positive");
  if (q < 1 || q > d) throw ArgumentError("QFormBasis: degree out of range");
  std::vector<int> idx(q);
  for (int i = 0; i < q; ++i) idx[i] = i;
  while (true) {
    subsets_.push_back(idx);
    int pos = q - 1;
    while (pos >= 0 && idx[pos] == d - q + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < q; ++i) idx[i] = idx[i - 1] + 1;
  }
}

VectorXd sym_eigenvalues(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

namespace {

void require_pd(const MatrixXd& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) throw ArgumentError(std::string(who) + ": expected a square matrix");
  if (!a.allFinite()) throw DomainError(std::string(who) + ": non-finite entries");
  const VectorXd ev = sym_eigenvalues(a);
  if (!(ev(0) > 1e-12 * a.norm())) throw DomainError(std::string(who) + ": matrix is not positive definite");
}

}  // namespace

std::pair<double, double> pencil_range(const MatrixXd& a, const MatrixXd& b) {
  require_pd(a, "hilbert_metric");
  require_pd(b, "hilbert_metric");
  if (a.rows() != b.rows()) throw ArgumentError("hilbert_metric: dimension mismatch");
  Eigen::LLT<MatrixXd> llt(symmetrize(a));
  const MatrixXd l = llt.matrixL();
  MatrixXd x = l.triangularView<Eigen::Lower>().solve(symmetrize(b));
  x = l.triangularView<Eigen::Lower>().solve(x.transpose()).transpose();
  const VectorXd ev = sym_eigenvalues(x);
  return {ev(0), ev(ev.size() - 1)};
}

double hilbert_metric(const MatrixXd& a, const MatrixXd& b) {
  auto [lo, hi] = pencil_range(a, b);
  return std::max(0.0, std::log(hi / lo));
}

double hilbert_metric(std::span<const MatrixXd> a, std::span<const MatrixXd> b) {
  if (a.size() != b.size() || a.empty()) throw ArgumentError("hilbert_metric: state count mismatch");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t u = 0; u < a.size(); ++u) {
    auto [l, h] = pencil_range(a[u], b[u]);
    lo = std::min(lo, l);
    hi = std::max(hi, h);
  }
  return std::max(0.0, std::log(hi / lo));
}

SymBasis::SymBasis(int c) : c_(c) {
  if (c < 1) throw ArgumentError("sym_basis: form dimension must be positive");
  for (int i = 0; i < c; ++i)
    for (int j = i; j < c; ++j) pairs_.emplace_back(i, j);
}

MatrixXd SymBasis::element(int k) const {
  MatrixXd e = MatrixXd::Zero(c_, c_);
  auto [i, j] = pairs_.at(k);
  if (i == j) {
    e(i, i) = 1.0;
  } else {
    e(i, j) = e(j, i) = 1.0 / kSqrt2;
  }
  return e;
}

SymBasis sym_basis(int c) { return SymBasis(c); }

PushForwardFamily::PushForwardFamily(std::span<const MatrixXd> linear_parts, int q)
    : q(q),
      d(linear_parts.empty() ? 0 : static_cast<int>(linear_parts.front().rows())),
      form_dim(static_cast<int>(binomial(d, q))),
      basis(std::max(1, form_dim)) {
  if (linear_parts.empty()) throw ArgumentError("PushForwardFamily: no maps");
  if (q < 1 || q > d) throw ArgumentError("PushForwardFamily: degree out of range");
  for (const auto& a : linear_parts) {
    if (a.rows() != d || a.cols() != d) throw ArgumentError("PushForwardFamily: inconsistent dimensions");
    MatrixXd p = pullback_matrix(a, q);
    psi.push_back(basis.represent([&](const MatrixXd& e) { return push_forward(p, e); }));
    psi_t.push_back(psi.back().transpose());
    pullbacks.push_back(std::move(p));
  }
}

}  // namespace kusuoka
