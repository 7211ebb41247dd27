#include "kusuoka/lyapunov.hpp"

#include <algorithm>
#include <cmath>

namespace kusuoka {

namespace {

constexpr double kTiny = 1e-300;

MatrixXd psd_sqrt(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(a));
  const VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

struct Svd {
  MatrixXd left;         // left singular vectors of H^l mu^{1/2}
  VectorXd log_sigma;    // descending
  bool reduced_rank;
};

// One-sided Jacobi on the rows of D U, each row kept as exp(log_d) times a unit vector.
// Rotating rows i, k with d_k <= d_i only needs the ratio d_k / d_i, so the small singular
// values keep their relative accuracy however strongly the rows are graded.
Svd cocycle_svd(const CocycleState& s) {
  const int c = static_cast<int>(s.log_d.size());
  MatrixXd x = s.u;
  VectorXd log_d = s.log_d;
  MatrixXd j = MatrixXd::Identity(c, c);
  bool reduced = s.reduced_rank;
  auto normalize = [&](int i) {
    const double n = x.row(i).norm();
    if (n > 0.0) {
      x.row(i) /= n;
      log_d(i) += std::log(n);
    } else {
      reduced = true;
      log_d(i) = std::log(kTiny);
    }
  };
  for (int i = 0; i < c; ++i) normalize(i);
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int a = 0; a < c; ++a) {
      for (int b = a + 1; b < c; ++b) {
        const int i = log_d(a) >= log_d(b) ? a : b;
        const int k = i == a ? b : a;
        const double p = x.row(i).dot(x.row(k));
        if (std::abs(p) <= 1e-15) continue;
        rotated = true;
        const double rho = std::exp(log_d(k) - log_d(i));
        const double rz = (rho * rho - 1.0) / (2.0 * p);
        const double tau = (rz >= 0.0 ? 1.0 : -1.0) / (std::abs(rz) + std::sqrt(rho * rho + rz * rz));
        const double cs = 1.0 / std::sqrt(1.0 + tau * tau * rho * rho);
        const double sn = tau * rho * cs;
        const VectorXd xi = x.row(i).transpose();
        const VectorXd xk = x.row(k).transpose();
        x.row(i) = (cs * (xi - tau * rho * rho * xk)).transpose();
        x.row(k) = (cs * (xk + tau * xi)).transpose();
        const VectorXd ji = j.row(i).transpose();
        j.row(i) = (cs * ji - sn * j.row(k).transpose()).transpose();
        j.row(k) = (sn * ji + cs * j.row(k).transpose()).transpose();
        normalize(i);
        normalize(k);
      }
    }
    if (!rotated) break;
  }
  std::vector<int> order(c);
  for (int i = 0; i < c; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return log_d(a) > log_d(b); });
  const MatrixXd left = s.q * j.transpose();
  Svd out{MatrixXd(c, c), VectorXd(c), reduced};
  for (int i = 0; i < c; ++i) {
    out.left.col(i) = left.col(order[i]);
    out.log_sigma(i) = log_d(order[i]);
  }
  return out;
}

double relative_gap(const VectorXd& descending) {
  if (descending.size() < 2 || !(descending(0) > 0.0)) return 1.0;
  return (descending(0) - descending(1)) / descending(0);
}

}  // namespace

CocycleState cocycle_state(const PushForwardFamily& family, const MatrixXd& mu_total, std::span<const Symbol> word,
                           int l) {
  const int c = family.form_dim;
  if (l < 1) throw ArgumentError("lyap_matrix: l must be at least 1");
  if (static_cast<int>(word.size()) < l) throw ArgumentError("lyap_matrix: word shorter than l");
  if (mu_total.rows() != c || mu_total.cols() != c) throw ArgumentError("lyap_matrix: mu has the wrong dimension");

  CocycleState s;
  s.l = l;
  s.q = MatrixXd::Identity(c, c);
  s.log_d = VectorXd::Zero(c);
  s.u = MatrixXd::Identity(c, c);
  // Start from mu^{1/2} = Q0 R0, then multiply by P_{x_{l-1}}, ..., P_{x_0} on the left.
  auto absorb = [&](const MatrixXd& m) {
    Eigen::HouseholderQR<MatrixXd> qr(m);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(c, c);
    MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < c; ++i) {
      if (r(i, i) < 0.0) {
        r.row(i) *= -1.0;
        q.col(i) *= -1.0;
      }
    }
    const double scale = std::max(r.norm(), kTiny);
    VectorXd log_r(c);
    for (int i = 0; i < c; ++i) {
      double d = r(i, i);
      if (d < kTiny * scale) {
        s.reduced_rank = true;
        d = kTiny * scale;
        r(i, i) = d;
      }
      log_r(i) = std::log(d);
      r.row(i) /= d;
    }
    // R D U = (D_R D) (D^{-1} R~ D) U with R~ unit upper triangular.
    MatrixXd conj = r;
    for (int i = 0; i < c; ++i)
      for (int j = i + 1; j < c; ++j) conj(i, j) *= std::exp(s.log_d(j) - s.log_d(i));
    s.u = (conj * s.u).eval();
    s.log_d += log_r;
    s.q = std::move(q);
  };

  absorb(psd_sqrt(mu_total));
  for (int j = l - 1; j >= 0; --j) {
    if (word[j] >= family.symbols()) throw ArgumentError("lyap_matrix: symbol out of range");
    absorb(family.pullbacks[word[j]] * s.q);
  }
  return s;
}

LyapunovEstimate lyap_matrix(const PushForwardFamily& family, const MatrixXd& mu_total, std::span<const Symbol> word,
                             int l) {
  const Svd svd = cocycle_svd(cocycle_state(family, mu_total, word, l));
  LyapunovEstimate est;
  est.log_singular = svd.log_sigma;
  est.eigenvalues = (svd.log_sigma / static_cast<double>(l)).array().exp().matrix();
  est.lambda = symmetrize(svd.left * est.eigenvalues.asDiagonal() * svd.left.transpose());
  est.gap = relative_gap(est.eigenvalues);
  est.reduced_rank = svd.reduced_rank;
  return est;
}

OseledetsEstimate oseledets_projection(const PushForwardFamily& family, const MatrixXd& mu_total,
                                       std::span<const Symbol> word, int l) {
  const Svd svd = cocycle_svd(cocycle_state(family, mu_total, word, l));
  const double top = svd.log_sigma(0);
  const VectorXd sq = (2.0 * (svd.log_sigma.array() - top)).exp().matrix();
  OseledetsEstimate est;
  est.projection = symmetrize(svd.left * (sq / sq.norm()).asDiagonal() * svd.left.transpose());
  const MatrixXd p = est.projection / est.projection.trace();
  est.idempotency_defect = (p * p - p).norm();
  est.rank_ratio = sq.size() > 1 ? sq(1) : 0.0;
  est.gap = relative_gap((svd.log_sigma / static_cast<double>(l)).array().exp().matrix());
  return est;
}

double hs_angle(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArgumentError("hs_angle: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw ArgumentError("hs_angle: zero matrix");
  const double chord = (a / na - b / nb).norm();
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

}  // namespace kusuoka
