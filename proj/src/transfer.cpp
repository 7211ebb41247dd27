#include "kusuoka/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace kusuoka {

namespace {

double cone_distance(const BlockOperator<double>& op, const VectorXd& a, const VectorXd& b) {
  const auto ma = op.unstack(a);
  const auto mb = op.unstack(b);
  return hilbert_metric(std::span<const MatrixXd>(ma), std::span<const MatrixXd>(mb));
}

bool in_open_cone(const BlockOperator<double>& op, const VectorXd& x) {
  for (const auto& block : op.unstack(x)) {
    const VectorXd ev = sym_eigenvalues(block);
    if (!(ev(0) > 1e-12 * block.norm())) return false;
  }
  return true;
}

}  // namespace

VectorXd apply_power(const BlockOperator<double>& op, VectorXd x, int power) {
  for (int j = 0; j < power; ++j) x = op.apply(x);
  return x;
}

double estimate_cone_diameter(const BlockOperator<double>& op, int power, int random_directions, std::uint64_t seed) {
  const int c = op.family().form_dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<VectorXd> dirs;
  for (int j = 0; j < c; ++j) dirs.push_back(VectorXd::Unit(c, j));
  for (int j = 0; j < random_directions; ++j) {
    VectorXd v(c);
    for (int i = 0; i < c; ++i) v(i) = normal(rng);
    dirs.push_back(v.normalized());
  }

  std::vector<VectorXd> images;
  const MatrixXd zero = MatrixXd::Zero(c, c);
  for (int u = 0; u < op.states(); ++u) {
    for (const auto& x : dirs) {
      std::vector<MatrixXd> blocks(op.states(), zero);
      blocks[u] = x * x.transpose();
      VectorXd y = apply_power(op, op.stack(blocks), power);
      if (!in_open_cone(op, y)) return std::numeric_limits<double>::infinity();
      images.push_back(y / y.norm());
    }
  }
  double diam = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j) diam = std::max(diam, cone_distance(op, images[i], images[j]));
  return diam;
}

SpectralResult perron(const BlockOperator<double>& op, const PerronOptions& options) {
  if (!(options.tol > 0.0)) throw ArgumentError("perron: tolerance must be positive");
  const int c = op.family().form_dim;
  SpectralResult res;
  if (options.estimate_diameter)
    res.cone_diameter = estimate_cone_diameter(op, op.memory(), options.diameter_directions, options.seed);

  std::vector<MatrixXd> ident(op.states(), MatrixXd::Identity(c, c));
  VectorXd x = op.stack(ident);
  x /= x.norm();
  double theta = std::numeric_limits<double>::infinity();
  double beta = 0.0;
  int it = 0;
  while (theta >= options.tol) {
    if (++it > options.max_iter)
      throw NonConvergenceError("perron: power iteration did not converge", theta, res.cone_diameter, it - 1);
    VectorXd y = op.apply(x);
    beta = y.norm();
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DegenerateError("perron: iterate collapsed");
    y /= beta;
    theta = cone_distance(op, x, y);
    x = std::move(y);
  }
  res.iterations = it;
  res.residual_theta = theta;
  res.beta = beta;

  VectorXd mu = x;
  double change = std::numeric_limits<double>::infinity();
  int jt = 0;
  while (change >= options.tol) {
    if (++jt > options.max_iter)
      throw NonConvergenceError("perron: adjoint iteration did not converge", change, res.cone_diameter, jt - 1);
    VectorXd y = op.apply_adjoint(mu);
    const double n = y.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateError("perron: adjoint iterate collapsed");
    y /= n;
    change = (y - mu).norm();
    mu = std::move(y);
  }
  res.adjoint_iterations = jt;

  const double pairing = x.dot(mu);
  if (!(pairing > 0.0)) throw DegenerateError("perron: eigenvectors have nonpositive pairing");
  mu /= pairing;

  res.right_residual = (op.apply(x) - beta * x).norm() / (beta * x.norm());
  res.left_residual = (op.apply_adjoint(mu) - beta * mu).norm() / (beta * mu.norm());
  for (auto& q : op.unstack(x)) res.Q.push_back(symmetrize(q));
  for (auto& m : op.unstack(mu)) res.mu.push_back(symmetrize(m));
  return res;
}

double pressure(std::shared_ptr<const PushForwardFamily> family, const Potential& v, const PerronOptions& options) {
  PerronOptions opts = options;
  opts.estimate_diameter = false;
  return std::log(perron(build_block_operator(std::move(family), v), opts).beta);
}

double pressure(const IfsSpec& ifs, int q, const Potential& v, const PerronOptions& options) {
  return pressure(make_family(ifs, q), v, options);
}

double pressure_root(std::shared_ptr<const PushForwardFamily> family, const Potential& vhat, double tol) {
  if (!(vhat.min() > 0.0)) throw ArgumentError("pressure_root: vhat must be strictly positive");
  if (!(tol > 0.0)) throw ArgumentError("pressure_root: tolerance must be positive");
  auto f = [&](double c) { return pressure(family, vhat.scaled(-c)); };

  double lo = -1.0, hi = 1.0;
  double flo = f(lo), fhi = f(hi);
  for (int k = 0; flo < 0.0; ++k) {
    if (k > 60) throw NonConvergenceError("pressure_root: could not bracket the root", flo, 0.0, k);
    hi = lo;
    fhi = flo;
    lo *= 2.0;
    flo = f(lo);
  }
  for (int k = 0; fhi > 0.0; ++k) {
    if (k > 60) throw NonConvergenceError("pressure_root: could not bracket the root", fhi, 0.0, k);
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = f(hi);
  }
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= tol || mid == lo || mid == hi) return mid;
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NonConvergenceError("pressure_root: bisection did not reach the tolerance", hi - lo, 0.0, 200);
}

double pressure_root(const IfsSpec& ifs, int q, const Potential& vhat, double tol) {
  return pressure_root(make_family(ifs, q), vhat, tol);
}

std::vector<std::complex<double>> dense_spectrum(const BlockOperator<double>& op) {
  Eigen::EigenSolver<MatrixXd> es(op.dense(), false);
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::stable_sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  return ev;
}

}  // namespace kusuoka
