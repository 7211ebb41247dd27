#include <algorithm>
#include <cmath>
#include <random>

#include "kusuoka/transfer.hpp"

namespace kusuoka {

CylinderMeasure::CylinderMeasure(std::shared_ptr<const PushForwardFamily> family, Potential v, SpectralResult spectral)
    : family_(std::move(family)), v_(std::move(v)), spectral_(std::move(spectral)), log_beta_(std::log(spectral_.beta)) {
  if (!family_) throw ArgumentError("CylinderMeasure: missing family");
  if (v_.symbols() != family_->symbols()) throw ArgumentError("CylinderMeasure: potential alphabet mismatch");
  int states = 1;
  for (int j = 1; j < v_.memory(); ++j) states *= family_->symbols();
  if (static_cast<int>(spectral_.Q.size()) != states || static_cast<int>(spectral_.mu.size()) != states)
    throw ArgumentError("CylinderMeasure: spectral data does not match the potential memory");
}

CylinderMeasure kusuoka_measure(const IfsSpec& ifs, int q, const Potential& v, const PerronOptions& options) {
  auto family = make_family(ifs, q);
  auto spectral = perron(build_block_operator(family, v), options);
  return CylinderMeasure(family, v, std::move(spectral));
}

int CylinderMeasure::state_of(std::span<const Symbol> w) const {
  const int k = memory();
  if (static_cast<int>(w.size()) < k - 1) throw ArgumentError("state_of: word shorter than memory - 1");
  int idx = 0;
  for (int a = 0; a < k - 1; ++a) idx = idx * symbols() + w[a];
  return idx;
}

CylinderMeasure::Factor CylinderMeasure::factor(std::span<const Symbol> w) const {
  const int k = memory();
  const int n = static_cast<int>(w.size());
  if (n < k - 1) throw ArgumentError("cylinder: word shorter than memory - 1");
  for (Symbol s : w)
    if (s >= symbols()) throw ArgumentError("cylinder: symbol out of range");
  const int c = family_->form_dim;
  Factor f{MatrixXd::Identity(c, c), 0.0, 0};
  const int transitions = n - k + 1;
  for (int a = 0; a < transitions; ++a) {
    f.p = f.p * family_->pullbacks[w[a]];
    const double nrm = f.p.norm();
    if (!(nrm > 0.0)) throw DegenerateError("cylinder: product collapsed");
    f.p /= nrm;
    f.log_scale += 2.0 * std::log(nrm) + v_(w.subspan(a, k)) - log_beta_;
  }
  f.tail_state = state_of(w.subspan(transitions));
  return f;
}

MatrixXd CylinderMeasure::mu(std::span<const Symbol> w) const {
  const int k = memory();
  if (static_cast<int>(w.size()) < k - 1) {
    Word ext(w.begin(), w.end());
    ext.push_back(0);
    MatrixXd sum = MatrixXd::Zero(family_->form_dim, family_->form_dim);
    for (int i = 0; i < symbols(); ++i) {
      ext.back() = static_cast<Symbol>(i);
      sum += mu(ext);
    }
    return sum;
  }
  const Factor f = factor(w);
  return symmetrize(std::exp(f.log_scale) * (f.p * spectral_.mu[f.tail_state] * f.p.transpose()));
}

double CylinderMeasure::kappa(std::span<const Symbol> w) const {
  const int k = memory();
  if (static_cast<int>(w.size()) < k - 1) {
    Word ext(w.begin(), w.end());
    ext.push_back(0);
    double sum = 0.0;
    for (int i = 0; i < symbols(); ++i) {
      ext.back() = static_cast<Symbol>(i);
      sum += kappa(ext);
    }
    return sum;
  }
  return hs_inner(Q_state(state_of(w)), mu(w));
}

MatrixXd CylinderMeasure::mu_total() const {
  MatrixXd sum = MatrixXd::Zero(family_->form_dim, family_->form_dim);
  for (const auto& m : spectral_.mu) sum += m;
  return sum;
}

namespace {

// kappa([i w]) for every symbol i, from mu([w]) by exact left extension.
std::vector<double> left_extensions(const CylinderMeasure& cm, std::span<const Symbol> w, const MatrixXd& mu_w) {
  const int k = cm.memory();
  const int t = cm.symbols();
  Word window(k);
  std::copy(w.begin(), w.begin() + (k - 1), window.begin() + 1);
  std::vector<double> out(t);
  for (int i = 0; i < t; ++i) {
    window[0] = static_cast<Symbol>(i);
    const MatrixXd& p = cm.family().pullbacks[i];
    const double weight = std::exp(cm.potential()(window)) / cm.beta();
    out[i] = weight * hs_inner(cm.Q_state(cm.state_of(window)), p * mu_w * p.transpose());
  }
  return out;
}

}  // namespace

Word sample_kappa(const CylinderMeasure& cm, int n, std::uint64_t seed) {
  const int k = cm.memory();
  const int t = cm.symbols();
  if (n < k - 1 || n < 0) throw ArgumentError("sample_kappa: length must be at least memory - 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Word w;
  w.reserve(n);
  std::vector<double> probs(t);

  auto draw = [&] {
    double total = 0.0;
    for (double p : probs) total += p;
    if (!(total > 0.0)) throw DegenerateError("sample_kappa: zero-mass cylinder");
    const double u = unif(rng) * total;
    double acc = 0.0;
    for (int i = 0; i < t; ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<Symbol>(i);
    }
    return static_cast<Symbol>(t - 1);
  };

  // Prefixes shorter than the state length are summed over their extensions.
  while (static_cast<int>(w.size()) < std::min(n, std::max(k - 1, 1))) {
    Word ext = w;
    ext.push_back(0);
    for (int i = 0; i < t; ++i) {
      ext.back() = static_cast<Symbol>(i);
      probs[i] = cm.kappa(ext);
    }
    w.push_back(draw());
  }
  if (static_cast<int>(w.size()) >= n) return w;

  // Running factor of mu([w]) = exp(log_scale) * P mu_tail P^T.
  auto f = cm.factor(w);
  const MatrixXd& q = cm.Q_state(cm.state_of(w));
  const double log_beta = std::log(cm.beta());
  Word window(k);
  std::vector<MatrixXd> next_p(t);
  std::vector<double> next_log(t);
  while (static_cast<int>(w.size()) < n) {
    const int len = static_cast<int>(w.size());
    const int a = len - k + 1;
    for (int i = 0; i < t; ++i) {
      for (int j = 0; j < k - 1; ++j) window[j] = w[a + j];
      window[k - 1] = static_cast<Symbol>(i);
      const Symbol head = k == 1 ? static_cast<Symbol>(i) : w[a];
      MatrixXd p = f.p * cm.family().pullbacks[head];
      const double nrm = p.norm();
      p /= nrm;
      next_log[i] = f.log_scale + 2.0 * std::log(nrm) + cm.potential()(window) - log_beta;
      const int tail = k == 1 ? 0 : cm.state_of(std::span<const Symbol>(window).subspan(1));
      probs[i] = hs_inner(q, p * cm.spectral().mu[tail] * p.transpose());
      next_p[i] = std::move(p);
    }
    const double top = *std::max_element(next_log.begin(), next_log.end());
    for (int i = 0; i < t; ++i) probs[i] *= std::exp(next_log[i] - top);
    const Symbol s = draw();
    w.push_back(s);
    f.p = next_p[s];
    f.log_scale = next_log[s];
  }
  return w;
}

std::vector<double> conditional_probs(const CylinderMeasure& cm, std::span<const Symbol> context, int depth) {
  const int k = cm.memory();
  if (depth < 0 || static_cast<int>(context.size()) < std::max(depth, k - 1))
    throw ArgumentError("conditional_prob: context shorter than max(depth, memory - 1)");
  const int len = std::max(depth, k - 1);
  const auto c = context.first(len);
  const MatrixXd mu_c = cm.mu(c);
  const double denom = hs_inner(cm.Q_state(cm.state_of(c)), mu_c);
  if (!(denom > 0.0)) throw DegenerateError("conditional_prob: zero-mass context cylinder");
  auto out = left_extensions(cm, c, mu_c);
  for (double& x : out) x /= denom;
  return out;
}

double conditional_prob(const CylinderMeasure& cm, Symbol i, std::span<const Symbol> context, int depth) {
  if (i >= cm.symbols()) throw ArgumentError("conditional_prob: symbol out of range");
  return conditional_probs(cm, context, depth)[i];
}

MatrixXd density_M(const CylinderMeasure& cm, std::span<const Symbol> prefix) {
  const int k = cm.memory();
  if (static_cast<int>(prefix.size()) < k - 1)
    throw ArgumentError("density_M: prefix shorter than memory - 1 has no state");
  MatrixXd p = MatrixXd::Identity(cm.family().form_dim, cm.family().form_dim);
  for (Symbol s : prefix) {
    if (s >= cm.symbols()) throw ArgumentError("density_M: symbol out of range");
    p = p * cm.family().pullbacks[s];
    const double nrm = p.norm();
    if (!(nrm > 0.0)) throw DegenerateError("density_M: product collapsed");
    p /= nrm;
  }
  MatrixXd m = symmetrize(p * cm.mu_total() * p.transpose());
  const double scale = hs_inner(cm.Q_state(cm.state_of(prefix)), m);
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DegenerateError("density_M: zero matrix after product");
  return m / scale;
}

double density_cauchy_defect(const CylinderMeasure& cm, std::span<const Symbol> prefix) {
  if (prefix.empty()) throw ArgumentError("density_cauchy_defect: empty prefix");
  return (density_M(cm, prefix) - density_M(cm, prefix.first(prefix.size() - 1))).norm();
}

double conditional_prob_density(const CylinderMeasure& cm, Symbol i, std::span<const Symbol> context, int depth) {
  const int k = cm.memory();
  if (depth < 0 || static_cast<int>(context.size()) < std::max(depth, k - 1))
    throw ArgumentError("conditional_prob_density: context shorter than max(depth, memory - 1)");
  if (i >= cm.symbols()) throw ArgumentError("conditional_prob_density: symbol out of range");
  const int len = std::max(depth, k - 1);
  Word ic;
  ic.push_back(i);
  ic.insert(ic.end(), context.begin(), context.begin() + len);
  const MatrixXd m = density_M(cm, ic);
  const MatrixXd& p = cm.family().pullbacks[i];
  const Eigen::PartialPivLU<MatrixXd> lu(p);
  const MatrixXd pinv = lu.inverse();
  const MatrixXd pre = pinv * m * pinv.transpose();
  const double v = cm.potential()(std::span<const Symbol>(ic).first(k));
  const double denom = cm.beta() * hs_inner(cm.Q_state(cm.state_of(context)), pre);
  if (!(denom > 0.0)) throw DegenerateError("conditional_prob_density: degenerate density");
  return std::exp(v) / denom;
}

std::pair<double, double> gibbs_ratio_bounds(const CylinderMeasure& cm, std::span<const Symbol> w) {
  const int k = cm.memory();
  const int l = static_cast<int>(w.size());
  if (l < std::max(1, k - 1)) throw ArgumentError("gibbs_ratio_bounds: word too short");
  // Birkhoff sum along w continued by the constant-1 tail.
  Word x(w.begin(), w.end());
  x.resize(l + k - 1, 0);
  double vl = 0.0;
  for (int a = 0; a < l; ++a) vl += cm.potential()(std::span<const Symbol>(x).subspan(a, k));
  // Both sides are congruences by the product over the first l-k+1 letters; the pencil is
  // computed before that congruence, where it stays well conditioned.
  const CylinderMeasure::Factor f = cm.factor(w);
  const int transitions = l - k + 1;
  double log_scale = vl - l * std::log(cm.beta()) - f.log_scale;
  MatrixXd head = MatrixXd::Identity(cm.family().form_dim, cm.family().form_dim);
  for (int a = 0; a < transitions; ++a) {
    head = head * cm.family().pullbacks[w[a]];
    const double nrm = head.norm();
    head /= nrm;
    log_scale += 2.0 * std::log(nrm);
  }
  MatrixXd rest = MatrixXd::Identity(cm.family().form_dim, cm.family().form_dim);
  for (int a = transitions; a < l; ++a) rest = rest * cm.family().pullbacks[w[a]];
  const MatrixXd sandwich = std::exp(log_scale) * symmetrize(rest * cm.mu_total() * rest.transpose());
  return pencil_range(sandwich, cm.spectral().mu[f.tail_state]);
}

}  // namespace kusuoka
