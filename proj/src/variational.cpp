#include <cmath>
#include <random>

#include "kusuoka/parallel.hpp"
#include "kusuoka/transfer.hpp"

namespace kusuoka {

namespace {

// Welford accumulator with an order-fixed merge.
struct RunningStats {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    const long total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * (static_cast<double>(n) * o.n / total);
    n = total;
  }

  double stderr_of_mean() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0; }
};

struct Terms {
  double entropy;
  double energy;
  double log_term;
  bool violation;
};

struct Accumulator {
  RunningStats h, e, g, total;
  long violations = 0;

  void add(const Terms& t) {
    h.add(t.entropy);
    e.add(t.energy);
    g.add(t.log_term);
    total.add(t.entropy + t.energy + t.log_term);
    violations += t.violation ? 1 : 0;
  }

  void merge(const Accumulator& o) {
    h.merge(o.h);
    e.merge(o.e);
    g.merge(o.g);
    total.merge(o.total);
    violations += o.violations;
  }
};

// Conditional-expectation form of the integrand at sigma x = y, given q_i = m[i | y] and M(y).
Terms integrand(const CylinderMeasure& cm, std::span<const Symbol> y, std::span<const double> q, const MatrixXd& m) {
  const int k = cm.memory();
  Word window(k);
  std::copy(y.begin(), y.begin() + (k - 1), window.begin() + 1);
  Terms out{0.0, 0.0, 0.0, std::abs(hs_inner(cm.Q_state(cm.state_of(y)), m) - 1.0) > 1e-8};
  for (int i = 0; i < cm.symbols(); ++i) {
    if (q[i] <= 0.0) continue;
    window[0] = static_cast<Symbol>(i);
    const MatrixXd& p = cm.family().pullbacks[i];
    const double pairing = hs_inner(cm.Q_state(cm.state_of(window)), p * m * p.transpose());
    out.entropy -= q[i] * std::log(q[i]);
    out.energy += q[i] * cm.potential()(window);
    out.log_term += q[i] * std::log(pairing);
  }
  return out;
}

template <typename SampleFn>
VariationalEstimate run(const VariationalOptions& opt, SampleFn&& sample_terms) {
  if (opt.samples < 2) throw ArgumentError("variational: need at least two samples");
  if (opt.streams < 1) throw ArgumentError("variational: need at least one stream");
  const std::size_t streams = static_cast<std::size_t>(opt.streams);
  std::vector<Accumulator> acc(streams);
  parallel_for(streams, opt.workers, [&](std::size_t s) {
    const long begin = static_cast<long>(s) * opt.samples / static_cast<long>(streams);
    const long end = static_cast<long>(s + 1) * opt.samples / static_cast<long>(streams);
    for (long j = begin; j < end; ++j) acc[s].add(sample_terms(stream_seed(opt.seed, static_cast<std::uint64_t>(j))));
  });
  Accumulator all;
  for (const auto& a : acc) all.merge(a);

  VariationalEstimate est;
  est.samples = all.total.n;
  est.entropy = all.h.mean;
  est.energy = all.e.mean;
  est.log_term = all.g.mean;
  est.value = est.entropy + est.energy + est.log_term;
  est.se_entropy = all.h.stderr_of_mean();
  est.se_energy = all.e.stderr_of_mean();
  est.se_log_term = all.g.stderr_of_mean();
  est.se_combined = std::sqrt(est.se_entropy * est.se_entropy + est.se_energy * est.se_energy +
                              est.se_log_term * est.se_log_term);
  est.se_value = all.total.stderr_of_mean();
  est.normalization_violations = all.violations;
  if (est.normalization_violations > 0.05 * est.samples)
    throw ArgumentError("variational: density field violates the normalization on more than 5% of samples");
  return est;
}

}  // namespace

VariationalEstimate variational_kusuoka(const CylinderMeasure& cm, const VariationalOptions& options) {
  const int k = cm.memory();
  const int len = std::max(options.depth, k - 1);
  if (len < 1) throw ArgumentError("variational: depth must be at least 1");
  return run(options, [&](std::uint64_t seed) {
    const Word y = sample_kappa(cm, len, seed);
    return integrand(cm, y, conditional_probs(cm, y, len), density_M(cm, y));
  });
}

VariationalEstimate variational_bernoulli(const CylinderMeasure& cm, std::span<const double> weights,
                                          const VariationalOptions& options) {
  const int t = cm.symbols();
  const int k = cm.memory();
  if (static_cast<int>(weights.size()) != t) throw ArgumentError("variational: one weight per symbol is required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ArgumentError("variational: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ArgumentError("variational: weights must sum to 1");

  std::vector<MatrixXd> m_state;
  for (const auto& qs : cm.spectral().Q) {
    const MatrixXd inv = qs.inverse();
    m_state.push_back(symmetrize(inv / hs_inner(qs, inv)));
  }
  const std::vector<double> p(weights.begin(), weights.end());
  return run(options, [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick(p.begin(), p.end());
    Word y(k - 1);
    for (auto& s : y) s = static_cast<Symbol>(pick(rng));
    return integrand(cm, y, p, m_state[cm.state_of(y)]);
  });
}

}  // namespace kusuoka
