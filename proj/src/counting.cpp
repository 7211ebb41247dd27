#include "kusuoka/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kusuoka {

namespace {

constexpr double kLogTol = 1e-9;

// Layout: [pi' by period | eta by period | pi by grid row | S by grid row].
struct Buckets {
  std::vector<double> v;
};

// First grid row whose log r is at least x, within a relative tolerance.
std::size_t bucket_of(const std::vector<double>& log_r, double x) {
  const double slack = kLogTol * std::max(1.0, std::abs(x));
  return static_cast<std::size_t>(std::lower_bound(log_r.begin(), log_r.end(), x - slack) - log_r.begin());
}

}  // namespace

std::vector<double> exact_weight_grid(const Potential& vhat, double c, int max_period) {
  if (!(vhat.min() > 0.0)) throw ArgumentError("counting: vhat must be strictly positive");
  if (c == 0.0) throw ArgumentError("counting: c must be nonzero");
  if (max_period < 1) throw ArgumentError("counting: max_period must be positive");
  std::vector<double> grid;
  const double step = std::abs(c) * vhat.min();
  for (int n = 1; n <= max_period; ++n) grid.push_back(step * n);
  return grid;
}

CountingTables counting_tables(const PushForwardFamily& family, const Potential& vhat, double c, int max_period,
                               std::vector<double> log_r_grid, const EnumerationOptions& options) {
  if (!(vhat.min() > 0.0)) throw ArgumentError("counting: vhat must be strictly positive");
  if (c == 0.0) throw ArgumentError("counting: c must be nonzero");
  if (max_period < 1) throw ArgumentError("counting: max_period must be positive");
  if (vhat.symbols() != family.symbols()) throw ArgumentError("counting: potential alphabet mismatch");
  if (!std::is_sorted(log_r_grid.begin(), log_r_grid.end()))
    throw ArgumentError("counting: weight grid must be increasing");
  for (double x : log_r_grid)
    if (!(x >= 0.0) || !std::isfinite(x)) throw ArgumentError("counting: weight grid needs r >= 1");

  const std::size_t np = static_cast<std::size_t>(max_period);
  const std::size_t ng = log_r_grid.size();
  const double log_r_max = ng ? log_r_grid.back() * (1.0 + kLogTol) + kLogTol : 0.0;
  const double abs_c = std::abs(c);

  Buckets total{std::vector<double>(2 * np + 2 * ng, 0.0)};
  for (int d = 1; d <= max_period; ++d) {
    const Buckets part = reduce_prime_orbits(
        family, d, options, Buckets{std::vector<double>(2 * np + 2 * ng, 0.0)},
        [&](Buckets& acc, const OrbitView& o) {
          const double w = abs_c * birkhoff_sum(vhat, o.word);
          const int k_period = max_period / d;
          const int k_weight = w > 0.0 ? static_cast<int>(std::floor(log_r_max / w)) : 0;
          const int k_max = std::max(k_period, k_weight);
          MatrixXd power = o.product;
          double log_power = o.log_scale;
          for (int k = 1; k <= k_max; ++k) {
            if (k > 1) {
              power = (power * o.product).eval();
              const double nrm = power.norm();
              power /= nrm;
              log_power += std::log(nrm) + o.log_scale;
            }
            const double tr = std::exp(log_power) * power.trace();
            if (k == 1) acc.v[d - 1] += tr;
            if (k <= k_period) acc.v[np + k * d - 1] += d * tr;
            if (k <= k_weight) {
              const std::size_t g = bucket_of(log_r_grid, k * w);
              if (g < ng) {
                if (k == 1) acc.v[2 * np + g] += tr;
                acc.v[2 * np + ng + g] += w * tr;
              }
            }
          }
        },
        [](Buckets& acc, const Buckets& x) {
          for (std::size_t i = 0; i < acc.v.size(); ++i) acc.v[i] += x.v[i];
        });
    for (std::size_t i = 0; i < total.v.size(); ++i) total.v[i] += part.v[i];
  }

  CountingTables t;
  t.max_period = max_period;
  t.c = c;
  t.potential = vhat.description();
  t.log_r = std::move(log_r_grid);
  t.exact_log_limit = abs_c * vhat.min() * (max_period + 1);
  auto cumulative = [&](std::size_t offset, std::size_t len) {
    std::vector<double> out(len);
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) out[i] = acc += total.v[offset + i];
    return out;
  };
  t.pi_prime = cumulative(0, np);
  t.eta = cumulative(np, np);
  t.pi = cumulative(2 * np, ng);
  t.S = cumulative(2 * np + ng, ng);
  return t;
}

AsymptoticReport asymptotic_report(const CountingTables& tables, double beta, bool constant_vhat,
                                   double gamma_prime) {
  if (!(beta > 0.0)) throw ArgumentError("asymptotic_report: beta must be positive");
  if (!(gamma_prime > 1.0)) throw ArgumentError("asymptotic_report: gamma' must exceed 1");
  AsymptoticReport rep;
  rep.beta = beta;
  rep.c = tables.c;
  rep.gamma_prime = gamma_prime;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double lb = std::log(beta);
  for (std::size_t i = 0; i < tables.pi_prime.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    rep.r_pi_prime_over_beta_r.push_back(r * tables.pi_prime[i] * std::exp(-r * lb));
    rep.pi_prime_over_beta_gamma_r.push_back(tables.pi_prime[i] * std::exp(-gamma_prime * r * lb));
    const double geometric = beta == 1.0 ? r : beta * std::expm1(r * lb) / (beta - 1.0);
    rep.eta_geometric_error.push_back(std::abs(tables.eta[i] - geometric) * std::exp(-r * lb));
  }
  rep.r_pi_prime_bound = beta > 1.0 ? beta / (beta - 1.0) : nan;

  for (std::size_t i = 0; i < tables.log_r.size(); ++i) {
    const double lr = tables.log_r[i];
    rep.pi_log_r_over_r.push_back(tables.pi[i] * lr * std::exp(-lr));
    rep.S_over_r.push_back(tables.S[i] * std::exp(-lr));
  }
  if (constant_vhat)
    rep.pi_bound = beta > 1.0 ? beta / (beta - 1.0) * lb : 0.0;
  else
    rep.pi_bound = tables.c > 0.0 ? 1.0 : 0.0;
  rep.S_limit = tables.c > 0.0 ? 1.0 : 0.0;

  const std::size_t n = tables.pi_prime.size();
  if (n >= 5) {
    const double last = tables.pi_prime[n - 1];
    rep.pi_prime_tail_spread = last - tables.pi_prime[n - 5];
    double ratio = 0.0;
    for (std::size_t i = n - 4; i + 1 < n; ++i) {
      const double inc0 = tables.pi_prime[i] - tables.pi_prime[i - 1];
      const double inc1 = tables.pi_prime[i + 1] - tables.pi_prime[i];
      ratio = inc0 > 0.0 && inc1 >= 0.0 ? std::max(ratio, inc1 / inc0) : std::numeric_limits<double>::infinity();
    }
    if (ratio < 1.0) rep.pi_prime_tail_remainder = (tables.pi_prime[n - 1] - tables.pi_prime[n - 2]) * ratio / (1.0 - ratio);
    rep.pi_bounded = beta < 1.0 && rep.pi_prime_tail_remainder <= 1e-3 * std::abs(last);
  }
  return rep;
}

RescaledCounts rescale_counts(const CountingTables& tables) {
  if (tables.c == 0.0) throw ArgumentError("rescale_counts: c must be nonzero");
  const double abs_c = std::abs(tables.c);
  RescaledCounts out;
  for (std::size_t i = 0; i < tables.log_r.size(); ++i) {
    const double lr_hat = tables.log_r[i] / abs_c;
    out.log_r_hat.push_back(lr_hat);
    out.pi_hat.push_back(tables.pi[i]);
    out.normalized.push_back(tables.pi[i] * lr_hat * std::exp(-abs_c * lr_hat));
  }
  return out;
}

}  // namespace kusuoka
