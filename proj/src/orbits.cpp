#include "kusuoka/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

namespace kusuoka {

std::vector<std::complex<double>> sorted_eigenvalues(const MatrixXd& a) {
  Eigen::EigenSolver<MatrixXd> es(a, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
  std::stable_sort(ev.begin(), ev.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
  std::size_t i = 0;
  while (i < ev.size()) {
    std::size_t j = i + 1;
    const double top = std::abs(ev[i]);
    while (j < ev.size() && top - std::abs(ev[j]) <= 1e-9 * top) ++j;
    std::stable_sort(ev.begin() + i, ev.begin() + j, [](auto x, auto y) { return x.real() > y.real(); });
    i = j;
  }
  return ev;
}

PrefixProducts::PrefixProducts(const PushForwardFamily& family) : family_(&family) {
  const int m = family.block_size();
  stack_.push_back(MatrixXd::Identity(m, m));
  logs_.push_back(0.0);
}

void PrefixProducts::set(std::span<const Symbol> w) {
  const int m = family_->block_size();
  std::size_t common = 0;
  const std::size_t limit = std::min(w.size(), word_.size());
  while (common < limit && word_[common] == w[common]) ++common;
  word_.assign(w.begin(), w.end());
  while (stack_.size() < w.size() + 1) {
    stack_.emplace_back(m, m);
    logs_.push_back(0.0);
  }
  for (std::size_t j = common; j < w.size(); ++j) {
    if (w[j] >= family_->symbols()) throw ArgumentError("orbit: symbol out of range");
    stack_[j + 1].noalias() = stack_[j] * family_->psi_t[w[j]];
    const double nrm = stack_[j + 1].norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw DegenerateError("orbit: product collapsed");
    stack_[j + 1] /= nrm;
    logs_[j + 1] = logs_[j] + std::log(nrm);
  }
  len_ = w.size();
}

double OrbitProduct::trace_power(int k) const {
  if (k < 1) throw ArgumentError("trace_power: exponent must be positive");
  const auto [p, lg] = renormalized_power(matrix, k);
  return std::exp(lg + k * log_scale) * p.trace();
}

OrbitProduct orbit_product(const PushForwardFamily& family, std::span<const Symbol> w) {
  if (w.empty()) throw ArgumentError("orbit: empty word");
  PrefixProducts prefix(family);
  prefix.set(w);
  return {prefix.product(), prefix.log_scale()};
}

double OrbitRecord::trace_power(int k) const { return OrbitProduct{product, log_scale}.trace_power(k); }

OrbitRecord periodic_record(const PushForwardFamily& family, const Potential& v, std::span<const Symbol> w) {
  if (v.symbols() != family.symbols()) throw ArgumentError("orbit: potential alphabet mismatch");
  OrbitProduct p = orbit_product(family, w);
  OrbitRecord r;
  r.word.assign(w.begin(), w.end());
  r.period = static_cast<int>(w.size());
  r.trace = p.trace();
  const double scale = std::exp(p.log_scale);
  for (auto a : sorted_eigenvalues(p.matrix)) r.alphas.push_back(a * scale);
  r.v_tau = birkhoff_sum(v, w);
  r.n_tau = std::exp(r.v_tau);
  r.product = std::move(p.matrix);
  r.log_scale = p.log_scale;
  return r;
}

OrbitRecord orbit_record(const PushForwardFamily& family, const Potential& v, std::span<const Symbol> w) {
  if (w.empty()) throw ArgumentError("orbit_record: empty word");
  if (minimal_period(w) != static_cast<int>(w.size()) || canonical_rotation(w) != Word(w.begin(), w.end()))
    throw ArgumentError("orbit_record: " + to_string(w) + " is not a Lyndon word");
  return periodic_record(family, v, w);
}

std::vector<Symbol> lyndon_buffer(int t, int n, double budget) {
  std::vector<Symbol> out;
  for (const Word& w : LyndonWords(t, n, budget)) out.insert(out.end(), w.begin(), w.end());
  return out;
}

std::vector<OrbitRecord> prime_orbits(const PushForwardFamily& family, const Potential& v, int max_period,
                                      const EnumerationOptions& options) {
  if (max_period < 1) throw ArgumentError("prime_orbits: max_period must be positive");
  std::vector<OrbitRecord> out;
  for (int n = 1; n <= max_period; ++n) {
    const std::vector<Symbol> buffer = lyndon_buffer(family.symbols(), n, options.budget);
    const std::size_t count = buffer.size() / n;
    std::vector<OrbitRecord> recs(count);
    const std::size_t chunk = std::max<std::size_t>(1, options.chunk);
    parallel_for((count + chunk - 1) / chunk, options.workers, [&](std::size_t c) {
      for (std::size_t j = c * chunk; j < std::min(count, (c + 1) * chunk); ++j)
        recs[j] = periodic_record(family, v, std::span<const Symbol>(buffer.data() + j * n, n));
    });
    std::move(recs.begin(), recs.end(), std::back_inserter(out));
  }
  return out;
}

namespace {

double fix_sum_enumeration(const PushForwardFamily& family, const Potential& v, int n,
                           const EnumerationOptions& options) {
  const int t = family.symbols();
  check_budget(t, n, options.budget);
  // Tasks are blocks of words sharing a leading prefix of length p.
  int p = 0;
  std::size_t tasks = 1;
  while (p < n && tasks < 256) {
    ++p;
    tasks *= t;
  }
  std::vector<double> partial(tasks, 0.0);
  parallel_for(tasks, options.workers, [&](std::size_t task) {
    Word w(n, 0);
    std::size_t code = task;
    for (int j = p - 1; j >= 0; --j) {
      w[j] = static_cast<Symbol>(code % t);
      code /= t;
    }
    PrefixProducts prefix(family);
    double sum = 0.0;
    while (true) {
      prefix.set(w);
      sum += std::exp(prefix.log_scale() + birkhoff_sum(v, w)) * prefix.product().trace();
      int j = n - 1;
      while (j >= p && w[j] == t - 1) w[j--] = 0;
      if (j < p) break;
      ++w[j];
    }
    partial[task] = sum;
  });
  double total = 0.0;
  for (double x : partial) total += x;
  return total;
}

double fix_sum_assembly(const PushForwardFamily& family, const Potential& v, int n, const EnumerationOptions& options) {
  double total = 0.0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int k = n / d;
    total += reduce_prime_orbits(
        family, d, options, 0.0,
        [&](double& acc, const OrbitView& o) {
          const OrbitProduct p{o.product, o.log_scale};
          acc += d * std::exp(k * birkhoff_sum(v, o.word)) * p.trace_power(k);
        },
        [](double& acc, double x) { acc += x; });
  }
  return total;
}

}  // namespace

double fix_sum(std::shared_ptr<const PushForwardFamily> family, const Potential& v, int n, FixSumMethod method,
               const EnumerationOptions& options) {
  if (!family) throw ArgumentError("fix_sum: missing family");
  if (n < 1) throw ArgumentError("fix_sum: n must be positive");
  if (v.symbols() != family->symbols()) throw ArgumentError("fix_sum: potential alphabet mismatch");
  switch (method) {
    case FixSumMethod::Enumeration:
      return fix_sum_enumeration(*family, v, n, options);
    case FixSumMethod::OrbitAssembly:
      return fix_sum_assembly(*family, v, n, options);
    case FixSumMethod::TracePower: {
      const auto [p, lg] = renormalized_power<double>(build_block_operator(std::move(family), v).dense(), n);
      return std::exp(lg) * p.trace();
    }
  }
  throw ArgumentError("fix_sum: unknown method");
}

}  // namespace kusuoka
