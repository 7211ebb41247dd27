#include "kusuoka/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kusuoka {

namespace {

// log(1 - u) with full relative accuracy for small |u|.
Complex log1m(Complex u) {
  if (std::abs(u) < 1e-4) {
    Complex sum = 0.0;
    Complex p = u;
    for (int k = 1; k <= 8; ++k) {
      sum -= p / static_cast<double>(k);
      p *= u;
    }
    return sum;
  }
  return std::log(1.0 - u);
}

int mobius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  return n > 1 ? -result : result;
}

double log_multinomial(int n, const std::vector<int>& parts) {
  double out = std::lgamma(n + 1.0);
  for (int p : parts) out -= std::lgamma(p + 1.0);
  return out;
}

ZetaValue finish(Complex log_value, double tail_bound, int terms) {
  ZetaValue out;
  out.log_value = log_value;
  out.value = std::exp(log_value);
  out.tail_bound = tail_bound;
  out.terms = terms;
  return out;
}

int operator_dimension(const PushForwardFamily& family, int memory) {
  int dim = family.block_size();
  for (int j = 1; j < memory; ++j) dim *= family.symbols();
  return dim;
}

}  // namespace

double zeta_tail_bound(int dim, double abs_z_beta, int n_terms) {
  if (abs_z_beta >= 1.0) return std::numeric_limits<double>::infinity();
  if (abs_z_beta == 0.0) return 0.0;
  return dim * std::exp((n_terms + 1) * std::log(abs_z_beta)) / ((n_terms + 1) * (1.0 - abs_z_beta));
}

ZetaValue zeta_series(const BlockOperator<double>& op, Complex z, double beta, int n_terms) {
  if (n_terms < 0) throw ArgumentError("zeta_series: negative term count");
  const int dim = op.dimension();
  const double q = std::abs(z) * beta;
  if (z == Complex(0.0, 0.0)) return finish(0.0, 0.0, 0);
  if (n_terms == 0) {
    if (q >= 1.0) throw ArgumentError("zeta_series: |z| beta >= 1 needs an explicit term count");
    n_terms = 1;
    while (zeta_tail_bound(dim, q, n_terms) > 1e-13 && n_terms < 1000000) ++n_terms;
  }
  const MatrixXd l = op.dense();
  MatrixXd power = MatrixXd::Identity(dim, dim);
  double log_power = 0.0;
  const Complex log_z = std::log(z);
  Complex sum = 0.0;
  for (int n = 1; n <= n_terms; ++n) {
    power = (power * l).eval();
    const double nrm = power.norm();
    if (!(nrm > 0.0)) break;
    power /= nrm;
    log_power += std::log(nrm);
    sum += std::exp(log_power + static_cast<double>(n) * log_z) * power.trace() / static_cast<double>(n);
  }
  return finish(sum, zeta_tail_bound(dim, q, n_terms), n_terms);
}

Complex transfer_determinant(const Matrix<Complex>& l, Complex z) {
  const Matrix<Complex> m = Matrix<Complex>::Identity(l.rows(), l.cols()) - z * l;
  return Eigen::PartialPivLU<Matrix<Complex>>(m).determinant();
}

double pole_on_axis(const BlockOperator<double>& op) {
  const MatrixXd l = op.dense();
  const double norm = l.norm();
  if (!(norm > 0.0)) throw DegenerateError("pole_on_axis: zero operator");
  auto f = [&](double z) {
    return Eigen::PartialPivLU<MatrixXd>(MatrixXd::Identity(l.rows(), l.cols()) - z * l).determinant();
  };
  const double step = 1.0 / (1000.0 * norm);
  double lo = 0.0;
  double flo = f(lo);
  double hi = step;
  double fhi = f(hi);
  constexpr long kMaxSteps = 10000000;
  long steps = 1;
  while ((flo > 0.0) == (fhi > 0.0) && fhi != 0.0) {
    if (++steps > kMaxSteps) throw NonConvergenceError("pole_on_axis: no sign change found", fhi, 0.0, kMaxSteps);
    lo = hi;
    flo = fhi;
    hi = step * static_cast<double>(steps);
    fhi = f(hi);
  }
  if (fhi == 0.0) return hi;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ZetaValue zeta_euler(const std::vector<OrbitRecord>& records, Complex z, double beta, int dim) {
  Complex sum = 0.0;
  int max_period = 0;
  for (const auto& r : records) {
    max_period = std::max(max_period, r.period);
    const Complex x = std::exp(r.v_tau) * std::pow(z, r.period);
    for (const auto& a : r.alphas) sum -= log1m(x * a);
  }
  return finish(sum, zeta_tail_bound(dim, std::abs(z) * beta, max_period), max_period);
}

std::vector<ZetaValue> zeta_euler(const PushForwardFamily& family, const Potential& v, const std::vector<Complex>& zs,
                                  int max_period, double beta, const EnumerationOptions& options) {
  if (max_period < 1) throw ArgumentError("zeta_euler: max_period must be positive");
  if (v.symbols() != family.symbols()) throw ArgumentError("zeta_euler: potential alphabet mismatch");
  std::vector<Complex> total(zs.size(), 0.0);
  for (int n = 1; n <= max_period; ++n) {
    std::vector<Complex> zn;
    for (auto z : zs) zn.push_back(std::pow(z, n));
    const auto part = reduce_prime_orbits(
        family, n, options, std::vector<Complex>(zs.size(), 0.0),
        [&](std::vector<Complex>& acc, const OrbitView& o) {
          const double scale = std::exp(o.log_scale + birkhoff_sum(v, o.word));
          const auto alphas = sorted_eigenvalues(o.product);
          for (std::size_t i = 0; i < zs.size(); ++i)
            for (const auto& a : alphas) acc[i] -= log1m(scale * zn[i] * a);
        },
        [](std::vector<Complex>& acc, const std::vector<Complex>& x) {
          for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
        });
    for (std::size_t i = 0; i < zs.size(); ++i) total[i] += part[i];
  }
  const int dim = operator_dimension(family, v.memory());
  std::vector<ZetaValue> out;
  for (std::size_t i = 0; i < zs.size(); ++i)
    out.push_back(finish(total[i], zeta_tail_bound(dim, std::abs(zs[i]) * beta, max_period), max_period));
  return out;
}

bool commuting_family(const PushForwardFamily& family) {
  for (int i = 0; i < family.symbols(); ++i)
    for (int j = i + 1; j < family.symbols(); ++j) {
      const MatrixXd& a = family.psi_t[i];
      const MatrixXd& b = family.psi_t[j];
      if ((a * b - b * a).norm() > 1e-12 * a.norm() * b.norm()) return false;
    }
  return true;
}

double log_lyndon_content_count(const std::vector<int>& counts) {
  const int n = std::accumulate(counts.begin(), counts.end(), 0);
  if (n < 1) throw ArgumentError("lyndon_content_count: empty content");
  for (int c : counts)
    if (c < 0) throw ArgumentError("lyndon_content_count: negative letter count");
  const int distinct = static_cast<int>(std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }));
  if (distinct == 1) return n == 1 ? 0.0 : -std::numeric_limits<double>::infinity();
  int g = 0;
  for (int c : counts) g = std::gcd(g, c);
  const double log_m1 = log_multinomial(n, counts);
  double ratio_sum = 1.0;
  for (int d = 2; d <= g; ++d) {
    if (g % d != 0) continue;
    const int mu = mobius(d);
    if (mu == 0) continue;
    std::vector<int> parts;
    for (int c : counts) parts.push_back(c / d);
    ratio_sum += mu * std::exp(log_multinomial(n / d, parts) - log_m1);
  }
  return log_m1 - std::log(static_cast<double>(n)) + std::log(ratio_sum);
}

double lyndon_content_count(const std::vector<int>& counts) {
  const double x = std::exp(log_lyndon_content_count(counts));
  return x < 1e15 ? std::round(x) : x;
}

std::vector<ZetaValue> zeta_euler_by_content(const PushForwardFamily& family, const Potential& v,
                                             const std::vector<Complex>& zs, int max_period, double beta) {
  if (max_period < 1) throw ArgumentError("zeta_euler_by_content: max_period must be positive");
  if (v.symbols() != family.symbols()) throw ArgumentError("zeta_euler_by_content: potential alphabet mismatch");
  const Potential v1 = v.reduced();
  if (v1.memory() != 1) throw ArgumentError("zeta_euler_by_content: potential must have memory 1");
  if (!commuting_family(family)) throw ArgumentError("zeta_euler_by_content: push-forwards do not commute");

  const int t = family.symbols();
  const int m = family.block_size();
  // powers[i][e] = tPsi_i^e as exp(log) * unit-norm matrix.
  std::vector<std::vector<std::pair<MatrixXd, double>>> powers(t);
  for (int i = 0; i < t; ++i) {
    powers[i].emplace_back(MatrixXd::Identity(m, m), 0.0);
    for (int e = 1; e <= max_period; ++e) {
      MatrixXd p = powers[i][e - 1].first * family.psi_t[i];
      const double nrm = p.norm();
      powers[i].emplace_back(p / nrm, powers[i][e - 1].second + std::log(nrm));
    }
  }
  std::vector<Complex> log_z;
  for (auto z : zs) log_z.push_back(std::log(z));

  std::vector<Complex> total(zs.size(), 0.0);
  std::vector<int> counts(t, 0);
  std::vector<double> traces;
  for (int n = 1; n <= max_period; ++n) {
    // Odometer over compositions of n into t nonnegative parts.
    std::fill(counts.begin(), counts.end(), 0);
    counts[t - 1] = n;
    while (true) {
      const double log_count = log_lyndon_content_count(counts);
      if (std::isfinite(log_count)) {
        MatrixXd a = MatrixXd::Identity(m, m);
        double log_a = 0.0;
        double v_sum = 0.0;
        for (int i = 0; i < t; ++i) {
          a = (a * powers[i][counts[i]].first).eval();
          log_a += powers[i][counts[i]].second;
          v_sum += counts[i] * v1.at(i);
        }
        const double nrm = a.norm();
        a /= nrm;
        log_a += std::log(nrm);
        traces.clear();
        MatrixXd ak = MatrixXd::Identity(m, m);
        double log_ak = 0.0;
        auto trace_k = [&](int k) {
          while (static_cast<int>(traces.size()) < k) {
            ak = (ak * a).eval();
            const double nk = ak.norm();
            if (nk > 0.0) {
              ak /= nk;
              log_ak += std::log(nk);
            }
            traces.push_back(std::exp(log_ak) * ak.trace());
          }
          return traces[k - 1];
        };
        for (std::size_t zi = 0; zi < zs.size(); ++zi) {
          // log det(I - x A) with x A = exp(expo) * a.
          const Complex expo = v_sum + log_a + static_cast<double>(n) * log_z[zi];
          const double s = std::exp(expo.real());
          Complex log_det = 0.0;
          if (s < 0.5) {
            for (int k = 1;; ++k) {
              const Complex term = std::exp(static_cast<double>(k) * expo) * trace_k(k) / static_cast<double>(k);
              log_det -= term;
              // Remaining terms weighted by the orbit count are below 1e-17 in total.
              if (log_count + k * std::log(s) + std::log(2.0 * m / k) < std::log(1e-17) || k > 200) break;
            }
          } else {
            const Matrix<Complex> ac = std::exp(expo) * a.cast<Complex>();
            log_det = std::log(Eigen::PartialPivLU<Matrix<Complex>>(Matrix<Complex>::Identity(m, m) - ac).determinant());
          }
          total[zi] -= std::exp(log_count) * log_det;
        }
      }
      // Next composition; the last slot holds what the others leave.
      int pos = t - 2;
      while (pos >= 0) {
        if (counts[t - 1] > 0) {
          ++counts[pos];
          --counts[t - 1];
          break;
        }
        counts[t - 1] += counts[pos];
        counts[pos] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  const int dim = operator_dimension(family, 1);
  std::vector<ZetaValue> out;
  for (std::size_t i = 0; i < zs.size(); ++i)
    out.push_back(finish(total[i], zeta_tail_bound(dim, std::abs(zs[i]) * beta, max_period), max_period));
  return out;
}

BlockOperator<Complex> minus_v_operator(std::shared_ptr<const PushForwardFamily> family, const Potential& v,
                                        Complex s) {
  return build_block_operator<Complex>(std::move(family), v, -s);
}

ZetaValue zeta_minus_v(std::shared_ptr<const PushForwardFamily> family, const Potential& v, Complex s) {
  return zeta_rational(minus_v_operator(std::move(family), v, s), 1.0);
}

Complex zeta_minus_v_log_derivative(std::shared_ptr<const PushForwardFamily> family, const Potential& v, Complex s) {
  const auto op = minus_v_operator(family, v, s);
  std::vector<Complex> dw;
  for (double x : v.table()) dw.push_back(-x * std::exp(-s * x));
  const BlockOperator<Complex> dop(family, v.memory(), std::move(dw));
  const Matrix<Complex> l = op.dense();
  const Matrix<Complex> m = Matrix<Complex>::Identity(l.rows(), l.cols()) - l;
  return Eigen::PartialPivLU<Matrix<Complex>>(m).solve(dop.dense()).trace();
}

LineScan line_scan(std::shared_ptr<const PushForwardFamily> family, const Potential& v, const std::vector<double>& ys,
                   double exclusion) {
  LineScan scan;
  scan.min_abs = std::numeric_limits<double>::infinity();
  scan.argmin_y = std::numeric_limits<double>::quiet_NaN();
  for (double y : ys) {
    const Complex det = transfer_determinant(minus_v_operator(family, v, Complex(1.0, y)).dense(), 1.0);
    scan.rows.push_back({y, det});
    if (std::abs(y) >= exclusion && std::abs(det) < scan.min_abs) {
      scan.min_abs = std::abs(det);
      scan.argmin_y = y;
    }
  }
  return scan;
}

}  // namespace kusuoka
