#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "kusuoka/block_operator.hpp"
#include "kusuoka/parallel.hpp"

namespace kusuoka {

/// Eigenvalues sorted by modulus, largest first; within a 1e-9 relative modulus tie the
/// largest real part comes first.
std::vector<std::complex<double>> sorted_eigenvalues(const MatrixXd& a);

/// Prefix products tPsi_{w_0} ... tPsi_{w_{j-1}}, each renormalized to unit HS norm.
///
/// Consecutive words in lexicographic order share long prefixes; set() only recomputes
/// the factors past the first position where the new word differs from the previous one.
class PrefixProducts {
 public:
  explicit PrefixProducts(const PushForwardFamily& family);

  void set(std::span<const Symbol> w);
  const MatrixXd& product() const { return stack_[len_]; }
  double log_scale() const { return logs_[len_]; }

 private:
  const PushForwardFamily* family_;
  std::vector<MatrixXd> stack_;
  std::vector<double> logs_;
  Word word_;
  std::size_t len_ = 0;
};

/// tPsi_{w_0} o ... o tPsi_{w_{n-1}} as exp(log_scale) * matrix with unit-norm matrix.
struct OrbitProduct {
  MatrixXd matrix;
  double log_scale = 0.0;

  double trace() const { return std::exp(log_scale) * matrix.trace(); }
  /// tr of the k-th power.
  double trace_power(int k) const;
};

OrbitProduct orbit_product(const PushForwardFamily& family, std::span<const Symbol> w);

struct OrbitRecord {
  Word word;
  int period = 0;
  double trace = 0.0;
  std::vector<std::complex<double>> alphas;
  double v_tau = 0.0;
  double n_tau = 0.0;
  MatrixXd product;
  double log_scale = 0.0;

  double trace_power(int k) const;
};

/// Record for the periodic point generated by w, which need not be a Lyndon word.
OrbitRecord periodic_record(const PushForwardFamily& family, const Potential& v, std::span<const Symbol> w);

/// Record of a prime orbit; w must be its Lyndon representative.
OrbitRecord orbit_record(const PushForwardFamily& family, const Potential& v, std::span<const Symbol> w);

struct EnumerationOptions {
  int workers = 1;
  double budget = kDefaultEnumerationBudget;
  std::size_t chunk = 2048;
};

/// Lyndon words of length n stored back to back.
std::vector<Symbol> lyndon_buffer(int t, int n, double budget);

/// Read-only view of one prime orbit during a reduction.
struct OrbitView {
  std::span<const Symbol> word;
  const MatrixXd& product;
  double log_scale;

  double trace() const { return std::exp(log_scale) * product.trace(); }
};

/// Folds visit(acc, view) over all prime orbits of one period.
///
/// Orbits are cut into fixed-size chunks in lexicographic order; each chunk starts from
/// init and the chunk results are merged left to right, so the result does not depend on
/// the worker count.
template <typename Acc, typename Visit, typename Merge>
Acc reduce_prime_orbits(const PushForwardFamily& family, int period, const EnumerationOptions& options,
                        const Acc& init, Visit&& visit, Merge&& merge) {
  if (period < 1) throw ArgumentError("reduce_prime_orbits: period must be positive");
  const std::vector<Symbol> buffer = lyndon_buffer(family.symbols(), period, options.budget);
  const std::size_t n = static_cast<std::size_t>(period);
  const std::size_t count = buffer.size() / n;
  const std::size_t chunk = std::max<std::size_t>(1, options.chunk);
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<Acc> partial(chunks, init);
  parallel_for(chunks, options.workers, [&](std::size_t c) {
    PrefixProducts prefix(family);
    const std::size_t end = std::min(count, (c + 1) * chunk);
    for (std::size_t j = c * chunk; j < end; ++j) {
      const std::span<const Symbol> w(buffer.data() + j * n, n);
      prefix.set(w);
      visit(partial[c], OrbitView{w, prefix.product(), prefix.log_scale()});
    }
  });
  Acc out = init;
  for (const auto& p : partial) merge(out, p);
  return out;
}

/// All prime orbits of period 1..max_period, by period then lexicographically.
std::vector<OrbitRecord> prime_orbits(const PushForwardFamily& family, const Potential& v, int max_period,
                                      const EnumerationOptions& options = {});

enum class FixSumMethod { Enumeration, OrbitAssembly, TracePower };

/// a_n = sum over Fix_n of exp(V^n(x)) tr tPsi_{x,n}.
double fix_sum(std::shared_ptr<const PushForwardFamily> family, const Potential& v, int n, FixSumMethod method,
               const EnumerationOptions& options = {});

/// A^n as exp(log_scale) * matrix with the matrix renormalized to unit HS norm.
template <typename Scalar>
std::pair<Matrix<Scalar>, double> renormalized_power(const Matrix<Scalar>& a, int n) {
  if (n < 0) throw ArgumentError("renormalized_power: negative exponent");
  Matrix<Scalar> result = Matrix<Scalar>::Identity(a.rows(), a.cols());
  double log_result = 0.0;
  Matrix<Scalar> base = a;
  double log_base = 0.0;
  auto renorm = [](Matrix<Scalar>& m, double& lg) {
    const double nrm = m.norm();
    if (nrm > 0.0 && std::isfinite(nrm)) {
      m /= Scalar(nrm);
      lg += std::log(nrm);
    }
  };
  renorm(base, log_base);
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) {
      result = (result * base).eval();
      log_result += log_base;
      renorm(result, log_result);
    }
    if (e > 1) {
      base = (base * base).eval();
      log_base *= 2.0;
      renorm(base, log_base);
    }
  }
  return {result, log_result};
}

}  // namespace kusuoka
