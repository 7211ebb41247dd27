#pragma once

#include <string>
#include <limits>
#include <vector>

#include "kusuoka/orbits.hpp"

namespace kusuoka {

/// Finite truncations of the orbit counting functions from all prime orbits of period
/// at most max_period, together with their multiples.
struct CountingTables {
  int max_period = 0;
  double c = 0.0;
  std::string potential;

  /// Indexed by r = 1..max_period (entry r-1); exact for every r.
  std::vector<double> pi_prime;
  std::vector<double> eta;

  /// Indexed by the weight grid; N(tau) = exp(|c| vhat(tau)).
  std::vector<double> log_r;
  std::vector<double> pi;
  std::vector<double> S;
  /// Rows with log r below this value contain every orbit.
  double exact_log_limit = 0.0;

  bool exact(std::size_t row) const { return log_r[row] < exact_log_limit * (1.0 - 1e-12); }
};

/// log r_n = |c| * min(vhat) * n for n = 1..max_period; every point lies in the exact range.
std::vector<double> exact_weight_grid(const Potential& vhat, double c, int max_period);

CountingTables counting_tables(const PushForwardFamily& family, const Potential& vhat, double c, int max_period,
                               std::vector<double> log_r_grid, const EnumerationOptions& options = {});

/// Normalized counting sequences with the limits or bounds they are compared against.
struct AsymptoticReport {
  double beta = 0.0;
  double c = 0.0;
  double gamma_prime = 1.5;

  /// Period-indexed, entry r-1.
  std::vector<double> r_pi_prime_over_beta_r;
  std::vector<double> pi_prime_over_beta_gamma_r;
  /// |eta(r) - beta (beta^r - 1) / (beta - 1)| / beta^r.
  std::vector<double> eta_geometric_error;
  /// limsup bound beta / (beta - 1) for r pi'(r) / beta^r; NaN when beta <= 1.
  double r_pi_prime_bound = 0.0;

  /// Weight-indexed.
  std::vector<double> pi_log_r_over_r;
  std::vector<double> S_over_r;
  /// Bound on limsup pi(r) log r / r: beta/(beta-1) log beta for constant vhat with beta > 1,
  /// otherwise 1 for c > 0 and 0 for c < 0.
  double pi_bound = 0.0;
  double S_limit = 1.0;

  /// pi' is judged bounded when beta < 1 and its last four increments shrink geometrically
  /// with an extrapolated remainder of at most 1e-3 of the last value.
  bool pi_bounded = false;
  double pi_prime_tail_spread = 0.0;
  double pi_prime_tail_remainder = std::numeric_limits<double>::infinity();
};

/// beta is the Perron eigenvalue for the zero potential.
AsymptoticReport asymptotic_report(const CountingTables& tables, double beta, bool constant_vhat,
                                   double gamma_prime = 1.5);

struct RescaledCounts {
  std::vector<double> log_r_hat;
  std::vector<double> pi_hat;
  /// pi_hat(r) log r / r^{|c|}.
  std::vector<double> normalized;
};

/// pi_hat(r) = pi(r^{|c|}), reindexed from the weight grid of the tables.
RescaledCounts rescale_counts(const CountingTables& tables);

}  // namespace kusuoka
