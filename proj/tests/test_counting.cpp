#include <doctest.h>

#include <cmath>

#include "kusuoka/counting.hpp"
#include "kusuoka/transfer.hpp"

using namespace kusuoka;

namespace {

double beta_of(std::shared_ptr<const PushForwardFamily> fam) {
  return perron(build_block_operator(fam, Potential::constant(fam->symbols(), 0.0))).beta;
}

}  // namespace

TEST_CASE("counting tables agree with direct sums over orbit records") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const Potential vhat(3, 1, {1.0, 1.4, 0.7});
  const double c = 0.8;
  const int max_period = 7;
  const std::vector<double> grid{0.4, 1.0, 1.9, 2.5, 3.3, 5.0};
  const CountingTables tab = counting_tables(*fam, vhat, c, max_period, grid);
  const auto records = prime_orbits(*fam, vhat, max_period);

  for (int r = 1; r <= max_period; ++r) {
    double pi_prime = 0.0;
    for (const auto& rec : records)
      if (rec.period <= r) pi_prime += rec.trace;
    CHECK(tab.pi_prime[r - 1] == doctest::Approx(pi_prime).epsilon(1e-12));
    double eta = 0.0;
    for (int n = 1; n <= r; ++n) eta += fix_sum(fam, Potential::constant(3, 0.0), n, FixSumMethod::TracePower);
    CHECK(tab.eta[r - 1] == doctest::Approx(eta).epsilon(1e-10));
  }

  const double limit = c * vhat.min() * (max_period + 1);
  CHECK(tab.exact_log_limit == doctest::Approx(limit));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!tab.exact(g)) continue;
    double pi = 0.0;
    double s = 0.0;
    for (const auto& rec : records) {
      const double w = c * rec.v_tau;
      if (w <= grid[g]) pi += rec.trace;
      for (int k = 1; k * w <= grid[g]; ++k) s += w * rec.trace_power(k);
    }
    CHECK(tab.pi[g] == doctest::Approx(pi).epsilon(1e-12));
    CHECK(tab.S[g] == doctest::Approx(s).epsilon(1e-12));
  }
  CHECK_FALSE(tab.exact(grid.size() - 1));
}

TEST_CASE("counting functions are nonnegative and nondecreasing") {
  const double skew[] = {0.0, 1.0, 2.5};
  const std::vector<std::pair<IfsSpec, int>> presets{
      {harmonic_gasket(), 1}, {harmonic_gasket(), 2}, {rotation_family(0.9), 1}, {rotation_family(0.9, skew), 1}};
  for (const auto& [ifs, q] : presets) {
    const auto fam = make_family(ifs, q);
    const Potential vhat(3, 1, {1.0, 1.2, 0.9});
    const double c = pressure_root(fam, vhat);
    const CountingTables tab = counting_tables(*fam, vhat, c, 9, exact_weight_grid(vhat, c, 9));
    for (const auto* seq : {&tab.pi_prime, &tab.eta, &tab.pi, &tab.S}) {
      CHECK(seq->front() >= 0.0);
      for (std::size_t i = 1; i < seq->size(); ++i) CHECK((*seq)[i] >= (*seq)[i - 1]);
    }
    for (std::size_t g = 0; g < tab.log_r.size(); ++g) CHECK(tab.exact(g));
  }
}

TEST_CASE("gasket prime orbit sum stays bounded") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto vhat = Potential::constant(3, 1.0);
  const double c = pressure_root(fam, vhat);
  CHECK(c == doctest::Approx(std::log(0.6)).epsilon(1e-10));
  const CountingTables tab = counting_tables(*fam, vhat, c, 14, exact_weight_grid(vhat, c, 14));
  const AsymptoticReport rep = asymptotic_report(tab, 0.6, true);
  CHECK(rep.pi_bounded);
  CHECK(rep.pi_bound == 0.0);
  CHECK(rep.S_limit == 0.0);
  CHECK(std::isnan(rep.r_pi_prime_bound));

  const CountingTables short_tab = counting_tables(*fam, vhat, c, 12, exact_weight_grid(vhat, c, 12));
  const AsymptoticReport short_rep = asymptotic_report(short_tab, 0.6, true);
  const auto& p = short_tab.pi_prime;
  double ratio = 0.0;
  for (int i = 8; i < 11; ++i) ratio = std::max(ratio, (p[i + 1] - p[i]) / (p[i] - p[i - 1]));
  CHECK(ratio < 1.0);
  CHECK(short_rep.pi_prime_tail_remainder == doctest::Approx((p[11] - p[10]) * ratio / (1.0 - ratio)));
  CHECK(short_rep.pi_bounded);
}

TEST_CASE("rotation family growth against its bounds") {
  const auto fam = make_family(rotation_family(0.9), 1);
  const double beta = beta_of(fam);
  CHECK(beta == doctest::Approx(2.43).epsilon(1e-12));
  const auto vhat = Potential::constant(3, 1.0);
  const double c = pressure_root(fam, vhat);
  const CountingTables tab = counting_tables(*fam, vhat, c, 12, exact_weight_grid(vhat, c, 12));
  const AsymptoticReport rep = asymptotic_report(tab, beta, true);
  CHECK(rep.r_pi_prime_bound == doctest::Approx(2.43 / 1.43));
  CHECK(rep.pi_bound == doctest::Approx(2.43 / 1.43 * std::log(2.43)));
  CHECK(rep.S_limit == 1.0);
  CHECK_FALSE(rep.pi_bounded);
  for (std::size_t r = 9; r < 12; ++r) CHECK(rep.r_pi_prime_over_beta_r[r] <= rep.r_pi_prime_bound * 1.1);
  for (std::size_t r = 1; r < 12; ++r) CHECK(rep.pi_prime_over_beta_gamma_r[r] < rep.pi_prime_over_beta_gamma_r[r - 1]);
  // Every push-forward has rank-one dominant part, so eta is geometric up to roundoff.
  for (double e : rep.eta_geometric_error) CHECK(e <= 1e-10);
}

TEST_CASE("eta approaches the geometric sum on a skew rotation family") {
  const double skew[] = {0.0, 1.0, 2.5};
  const auto fam = make_family(rotation_family(0.9, skew), 1);
  const double beta = beta_of(fam);
  const auto vhat = Potential::constant(3, 1.0);
  const double c = pressure_root(fam, vhat);
  const CountingTables tab = counting_tables(*fam, vhat, c, 12, exact_weight_grid(vhat, c, 12));
  const AsymptoticReport rep = asymptotic_report(tab, beta, true);
  CHECK(rep.eta_geometric_error[11] <= 1e-3);
  for (std::size_t r = 4; r < 12; ++r) CHECK(rep.eta_geometric_error[r] < rep.eta_geometric_error[r - 1]);
}

TEST_CASE("rescaled counts") {
  const auto fam = make_family(rotation_family(0.9), 1);
  const Potential vhat(3, 1, {1.0, 1.5, 1.2});
  const CountingTables unit = counting_tables(*fam, vhat, 1.0, 6, exact_weight_grid(vhat, 1.0, 6));
  const RescaledCounts same = rescale_counts(unit);
  CHECK(same.log_r_hat == unit.log_r);
  CHECK(same.pi_hat == unit.pi);

  const double c = pressure_root(fam, vhat);
  const CountingTables tab = counting_tables(*fam, vhat, c, 8, exact_weight_grid(vhat, c, 8));
  const RescaledCounts rc = rescale_counts(tab);
  for (std::size_t i = 0; i < rc.log_r_hat.size(); ++i) {
    CHECK(rc.log_r_hat[i] == doctest::Approx(tab.log_r[i] / c));
    CHECK(rc.pi_hat[i] == tab.pi[i]);
    if (i > 0) CHECK(rc.pi_hat[i] >= rc.pi_hat[i - 1]);
  }
  CountingTables zero = tab;
  zero.c = 0.0;
  CHECK_THROWS_AS(rescale_counts(zero), ArgumentError);
}

TEST_CASE("counting arguments are validated") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto vhat = Potential::constant(3, 1.0);
  CHECK_THROWS_AS(counting_tables(*fam, vhat, 0.0, 5, {1.0}), ArgumentError);
  CHECK_THROWS_AS(counting_tables(*fam, Potential::constant(3, -1.0), 1.0, 5, {1.0}), ArgumentError);
  CHECK_THROWS_AS(counting_tables(*fam, vhat, 1.0, 5, {2.0, 1.0}), ArgumentError);
  CHECK_THROWS_AS(exact_weight_grid(vhat, 0.0, 5), ArgumentError);
  const CountingTables tab = counting_tables(*fam, vhat, -0.5, 6, exact_weight_grid(vhat, -0.5, 6));
  CHECK_THROWS_AS(asymptotic_report(tab, 0.6, true, 1.0), ArgumentError);
  CHECK_THROWS_AS(asymptotic_report(tab, 0.0, true), ArgumentError);
}

TEST_CASE("counting tables do not depend on the worker count") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const Potential vhat(3, 1, {1.0, 1.4, 0.7});
  EnumerationOptions one;
  one.chunk = 64;
  EnumerationOptions many = one;
  many.workers = 4;
  const auto grid = exact_weight_grid(vhat, 1.0, 9);
  const CountingTables a = counting_tables(*fam, vhat, 1.0, 9, grid, one);
  const CountingTables b = counting_tables(*fam, vhat, 1.0, 9, grid, many);
  CHECK(a.pi_prime == b.pi_prime);
  CHECK(a.eta == b.eta);
  CHECK(a.pi == b.pi);
  CHECK(a.S == b.S);
}
