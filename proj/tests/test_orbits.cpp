#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kusuoka/orbits.hpp"
#include "kusuoka/transfer.hpp"

using namespace kusuoka;

namespace {

Potential random_potential(int t, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::size_t size = 1;
  for (int j = 0; j < k; ++j) size *= t;
  std::vector<double> table(size);
  for (double& x : table) x = u(rng);
  return Potential(t, k, table, "random");
}

struct Preset {
  IfsSpec ifs;
  int q;
};

std::vector<Preset> presets() {
  const double skew[] = {0.0, 1.0, 2.5};
  return {{harmonic_gasket(), 1}, {harmonic_gasket(), 2},           {rotation_family(0.9), 1},
          {dyadic(), 1},          {line_family(0.75, 2), 1},        {rotation_family(0.9, skew), 1}};
}

std::vector<std::complex<double>> sorted_by_value(std::vector<std::complex<double>> v) {
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return v;
}

}  // namespace

TEST_CASE("orbit record invariants hold for every prime orbit") {
  for (const auto& p : presets()) {
    const auto fam = make_family(p.ifs, p.q);
    const auto v = random_potential(p.ifs.symbols(), 2, 3);
    const int max_period = p.ifs.symbols() == 2 ? 12 : 8;
    for (const auto& rec : prime_orbits(*fam, v, max_period)) {
      CHECK(std::abs(rec.alphas.front().imag()) <= 1e-12 * std::abs(rec.alphas.front()));
      CHECK(rec.alphas.front().real() > 0.0);
      CHECK(rec.alphas.front().real() < 1.0);
      std::complex<double> sum = 0.0;
      for (const auto& a : rec.alphas) {
        CHECK(std::abs(a) < 1.0);
        sum += a;
      }
      CHECK(std::abs(sum - rec.trace) <= 1e-8 * std::abs(rec.alphas.front()));
      CHECK(rec.v_tau == doctest::Approx(birkhoff_sum(v, rec.word)));
      CHECK(rec.n_tau == doctest::Approx(std::exp(rec.v_tau)));
      CHECK(rec.period == static_cast<int>(rec.word.size()));
    }
  }
}

TEST_CASE("orbit traces can be negative in degree one") {
  // For q = 1 in the plane tPsi acts on symmetric 2x2 matrices with trace (tr M)^2 - det M,
  // negative once the complex eigenvalues of M have argument beyond pi/3.
  const IfsSpec g = harmonic_gasket();
  const auto fam = make_family(g, 1);
  const Word w = parse_word("112233", 3);
  MatrixXd m = MatrixXd::Identity(2, 2);
  for (Symbol s : w) m = m * g.map(s).linear;
  const double closed_form = m.trace() * m.trace() - m.determinant();
  CHECK(closed_form < 0.0);
  const OrbitRecord rec = orbit_record(*fam, Potential::constant(3, 0.0), w);
  CHECK(rec.trace == doctest::Approx(closed_form).epsilon(1e-12));
  CHECK(rec.trace == doctest::Approx(-2.576384e-6).epsilon(1e-9));
  CHECK(rec.alphas.front().real() == doctest::Approx(m.determinant()).epsilon(1e-12));
  // Top degree is one-dimensional: traces are determinants squared and stay positive.
  for (const auto& r : prime_orbits(*make_family(g, 2), Potential::constant(3, 0.0), 8)) CHECK(r.trace > 0.0);
}

TEST_CASE("cyclic rotations share trace and spectrum") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto v = random_potential(3, 2, 4);
  const Word w = parse_word("1123213", 3);
  const OrbitRecord base = orbit_record(*fam, v, w);
  const auto base_alphas = sorted_by_value(base.alphas);
  for (std::size_t r = 1; r < w.size(); ++r) {
    Word rot(w.begin() + static_cast<long>(r), w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
    const OrbitRecord rec = periodic_record(*fam, v, rot);
    CHECK(std::abs(rec.trace - base.trace) <= 1e-10 * base.trace);
    const auto alphas = sorted_by_value(rec.alphas);
    for (std::size_t i = 0; i < alphas.size(); ++i) CHECK(std::abs(alphas[i] - base_alphas[i]) <= 1e-10);
    CHECK(rec.v_tau == doctest::Approx(base.v_tau).epsilon(1e-13));
  }
  CHECK_THROWS_AS(orbit_record(*fam, v, parse_word("2131", 3)), ArgumentError);
  CHECK_THROWS_AS(orbit_record(*fam, v, parse_word("1212", 3)), ArgumentError);
}

TEST_CASE("concatenated words have powered eigenvalues") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto v = Potential::constant(3, 0.0);
  const Word w = parse_word("1213", 3);
  const OrbitRecord base = orbit_record(*fam, v, w);
  for (int k = 2; k <= 4; ++k) {
    Word rep;
    for (int j = 0; j < k; ++j) rep.insert(rep.end(), w.begin(), w.end());
    const OrbitRecord rec = periodic_record(*fam, v, rep);
    for (std::size_t i = 0; i < base.alphas.size(); ++i)
      CHECK(std::abs(rec.alphas[i] - std::pow(base.alphas[i], k)) <= 1e-12);
    CHECK(rec.trace == doctest::Approx(base.trace_power(k)).epsilon(1e-12));
  }
}

TEST_CASE("dyadic orbit traces") {
  const auto fam = make_family(dyadic(), 1);
  for (const auto& rec : prime_orbits(*fam, Potential::constant(2, 0.0), 10))
    CHECK(rec.trace == doctest::Approx(std::pow(0.25, rec.period)).epsilon(1e-13));
  for (int n = 1; n <= 12; ++n)
    CHECK(fix_sum(fam, Potential::constant(2, 0.0), n, FixSumMethod::Enumeration) ==
          doctest::Approx(std::pow(0.5, n)).epsilon(1e-12));
}

TEST_CASE("fix sum methods agree") {
  const auto fam = make_family(harmonic_gasket(), 1);
  for (int k = 1; k <= 3; ++k) {
    const auto v = random_potential(3, k, 10 + k);
    for (int n = 1; n <= 10; ++n) {
      const double tp = fix_sum(fam, v, n, FixSumMethod::TracePower);
      CHECK(std::abs(fix_sum(fam, v, n, FixSumMethod::Enumeration) - tp) <= 1e-8 * tp);
      CHECK(std::abs(fix_sum(fam, v, n, FixSumMethod::OrbitAssembly) - tp) <= 1e-8 * tp);
    }
  }
}

TEST_CASE("constant shift scales a_n") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto v = random_potential(3, 2, 20);
  for (int n = 1; n <= 8; ++n) {
    const double a = fix_sum(fam, v, n, FixSumMethod::Enumeration);
    const double b = fix_sum(fam, v.shifted(0.3), n, FixSumMethod::Enumeration);
    CHECK(std::log(b) - std::log(a) == doctest::Approx(0.3 * n).epsilon(1e-12));
  }
}

TEST_CASE("growth rate of a_n approaches log beta") {
  for (const auto& p : presets()) {
    const auto fam = make_family(p.ifs, p.q);
    const auto v = Potential::constant(p.ifs.symbols(), 0.0);
    const double lb = std::log(perron(build_block_operator(fam, v)).beta);
    std::vector<double> err;
    for (int n = 1; n <= 40; ++n) err.push_back(std::abs(std::log(fix_sum(fam, v, n, FixSumMethod::TracePower)) / n - lb));
    CHECK(err[19] <= 0.05);
    for (int n = 25; n < 40; ++n) CHECK(err[n] <= err[n - 1] + 1e-12);
  }
}

TEST_CASE("prime orbit enumeration is independent of the worker count") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto v = random_potential(3, 2, 30);
  EnumerationOptions one;
  one.chunk = 17;
  EnumerationOptions many = one;
  many.workers = 4;
  for (int n = 1; n <= 9; ++n) {
    auto sum = [&](const EnumerationOptions& o) {
      return reduce_prime_orbits(
          *fam, n, o, 0.0, [](double& acc, const OrbitView& view) { acc += view.trace(); },
          [](double& acc, const double& x) { acc += x; });
    };
    CHECK(sum(one) == sum(many));
  }
  const auto a = prime_orbits(*fam, v, 8, one);
  const auto b = prime_orbits(*fam, v, 8, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].word == b[i].word);
    CHECK(a[i].trace == b[i].trace);
  }
}

TEST_CASE("renormalized powers") {
  std::mt19937_64 rng(40);
  std::normal_distribution<double> g;
  MatrixXd a(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = 0.3 * g(rng);
  MatrixXd direct = MatrixXd::Identity(4, 4);
  for (int n = 0; n <= 20; ++n) {
    const auto [m, lg] = renormalized_power<double>(a, n);
    CHECK((std::exp(lg) * m - direct).norm() <= 1e-12 * direct.norm());
    direct = direct * a;
  }
  // Long products of contractions stay finite in the log scale.
  const auto [m, lg] = renormalized_power<double>(MatrixXd(0.01 * a), 400);
  CHECK(m.allFinite());
  CHECK(std::isfinite(lg));
  CHECK(lg < -1000.0);
}
