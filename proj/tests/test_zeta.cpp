#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "kusuoka/transfer.hpp"
#include "kusuoka/zeta.hpp"

using namespace kusuoka;

namespace {

std::vector<Complex> random_points(double radius, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> zs;
  for (int i = 0; i < n; ++i) zs.push_back(std::polar(radius * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng)));
  return zs;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("zeta is one at the origin") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto v = Potential::constant(3, 0.0);
  const auto op = build_block_operator(fam, v);
  const double beta = perron(op).beta;
  CHECK(zeta_series(op, 0.0, beta).value == Complex(1.0, 0.0));
  CHECK(zeta_rational(op, 0.0).value == Complex(1.0, 0.0));
  CHECK(zeta_euler(*fam, v, {Complex(0.0)}, 6, beta).front().value == Complex(1.0, 0.0));
}

TEST_CASE("dyadic zeta is a single geometric factor") {
  const auto fam = make_family(dyadic(), 1);
  const auto v = Potential::constant(2, 0.0);
  const auto op = build_block_operator(fam, v);
  for (const Complex z : random_points(1.8, 20, 1)) {
    const Complex expected = 1.0 / (1.0 - z / 2.0);
    CHECK(rel(zeta_rational(op, z).value, expected) <= 1e-14);
    CHECK(rel(zeta_series(op, z, 0.5).value, expected) <= 1e-12);
  }
  const auto euler = zeta_euler_by_content(*fam, v, {Complex(0.5), Complex(0.0, 1.0)}, 200, 0.5);
  CHECK(rel(euler[0].value, 1.0 / (1.0 - 0.25)) <= 1e-12);
  CHECK(rel(euler[1].value, 1.0 / Complex(1.0, -0.5)) <= 1e-12);
  CHECK(pole_on_axis(op) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(zeta_rational(op, 2.0).near_pole);
}

TEST_CASE("pole on the positive axis is the reciprocal Perron eigenvalue") {
  const double skew[] = {0.0, 1.0, 2.5};
  const std::vector<std::pair<IfsSpec, int>> presets{{harmonic_gasket(), 1},
                                                     {harmonic_gasket(), 2},
                                                     {rotation_family(0.9), 1},
                                                     {rotation_family(0.9, skew), 1},
                                                     {line_family(0.75, 2), 1}};
  for (const auto& [ifs, q] : presets) {
    const auto op = build_block_operator(make_family(ifs, q), Potential::constant(ifs.symbols(), 0.0));
    const double beta = perron(op).beta;
    CHECK(pole_on_axis(op) == doctest::Approx(1.0 / beta).epsilon(1e-9));
  }
  const auto op = build_block_operator(make_family(harmonic_gasket(), 1), Potential::constant(3, 0.0));
  CHECK(zeta_rational(op, 1.0 / 0.6).near_pole);
  CHECK(std::isnan(zeta_rational(op, 1.0 / 0.6).value.real()));
}

TEST_CASE("series tail bound") {
  CHECK(zeta_tail_bound(3, 0.5, 10) == doctest::Approx(3.0 * std::pow(0.5, 11) / (11 * 0.5)));
  const auto op = build_block_operator(make_family(harmonic_gasket(), 1), Potential::constant(3, 0.0));
  const ZetaValue z = zeta_series(op, Complex(0.5, 0.5), 0.6);
  CHECK(z.tail_bound <= 1e-13);
  CHECK(z.terms > 0);
  CHECK(rel(z.value, zeta_rational(op, Complex(0.5, 0.5)).value) <= 1e-12);
}

TEST_CASE("series, Euler product and rational form agree on commuting presets") {
  const std::vector<std::pair<IfsSpec, int>> presets{
      {harmonic_gasket(), 2}, {dyadic(), 1}, {rotation_family(0.9), 1}, {line_family(0.75, 2), 1}};
  for (const auto& [ifs, q] : presets) {
    const auto fam = make_family(ifs, q);
    REQUIRE(commuting_family(*fam));
    const auto v = Potential::constant(ifs.symbols(), 0.0);
    const auto op = build_block_operator(fam, v);
    const double beta = perron(op).beta;
    const auto zs = random_points(0.9 / beta, 10, 2);
    const auto euler = zeta_euler_by_content(*fam, v, zs, 220, beta);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const Complex r = zeta_rational(op, zs[i]).value;
      CHECK(rel(zeta_series(op, zs[i], beta).value, r) <= 1e-12);
      CHECK(rel(euler[i].value, r) <= 1e-12);
    }
  }
  CHECK_FALSE(commuting_family(*make_family(harmonic_gasket(), 1)));
  CHECK_THROWS_AS(zeta_euler_by_content(*make_family(harmonic_gasket(), 1), Potential::constant(3, 0.0),
                                        {Complex(0.1)}, 10, 0.6),
                  ArgumentError);
}

TEST_CASE("content grouping matches explicit orbit enumeration") {
  const auto fam = make_family(rotation_family(0.9), 1);
  const Potential v(3, 1, {0.1, -0.2, 0.05});
  const std::vector<Complex> zs{Complex(0.2, 0.1), Complex(-0.3, 0.0), Complex(0.0, 0.35)};
  const auto by_content = zeta_euler_by_content(*fam, v, zs, 9, 2.43);
  const auto explicit_product = zeta_euler(*fam, v, zs, 9, 2.43);
  for (std::size_t i = 0; i < zs.size(); ++i)
    CHECK(std::abs(by_content[i].log_value - explicit_product[i].log_value) <= 1e-12);
}

TEST_CASE("explicit Euler product on a non-commuting family") {
  const auto fam = make_family(harmonic_gasket(), 1);
  const auto v = Potential::constant(3, 0.0);
  const auto op = build_block_operator(fam, v);
  const auto zs = random_points(0.3 / 0.6, 5, 3);
  const auto euler = zeta_euler(*fam, v, zs, 12, 0.6);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const Complex r = zeta_rational(op, zs[i]).log_value;
    CHECK(std::abs(euler[i].log_value - r) <= euler[i].tail_bound + 1e-12);
  }
  // The stored-record form gives the same product.
  const auto records = prime_orbits(*fam, v, 8);
  const auto streamed = zeta_euler(*fam, v, {zs[0]}, 8, 0.6);
  CHECK(std::abs(zeta_euler(records, zs[0], 0.6, op.dimension()).log_value - streamed[0].log_value) <= 1e-13);
}

TEST_CASE("Lyndon words counted by letter content") {
  for (int n = 1; n <= 8; ++n) {
    std::map<std::vector<int>, int> brute;
    for (const auto& w : LyndonWords(3, n).collect()) {
      std::vector<int> counts(3, 0);
      for (Symbol s : w) ++counts[s];
      ++brute[counts];
    }
    for (const auto& [counts, number] : brute) CHECK(lyndon_content_count(counts) == number);
  }
  CHECK(lyndon_content_count({2, 0}) == 0.0);
  CHECK(lyndon_content_count({1, 0}) == 1.0);
  CHECK(lyndon_content_count({2, 2}) == 1.0);
  CHECK_THROWS_AS(lyndon_content_count({0, 0}), ArgumentError);
}

TEST_CASE("zeta of minus V has its pole at s = 1") {
  const auto fam = make_family(rotation_family(0.9), 1);
  const auto vhat = Potential::constant(3, 1.0);
  const double c = pressure_root(fam, vhat);
  CHECK(c == doctest::Approx(std::log(2.43)).epsilon(1e-10));
  const Potential v = vhat.scaled(c);
  const ZetaValue at_one = zeta_minus_v(fam, v, 1.0);
  CHECK((at_one.near_pole || std::abs(at_one.value) > 1e9));
  for (double s = 1.05; s < 3.0; s += 0.25) {
    const ZetaValue z = zeta_minus_v(fam, v, s);
    CHECK_FALSE(z.near_pole);
    CHECK(z.value.real() > 0.0);
    CHECK(std::abs(z.value.imag()) <= 1e-12 * std::abs(z.value));
  }
  // The log derivative minus the simple pole stays bounded as s decreases to 1.
  const auto gasket = make_family(harmonic_gasket(), 1);
  const Potential line_v(3, 1, {1.0, 1.3, 0.8});
  const Potential gv = line_v.scaled(pressure_root(gasket, line_v));
  std::vector<double> residual;
  for (int i = 0; i < 20; ++i) {
    const double s = 1.01 + (1.2 - 1.01) * i / 19.0;
    residual.push_back(std::abs(zeta_minus_v_log_derivative(gasket, gv, s) + 1.0 / (s - 1.0)));
  }
  // An order of magnitude below the pole term at the nearest point, and varying slowly.
  for (std::size_t i = 0; i < residual.size(); ++i) {
    CHECK(residual[i] <= 0.1 / 0.01);
    if (i > 0) CHECK(std::abs(residual[i] - residual[i - 1]) <= 1.0);
  }
}

TEST_CASE("log derivative matches a finite difference") {
  const auto fam = make_family(harmonic_gasket(), 2);
  const Potential v(3, 2, {0.3, 0.1, 0.2, 0.4, 0.2, 0.1, 0.3, 0.2, 0.5});
  const Complex s(1.7, 0.4);
  const double h = 1e-6;
  const Complex fd = (zeta_minus_v(fam, v, s + h).log_value - zeta_minus_v(fam, v, s - h).log_value) / (2.0 * h);
  CHECK(std::abs(fd - zeta_minus_v_log_derivative(fam, v, s)) <= 1e-6 * std::abs(fd));
}

TEST_CASE("line scan in the lattice and non-lattice cases") {
  // Constant weight: the determinant is periodic in y with period 2 pi / log beta.
  const auto rot = make_family(rotation_family(0.9), 1);
  const double lb = std::log(2.43);
  const Potential lattice = Potential::constant(3, lb);
  const double period = 2.0 * std::numbers::pi / lb;
  const std::vector<double> ys{0.37, 0.37 + period, 1.1, 1.1 + 2.0 * period, period};
  const LineScan scan = line_scan(rot, lattice, ys);
  CHECK(std::abs(scan.rows[0].det - scan.rows[1].det) <= 1e-12);
  CHECK(std::abs(scan.rows[2].det - scan.rows[3].det) <= 1e-12);
  CHECK(std::abs(scan.rows[4].det) <= 1e-12);
  CHECK(scan.min_abs <= 1e-12);

  // Weights 1 and the golden ratio are rationally independent: no zero off the real axis.
  const auto line = make_family(line_family(0.75, 2), 1);
  const Potential vhat(2, 1, {1.0, std::numbers::phi});
  const Potential v = vhat.scaled(pressure_root(line, vhat));
  std::vector<double> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back(20.0 * i / 2000.0);
  const LineScan golden = line_scan(line, v, grid, 0.1);
  CHECK(std::abs(golden.rows[0].det) <= 1e-10);
  CHECK(golden.min_abs > 1e-3);
  CHECK(golden.argmin_y >= 0.1);
}
