#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "kusuoka/orbits.hpp"
#include "kusuoka/symbolic.hpp"

using namespace kusuoka;

namespace {

std::vector<std::string> strings(const std::vector<Word>& words) {
  std::vector<std::string> out;
  for (const auto& w : words) out.push_back(to_string(w));
  return out;
}

// Distinct cyclic classes of minimal period n, by brute force over all t^n words.
std::size_t brute_force_classes(int t, int n) {
  std::set<Word> classes;
  for (const auto& w : FixPoints(t, n))
    if (minimal_period(w) == n) classes.insert(canonical_rotation(w));
  return classes.size();
}

}  // namespace

TEST_CASE("periodic points of length n") {
  std::vector<Word> all;
  for (const auto& w : FixPoints(3, 2)) all.push_back(w);
  CHECK(all.size() == 9);
  std::vector<Word> two;
  for (const auto& w : FixPoints(2, 1)) two.push_back(w);
  CHECK(strings(two) == std::vector<std::string>{"1", "2"});
  std::vector<Word> four;
  for (const auto& w : FixPoints(3, 4)) four.push_back(w);
  CHECK(four.size() == 81);
  CHECK(to_string(four.front()) == "1111");
  CHECK(std::is_sorted(four.begin(), four.end()));
  CHECK_THROWS_AS(FixPoints(3, 17), BudgetError);
  CHECK_NOTHROW(FixPoints(3, 16));
  CHECK_THROWS_AS(FixPoints(2, 26), BudgetError);
}

TEST_CASE("Lyndon word counts") {
  CHECK(LyndonWords(3, 1).collect().size() == 3);
  CHECK(LyndonWords(3, 2).collect().size() == 3);
  CHECK(LyndonWords(3, 3).collect().size() == 8);
  CHECK(strings(LyndonWords(2, 3).collect()) == std::vector<std::string>{"112", "122"});
  for (int t = 2; t <= 3; ++t)
    for (int n = 1; n <= 8; ++n) CHECK(LyndonWords(t, n).collect().size() == brute_force_classes(t, n));
  CHECK_THROWS_AS(LyndonWords(3, 17), BudgetError);
}

TEST_CASE("necklace identity") {
  for (int t = 2; t <= 3; ++t) {
    for (int n = 1; n <= 12; ++n) {
      double total = 0.0;
      for (int d = 1; d <= n; ++d)
        if (n % d == 0) total += d * static_cast<double>(LyndonWords(t, d).collect().size());
      CHECK(total == std::pow(t, n));
    }
  }
}

TEST_CASE("Lyndon enumeration is canonical and partitioned by leading symbol") {
  for (int n = 1; n <= 8; ++n) {
    const auto all = LyndonWords(3, n).collect();
    CHECK(std::is_sorted(all.begin(), all.end()));
    for (const auto& w : all) {
      CHECK(minimal_period(w) == n);
      CHECK(canonical_rotation(w) == w);
    }
    std::vector<Word> joined;
    for (Symbol s = 0; s < 3; ++s) {
      const auto part = LyndonWords(3, n, s).collect();
      joined.insert(joined.end(), part.begin(), part.end());
    }
    CHECK(joined == all);
    const auto buffer = lyndon_buffer(3, n, kDefaultEnumerationBudget);
    REQUIRE(buffer.size() == all.size() * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < all.size(); ++i)
      CHECK(std::equal(all[i].begin(), all[i].end(), buffer.begin() + static_cast<long>(i) * n));
  }
}

TEST_CASE("word text round trip") {
  const Word w = parse_word("1323", 3);
  CHECK(w == Word{0, 2, 1, 2});
  CHECK(to_string(w) == "1323");
  CHECK_THROWS_AS(parse_word("14", 3), ArgumentError);
  CHECK_THROWS_AS(parse_word("1a", 3), ArgumentError);
  CHECK(minimal_period(parse_word("121212", 2)) == 2);
  CHECK(canonical_rotation(parse_word("2131", 3)) == parse_word("1213", 3));
}

TEST_CASE("Birkhoff sums") {
  const Potential c = Potential::constant(3, 0.7);
  CHECK(birkhoff_sum(c, parse_word("12312", 3)) == doctest::Approx(5 * 0.7));

  const Potential eq(2, 2, {1.0, 0.0, 0.0, 1.0});
  CHECK(birkhoff_sum(eq, parse_word("12", 2)) == 0.0);
  CHECK(birkhoff_sum(eq, parse_word("11", 2)) == 2.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> table(27);
  for (double& x : table) x = u(rng);
  const Potential v(3, 3, table);
  const Word w = parse_word("1233211", 3);
  const double base = birkhoff_sum(v, w);
  for (std::size_t r = 1; r < w.size(); ++r) {
    Word rot(w.begin() + static_cast<long>(r), w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + static_cast<long>(r));
    CHECK(birkhoff_sum(v, rot) == doctest::Approx(base).epsilon(1e-14));
  }
}

TEST_CASE("potential tables") {
  CHECK_THROWS_AS(Potential(3, 2, std::vector<double>(8, 0.0)), ArgumentError);
  const Potential v(2, 1, {0.5, 2.0});
  CHECK(v.min() == 0.5);
  CHECK(v.max() == 2.0);
  CHECK_FALSE(v.is_constant());
  const Potential lifted = v.lifted(3);
  CHECK(lifted.memory() == 3);
  CHECK(lifted.reduced().table() == v.table());
  const Word w = parse_word("1121", 2);
  CHECK(birkhoff_sum(lifted, w) == doctest::Approx(birkhoff_sum(v, w)));
  CHECK(v.scaled(2.0).table() == std::vector<double>{1.0, 4.0});
  CHECK(v.shifted(1.0).table() == std::vector<double>{1.5, 3.0});
}

TEST_CASE("truncation of Hoelder families") {
  const TruncatedPotential c = truncate_to_memory(constant_family(1.25), 3, 2);
  CHECK(c.sup_error_bound == 0.0);
  for (double x : c.potential.table()) CHECK(x == 1.25);

  // Depends on x_0 only: exact for every memory.
  HolderFamily first{[](std::span<const Symbol> w) { return w.empty() ? 0.0 : static_cast<double>(w[0]); }, 0.0, 1.0,
                     0.5, "first"};
  for (int k = 1; k <= 3; ++k) {
    const auto t = truncate_to_memory(first, 3, k);
    CHECK(t.sup_error_bound == 0.0);
    for (const auto& w : FixPoints(3, 4)) CHECK(t.potential(std::span<const Symbol>(w.data(), k)) == w[0]);
  }

  const HolderFamily dec = decaying_symbol_sum({0.0, 1.0, 0.5}, 0.5, 0.5);
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 6; ++k) {
    const auto t = truncate_to_memory(dec, 3, k);
    CHECK(t.sup_error_bound < last);
    if (k > 1) CHECK(t.sup_error_bound == doctest::Approx(last * 0.5));
    last = t.sup_error_bound;
    // Declared bound dominates the distance to a deeper truncation.
    const auto deep = truncate_to_memory(dec, 3, 8);
    for (const auto& w : FixPoints(3, 8))
      CHECK(std::abs(deep.potential(w) - t.potential(std::span<const Symbol>(w.data(), k))) <= t.sup_error_bound + 1e-12);
  }

  HolderFamily bare{[](std::span<const Symbol>) { return 0.0; }, std::nullopt, std::nullopt, 0.5, "bare"};
  CHECK_THROWS_AS(truncate_to_memory(bare, 3, 2), ArgumentError);
}
