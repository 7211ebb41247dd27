#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kusuoka {

// Symbols are stored zero-based; text forms use digits 1..t.
using Symbol = std::uint8_t;
using Word = std::vector<Symbol>;

std::string to_string(std::span<const Symbol> w);
Word parse_word(std::string_view text, int t);

inline constexpr double kDefaultEnumerationBudget = 5e7;

/// Throws BudgetError if t^n exceeds the budget.
void check_budget(int t, int n, double budget = kDefaultEnumerationBudget);

/// All t^n words of length n in lexicographic order.
class FixPoints {
 public:
  FixPoints(int t, int n, double budget = kDefaultEnumerationBudget);

  class iterator {
   public:
    using value_type = Word;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(int t, Word w, bool done) : t_(t), w_(std::move(w)), done_(done) {}
    const Word& operator*() const { return w_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || w_ == o.w_); }

   private:
    int t_ = 0;
    Word w_;
    bool done_ = true;
  };

  iterator begin() const { return {t_, Word(n_, 0), false}; }
  iterator end() const { return {}; }

 private:
  int t_;
  int n_;
};

/// Lyndon words of length exactly n in lexicographic order (Duval's algorithm).
///
/// Restricting to a leading symbol gives a contiguous block of the full sequence, so the
/// blocks for leading symbols 0..t-1 concatenate to the serial stream.
class LyndonWords {
 public:
  LyndonWords(int t, int n, double budget = kDefaultEnumerationBudget);
  LyndonWords(int t, int n, Symbol leading, double budget = kDefaultEnumerationBudget);

  class iterator {
   public:
    using value_type = Word;
    using difference_type = std::ptrdiff_t;
    iterator() = default;
    iterator(int t, int n, int leading);
    const Word& operator*() const { return w_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || w_ == o.w_); }

   private:
    void advance();
    int t_ = 0;
    int n_ = 0;
    int leading_ = -1;
    Word w_;
    std::vector<int> work_;
    bool done_ = true;
  };

  iterator begin() const { return {t_, n_, leading_}; }
  iterator end() const { return {}; }

  std::vector<Word> collect() const;

 private:
  int t_;
  int n_;
  int leading_;
};

/// Minimal period of the periodic point generated by w.
int minimal_period(std::span<const Symbol> w);

/// Smallest cyclic rotation of w.
Word canonical_rotation(std::span<const Symbol> w);

/// Potential depending on the first k coordinates; table index is the base-t number x_0 ... x_{k-1}.
class Potential {
 public:
  Potential(int t, int memory, std::vector<double> table, std::string description = "table");

  static Potential constant(int t, double value, int memory = 1);

  int symbols() const { return t_; }
  int memory() const { return k_; }
  const std::vector<double>& table() const { return table_; }
  const std::string& description() const { return description_; }

  double operator()(std::span<const Symbol> window) const;
  double at(std::size_t index) const { return table_[index]; }
  double min() const;
  double max() const;
  bool is_constant() const;

  Potential scaled(double factor) const;
  Potential shifted(double offset) const;
  /// Same function viewed as a memory-k potential, k >= memory().
  Potential lifted(int k) const;
  /// Smallest memory that represents the same function.
  Potential reduced() const;

 private:
  int t_;
  int k_;
  std::vector<double> table_;
  std::string description_;
};

/// V^n at the periodic point generated by w (windows wrap around).
double birkhoff_sum(const Potential& v, std::span<const Symbol> periodic_word);

/// Potential family given by its value on a finite prefix followed by the constant-1 tail,
/// with Hoelder data |V(x) - V(y)| <= holder_const * d_gamma(x, y)^alpha.
struct HolderFamily {
  std::function<double(std::span<const Symbol>)> evaluate;
  std::optional<double> holder_const;
  std::optional<double> alpha;
  double gamma = 0.5;
  std::string description = "family";
};

HolderFamily constant_family(double value);
/// V(x) = sum_j decay^j values[x_j], evaluated in closed form on the constant tail.
HolderFamily decaying_symbol_sum(std::vector<double> values, double decay, double gamma);

struct TruncatedPotential {
  Potential potential;
  double sup_error_bound;
};

TruncatedPotential truncate_to_memory(const HolderFamily& family, int t, int k);

}  // namespace kusuoka
