#include "kusuoka/symbolic.hpp"

#include <algorithm>
#include <cmath>

#include "kusuoka/errors.hpp"

namespace kusuoka {

std::string to_string(std::span<const Symbol> w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol x : w) s.push_back(static_cast<char>('1' + x));
  return s;
}

Word parse_word(std::string_view text, int t) {
  if (t > 9) throw ArgumentError("parse_word: digit words need t <= 9");
  Word w;
  for (char ch : text) {
    const int v = ch - '1';
    if (v < 0 || v >= t) throw ArgumentError("symbol '" + std::string(1, ch) + "' out of range in word '" + std::string(text) + "'");
    w.push_back(static_cast<Symbol>(v));
  }
  return w;
}

void check_budget(int t, int n, double budget) {
  if (t < 1) throw ArgumentError("alphabet must be nonempty");
  if (n < 1) throw ArgumentError("word length must be positive");
  if (n * std::log(static_cast<double>(t)) > std::log(budget) + 1e-9)
    throw BudgetError("enumeration of " + std::to_string(t) + "^" + std::to_string(n) +
                      " words exceeds the budget of " + std::to_string(static_cast<long long>(budget)));
}

FixPoints::FixPoints(int t, int n, double budget) : t_(t), n_(n) { check_budget(t, n, budget); }

FixPoints::iterator& FixPoints::iterator::operator++() {
  int pos = static_cast<int>(w_.size()) - 1;
  while (pos >= 0 && w_[pos] == t_ - 1) w_[pos--] = 0;
  if (pos < 0) {
    done_ = true;
  } else {
    ++w_[pos];
  }
  return *this;
}

LyndonWords::LyndonWords(int t, int n, double budget) : t_(t), n_(n), leading_(-1) { check_budget(t, n, budget); }

LyndonWords::LyndonWords(int t, int n, Symbol leading, double budget) : t_(t), n_(n), leading_(leading) {
  check_budget(t, n, budget);
  if (leading >= t) throw ArgumentError("LyndonWords: leading symbol out of range");
}

LyndonWords::iterator::iterator(int t, int n, int leading) : t_(t), n_(n), leading_(leading), done_(false) {
  work_.push_back(leading < 0 ? -1 : leading - 1);
  advance();
}

void LyndonWords::iterator::advance() {
  while (true) {
    if (work_.empty()) {
      done_ = true;
      return;
    }
    ++work_.back();
    if (leading_ >= 0 && work_.front() != leading_) {
      done_ = true;
      return;
    }
    const std::size_t m = work_.size();
    const bool hit = static_cast<int>(m) == n_;
    if (hit) w_.assign(work_.begin(), work_.end());
    while (static_cast<int>(work_.size()) < n_) work_.push_back(work_[work_.size() - m]);
    while (!work_.empty() && work_.back() == t_ - 1) work_.pop_back();
    if (hit) return;
  }
}

LyndonWords::iterator& LyndonWords::iterator::operator++() {
  advance();
  return *this;
}

std::vector<Word> LyndonWords::collect() const {
  std::vector<Word> out;
  for (const auto& w : *this) out.push_back(w);
  return out;
}

int minimal_period(std::span<const Symbol> w) {
  const int n = static_cast<int>(w.size());
  for (int p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (int i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return p;
  }
  return n;
}

Word canonical_rotation(std::span<const Symbol> w) {
  Word best(w.begin(), w.end());
  Word rot = best;
  for (std::size_t s = 1; s < w.size(); ++s) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

namespace {

std::size_t ipow(int t, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(t);
  return r;
}

}  // namespace

Potential::Potential(int t, int memory, std::vector<double> table, std::string description)
    : t_(t), k_(memory), table_(std::move(table)), description_(std::move(description)) {
  if (t < 1) throw ArgumentError("Potential: alphabet must be nonempty");
  if (memory < 1) throw ArgumentError("Potential: memory must be at least 1");
  if (table_.size() != ipow(t, memory))
    throw ArgumentError("Potential: table must have t^k entries");
  for (double v : table_)
    if (!std::isfinite(v)) throw ArgumentError("Potential: non-finite table entry");
}

Potential Potential::constant(int t, double value, int memory) {
  return Potential(t, memory, std::vector<double>(ipow(t, memory), value), "constant");
}

double Potential::operator()(std::span<const Symbol> window) const {
  if (static_cast<int>(window.size()) != k_) throw ArgumentError("Potential: window length must equal memory");
  std::size_t idx = 0;
  for (Symbol s : window) idx = idx * t_ + s;
  return table_[idx];
}

double Potential::min() const { return *std::min_element(table_.begin(), table_.end()); }
double Potential::max() const { return *std::max_element(table_.begin(), table_.end()); }
bool Potential::is_constant() const { return min() == max(); }

Potential Potential::scaled(double factor) const {
  auto t = table_;
  for (double& v : t) v *= factor;
  return Potential(t_, k_, std::move(t), description_);
}

Potential Potential::shifted(double offset) const {
  auto t = table_;
  for (double& v : t) v += offset;
  return Potential(t_, k_, std::move(t), description_);
}

Potential Potential::lifted(int k) const {
  if (k < k_) throw ArgumentError("Potential::lifted: cannot lower memory");
  const std::size_t stride = ipow(t_, k - k_);
  std::vector<double> t(ipow(t_, k));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = table_[i / stride];
  return Potential(t_, k, std::move(t), description_);
}

Potential Potential::reduced() const {
  for (int k = 1; k < k_; ++k) {
    const std::size_t stride = ipow(t_, k_ - k);
    bool same = true;
    for (std::size_t i = 0; i < table_.size() && same; ++i) same = table_[i] == table_[(i / stride) * stride];
    if (same) {
      std::vector<double> t(ipow(t_, k));
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = table_[i * stride];
      return Potential(t_, k, std::move(t), description_);
    }
  }
  return *this;
}

double birkhoff_sum(const Potential& v, std::span<const Symbol> periodic_word) {
  const std::size_t n = periodic_word.size();
  if (n == 0) throw ArgumentError("birkhoff_sum: empty word");
  const int k = v.memory();
  const int t = v.symbols();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t idx = 0;
    for (int a = 0; a < k; ++a) idx = idx * t + periodic_word[(j + a) % n];
    sum += v.at(idx);
  }
  return sum;
}

HolderFamily constant_family(double value) {
  return {[value](std::span<const Symbol>) { return value; }, 0.0, 1.0, 0.5, "constant"};
}

HolderFamily decaying_symbol_sum(std::vector<double> values, double decay, double gamma) {
  if (values.empty()) throw ArgumentError("decaying_symbol_sum: no values");
  if (!(decay > 0.0 && decay < 1.0)) throw ArgumentError("decaying_symbol_sum: decay must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ArgumentError("decaying_symbol_sum: gamma must lie in (0, 1)");
  const double spread = *std::max_element(values.begin(), values.end()) - *std::min_element(values.begin(), values.end());
  auto eval = [values, decay](std::span<const Symbol> prefix) {
    double sum = 0.0;
    double w = 1.0;
    for (Symbol s : prefix) {
      if (s >= values.size()) throw ArgumentError("decaying_symbol_sum: symbol out of range");
      sum += w * values[s];
      w *= decay;
    }
    return sum + values[0] * w / (1.0 - decay);
  };
  return {eval, spread / (1.0 - decay), std::log(decay) / std::log(gamma), gamma, "decaying_symbol_sum"};
}

TruncatedPotential truncate_to_memory(const HolderFamily& family, int t, int k) {
  if (!family.holder_const || !family.alpha) throw ArgumentError("truncate_to_memory: family lacks Hoelder metadata");
  if (!(family.gamma > 0.0 && family.gamma < 1.0)) throw ArgumentError("truncate_to_memory: gamma must lie in (0, 1)");
  if (k < 1) throw ArgumentError("truncate_to_memory: memory must be at least 1");
  std::vector<double> table;
  for (const auto& word : FixPoints(t, k)) table.push_back(family.evaluate(word));
  const double bound = *family.holder_const * std::pow(family.gamma, *family.alpha * k);
  return {Potential(t, k, std::move(table), family.description), bound};
}

}  // namespace kusuoka
