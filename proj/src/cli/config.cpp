#include "kusuoka/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string_view>

namespace kusuoka::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& node, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!node.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& item : node.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": expected a finite number");
  return x;
}

long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<long>();
}

long positive(const json& v, const std::string& where) {
  const long x = integer(v, where);
  if (x < 1) throw ConfigError(where + ": must be positive");
  return x;
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

MatrixXd matrix_rows(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + ": expected a nonempty array of rows");
  const std::size_t d = v.size();
  MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const auto row = numbers(v[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != d) throw ConfigError(where + ": matrix must be square");
    for (std::size_t j = 0; j < d; ++j) m(i, j) = row[j];
  }
  return m;
}

IfsSpec preset(const std::string& name, const json& node) {
  auto rho_or = [&](double fallback) { return node.contains("rho") ? number(node["rho"], "ifs.rho") : fallback; };
  if (name == "harmonic_gasket" || name == "gasket") return harmonic_gasket();
  if (name == "dyadic") return dyadic();
  if (name == "rotation_family") {
    const double rho = rho_or(0.9);
    if (node.contains("angles")) {
      const auto angles = numbers(node["angles"], "ifs.angles");
      return rotation_family(rho, angles);
    }
    return rotation_family(rho);
  }
  if (name == "line_family") {
    const int t = node.contains("t") ? static_cast<int>(positive(node["t"], "ifs.t")) : 2;
    return line_family(rho_or(0.5), t);
  }
  throw ConfigError("ifs: unknown preset '" + name + "'");
}

// Keys are words over the digits 1..t of length k; every word must appear exactly once.
std::vector<double> table_from_object(const json& table, int t, int k) {
  std::size_t size = 1;
  for (int j = 0; j < k; ++j) size *= static_cast<std::size_t>(t);
  std::vector<double> out(size, 0.0);
  std::vector<bool> seen(size, false);
  for (const auto& item : table.items()) {
    const std::string& key = item.key();
    Word w;
    try {
      w = parse_word(key, t);
    } catch (const std::exception&) {
      throw ConfigError("potential.table: malformed key '" + key + "'");
    }
    if (static_cast<int>(w.size()) != k)
      throw ConfigError("potential.table: key '" + key + "' must have " + std::to_string(k) + " digits");
    std::size_t idx = 0;
    for (Symbol s : w) idx = idx * t + s;
    out[idx] = number(item.value(), "potential.table['" + key + "']");
    seen[idx] = true;
  }
  for (std::size_t idx = 0; idx < size; ++idx) {
    if (!seen[idx]) {
      Word w(k);
      std::size_t r = idx;
      for (int j = k - 1; j >= 0; --j) {
        w[j] = static_cast<Symbol>(r % t);
        r /= t;
      }
      throw ConfigError("potential.table: missing key '" + to_string(w) + "'");
    }
  }
  return out;
}

HolderFamily holder_family(const std::string& name, const json& params, int t) {
  if (name == "constant") {
    reject_unknown(params, "potential.params", {"value"});
    return constant_family(params.contains("value") ? number(params["value"], "potential.params.value") : 0.0);
  }
  if (name == "decaying_symbol_sum") {
    reject_unknown(params, "potential.params", {"values", "decay", "gamma"});
    if (!params.contains("values")) throw ConfigError("potential.params: 'values' is required");
    auto values = numbers(params["values"], "potential.params.values");
    if (static_cast<int>(values.size()) != t)
      throw ConfigError("potential.params.values: need one value per map");
    const double decay = params.contains("decay") ? number(params["decay"], "potential.params.decay") : 0.5;
    const double gamma = params.contains("gamma") ? number(params["gamma"], "potential.params.gamma") : 0.5;
    return decaying_symbol_sum(std::move(values), decay, gamma);
  }
  throw ConfigError("potential.family: unknown family '" + name + "'");
}

void parse_knobs(const json& doc, Knobs& k) {
  if (doc.contains("tol")) {
    k.tol = number(doc["tol"], "tol");
    if (!(k.tol > 0.0)) throw ConfigError("tol: must be positive");
  }
  if (doc.contains("max_iter")) k.max_iter = static_cast<int>(positive(doc["max_iter"], "max_iter"));
  if (doc.contains("budget")) {
    k.budget = number(doc["budget"], "budget");
    if (!(k.budget >= 1.0)) throw ConfigError("budget: must be at least 1");
  }
  if (doc.contains("max_period")) k.max_period = static_cast<int>(positive(doc["max_period"], "max_period"));
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<long>() >= 0))
      throw ConfigError("seed: expected a nonnegative integer");
    k.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("depth")) k.depth = static_cast<int>(positive(doc["depth"], "depth"));
  if (doc.contains("samples")) k.samples = positive(doc["samples"], "samples");
  if (doc.contains("streams")) k.streams = static_cast<int>(positive(doc["streams"], "streams"));
  if (doc.contains("words")) k.words = static_cast<int>(positive(doc["words"], "words"));
  if (doc.contains("l_grid")) {
    if (!doc["l_grid"].is_array() || doc["l_grid"].empty()) throw ConfigError("l_grid: expected a nonempty array");
    k.l_grid.clear();
    for (std::size_t i = 0; i < doc["l_grid"].size(); ++i)
      k.l_grid.push_back(static_cast<int>(positive(doc["l_grid"][i], "l_grid[" + std::to_string(i) + "]")));
    if (!std::is_sorted(k.l_grid.begin(), k.l_grid.end())) throw ConfigError("l_grid: must be increasing");
  }
  if (doc.contains("gamma_prime")) {
    k.gamma_prime = number(doc["gamma_prime"], "gamma_prime");
    if (!(k.gamma_prime > 1.0)) throw ConfigError("gamma_prime: must exceed 1");
  }
  if (doc.contains("y_grid")) {
    const json& g = doc["y_grid"];
    reject_unknown(g, "y_grid", {"min", "max", "steps"});
    if (g.contains("min")) k.y_min = number(g["min"], "y_grid.min");
    if (g.contains("max")) k.y_max = number(g["max"], "y_grid.max");
    if (g.contains("steps")) k.y_steps = static_cast<int>(positive(g["steps"], "y_grid.steps"));
    if (!(k.y_max >= k.y_min)) throw ConfigError("y_grid: max must not be below min");
  }
  if (doc.contains("exclusion")) k.exclusion = number(doc["exclusion"], "exclusion");
  if (doc.contains("z")) {
    const json& zs = doc["z"];
    if (!zs.is_array()) throw ConfigError("z: expected an array of [re, im] pairs");
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const auto pair = numbers(zs[i], "z[" + std::to_string(i) + "]");
      if (pair.size() != 2) throw ConfigError("z[" + std::to_string(i) + "]: expected [re, im]");
      k.z.emplace_back(pair[0], pair[1]);
    }
  }
  if (doc.contains("z_random")) k.z_random = static_cast<int>(integer(doc["z_random"], "z_random"));
  if (doc.contains("z_radius")) {
    k.z_radius = number(doc["z_radius"], "z_radius");
    if (!(k.z_radius > 0.0 && k.z_radius < 1.0)) throw ConfigError("z_radius: must lie in (0, 1)");
  }
  if (doc.contains("zeta_terms")) k.zeta_terms = static_cast<int>(positive(doc["zeta_terms"], "zeta_terms"));
  if (doc.contains("euler_max_period"))
    k.euler_max_period = static_cast<int>(positive(doc["euler_max_period"], "euler_max_period"));
  if (doc.contains("competitors")) {
    const json& cs = doc["competitors"];
    if (!cs.is_array()) throw ConfigError("competitors: expected an array of weight vectors");
    for (std::size_t i = 0; i < cs.size(); ++i)
      k.competitors.push_back(numbers(cs[i], "competitors[" + std::to_string(i) + "]"));
  }
  if (doc.contains("c_grid")) {
    k.c_grid = static_cast<int>(positive(doc["c_grid"], "c_grid"));
    if (k.c_grid < 2) throw ConfigError("c_grid: need at least two points");
  }
}

}  // namespace

IfsSpec parse_ifs(const json& node, std::string* description) {
  if (node.is_string()) {
    const std::string name = node.get<std::string>();
    if (description) *description = name;
    return preset(name, json::object());
  }
  if (!node.is_object()) throw ConfigError("ifs: expected a preset name or an object");
  if (node.contains("preset")) {
    reject_unknown(node, "ifs", {"preset", "rho", "t", "angles"});
    if (!node["preset"].is_string()) throw ConfigError("ifs.preset: expected a string");
    const std::string name = node["preset"].get<std::string>();
    if (description) *description = node.dump();
    return preset(name, node);
  }
  reject_unknown(node, "ifs", {"maps", "name"});
  if (!node.contains("maps") || !node["maps"].is_array() || node["maps"].empty())
    throw ConfigError("ifs: expected 'preset' or a nonempty 'maps' array");
  std::vector<AffineMap> maps;
  for (std::size_t i = 0; i < node["maps"].size(); ++i) {
    const std::string where = "ifs.maps[" + std::to_string(i) + "]";
    const json& m = node["maps"][i];
    reject_unknown(m, where, {"linear", "offset"});
    if (!m.contains("linear") || !m.contains("offset")) throw ConfigError(where + ": needs 'linear' and 'offset'");
    MatrixXd a = matrix_rows(m["linear"], where + ".linear");
    const auto b = numbers(m["offset"], where + ".offset");
    if (static_cast<long>(b.size()) != a.rows()) throw ConfigError(where + ".offset: dimension mismatch");
    maps.push_back({std::move(a), Eigen::Map<const VectorXd>(b.data(), static_cast<long>(b.size()))});
  }
  const std::string name = node.contains("name") && node["name"].is_string() ? node["name"].get<std::string>() : "custom";
  if (description) *description = name;
  try {
    return IfsSpec(std::move(maps), Verification::Unverified, name);
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("ifs: ") + e.what());
  }
}

TruncatedPotential parse_potential(const json& node, int t) {
  if (node.is_number()) return {Potential::constant(t, number(node, "potential")), 0.0};
  if (!node.is_object()) throw ConfigError("potential: expected a number or an object");
  if (node.contains("constant")) {
    reject_unknown(node, "potential", {"constant"});
    const double v = number(node["constant"], "potential.constant");
    return {Potential::constant(t, v), 0.0};
  }
  if (node.contains("table")) {
    reject_unknown(node, "potential", {"memory", "table"});
    if (!node.contains("memory")) throw ConfigError("potential: 'memory' is required with 'table'");
    const int k = static_cast<int>(positive(node["memory"], "potential.memory"));
    const json& table = node["table"];
    std::vector<double> values;
    if (table.is_array()) {
      values = numbers(table, "potential.table");
      std::size_t size = 1;
      for (int j = 0; j < k; ++j) size *= static_cast<std::size_t>(t);
      if (values.size() != size) throw ConfigError("potential.table: need t^memory entries");
    } else if (table.is_object()) {
      values = table_from_object(table, t, k);
    } else {
      throw ConfigError("potential.table: expected an object or an array");
    }
    return {Potential(t, k, std::move(values), "table"), 0.0};
  }
  if (node.contains("family")) {
    reject_unknown(node, "potential", {"family", "params", "truncation_k"});
    if (!node["family"].is_string()) throw ConfigError("potential.family: expected a string");
    const json params = node.contains("params") ? node["params"] : json::object();
    const HolderFamily fam = holder_family(node["family"].get<std::string>(), params, t);
    const int k = node.contains("truncation_k") ? static_cast<int>(positive(node["truncation_k"], "potential.truncation_k")) : 2;
    return truncate_to_memory(fam, t, k);
  }
  throw ConfigError("potential: expected 'constant', 'table' or 'family'");
}

RunConfig parse_config(const json& doc) {
  reject_unknown(doc, "config",
                 {"ifs", "q", "potential", "vhat", "tol", "max_iter", "budget", "max_period", "seed", "depth",
                  "samples", "streams", "words", "l_grid", "gamma_prime", "y_grid", "exclusion", "z", "z_random",
                  "z_radius", "zeta_terms", "euler_max_period", "competitors", "c_grid", "out"});
  if (!doc.contains("ifs")) throw ConfigError("config: 'ifs' is required");
  try {
    std::string description;
    IfsSpec ifs = parse_ifs(doc["ifs"], &description);
    const int t = ifs.symbols();
    const int q = doc.contains("q") ? static_cast<int>(positive(doc["q"], "q")) : 1;
    if (q > ifs.dimension()) throw ConfigError("q: must not exceed the dimension " + std::to_string(ifs.dimension()));
    TruncatedPotential v = doc.contains("potential") ? parse_potential(doc["potential"], t)
                                                     : TruncatedPotential{Potential::constant(t, 0.0), 0.0};
    TruncatedPotential vhat = doc.contains("vhat") ? parse_potential(doc["vhat"], t)
                                                   : TruncatedPotential{Potential::constant(t, 1.0), 0.0};
    if (!(vhat.potential.min() > 0.0)) throw ConfigError("vhat: values must be strictly positive");
    Knobs knobs;
    parse_knobs(doc, knobs);
    for (std::size_t i = 0; i < knobs.competitors.size(); ++i) {
      const auto& w = knobs.competitors[i];
      const std::string where = "competitors[" + std::to_string(i) + "]";
      if (static_cast<int>(w.size()) != t) throw ConfigError(where + ": need one weight per map");
      double sum = 0.0;
      for (double x : w) {
        if (!(x > 0.0)) throw ConfigError(where + ": weights must be positive");
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(where + ": weights must sum to 1");
    }
    std::optional<std::filesystem::path> out;
    if (doc.contains("out")) {
      if (!doc["out"].is_string()) throw ConfigError("out: expected a path string");
      out = doc["out"].get<std::string>();
    }
    return RunConfig{std::move(ifs), std::move(description), q, std::move(v.potential), v.sup_error_bound,
                     std::move(vhat.potential), std::move(knobs), std::move(out)};
  } catch (const ConfigError&) {
    throw;
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

}  // namespace kusuoka::cli
