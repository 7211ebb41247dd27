#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kusuoka/ifs.hpp"
#include "kusuoka/symbolic.hpp"

namespace kusuoka::cli {

/// Invalid configuration; always maps to exit code 1.
class ConfigError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

struct Knobs {
  double tol = 1e-12;
  int max_iter = 200000;
  double budget = kDefaultEnumerationBudget;
  /// 0 selects the command default.
  int max_period = 0;
  std::uint64_t seed = 1;
  int depth = 24;
  long samples = 100000;
  int streams = 64;
  int words = 32;
  std::vector<int> l_grid{25, 50, 100, 200};
  double gamma_prime = 1.5;
  double y_min = 0.0;
  double y_max = 20.0;
  int y_steps = 2001;
  double exclusion = 0.1;
  /// Explicit zeta evaluation points; when empty, z_random points are drawn in |z| <= z_radius / beta.
  std::vector<std::complex<double>> z;
  int z_random = 20;
  double z_radius = 0.9;
  int zeta_terms = 0;
  int euler_max_period = 0;
  std::vector<std::vector<double>> competitors;
  int c_grid = 10;
};

struct RunConfig {
  IfsSpec ifs;
  std::string ifs_description;
  int q = 1;
  Potential potential;
  double potential_error = 0.0;
  Potential vhat;
  Knobs knobs;
  std::optional<std::filesystem::path> out;
};

/// Validates a configuration document. Unknown keys, malformed tables and violated
/// preconditions raise ConfigError naming the offending entry.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

IfsSpec parse_ifs(const nlohmann::json& node, std::string* description = nullptr);
TruncatedPotential parse_potential(const nlohmann::json& node, int t);

}  // namespace kusuoka::cli
