#include "kusuoka/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "kusuoka/counting.hpp"
#include "kusuoka/lyapunov.hpp"
#include "kusuoka/orbits.hpp"
#include "kusuoka/transfer.hpp"
#include "kusuoka/zeta.hpp"

namespace kusuoka::cli {

namespace {

using nlohmann::json;

json matrix_json(const MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json header(const std::string& command, const RunConfig& config, std::uint64_t seed) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"ifs", config.ifs_description},
              {"q", config.q},
              {"symbols", config.ifs.symbols()},
              {"potential", config.potential.description()},
              {"potential_memory", config.potential.memory()},
              {"potential_truncation_error", config.potential_error},
              {"seed", seed}};
}

std::uint64_t seed_of(const RunConfig& config, const RuntimeOptions& runtime) {
  return runtime.seed.value_or(config.knobs.seed);
}

PerronOptions perron_options(const RunConfig& config, std::uint64_t seed) {
  PerronOptions o;
  o.tol = config.knobs.tol;
  o.max_iter = config.knobs.max_iter;
  o.seed = seed;
  return o;
}

EnumerationOptions enumeration(const RunConfig& config, const RuntimeOptions& runtime) {
  EnumerationOptions o;
  o.workers = runtime.workers;
  o.budget = config.knobs.budget;
  return o;
}

// Largest n with t^n within the cap; the enumeration default for counting and explicit Euler products.
int default_period(int t, double cap) {
  int n = 1;
  double size = t;
  while (size * t <= cap) {
    size *= t;
    ++n;
  }
  return n;
}

double beta_zero(const std::shared_ptr<const PushForwardFamily>& family, const PerronOptions& options) {
  return perron(build_block_operator(family, Potential::constant(family->symbols(), 0.0)), options).beta;
}

double finite_or_nan(double x) { return std::isfinite(x) ? x : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"solve", "count", "zeta", "variational", "lyapunov", "root", "scanline"};
  return names;
}

CommandResult cmd_solve(const RunConfig& config, const RuntimeOptions& runtime) {
  const std::uint64_t seed = seed_of(config, runtime);
  const auto family = make_family(config.ifs, config.q);
  const auto op = build_block_operator(family, config.potential);
  const SpectralResult sr = perron(op, perron_options(config, seed));
  const auto spectrum = dense_spectrum(op);

  CommandResult res;
  res.summary = header("solve", config, seed);
  res.summary["beta"] = sr.beta;
  res.summary["pressure"] = std::log(sr.beta);
  res.summary["iterations"] = sr.iterations;
  res.summary["adjoint_iterations"] = sr.adjoint_iterations;
  res.summary["residuals"] = {{"right", sr.right_residual}, {"left", sr.left_residual}, {"theta", sr.residual_theta}};
  res.summary["cone_diameter"] = finite_or_nan(sr.cone_diameter);
  res.summary["dense_spectral_radius"] = std::abs(spectrum.front());
  res.summary["second_eigenvalue_abs"] = spectrum.size() > 1 ? std::abs(spectrum[1]) : 0.0;
  res.summary["spectral_gap_ratio"] = spectrum.size() > 1 ? std::abs(spectrum[1]) / sr.beta : 0.0;
  json q = json::array();
  json mu = json::array();
  for (const auto& m : sr.Q) q.push_back(matrix_json(m));
  for (const auto& m : sr.mu) mu.push_back(matrix_json(m));
  res.summary["Q"] = std::move(q);
  res.summary["mu"] = std::move(mu);

  Table t{"solve_spectrum", {"index", "re", "im", "abs"}, {}};
  for (std::size_t i = 0; i < spectrum.size(); ++i)
    t.rows.push_back({static_cast<double>(i), spectrum[i].real(), spectrum[i].imag(), std::abs(spectrum[i])});
  res.tables.push_back(std::move(t));
  return res;
}

CommandResult cmd_count(const RunConfig& config, const RuntimeOptions& runtime) {
  const std::uint64_t seed = seed_of(config, runtime);
  const auto family = make_family(config.ifs, config.q);
  const int t = family->symbols();
  const int max_period = config.knobs.max_period ? config.knobs.max_period : default_period(t, std::min(1e7, config.knobs.budget));
  check_budget(t, max_period, config.knobs.budget);
  const double beta = beta_zero(family, perron_options(config, seed));
  const double c = pressure_root(family, config.vhat);
  if (c == 0.0) throw ConfigError("count: the pressure root c is zero");

  const CountingTables tables = counting_tables(*family, config.vhat, c, max_period,
                                                exact_weight_grid(config.vhat, c, max_period), enumeration(config, runtime));
  const AsymptoticReport rep = asymptotic_report(tables, beta, config.vhat.is_constant(), config.knobs.gamma_prime);
  const RescaledCounts rescaled = rescale_counts(tables);

  CommandResult res;
  res.summary = header("count", config, seed);
  res.summary["vhat"] = config.vhat.description();
  res.summary["beta"] = beta;
  res.summary["c"] = c;
  res.summary["max_period"] = max_period;
  res.summary["gamma_prime"] = config.knobs.gamma_prime;
  res.summary["exact_log_r_limit"] = tables.exact_log_limit;
  res.summary["r_pi_prime_bound"] = rep.r_pi_prime_bound;
  res.summary["pi_bound"] = rep.pi_bound;
  res.summary["S_limit"] = rep.S_limit;
  res.summary["pi_bounded"] = rep.pi_bounded;
  res.summary["pi_prime_tail_spread"] = rep.pi_prime_tail_spread;
  res.summary["pi_prime_tail_remainder"] = std::isfinite(rep.pi_prime_tail_remainder) ? json(rep.pi_prime_tail_remainder) : json(nullptr);
  double max_ratio = 0.0;
  for (std::size_t i = std::min<std::size_t>(9, rep.r_pi_prime_over_beta_r.size() - 1); i < rep.r_pi_prime_over_beta_r.size(); ++i)
    max_ratio = std::max(max_ratio, rep.r_pi_prime_over_beta_r[i]);
  res.summary["max_r_pi_prime_over_beta_r_from_10"] = max_ratio;
  res.summary["last_S_over_r"] = rep.S_over_r.empty() ? 0.0 : rep.S_over_r.back();

  Table periods{"count_periods",
                {"r", "pi_prime", "eta", "r_pi_prime_over_beta_r", "r_pi_prime_bound", "pi_prime_over_beta_gamma_r",
                 "eta_geometric_error"},
                {}};
  for (int r = 1; r <= max_period; ++r) {
    const std::size_t i = static_cast<std::size_t>(r - 1);
    periods.rows.push_back({static_cast<double>(r), tables.pi_prime[i], tables.eta[i], rep.r_pi_prime_over_beta_r[i],
                            rep.r_pi_prime_bound, rep.pi_prime_over_beta_gamma_r[i], rep.eta_geometric_error[i]});
  }
  Table weights{"count_weights",
                {"log_r", "r", "pi", "S", "pi_log_r_over_r", "pi_bound", "S_over_r", "S_limit", "log_r_hat",
                 "pi_hat", "pi_hat_normalized", "exact"},
                {}};
  for (std::size_t i = 0; i < tables.log_r.size(); ++i) {
    weights.rows.push_back({tables.log_r[i], std::exp(tables.log_r[i]), tables.pi[i], tables.S[i],
                            rep.pi_log_r_over_r[i], rep.pi_bound, rep.S_over_r[i], rep.S_limit, rescaled.log_r_hat[i],
                            rescaled.pi_hat[i], rescaled.normalized[i], tables.exact(i) ? 1.0 : 0.0});
  }
  res.tables.push_back(std::move(periods));
  res.tables.push_back(std::move(weights));
  return res;
}

CommandResult cmd_zeta(const RunConfig& config, const RuntimeOptions& runtime) {
  const std::uint64_t seed = seed_of(config, runtime);
  const auto family = make_family(config.ifs, config.q);
  const auto op = build_block_operator(family, config.potential);
  const double beta = perron(op, perron_options(config, seed)).beta;

  std::vector<Complex> zs = config.knobs.z;
  if (zs.empty()) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < config.knobs.z_random; ++i) {
      const double r = config.knobs.z_radius / beta * std::sqrt(unif(rng));
      const double a = 2.0 * std::numbers::pi * unif(rng);
      zs.push_back(std::polar(r, a));
    }
  }

  const bool by_content = commuting_family(*family) && config.potential.reduced().memory() == 1;
  int euler_period = config.knobs.euler_max_period;
  if (!euler_period) euler_period = by_content ? 220 : default_period(family->symbols(), std::min(1e6, config.knobs.budget));
  const std::vector<ZetaValue> euler =
      by_content ? zeta_euler_by_content(*family, config.potential.reduced(), zs, euler_period, beta)
                 : zeta_euler(*family, config.potential, zs, euler_period, beta, enumeration(config, runtime));

  CommandResult res;
  res.summary = header("zeta", config, seed);
  res.summary["beta"] = beta;
  res.summary["inverse_beta"] = 1.0 / beta;
  res.summary["pole_on_axis"] = pole_on_axis(op);
  res.summary["euler_method"] = by_content ? "letter_content" : "enumeration";
  res.summary["euler_max_period"] = euler_period;

  Table t{"zeta",
          {"re", "im", "series_re", "series_im", "series_tail_bound", "euler_re", "euler_im", "euler_tail_bound",
           "rational_re", "rational_im", "near_pole"},
          {}};
  double max_series = 0.0;
  double max_euler = 0.0;
  double max_series_bound = 0.0;
  double max_euler_bound = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const ZetaValue rat = zeta_rational(op, zs[i]);
    ZetaValue ser;
    if (std::abs(zs[i]) * beta < 1.0) {
      ser = zeta_series(op, zs[i], beta, config.knobs.zeta_terms);
    } else {
      ser.value = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
      ser.tail_bound = std::numeric_limits<double>::infinity();
    }
    if (!rat.near_pole) {
      const double scale = std::abs(rat.value);
      if (std::isfinite(ser.tail_bound)) {
        max_series = std::max(max_series, std::abs(ser.value - rat.value) / scale);
        max_series_bound = std::max(max_series_bound, ser.tail_bound);
      }
      max_euler = std::max(max_euler, std::abs(euler[i].value - rat.value) / scale);
      max_euler_bound = std::max(max_euler_bound, euler[i].tail_bound);
    }
    t.rows.push_back({zs[i].real(), zs[i].imag(), ser.value.real(), ser.value.imag(), finite_or_nan(ser.tail_bound),
                      euler[i].value.real(), euler[i].value.imag(), finite_or_nan(euler[i].tail_bound),
                      rat.value.real(), rat.value.imag(), rat.near_pole ? 1.0 : 0.0});
  }
  res.summary["points"] = zs.size();
  res.summary["max_rel_diff_series_rational"] = max_series;
  res.summary["max_rel_diff_euler_rational"] = max_euler;
  res.summary["max_series_tail_bound"] = max_series_bound;
  res.summary["max_euler_tail_bound"] = max_euler_bound;
  res.tables.push_back(std::move(t));
  return res;
}

CommandResult cmd_variational(const RunConfig& config, const RuntimeOptions& runtime) {
  const std::uint64_t seed = seed_of(config, runtime);
  const auto family = make_family(config.ifs, config.q);
  const auto op = build_block_operator(family, config.potential);
  const CylinderMeasure cm(family, config.potential, perron(op, perron_options(config, seed)));
  const double log_beta = std::log(cm.beta());

  VariationalOptions vo;
  vo.samples = config.knobs.samples;
  vo.depth = config.knobs.depth;
  vo.seed = seed;
  vo.workers = runtime.workers;
  vo.streams = config.knobs.streams;

  std::vector<std::vector<double>> competitors = config.knobs.competitors;
  if (competitors.empty()) {
    const int t = cm.symbols();
    for (double p : {0.0, 1.0, -1.0, 2.0, -2.0}) {
      std::vector<double> w(t);
      double sum = 0.0;
      for (int j = 0; j < t; ++j) sum += w[j] = std::pow(j + 1.0, p);
      for (double& x : w) x /= sum;
      competitors.push_back(std::move(w));
    }
  }

  CommandResult res;
  res.summary = header("variational", config, seed);
  res.summary["beta"] = cm.beta();
  res.summary["log_beta"] = log_beta;
  res.summary["samples"] = vo.samples;
  res.summary["depth"] = vo.depth;

  Table t{"variational",
          {"measure", "entropy", "energy", "log_term", "value", "se_entropy", "se_energy", "se_log_term",
           "se_combined", "se_value", "normalization_violations"},
          {}};
  auto row = [&](double index, const VariationalEstimate& e) {
    t.rows.push_back({index, e.entropy, e.energy, e.log_term, e.value, e.se_entropy, e.se_energy, e.se_log_term,
                      e.se_combined, e.se_value, static_cast<double>(e.normalization_violations)});
  };

  const VariationalEstimate k = variational_kusuoka(cm, vo);
  row(0.0, k);
  const bool equality = std::abs(k.value - log_beta) <= 3.0 * k.se_combined;
  res.summary["kusuoka"] = {{"value", k.value},
                            {"entropy", k.entropy},
                            {"energy", k.energy},
                            {"log_term", k.log_term},
                            {"se_combined", k.se_combined},
                            {"se_value", k.se_value},
                            {"deviation", k.value - log_beta},
                            {"within_3se", equality}};
  json comp = json::array();
  bool all_below = true;
  for (std::size_t i = 0; i < competitors.size(); ++i) {
    const VariationalEstimate e = variational_bernoulli(cm, competitors[i], vo);
    row(static_cast<double>(i + 1), e);
    // Symmetric competitors can attain the bound exactly; allow roundoff.
    const bool ok = e.value <= log_beta + 3.0 * e.se_combined + 1e-12 * std::abs(log_beta);
    all_below = all_below && ok;
    comp.push_back({{"weights", competitors[i]},
                    {"value", e.value},
                    {"se_combined", e.se_combined},
                    {"normalization_violations", e.normalization_violations},
                    {"below_log_beta", ok}});
  }
  res.summary["competitors"] = std::move(comp);
  res.summary["equality_holds"] = equality;
  res.summary["competitors_below"] = all_below;
  res.tables.push_back(std::move(t));
  return res;
}

CommandResult cmd_lyapunov(const RunConfig& config, const RuntimeOptions& runtime) {
  const std::uint64_t seed = seed_of(config, runtime);
  const auto family = make_family(config.ifs, config.q);
  const auto op = build_block_operator(family, config.potential);
  const CylinderMeasure cm(family, config.potential, perron(op, perron_options(config, seed)));
  const MatrixXd mu = cm.mu_total();
  const std::vector<int>& ls = config.knobs.l_grid;
  const int l_max = ls.back();
  const int n_words = config.knobs.words;

  struct Row {
    double top, second, gap, defect, angle;
  };
  std::vector<std::vector<Row>> slots(static_cast<std::size_t>(n_words));
  parallel_for(slots.size(), runtime.workers, [&](std::size_t w) {
    const Word word = sample_kappa(cm, std::max(l_max, cm.memory()), stream_seed(seed, w));
    for (int l : ls) {
      const LyapunovEstimate le = lyap_matrix(cm.family(), mu, word, l);
      const OseledetsEstimate oe = oseledets_projection(cm.family(), mu, word, l);
      const MatrixXd m = density_M(cm, std::span<const Symbol>(word.data(), static_cast<std::size_t>(l)));
      slots[w].push_back({le.eigenvalues(0), le.eigenvalues.size() > 1 ? le.eigenvalues(1) : 0.0, le.gap,
                          oe.idempotency_defect, hs_angle(oe.projection, m)});
    }
  });

  Table t{"lyapunov",
          {"word_index", "l", "top_eigenvalue", "second_eigenvalue", "gap", "idempotency_defect", "alignment_angle",
           "rank_one_checked"},
          {}};
  double max_defect = 0.0;
  double max_angle = 0.0;
  double min_gap = 1.0;
  double top_min = std::numeric_limits<double>::infinity();
  double top_max = 0.0;
  int skipped = 0;
  for (int w = 0; w < n_words; ++w) {
    for (std::size_t j = 0; j < ls.size(); ++j) {
      const Row& r = slots[w][j];
      const bool checked = r.gap >= 1e-3;
      t.rows.push_back({static_cast<double>(w), static_cast<double>(ls[j]), r.top, r.second, r.gap, r.defect, r.angle,
                        checked ? 1.0 : 0.0});
      if (j + 1 == ls.size()) {
        min_gap = std::min(min_gap, r.gap);
        top_min = std::min(top_min, r.top);
        top_max = std::max(top_max, r.top);
        if (checked) {
          max_defect = std::max(max_defect, r.defect);
          max_angle = std::max(max_angle, r.angle);
        } else {
          ++skipped;
        }
      }
    }
  }

  CommandResult res;
  res.summary = header("lyapunov", config, seed);
  res.summary["beta"] = cm.beta();
  res.summary["words"] = n_words;
  res.summary["l_grid"] = ls;
  res.summary["max_idempotency_defect"] = max_defect;
  res.summary["max_alignment_angle"] = max_angle;
  res.summary["min_gap"] = min_gap;
  res.summary["skipped_low_gap"] = skipped;
  res.summary["top_eigenvalue_spread"] = top_max - top_min;
  res.tables.push_back(std::move(t));
  return res;
}

CommandResult cmd_root(const RunConfig& config, const RuntimeOptions& runtime) {
  const std::uint64_t seed = seed_of(config, runtime);
  const auto family = make_family(config.ifs, config.q);
  const PerronOptions po = perron_options(config, seed);
  const double c = pressure_root(family, config.vhat);
  const double p0 = pressure(family, Potential::constant(family->symbols(), 0.0), po);
  const double residual = pressure(family, config.vhat.scaled(-c), po);

  const int n = config.knobs.c_grid;
  const double span = std::max(0.5, std::abs(c));
  Table t{"root", {"c", "pressure"}, {}};
  bool decreasing = true;
  for (int i = 0; i < n; ++i) {
    const double ci = c + span * (2.0 * i / (n - 1) - 1.0);
    const double p = pressure(family, config.vhat.scaled(-ci), po);
    if (!t.rows.empty()) decreasing = decreasing && p < t.rows.back()[1];
    t.rows.push_back({ci, p});
  }

  CommandResult res;
  res.summary = header("root", config, seed);
  res.summary["vhat"] = config.vhat.description();
  res.summary["c"] = c;
  res.summary["pressure_zero"] = p0;
  res.summary["residual"] = residual;
  res.summary["strictly_decreasing"] = decreasing;
  res.summary["sign_matches"] = (c > 0.0) == (p0 > 0.0);
  res.tables.push_back(std::move(t));
  return res;
}

CommandResult cmd_scanline(const RunConfig& config, const RuntimeOptions& runtime) {
  const std::uint64_t seed = seed_of(config, runtime);
  const auto family = make_family(config.ifs, config.q);
  const double c = pressure_root(family, config.vhat);
  if (!(c > 0.0)) throw ConfigError("scanline: needs P(0) > 0 so that the pressure root c is positive");
  const Potential v = config.vhat.scaled(c);

  std::vector<double> ys;
  const int n = config.knobs.y_steps;
  for (int i = 0; i < n; ++i)
    ys.push_back(n == 1 ? config.knobs.y_min : config.knobs.y_min + (config.knobs.y_max - config.knobs.y_min) * i / (n - 1));
  const LineScan scan = line_scan(family, v, ys, config.knobs.exclusion);

  // zeta'/zeta(s) + 1/(s - 1) stays bounded near the simple pole at s = 1.
  double max_residual = 0.0;
  Table fit{"scanline_log_derivative", {"s", "log_derivative", "residual"}, {}};
  for (int i = 0; i < 20; ++i) {
    const double s = 1.01 + (1.2 - 1.01) * i / 19.0;
    const double ld = zeta_minus_v_log_derivative(family, v, Complex(s, 0.0)).real();
    const double residual = ld + 1.0 / (s - 1.0);
    max_residual = std::max(max_residual, std::abs(residual));
    fit.rows.push_back({s, ld, residual});
  }

  CommandResult res;
  res.summary = header("scanline", config, seed);
  res.summary["vhat"] = config.vhat.description();
  res.summary["c"] = c;
  res.summary["lattice"] = config.vhat.is_constant();
  res.summary["exclusion"] = config.knobs.exclusion;
  res.summary["min_abs"] = scan.min_abs;
  res.summary["argmin_y"] = scan.argmin_y;
  res.summary["abs_at_zero"] = std::abs(transfer_determinant(minus_v_operator(family, v, Complex(1.0, 0.0)).dense(), 1.0));
  res.summary["max_log_derivative_residual"] = max_residual;

  Table t{"scanline", {"y", "re", "im", "abs"}, {}};
  for (const auto& r : scan.rows) t.rows.push_back({r.y, r.det.real(), r.det.imag(), std::abs(r.det)});
  res.tables.push_back(std::move(t));
  res.tables.push_back(std::move(fit));
  return res;
}

CommandResult run_command(const std::string& command, const RunConfig& config, const RuntimeOptions& runtime) {
  if (command == "solve") return cmd_solve(config, runtime);
  if (command == "count") return cmd_count(config, runtime);
  if (command == "zeta") return cmd_zeta(config, runtime);
  if (command == "variational") return cmd_variational(config, runtime);
  if (command == "lyapunov") return cmd_lyapunov(config, runtime);
  if (command == "root") return cmd_root(config, runtime);
  if (command == "scanline") return cmd_scanline(config, runtime);
  throw ConfigError("unknown command '" + command + "'");
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) out += ',';
    out += table.columns[j];
  }
  out += '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", row[j]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

json to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) rows.push_back(row);
  return json{{"columns", table.columns}, {"rows", std::move(rows)}};
}

void write_outputs(const std::string& command, const CommandResult& result, const std::filesystem::path& dir,
                   Format format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << text;
  };
  if (format == Format::Csv) {
    write(dir / (command + "_summary.json"), result.summary.dump(2) + "\n");
    for (const auto& t : result.tables) write(dir / (t.name + ".csv"), to_csv(t));
  } else {
    json tables = json::object();
    for (const auto& t : result.tables) tables[t.name] = to_json(t);
    const json doc{{"summary", result.summary}, {"tables", std::move(tables)}};
    write(dir / (command + ".json"), doc.dump(2) + "\n");
  }
}

int execute(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    RunConfig config = load_config(inv.config);
    RuntimeOptions runtime;
    runtime.workers = std::max(1, inv.workers);
    runtime.seed = inv.seed;
    const CommandResult result = run_command(inv.command, config, runtime);
    const auto dir = inv.out ? inv.out : config.out;
    if (dir) write_outputs(inv.command, result, *dir, inv.format);
    out << result.summary.dump(2) << "\n";
    return 0;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    err << "budget error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NonConvergenceError& e) {
    err << "numeric error: " << e.what() << " (iterations " << e.iterations << ", last theta " << e.last_theta
        << ")\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace kusuoka::cli
