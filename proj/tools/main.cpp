#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kusuoka/cli/commands.hpp"
#include "kusuoka/parallel.hpp"

int main(int argc, char** argv) {
  using kusuoka::cli::Format;
  CLI::App app{"Transfer operators, zeta functions and orbit counting for self-affine fractals"};
  app.require_subcommand(1);

  kusuoka::cli::Invocation inv;
  inv.workers = kusuoka::default_workers();
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::string format = "csv";

  const char* help[] = {
      "Perron eigendata: beta, pressure, Q and mu",
      "Prime-orbit counting tables and asymptotic checks",
      "Zeta function as series, Euler product and determinant",
      "Monte-Carlo variational functional for the Kusuoka measure and product competitors",
      "Lyapunov matrix and Oseledets projection along sampled words",
      "Root c of the pressure equation P(-c vhat) = 0",
      "Determinant scan along the line Re s = 1",
  };
  const auto& names = kusuoka::cli::command_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory for tables and the summary");
    sub->add_option("--seed", seed, "Seed overriding the configuration");
    sub->add_option("--workers", inv.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->callback([&inv, name = names[i]] { inv.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  inv.config = config;
  if (!out.empty()) inv.out = out;
  for (const CLI::App* sub : app.get_subcommands())
    if (sub->count("--seed")) inv.seed = seed;
  inv.format = format == "json" ? Format::Json : Format::Csv;
  return kusuoka::cli::execute(inv, std::cout, std::cerr);
}
