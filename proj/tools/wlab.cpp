#include <iostream>

#include <CLI11.hpp>

#include "wlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Neumann eigenvalue inequalities for the Witten-Laplacian"};
  app.require_subcommand(1);
  wlab::cli::CommandOptions opts;
  std::string config, out = ".";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config, "JSON configuration file")->required();
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::Range(1, 256));
    sub->add_flag("--verbose", opts.verbose, "Per-case progress on stdout");
  };
  auto* run = app.add_subcommand("run", "Check every case of a configuration");
  add_common(run);
  auto* sweep = app.add_subcommand("sweep", "Run a one- or two-parameter family of cases");
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  opts.config = config;
  opts.out_dir = out;
  if (run->parsed()) return wlab::cli::run_command(opts, std::cout, std::cerr);
  return wlab::cli::sweep_command(opts, std::cout, std::cerr);
}
