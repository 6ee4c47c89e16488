// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace {

struct RawArgs {
  std::string config_path;
  std::string gamma, gamma_phi, nbar;
  int d = -1, cutoff = -1, threads = -1, iters = -1, restarts = -1;
  int diag_restarts = -1, points = -1;
  long long seed = -1;
  double xmax = -1.0;
  std::string out, format, metric, code;
  std::vector<std::string> families;
  bool strict = false;
};

void add_common(CLI::App* cmd, RawArgs& a) {
  cmd->add_option("--config", a.config_path, "JSON config file (flags override)");
  cmd->add_option("--gamma", a.gamma, "loss grid: start:stop:count or list");
  cmd->add_option("--gamma-phi", a.gamma_phi, "dephasing grid");
  cmd->add_option("--nbar", a.nbar, "energy-constraint grid");
  cmd->add_option("--d", a.d, "logical dimension");
  cmd->add_option("--cutoff", a.cutoff, "Fock cutoff N_c");
  cmd->add_option("--seed", a.seed, "base RNG seed");
  cmd->add_option("--out", a.out, "output path (default stdout)");
  cmd->add_option("--format", a.format, "csv or json");
  cmd->add_option("--threads", a.threads, "worker count (or LDLAB_THREADS)");
  cmd->add_option("--iters", a.iters, "seesaw rounds");
  cmd->add_option("--restarts", a.restarts, "seesaw restarts");
  cmd->add_option("--diag-restarts", a.diag_restarts,
                  "diagonal-optimizer restarts");
  cmd->add_option("--families", a.families, "code families to sweep");
  cmd->add_option("--metric", a.metric, "fidelity or hashing");
  cmd->add_option("--code", a.code, "code JSON file (wigner input)");
  cmd->add_option("--xmax", a.xmax, "wigner grid half-width");
  cmd->add_option("--points", a.points, "wigner grid points per axis");
  cmd->add_flag("--strict", a.strict, "exit nonzero on non-convergence");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loss-dephasing channel laboratory"};
  app.require_subcommand(1);
  RawArgs a;
  const char* names[] = {"channel", "bounds", "optimize",
                         "evaluate", "witness", "wigner"};
  const char* descs[] = {
      "emit the Kraus channel as JSON",
      "capacity bound sweep (CSV)",
      "biconvex code optimization at one parameter point",
      "per-family metric sweep (CSV)",
      "non-degradability witness search (JSON)",
      "Wigner grid of a code's maximally mixed state (CSV)"};
  std::vector<CLI::App*> cmds;
  for (int i = 0; i < 6; ++i) {
    CLI::App* c = app.add_subcommand(names[i], descs[i]);
    add_common(c, a);
    cmds.push_back(c);
  }

  CLI11_PARSE(app, argc, argv);

  ldlab::cli::RunConfig config;
  for (int i = 0; i < 6; ++i)
    if (cmds[i]->parsed()) config.command = names[i];

  try {
    if (!a.config_path.empty()) {
      std::ifstream f(a.config_path);
      if (!f) {
        std::cerr << "ldlab: cannot read config " << a.config_path << "\n";
        return 2;
      }
      nlohmann::json j;
      f >> j;
      ldlab::cli::apply_config_json(config, j);
    }
    // flags override the config file
    if (!a.gamma.empty()) config.gammas = ldlab::cli::parse_grid(a.gamma);
    if (!a.gamma_phi.empty())
      config.gamma_phis = ldlab::cli::parse_grid(a.gamma_phi);
    if (!a.nbar.empty()) config.nbars = ldlab::cli::parse_grid(a.nbar);
    if (a.d >= 0) config.d = a.d;
    if (a.cutoff >= 0) config.cutoff = a.cutoff;
    if (a.seed >= 0) config.seed = static_cast<std::uint64_t>(a.seed);
    if (!a.out.empty()) config.out = a.out;
    if (!a.format.empty()) config.format = a.format;
    if (a.threads >= 0) config.threads = a.threads;
    if (a.iters >= 0) config.iters = a.iters;
    if (a.restarts >= 0) config.restarts = a.restarts;
    if (a.diag_restarts >= 0) config.diag_restarts = a.diag_restarts;
    if (!a.families.empty()) config.families = a.families;
    if (!a.metric.empty()) config.metric = a.metric;
    if (!a.code.empty()) config.code_file = a.code;
    if (a.xmax > 0.0) config.xmax = a.xmax;
    if (a.points > 0) config.grid_points = a.points;
    if (a.strict) config.strict = true;
  } catch (const std::exception& e) {
    std::cerr << "ldlab: " << e.what() << "\n";
    return 2;
  }

  return ldlab::cli::run(config);
}
