// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Sweep orchestration behind the command-line tool: parameter grids,
// deterministic seeding, a worker pool over grid points and CSV/JSON output.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ldlab::cli {

struct RunConfig {
  std::string command;  // channel | bounds | optimize | evaluate | witness | wigner
  std::vector<double> gammas{0.1};
  std::vector<double> gamma_phis{0.0};
  std::vector<double> nbars{5.0};
  int d = 2;
  int cutoff = 21;
  std::uint64_t seed = 1;
  std::string out;  // empty = stdout
  std::string format = "csv";
  bool strict = false;
  int threads = 0;  // 0: LDLAB_THREADS env or hardware concurrency
  int iters = 300;
  int restarts = 10;
  int diag_restarts = 8;
  std::vector<std::string> families{"cat", "gkp-hex", "sqrt17", "optimized"};
  std::string metric = "fidelity";
  std::string code_file;
  double xmax = 4.0;
  int grid_points = 41;
};

// "start:stop:count" linear grid or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec);

// Fills config fields present in the JSON object; unknown keys are an error.
void apply_config_json(RunConfig& config, const nlohmann::json& j);

int resolve_threads(int requested);

// Exit codes: 0 ok, 2 input error, 3 non-convergence in strict mode,
// 4 unwritable output.
int run(const RunConfig& config);

}  // namespace ldlab::cli
