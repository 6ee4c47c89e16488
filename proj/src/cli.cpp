// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/cli.hpp"

#include "ldlab/capacity.hpp"
#include "ldlab/channels.hpp"
#include "ldlab/codes.hpp"
#include "ldlab/degrade.hpp"
#include "ldlab/metrics.hpp"
#include "ldlab/rng.hpp"
#include "ldlab/seesaw.hpp"
#include "ldlab/serialize.hpp"

#include <array>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace ldlab::cli {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  for (auto& th : pool) th.join();
}

// single-consumer output: everything is accumulated in deterministic order
// and written once
int write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "ldlab: cannot open output path " << path << "\n";
    return 4;
  }
  f << payload;
  if (!f.good()) return 4;
  return 0;
}

struct GridPoint {
  double gamma, gamma_phi, nbar;
  int index;
};

std::vector<GridPoint> make_grid(const RunConfig& c) {
  std::vector<GridPoint> pts;
  int idx = 0;
  for (double g : c.gammas)
    for (double gp : c.gamma_phis)
      for (double nb : c.nbars) pts.push_back({g, gp, nb, idx++});
  return pts;
}

int run_channel(const RunConfig& c) {
  const auto ch = channels::joint_channel(c.gammas.front(),
                                          c.gamma_phis.front(), c.cutoff);
  json j = serialize::channel_to_json(ch);
  return write_output(c.out, j.dump(2) + "\n");
}

int run_bounds(const RunConfig& c) {
  const auto grid = make_grid(c);
  const int threads = resolve_threads(c.threads);

  // the dephasing term of the data-processing bound depends only on
  // (gamma_phi, nbar); precompute the distinct values sequentially
  std::map<std::pair<double, double>, double> deph_bound;
  for (const auto& p : grid) {
    const auto key = std::make_pair(p.gamma_phi, p.nbar);
    if (p.gamma_phi == 0.0 || deph_bound.count(key)) continue;
    const int cut =
        std::max(c.cutoff, capacity::suggested_cutoff(p.nbar, 1e-8));
    deph_bound[key] =
        capacity::q_dephasing_constrained(p.gamma_phi, p.nbar, cut).bits;
  }

  struct Row {
    std::string text;
    bool converged = true;
  };
  std::vector<std::array<Row, 3>> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
    const auto& p = grid[i];
    const int cut =
        std::max(c.cutoff, capacity::suggested_cutoff(p.nbar, 1e-8));
    const double tail = capacity::thermal_tail(p.nbar, cut);

    const double thermal =
        capacity::q_thermal_lower(p.gamma, p.gamma_phi, p.nbar, cut);
    auto diag = capacity::q_diagonal_lower(
        p.gamma, p.gamma_phi, p.nbar, cut, c.diag_restarts,
        rng::derive_seed(c.seed, static_cast<std::uint64_t>(p.index)));
    // the diagonal optimum dominates the thermal point by construction
    const double diagonal = std::max(diag.bits, thermal);
    const double loss_term = capacity::q_loss_constrained(p.gamma, p.nbar);
    const auto key = std::make_pair(p.gamma_phi, p.nbar);
    const double dp = p.gamma_phi == 0.0
                          ? loss_term
                          : std::min(loss_term, deph_bound.at(key));

    auto make_row = [&](const std::string& name, double bits, bool conv) {
      Row r;
      std::ostringstream os;
      os << format_double(p.gamma) << ',' << format_double(p.gamma_phi) << ','
         << format_double(p.nbar) << ',' << name << ',' << format_double(bits)
         << ',' << cut << ',' << format_double(tail) << ','
         << (conv ? "1" : "0");
      r.text = os.str();
      r.converged = conv;
      return r;
    };
    rows[i][0] = make_row("thermal", thermal, true);
    rows[i][1] = make_row("diagonal", diagonal, diag.converged);
    rows[i][2] = make_row("data_processing", dp, true);
  });

  std::ostringstream out;
  out << "gamma,gamma_phi,nbar,bound_name,bits,cutoff,tail_mass,converged\n";
  bool all_converged = true;
  for (const auto& triple : rows)
    for (const auto& r : triple) {
      out << r.text << '\n';
      all_converged = all_converged && r.converged;
    }
  const int rc = write_output(c.out, out.str());
  if (rc != 0) return rc;
  return (!all_converged && c.strict) ? 3 : 0;
}

int run_optimize(const RunConfig& c) {
  const double gamma = c.gammas.front();
  const double gamma_phi = c.gamma_phis.front();
  const double nbar = c.nbars.front();
  const auto ch = channels::joint_channel(gamma, gamma_phi, c.cutoff);

  seesaw::SeesawOptions opt;
  opt.d = c.d;
  opt.nbar = nbar;
  opt.iters = c.iters;
  opt.restarts = c.restarts;
  opt.seed = c.seed;
  seesaw::SeesawState st = seesaw::run_seesaw(ch, opt);

  bool isometric = false;
  codes::CodeEncoding code = seesaw::extract_code(st.encoder, c.cutoff,
                                                  &isometric);
  code = gamma == 0.0 ? seesaw::regularize_diagonal_unitary(code)
                      : seesaw::regularize_rotation(code);

  json j = serialize::code_to_json(code);
  j["gamma"] = gamma;
  j["gamma_phi"] = gamma_phi;
  j["nbar"] = nbar;
  j["seed"] = c.seed;
  j["final_fidelity"] = st.fidelity_history.empty()
                            ? 0.0
                            : st.fidelity_history.back();
  j["converged"] = st.converged;
  j["isometric"] = isometric;
  j["multi_optimum_regime"] = st.multi_optimum_flag;

  std::ostringstream hist;
  hist << "step,fidelity\n";
  for (size_t i = 0; i < st.fidelity_history.size(); ++i)
    hist << i << ',' << format_double(st.fidelity_history[i]) << '\n';

  int rc;
  if (c.out.empty()) {
    j["fidelity_history"] = st.fidelity_history;
    rc = write_output("", j.dump(2) + "\n");
  } else {
    rc = write_output(c.out, j.dump(2) + "\n");
    if (rc == 0) rc = write_output(c.out + ".history.csv", hist.str());
  }
  if (rc != 0) return rc;
  return (!st.converged && c.strict) ? 3 : 0;
}

int run_evaluate(const RunConfig& c) {
  const auto grid = make_grid(c);
  const int threads = resolve_threads(c.threads);
  struct Slot {
    std::vector<std::string> lines;
    bool converged = true;
  };
  std::vector<Slot> slots(grid.size());
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
    const auto& p = grid[i];
    const auto ch = channels::joint_channel(p.gamma, p.gamma_phi, c.cutoff);
    metrics::SweepOptions opt;
    opt.cutoff = c.cutoff;
    opt.seesaw.iters = c.iters;
    opt.seesaw.restarts = c.restarts;
    opt.seesaw.seed = rng::derive_seed(c.seed, p.index);
    for (const auto& fam : c.families) {
      try {
        metrics::MetricResult r =
            metrics::family_sweep(fam, ch, c.d, p.nbar, c.metric, opt);
        std::ostringstream os;
        os << format_double(p.gamma) << ',' << format_double(p.gamma_phi)
           << ',' << format_double(p.nbar) << ',' << c.d << ',' << fam << ','
           << c.metric << ',' << format_double(r.value) << ','
           << format_double(r.param_at_opt);
        slots[i].lines.push_back(os.str());
        slots[i].converged = slots[i].converged && r.converged;
      } catch (const std::invalid_argument&) {
        // infeasible family at this budget: skip the row
      }
    }
  });
  std::ostringstream out;
  out << "gamma,gamma_phi,nbar,d,family,metric,value,param_at_opt\n";
  bool all_converged = true;
  for (const auto& s : slots) {
    for (const auto& l : s.lines) out << l << '\n';
    all_converged = all_converged && s.converged;
  }
  const int rc = write_output(c.out, out.str());
  if (rc != 0) return rc;
  return (!all_converged && c.strict) ? 3 : 0;
}

int run_witness(const RunConfig& c) {
  json results = json::array();
  for (double g : c.gammas)
    for (double gp : c.gamma_phis) {
      degrade::WitnessResult w = degrade::witness_search(g, gp);
      results.push_back(json{
          {"gamma", g},
          {"gamma_phi", gp},
          {"n", w.n},
          {"alpha_mag", w.alpha_mag},
          {"value", w.value},
          {"verdict",
           w.violated ? "non-degradable-witnessed" : "no-violation-found"}});
    }
  const json out = results.size() == 1 ? results.front() : results;
  return write_output(c.out, out.dump(2) + "\n");
}

int run_wigner(const RunConfig& c) {
  codes::CodeEncoding code;
  if (!c.code_file.empty()) {
    std::ifstream f(c.code_file);
    if (!f) {
      std::cerr << "ldlab: cannot read code file " << c.code_file << "\n";
      return 2;
    }
    json j;
    f >> j;
    code = serialize::code_from_json(j);
  } else {
    throw std::invalid_argument("wigner: --code <file.json> is required");
  }
  const fock::Matrix rho = codes::maximally_mixed_code_state(code);
  Eigen::VectorXd xs =
      Eigen::VectorXd::LinSpaced(c.grid_points, -c.xmax, c.xmax);
  codes::WignerGrid grid = codes::wigner_grid(rho, xs, xs);
  std::ostringstream out;
  out << "x,p,W\n";
  for (int i = 0; i < xs.size(); ++i)
    for (int j2 = 0; j2 < xs.size(); ++j2)
      out << format_double(xs(i)) << ',' << format_double(xs(j2)) << ','
          << format_double(grid.w(i, j2)) << '\n';
  return write_output(c.out, out.str());
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("grid spec needs start:stop:count");
    const double start = std::stod(spec.substr(0, c1));
    const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const int count = std::stoi(spec.substr(c2 + 1));
    if (count < 1) throw std::invalid_argument("grid count must be >= 1");
    if (count == 1) return {start};
    for (int i = 0; i < count; ++i)
      out.push_back(start + (stop - start) * i / (count - 1));
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty grid spec");
  return out;
}

void apply_config_json(RunConfig& config, const nlohmann::json& j) {
  auto grid_field = [](const json& v) {
    if (v.is_string()) return parse_grid(v.get<std::string>());
    if (v.is_array()) return v.get<std::vector<double>>();
    return std::vector<double>{v.get<double>()};
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const json& v = it.value();
    if (key == "command")
      config.command = v.get<std::string>();
    else if (key == "gamma")
      config.gammas = grid_field(v);
    else if (key == "gamma-phi")
      config.gamma_phis = grid_field(v);
    else if (key == "nbar")
      config.nbars = grid_field(v);
    else if (key == "d")
      config.d = v.get<int>();
    else if (key == "cutoff")
      config.cutoff = v.get<int>();
    else if (key == "seed")
      config.seed = v.get<std::uint64_t>();
    else if (key == "out")
      config.out = v.get<std::string>();
    else if (key == "format")
      config.format = v.get<std::string>();
    else if (key == "strict")
      config.strict = v.get<bool>();
    else if (key == "threads")
      config.threads = v.get<int>();
    else if (key == "iters")
      config.iters = v.get<int>();
    else if (key == "restarts")
      config.restarts = v.get<int>();
    else if (key == "diag-restarts")
      config.diag_restarts = v.get<int>();
    else if (key == "families")
      config.families = v.get<std::vector<std::string>>();
    else if (key == "metric")
      config.metric = v.get<std::string>();
    else if (key == "code")
      config.code_file = v.get<std::string>();
    else if (key == "xmax")
      config.xmax = v.get<double>();
    else if (key == "points")
      config.grid_points = v.get<int>();
    else
      throw std::invalid_argument("unknown config key: " + key);
  }
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LDLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

int run(const RunConfig& config) {
  try {
    if (config.gammas.empty() || config.gamma_phis.empty() ||
        config.nbars.empty())
      throw std::invalid_argument("empty parameter grid");
    if (config.cutoff < 2)
      throw std::invalid_argument("cutoff must be >= 2");
    if (config.command == "channel") return run_channel(config);
    if (config.command == "bounds") return run_bounds(config);
    if (config.command == "optimize") return run_optimize(config);
    if (config.command == "evaluate") return run_evaluate(config);
    if (config.command == "witness") return run_witness(config);
    if (config.command == "wigner") return run_wigner(config);
    throw std::invalid_argument("unknown command: " + config.command);
  } catch (const capacity::CutoffError& e) {
    std::cerr << "ldlab: " << e.what()
              << " (suggested cutoff: " << e.suggested_cutoff << ")\n";
    return 2;
  } catch (const codes::CutoffError& e) {
    std::cerr << "ldlab: " << e.what()
              << " (suggested cutoff: " << e.suggested_cutoff << ")\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ldlab: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "ldlab: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ldlab::cli
