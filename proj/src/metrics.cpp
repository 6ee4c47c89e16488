// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/metrics.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace ldlab::metrics {

namespace {

constexpr double kGolden = 0.6180339887498949;

ChoiMatrix build_composite(const codes::CodeEncoding& encoder,
                           const Matrix& super, const ChoiMatrix& decoder,
                           int d) {
  const int nf = encoder.cutoff + 1;
  ChoiMatrix e;
  e.d_in = d;
  e.d_out = d;
  e.j = Matrix::Zero(d * d, d * d);
  const Matrix& v = encoder.codewords;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Matrix s_ij = v.col(i) * v.col(j).adjoint();
      const Matrix n_ij = channels::apply_superoperator(super, s_ij);
      const Matrix e_ij = channels::choi_apply(decoder, n_ij);
      e.j.block(i * d, j * d, d, d) = e_ij;
    }
  Matrix tr_out = fock::partial_trace(e.j, {d, d}, {0});
  e.tp_residual = (tr_out - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  (void)nf;
  return e;
}

}  // namespace

ChoiMatrix composite_choi(const CompositeChannel& c, const Matrix& super) {
  return build_composite(c.encoder, super, c.decoder, c.d);
}

ChoiMatrix composite_choi(const CompositeChannel& c) {
  if (!c.channel) throw std::invalid_argument("composite_choi: null channel");
  return build_composite(c.encoder, channels::superoperator(*c.channel),
                         c.decoder, c.d);
}

double entanglement_fidelity(const ChoiMatrix& composite) {
  const int d = composite.d_in;
  if (composite.d_out != d)
    throw std::invalid_argument("entanglement_fidelity: non-square composite");
  fock::Cd acc(0, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) acc += composite.j(i * d + i, j * d + j);
  return std::real(acc) / (d * d);
}

double entanglement_fidelity(const CompositeChannel& c) {
  return entanglement_fidelity(composite_choi(c));
}

std::pair<double, ChoiMatrix> optimal_decoder_fidelity(
    const codes::CodeEncoding& encoder, const Matrix& super, int fock_dim,
    int d, const sdp::SdpOptions& options) {
  const ChoiMatrix enc = seesaw::choi_of_isometry(encoder.codewords);
  sdp::SdpProblem p = seesaw::decoder_objective(enc, super, fock_dim, d);
  sdp::SdpResult r = sdp::solve_cptp_sdp(p, options);
  return {r.objective, r.choi};
}

std::pair<double, ChoiMatrix> optimal_decoder_fidelity(
    const codes::CodeEncoding& encoder, const KrausChannel& channel, int d,
    const sdp::SdpOptions& options) {
  return optimal_decoder_fidelity(encoder, channels::superoperator(channel),
                                  channel.dim(), d, options);
}

double hashing_bound(const ChoiMatrix& composite) {
  const int d = composite.d_in;
  if (composite.d_out != d)
    throw std::invalid_argument("hashing_bound: non-square composite");
  // rho_E[(x,i),(y,j)] = J[(i,x),(j,y)] / d on M_B (x) M'
  Matrix rho(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
          rho(x * d + i, y * d + j) = composite.j(i * d + x, j * d + y) / d;
  const Matrix reduced = fock::partial_trace(rho, {d, d}, {0});
  return fock::von_neumann_entropy(reduced) - fock::von_neumann_entropy(rho);
}

namespace {

struct MemberEval {
  double value = -1e300;
  double mean_energy = 0.0;
  bool feasible = false;
};

}  // namespace

MetricResult family_sweep(const std::string& family,
                          const KrausChannel& channel, int d, double nbar,
                          const std::string& metric, const SweepOptions& opt) {
  if (metric != "fidelity" && metric != "hashing")
    throw std::invalid_argument("family_sweep: unknown metric " + metric);
  MetricResult res;
  res.gamma = channel.gamma;
  res.gamma_phi = channel.gamma_phi;
  res.nbar = nbar;
  res.d = d;
  res.family = family;
  res.metric = metric;

  const Matrix super = channels::superoperator(channel);
  const int nf = channel.dim();
  sdp::SdpState warm;  // shared across members; parameters move smoothly

  auto evaluate_code = [&](const codes::CodeEncoding& code) {
    const ChoiMatrix enc = seesaw::choi_of_isometry(code.codewords);
    sdp::SdpProblem p = seesaw::decoder_objective(enc, super, nf, d);
    sdp::SdpResult r = sdp::solve_cptp_sdp(p, opt.sdp, &warm);
    if (metric == "fidelity") return r.objective;
    return hashing_bound(build_composite(code, super, r.choi, d));
  };

  if (family == "sqrt17") {
    if (d != 2)
      throw std::invalid_argument("family_sweep: sqrt17 code is a qubit code");
    codes::CodeEncoding code = codes::sqrt17_code(opt.cutoff);
    if (code.mean_energy > nbar)
      throw std::invalid_argument("family_sweep: sqrt17 exceeds energy budget");
    res.value = evaluate_code(code);
    res.param_at_opt = 0.0;
    res.mean_energy = code.mean_energy;
    return res;
  }

  if (family == "optimized") {
    seesaw::SeesawOptions so = opt.seesaw;
    so.d = d;
    so.nbar = nbar;
    seesaw::SeesawState st = seesaw::run_seesaw(channel, so);
    codes::CodeEncoding code = seesaw::extract_code(st.encoder, opt.cutoff);
    res.value = evaluate_code(code);
    res.param_at_opt = 0.0;
    res.mean_energy = code.mean_energy;
    res.converged = st.converged;
    return res;
  }

  // scalar families: cat (alpha) and gkp-hex (Delta)
  std::function<codes::CodeEncoding(double)> make;
  double lo, hi;
  bool lo_is_infeasible_side;  // energy grows toward this end
  if (family == "cat") {
    make = [&](double a) { return codes::cat_qudit(d, a, opt.cutoff); };
    lo = 0.2;
    hi = 10.0;  // trimmed by feasibility below
    lo_is_infeasible_side = false;
  } else if (family == "gkp-hex") {
    make = [&](double delta) {
      return codes::gkp_qudit(codes::hexagonal_lattice(d, delta), opt.cutoff);
    };
    lo = 0.05;
    hi = 1.2;
    lo_is_infeasible_side = true;
  } else {
    throw std::invalid_argument("family_sweep: unknown family " + family);
  }

  auto member = [&](double param) {
    MemberEval e;
    try {
      codes::CodeEncoding code = make(param);
      if (code.mean_energy > nbar) return e;  // over budget
      e.mean_energy = code.mean_energy;
      e.feasible = true;
      e.value = evaluate_code(code);
    } catch (const codes::CutoffError&) {
      // treat truncation-infeasible members as outside the family range
    }
    return e;
  };

  // find the feasibility boundary (energy is monotone in the parameter)
  {
    double good, bad;
    if (lo_is_infeasible_side) {
      good = hi;
      bad = lo;
      if (!member(good).feasible)
        throw std::invalid_argument("family_sweep: no feasible member");
      for (int it = 0; it < 40 && good - bad > 1e-3; ++it) {
        const double mid = 0.5 * (good + bad);
        (member(mid).feasible ? good : bad) = mid;
      }
      lo = good;
    } else {
      good = lo;
      bad = hi;
      if (!member(good).feasible)
        throw std::invalid_argument("family_sweep: no feasible member");
      for (int it = 0; it < 40 && bad - good > 1e-3; ++it) {
        const double mid = 0.5 * (good + bad);
        (member(mid).feasible ? good : bad) = mid;
      }
      hi = good;
    }
  }

  // golden-section maximization with memoized evaluations
  std::map<long long, MemberEval> cache;
  auto eval_at = [&](double param) {
    const long long key = llround(param / (0.25 * opt.param_tol));
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    MemberEval e = member(param);
    cache[key] = e;
    return e;
  };

  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  MemberEval f1 = eval_at(x1), f2 = eval_at(x2);
  while (b - a > opt.param_tol) {
    if (f1.value >= f2.value) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = eval_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = eval_at(x2);
    }
  }
  const double best_param = f1.value >= f2.value ? x1 : x2;
  const MemberEval best = f1.value >= f2.value ? f1 : f2;
  if (!best.feasible)
    throw std::invalid_argument("family_sweep: no feasible member");
  res.value = best.value;
  res.param_at_opt = best_param;
  res.mean_energy = best.mean_energy;
  return res;
}

}  // namespace ldlab::metrics
