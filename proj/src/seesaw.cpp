// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/seesaw.hpp"

#include "ldlab/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ldlab::seesaw {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

Matrix number_diag(int dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

// S(|i><j|) is the (i,j) block of the input-major Choi.
Matrix choi_block(const ChoiMatrix& c, int i, int j) {
  return c.j.block(i * c.d_out, j * c.d_out, c.d_out, c.d_out);
}

}  // namespace

ChoiMatrix choi_of_isometry(const Matrix& codewords) {
  const int nf = static_cast<int>(codewords.rows());
  const int d = static_cast<int>(codewords.cols());
  fock::Vector w(nf * d);
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < nf; ++a) w(i * nf + a) = codewords(a, i);
  ChoiMatrix c;
  c.d_in = d;
  c.d_out = nf;
  c.j = w * w.adjoint();
  c.tp_residual =
      (codewords.adjoint() * codewords - Matrix::Identity(d, d))
          .cwiseAbs()
          .maxCoeff();
  return c;
}

SdpProblem decoder_objective(const ChoiMatrix& encoder, const Matrix& super,
                             int fock_dim, int d) {
  if (encoder.d_in != d || encoder.d_out != fock_dim)
    throw std::invalid_argument("decoder_objective: dimension mismatch");
  SdpProblem p;
  p.d_in = fock_dim;
  p.d_out = d;
  p.q = Matrix::Zero(fock_dim * d, fock_dim * d);
  const double w = 1.0 / (d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Matrix m =
          channels::apply_superoperator(super, choi_block(encoder, i, j));
      // Q += (1/d^2) m^T (x) |j><i|
      for (int x = 0; x < fock_dim; ++x)
        for (int y = 0; y < fock_dim; ++y)
          p.q(x * d + j, y * d + i) += w * m(y, x);
    }
  p.q = (p.q + p.q.adjoint()) / 2.0;
  return p;
}

SdpProblem decoder_objective(const ChoiMatrix& encoder,
                             const KrausChannel& channel, int d) {
  return decoder_objective(encoder, channels::superoperator(channel),
                           channel.dim(), d);
}

SdpProblem encoder_objective(const ChoiMatrix& decoder, const Matrix& super,
                             int fock_dim, int d, double nbar) {
  if (decoder.d_in != fock_dim || decoder.d_out != d)
    throw std::invalid_argument("encoder_objective: dimension mismatch");
  if (nbar < 0.0) throw std::invalid_argument("encoder_objective: nbar < 0");
  SdpProblem p;
  p.d_in = d;
  p.d_out = fock_dim;
  p.q = Matrix::Zero(d * fock_dim, d * fock_dim);
  const Matrix super_adj = super.adjoint();
  const double w = 1.0 / (d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      // R*(|j><i|): W_xy = <j| R(|x><y|) |i> = R-block(x,y)_{ji}; R* = W^T
      Matrix rstar(fock_dim, fock_dim);
      for (int x = 0; x < fock_dim; ++x)
        for (int y = 0; y < fock_dim; ++y)
          rstar(y, x) = decoder.j(x * d + j, y * d + i);
      const Matrix tstar = channels::apply_superoperator(super_adj, rstar);
      p.q.block(j * fock_dim, i * fock_dim, fock_dim, fock_dim) += w * tstar;
    }
  p.q = (p.q + p.q.adjoint()) / 2.0;
  p.has_inequality = true;
  p.ineq_op = fock::tensor(Matrix::Identity(d, d), number_diag(fock_dim)) /
              static_cast<double>(d);
  p.ineq_bound = nbar;
  return p;
}

SdpProblem encoder_objective(const ChoiMatrix& decoder,
                             const KrausChannel& channel, int d, double nbar) {
  return encoder_objective(decoder, channels::superoperator(channel),
                           channel.dim(), d, nbar);
}

Matrix random_isometry(int fock_dim, int d, double nbar, std::uint64_t seed) {
  rng::Rng gen(seed);
  const Matrix g = gen.gaussian_matrix(fock_dim, d);
  auto frame_energy = [&](double beta, Matrix* out) {
    Matrix m = g;
    for (int n = 0; n < fock_dim; ++n) m.row(n) *= std::exp(-0.5 * beta * n);
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(fock_dim, d);
    double e = 0.0;
    for (int n = 0; n < fock_dim; ++n) e += n * q.row(n).squaredNorm();
    if (out) *out = q;
    return e / d;
  };
  Matrix v;
  if (frame_energy(0.0, &v) <= nbar) return v;
  double lo = 0.0, hi = 1.0;
  while (frame_energy(hi, nullptr) > nbar && hi < 64.0) hi *= 2.0;
  for (int it = 0; it < 48; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (frame_energy(mid, nullptr) > nbar)
      lo = mid;
    else
      hi = mid;
  }
  frame_energy(hi, &v);
  return v;
}

namespace {

struct RestartOutcome {
  SeesawState state;
  double final_fidelity = -1.0;
};

RestartOutcome run_one_restart(const KrausChannel& channel,
                               const Matrix& super, const SeesawOptions& opt,
                               std::uint64_t seed) {
  const int nf = channel.dim();
  const int d = opt.d;
  RestartOutcome out;
  SeesawState& st = out.state;
  st.seed = seed;

  Matrix v0 = random_isometry(nf, d, opt.nbar, seed);
  ChoiMatrix enc = choi_of_isometry(v0);
  ChoiMatrix dec;  // filled by the first half-step
  sdp::SdpState warm_r, warm_s;

  double f_cur = -1.0;
  int flat = 0;
  int round = 0;
  for (round = 1; round <= opt.iters; ++round) {
    // decoder half-step
    SdpProblem pr = decoder_objective(enc, super, nf, d);
    sdp::SdpResult rr = sdp::solve_cptp_sdp(pr, opt.sdp, &warm_r);
    double f_keep = dec.j.size() > 0
                        ? std::real((pr.q * dec.j).trace())
                        : -1.0;
    if (rr.objective >= f_keep) {
      dec = rr.choi;
      f_cur = rr.objective;
    } else {
      f_cur = f_keep;  // previous decoder stays feasible and at least as good
    }
    st.fidelity_history.push_back(f_cur);

    // encoder half-step
    SdpProblem ps = encoder_objective(dec, super, nf, d, opt.nbar);
    sdp::SdpResult rs = sdp::solve_cptp_sdp(ps, opt.sdp, &warm_s);
    const double f_enc_keep = std::real((ps.q * enc.j).trace());
    if (rs.objective >= f_enc_keep) {
      enc = rs.choi;
      f_cur = rs.objective;
    } else {
      f_cur = f_enc_keep;
    }
    st.fidelity_history.push_back(f_cur);

    const size_t h = st.fidelity_history.size();
    if (h >= 4) {
      const double df = st.fidelity_history[h - 1] - st.fidelity_history[h - 3];
      flat = (std::abs(df) < opt.stall_tol) ? flat + 1 : 0;
    }
    if (flat >= opt.stall_rounds) {
      st.converged = true;
      break;
    }
  }
  st.iteration = std::min(round, opt.iters);
  st.encoder = enc;
  st.decoder = dec;
  const Matrix e_op =
      fock::tensor(Matrix::Identity(d, d), number_diag(nf)) /
      static_cast<double>(d);
  st.mean_energy = std::real((e_op * enc.j).trace());
  out.final_fidelity = f_cur;
  return out;
}

}  // namespace

SeesawState run_seesaw(const KrausChannel& channel, const SeesawOptions& opt) {
  if (opt.d < 2 || opt.d > channel.dim())
    throw std::invalid_argument("run_seesaw: invalid logical dimension");
  const Matrix super = channels::superoperator(channel);

  std::vector<RestartOutcome> outcomes(opt.restarts);
  const unsigned pool = std::max(
      1u, std::min(std::thread::hardware_concurrency(),
                   static_cast<unsigned>(opt.restarts)));
  std::vector<std::thread> workers;
  std::atomic<int> next{0};
  for (unsigned t = 0; t < pool; ++t)
    workers.emplace_back([&] {
      for (int r; (r = next.fetch_add(1)) < opt.restarts;) {
        outcomes[r] = run_one_restart(channel, super, opt,
                                     rng::derive_seed(opt.seed, r));
      }
    });
  for (auto& w : workers) w.join();

  int best = 0;
  double lo = 1e300, hi = -1e300;
  for (int r = 0; r < opt.restarts; ++r) {
    lo = std::min(lo, outcomes[r].final_fidelity);
    hi = std::max(hi, outcomes[r].final_fidelity);
    if (outcomes[r].final_fidelity > outcomes[best].final_fidelity) best = r;
  }
  SeesawState st = std::move(outcomes[best].state);
  st.best_restart_spread = hi - lo;
  st.multi_optimum_flag =
      channel.gamma < 0.1 && channel.gamma_phi < 0.1 && opt.nbar >= 6.0;
  return st;
}

codes::CodeEncoding extract_code(const ChoiMatrix& encoder, int cutoff,
                                 bool* isometry_ok) {
  const int d = encoder.d_in;
  const int nf = encoder.d_out;
  if (nf != cutoff + 1)
    throw std::invalid_argument("extract_code: cutoff mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(encoder.j);
  const int n = static_cast<int>(es.eigenvalues().size());
  const double lam_max = es.eigenvalues()(n - 1);
  const double lam_2nd = n >= 2 ? es.eigenvalues()(n - 2) : 0.0;
  const bool ok =
      (d - lam_max) <= 1e-4 * d && std::abs(lam_2nd) <= 1e-4 * d;
  if (isometry_ok) *isometry_ok = ok;

  fock::Vector w = std::sqrt(std::max(lam_max, 0.0)) * es.eigenvectors().col(n - 1);
  Matrix codewords(nf, d);
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < nf; ++a) codewords(a, i) = w(i * nf + a);
  // Loewdin cleanup of the residual non-orthonormality
  Eigen::SelfAdjointEigenSolver<Matrix> gs(codewords.adjoint() * codewords);
  Matrix inv_sqrt = gs.eigenvectors() *
                    gs.eigenvalues().cwiseMax(1e-12).cwiseInverse().cwiseSqrt().asDiagonal() *
                    gs.eigenvectors().adjoint();
  codewords = codewords * inv_sqrt;

  codes::CodeEncoding code;
  code.d = d;
  code.cutoff = cutoff;
  code.codewords = codewords;
  code.family_tag = "optimized";
  code.parameter = 0.0;
  double e = 0.0;
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < nf; ++a) e += a * std::norm(codewords(a, i));
  code.mean_energy = e / d;
  return code;
}

codes::CodeEncoding regularize_rotation(const codes::CodeEncoding& code) {
  const Matrix rho = codes::maximally_mixed_code_state(code);
  const int dim = code.cutoff + 1;
  int row = -1, col = -1;
  for (int m = 0; m < dim && row < 0; ++m)
    for (int n = m + 1; n < dim; ++n)
      if (std::abs(rho(m, n)) > 1e-9) {
        row = m;
        col = n;
        break;
      }
  if (row < 0) return code;  // diagonal rho_C is rotation invariant

  const double phi = std::arg(rho(row, col));
  const int gap = col - row;
  const double period = kTwoPi / gap;
  double theta = std::fmod(phi / gap, period);
  if (theta < 0.0) theta += period;

  codes::CodeEncoding out = code;
  for (int n = 0; n < dim; ++n)
    out.codewords.row(n) *= std::polar(1.0, theta * n);
  return out;
}

codes::CodeEncoding regularize_diagonal_unitary(
    const codes::CodeEncoding& code) {
  const Matrix rho = codes::maximally_mixed_code_state(code);
  const int dim = code.cutoff + 1;
  std::vector<double> delta(dim, 0.0);
  std::vector<bool> pinned(dim, false);
  for (int m = 0; m < dim; ++m) {
    int n_first = -1;
    for (int n = m + 1; n < dim; ++n)
      if (std::abs(rho(m, n)) > 1e-9) {
        n_first = n;
        break;
      }
    if (n_first < 0) continue;
    if (!pinned[m]) pinned[m] = true;  // delta[m] stays as previously set (0)
    if (!pinned[n_first]) {
      // element (m, n) picks up e^{i(delta_m - delta_n)}; make it real positive
      delta[n_first] = delta[m] + std::arg(rho(m, n_first));
      pinned[n_first] = true;
    }
  }
  codes::CodeEncoding out = code;
  for (int n = 0; n < dim; ++n)
    out.codewords.row(n) *= std::polar(1.0, delta[n]);
  return out;
}

}  // namespace ldlab::seesaw
