// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ldlab::sdp {

namespace {

// Tr_out over the second (output) factor of an input-major block matrix.
Matrix trace_out(const Matrix& x, int d_in, int d_out) {
  Matrix t = Matrix::Zero(d_in, d_in);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j)
      t(i, j) = x.block(i * d_out, j * d_out, d_out, d_out).trace();
  return t;
}

Matrix kron_with_identity(const Matrix& lam, int d_out) {
  const int d_in = static_cast<int>(lam.rows());
  Matrix out = Matrix::Zero(d_in * d_out, d_in * d_out);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j)
      for (int x = 0; x < d_out; ++x) out(i * d_out + x, j * d_out + x) = lam(i, j);
  return out;
}

Matrix psd_clip(const Matrix& x, double* neg_part = nullptr) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((x + x.adjoint()) / 2.0);
  Eigen::VectorXd lam = es.eigenvalues();
  if (neg_part) *neg_part = std::max(0.0, -lam.minCoeff());
  Eigen::VectorXd clipped = lam.cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() *
         es.eigenvectors().adjoint();
}

struct AffineProjector {
  int d_in, d_out;
  bool has_ineq;
  Matrix e;
  double bound;
  // precomputed scalars for the two-multiplier solve
  Matrix tr_out_e;      // Tr_out(E)
  double c_ee = 0.0;    // Tr(E^2)
  double denom = 1.0;

  AffineProjector(const SdpProblem& p)
      : d_in(p.d_in), d_out(p.d_out), has_ineq(p.has_inequality) {
    if (has_ineq) {
      e = p.ineq_op;
      bound = p.ineq_bound;
      tr_out_e = trace_out(e, d_in, d_out);
      c_ee = std::real((e * e).trace());
      // denom = Tr(E^2) + 1 - |Tr_out E|^2_F / d_out  (slack included)
      denom = c_ee + 1.0 - tr_out_e.squaredNorm() / d_out;
      if (denom <= 1e-12)
        throw std::invalid_argument("sdp: degenerate inequality operator");
    }
  }

  // project (v, s) onto {Tr_out X = I} or {Tr_out X = I, Tr(EX) + s = bound}
  void operator()(const Matrix& v, double s, Matrix& x_out,
                  double& s_out) const {
    const Matrix delta = trace_out(v, d_in, d_out) -
                         Matrix::Identity(d_in, d_in);
    if (!has_ineq) {
      x_out = v - kron_with_identity(delta / d_out, d_out);
      s_out = 0.0;
      return;
    }
    // stationarity: X = V + (Lam (x) I) + mu E, s = s0 + mu
    // (1): d_out Lam + mu Tr_out(E) = -delta
    // (2): Tr(E V) + Tr(E (Lam (x) I)) + mu (Tr(E^2) + 1) + s0 = bound
    const double ev = std::real((e * v).trace());
    // Tr(E (Lam(x)I)) = Tr(Lam Tr_out(E)^T ... ) -> with Lam = (-delta - mu
    // Tr_out E)/d_out: Tr(E (Lam(x)I)) = Tr(Lam * Tr_out(E))
    const double t_delta_e =
        std::real((tr_out_e * delta).trace());  // Tr(Tr_out(E) delta)
    const double rhs = bound - s - ev + t_delta_e / d_out;
    const double mu = rhs / denom;
    const Matrix lam = (-delta - mu * tr_out_e) / d_out;
    x_out = v + kron_with_identity(lam, d_out) + mu * e;
    s_out = s + mu;
  }
};

}  // namespace

Matrix identity_choi(int d) {
  Matrix j = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) j(i * d + i, k * d + k) = 1.0;
  return j;
}

Matrix round_to_cptp(const Matrix& x, int d_in, int d_out) {
  Matrix z = psd_clip(x);
  Matrix t = trace_out(z, d_in, d_out);
  // inverse square root with a floor; T is near identity for near-feasible z
  Eigen::SelfAdjointEigenSolver<Matrix> es((t + t.adjoint()) / 2.0);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(1e-12);
  Matrix tinv_sqrt = es.eigenvectors() *
                     lam.cwiseInverse().cwiseSqrt().asDiagonal() *
                     es.eigenvectors().adjoint();
  Matrix corr = kron_with_identity(tinv_sqrt, d_out);
  Matrix out = corr * z * corr.adjoint();
  return (out + out.adjoint()) / 2.0;
}

SdpResult solve_cptp_sdp(const SdpProblem& problem, const SdpOptions& options,
                         SdpState* warm) {
  const int n = problem.d_in * problem.d_out;
  if (problem.q.rows() != n || problem.q.cols() != n)
    throw std::invalid_argument("solve_cptp_sdp: objective size mismatch");
  if ((problem.q - problem.q.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("solve_cptp_sdp: objective not Hermitian");

  AffineProjector proj(problem);
  double rho = options.rho;
  Matrix z, u;
  double s_z = 0.0, s_u = 0.0;
  if (warm && warm->valid && warm->z.rows() == n) {
    z = warm->z;
    u = warm->u;
    s_z = warm->slack;
    s_u = warm->slack_u;
    rho = warm->rho > 0 ? warm->rho : rho;
  } else {
    // feasible start: maximally mixed output channel
    z = Matrix::Zero(n, n);
    for (int i = 0; i < problem.d_in; ++i)
      for (int x = 0; x < problem.d_out; ++x)
        z(i * problem.d_out + x, i * problem.d_out + x) = 1.0 / problem.d_out;
    u = Matrix::Zero(n, n);
    s_z = problem.has_inequality
              ? std::max(0.0, problem.ineq_bound -
                                  std::real((problem.ineq_op * z).trace()))
              : 0.0;
    s_u = 0.0;
  }

  Matrix x(n, n);
  double s_x = 0.0;
  int it = 0;
  bool converged = false;
  const double scale = std::max(1.0, problem.q.norm());

  for (it = 1; it <= options.max_iters; ++it) {
    // x-step: affine projection of (z - u + Q/rho)
    proj(z - u + problem.q / rho, s_z - s_u, x, s_x);

    // over-relaxation
    const double a = options.relax;
    Matrix x_hat = a * x + (1.0 - a) * z;
    const double s_hat = a * s_x + (1.0 - a) * s_z;

    // z-step: cone projection
    Matrix z_prev = z;
    const double s_z_prev = s_z;
    z = psd_clip(x_hat + u);
    s_z = std::max(0.0, s_hat + s_u);

    // dual update
    u += x_hat - z;
    s_u += s_hat - s_z;

    if (it % options.check_every == 0 || it == options.max_iters) {
      const double pri = (x - z).norm() + std::abs(s_x - s_z);
      const double dua =
          rho * ((z - z_prev).norm() + std::abs(s_z - s_z_prev));
      if (pri < options.tol * scale * n && dua < options.tol * scale * n) {
        converged = true;
        break;
      }
      // residual balancing
      if (pri > 10.0 * dua && rho < 1e6) {
        rho *= 2.0;
        u /= 2.0;
        s_u /= 2.0;
      } else if (dua > 10.0 * pri && rho > 1e-6) {
        rho /= 2.0;
        u *= 2.0;
        s_u *= 2.0;
      }
    }
  }

  if (warm) {
    warm->z = z;
    warm->u = u;
    warm->slack = s_z;
    warm->slack_u = s_u;
    warm->rho = rho;
    warm->valid = true;
  }

  SdpResult res;
  Matrix rounded = round_to_cptp(z, problem.d_in, problem.d_out);
  if (problem.has_inequality) {
    const double energy = std::real((problem.ineq_op * rounded).trace());
    if (energy > problem.ineq_bound + 1e-12 && energy > 0.0) {
      // blend toward J(S_vac) = I_in (x) |0><0|, the zero-energy CPTP point
      Matrix vac = Matrix::Zero(rounded.rows(), rounded.cols());
      for (int i = 0; i < problem.d_in; ++i)
        vac(i * problem.d_out, i * problem.d_out) = 1.0;
      const double t =
          std::min(1.0, (energy - problem.ineq_bound) / energy);
      rounded = (1.0 - t) * rounded + t * vac;
    }
    res.ineq_violation = std::max(
        0.0, std::real((problem.ineq_op * rounded).trace()) -
                 problem.ineq_bound);
  }

  res.choi.j = rounded;
  res.choi.d_in = problem.d_in;
  res.choi.d_out = problem.d_out;
  res.choi.tp_residual =
      (trace_out(rounded, problem.d_in, problem.d_out) -
       Matrix::Identity(problem.d_in, problem.d_in))
          .cwiseAbs()
          .maxCoeff();
  res.objective = std::real((problem.q * rounded).trace());
  res.iterations = it;
  res.converged = converged;
  res.tp_residual = res.choi.tp_residual;
  double neg = 0.0;
  psd_clip(rounded, &neg);
  res.psd_residual = neg;
  res.multiplier = trace_out(problem.q - rho * u, problem.d_in,
                             problem.d_out) /
                   problem.d_out;
  return res;
}

double duality_gap_certificate(const SdpProblem& problem,
                               const SdpResult& result) {
  if (problem.has_inequality)
    throw std::invalid_argument(
        "duality_gap_certificate: inequality problems not supported");
  // dual: min Tr(Y) s.t. Y (x) I >= Q
  Matrix y = (result.multiplier + result.multiplier.adjoint()) / 2.0;
  Matrix slack = kron_with_identity(y, problem.d_out) - problem.q;
  const double shift = std::max(0.0, -fock::min_eigenvalue(slack));
  y += shift * Matrix::Identity(problem.d_in, problem.d_in);
  return std::real(y.trace()) - result.objective;
}

}  // namespace ldlab::sdp
