// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// First-order solver for the CPTP semidefinite programs behind the seesaw:
// maximize Tr(Q X) over Choi matrices X >= 0 with Tr_out(X) = I_in and an
// optional linear inequality Tr(E X) <= b (the encoder energy constraint).
// ADMM alternates a closed-form affine projection with a PSD/nonnegative cone
// projection, with over-relaxation and residual-balanced penalty updates.

#pragma once

#include "ldlab/channels.hpp"
#include "ldlab/fock.hpp"

namespace ldlab::sdp {

using channels::ChoiMatrix;
using fock::Matrix;

struct SdpProblem {
  Matrix q;  // Hermitian objective on (in (x) out), input-major
  int d_in = 0;
  int d_out = 0;
  bool has_inequality = false;
  Matrix ineq_op;        // Hermitian E
  double ineq_bound = 0.0;  // Tr(E X) <= bound
};

struct SdpOptions {
  int max_iters = 30000;
  double tol = 1e-9;       // primal/dual residual target (Frobenius, scaled)
  double rho = 1.0;        // initial penalty
  double relax = 1.6;      // over-relaxation
  int check_every = 25;
};

struct SdpState {  // warm-start data
  Matrix z, u;
  double slack = 0.0, slack_u = 0.0;
  double rho = 0.0;
  bool valid = false;
};

struct SdpResult {
  ChoiMatrix choi;          // feasibility-rounded solution
  double objective = 0.0;   // Tr(Q choi)
  int iterations = 0;
  bool converged = false;
  double tp_residual = 0.0;
  double psd_residual = 0.0;
  double ineq_violation = 0.0;
  Matrix multiplier;        // approximate dual for the TP constraint
};

SdpResult solve_cptp_sdp(const SdpProblem& problem, const SdpOptions& options,
                         SdpState* warm = nullptr);

// Choi matrix of the identity channel on dimension d.
Matrix identity_choi(int d);

// Exact CPTP rounding: clip to the PSD cone, then conjugate by
// (Tr_out X)^(-1/2) (x) I; optionally blend toward the vacuum encoder until
// the inequality holds.
Matrix round_to_cptp(const Matrix& x, int d_in, int d_out);

// Dual certificate for problems without the inequality: shifts the dual guess
// Y to feasibility (Y (x) I >= Q) and returns Tr(Y) - Tr(Q X) >= gap.
double duality_gap_certificate(const SdpProblem& problem,
                               const SdpResult& result);

}  // namespace ldlab::sdp
