// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Biconvex entanglement-fidelity optimization: alternate the two convex
// subproblems (optimal decoder for a fixed encoder, optimal energy-bounded
// encoder for a fixed decoder), each solved as a CPTP semidefinite program.

#pragma once

#include "ldlab/channels.hpp"
#include "ldlab/codes.hpp"
#include "ldlab/sdp.hpp"

#include <cstdint>
#include <vector>

namespace ldlab::seesaw {

using channels::ChoiMatrix;
using channels::KrausChannel;
using fock::Matrix;
using sdp::SdpOptions;
using sdp::SdpProblem;

// Choi matrix of the isometric channel X -> V X V^dag.
ChoiMatrix choi_of_isometry(const Matrix& codewords);

// Hermitian Q with Tr(Q J(R)) equal to the entanglement fidelity of
// R o N o S for every decoder Choi J(R).
SdpProblem decoder_objective(const ChoiMatrix& encoder,
                             const KrausChannel& channel, int d);
SdpProblem decoder_objective(const ChoiMatrix& encoder, const Matrix& super,
                             int fock_dim, int d);

// Hermitian Q with Tr(Q J(S)) = F for fixed R o N, plus the energy
// inequality Tr((I (x) n) J(S))/d <= nbar.
SdpProblem encoder_objective(const ChoiMatrix& decoder,
                             const KrausChannel& channel, int d, double nbar);
SdpProblem encoder_objective(const ChoiMatrix& decoder, const Matrix& super,
                             int fock_dim, int d, double nbar);

struct SeesawOptions {
  int d = 2;
  double nbar = 9.0;
  int iters = 300;      // seesaw rounds (paper-accuracy preset: 3000)
  int restarts = 10;
  std::uint64_t seed = 1;
  int stall_rounds = 10;       // early stop after this many flat rounds
  double stall_tol = 1e-9;
  SdpOptions sdp;
};

struct SeesawState {
  ChoiMatrix encoder;
  ChoiMatrix decoder;
  std::vector<double> fidelity_history;  // one entry per half-step
  int iteration = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  double mean_energy = 0.0;
  bool multi_optimum_flag = false;  // shallow-landscape regime of Fig.-2 type
  double best_restart_spread = 0.0;  // max fidelity gap between restarts
};

SeesawState run_seesaw(const KrausChannel& channel, const SeesawOptions& opt);

// Haar-random d-frame, envelope-damped until the mean energy fits the budget.
Matrix random_isometry(int fock_dim, int d, double nbar, std::uint64_t seed);

// Isometry extraction: valid when the Choi is rank-one with eigenvalue d
// within 1e-4 relative; code words are the reshaped principal eigenvector,
// Loewdin-cleaned. Falls back to the dominant eigenvector with
// `isometry_ok = false` otherwise.
codes::CodeEncoding extract_code(const ChoiMatrix& encoder, int cutoff,
                                 bool* isometry_ok = nullptr);

// Rotation regularization: e^{i theta n} chosen so the first nonzero
// off-diagonal of rho_C (row-major scan above the diagonal) is real positive,
// with the smallest theta in [0, 2pi).
codes::CodeEncoding regularize_rotation(const codes::CodeEncoding& code);

// Diagonal-unitary regularization: greedy row-by-row phase pinning making the
// first nonzero off-diagonal in each row real positive.
codes::CodeEncoding regularize_diagonal_unitary(const codes::CodeEncoding& code);

}  // namespace ldlab::seesaw
