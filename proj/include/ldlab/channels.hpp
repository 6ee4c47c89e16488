// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Kraus, Choi and superoperator representations of the pure-loss,
// pure-dephasing and joint loss-dephasing channels on a truncated Fock space,
// plus their complementary channels in the discrete-Kraus dilation.

#pragma once

#include "ldlab/fock.hpp"

#include <cstdint>
#include <vector>

namespace ldlab::channels {

using fock::Cd;
using fock::Matrix;
using fock::Vector;

// Choi matrix J = sum_ij |i><j| (x) N(|i><j|), indexed input-major.
// CPTP iff J >= 0 and Tr_out(J) = I_in.
struct ChoiMatrix {
  Matrix j;
  int d_in = 0;
  int d_out = 0;
  double tp_residual = 0.0;  // max |Tr_out(J) - I|
};

struct KrausChannel {
  std::vector<Matrix> kraus;
  double gamma = 0.0;      // loss fraction in [0,1]
  double gamma_phi = 0.0;  // dephasing strength >= 0
  int cutoff = 0;
  int guard_band = 4;      // top levels excluded from completeness assertions
  double completeness_residual = 0.0;  // on levels <= cutoff - guard_band
  int dim() const { return cutoff + 1; }
};

// Smallest Kraus count whose completeness defect on all retained levels stays
// below `target`. The e^{-gphi n^2/2} factor needs k up to roughly
// gphi*cutoff^2 plus a spread margin, so for gphi*cutoff^2 >> 1 the list is
// much longer than the space dimension.
int dephasing_kmax(double gamma_phi, int cutoff, double target = 1e-10);

// D_k = sqrt(gphi^k/k!) e^{-gphi n^2/2} n^k, k = 0..kmax. kmax < 0 picks the
// residual rule above.
KrausChannel dephasing_kraus(double gamma_phi, int cutoff, int kmax = -1);

// L_k = sqrt(g^k/k!) (1-g)^(n/2) a^k. On the truncated space the list
// k = 0..cutoff is complete to machine precision.
KrausChannel loss_kraus(double gamma, int cutoff, int kmax = -1);

// Joint channel N[g, gphi] = N_D o N_L with Kraus products {D_k L_l}.
KrausChannel joint_channel(double gamma, double gamma_phi, int cutoff,
                           int kmax_loss = -1, int kmax_deph = -1);

double completeness_residual_on(const std::vector<Matrix>& kraus,
                                int max_level);

Matrix apply(const KrausChannel& ch, const Matrix& rho);

// Channel to the environment of the discrete-Kraus dilation:
// [N^c(rho)]_{ab} = Tr(K_a rho K_b^dag). Output dimension = Kraus count.
Matrix complementary_apply(const KrausChannel& ch, const Matrix& rho);

ChoiMatrix choi_of(const KrausChannel& ch);
Matrix choi_apply(const ChoiMatrix& choi, const Matrix& x);
ChoiMatrix choi_of_superoperator(const Matrix& super, int d_in, int d_out);

// Superoperator in the column-major vec convention: vec(N(X)) = S vec(X),
// S = sum_k conj(K_k) (x) K_k.
Matrix superoperator(const KrausChannel& ch);
Matrix apply_superoperator(const Matrix& super, const Matrix& x);

// Max deviation of N(R rho R^dag) from R N(rho) R^dag with R = e^{i theta n}
// over a seeded random state set.
double rotation_covariance_check(const KrausChannel& ch, double theta,
                                 int nstates = 20, std::uint64_t seed = 7);

}  // namespace ldlab::channels
