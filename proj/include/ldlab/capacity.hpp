// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Coherent information and the capacity bounds: pure-loss closed forms, the
// dephasing-capacity series, energy-constrained optimizations over diagonal
// states, thermal and diagonal lower bounds and the data-processing upper
// bound.

#pragma once

#include "ldlab/channels.hpp"
#include "ldlab/fock.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ldlab::capacity {

using fock::Matrix;
using fock::RealVector;

struct CutoffError : std::runtime_error {
  int suggested_cutoff;
  CutoffError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_cutoff(suggested) {}
};

// g(nbar) = (nbar+1) log2(nbar+1) - nbar log2 nbar, the thermal-state entropy.
double g_thermal_entropy(double nbar);

// Q = max[log2((1-g)/g), 0]; gamma = 0 signals unbounded capacity.
double q_loss_unconstrained(double gamma);
double q_loss_constrained(double gamma, double nbar);

// Dephasing capacity: log2 phi(e^-gphi) + (2/ln2) sum_k (-1)^(k-1)
// e^{-gphi(k^2+k)/2} / (k(1-e^{-k gphi})), truncated once terms drop below
// 1e-12. For gphi < 1e-3 the term count grows like 1/gphi; capped at 1e6.
double q_dephasing_exact(double gamma_phi);

// Truncated thermal state; tail = mass beyond the cutoff before
// renormalization.
RealVector thermal_probs(double nbar, int cutoff);
double thermal_tail(double nbar, int cutoff);
int suggested_cutoff(double nbar, double tail_tol);

// Exact coherent information of diag(p) through N[g, gphi]: the output is the
// binomially mixed distribution, the environment is block-diagonal over the
// lost-photon count with coherent-state Gram blocks.
double diagonal_coherent_information(const RealVector& p, double gamma,
                                     double gamma_phi);
RealVector diagonal_ic_gradient(const RealVector& p, double gamma,
                                double gamma_phi);

// Generic I_c = H(N(rho)) - H(N^c(rho)) through the discrete-Kraus dilation.
double coherent_information(const Matrix& rho,
                            const channels::KrausChannel& ch);

// Projection onto {p >= 0, sum p = 1, cost.p <= cap} by dual bisection.
RealVector project_capped_simplex(const RealVector& y, const RealVector& cost,
                                  double cap);

struct DiagonalState {
  RealVector probs;
  double mean_energy() const;
};

struct OptimizeResult {
  double bits = 0.0;
  DiagonalState state;
  bool converged = false;
  int iterations = 0;
  int restarts_used = 1;
};

// Maximize I_c(diag(p), N_D[gphi]) over the energy-capped simplex. Concave
// objective (degradable channel), so the converged value is global.
OptimizeResult q_dephasing_constrained(double gamma_phi, double nbar,
                                       int cutoff);

// I_c of the truncated, renormalized thermal state, clamped at 0. Throws
// CutoffError when the tail mass is >= 1e-8.
double q_thermal_lower(double gamma, double gamma_phi, double nbar,
                       int cutoff);

// Multi-start projected-gradient ascent over diagonal states; the thermal
// state is always one start, so the result dominates q_thermal_lower.
OptimizeResult q_diagonal_lower(double gamma, double gamma_phi, double nbar,
                                int cutoff, int restarts = 8,
                                std::uint64_t seed = 1);

// min{Q_loss^(<=nbar), Q_dephasing^(<=nbar)}; cutoff < 0 picks
// suggested_cutoff(nbar, 1e-8) for the dephasing optimization.
double q_data_processing_upper(double gamma, double gamma_phi, double nbar,
                               int cutoff = -1);

struct BoundResult {
  double gamma = 0.0;
  double gamma_phi = 0.0;
  double nbar = 0.0;
  std::string bound_name;
  double bits = 0.0;
  int cutoff = 0;
  double tail_mass = 0.0;
  int restarts_used = 0;
  bool converged = true;
};

inline constexpr double kInfiniteCapacity =
    std::numeric_limits<double>::infinity();

}  // namespace ldlab::capacity
