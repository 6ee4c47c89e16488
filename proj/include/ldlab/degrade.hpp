// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Closed-form basis-element actions of the loss-dephasing channel, its
// complementary channel and the unique degradation-map candidate, plus the
// coherent-state positivity witness and the anti-degradation construction.
//
// Environment convention: E_l (Fock, dim cutoff+1) tensor E_d, E_l-major.
// E_d kets are coherent states |sqrt(gphi) k> represented in a Gram-embedded
// orthonormal frame so overlaps are exact (no second truncation).

#pragma once

#include "ldlab/fock.hpp"

namespace ldlab::degrade {

using fock::Cd;
using fock::Matrix;
using fock::Vector;

// Column k embeds |sqrt(gphi) k>, k = 0..count-1: frame^dag frame equals the
// Gram matrix exp(-gphi (k-l)^2 / 2).
Matrix gram_frame(double gamma_phi, int count);

// Indexed closed-form evaluator on |n><m| pairs for fixed channel parameters.
struct BasisElementMap {
  double gamma;
  double gamma_phi;
  int cutoff;

  BasisElementMap(double g, double gphi, int nc);

  int env_dim() const { return (cutoff + 1) * (cutoff + 1); }

  // N[g,gphi](|n><m|) on the system space.
  Matrix forward(int n, int m) const;

  // N^c(|n><m|) on E_l (x) E_d.
  Matrix complementary(int n, int m) const;

  // Degradation candidate D(|n><m|) on E_l (x) E_d; coefficients grow like
  // (g/(1-g))^(n+m), the numerical-blowup regime for g -> 1.
  // Throws std::domain_error for g = 1 (no such super-operator exists).
  Matrix degradation(int n, int m) const;

  // D applied to an arbitrary system operator by linearity.
  Matrix degradation_of(const Matrix& x) const;

 private:
  Matrix frame_;  // E_d embedding
  Matrix env_term(int a, int b, int l, double coeff) const;
};

// max_{n,m <= nmax} |D(N(|n><m|)) - N^c(|n><m|)|, entrywise.
double degradation_identity_residual(double gamma, double gamma_phi,
                                     int cutoff, int nmax);

// Choi matrix of D restricted to the domain n,m <= domain_max. CP would make
// it PSD; for gphi > 0 it acquires negative eigenvalues.
Matrix degradation_choi(double gamma, double gamma_phi, int domain_max,
                        int cutoff);

// Lemma-4 closed form <phi| D(|alpha><alpha|) |phi> for |phi> =
// (|00> + |n0>)/sqrt(2) and alpha with (sqrt(g/(1-g)) alpha)^n = -1 phase,
// scaled magnitude mu = |sqrt(g/(1-g)) alpha| given by `scaled_mag`.
// A negative value certifies non-degradability.
double coherent_state_witness(double gamma, double gamma_phi, int n,
                              double scaled_mag);

struct WitnessResult {
  double gamma = 0.0;
  double gamma_phi = 0.0;
  int n = 0;
  double alpha_mag = 0.0;  // scaled magnitude mu
  double value = 0.0;
  bool violated = false;
};

// Scans n = 2..10, mu in {0.5, 1, 2}; the first negative value wins.
WitnessResult witness_search(double gamma, double gamma_phi);

// Residual of N = N_D[gphi] o D' o Tr_{E_d} o N^c with D' = N_L[(2g-1)/g],
// over basis elements n,m <= nmax. Requires gamma >= 1/2.
double anti_degradation_residual(double gamma, double gamma_phi, int cutoff,
                                 int nmax);

}  // namespace ldlab::degrade
