// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark code families: finite-energy GKP qudits on single-mode lattices,
// 2d-legged cat qudits, the sqrt(17) two-component code, rotation-symmetry
// analysis and Wigner-grid evaluation.

#pragma once

#include "ldlab/fock.hpp"

#include <optional>
#include <string>

namespace ldlab::codes {

using fock::Cd;
using fock::Matrix;
using fock::RealVector;
using fock::Vector;

struct CutoffError : std::runtime_error {
  int suggested_cutoff;
  CutoffError(const std::string& what, int suggested)
      : std::runtime_error(what), suggested_cutoff(suggested) {}
};

// Isometric encoder: d orthonormal code words in the truncated Fock space.
struct CodeEncoding {
  int d = 2;
  int cutoff = 0;
  Matrix codewords;  // (cutoff+1) x d, orthonormal columns
  std::string family_tag;
  double parameter = 0.0;  // Delta or alpha; 0 when not applicable
  double mean_energy = 0.0;
  double truncation_loss = 0.0;  // codeword norm lost to the cutoff
};

// Phase-space lattice for a GKP qudit. v1, v2 are displacement amplitudes;
// the qudit-d stabilizer condition pins |Im(conj(v1) v2)| = pi/d.
struct LatticeSpec {
  Cd v1;
  Cd v2;
  int d = 2;
  double delta = 0.3;
};

LatticeSpec hexagonal_lattice(int d, double delta);
LatticeSpec square_lattice(int d, double delta);

Vector coherent_state(Cd alpha, int cutoff);

// <m|D(beta)|n> via the associated-Laguerre closed form, exact per entry.
Matrix displacement_operator(Cd beta, int cutoff);

// Envelope-weighted lattice superposition of displaced vacua, truncated and
// symmetrically orthonormalized. Throws CutoffError if more than 1e-4 of any
// code word's norm lies above the cutoff.
CodeEncoding gkp_qudit(const LatticeSpec& lattice, int cutoff);

// |k>_C propto sum_l e^{-2 pi l k i / d} R_{2d}^l |alpha>; support on Fock
// levels congruent to 2k mod 2d.
CodeEncoding cat_qudit(int d, double alpha, int cutoff);

CodeEncoding sqrt17_code(int cutoff);

// Fock-basis encoding {|0>, ..., |d-1>}.
CodeEncoding fock_code(int d, int cutoff);

Matrix maximally_mixed_code_state(const CodeEncoding& code);

// Largest N <= nmax with ||[rho_C, R_N]||_max < 1e-6, or nullopt.
std::optional<int> rotation_symmetry_order(const CodeEncoding& code, int nmax);

// Rebase a rotation-symmetric code onto residue-pure code words (one residue
// class mod N per word). Requires d populated residue classes, all distinct
// mod N; throws std::invalid_argument otherwise.
CodeEncoding rebase_by_modularity(const CodeEncoding& code, int n_fold);

struct WignerGrid {
  Eigen::MatrixXd w;  // w(i, j) = W(xs[i] + i ps[j])
  double max_imag_residual = 0.0;
};

// W(alpha) = (2/pi) Tr[rho D(2 alpha) Pi], alpha = x + i p.
WignerGrid wigner_grid(const Matrix& rho, const RealVector& xs,
                       const RealVector& ps);

}  // namespace ldlab::codes
