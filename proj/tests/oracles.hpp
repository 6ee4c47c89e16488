// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by the tests. These follow
// different computational routes than the library (index summation, explicit
// orthonormalization, direct series) so agreement is meaningful.

#pragma once

#include "ldlab/fock.hpp"
#include "ldlab/rng.hpp"

#include <cmath>
#include <vector>

namespace oracles {

using ldlab::fock::Cd;
using ldlab::fock::Matrix;
using ldlab::fock::RealVector;
using ldlab::fock::Vector;

// Brute-force two-party partial trace by explicit index summation.
inline Matrix partial_trace_brute(const Matrix& rho, int da, int db,
                                  bool keep_first) {
  const int dk = keep_first ? da : db;
  const int dt = keep_first ? db : da;
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j)
      for (int t = 0; t < dt; ++t) {
        const int r = keep_first ? i * db + t : t * db + i;
        const int c = keep_first ? j * db + t : t * db + j;
        out(i, j) += rho(r, c);
      }
  return out;
}

// Geometric-distribution entropy by direct summation to a tiny tail.
inline double thermal_entropy_series(double nbar) {
  if (nbar <= 0.0) return 0.0;
  const double r = nbar / (1.0 + nbar);
  double h = 0.0, mass = 0.0;
  for (int n = 0; n < 100000; ++n) {
    const double p = std::exp(n * std::log(r) - std::log1p(nbar));
    if (p > 0.0) h -= p * std::log2(p);
    mass += p;
    if (1.0 - mass < 1e-14) break;
  }
  return h;
}

// Entropy of w0|psi0><psi0| + w1|psi1><psi1| with |<psi0|psi1>| = ov, via an
// explicit 2-dimensional orthonormal embedding.
inline double two_state_ensemble_entropy(double w0, double w1, double ov) {
  Matrix rho(2, 2);
  // psi0 = (1,0), psi1 = (ov, sqrt(1-ov^2))
  const double s = std::sqrt(std::max(0.0, 1.0 - ov * ov));
  Eigen::Vector2cd a(1.0, 0.0), b(ov, s);
  rho = w0 * a * a.adjoint() + w1 * b * b.adjoint();
  return ldlab::fock::von_neumann_entropy(rho);
}

// Action of pure loss on |n><n|: binomial photon survival.
inline Matrix loss_on_fock_diag(int n, double gamma, int dim) {
  Matrix out = Matrix::Zero(dim, dim);
  for (int k = 0; k <= n; ++k) {
    const double lw = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(n - k + 1.0);
    out(k, k) += std::exp(lw + k * std::log1p(-gamma) +
                          (n - k) * std::log(gamma));
  }
  return out;
}

// Central finite differences of a scalar function of a probability vector.
template <typename F>
RealVector finite_difference_gradient(const F& f, const RealVector& p,
                                      double h = 1e-5) {
  RealVector g(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    RealVector hi = p, lo = p;
    hi(i) += h;
    lo(i) -= h;
    g(i) = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

}  // namespace oracles
