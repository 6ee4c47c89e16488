// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra on truncated Fock spaces: ladder operators,
// tensor products, partial traces and eigendecomposition-backed entropies.
// Everything downstream (channels, bounds, codes, the seesaw) builds on this.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace ldlab::fock {

using Cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// Global numeric policy. Double-precision eigensolvers at the matrix sizes
// used here (dim <= 512) keep residuals well below these.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-8;
inline constexpr double kPsdTol = 1e-8;
inline constexpr double kEigFloor = 1e-14;

// Truncated oscillator space keeping Fock levels 0..cutoff.
struct FockSpace {
  int cutoff;
  explicit FockSpace(int nc) : cutoff(nc) {
    if (nc < 1) throw std::invalid_argument("FockSpace: cutoff must be >= 1");
  }
  int dim() const { return cutoff + 1; }
};

// Rectangular operator with explicit dimension bookkeeping, mainly for
// serialization of non-square maps.
struct Operator {
  Matrix entries;
  std::vector<int> in_dims;
  std::vector<int> out_dims;
};

Matrix number_operator(const FockSpace& space);        // diag(0..N_c)
Matrix annihilation_operator(const FockSpace& space);  // <n-1|a|n> = sqrt(n)

Matrix tensor(const Matrix& a, const Matrix& b);

// Partial trace over a composite space. `dims` lists subsystem dimensions in
// kron order (first factor major); `keep` lists the subsystem indices to
// retain, in increasing order.
Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims,
                     const std::vector<int>& keep);

bool is_hermitian(const Matrix& m, double tol = kHermTol);
double min_eigenvalue(const Matrix& hermitian);

// Validated density matrix on a (possibly composite) truncated space.
class DensityMatrix {
 public:
  DensityMatrix(Matrix rho, std::vector<int> dims);
  const Matrix& matrix() const { return rho_; }
  const std::vector<int>& dims() const { return dims_; }
  int dim() const { return static_cast<int>(rho_.rows()); }

 private:
  Matrix rho_;
  std::vector<int> dims_;
};

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep);

// von Neumann entropy in bits. Eigenvalues below kEigFloor contribute zero;
// eigenvalues below -kPsdTol are a validity error.
double von_neumann_entropy(const Matrix& rho);
double von_neumann_entropy(const DensityMatrix& rho);

double shannon_entropy_bits(const RealVector& p);

// Entropy (bits) of the ensemble sum_k w_k |psi_k><psi_k| given only the
// Gram matrix G_kl = <psi_k|psi_l>, computed from sqrt(W) G sqrt(W) which
// shares its nonzero spectrum with the mixture. Weights may sum to < 1; the
// unnormalized -sum(lambda log2 lambda) is returned so block contributions
// can be accumulated.
double gram_ensemble_entropy(const RealVector& weights, const Matrix& gram);

}  // namespace ldlab::fock
