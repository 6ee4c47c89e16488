// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace ldlab::rng {

// Mixes a base seed with a stream index so parallel sweep workers draw
// independent, reproducible streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Deterministic generator. Distributions are hand-rolled (Box-Muller on top
// of mt19937_64 words) so output does not depend on libstdc++'s unspecified
// distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();          // [0, 1)
  double normal();           // standard normal
  std::complex<double> complex_normal();  // <|z|^2> = 1

  Eigen::MatrixXcd gaussian_matrix(int rows, int cols);
  Eigen::VectorXcd unit_vector(int dim);
  Eigen::MatrixXcd density_matrix(int dim);            // full-rank mixed state
  Eigen::MatrixXcd diagonal_density_matrix(int dim);   // as a dense matrix
  Eigen::VectorXd dirichlet(int dim);                  // flat Dirichlet weights

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ldlab::rng
