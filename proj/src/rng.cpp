// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/rng.hpp"

#include <cmath>

namespace ldlab::rng {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the combined word
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  // 53-bit mantissa in [0,1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> Rng::complex_normal() {
  return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
}

Eigen::MatrixXcd Rng::gaussian_matrix(int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = complex_normal();
  return m;
}

Eigen::VectorXcd Rng::unit_vector(int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = complex_normal();
  return v / v.norm();
}

Eigen::MatrixXcd Rng::density_matrix(int dim) {
  const Eigen::MatrixXcd g = gaussian_matrix(dim, dim);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

Eigen::MatrixXcd Rng::diagonal_density_matrix(int dim) {
  const Eigen::VectorXd p = dirichlet(dim);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) rho(i, i) = p(i);
  return rho;
}

Eigen::VectorXd Rng::dirichlet(int dim) {
  Eigen::VectorXd w(dim);
  for (int i = 0; i < dim; ++i) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    w(i) = -std::log(u);
  }
  return w / w.sum();
}

}  // namespace ldlab::rng
