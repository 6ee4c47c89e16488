// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/degrade.hpp"

#include "ldlab/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ldlab::degrade {

namespace {

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// n! / ((n-t)! l! (t-l)!)
double log_multinom(int n, int t, int l) {
  return std::lgamma(n + 1.0) - std::lgamma(n - t + 1.0) -
         std::lgamma(l + 1.0) - std::lgamma(t - l + 1.0);
}

// base^expo contribution in log space; flags exact-zero terms
bool log_pow(double base, int expo, double& acc) {
  if (expo == 0) return true;
  if (base <= 0.0) return false;
  acc += expo * std::log(base);
  return true;
}

// exact dephasing action Y_mn = e^{-gphi (m-n)^2/2} X_mn
Matrix dephase_exact(double gamma_phi, const Matrix& x) {
  Matrix y = x;
  for (Eigen::Index a = 0; a < x.rows(); ++a)
    for (Eigen::Index b = 0; b < x.cols(); ++b)
      y(a, b) *= std::exp(-0.5 * gamma_phi * static_cast<double>(a - b) *
                          static_cast<double>(a - b));
  return y;
}

}  // namespace

Matrix gram_frame(double gamma_phi, int count) {
  if (gamma_phi == 0.0) {
    // all kets coincide with the vacuum
    Matrix f = Matrix::Zero(count, count);
    for (int k = 0; k < count; ++k) f(0, k) = 1.0;
    return f;
  }
  Eigen::MatrixXd g(count, count);
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      g(a, b) = std::exp(-0.5 * gamma_phi * (a - b) * (a - b));
  // symmetric square root; Gaussian-kernel Gram matrices are numerically
  // rank-deficient for small gphi, so clip instead of Cholesky
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd f = lam.asDiagonal() * es.eigenvectors().transpose();
  return f.cast<Cd>();
}

BasisElementMap::BasisElementMap(double g, double gphi, int nc)
    : gamma(g), gamma_phi(gphi), cutoff(nc) {
  if (g < 0.0 || g > 1.0)
    throw std::invalid_argument("BasisElementMap: gamma outside [0,1]");
  if (gphi < 0.0)
    throw std::invalid_argument("BasisElementMap: gamma_phi < 0");
  if (nc < 1) throw std::invalid_argument("BasisElementMap: cutoff < 1");
  frame_ = gram_frame(gphi, nc + 1);
}

Matrix BasisElementMap::env_term(int a, int b, int l, double coeff) const {
  const int d = cutoff + 1;
  Matrix out = Matrix::Zero(d * d, d * d);
  const Vector v = frame_.col(l);
  for (int i = 0; i < d; ++i) {
    if (v(i) == Cd(0, 0)) continue;
    for (int j = 0; j < d; ++j)
      out(a * d + i, b * d + j) = coeff * v(i) * std::conj(v(j));
  }
  return out;
}

Matrix BasisElementMap::forward(int n, int m) const {
  if (n < 0 || m < 0 || n > cutoff || m > cutoff)
    throw std::invalid_argument("forward: level outside cutoff");
  const int d = cutoff + 1;
  Matrix out = Matrix::Zero(d, d);
  const double damp =
      std::exp(-0.5 * gamma_phi * static_cast<double>(n - m) * (n - m));
  for (int k = 0; k <= n; ++k) {
    const int l = k - (n - m);
    if (l < 0 || l > m) continue;
    double acc = log_binom(n, k) + log_binom(m, l);
    bool nonzero = log_pow(1.0 - gamma, k + l, acc) &&
                   log_pow(gamma, n + m - k - l, acc);
    if (!nonzero) continue;
    out(k, l) += damp * std::exp(0.5 * acc);
  }
  return out;
}

Matrix BasisElementMap::complementary(int n, int m) const {
  if (n < 0 || m < 0 || n > cutoff || m > cutoff)
    throw std::invalid_argument("complementary: level outside cutoff");
  const int d = cutoff + 1;
  Matrix out = Matrix::Zero(d * d, d * d);
  for (int k = 0; k <= std::min(n, m); ++k) {
    double acc = log_binom(n, k) + log_binom(m, k);
    bool nonzero =
        log_pow(gamma, n + m - 2 * k, acc) && log_pow(1.0 - gamma, 2 * k, acc);
    if (!nonzero) continue;
    out += env_term(n - k, m - k, k, std::exp(0.5 * acc));
  }
  return out;
}

Matrix BasisElementMap::degradation(int n, int m) const {
  if (gamma >= 1.0)
    throw std::domain_error("degradation: no super-operator exists at gamma=1");
  if (n < 0 || m < 0 || n > cutoff || m > cutoff)
    throw std::invalid_argument("degradation: level outside cutoff");
  const int d = cutoff + 1;
  Matrix out = Matrix::Zero(d * d, d * d);
  const double boost =
      std::exp(0.5 * gamma_phi * static_cast<double>(n - m) * (n - m));
  const double ratio = gamma / (1.0 - gamma);
  for (int t = 0; t <= std::min(n, m); ++t) {
    for (int l = 0; l <= t; ++l) {
      double acc = log_multinom(n, t, l) + log_multinom(m, t, l);
      if (!log_pow(ratio, n + m - 2 * l, acc)) continue;
      const double sign = ((t - l) % 2 == 0) ? 1.0 : -1.0;
      out += env_term(n - t, m - t, l, sign * boost * std::exp(0.5 * acc));
    }
  }
  return out;
}

Matrix BasisElementMap::degradation_of(const Matrix& x) const {
  const int d = cutoff + 1;
  if (x.rows() != d || x.cols() != d)
    throw std::invalid_argument("degradation_of: dimension mismatch");
  Matrix out = Matrix::Zero(d * d, d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) {
      if (std::abs(x(n, m)) < 1e-300) continue;
      out += x(n, m) * degradation(n, m);
    }
  return out;
}

double degradation_identity_residual(double gamma, double gamma_phi,
                                     int cutoff, int nmax) {
  BasisElementMap map(gamma, gamma_phi, cutoff);
  double worst = 0.0;
  for (int n = 0; n <= nmax; ++n)
    for (int m = 0; m <= nmax; ++m) {
      Matrix lhs = map.degradation_of(map.forward(n, m));
      Matrix rhs = map.complementary(n, m);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

Matrix degradation_choi(double gamma, double gamma_phi, int domain_max,
                        int cutoff) {
  BasisElementMap map(gamma, gamma_phi, cutoff);
  const int din = domain_max + 1;
  const int denv = map.env_dim();
  Matrix j = Matrix::Zero(din * denv, din * denv);
  for (int n = 0; n < din; ++n)
    for (int m = 0; m < din; ++m)
      j.block(n * denv, m * denv, denv, denv) = map.degradation(n, m);
  return j;
}

double coherent_state_witness(double gamma, double gamma_phi, int n,
                              double scaled_mag) {
  if (gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("witness: gamma must lie in (0,1)");
  if (gamma_phi < 0.0) throw std::invalid_argument("witness: gamma_phi < 0");
  if (n < 1)
    throw std::invalid_argument("witness: phase condition needs n >= 1");
  if (scaled_mag <= 0.0)
    throw std::invalid_argument("witness: magnitude must be positive");

  const double mu = scaled_mag;                       // |sqrt(g/(1-g)) alpha|
  const double a2 = mu * mu * (1.0 - gamma) / gamma;  // |alpha|^2
  const double lgn = std::lgamma(n + 1.0);
  const double bracket = 1.0 + std::exp(2.0 * n * std::log(mu) - lgn) -
                         2.0 * std::exp(0.5 * gamma_phi * n * n +
                                        n * std::log(mu) - 0.5 * lgn);

  // <0|sigma|0> = e^{-|a|^2} sum_l (|a|^2)^l/l! e^{-gphi l^2}
  double s = 0.0;
  double log_term = 0.0;
  for (int l = 0; l < 4000; ++l) {
    if (l > 0) log_term += std::log(a2) - std::log(static_cast<double>(l));
    const double term = std::exp(log_term - gamma_phi * l * l);
    s += term;
    if (l > a2 && term < 1e-18 * std::max(s, 1.0)) break;
  }
  const double sigma00 = std::exp(-a2) * s;

  return 0.5 * std::exp(-gamma / (1.0 - gamma) * a2) * bracket * sigma00;
}

WitnessResult witness_search(double gamma, double gamma_phi) {
  WitnessResult r;
  r.gamma = gamma;
  r.gamma_phi = gamma_phi;
  const double mags[] = {0.5, 1.0, 2.0};
  for (int n = 2; n <= 10; ++n)
    for (double mu : mags) {
      const double v = coherent_state_witness(gamma, gamma_phi, n, mu);
      if (v < 0.0) {
        r.n = n;
        r.alpha_mag = mu;
        r.value = v;
        r.violated = true;
        return r;
      }
      if (n == 2 && mu == mags[0]) {
        r.n = n;
        r.alpha_mag = mu;
        r.value = v;
      }
    }
  return r;
}

double anti_degradation_residual(double gamma, double gamma_phi, int cutoff,
                                 int nmax) {
  if (gamma < 0.5)
    throw std::domain_error(
        "anti_degradation_residual: construction requires gamma >= 1/2");
  BasisElementMap map(gamma, gamma_phi, cutoff);
  const int d = cutoff + 1;
  channels::KrausChannel dprime =
      channels::loss_kraus((2.0 * gamma - 1.0) / gamma, cutoff);
  double worst = 0.0;
  for (int n = 0; n <= nmax; ++n)
    for (int m = 0; m <= nmax; ++m) {
      // Tr_{E_d} N^c(|n><m|): coherent kets are diagonal in k, unit norm
      Matrix red = Matrix::Zero(d, d);
      for (int k = 0; k <= std::min(n, m); ++k) {
        double acc = log_binom(n, k) + log_binom(m, k);
        bool nonzero = log_pow(gamma, n + m - 2 * k, acc) &&
                       log_pow(1.0 - gamma, 2 * k, acc);
        if (!nonzero) continue;
        red(n - k, m - k) += std::exp(0.5 * acc);
      }
      Matrix rhs = dephase_exact(gamma_phi, channels::apply(dprime, red));
      Matrix lhs = map.forward(n, m);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace ldlab::degrade
