// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/channels.hpp"

#include "ldlab/rng.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace ldlab::channels {

namespace {

// log binomial via lgamma; stable for the level ranges used here
double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void finalize_residual(KrausChannel& ch) {
  const int guarded = std::max(0, ch.cutoff - ch.guard_band);
  ch.completeness_residual = completeness_residual_on(ch.kraus, guarded);
}

}  // namespace

double completeness_residual_on(const std::vector<Matrix>& kraus,
                                int max_level) {
  if (kraus.empty()) return 1.0;
  const int dim = static_cast<int>(kraus.front().rows());
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  const int b = std::min(dim, max_level + 1);
  Matrix defect = Matrix::Identity(b, b) - sum.topLeftCorner(b, b);
  Eigen::SelfAdjointEigenSolver<Matrix> es(defect, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

int dephasing_kmax(double gamma_phi, int cutoff, double target) {
  if (gamma_phi <= 0.0) return 0;
  // Completeness defect on level n is the Poisson(gphi n^2) tail beyond kmax;
  // the worst level is n = cutoff. Chernoff: log P(X >= k) <= -lam + k(1 +
  // log lam - log k) for k >= lam.
  const double lam = gamma_phi * static_cast<double>(cutoff) * cutoff;
  const double log_target = std::log(target);
  int k = static_cast<int>(lam) + 1;
  while (-lam + k * (1.0 + std::log(lam) - std::log(static_cast<double>(k))) >=
         log_target)
    ++k;
  return k;
}

KrausChannel dephasing_kraus(double gamma_phi, int cutoff, int kmax) {
  if (gamma_phi < 0.0)
    throw std::invalid_argument("dephasing_kraus: gamma_phi < 0");
  fock::FockSpace space(cutoff);
  KrausChannel ch;
  ch.gamma = 0.0;
  ch.gamma_phi = gamma_phi;
  ch.cutoff = cutoff;
  if (gamma_phi == 0.0) {
    ch.kraus.push_back(Matrix::Identity(space.dim(), space.dim()));
    finalize_residual(ch);
    return ch;
  }
  if (kmax < 0) kmax = dephasing_kmax(gamma_phi, cutoff);
  for (int k = 0; k <= kmax; ++k) {
    Matrix d = Matrix::Zero(space.dim(), space.dim());
    for (int n = 0; n <= cutoff; ++n) {
      // sqrt(gphi^k/k!) n^k e^{-gphi n^2/2}, in log space
      if (n == 0 && k > 0) continue;
      const double log_coeff =
          0.5 * (k * std::log(gamma_phi) - std::lgamma(k + 1.0)) +
          (n > 0 ? k * std::log(static_cast<double>(n)) : 0.0) -
          0.5 * gamma_phi * n * n;
      d(n, n) = std::exp(log_coeff);
    }
    ch.kraus.push_back(std::move(d));
  }
  finalize_residual(ch);
  return ch;
}

KrausChannel loss_kraus(double gamma, int cutoff, int kmax) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("loss_kraus: gamma outside [0,1]");
  fock::FockSpace space(cutoff);
  KrausChannel ch;
  ch.gamma = gamma;
  ch.gamma_phi = 0.0;
  ch.cutoff = cutoff;
  if (kmax < 0) kmax = cutoff;  // a^k vanishes beyond that
  kmax = std::min(kmax, cutoff);
  if (gamma == 0.0) kmax = 0;
  for (int k = 0; k <= kmax; ++k) {
    Matrix l = Matrix::Zero(space.dim(), space.dim());
    for (int n = k; n <= cutoff; ++n) {
      // <n-k|L_k|n> = sqrt(C(n,k) g^k (1-g)^(n-k))
      double lw = log_binom(n, k);
      if (k > 0) lw += k * std::log(gamma);
      if (n > k) lw += (n - k) * std::log1p(-gamma);
      l(n - k, n) = std::exp(0.5 * lw);
    }
    if (gamma == 1.0) {
      // (1-g)^{(n-k)/2} collapses to delta_{n,k}
      l.setZero();
      if (k <= cutoff) l(0, k) = 1.0;
    }
    ch.kraus.push_back(std::move(l));
  }
  finalize_residual(ch);
  return ch;
}

KrausChannel joint_channel(double gamma, double gamma_phi, int cutoff,
                           int kmax_loss, int kmax_deph) {
  KrausChannel loss = loss_kraus(gamma, cutoff, kmax_loss);
  KrausChannel deph = dephasing_kraus(gamma_phi, cutoff, kmax_deph);
  KrausChannel ch;
  ch.gamma = gamma;
  ch.gamma_phi = gamma_phi;
  ch.cutoff = cutoff;
  for (const auto& d : deph.kraus)
    for (const auto& l : loss.kraus) {
      Matrix k = d * l;
      if (k.cwiseAbs().maxCoeff() < 1e-14) continue;  // negligible weight
      ch.kraus.push_back(std::move(k));
    }
  finalize_residual(ch);
  return ch;
}

Matrix apply(const KrausChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.dim() || rho.cols() != ch.dim())
    throw std::invalid_argument("apply: dimension mismatch");
  Matrix out = Matrix::Zero(ch.dim(), ch.dim());
  for (const auto& k : ch.kraus) out += k * rho * k.adjoint();
  return out;
}

Matrix complementary_apply(const KrausChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.dim() || rho.cols() != ch.dim())
    throw std::invalid_argument("complementary_apply: dimension mismatch");
  const int m = static_cast<int>(ch.kraus.size());
  const int dim = ch.dim();
  // E_ab = Tr(K_a rho K_b^dag) = <vec(K_b), vec(K_a rho)>
  Matrix p(dim * dim, m), c(dim * dim, m);
  for (int a = 0; a < m; ++a) {
    Matrix ka_rho = ch.kraus[a] * rho;
    p.col(a) = Eigen::Map<Vector>(ka_rho.data(), dim * dim);
    c.col(a) = Eigen::Map<const Vector>(ch.kraus[a].data(), dim * dim);
  }
  Matrix e = (c.adjoint() * p).transpose();
  return (e + e.adjoint()) / 2.0;
}

ChoiMatrix choi_of(const KrausChannel& ch) {
  const int dim = ch.dim();
  ChoiMatrix choi;
  choi.d_in = dim;
  choi.d_out = dim;
  choi.j = Matrix::Zero(dim * dim, dim * dim);
  for (const auto& k : ch.kraus) {
    // J += w w^dag with w[(i,x)] = K(x,i)
    Vector w(dim * dim);
    for (int i = 0; i < dim; ++i)
      for (int x = 0; x < dim; ++x) w(i * dim + x) = k(x, i);
    choi.j.noalias() += w * w.adjoint();
  }
  Matrix tr_out = fock::partial_trace(choi.j, {dim, dim}, {0});
  choi.tp_residual =
      (tr_out - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  return choi;
}

Matrix choi_apply(const ChoiMatrix& choi, const Matrix& x) {
  if (x.rows() != choi.d_in || x.cols() != choi.d_in)
    throw std::invalid_argument("choi_apply: dimension mismatch");
  Matrix out = Matrix::Zero(choi.d_out, choi.d_out);
  for (int i = 0; i < choi.d_in; ++i)
    for (int j = 0; j < choi.d_in; ++j)
      out += x(i, j) * choi.j.block(i * choi.d_out, j * choi.d_out,
                                    choi.d_out, choi.d_out);
  return out;
}

ChoiMatrix choi_of_superoperator(const Matrix& super, int d_in, int d_out) {
  ChoiMatrix choi;
  choi.d_in = d_in;
  choi.d_out = d_out;
  choi.j = Matrix::Zero(d_in * d_out, d_in * d_out);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) {
      Matrix e = Matrix::Zero(d_in, d_in);
      e(i, j) = 1.0;
      Matrix img = apply_superoperator(super, e);
      choi.j.block(i * d_out, j * d_out, d_out, d_out) = img;
    }
  Matrix tr_out = fock::partial_trace(choi.j, {d_in, d_out}, {0});
  choi.tp_residual =
      (tr_out - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  return choi;
}

Matrix superoperator(const KrausChannel& ch) {
  const int dim = ch.dim();
  Matrix s = Matrix::Zero(dim * dim, dim * dim);
  for (const auto& k : ch.kraus) s += fock::tensor(k.conjugate(), k);
  return s;
}

Matrix apply_superoperator(const Matrix& super, const Matrix& x) {
  const int dim = static_cast<int>(x.rows());
  Eigen::Map<const Vector> vx(x.data(), dim * dim);
  Vector vy = super * vx;
  return Eigen::Map<const Matrix>(vy.data(), dim, dim);
}

double rotation_covariance_check(const KrausChannel& ch, double theta,
                                 int nstates, std::uint64_t seed) {
  const int dim = ch.dim();
  Vector phases(dim);
  for (int n = 0; n < dim; ++n)
    phases(n) = std::polar(1.0, theta * static_cast<double>(n));
  Matrix r = phases.asDiagonal();
  rng::Rng gen(seed);
  double worst = 0.0;
  for (int s = 0; s < nstates; ++s) {
    Matrix rho = gen.density_matrix(dim);
    Matrix lhs = apply(ch, r * rho * r.adjoint());
    Matrix rhs = r * apply(ch, rho) * r.adjoint();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace ldlab::channels
