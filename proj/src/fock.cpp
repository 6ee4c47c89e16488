// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

namespace ldlab::fock {

namespace {

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

double xlog2x(double x) { return x <= kEigFloor ? 0.0 : x * std::log2(x); }

}  // namespace

Matrix number_operator(const FockSpace& space) {
  Matrix n = Matrix::Zero(space.dim(), space.dim());
  for (int k = 0; k < space.dim(); ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Matrix annihilation_operator(const FockSpace& space) {
  Matrix a = Matrix::Zero(space.dim(), space.dim());
  for (int k = 1; k < space.dim(); ++k)
    a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& rho, const std::vector<int>& dims,
                     const std::vector<int>& keep) {
  const int total = product(dims);
  if (rho.rows() != total || rho.cols() != total)
    throw std::invalid_argument("partial_trace: dimension list mismatch");
  const int nsub = static_cast<int>(dims.size());
  for (int k : keep)
    if (k < 0 || k >= nsub)
      throw std::invalid_argument("partial_trace: invalid subsystem index");

  std::vector<int> traced;
  for (int s = 0; s < nsub; ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end())
      traced.push_back(s);

  int dk = 1, dt = 1;
  for (int s : keep) dk *= dims[s];
  for (int s : traced) dt *= dims[s];

  // strides of each subsystem in the flat (first-factor-major) index
  std::vector<int> stride(nsub, 1);
  for (int s = nsub - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

  auto flat = [&](int ik, int it) {
    int idx = 0;
    int rem = ik;
    for (int p = static_cast<int>(keep.size()) - 1; p >= 0; --p) {
      const int s = keep[p];
      idx += (rem % dims[s]) * stride[s];
      rem /= dims[s];
    }
    rem = it;
    for (int p = static_cast<int>(traced.size()) - 1; p >= 0; --p) {
      const int s = traced[p];
      idx += (rem % dims[s]) * stride[s];
      rem /= dims[s];
    }
    return idx;
  };

  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Cd acc(0, 0);
      for (int t = 0; t < dt; ++t) acc += rho(flat(i, t), flat(j, t));
      out(i, j) = acc;
    }
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian,
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix::DensityMatrix(Matrix rho, std::vector<int> dims)
    : rho_(std::move(rho)), dims_(std::move(dims)) {
  if (rho_.rows() != rho_.cols())
    throw std::invalid_argument("DensityMatrix: not square");
  if (product(dims_) != rho_.rows())
    throw std::invalid_argument("DensityMatrix: dims do not match size");
  if (!is_hermitian(rho_))
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
  if (std::abs(rho_.trace().real() - 1.0) > kTraceTol ||
      std::abs(rho_.trace().imag()) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace not 1 within 1e-8");
  if (min_eigenvalue(rho_) < -kPsdTol)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  Matrix m = partial_trace(rho.matrix(), rho.dims(), keep);
  std::vector<int> dims;
  for (int s : keep) dims.push_back(rho.dims()[s]);
  return DensityMatrix(std::move(m), std::move(dims));
}

double von_neumann_entropy(const Matrix& rho) {
  if (!is_hermitian(rho))
    throw std::invalid_argument("entropy: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -kPsdTol)
      throw std::invalid_argument("entropy: matrix not PSD within tolerance");
    h -= xlog2x(lam);
  }
  return h < 0.0 ? 0.0 : h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.matrix());
}

double shannon_entropy_bits(const RealVector& p) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) h -= xlog2x(p(i));
  return h < 0.0 ? 0.0 : h;
}

double gram_ensemble_entropy(const RealVector& weights, const Matrix& gram) {
  const Eigen::Index k = weights.size();
  if (gram.rows() != k || gram.cols() != k)
    throw std::invalid_argument("gram_ensemble_entropy: size mismatch");
  double wsum = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (weights(i) < -1e-12)
      throw std::invalid_argument("gram_ensemble_entropy: negative weight");
    wsum += weights(i);
    if (std::abs(gram(i, i).real() - 1.0) > 1e-8 ||
        std::abs(gram(i, i).imag()) > 1e-8)
      throw std::invalid_argument("gram_ensemble_entropy: diagonal not 1");
  }
  if (wsum > 1.0 + 1e-8)
    throw std::invalid_argument("gram_ensemble_entropy: weights exceed 1");

  Matrix m(k, k);
  RealVector sq(k);
  for (Eigen::Index i = 0; i < k; ++i)
    sq(i) = std::sqrt(std::max(0.0, weights(i)));
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = sq(i) * gram(i, j) * sq(j);

  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) h -= xlog2x(es.eigenvalues()(i));
  return h < 0.0 ? 0.0 : h;
}

}  // namespace ldlab::fock
