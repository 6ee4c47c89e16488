// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/codes.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ldlab::codes {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEnvelopeFloor = 1e-12;   // smallest retained lattice weight
constexpr double kTruncationLimit = 1e-4;  // allowed codeword norm loss

double mean_energy_of(const Matrix& codewords) {
  double e = 0.0;
  for (Eigen::Index k = 0; k < codewords.cols(); ++k)
    for (Eigen::Index n = 0; n < codewords.rows(); ++n)
      e += static_cast<double>(n) * std::norm(codewords(n, k));
  return e / static_cast<double>(codewords.cols());
}

// Loewdin orthonormalization: C <- C (C^dag C)^(-1/2); preserves the family's
// symmetry, unlike sequential Gram-Schmidt.
Matrix loewdin(const Matrix& c) {
  const Matrix s = c.adjoint() * c;
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  if (es.eigenvalues().minCoeff() < 1e-12)
    throw std::invalid_argument("loewdin: code words linearly dependent");
  Matrix inv_sqrt = es.eigenvectors() *
                    es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                    es.eigenvectors().adjoint();
  return c * inv_sqrt;
}

CodeEncoding finish(Matrix codewords, int d, int cutoff, std::string tag,
                    double parameter, double trunc_loss) {
  CodeEncoding code;
  code.d = d;
  code.cutoff = cutoff;
  code.codewords = loewdin(codewords);
  code.family_tag = std::move(tag);
  code.parameter = parameter;
  code.mean_energy = mean_energy_of(code.codewords);
  code.truncation_loss = trunc_loss;
  return code;
}

}  // namespace

LatticeSpec hexagonal_lattice(int d, double delta) {
  if (d < 2) throw std::invalid_argument("hexagonal_lattice: d < 2");
  if (delta <= 0.0) throw std::invalid_argument("hexagonal_lattice: delta <= 0");
  const double scale = std::sqrt(kPi / d) * std::sqrt(2.0 / std::sqrt(3.0));
  LatticeSpec l;
  l.v1 = scale * Cd(std::sqrt(3.0) / 2.0, -0.5);
  l.v2 = scale * Cd(0.0, 1.0);
  l.d = d;
  l.delta = delta;
  return l;
}

LatticeSpec square_lattice(int d, double delta) {
  if (d < 2) throw std::invalid_argument("square_lattice: d < 2");
  if (delta <= 0.0) throw std::invalid_argument("square_lattice: delta <= 0");
  const double scale = std::sqrt(kPi / d);
  LatticeSpec l;
  l.v1 = Cd(scale, 0.0);
  l.v2 = Cd(0.0, scale);
  l.d = d;
  l.delta = delta;
  return l;
}

Vector coherent_state(Cd alpha, int cutoff) {
  Vector v(cutoff + 1);
  const double a = std::abs(alpha);
  const double phase = std::arg(alpha);
  for (int m = 0; m <= cutoff; ++m) {
    if (a == 0.0) {
      v(m) = (m == 0) ? 1.0 : 0.0;
      continue;
    }
    const double lmag =
        -0.5 * a * a + m * std::log(a) - 0.5 * std::lgamma(m + 1.0);
    v(m) = std::polar(std::exp(lmag), m * phase);
  }
  return v;
}

Matrix displacement_operator(Cd beta, int cutoff) {
  const int dim = cutoff + 1;
  Matrix d(dim, dim);
  const double b2 = std::norm(beta);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) {
      const int lo = std::min(m, n), hi = std::max(m, n);
      const double lag = std::assoc_laguerre(lo, hi - lo, b2);
      double lmag = 0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)) -
                    0.5 * b2;
      Cd pref;
      if (m >= n)
        pref = std::pow(beta, m - n);
      else
        pref = std::pow(-std::conj(beta), n - m);
      d(m, n) = pref * std::exp(lmag) * lag;
    }
  return d;
}

CodeEncoding gkp_qudit(const LatticeSpec& lattice, int cutoff) {
  const int d = lattice.d;
  const double delta = lattice.delta;
  const double area = std::abs(std::imag(std::conj(lattice.v1) * lattice.v2));
  if (std::abs(area - kPi / d) > 1e-9 * kPi)
    throw std::invalid_argument("gkp_qudit: lattice cell violates |Im(v1* v2)| = pi/d");

  // lattice points with envelope weight >= kEnvelopeFloor
  const double radius = std::sqrt(-std::log(kEnvelopeFloor)) / delta;
  Eigen::Matrix2d gram;
  gram << std::norm(lattice.v1), std::real(std::conj(lattice.v1) * lattice.v2),
      std::real(std::conj(lattice.v1) * lattice.v2), std::norm(lattice.v2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gram);
  const double idx_bound = radius / std::sqrt(es.eigenvalues().minCoeff());

  const int dim = cutoff + 1;
  Matrix codewords(dim, d);
  double worst_loss = 0.0;
  double max_z2 = 0.0;
  for (int mu = 0; mu < d; ++mu) {
    std::vector<Cd> amps;   // c_a including the composition phase
    std::vector<Cd> points; // z_a
    const int n1_lim = static_cast<int>(std::ceil((idx_bound + mu) / d)) + 1;
    const int n2_lim = static_cast<int>(std::ceil(idx_bound)) + 1;
    for (int n1 = -n1_lim; n1 <= n1_lim; ++n1)
      for (int n2 = -n2_lim; n2 <= n2_lim; ++n2) {
        const Cd a = static_cast<double>(d * n1 + mu) * lattice.v1;
        const Cd b = static_cast<double>(n2) * lattice.v2;
        const Cd z = a + b;
        const double w = std::exp(-delta * delta * std::norm(z));
        if (w < kEnvelopeFloor) continue;
        // D(a) D(b) = e^{-i Im(a* b)} D(a+b)
        const double comp = -std::imag(std::conj(a) * b);
        amps.push_back(w * std::polar(1.0, comp));
        points.push_back(z);
        max_z2 = std::max(max_z2, std::norm(z));
      }

    Vector psi = Vector::Zero(dim);
    for (size_t t = 0; t < amps.size(); ++t)
      psi += amps[t] * coherent_state(points[t], cutoff);

    // exact norm from pairwise coherent overlaps, no truncation
    double norm2 = 0.0;
    for (size_t s = 0; s < amps.size(); ++s)
      for (size_t t = 0; t < amps.size(); ++t) {
        const Cd za = points[s], zb = points[t];
        const Cd overlap = std::exp(-0.5 * std::norm(za) - 0.5 * std::norm(zb) +
                                    std::conj(za) * zb);
        norm2 += std::real(std::conj(amps[s]) * amps[t] * overlap);
      }
    const double loss = 1.0 - psi.squaredNorm() / norm2;
    worst_loss = std::max(worst_loss, loss);
    codewords.col(mu) = psi / psi.norm();
  }
  if (worst_loss > kTruncationLimit) {
    const int suggested =
        static_cast<int>(std::ceil(max_z2 + 6.0 * std::sqrt(max_z2) + 8.0));
    throw CutoffError("gkp_qudit: truncation loss " +
                          std::to_string(worst_loss) + " exceeds 1e-4",
                      suggested);
  }
  CodeEncoding code =
      finish(codewords, d, cutoff, "gkp", delta, worst_loss);
  return code;
}

CodeEncoding cat_qudit(int d, double alpha, int cutoff) {
  if (d < 1) throw std::invalid_argument("cat_qudit: d < 1");
  if (alpha == 0.0)
    throw std::invalid_argument("cat_qudit: alpha = 0 is degenerate");
  // Poisson tail of |alpha> beyond the cutoff
  const double a2 = alpha * alpha;
  double term = std::exp(-a2), cdf = term;
  for (int n = 1; n <= cutoff; ++n) {
    term *= a2 / n;
    cdf += term;
  }
  const double tail = std::max(0.0, 1.0 - cdf);
  if (tail >= 1e-10) {
    const int suggested =
        static_cast<int>(std::ceil(a2 + 8.0 * std::sqrt(a2) + 8.0));
    throw CutoffError("cat_qudit: coherent tail " + std::to_string(tail) +
                          " beyond cutoff",
                      suggested);
  }

  const int dim = cutoff + 1;
  Matrix codewords = Matrix::Zero(dim, d);
  const Vector coh = coherent_state(alpha, cutoff);
  for (int k = 0; k < d; ++k) {
    Vector psi = Vector::Zero(dim);
    for (int m = 0; m < dim; ++m)
      if (((m - 2 * k) % (2 * d) + 2 * d) % (2 * d) == 0) psi(m) = coh(m);
    const double nrm = psi.norm();
    if (nrm < 1e-150)
      throw std::invalid_argument("cat_qudit: empty residue class at cutoff");
    codewords.col(k) = psi / nrm;
  }
  return finish(codewords, d, cutoff, "cat", alpha, tail);
}

CodeEncoding sqrt17_code(int cutoff) {
  if (cutoff < 4) throw std::invalid_argument("sqrt17_code: cutoff < 4");
  const double s = std::sqrt(17.0);
  const int dim = cutoff + 1;
  Matrix codewords = Matrix::Zero(dim, 2);
  codewords(0, 0) = std::sqrt((7.0 - s) / 6.0);
  codewords(3, 0) = std::sqrt((s - 1.0) / 6.0);
  codewords(1, 1) = std::sqrt((9.0 - s) / 6.0);
  codewords(4, 1) = std::sqrt((s - 3.0) / 6.0);
  return finish(codewords, 2, cutoff, "sqrt17", 0.0, 0.0);
}

CodeEncoding fock_code(int d, int cutoff) {
  if (d < 1 || d > cutoff + 1)
    throw std::invalid_argument("fock_code: d exceeds space dimension");
  Matrix codewords = Matrix::Zero(cutoff + 1, d);
  for (int k = 0; k < d; ++k) codewords(k, k) = 1.0;
  return finish(codewords, d, cutoff, "fock", 0.0, 0.0);
}

Matrix maximally_mixed_code_state(const CodeEncoding& code) {
  return code.codewords * code.codewords.adjoint() /
         static_cast<double>(code.d);
}

std::optional<int> rotation_symmetry_order(const CodeEncoding& code,
                                           int nmax) {
  const Matrix rho = maximally_mixed_code_state(code);
  const int dim = code.cutoff + 1;
  for (int n_fold = nmax; n_fold >= 2; --n_fold) {
    Vector ph(dim);
    for (int n = 0; n < dim; ++n)
      ph(n) = std::polar(1.0, 2.0 * kPi * n / n_fold);
    const Matrix r = ph.asDiagonal();
    const double comm = (rho * r - r * rho).cwiseAbs().maxCoeff();
    if (comm < 1e-6) return n_fold;
  }
  return std::nullopt;
}

CodeEncoding rebase_by_modularity(const CodeEncoding& code, int n_fold) {
  if (n_fold < 2) throw std::invalid_argument("rebase_by_modularity: N < 2");
  const Matrix rho = maximally_mixed_code_state(code);
  const int dim = code.cutoff + 1;

  std::vector<int> populated;
  for (int r = 0; r < n_fold; ++r) {
    double mass = 0.0;
    for (int n = r; n < dim; n += n_fold) mass += rho(n, n).real();
    if (mass > 1e-9) populated.push_back(r);
  }
  if (static_cast<int>(populated.size()) != code.d)
    throw std::invalid_argument(
        "rebase_by_modularity: need exactly d populated residue classes");

  Matrix codewords = Matrix::Zero(dim, code.d);
  int col = 0;
  for (int r : populated) {
    // project rho onto the residue class and take the dominant eigenvector
    Matrix block = Matrix::Zero(dim, dim);
    for (int a = r; a < dim; a += n_fold)
      for (int b = r; b < dim; b += n_fold) block(a, b) = rho(a, b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    int top = 0;
    es.eigenvalues().maxCoeff(&top);
    if (es.eigenvalues()(top) < 0.5 / code.d)
      throw std::invalid_argument(
          "rebase_by_modularity: residue class carries no full code word");
    codewords.col(col++) = es.eigenvectors().col(top);
  }

  CodeEncoding out = code;
  out.codewords = loewdin(codewords);
  out.mean_energy = mean_energy_of(out.codewords);

  // same span as the input, else the hypothesis of the rebase fails
  const Matrix p_old = code.codewords * code.codewords.adjoint();
  const Matrix p_new = out.codewords * out.codewords.adjoint();
  if ((p_old - p_new).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("rebase_by_modularity: span not preserved");
  return out;
}

WignerGrid wigner_grid(const Matrix& rho, const RealVector& xs,
                       const RealVector& ps) {
  const int cutoff = static_cast<int>(rho.rows()) - 1;
  WignerGrid grid;
  grid.w.resize(xs.size(), ps.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    for (Eigen::Index j = 0; j < ps.size(); ++j) {
      const Cd alpha(xs(i), ps(j));
      const Matrix disp = displacement_operator(2.0 * alpha, cutoff);
      Cd val(0, 0);
      for (int a = 0; a <= cutoff; ++a)
        for (int b = 0; b <= cutoff; ++b)
          val += rho(a, b) * disp(b, a) * ((a % 2 == 0) ? 1.0 : -1.0);
      val *= 2.0 / kPi;
      grid.w(i, j) = std::real(val);
      grid.max_imag_residual =
          std::max(grid.max_imag_residual, std::abs(std::imag(val)));
    }
  return grid;
}

}  // namespace ldlab::codes
