// Copyright (c) 2026 The ldlab developers.
// SPDX-License-Identifier: Apache-2.0

#include "ldlab/capacity.hpp"

#include "ldlab/rng.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace ldlab::capacity {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double xlog2x(double x) { return x <= 1e-300 ? 0.0 : x * std::log2(x); }

// weights of the environment block with j lost photons:
// w_{j,k} = p_{j+k} C(j+k, k) g^j (1-g)^k
double block_weight(const RealVector& p, int j, int k, double lg,
                    double l1mg) {
  const int n = j + k;
  if (n >= p.size() || p(n) <= 0.0) return 0.0;
  const double acc = std::log(p(n)) + log_binom(n, k) + j * lg + k * l1mg;
  return std::exp(acc);
}

struct DiagonalChannelCache {
  double gamma, gamma_phi;
  int dim;
  double lg, l1mg;
  Eigen::MatrixXd gram;  // e^{-gphi (k-l)^2/2}
  DiagonalChannelCache(double g, double gphi, int d)
      : gamma(g), gamma_phi(gphi), dim(d) {
    lg = g > 0.0 ? std::log(g) : 0.0;
    l1mg = g < 1.0 ? std::log1p(-g) : 0.0;
    gram.resize(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        gram(a, b) = std::exp(-0.5 * gphi * (a - b) * (a - b));
  }
};

// output distribution q_k = sum_n p_n C(n,k)(1-g)^k g^(n-k)
RealVector output_distribution(const RealVector& p, double gamma) {
  const int dim = static_cast<int>(p.size());
  RealVector q = RealVector::Zero(dim);
  if (gamma == 0.0) return p;
  if (gamma == 1.0) {
    q(0) = p.sum();
    return q;
  }
  const double lg = std::log(gamma), l1mg = std::log1p(-gamma);
  for (int n = 0; n < dim; ++n) {
    if (p(n) <= 0.0) continue;
    const double lp = std::log(p(n));
    for (int k = 0; k <= n; ++k)
      q(k) += std::exp(lp + log_binom(n, k) + k * l1mg + (n - k) * lg);
  }
  return q;
}

}  // namespace

double g_thermal_entropy(double nbar) {
  if (nbar < 0.0) throw std::invalid_argument("g_thermal_entropy: nbar < 0");
  if (nbar == 0.0) return 0.0;
  return (nbar + 1.0) * std::log2(nbar + 1.0) - nbar * std::log2(nbar);
}

double q_loss_unconstrained(double gamma) {
  if (gamma <= 0.0) {
    if (gamma == 0.0) return kInfiniteCapacity;
    throw std::invalid_argument("q_loss_unconstrained: gamma outside (0,1]");
  }
  if (gamma > 1.0)
    throw std::invalid_argument("q_loss_unconstrained: gamma outside (0,1]");
  return std::max(std::log2((1.0 - gamma) / gamma), 0.0);
}

double q_loss_constrained(double gamma, double nbar) {
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("q_loss_constrained: gamma outside [0,1]");
  if (nbar < 0.0) throw std::invalid_argument("q_loss_constrained: nbar < 0");
  return std::max(
      g_thermal_entropy((1.0 - gamma) * nbar) - g_thermal_entropy(gamma * nbar),
      0.0);
}

double q_dephasing_exact(double gamma_phi) {
  if (gamma_phi <= 0.0)
    throw std::invalid_argument("q_dephasing_exact: gamma_phi must be > 0");
  const double q = std::exp(-gamma_phi);
  // log2 of the Euler function phi(q) = prod (1 - q^k)
  double log_phi = 0.0;
  double qk = 1.0;
  for (long k = 1; k <= 1000000; ++k) {
    qk *= q;
    const double inc = std::log1p(-qk);
    log_phi += inc;
    if (qk < 1e-18) break;
  }
  double series = 0.0;
  for (long k = 1; k <= 1000000; ++k) {
    const double term = std::exp(-0.5 * gamma_phi * (static_cast<double>(k) * k + k)) /
                        (k * (1.0 - std::exp(-static_cast<double>(k) * gamma_phi)));
    series += (k % 2 == 1 ? term : -term);
    if (term < 1e-12) break;
  }
  return log_phi / kLn2 + 2.0 / kLn2 * series;
}

RealVector thermal_probs(double nbar, int cutoff) {
  RealVector p = RealVector::Zero(cutoff + 1);
  if (nbar == 0.0) {
    p(0) = 1.0;
    return p;
  }
  const double r = nbar / (1.0 + nbar);
  for (int n = 0; n <= cutoff; ++n)
    p(n) = std::exp(n * std::log(r) - std::log1p(nbar));
  p /= p.sum();
  return p;
}

double thermal_tail(double nbar, int cutoff) {
  if (nbar == 0.0) return 0.0;
  return std::exp((cutoff + 1) * std::log(nbar / (1.0 + nbar)));
}

int suggested_cutoff(double nbar, double tail_tol) {
  if (nbar == 0.0) return 1;
  const double lr = std::log(nbar / (1.0 + nbar));
  return std::max(1, static_cast<int>(std::ceil(std::log(tail_tol) / lr)));
}

double diagonal_coherent_information(const RealVector& p, double gamma,
                                     double gamma_phi) {
  const int dim = static_cast<int>(p.size());
  DiagonalChannelCache c(gamma, gamma_phi, dim);
  const double h_out = fock::shannon_entropy_bits(output_distribution(p, gamma));

  double h_env = 0.0;
  if (gamma == 0.0) {
    // only the zero-loss block survives
    h_env = fock::gram_ensemble_entropy(p, c.gram.cast<fock::Cd>());
  } else if (gamma == 1.0) {
    h_env = fock::shannon_entropy_bits(p);
  } else if (gamma_phi == 0.0) {
    // rank-one Gram blocks: entropy of the lost-photon distribution
    RealVector lost = RealVector::Zero(dim);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; j + k < dim; ++k)
        lost(j) += block_weight(p, j, k, c.lg, c.l1mg);
    h_env = fock::shannon_entropy_bits(lost);
  } else {
    for (int j = 0; j < dim; ++j) {
      const int bs = dim - j;
      RealVector w(bs);
      double tot = 0.0;
      for (int k = 0; k < bs; ++k) {
        w(k) = block_weight(p, j, k, c.lg, c.l1mg);
        tot += w(k);
      }
      if (tot <= 1e-300) continue;
      Matrix m(bs, bs);
      RealVector sq = w.cwiseMax(0.0).cwiseSqrt();
      for (int a = 0; a < bs; ++a)
        for (int b = 0; b < bs; ++b) m(a, b) = sq(a) * c.gram(a, b) * sq(b);
      Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
      for (int i = 0; i < bs; ++i) h_env -= xlog2x(es.eigenvalues()(i));
    }
  }
  return h_out - h_env;
}

RealVector diagonal_ic_gradient(const RealVector& p, double gamma,
                                double gamma_phi) {
  const int dim = static_cast<int>(p.size());
  DiagonalChannelCache c(gamma, gamma_phi, dim);
  RealVector grad = RealVector::Zero(dim);

  // d H(q)/dp_n = -sum_k B_kn (log2 q_k + 1/ln2)
  RealVector q = output_distribution(p, gamma);
  RealVector dlog(dim);
  for (int k = 0; k < dim; ++k)
    dlog(k) = std::log2(std::max(q(k), 1e-300)) + 1.0 / kLn2;
  if (gamma == 0.0) {
    grad = -dlog;
  } else if (gamma == 1.0) {
    grad.array() = -dlog(0);
  } else {
    for (int n = 0; n < dim; ++n) {
      double acc = 0.0;
      for (int k = 0; k <= n; ++k)
        acc += std::exp(log_binom(n, k) + k * c.l1mg + (n - k) * c.lg) *
               dlog(k);
      grad(n) = -acc;
    }
  }

  // environment part, block by block
  if (gamma == 0.0) {
    // single Gram block with weights p
    RealVector sq = p.cwiseMax(0.0).cwiseSqrt();
    Matrix m(dim, dim);
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) m(a, b) = sq(a) * c.gram(a, b) * sq(b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    RealVector lam = es.eigenvalues();
    RealVector flam(dim);
    for (int i = 0; i < dim; ++i)
      flam(i) = std::log2(std::max(lam(i), 1e-18)) + 1.0 / kLn2;
    Matrix a_mat = es.eigenvectors() * flam.asDiagonal() *
                   es.eigenvectors().adjoint();
    Matrix asg =
        a_mat * sq.cast<fock::Cd>().asDiagonal() * c.gram.cast<fock::Cd>();
    for (int k = 0; k < dim; ++k) {
      const double wk = std::max(p(k), 1e-14);
      grad(k) += asg(k, k).real() / std::sqrt(wk);
    }
    return grad;
  }
  if (gamma == 1.0) {
    for (int n = 0; n < dim; ++n)
      grad(n) += std::log2(std::max(p(n), 1e-300)) + 1.0 / kLn2;
    return grad;
  }
  if (gamma_phi == 0.0) {
    RealVector lost = RealVector::Zero(dim);
    for (int j = 0; j < dim; ++j)
      for (int k = 0; j + k < dim; ++k)
        lost(j) += block_weight(p, j, k, c.lg, c.l1mg);
    for (int n = 0; n < dim; ++n) {
      double acc = 0.0;
      for (int j = 0; j <= n; ++j)
        acc += std::exp(log_binom(n, n - j) + (n - j) * c.l1mg + j * c.lg) *
               (std::log2(std::max(lost(j), 1e-300)) + 1.0 / kLn2);
      grad(n) += acc;
    }
    return grad;
  }

  for (int j = 0; j < dim; ++j) {
    const int bs = dim - j;
    RealVector w(bs);
    double tot = 0.0;
    for (int k = 0; k < bs; ++k) {
      w(k) = block_weight(p, j, k, c.lg, c.l1mg);
      tot += w(k);
    }
    if (tot <= 1e-300) continue;
    RealVector sq = w.cwiseMax(0.0).cwiseSqrt();
    Matrix m(bs, bs);
    for (int a = 0; a < bs; ++a)
      for (int b = 0; b < bs; ++b) m(a, b) = sq(a) * c.gram(a, b) * sq(b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    RealVector lam = es.eigenvalues();
    RealVector flam(bs);
    for (int i = 0; i < bs; ++i)
      flam(i) = std::log2(std::max(lam(i), 1e-18)) + 1.0 / kLn2;
    Matrix a_mat =
        es.eigenvectors() * flam.asDiagonal() * es.eigenvectors().adjoint();
    Matrix asg = a_mat * sq.cast<fock::Cd>().asDiagonal() *
                 c.gram.topLeftCorner(bs, bs).cast<fock::Cd>();
    // dH_j/dw_k = -Re[(A sqrtW G)_kk]/sqrt(w_k); dw_k/dp_{j+k} = C(j+k,k) g^j (1-g)^k
    for (int k = 0; k < bs; ++k) {
      const int n = j + k;
      const double wk = std::max(w(k), 1e-14);
      const double dh_dw = -asg(k, k).real() / std::sqrt(wk);
      const double dw_dp =
          std::exp(log_binom(n, k) + j * c.lg + k * c.l1mg);
      grad(n) -= dh_dw * dw_dp;  // gradient of (H_out - H_env)
    }
  }
  return grad;
}

double coherent_information(const Matrix& rho,
                            const channels::KrausChannel& ch) {
  const Matrix out = channels::apply(ch, rho);
  const Matrix env = channels::complementary_apply(ch, rho);
  return fock::von_neumann_entropy(out) - fock::von_neumann_entropy(env);
}

RealVector project_capped_simplex(const RealVector& y, const RealVector& cost,
                                  double cap) {
  const int dim = static_cast<int>(y.size());
  auto simplex = [dim](const RealVector& v) {
    // Euclidean projection onto the probability simplex (sort & threshold)
    std::vector<double> u(v.data(), v.data() + dim);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    int rho_idx = 0;
    for (int i = 0; i < dim; ++i) {
      css += u[i];
      const double t = (css - 1.0) / (i + 1);
      if (u[i] - t > 0.0) {
        rho_idx = i;
        theta = t;
      }
    }
    (void)rho_idx;
    RealVector out(dim);
    for (int i = 0; i < dim; ++i) out(i) = std::max(v(i) - theta, 0.0);
    return out;
  };

  RealVector p = simplex(y);
  if (cost.dot(p) <= cap + 1e-12) return p;
  // dual bisection on the energy multiplier
  double lo = 0.0, hi = 1.0;
  while (cost.dot(simplex(y - hi * cost)) > cap && hi < 1e12) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cost.dot(simplex(y - mid * cost)) > cap)
      lo = mid;
    else
      hi = mid;
  }
  return simplex(y - hi * cost);
}

double DiagonalState::mean_energy() const {
  double e = 0.0;
  for (Eigen::Index n = 0; n < probs.size(); ++n) e += n * probs(n);
  return e;
}

namespace {

struct AscentResult {
  RealVector p;
  double value;
  bool converged;
  int iterations;
};

// Projected gradient ascent with backtracking on the projection arc.
AscentResult maximize_diagonal_ic(const RealVector& start, double gamma,
                                  double gamma_phi, double nbar,
                                  int max_iters = 400) {
  const int dim = static_cast<int>(start.size());
  RealVector cost(dim);
  for (int n = 0; n < dim; ++n) cost(n) = static_cast<double>(n);

  RealVector p = project_capped_simplex(start, cost, nbar);
  double f = diagonal_coherent_information(p, gamma, gamma_phi);
  double step = 0.1;
  int stall = 0;
  int it = 0;
  for (; it < max_iters; ++it) {
    RealVector g = diagonal_ic_gradient(p, gamma, gamma_phi);
    bool improved = false;
    for (int bt = 0; bt < 30; ++bt) {
      RealVector cand = project_capped_simplex(p + step * g, cost, nbar);
      const double fc = diagonal_coherent_information(cand, gamma, gamma_phi);
      if (fc > f + 1e-14) {
        const double df = fc - f;
        p = cand;
        f = fc;
        improved = true;
        step *= 1.6;
        stall = (df < 1e-10 * std::max(1.0, std::abs(f))) ? stall + 1 : 0;
        break;
      }
      step *= 0.4;
      if (step < 1e-13) break;
    }
    if (!improved || stall >= 4) break;
  }
  return {p, f, it < max_iters, it};
}

}  // namespace

OptimizeResult q_dephasing_constrained(double gamma_phi, double nbar,
                                       int cutoff) {
  if (gamma_phi < 0.0 || nbar < 0.0 || cutoff < 1)
    throw std::invalid_argument("q_dephasing_constrained: invalid parameters");
  const int dim = cutoff + 1;
  std::vector<RealVector> starts;
  starts.push_back(thermal_probs(std::max(nbar, 1e-9), cutoff));
  starts.push_back(RealVector::Constant(dim, 1.0 / dim));
  OptimizeResult best;
  best.bits = -1e300;
  for (const auto& s : starts) {
    AscentResult r = maximize_diagonal_ic(s, 0.0, gamma_phi, nbar);
    if (r.value > best.bits) {
      best.bits = r.value;
      best.state.probs = r.p;
      best.converged = r.converged;
      best.iterations = r.iterations;
    }
  }
  best.restarts_used = static_cast<int>(starts.size());
  return best;
}

double q_thermal_lower(double gamma, double gamma_phi, double nbar,
                       int cutoff) {
  const double tail = thermal_tail(nbar, cutoff);
  if (tail >= 1e-8)
    throw CutoffError("q_thermal_lower: thermal tail " + std::to_string(tail) +
                          " at cutoff " + std::to_string(cutoff),
                      suggested_cutoff(nbar, 1e-8));
  const RealVector p = thermal_probs(nbar, cutoff);
  return std::max(diagonal_coherent_information(p, gamma, gamma_phi), 0.0);
}

OptimizeResult q_diagonal_lower(double gamma, double gamma_phi, double nbar,
                                int cutoff, int restarts, std::uint64_t seed) {
  if (restarts < 1)
    throw std::invalid_argument("q_diagonal_lower: restarts < 1");
  const int dim = cutoff + 1;
  std::vector<RealVector> starts;
  starts.push_back(thermal_probs(std::max(nbar, 1e-9), cutoff));
  if (restarts >= 2) {
    // uniform over levels up to nbar
    const int top = std::min(cutoff, std::max(1, static_cast<int>(nbar)));
    RealVector u = RealVector::Zero(dim);
    for (int n = 0; n <= top; ++n) u(n) = 1.0 / (top + 1);
    starts.push_back(u);
  }
  rng::Rng gen(rng::derive_seed(seed, 0xD1A6));
  while (static_cast<int>(starts.size()) < restarts)
    starts.push_back(gen.dirichlet(dim));

  OptimizeResult best;
  best.bits = -1e300;
  for (const auto& s : starts) {
    AscentResult r = maximize_diagonal_ic(s, gamma, gamma_phi, nbar);
    if (r.value > best.bits) {
      best.bits = r.value;
      best.state.probs = r.p;
      best.converged = r.converged;
      best.iterations = r.iterations;
    }
  }
  best.restarts_used = restarts;
  best.bits = std::max(best.bits, 0.0);
  return best;
}

double q_data_processing_upper(double gamma, double gamma_phi, double nbar,
                               int cutoff) {
  const double loss_term = q_loss_constrained(gamma, nbar);
  if (gamma_phi == 0.0) return loss_term;
  if (cutoff < 0) cutoff = suggested_cutoff(nbar, 1e-8);
  const double deph_term = q_dephasing_constrained(gamma_phi, nbar, cutoff).bits;
  return std::min(loss_term, deph_term);
}

}  // namespace ldlab::capacity
