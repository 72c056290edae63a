#pragma once

// Seeded multi-restart first-order minimizers on the unit sphere of C^n and
// on complex Stiefel frames. Backtracking line search, QR retraction with a
// phase-fixed diagonal so runs are reproducible bit for bit.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>

#include "rng.hpp"

namespace kcurv {

struct OptimizerOptions {
  int restarts = 32;
  int max_iters = 500;
  double step_tol = 1e-10;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;
  int sample_check = 10000;  // fresh domain samples for the upper-bound audit
  double eps = 1e-6;         // positivity decision band
  int max_report_dim = 8;    // full_report refuses larger tensors
};

namespace detail {

struct SphereResult {
  Eigen::VectorXcd x;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iters = 0;
};

// Minimizes f over the unit sphere; egrad returns the Wirtinger derivative
// df/dconj(x) of the ambient extension.
inline SphereResult minimize_sphere(int n, const std::function<double(const Eigen::VectorXcd&)>& f,
                                    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& egrad,
                                    const OptimizerOptions& opts, std::uint64_t seed_salt,
                                    const std::vector<Eigen::VectorXcd>& warm_starts = {}) {
  SphereResult best;
  const int total = opts.restarts + static_cast<int>(warm_starts.size());
  for (int r = 0; r < total; ++r) {
    Eigen::VectorXcd x;
    if (r < static_cast<int>(warm_starts.size())) {
      x = warm_starts[r].normalized();
    } else {
      Rng rng(derive_seed(opts.seed, seed_salt + 131 * static_cast<std::uint64_t>(r)));
      x = rng.unit_vec(n);
    }
    double fx = f(x);
    double step = 1.0;
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
      Eigen::VectorXcd g = egrad(x);
      g -= x * cplx(x.dot(g).real(), 0.0);  // tangent projection (real metric)
      const double gn = g.norm();
      if (gn < opts.grad_tol) {
        converged = true;
        break;
      }
      bool accepted = false;
      while (step > opts.step_tol) {
        Eigen::VectorXcd cand = x - step * g;
        cand.normalize();
        const double fc = f(cand);
        if (fc < fx - 0.3 * step * gn * gn) {
          x = cand;
          fx = fc;
          accepted = true;
          step = std::min(step * 2.0, 1.0);
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        converged = step <= opts.step_tol * 2.0;
        break;
      }
    }
    if (fx < best.value) {
      best.value = fx;
      best.x = x;
      best.converged = converged;
      best.iters = it;
    }
  }
  return best;
}

struct StiefelResult {
  Eigen::MatrixXcd V;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
  double grad_norm = 0.0;
  int iters = 0;
};

inline Eigen::MatrixXcd stiefel_retract(const Eigen::MatrixXcd& Y) {
  const int n = static_cast<int>(Y.rows());
  const int k = static_cast<int>(Y.cols());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
  Eigen::MatrixXcd r = q.adjoint() * Y;
  for (int j = 0; j < k; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 1e-300) q.col(j) *= d / a;
  }
  return q;
}

// Minimizes f over orthonormal k-frames. egrad returns df/dconj(V).
inline StiefelResult minimize_stiefel(int n, int k, const std::function<double(const Eigen::MatrixXcd&)>& f,
                                      const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& egrad,
                                      const OptimizerOptions& opts, std::uint64_t seed_salt,
                                      const std::vector<Eigen::MatrixXcd>& warm_starts = {}) {
  StiefelResult best;
  const int total = opts.restarts + static_cast<int>(warm_starts.size());
  for (int r = 0; r < total; ++r) {
    Eigen::MatrixXcd V;
    if (r < static_cast<int>(warm_starts.size())) {
      V = stiefel_retract(warm_starts[r]);
    } else {
      Rng rng(derive_seed(opts.seed, seed_salt + 977 * static_cast<std::uint64_t>(r)));
      V = rng.stiefel(n, k);
    }
    double fx = f(V);
    double step = 1.0;
    bool converged = false;
    double last_gn = 0.0;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
      Eigen::MatrixXcd G = egrad(V);
      const Eigen::MatrixXcd VtG = V.adjoint() * G;
      G -= V * (0.5 * (VtG + VtG.adjoint()));  // tangent projection
      const double gn = G.norm();
      last_gn = gn;
      if (gn < opts.grad_tol) {
        converged = true;
        break;
      }
      bool accepted = false;
      while (step > opts.step_tol) {
        const Eigen::MatrixXcd cand = stiefel_retract(V - step * G);
        const double fc = f(cand);
        if (fc < fx - 0.3 * step * gn * gn) {
          V = cand;
          fx = fc;
          accepted = true;
          step = std::min(step * 2.0, 1.0);
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        converged = step <= opts.step_tol * 2.0;
        break;
      }
    }
    if (fx < best.value) {
      best.value = fx;
      best.V = V;
      best.converged = converged;
      best.grad_norm = last_gn;
      best.iters = it;
    }
  }
  return best;
}

}  // namespace detail
}  // namespace kcurv
