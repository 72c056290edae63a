#pragma once

// Whitney comass of (p,0)-covectors: evaluation on simple vectors, alternating
// maximization over orthonormal frames, simplicity detection and the norm
// inequality check.
//
// A covector is stored by its coefficients a_I over strictly increasing
// multi-indices I = (i_1 < ... < i_p) in lexicographic order, meaning
// omega = sum_I a_I dz^{i_1} ^ ... ^ dz^{i_p}.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rng.hpp"

namespace kcurv {

inline long long binomial(int n, int p) {
  if (p < 0 || p > n) return 0;
  long long r = 1;
  for (int i = 0; i < p; ++i) r = r * (n - i) / (i + 1);
  return r;
}

inline std::vector<std::vector<int>> increasing_multi_indices(int n, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  if (p == 0) return {{}};
  while (true) {
    out.push_back(idx);
    int j = p - 1;
    while (j >= 0 && idx[j] == n - p + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (int m = j + 1; m < p; ++m) idx[m] = idx[m - 1] + 1;
  }
  return out;
}

struct PCovector {
  int n = 0;
  int p = 0;
  std::vector<cplx> coeffs;  // length C(n,p), lexicographic order

  static PCovector zero(int n, int p) {
    if (p < 1 || p > n) throw std::invalid_argument("PCovector: need 1 <= p <= n");
    PCovector w;
    w.n = n;
    w.p = p;
    w.coeffs.assign(static_cast<size_t>(binomial(n, p)), cplx(0, 0));
    return w;
  }

  // Sets the coefficient of dz^{i_1} ^ ... ^ dz^{i_p} for a strictly
  // increasing index tuple.
  void set(const std::vector<int>& I, cplx a) { coeffs[rank_of(I)] = a; }

  size_t rank_of(const std::vector<int>& I) const {
    if (static_cast<int>(I.size()) != p) throw std::invalid_argument("PCovector: index tuple of wrong degree");
    long long r = 0;
    int prev = -1;
    for (int t = 0; t < p; ++t) {
      if (I[t] <= prev || I[t] >= n) throw std::invalid_argument("PCovector: indices must be strictly increasing in [0,n)");
      for (int v = prev + 1; v < I[t]; ++v) r += binomial(n - 1 - v, p - 1 - t);
      prev = I[t];
    }
    return static_cast<size_t>(r);
  }
};

inline double l2_norm(const PCovector& w) {
  double acc = 0.0;
  for (const cplx& a : w.coeffs) acc += std::norm(a);
  return std::sqrt(acc);
}

// omega(v_1 ^ ... ^ v_p) = sum_I a_I det[ v_s[i_t] ]; multilinear and
// alternating in the columns of V.
inline cplx eval_on_simple(const PCovector& w, const Eigen::MatrixXcd& V) {
  if (V.rows() != w.n || V.cols() != w.p) throw std::invalid_argument("eval_on_simple: frame must be n x p");
  const auto indices = increasing_multi_indices(w.n, w.p);
  const int p = w.p;
  Eigen::MatrixXcd minor(p, p);
  cplx acc(0, 0);
  for (size_t m = 0; m < indices.size(); ++m) {
    if (w.coeffs[m] == cplx(0, 0)) continue;
    for (int s = 0; s < p; ++s)
      for (int t = 0; t < p; ++t) minor(s, t) = V(indices[m][t], s);
    acc += w.coeffs[m] * minor.determinant();
  }
  return acc;
}

struct ComassOptions {
  int restarts = 64;
  int max_sweeps = 500;
  double sweep_tol = 1e-12;
  std::uint64_t seed = 0;
};

struct ComassResult {
  double value = 0.0;
  Eigen::MatrixXcd witness;  // orthonormal p-frame
  int iterations = 0;
  bool converged = false;
};

// sup |omega(a)| over simple unit p-vectors, computed over orthonormal frames
// by alternating closed-form updates: with all but one vector fixed the
// contraction is a 1-covector and the optimal remaining vector is its
// normalized conjugate dual projected off the other frame vectors. The sweep
// objective is monotone non-decreasing.
inline ComassResult comass(const PCovector& w, const ComassOptions& opts = {}) {
  const int n = w.n, p = w.p;
  ComassResult best;
  const double l2 = l2_norm(w);
  if (l2 == 0.0) {
    best.witness = Eigen::MatrixXcd::Identity(n, p);
    best.converged = true;
    return best;
  }
  const auto indices = increasing_multi_indices(n, p);

  // Structured start: the coordinate frame of the largest coefficient.
  size_t top = 0;
  for (size_t m = 1; m < indices.size(); ++m)
    if (std::abs(w.coeffs[m]) > std::abs(w.coeffs[top])) top = m;
  Eigen::MatrixXcd coord_start = Eigen::MatrixXcd::Zero(n, p);
  for (int t = 0; t < p; ++t) coord_start(indices[top][t], t) = 1.0;

  for (int r = 0; r <= opts.restarts; ++r) {
    Eigen::MatrixXcd V;
    if (r == 0) {
      V = coord_start;
    } else {
      Rng rng(derive_seed(opts.seed, 0xc0ffee + static_cast<std::uint64_t>(r)));
      V = rng.stiefel(n, p);
    }
    double value = std::abs(eval_on_simple(w, V));
    bool converged = false;
    int sweeps = 0;
    for (; sweeps < opts.max_sweeps; ++sweeps) {
      for (int j = 0; j < p; ++j) {
        Eigen::VectorXcd c(n);
        Eigen::MatrixXcd probe = V;
        for (int i = 0; i < n; ++i) {
          probe.col(j) = Eigen::VectorXcd::Unit(n, i);
          c(i) = eval_on_simple(w, probe);
        }
        Eigen::VectorXcd cand = c.conjugate();
        for (int s = 0; s < p; ++s) {
          if (s == j) continue;
          cand -= V.col(s) * (V.col(s).adjoint() * cand);
        }
        const double nc = cand.norm();
        if (nc > 1e-14) V.col(j) = cand / nc;
      }
      const double next = std::abs(eval_on_simple(w, V));
      if (next < value - 1e-10 * (1.0 + value))
        throw std::logic_error("comass: sweep objective decreased");  // invariant of the update rule
      if (next - value < opts.sweep_tol * (1.0 + next)) {
        value = std::max(value, next);
        converged = true;
        break;
      }
      value = next;
    }
    if (value > best.value) {
      best.value = value;
      best.witness = V;
      best.iterations = sweeps;
      best.converged = converged;
    }
  }
  return best;
}

// true when the computed comass meets the norm (simple forms attain it).
// Empty when the maximization did not converge.
inline std::optional<bool> is_simple(const PCovector& w, double tol = 1e-8, const ComassOptions& opts = {}) {
  const double l2 = l2_norm(w);
  if (l2 == 0.0) throw std::domain_error("is_simple: zero covector");
  if (w.p == 1) return true;
  const ComassResult res = comass(w, opts);
  if (!res.converged) return std::nullopt;
  return l2 - res.value <= tol * l2;
}

struct WhitneyBounds {
  double l2 = 0.0;
  double comass_value = 0.0;
  double lower_bound = 0.0;  // sqrt(p!(n-p)!/n!) * l2
  double upper_margin = 0.0;  // l2 - comass; negative values signal a bug
  double lower_margin = 0.0;  // comass - lower_bound; under-reported by the optimizer
  bool upper_ok = false;
  bool lower_ok = false;
  bool converged = false;
};

inline WhitneyBounds whitney_bounds_check(const PCovector& w, const ComassOptions& opts = {},
                                          double tol = 1e-8) {
  WhitneyBounds b;
  b.l2 = l2_norm(w);
  if (b.l2 == 0.0) throw std::domain_error("whitney_bounds_check: zero covector");
  const ComassResult res = comass(w, opts);
  b.comass_value = res.value;
  b.converged = res.converged;
  // p!(n-p)!/n! = 1/C(n,p)
  b.lower_bound = b.l2 / std::sqrt(static_cast<double>(binomial(w.n, w.p)));
  b.upper_margin = b.l2 - b.comass_value;
  b.lower_margin = b.comass_value - b.lower_bound;
  b.upper_ok = b.upper_margin >= -tol * b.l2;
  b.lower_ok = b.lower_margin >= -tol * b.l2;
  return b;
}

// Coefficients of omega pulled back along U: (pullback)(v...) = omega(Uv...).
inline PCovector pullback(const PCovector& w, const Eigen::MatrixXcd& U) {
  if (U.rows() != w.n || U.cols() != w.n) throw std::invalid_argument("pullback: U must be n x n");
  PCovector out = PCovector::zero(w.n, w.p);
  const auto indices = increasing_multi_indices(w.n, w.p);
  Eigen::MatrixXcd cols(w.n, w.p);
  for (size_t m = 0; m < indices.size(); ++m) {
    for (int t = 0; t < w.p; ++t) cols.col(t) = U.col(indices[m][t]);
    out.coeffs[m] = eval_on_simple(w, cols);
  }
  return out;
}

}  // namespace kcurv
