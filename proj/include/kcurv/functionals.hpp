#pragma once

// Scalar curvature functionals on unit vectors and subspaces, plus the two
// sphere-averaging paths (Monte Carlo and exact degree-4 moments) used to
// cross-check the averaging identities.

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rng.hpp"
#include "tensor.hpp"

namespace kcurv {

enum class FunctionalKind { H, Ric, RicPerp, RicPlus };

inline std::string functional_name(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::H: return "H";
    case FunctionalKind::Ric: return "Ric";
    case FunctionalKind::RicPerp: return "RicPerp";
    case FunctionalKind::RicPlus: return "RicPlus";
  }
  return "?";
}

// Ric(X,conj X) - H(X) on the unit vector X/|X|.
inline double ric_perp(const CurvatureTensor& R, const Eigen::VectorXcd& X) {
  const double nx = X.norm();
  if (nx < 1e-14) throw std::domain_error("ric_perp: zero vector");
  const Eigen::VectorXcd Xh = X / nx;
  const double r = hermitian_pairing(ricci(R), Xh);
  return r - bisectional(R, Xh, Xh);
}

inline double ric_plus(const CurvatureTensor& R, const Eigen::VectorXcd& X) {
  const double nx = X.norm();
  if (nx < 1e-14) throw std::domain_error("ric_plus: zero vector");
  const Eigen::VectorXcd Xh = X / nx;
  const double r = hermitian_pairing(ricci(R), Xh);
  return r + bisectional(R, Xh, Xh);
}

inline double eval_functional(const CurvatureTensor& R, const Eigen::MatrixXcd& ric, FunctionalKind kind,
                              const Eigen::VectorXcd& unitX) {
  switch (kind) {
    case FunctionalKind::H: return bisectional(R, unitX, unitX);
    case FunctionalKind::Ric: return hermitian_pairing(ric, unitX);
    case FunctionalKind::RicPerp: return hermitian_pairing(ric, unitX) - bisectional(R, unitX, unitX);
    case FunctionalKind::RicPlus: return hermitian_pairing(ric, unitX) + bisectional(R, unitX, unitX);
  }
  throw std::logic_error("eval_functional: bad kind");
}

// Ricci curvature of R restricted to the subspace, evaluated at v in the
// subspace: sum_a R(v^, conj v^, E_a, conj E_a).
inline double ric_k_form(const CurvatureTensor& R, const Subspace& sigma, const Eigen::VectorXcd& v,
                         double membership_tol = 1e-8) {
  const double nv = v.norm();
  if (nv < 1e-14) throw std::domain_error("ric_k_form: zero vector");
  const double res = sigma.projection_residual(v);
  if (res > membership_tol) {
    std::ostringstream os;
    os << "ric_k_form: v not in the subspace, projection residual " << res;
    throw std::domain_error(os.str());
  }
  const Eigen::VectorXcd vh = v / nv;
  double acc = 0.0;
  for (int a = 0; a < sigma.k(); ++a) acc += bisectional(R, vh, sigma.frame.col(a));
  return acc;
}

// Variants with the holomorphic sectional part removed/added. The k=1 variant
// of the orthogonal form vanishes identically and is returned as exact zero.
inline double ric_k_perp_form(const CurvatureTensor& R, const Subspace& sigma, const Eigen::VectorXcd& v,
                              double membership_tol = 1e-8) {
  if (sigma.k() == 1) {
    if (v.norm() < 1e-14) throw std::domain_error("ric_k_perp_form: zero vector");
    return 0.0;
  }
  return ric_k_form(R, sigma, v, membership_tol) - holo_sectional(R, v);
}

inline double ric_k_plus_form(const CurvatureTensor& R, const Subspace& sigma, const Eigen::VectorXcd& v,
                              double membership_tol = 1e-8) {
  return ric_k_form(R, sigma, v, membership_tol) + holo_sectional(R, v);
}

// S_k(Sigma) = sum_{a,b} R(E_a, conj E_a, E_b, conj E_b).
inline double s_k(const CurvatureTensor& R, const Subspace& sigma) {
  double acc = 0.0;
  for (int a = 0; a < sigma.k(); ++a)
    for (int b = 0; b < sigma.k(); ++b) acc += bisectional(R, sigma.frame.col(a), sigma.frame.col(b));
  return acc;
}

// Closed forms: the ambient Ricci trace over the frame shifted by the
// subspace scalar term.
inline double s_k_perp(const CurvatureTensor& R, const Subspace& sigma) {
  const Eigen::MatrixXcd ric = ricci(R);
  const int k = sigma.k();
  double tr = 0.0;
  for (int a = 0; a < k; ++a) tr += hermitian_pairing(ric, sigma.frame.col(a));
  return tr - 2.0 / (k + 1) * s_k(R, sigma);
}

inline double s_k_plus(const CurvatureTensor& R, const Subspace& sigma) {
  const Eigen::MatrixXcd ric = ricci(R);
  const int k = sigma.k();
  double tr = 0.0;
  for (int a = 0; a < k; ++a) tr += hermitian_pairing(ric, sigma.frame.col(a));
  return tr + 2.0 / (k + 1) * s_k(R, sigma);
}

struct McEstimate {
  double value = 0.0;     // k * (sphere average)
  double stderr_ = 0.0;   // standard error of the estimate, same scaling
  long long samples = 0;
};

namespace detail {

// Symmetric-pair compression of the restricted tensor: H(F z) = s* M s with
// s the scaled products z_a z_c (a <= c). Quadratic cost per sample instead
// of quartic.
struct QuarticEvaluator {
  int k = 0;
  int d = 0;
  Eigen::MatrixXcd M;           // d x d Hermitian
  std::vector<int> pa, pc;      // pair indices
  std::vector<double> w;        // sqrt multiplicity

  explicit QuarticEvaluator(const CurvatureTensor& Rk) : k(Rk.n) {
    d = k * (k + 1) / 2;
    pa.reserve(d);
    pc.reserve(d);
    w.reserve(d);
    for (int a = 0; a < k; ++a)
      for (int c = a; c < k; ++c) {
        pa.push_back(a);
        pc.push_back(c);
        w.push_back(a == c ? 1.0 : M_SQRT2);
      }
    M.resize(d, d);
    for (int m = 0; m < d; ++m)
      for (int mp = 0; mp < d; ++mp)
        M(m, mp) = w[m] * w[mp] * Rk(pa[m], pa[mp], pc[m], pc[mp]);
  }

  void pair_coords(const Eigen::VectorXcd& z, Eigen::VectorXcd& s) const {
    for (int m = 0; m < d; ++m) s(m) = w[m] * z(pa[m]) * z(pc[m]);
  }

  double eval(const Eigen::VectorXcd& s, Eigen::VectorXcd& tmp) const {
    tmp.noalias() = M * s;
    return s.dot(tmp).real();
  }
};

}  // namespace detail

// k * (uniform average of the functional over the unit sphere of the
// subspace), by Monte Carlo with normalized complex Gaussian directions.
// Sharded with derived seeds; reduction is in fixed shard order.
inline McEstimate sphere_average_mc(const CurvatureTensor& R, const Subspace& sigma, FunctionalKind kind,
                                    long long samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sphere_average_mc: samples >= 1 required");
  const int k = sigma.k();
  const CurvatureTensor Rk = restrict_tensor(R, sigma);
  const detail::QuarticEvaluator quartic(Rk);
  const Eigen::MatrixXcd ric = ricci(R);
  // Arranged so that z^* G z equals Ric(Z, conj Z) in the slot convention at
  // Z = frame * z for the sampled coordinates z.
  const Eigen::MatrixXcd G =
      (sigma.frame.transpose() * ric * sigma.frame.conjugate()).transpose();  // k x k

  const bool need_h = kind != FunctionalKind::Ric;
  const bool need_ric = kind != FunctionalKind::H;

  const long long shard_size = 1 << 16;
  double sum = 0.0, sumsq = 0.0;
  long long done = 0;
  Eigen::VectorXcd z(k), w(k), s(quartic.d), tmp(quartic.d), gz(k);
  for (long long shard = 0; done < samples; ++shard) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(shard) + 1));
    const long long count = std::min(shard_size, samples - done);
    double local = 0.0, localsq = 0.0;
    for (long long t = 0; t < count; ++t) {
      for (int i = 0; i < k; ++i) z(i) = rng.cgaussian();
      const double nz = z.norm();
      if (nz < 1e-12) {
        z(0) = 1.0;
      } else {
        z /= nz;
      }
      double f = 0.0;
      if (need_ric) {
        gz.noalias() = G * z;
        f += z.dot(gz).real();
      }
      double h = 0.0;
      if (need_h) {
        w = z.conjugate();  // the evaluator pairs conjugate coordinates
        quartic.pair_coords(w, s);
        h = quartic.eval(s, tmp);
      }
      switch (kind) {
        case FunctionalKind::H: f = h; break;
        case FunctionalKind::Ric: break;
        case FunctionalKind::RicPerp: f -= h; break;
        case FunctionalKind::RicPlus: f += h; break;
      }
      local += f;
      localsq += f * f;
    }
    sum += local;
    sumsq += localsq;
    done += count;
  }
  McEstimate est;
  est.samples = samples;
  const double mean = sum / samples;
  const double var = std::max(0.0, sumsq / samples - mean * mean);
  est.value = k * mean;
  est.stderr_ = samples > 1 ? k * std::sqrt(var / (samples - 1)) : 0.0;
  return est;
}

// Same quantity through the exact degree-4 sphere moments
//   E[z_a conj(z_b) z_c conj(z_d)] = (d_ab d_cd + d_ad d_cb) / (k(k+1)),
// contracted literally against the restricted tensor. Independent of the
// closed forms above, which contract the ambient Ricci instead.
inline double sphere_average_exact(const CurvatureTensor& R, const Subspace& sigma, FunctionalKind kind) {
  const int k = sigma.k();
  const CurvatureTensor Rk = restrict_tensor(R, sigma);
  const Eigen::MatrixXcd ric = ricci(R);

  // E[z_a conj(z_b)] = d_ab / k
  double avg_ric = 0.0;
  for (int a = 0; a < k; ++a) avg_ric += hermitian_pairing(ric, sigma.frame.col(a));
  avg_ric /= k;

  double avg_h = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        for (int d = 0; d < k; ++d) {
          double moment = 0.0;
          if (a == b && c == d) moment += 1.0;
          if (a == d && c == b) moment += 1.0;
          if (moment != 0.0) avg_h += moment * Rk(a, b, c, d).real();
        }
  avg_h /= k * (k + 1);

  double avg = 0.0;
  switch (kind) {
    case FunctionalKind::H: avg = avg_h; break;
    case FunctionalKind::Ric: avg = avg_ric; break;
    case FunctionalKind::RicPerp: avg = avg_ric - avg_h; break;
    case FunctionalKind::RicPlus: avg = avg_ric + avg_h; break;
  }
  return k * avg;
}

struct IdentityResidual {
  std::string name;
  double residual = 0.0;
  double stderr_ = 0.0;  // zero for the exact path
  bool mc = false;
};

struct IdentityCheckOptions {
  int subspaces = 4;
  long long mc_samples = 200000;
  std::uint64_t seed = 0;
  bool run_mc = true;
};

// Residuals of the averaging identities: the two full-sphere scalar relations
// and the subspace identities relating k*avg(RicPerp/RicPlus) to the closed
// forms, through both averaging paths.
inline std::vector<IdentityResidual> identity_residuals(const CurvatureTensor& R,
                                                        const IdentityCheckOptions& opts = {}) {
  std::vector<IdentityResidual> out;
  const int n = R.n;
  const double S = scalar_curvature(R);
  const Subspace full{Eigen::MatrixXcd::Identity(n, n)};

  auto add = [&](const std::string& name, double residual, double se, bool mc) {
    out.push_back(IdentityResidual{name, residual, se, mc});
  };

  // Full-sphere identities: avg RicPerp = (n-1) S / (n(n+1)), avg RicPlus = (n+3) S / (n(n+1)).
  const double perp_target = (n - 1) * S / (static_cast<double>(n) * (n + 1));
  const double plus_target = (n + 3) * S / (static_cast<double>(n) * (n + 1));
  add("scalar_avg_ric_perp_exact", std::abs(sphere_average_exact(R, full, FunctionalKind::RicPerp) / n - perp_target),
      0.0, false);
  add("scalar_avg_ric_plus_exact", std::abs(sphere_average_exact(R, full, FunctionalKind::RicPlus) / n - plus_target),
      0.0, false);
  if (opts.run_mc) {
    const McEstimate mp = sphere_average_mc(R, full, FunctionalKind::RicPerp, opts.mc_samples, derive_seed(opts.seed, 1));
    add("scalar_avg_ric_perp_mc", std::abs(mp.value / n - perp_target), mp.stderr_ / n, true);
    const McEstimate ms = sphere_average_mc(R, full, FunctionalKind::RicPlus, opts.mc_samples, derive_seed(opts.seed, 2));
    add("scalar_avg_ric_plus_mc", std::abs(ms.value / n - plus_target), ms.stderr_ / n, true);
  }

  Rng rng(derive_seed(opts.seed, 3));
  for (int t = 0; t < opts.subspaces; ++t) {
    const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
    const Subspace sigma{rng.stiefel(n, k)};
    const double perp_closed = s_k_perp(R, sigma);
    const double plus_closed = s_k_plus(R, sigma);
    std::ostringstream tag;
    tag << "[k=" << k << ",#" << t << "]";
    add("subspace_ric_perp_exact" + tag.str(),
        std::abs(sphere_average_exact(R, sigma, FunctionalKind::RicPerp) - perp_closed), 0.0, false);
    add("subspace_ric_plus_exact" + tag.str(),
        std::abs(sphere_average_exact(R, sigma, FunctionalKind::RicPlus) - plus_closed), 0.0, false);
    if (opts.run_mc) {
      const McEstimate mp =
          sphere_average_mc(R, sigma, FunctionalKind::RicPerp, opts.mc_samples, derive_seed(opts.seed, 100 + 2 * t));
      add("subspace_ric_perp_mc" + tag.str(), std::abs(mp.value - perp_closed), mp.stderr_, true);
      const McEstimate ms =
          sphere_average_mc(R, sigma, FunctionalKind::RicPlus, opts.mc_samples, derive_seed(opts.seed, 101 + 2 * t));
      add("subspace_ric_plus_mc" + tag.str(), std::abs(ms.value - plus_closed), ms.stderr_, true);
    }
  }
  return out;
}

}  // namespace kcurv
