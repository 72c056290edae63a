#pragma once

// Positivity certification and refutation: seeded non-convex minimization of
// the curvature functionals over spheres, subspace frames and map domains,
// second-variation diagnostics at scalar minimizers, diameter-bound formulas
// and the aggregated per-tensor report with its cross-implication audit.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "functionals.hpp"
#include "optimize.hpp"
#include "quadforms.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace kcurv {

enum class Status { Positive, Nonpositive, Inconclusive };

inline std::string status_name(Status s) {
  switch (s) {
    case Status::Positive: return "positive";
    case Status::Nonpositive: return "nonpositive";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct SphereMin {
  double value = 0.0;
  Eigen::VectorXcd witness;
  bool converged = false;
  bool certified = false;
};

// Approximate infimum of the functional over the unit sphere. The Ricci kind
// is an exact Hermitian eigenvalue problem and is certified.
inline SphereMin min_over_sphere(const CurvatureTensor& R, FunctionalKind kind, const OptimizerOptions& opts = {}) {
  const int n = R.n;
  const Eigen::MatrixXcd ric = ricci(R);
  if (kind == FunctionalKind::Ric) {
    // In the slot convention the minimizer is the conjugated eigenvector.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ric);
    return SphereMin{es.eigenvalues()(0), es.eigenvectors().col(0).conjugate(), true, true};
  }
  const Eigen::MatrixXcd rict = ric.transpose();
  auto f = [&](const Eigen::VectorXcd& x) { return eval_functional(R, ric, kind, x); };
  auto g = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
    switch (kind) {
      case FunctionalKind::H: return 2.0 * detail::bis_grad_x(R, x, x);
      case FunctionalKind::RicPerp: return rict * x - 2.0 * detail::bis_grad_x(R, x, x);
      case FunctionalKind::RicPlus: return rict * x + 2.0 * detail::bis_grad_x(R, x, x);
      default: throw std::logic_error("min_over_sphere: bad kind");
    }
  };
  // Eigenvector starts of the Ricci form speed up the generic kinds.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ric);
  std::vector<Eigen::VectorXcd> warm = {es.eigenvectors().col(0).conjugate(),
                                        es.eigenvectors().col(n - 1).conjugate()};
  const detail::SphereResult res = detail::minimize_sphere(n, f, g, opts, 0x51ul, warm);
  return SphereMin{res.value, res.x, res.converged, false};
}

enum class RicKVariant { Plain, Perp, Plus };

inline std::string ric_k_variant_name(RicKVariant v) {
  switch (v) {
    case RicKVariant::Plain: return "plain";
    case RicKVariant::Perp: return "perp";
    case RicKVariant::Plus: return "plus";
  }
  return "?";
}

struct SubspaceMin {
  double value = 0.0;
  Subspace sigma;
  Eigen::VectorXcd v;  // distinguished direction where applicable
  bool converged = false;
  bool certified = false;
};

namespace detail {

// Cheap random presample of frames; the best few seed the descent so the
// reported infimum cannot sit above plain sampling.
inline std::vector<Eigen::MatrixXcd> presample_frames(int n, int k, int count, int keep,
                                                      const std::function<double(const Eigen::MatrixXcd&)>& f,
                                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<double, int>> scored;
  std::vector<Eigen::MatrixXcd> frames;
  frames.reserve(count);
  for (int t = 0; t < count; ++t) {
    frames.push_back(rng.stiefel(n, k));
    scored.emplace_back(f(frames.back()), t);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
  std::vector<Eigen::MatrixXcd> out;
  for (int m = 0; m < keep && m < static_cast<int>(scored.size()); ++m) out.push_back(frames[scored[m].second]);
  return out;
}

// Objective over frames with a distinguished first column:
//   f(V) = sum_a B(V_1, V_a)  [ -/+ H(V_1) ].
inline double ric_k_objective(const CurvatureTensor& R, const Eigen::MatrixXcd& V, RicKVariant variant) {
  const int k = static_cast<int>(V.cols());
  const Eigen::VectorXcd v = V.col(0);
  double acc = 0.0;
  for (int a = 0; a < k; ++a) acc += bisectional(R, v, V.col(a));
  if (variant == RicKVariant::Perp) acc -= bisectional(R, v, v);
  if (variant == RicKVariant::Plus) acc += bisectional(R, v, v);
  return acc;
}

inline Eigen::MatrixXcd ric_k_gradient(const CurvatureTensor& R, const Eigen::MatrixXcd& V, RicKVariant variant) {
  const int n = static_cast<int>(V.rows());
  const int k = static_cast<int>(V.cols());
  const Eigen::VectorXcd v = V.col(0);
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, k);
  for (int a = 0; a < k; ++a) {
    G.col(0) += bis_grad_x(R, v, V.col(a));
    G.col(a) += bis_grad_y(R, v, V.col(a));
  }
  if (variant == RicKVariant::Perp) G.col(0) -= 2.0 * bis_grad_x(R, v, v);
  if (variant == RicKVariant::Plus) G.col(0) += 2.0 * bis_grad_x(R, v, v);
  return G;
}

// Rotates the frame so its first column is the minimizing direction of the
// restricted Ricci form; exact step for the plain variant.
inline Eigen::MatrixXcd ric_k_eigenrotate(const CurvatureTensor& R, const Eigen::MatrixXcd& V) {
  const int k = static_cast<int>(V.cols());
  Eigen::MatrixXcd W(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      cplx acc(0, 0);
      for (int j = 0; j < k; ++j) acc += contract4(R, V.col(a), V.col(b), V.col(j), V.col(j));
      W(b, a) = std::conj(acc);  // Hermitian form in frame coordinates
    }
  W = 0.5 * (W + W.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W);
  const Eigen::VectorXcd z = es.eigenvectors().col(0).conjugate();
  // Complete z to a unitary k x k via QR of [z | I].
  Eigen::MatrixXcd M(k, k);
  M.col(0) = z;
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(k, k);
  int fill = 1;
  for (int j = 0; j < k && fill < k; ++j) {
    Eigen::VectorXcd c = I.col(j);
    for (int m = 0; m < fill; ++m) c -= M.col(m) * (M.col(m).adjoint() * c);
    if (c.norm() > 1e-8) M.col(fill++) = c.normalized();
  }
  return V * M;
}

}  // namespace detail

// inf over (Sigma, unit v in Sigma) of the restricted Ricci form; alternating
// frame descent with an exact eigenvector step in the v-slot for the plain
// variant. k = n plain is a certified eigenvalue.
inline SubspaceMin min_ric_k(const CurvatureTensor& R, int k, RicKVariant variant, const OptimizerOptions& opts = {}) {
  const int n = R.n;
  if (k < 1 || k > n) throw std::invalid_argument("min_ric_k: need 1 <= k <= n");
  SubspaceMin out;
  if (k == 1) {
    if (variant == RicKVariant::Perp) {
      Rng rng(derive_seed(opts.seed, 0x71));
      const Eigen::VectorXcd v = rng.unit_vec(n);
      out.value = 0.0;  // identically zero in a single direction
      out.sigma = Subspace{v};
      out.v = v;
      out.converged = true;
      out.certified = true;
      return out;
    }
    const SphereMin s = min_over_sphere(R, FunctionalKind::H, opts);
    out.value = (variant == RicKVariant::Plain ? s.value : 2.0 * s.value);
    out.sigma = Subspace{s.witness};
    out.v = s.witness;
    out.converged = s.converged;
    return out;
  }
  if (k == n && variant == RicKVariant::Plain) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ricci(R));
    out.value = es.eigenvalues()(0);
    out.sigma = Subspace{Eigen::MatrixXcd::Identity(n, n)};
    out.v = es.eigenvectors().col(0).conjugate();
    out.converged = true;
    out.certified = true;
    return out;
  }
  if (k == n) {
    const SphereMin s = min_over_sphere(R, variant == RicKVariant::Perp ? FunctionalKind::RicPerp : FunctionalKind::RicPlus, opts);
    out.value = s.value;
    out.sigma = Subspace{Eigen::MatrixXcd::Identity(n, n)};
    out.v = s.witness;
    out.converged = s.converged;
    return out;
  }
  auto f = [&](const Eigen::MatrixXcd& V) { return detail::ric_k_objective(R, V, variant); };
  auto g = [&](const Eigen::MatrixXcd& V) { return detail::ric_k_gradient(R, V, variant); };
  const auto warm = detail::presample_frames(n, k, 256, 4, f, derive_seed(opts.seed, 0x1356ul));
  detail::StiefelResult res = detail::minimize_stiefel(n, k, f, g, opts, 0x1357ul, warm);
  if (variant == RicKVariant::Plain) {
    const Eigen::MatrixXcd rotated = detail::ric_k_eigenrotate(R, res.V);
    const double fr = f(rotated);
    if (fr < res.value) {
      res.V = rotated;
      res.value = fr;
    }
  }
  out.value = res.value;
  out.sigma = Subspace{res.V};
  out.v = res.V.col(0);
  out.converged = res.converged;
  return out;
}

struct SKMin {
  double value = 0.0;
  Subspace sigma;
  double s_k_at = 0.0, s_k_perp_at = 0.0, s_k_plus_at = 0.0;  // all three at the minimizer
  bool converged = false;
  bool certified = false;
};

// inf over k-subspaces of the chosen scalar family member; exposes all three
// closed-form values at the minimizing subspace.
inline SKMin min_s_k(const CurvatureTensor& R, int k, RicKVariant variant = RicKVariant::Plain,
                     const OptimizerOptions& opts = {}) {
  const int n = R.n;
  if (k < 1 || k > n) throw std::invalid_argument("min_s_k: need 1 <= k <= n");
  SKMin out;
  auto finish = [&](const Subspace& sigma, bool converged, bool certified) {
    out.sigma = sigma;
    out.s_k_at = s_k(R, sigma);
    out.s_k_perp_at = s_k_perp(R, sigma);
    out.s_k_plus_at = s_k_plus(R, sigma);
    switch (variant) {
      case RicKVariant::Plain: out.value = out.s_k_at; break;
      case RicKVariant::Perp: out.value = out.s_k_perp_at; break;
      case RicKVariant::Plus: out.value = out.s_k_plus_at; break;
    }
    out.converged = converged;
    out.certified = certified;
  };
  if (k == n) {
    finish(Subspace{Eigen::MatrixXcd::Identity(n, n)}, true, true);
    return out;
  }
  if (k == 1) {
    FunctionalKind fk = FunctionalKind::H;
    if (variant == RicKVariant::Perp) fk = FunctionalKind::RicPerp;
    if (variant == RicKVariant::Plus) fk = FunctionalKind::RicPlus;
    const SphereMin s = min_over_sphere(R, fk, opts);
    finish(Subspace{s.witness}, s.converged, false);
    return out;
  }
  const Eigen::MatrixXcd ric = ricci(R);
  auto s_k_raw = [&](const Eigen::MatrixXcd& V) {
    double acc = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) acc += bisectional(R, V.col(a), V.col(b));
    return acc;
  };
  auto f = [&](const Eigen::MatrixXcd& V) {
    const double sk = s_k_raw(V);
    if (variant == RicKVariant::Plain) return sk;
    double tr = 0.0;
    for (int a = 0; a < k; ++a) tr += hermitian_pairing(ric, V.col(a));
    return variant == RicKVariant::Perp ? tr - 2.0 / (k + 1) * sk : tr + 2.0 / (k + 1) * sk;
  };
  auto g = [&](const Eigen::MatrixXcd& V) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(n, k);
    for (int c = 0; c < k; ++c) {
      Eigen::VectorXcd col = Eigen::VectorXcd::Zero(n);
      for (int b = 0; b < k; ++b) col += detail::bis_grad_x(R, V.col(c), V.col(b));
      G.col(c) = 2.0 * col;
    }
    if (variant == RicKVariant::Plain) return G;
    const double w = (variant == RicKVariant::Perp ? -1.0 : 1.0) * 2.0 / (k + 1);
    return Eigen::MatrixXcd(ric.transpose() * V + w * G);
  };
  const auto warm = detail::presample_frames(n, k, 256, 4, f, derive_seed(opts.seed, 0x2467ul));
  const detail::StiefelResult res = detail::minimize_stiefel(n, k, f, g, opts, 0x2468ul, warm);
  finish(Subspace{res.V}, res.converged, false);
  return out;
}

struct SecondVariationDiagnostics {
  double cross_residual = 0.0;  // largest mixed average |<R(E, conj E', .)>|
  double eq_margin = 0.0;       // min over complement directions minus S_k/(k(k+1))
  bool cross_ok = false;
  bool margin_ok = false;
};

// First- and second-order conditions at an approximate minimizer of the
// subspace scalar curvature: the mixed averages must vanish and every
// complement direction must average at least S_k / (k(k+1)).
inline SecondVariationDiagnostics second_variation_check(const CurvatureTensor& R, const Subspace& sigma,
                                                         double tol) {
  const int n = R.n;
  const int k = sigma.k();
  SecondVariationDiagnostics diag;
  if (k == n) {  // no complement; conditions hold vacuously
    diag.cross_ok = diag.margin_ok = true;
    return diag;
  }
  // Orthonormal complement from the full QR of the frame.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(sigma.frame);
  const Eigen::MatrixXcd Qfull = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd comp = Qfull.rightCols(n - k);

  Eigen::MatrixXcd C(k, n - k);
  for (int a = 0; a < k; ++a)
    for (int p = 0; p < n - k; ++p) {
      cplx acc(0, 0);
      for (int j = 0; j < k; ++j) acc += contract4(R, sigma.frame.col(a), comp.col(p), sigma.frame.col(j), sigma.frame.col(j));
      C(a, p) = acc / static_cast<double>(k);
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C);
  diag.cross_residual = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;

  Eigen::MatrixXcd D(n - k, n - k);
  for (int p = 0; p < n - k; ++p)
    for (int q = 0; q < n - k; ++q) {
      cplx acc(0, 0);
      for (int j = 0; j < k; ++j) acc += contract4(R, comp.col(p), comp.col(q), sigma.frame.col(j), sigma.frame.col(j));
      D(p, q) = acc / static_cast<double>(k);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (D + D.adjoint()));
  diag.eq_margin = es.eigenvalues()(0) - s_k(R, sigma) / (static_cast<double>(k) * (k + 1));

  diag.cross_ok = diag.cross_residual <= tol;
  diag.margin_ok = diag.eq_margin >= -tol;
  return diag;
}

struct BcValue {
  double value = 0.0;
  Subspace sigma;
  bool converged = false;
  bool certified = false;
};

// min over p-subspaces of the largest eigenvalue of
//   M(Sigma)_{ab} = (1/p) sum_j R(e_a, conj e_b, E_j, conj E_j);
// the inner maximization is exact, the outer minimization heuristic.
inline BcValue bc_p_value(const CurvatureTensor& R, int p, const OptimizerOptions& opts = {}) {
  const int n = R.n;
  if (p < 1 || p > n) throw std::invalid_argument("bc_p_value: need 1 <= p <= n");
  auto m_of = [&](const Eigen::MatrixXcd& V) {
    Eigen::MatrixXcd M(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        cplx acc(0, 0);
        for (int j = 0; j < p; ++j)
          acc += contract4(R, Eigen::VectorXcd::Unit(n, a), Eigen::VectorXcd::Unit(n, b), V.col(j), V.col(j));
        M(a, b) = acc / static_cast<double>(p);
      }
    return Eigen::MatrixXcd(0.5 * (M + M.adjoint()));
  };
  if (p == n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_of(Eigen::MatrixXcd::Identity(n, n)));
    return BcValue{es.eigenvalues()(n - 1), Subspace{Eigen::MatrixXcd::Identity(n, n)}, true, true};
  }
  auto f = [&](const Eigen::MatrixXcd& V) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_of(V));
    return es.eigenvalues()(n - 1);
  };
  auto g = [&](const Eigen::MatrixXcd& V) -> Eigen::MatrixXcd {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_of(V));
    const Eigen::VectorXcd x = es.eigenvectors().col(n - 1).conjugate();
    Eigen::MatrixXcd G(n, p);
    for (int j = 0; j < p; ++j) G.col(j) = detail::bis_grad_y(R, x, V.col(j)) / static_cast<double>(p);
    return G;
  };
  const auto warm = detail::presample_frames(n, p, 256, 4, f, derive_seed(opts.seed, 0x99a9ul));
  const detail::StiefelResult res = detail::minimize_stiefel(n, p, f, g, opts, 0x99aaul, warm);
  return BcValue{res.value, Subspace{res.V}, res.converged, false};
}

enum class DiameterKind { RicPlus, RicK, RicKPerp, RicKPlus };

// Upper diameter bounds under the normalized lower curvature hypotheses.
inline double diameter_bound(int n, int k, double lambda, DiameterKind kind) {
  if (lambda <= 0.0) throw std::domain_error("diameter_bound: lambda must be positive");
  switch (kind) {
    case DiameterKind::RicPlus: return std::sqrt(2.0 * n / ((n + 3) * lambda)) * M_PI;
    case DiameterKind::RicK: return std::sqrt((2.0 * k - 1) / ((k + 1) * lambda)) * M_PI;
    case DiameterKind::RicKPerp: return std::sqrt(2.0 / lambda) * M_PI;
    case DiameterKind::RicKPlus: return std::sqrt(2.0 * k / ((k + 3) * lambda)) * M_PI;
  }
  throw std::logic_error("diameter_bound: bad kind");
}

struct AuditItem {
  std::string name;
  bool ok = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct ConditionRecord {
  std::string name;
  double value = 0.0;
  double margin = 0.0;
  Status status = Status::Inconclusive;
  bool certified = false;
  double sampled_min = 0.0;  // min over fresh random domain samples
  bool sample_ok = true;     // reported value does not exceed the sampled min
  Eigen::VectorXcd witness_vector;
  Eigen::MatrixXcd witness_frame;
  Eigen::MatrixXcd witness_map;
};

struct PositivityReport {
  int n = 0;
  OptimizerOptions opts;
  std::vector<ConditionRecord> conditions;
  std::vector<AuditItem> audit;
  int count(Status s) const {
    int c = 0;
    for (const auto& r : conditions)
      if (r.status == s) ++c;
    return c;
  }
};

namespace detail {

inline Status decide(double value, double eps, bool converged) {
  if (!converged) return Status::Inconclusive;
  if (value > eps) return Status::Positive;
  if (value < -eps) return Status::Nonpositive;
  return Status::Inconclusive;
}

}  // namespace detail

// The cross-implication audit run on computed infima. One-sided inequalities
// only: rank-one minima lower-bound the associated Ricci-type minima (the
// special rank-one maps realize those functionals), and positivity of the
// stronger condition forces non-negativity of the weaker one.
inline std::vector<AuditItem> audit_implications(const CurvatureTensor& R, const OptimizerOptions& opts = {}) {
  const int n = R.n;
  const double eps = opts.eps;
  std::vector<AuditItem> items;

  const double cqb_min = min_eig(R, FormKind::CQB);
  const double ric_perp_min = min_over_sphere(R, FunctionalKind::RicPerp, opts).value;
  items.push_back({"cqb_positive_implies_ric_perp", !(cqb_min > eps) || ric_perp_min > -eps, cqb_min, ric_perp_min,
                   "CQB_min > eps => RicPerp_min > -eps"});

  const double cqb1 = rank_restricted_min(R, FormKind::CQB, 1, opts).value;
  items.push_back({"cqb1_above_full_min", cqb1 >= cqb_min - eps, cqb1, cqb_min, "CQB_1 >= CQB_min - eps"});
  items.push_back({"ric_perp_dominates_cqb1", ric_perp_min >= cqb1 - eps, ric_perp_min, cqb1,
                   "RicPerp_min >= CQB_1 - eps (rank-one maps realize RicPerp)"});

  const double dcqb1 = rank_restricted_min(R, FormKind::DCQB, 1, opts).value;
  const double ric_plus_min = min_over_sphere(R, FunctionalKind::RicPlus, opts).value;
  items.push_back({"dcqb1_positive_implies_ric_plus", !(dcqb1 > eps) || ric_plus_min > -eps, dcqb1, ric_plus_min,
                   "dCQB_1 > eps => RicPlus_min > -eps"});
  items.push_back({"ric_plus_dominates_dcqb1", ric_plus_min >= dcqb1 - eps, ric_plus_min, dcqb1,
                   "RicPlus_min >= dCQB_1 - eps (rank-one maps realize RicPlus)"});

  std::vector<double> s_perp_min(n + 1, 0.0), ric_k_min(n + 1, 0.0), s_min(n + 1, 0.0), ric_perp_k_min(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    s_perp_min[k] = min_s_k(R, k, RicKVariant::Perp, opts).value;
    s_min[k] = min_s_k(R, k, RicKVariant::Plain, opts).value;
    ric_k_min[k] = min_ric_k(R, k, RicKVariant::Plain, opts).value;
    ric_perp_k_min[k] = min_ric_k(R, k, RicKVariant::Perp, opts).value;
  }
  for (int l = 1; l <= n; ++l)
    for (int k = l + 1; k <= n; ++k) {
      if (s_perp_min[l] > eps && !(s_perp_min[k] > -eps)) {
        std::ostringstream os;
        os << "violated at l=" << l << ", k=" << k;
        items.push_back({"s_perp_monotone", false, s_perp_min[l], s_perp_min[k], os.str()});
      }
    }
  items.push_back({"s_perp_monotone", true, 0.0, 0.0, "SPerp_l > eps => SPerp_k > -eps for k >= l"});

  bool ric_s_ok = true;
  std::ostringstream ric_s_detail;
  for (int k = 1; k <= n; ++k)
    if (ric_k_min[k] > eps && !(s_min[k] > -eps)) {
      ric_s_ok = false;
      ric_s_detail << " k=" << k;
    }
  items.push_back({"ric_k_implies_s_k", ric_s_ok, 0.0, 0.0,
                   ric_s_ok ? "Ric_k > eps => S_k > -eps for all k" : "violated at" + ric_s_detail.str()});

  bool bc_ok = true;
  std::ostringstream bc_detail;
  for (int k = 1; k + 1 <= n; ++k) {
    if (ric_perp_k_min[k + 1] > eps) {
      const double bc = bc_p_value(R, k, opts).value;
      if (!(bc > -eps)) {
        bc_ok = false;
        bc_detail << " k=" << k;
      }
    }
  }
  items.push_back({"ric_perp_k1_implies_bc_k", bc_ok, 0.0, 0.0,
                   bc_ok ? "RicPerp_{k+1} > eps => BC_k > -eps for all k" : "violated at" + bc_detail.str()});
  return items;
}

namespace detail {

inline double sample_min_sphere(const CurvatureTensor& R, const Eigen::MatrixXcd& ric, FunctionalKind kind,
                                int count, std::uint64_t seed) {
  Rng rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < count; ++t) best = std::min(best, eval_functional(R, ric, kind, rng.unit_vec(R.n)));
  return best;
}

}  // namespace detail

// One record per positivity condition, exact where the condition reduces to
// an eigenvalue problem, heuristic (with a fresh-sample upper-bound audit)
// elsewhere. Condition names and their order are fixed.
inline PositivityReport full_report(const CurvatureTensor& R, const OptimizerOptions& opts = {},
                                    const std::vector<std::string>& condition_filter = {}) {
  const int n = R.n;
  if (n > opts.max_report_dim) {
    std::ostringstream os;
    os << "full_report: n = " << n << " exceeds the configured limit " << opts.max_report_dim;
    throw std::invalid_argument(os.str());
  }
  const Eigen::MatrixXcd ric = ricci(R);
  PositivityReport rep;
  rep.n = n;
  rep.opts = opts;

  auto wanted = [&](const std::string& name) {
    if (condition_filter.empty()) return true;
    for (const auto& f : condition_filter)
      if (name.rfind(f, 0) == 0) return true;
    return false;
  };
  std::uint64_t cond_index = 0;

  auto push = [&](ConditionRecord rec) {
    rec.margin = rec.value;
    rep.conditions.push_back(std::move(rec));
  };

  // Sphere functionals.
  const std::pair<FunctionalKind, std::string> sphere_kinds[] = {
      {FunctionalKind::H, "H_min"},
      {FunctionalKind::Ric, "Ric_min"},
      {FunctionalKind::RicPerp, "RicPerp_min"},
      {FunctionalKind::RicPlus, "RicPlus_min"},
  };
  for (const auto& [kind, name] : sphere_kinds) {
    ++cond_index;
    if (!wanted(name)) continue;
    OptimizerOptions o = opts;
    o.seed = derive_seed(opts.seed, cond_index);
    const SphereMin m = min_over_sphere(R, kind, o);
    ConditionRecord rec;
    rec.name = name;
    rec.value = m.value;
    rec.status = detail::decide(m.value, opts.eps, m.converged);
    rec.certified = m.certified;
    rec.witness_vector = m.witness;
    rec.sampled_min = detail::sample_min_sphere(R, ric, kind, opts.sample_check, derive_seed(o.seed, 0xabc));
    rec.sample_ok = rec.value <= rec.sampled_min + 1e-9;
    push(rec);
  }

  // Restricted Ricci family.
  const std::pair<RicKVariant, std::string> variants[] = {
      {RicKVariant::Plain, "Ric_k"}, {RicKVariant::Perp, "RicPerp_k"}, {RicKVariant::Plus, "RicPlus_k"}};
  for (const auto& [variant, stem] : variants)
    for (int k = 1; k <= n; ++k) {
      ++cond_index;
      std::ostringstream name;
      name << stem << "[" << k << "]";
      if (!wanted(name.str())) continue;
      OptimizerOptions o = opts;
      o.seed = derive_seed(opts.seed, cond_index);
      const SubspaceMin m = min_ric_k(R, k, variant, o);
      ConditionRecord rec;
      rec.name = name.str();
      rec.value = m.value;
      rec.status = detail::decide(m.value, opts.eps, m.converged);
      rec.certified = m.certified;
      rec.witness_frame = m.sigma.frame;
      rec.witness_vector = m.v;
      Rng rng(derive_seed(o.seed, 0xdef));
      double best = std::numeric_limits<double>::infinity();
      for (int t = 0; t < opts.sample_check / 10; ++t) {
        const Subspace sig{rng.stiefel(n, k)};
        Eigen::VectorXcd z = rng.unit_vec(k);
        const Eigen::VectorXcd v = sig.frame * z;
        double val = 0.0;
        switch (variant) {
          case RicKVariant::Plain: val = ric_k_form(R, sig, v); break;
          case RicKVariant::Perp: val = ric_k_perp_form(R, sig, v); break;
          case RicKVariant::Plus: val = ric_k_plus_form(R, sig, v); break;
        }
        best = std::min(best, val);
      }
      rec.sampled_min = best;
      rec.sample_ok = rec.value <= best + 1e-9;
      push(rec);
    }

  // Subspace scalar family.
  const std::pair<RicKVariant, std::string> s_variants[] = {
      {RicKVariant::Plain, "S_k"}, {RicKVariant::Perp, "SPerp_k"}, {RicKVariant::Plus, "SPlus_k"}};
  for (const auto& [variant, stem] : s_variants)
    for (int k = 1; k <= n; ++k) {
      ++cond_index;
      std::ostringstream name;
      name << stem << "[" << k << "]";
      if (!wanted(name.str())) continue;
      OptimizerOptions o = opts;
      o.seed = derive_seed(opts.seed, cond_index);
      const SKMin m = min_s_k(R, k, variant, o);
      ConditionRecord rec;
      rec.name = name.str();
      rec.value = m.value;
      rec.status = detail::decide(m.value, opts.eps, m.converged);
      rec.certified = m.certified;
      rec.witness_frame = m.sigma.frame;
      Rng rng(derive_seed(o.seed, 0xdef));
      double best = std::numeric_limits<double>::infinity();
      for (int t = 0; t < opts.sample_check / 10; ++t) {
        const Subspace sig{rng.stiefel(n, k)};
        double val = 0.0;
        switch (variant) {
          case RicKVariant::Plain: val = s_k(R, sig); break;
          case RicKVariant::Perp: val = s_k_perp(R, sig); break;
          case RicKVariant::Plus: val = s_k_plus(R, sig); break;
        }
        best = std::min(best, val);
      }
      rec.sampled_min = best;
      rec.sample_ok = rec.value <= best + 1e-9;
      push(rec);
    }

  // Full quadratic forms (exact spectra).
  const std::pair<FormKind, std::string> forms[] = {
      {FormKind::QB, "QB_min"}, {FormKind::CQB, "CQB_min"}, {FormKind::DCQB, "dCQB_min"}};
  for (const auto& [kind, name] : forms) {
    ++cond_index;
    if (!wanted(name)) continue;
    const AssembledForm form = assemble_operator(R, kind);
    auto [value, witness] = form.min_eig_witness();
    ConditionRecord rec;
    rec.name = name;
    rec.value = value;
    rec.status = detail::decide(value, opts.eps, true);
    rec.certified = true;
    rec.witness_map = witness;
    rec.sampled_min = value;  // exact
    rec.sample_ok = true;
    push(rec);
  }

  // Rank-restricted quadratic forms.
  const std::pair<FormKind, std::string> rank_forms[] = {
      {FormKind::QB, "QB_rank"}, {FormKind::CQB, "CQB_rank"}, {FormKind::DCQB, "dCQB_rank"}};
  for (const auto& [kind, stem] : rank_forms)
    for (int k = 1; k <= n; ++k) {
      ++cond_index;
      std::ostringstream name;
      name << stem << "[" << k << "]";
      if (!wanted(name.str())) continue;
      OptimizerOptions o = opts;
      o.seed = derive_seed(opts.seed, cond_index);
      const RankRestrictedMin m = rank_restricted_min(R, kind, k, o);
      ConditionRecord rec;
      rec.name = name.str();
      rec.value = m.value;
      rec.status = detail::decide(m.value, opts.eps, m.converged);
      rec.certified = !m.heuristic;
      rec.witness_map = m.witness;
      Rng rng(derive_seed(o.seed, 0xdef));
      double best = std::numeric_limits<double>::infinity();
      for (int t = 0; t < opts.sample_check / 10; ++t) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
        if (kind == FormKind::QB) {
          for (int s = 0; s < k; ++s) {
            const Eigen::VectorXcd u = rng.unit_vec(n);
            A += (rng.uniform01() < 0.5 ? 1.0 : -1.0) * u * u.adjoint();
          }
          const double tr = A.trace().real() / n;
          const double hn = std::sqrt(std::max(1e-300, A.squaredNorm() - tr * tr * n));
          best = std::min(best, qb_eval(R, A) / (hn * hn));
        } else {
          for (int s = 0; s < k; ++s) A += rng.unit_vec(n) * rng.unit_vec(n).transpose();
          A /= A.norm();
          best = std::min(best, kind == FormKind::CQB ? cqb_eval(R, A) : dcqb_eval(R, A));
        }
      }
      rec.sampled_min = best;
      rec.sample_ok = rec.value <= best + 1e-9;
      push(rec);
    }

  // BC positivity.
  for (int p = 1; p <= n; ++p) {
    ++cond_index;
    std::ostringstream name;
    name << "BC[" << p << "]";
    if (!wanted(name.str())) continue;
    OptimizerOptions o = opts;
    o.seed = derive_seed(opts.seed, cond_index);
    const BcValue m = bc_p_value(R, p, o);
    ConditionRecord rec;
    rec.name = name.str();
    rec.value = m.value;
    rec.status = detail::decide(m.value, opts.eps, m.converged);
    rec.certified = m.certified;
    rec.witness_frame = m.sigma.frame;
    Rng rng(derive_seed(o.seed, 0xdef));
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < opts.sample_check / 10; ++t) {
      const Subspace sig{rng.stiefel(n, p)};
      Eigen::MatrixXcd M(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          cplx acc(0, 0);
          for (int j = 0; j < p; ++j)
            acc += contract4(R, Eigen::VectorXcd::Unit(n, a), Eigen::VectorXcd::Unit(n, b), sig.frame.col(j),
                             sig.frame.col(j));
          M(a, b) = acc / static_cast<double>(p);
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (M + M.adjoint()));
      best = std::min(best, es.eigenvalues()(n - 1));
    }
    rec.sampled_min = best;
    rec.sample_ok = rec.value <= best + 1e-9;
    push(rec);
  }

  if (condition_filter.empty()) rep.audit = audit_implications(R, opts);
  return rep;
}

}  // namespace kcurv
