#pragma once

// Hermitian curvature quadratic forms on tangent maps: the quadratic
// orthogonal bisectional form on Hermitian endomorphisms, the cross form on
// maps conj-tangent -> tangent and its dual, the symmetric curvature action Q,
// their assembled matrices and spectra, and rank-restricted minimization.
//
// Conventions. A map is an n x n coefficient array A:
//   Herm        A: T' -> T',  A(E_b) = sum_i A(i,b) E_i,  A = A^H
//   AntiToHolo  A: T''-> T',  A(conj E_b) = sum_i A(i,b) E_i
//   HoloToAnti  A: T' -> T'', A(E_b) = sum_t A(t,b) conj(E_t)
// The QB form is normalized so that for diagonal A = diag(a) in a unitary
// frame, qb_eval = sum_{ij} R(i,i,j,j) (a_i - a_j)^2.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "optimize.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace kcurv {

enum class MapKind { Herm, AntiToHolo, HoloToAnti };
enum class FormKind { QB, CQB, DCQB };

inline std::string form_name(FormKind k) {
  switch (k) {
    case FormKind::QB: return "QB";
    case FormKind::CQB: return "CQB";
    case FormKind::DCQB: return "dCQB";
  }
  return "?";
}

struct TangentMap {
  MapKind kind = MapKind::Herm;
  Eigen::MatrixXcd coeffs;

  // Numerical rank: singular values above 1e-8 x largest.
  int rank() const {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(coeffs);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s(i) > 1e-8 * s(0)) ++r;
    return r;
  }
};

namespace detail {

inline void check_square(const CurvatureTensor& R, const Eigen::MatrixXcd& A, const char* who) {
  if (A.rows() != R.n || A.cols() != R.n) {
    std::ostringstream os;
    os << who << ": map must be " << R.n << " x " << R.n;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace detail

// QB(A) = 2 [ sum Ric(i,j) (A A^H)_{ij} - sum R(a,b,k,l) A(k,b) conj(A(l,a)) ]
// for Hermitian A; vanishes on multiples of the identity.
inline double qb_eval(const CurvatureTensor& R, const Eigen::MatrixXcd& A) {
  detail::check_square(R, A, "qb_eval");
  const double herm_dev = (A - A.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-8 * (1.0 + A.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("qb_eval: map is not Hermitian");
  const int n = R.n;
  const Eigen::MatrixXcd ric = ricci(R);
  const Eigen::MatrixXcd AA = A * A.adjoint();
  cplx t1(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t1 += AA(i, j) * ric(i, j);
  cplx t2(0, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t2 += R(a, b, k, l) * A(k, b) * std::conj(A(l, a));
  return 2.0 * (t1 - t2).real();
}

// CQB(A) = sum Ric(i,j) A(i,b) conj(A(j,b)) - sum R(j,i,t,b) A(j,t) conj(A(i,b)).
inline double cqb_eval(const CurvatureTensor& R, const Eigen::MatrixXcd& A) {
  detail::check_square(R, A, "cqb_eval");
  const int n = R.n;
  const Eigen::MatrixXcd ric = ricci(R);
  cplx t1(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int b = 0; b < n; ++b) t1 += ric(i, j) * A(i, b) * std::conj(A(j, b));
  cplx t2(0, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < n; ++t)
        for (int b = 0; b < n; ++b) t2 += R(j, i, t, b) * A(j, t) * std::conj(A(i, b));
  return (t1 - t2).real();
}

// dCQB(A) = sum Ric(s,t) conj(A(s,a)) A(t,a) + sum R(a,b,s,t) conj(A(s,a)) A(t,b).
inline double dcqb_eval(const CurvatureTensor& R, const Eigen::MatrixXcd& A) {
  detail::check_square(R, A, "dcqb_eval");
  const int n = R.n;
  const Eigen::MatrixXcd ric = ricci(R);
  cplx t1(0, 0);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      for (int a = 0; a < n; ++a) t1 += ric(s, t) * std::conj(A(s, a)) * A(t, a);
  cplx t2(0, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) t2 += R(a, b, s, t) * std::conj(A(s, a)) * A(t, b);
  return (t1 + t2).real();
}

inline double eval_form(const CurvatureTensor& R, FormKind kind, const Eigen::MatrixXcd& A) {
  switch (kind) {
    case FormKind::QB: return qb_eval(R, A);
    case FormKind::CQB: return cqb_eval(R, A);
    case FormKind::DCQB: return dcqb_eval(R, A);
  }
  throw std::logic_error("eval_form: bad kind");
}

// A = A1 + A2 with A1 = (A + A^T)/2 symmetric and A2 = (A - A^T)/2 skew,
// the split preserved by congruence frame changes.
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> sym_skew_split(const Eigen::MatrixXcd& A) {
  Eigen::MatrixXcd a1 = 0.5 * (A + A.transpose());
  Eigen::MatrixXcd a2 = 0.5 * (A - A.transpose());
  return {a1, a2};
}

// B = Omega + Omega^H, C = i (Omega - Omega^H); both Hermitian and
// Omega = (B - i C)/2 exactly.
inline std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> hermitian_decomposition(const Eigen::MatrixXcd& Omega) {
  Eigen::MatrixXcd B = Omega + Omega.adjoint();
  Eigen::MatrixXcd C = cplx(0, 1) * (Omega - Omega.adjoint());
  return {B, C};
}

struct FormOnFormResult {
  double value = 0.0;
  int rank = 0;
};

inline FormOnFormResult qb_on_form(const CurvatureTensor& R, const Eigen::MatrixXcd& Omega) {
  FormOnFormResult res;
  res.value = qb_eval(R, Omega);
  res.rank = TangentMap{MapKind::Herm, Omega}.rank();
  return res;
}

namespace detail {

// Orthonormal basis (Frobenius) of Hermitian n x n matrices with the identity
// direction excluded: n-1 traceless diagonal elements plus the off-diagonal
// real/imaginary pairs.
inline std::vector<Eigen::MatrixXcd> traceless_hermitian_basis(int n) {
  std::vector<Eigen::MatrixXcd> basis;
  basis.reserve(n * n - 1);
  for (int m = 1; m < n; ++m) {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(m) * (m + 1));
    for (int i = 0; i < m; ++i) D(i, i) = s;
    D(m, m) = -static_cast<double>(m) * s;
    basis.push_back(D);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
      S(a, b) = M_SQRT1_2;
      S(b, a) = M_SQRT1_2;
      basis.push_back(S);
      Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
      T(a, b) = cplx(0, M_SQRT1_2);
      T(b, a) = cplx(0, -M_SQRT1_2);
      basis.push_back(T);
    }
  return basis;
}

// Symmetric bilinear companion of qb_eval on Hermitian matrices.
inline double qb_bilinear(const CurvatureTensor& R, const Eigen::MatrixXcd& ric, const Eigen::MatrixXcd& A,
                          const Eigen::MatrixXcd& B) {
  const int n = R.n;
  const Eigen::MatrixXcd AB = A * B + B * A;
  cplx t1(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t1 += AB(i, j) * ric(i, j);
  cplx t2(0, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          t2 += R(a, b, k, l) * (A(k, b) * std::conj(B(l, a)) + B(k, b) * std::conj(A(l, a)));
  return (t1 - t2).real();
}

// Frobenius representer of the QB bilinear form: qb_bilinear(A, .) = <Gamma, .>.
inline Eigen::MatrixXcd qb_action(const CurvatureTensor& R, const Eigen::MatrixXcd& ric,
                                  const Eigen::MatrixXcd& A) {
  const int n = R.n;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      cplx acc(0, 0);
      for (int i = 0; i < n; ++i) acc += ric(i, q) * A(i, p);
      for (int j = 0; j < n; ++j) acc += ric(p, j) * A(q, j);
      for (int k = 0; k < n; ++k)
        for (int b = 0; b < n; ++b) acc -= R(p, b, k, q) * A(k, b);
      for (int a = 0; a < n; ++a)
        for (int l = 0; l < n; ++l) acc -= R(a, q, p, l) * A(a, l);
      c(p, q) = acc;
    }
  return c.conjugate();  // representer under <X,Y> = Re tr(X^H Y)
}

inline int flat(int i, int b, int n) { return i * n + b; }

}  // namespace detail

// Explicit matrix of a curvature quadratic form. QB lives on the real space
// of traceless Hermitian matrices (dimension n^2 - 1, basis stored); the
// cross forms are complex Hermitian on flattened coefficients (dimension n^2).
struct AssembledForm {
  FormKind kind = FormKind::QB;
  int n = 0;
  Eigen::MatrixXcd cmat;                     // CQB/DCQB
  Eigen::MatrixXd rmat;                      // QB
  std::vector<Eigen::MatrixXcd> basis;       // QB basis matrices

  int dim() const { return kind == FormKind::QB ? static_cast<int>(rmat.rows()) : static_cast<int>(cmat.rows()); }

  double hermitian_residual() const {
    if (kind == FormKind::QB) return (rmat - rmat.transpose()).cwiseAbs().maxCoeff();
    return (cmat - cmat.adjoint()).cwiseAbs().maxCoeff();
  }

  // Quadratic evaluation through the assembled matrix; for QB the argument is
  // projected onto the traceless basis first (trace shifts do not change QB).
  double eval(const Eigen::MatrixXcd& A) const {
    if (kind == FormKind::QB) {
      Eigen::VectorXd x(basis.size());
      for (size_t m = 0; m < basis.size(); ++m) {
        cplx ip(0, 0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) ip += std::conj(basis[m](i, j)) * A(i, j);
        x(static_cast<int>(m)) = ip.real();
      }
      return x.dot(rmat * x);
    }
    Eigen::VectorXcd a(n * n);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b) a(detail::flat(i, b, n)) = A(i, b);
    return a.dot(cmat * a).real();
  }

  Eigen::VectorXd eigenvalues() const {
    if (kind == FormKind::QB) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rmat);
      return es.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cmat);
    return es.eigenvalues();
  }

  // Smallest eigenvalue and a unit-norm minimizing map.
  std::pair<double, Eigen::MatrixXcd> min_eig_witness() const {
    if (kind == FormKind::QB) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rmat);
      const Eigen::VectorXd v = es.eigenvectors().col(0);
      Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
      for (size_t m = 0; m < basis.size(); ++m) A += v(static_cast<int>(m)) * basis[m];
      return {es.eigenvalues()(0), A};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cmat);
    const Eigen::VectorXcd v = es.eigenvectors().col(0);
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b) A(i, b) = v(detail::flat(i, b, n));
    return {es.eigenvalues()(0), A};
  }
};

inline AssembledForm assemble_operator(const CurvatureTensor& R, FormKind kind) {
  const int n = R.n;
  const Eigen::MatrixXcd ric = ricci(R);
  AssembledForm form;
  form.kind = kind;
  form.n = n;
  if (kind == FormKind::QB) {
    form.basis = detail::traceless_hermitian_basis(n);
    const int d = static_cast<int>(form.basis.size());
    form.rmat.resize(d, d);
    for (int m = 0; m < d; ++m)
      for (int mp = m; mp < d; ++mp) {
        const double v = detail::qb_bilinear(R, ric, form.basis[m], form.basis[mp]);
        form.rmat(m, mp) = v;
        form.rmat(mp, m) = v;
      }
    return form;
  }
  const int N = n * n;
  form.cmat = Eigen::MatrixXcd::Zero(N, N);
  if (kind == FormKind::CQB) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int b = 0; b < n; ++b) form.cmat(detail::flat(j, b, n), detail::flat(i, b, n)) += ric(i, j);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        for (int j = 0; j < n; ++j)
          for (int t = 0; t < n; ++t) form.cmat(detail::flat(i, b, n), detail::flat(j, t, n)) -= R(j, i, t, b);
  } else {
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        for (int a = 0; a < n; ++a) form.cmat(detail::flat(s, a, n), detail::flat(t, a, n)) += ric(s, t);
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < n; ++a)
        for (int t = 0; t < n; ++t)
          for (int b = 0; b < n; ++b) form.cmat(detail::flat(s, a, n), detail::flat(t, b, n)) += R(a, b, s, t);
  }
  return form;
}

// Sign of this eigenvalue decides full positivity of the form exactly.
inline double min_eig(const CurvatureTensor& R, FormKind kind) {
  return assemble_operator(R, kind).eigenvalues()(0);
}

struct OperatorSpectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  double nu1() const { return eigenvalues(0); }
  double nu() const { return eigenvalues(eigenvalues.size() - 1); }
};

// Spectrum of the symmetric curvature action Q(A, conj A) = sum R(i,j,k,l)
// A(i,k) conj(A(j,l)) on the n(n+1)/2-dimensional space of symmetric tensors.
inline OperatorSpectrum q_operator_spectrum(const CurvatureTensor& R) {
  const int n = R.n;
  std::vector<Eigen::MatrixXcd> basis;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
    B(i, i) = 1.0;
    basis.push_back(B);
  }
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
      B(i, k) = M_SQRT1_2;
      B(k, i) = M_SQRT1_2;
      basis.push_back(B);
    }
  const int d = static_cast<int>(basis.size());
  Eigen::MatrixXcd Q(d, d);
  for (int row = 0; row < d; ++row)
    for (int col = 0; col < d; ++col) {
      cplx acc(0, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) acc += R(i, j, k, l) * basis[col](i, k) * std::conj(basis[row](j, l));
      Q(row, col) = acc;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Q);
  return OperatorSpectrum{es.eigenvalues()};
}

struct KeBounds {
  double cqb_margin = 0.0;   // lambda - nu
  double dcqb_margin = 0.0;  // lambda + nu1
  double hq_margin = 0.0;    // lambda + (q+1)/(2q) nu1
};

// Einstein sufficient margins: positivity of each certifies positivity of the
// corresponding form for a Kahler-Einstein tensor with constant lambda.
inline KeBounds ke_bounds(double lambda, const OperatorSpectrum& spec, int q) {
  if (q < 1) throw std::invalid_argument("ke_bounds: q >= 1 required");
  KeBounds b;
  b.cqb_margin = lambda - spec.nu();
  b.dcqb_margin = lambda + spec.nu1();
  b.hq_margin = lambda + (static_cast<double>(q + 1) / (2.0 * q)) * spec.nu1();
  return b;
}

struct EinsteinResult {
  std::optional<double> lambda;
  double deviation = 0.0;
};

// lambda with Ric = lambda I, if the deviation permits.
inline EinsteinResult einstein_constant(const CurvatureTensor& R, double tol = 1e-8) {
  const int n = R.n;
  const Eigen::MatrixXcd ric = ricci(R);
  const double lam = ric.trace().real() / n;
  EinsteinResult res;
  res.deviation = (ric - lam * Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (res.deviation <= tol) res.lambda = lam;
  return res;
}

struct RankRestrictedMin {
  double value = 0.0;
  Eigen::MatrixXcd witness;
  bool heuristic = true;
  bool converged = false;
};

namespace detail {

// Exact alternating eigensteps for rank-one maps A = x y^T through the
// assembled Hermitian matrix: each half-step solves a smallest-eigenvector
// problem, so the objective is monotone and convergence is fast.
inline RankRestrictedMin rank_one_alternating(const AssembledForm& form, const OptimizerOptions& opts) {
  const int n = form.n;
  RankRestrictedMin best;
  best.value = std::numeric_limits<double>::infinity();
  // The landscape over (x, y) pairs has few but genuinely separated basins;
  // half the restarts start tied (y = x), the family realizing the
  // Ricci-type functionals.
  const int restarts = std::max(4 * opts.restarts, 48);
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(opts.seed, 7000 + static_cast<std::uint64_t>(r)));
    Eigen::VectorXcd x = rng.unit_vec(n);
    Eigen::VectorXcd y = (r % 2 == 0) ? x : rng.unit_vec(n);
    double value = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      Eigen::MatrixXcd My(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          cplx acc(0, 0);
          for (int b = 0; b < n; ++b)
            for (int t = 0; t < n; ++t) acc += std::conj(y(b)) * form.cmat(flat(i, b, n), flat(j, t, n)) * y(t);
          My(i, j) = acc;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esx(My);
      x = esx.eigenvectors().col(0);
      Eigen::MatrixXcd Nx(n, n);
      for (int b = 0; b < n; ++b)
        for (int t = 0; t < n; ++t) {
          cplx acc(0, 0);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) acc += std::conj(x(i)) * form.cmat(flat(i, b, n), flat(j, t, n)) * x(j);
          Nx(b, t) = acc;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esy(Nx);
      y = esy.eigenvectors().col(0);
      const double v = esy.eigenvalues()(0);
      if (std::abs(value - v) <= 1e-14 * (1.0 + std::abs(v))) {
        value = v;
        converged = true;
        break;
      }
      value = v;
    }
    if (value < best.value) {
      best.value = value;
      Eigen::MatrixXcd A(n, n);
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b) A(i, b) = x(i) * y(b);
      best.witness = A;
      best.converged = converged;
    }
  }
  best.heuristic = true;
  return best;
}

inline Eigen::MatrixXcd truncate_rank(const Eigen::MatrixXcd& A, int k) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const int keep = std::min<int>(k, static_cast<int>(s.size()));
  return svd.matrixU().leftCols(keep) * s.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
}

// Keeps the k spectrally largest directions of a Hermitian matrix.
inline Eigen::MatrixXcd truncate_rank_hermitian(const Eigen::MatrixXcd& A, int k) {
  const int n = static_cast<int>(A.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (A + A.adjoint()));
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::abs(es.eigenvalues()(a)) > std::abs(es.eigenvalues()(b)); });
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m < std::min(k, n); ++m) {
    const int i = order[m];
    out += es.eigenvalues()(i) * es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return out;
}

inline RankRestrictedMin rank_projected_gradient_cross(const CurvatureTensor& R, const AssembledForm& form, int k,
                                                       const OptimizerOptions& opts,
                                                       const std::vector<Eigen::MatrixXcd>& warm_starts) {
  const int n = form.n;
  const int N = n * n;
  RankRestrictedMin best;
  best.value = std::numeric_limits<double>::infinity();
  auto objective = [&](const Eigen::VectorXcd& a) { return a.dot(form.cmat * a).real(); };
  const int total = opts.restarts + static_cast<int>(warm_starts.size());
  for (int r = 0; r < total; ++r) {
    Eigen::MatrixXcd A;
    if (r < static_cast<int>(warm_starts.size())) {
      A = truncate_rank(warm_starts[r], k);
    } else {
      Rng rng(derive_seed(opts.seed, 9000 + static_cast<std::uint64_t>(r)));
      A = Eigen::MatrixXcd::Zero(n, n);
      for (int s = 0; s < k; ++s) A += rng.unit_vec(n) * rng.unit_vec(n).transpose();
    }
    if (A.norm() < 1e-14) continue;
    A /= A.norm();
    Eigen::VectorXcd a(N);
    auto pack = [&](const Eigen::MatrixXcd& M, Eigen::VectorXcd& v) {
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b) v(flat(i, b, n)) = M(i, b);
    };
    auto unpack = [&](const Eigen::VectorXcd& v) {
      Eigen::MatrixXcd M(n, n);
      for (int i = 0; i < n; ++i)
        for (int b = 0; b < n; ++b) M(i, b) = v(flat(i, b, n));
      return M;
    };
    pack(A, a);
    double f = objective(a);
    double step = 0.5;
    bool converged = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      const Eigen::VectorXcd grad = form.cmat * a - f * a;
      const double gn = grad.norm();
      if (gn < opts.grad_tol) {
        converged = true;
        break;
      }
      bool accepted = false;
      while (step > opts.step_tol) {
        Eigen::MatrixXcd cand = unpack(a - step * grad);
        cand = truncate_rank(cand, k);
        const double nn = cand.norm();
        if (nn < 1e-14) break;
        cand /= nn;
        Eigen::VectorXcd ac(N);
        pack(cand, ac);
        const double fc = objective(ac);
        if (fc < f - 1e-12 * std::abs(f)) {
          a = ac;
          A = cand;
          f = fc;
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
    if (f < best.value) {
      best.value = f;
      best.witness = A;
      best.converged = converged;
    }
  }
  best.heuristic = true;
  return best;
}

inline RankRestrictedMin rank_projected_gradient_qb(const CurvatureTensor& R, int k, const OptimizerOptions& opts,
                                                    const std::vector<Eigen::MatrixXcd>& warm_starts) {
  const int n = R.n;
  const Eigen::MatrixXcd ric = ricci(R);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  RankRestrictedMin best;
  best.value = std::numeric_limits<double>::infinity();
  auto traceless_sq = [&](const Eigen::MatrixXcd& A) {
    const double tr = A.trace().real();
    return std::max(1e-300, A.squaredNorm() - tr * tr / n);
  };
  auto objective = [&](const Eigen::MatrixXcd& A) { return qb_eval(R, A) / traceless_sq(A); };
  const int total = opts.restarts + static_cast<int>(warm_starts.size());
  for (int r = 0; r < total; ++r) {
    Eigen::MatrixXcd A;
    if (r < static_cast<int>(warm_starts.size())) {
      A = truncate_rank_hermitian(0.5 * (warm_starts[r] + warm_starts[r].adjoint()), k);
    } else {
      Rng rng(derive_seed(opts.seed, 11000 + static_cast<std::uint64_t>(r)));
      A = Eigen::MatrixXcd::Zero(n, n);
      for (int s = 0; s < k; ++s) {
        const Eigen::VectorXcd u = rng.unit_vec(n);
        A += (rng.uniform01() < 0.5 ? 1.0 : -1.0) * u * u.adjoint();
      }
    }
    if (A.norm() < 1e-14) continue;
    A /= A.norm();
    if (traceless_sq(A) < 1e-10) continue;
    double f = objective(A);
    double step = 0.5;
    bool converged = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      const double h = traceless_sq(A);
      const Eigen::MatrixXcd Ahat = A - (A.trace() / static_cast<double>(n)) * id;
      const Eigen::MatrixXcd grad = (2.0 / h) * (qb_action(R, ric, A) - f * Ahat);
      const double gn = grad.norm();
      if (gn < opts.grad_tol) {
        converged = true;
        break;
      }
      bool accepted = false;
      while (step > opts.step_tol) {
        Eigen::MatrixXcd cand = A - step * grad;
        cand = 0.5 * (cand + cand.adjoint());
        cand = truncate_rank_hermitian(cand, k);
        const double nn = cand.norm();
        if (nn < 1e-14 || traceless_sq(cand / nn) < 1e-12) {
          step *= 0.5;
          continue;
        }
        cand /= nn;
        const double fc = objective(cand);
        if (fc < f - 1e-12 * std::abs(f)) {
          A = cand;
          f = fc;
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
    if (f < best.value) {
      best.value = f;
      best.witness = A;
      best.converged = converged;
    }
  }
  best.heuristic = true;
  return best;
}

}  // namespace detail

// Approximate minimum of the form over unit-norm maps of rank <= k (for QB:
// Hermitian with unit-norm traceless part). k = n reduces to the exact
// smallest eigenvalue; rank-one cross forms use exact alternating eigensteps.
inline RankRestrictedMin rank_restricted_min(const CurvatureTensor& R, FormKind kind, int k,
                                             const OptimizerOptions& opts = {}) {
  const int n = R.n;
  if (k < 1 || k > n) throw std::invalid_argument("rank_restricted_min: need 1 <= k <= n");
  if (k == n) {
    const AssembledForm form = assemble_operator(R, kind);
    auto [value, witness] = form.min_eig_witness();
    RankRestrictedMin res;
    res.value = value;
    res.witness = witness;
    res.heuristic = false;
    res.converged = true;
    return res;
  }
  if (kind == FormKind::QB) {
    std::vector<Eigen::MatrixXcd> warm;
    const AssembledForm form = assemble_operator(R, kind);
    warm.push_back(form.min_eig_witness().second);
    if (k > 1) {
      const RankRestrictedMin one = detail::rank_projected_gradient_qb(R, 1, opts, warm);
      warm.push_back(one.witness);
    }
    return detail::rank_projected_gradient_qb(R, k, opts, warm);
  }
  const AssembledForm form = assemble_operator(R, kind);
  if (k == 1) return detail::rank_one_alternating(form, opts);
  std::vector<Eigen::MatrixXcd> warm;
  warm.push_back(form.min_eig_witness().second);
  warm.push_back(detail::rank_one_alternating(form, opts).witness);
  return detail::rank_projected_gradient_cross(R, form, k, opts, warm);
}

}  // namespace kcurv
