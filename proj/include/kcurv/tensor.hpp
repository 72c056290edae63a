#pragma once

// Pointwise Kahler curvature tensors in a unitary frame, their symmetry
// validation, frame changes and elementary contractions.
//
// Storage convention: entry (i,j,k,l) means R(E_i, conj(E_j), E_k, conj(E_l))
// for a fixed unitary frame, so the metric is the identity. Invariants:
//   R[i][j][k][l] == R[k][j][i][l] == R[i][l][k][j]        (Kahler symmetry)
//   conj(R[i][j][k][l]) == R[j][i][l][k]                   (Hermitian reality)

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kcurv {

using cplx = std::complex<double>;

struct CurvatureTensor {
  int n = 0;
  std::vector<cplx> e;  // dense, size n^4, index ((i*n+j)*n+k)*n+l

  CurvatureTensor() = default;
  explicit CurvatureTensor(int dim) : n(dim), e(static_cast<size_t>(dim) * dim * dim * dim, cplx(0, 0)) {
    if (dim < 1) throw std::invalid_argument("CurvatureTensor: dimension must be >= 1");
  }

  cplx& operator()(int i, int j, int k, int l) {
    return e[static_cast<size_t>(((i * n + j) * n + k)) * n + l];
  }
  const cplx& operator()(int i, int j, int k, int l) const {
    return e[static_cast<size_t>(((i * n + j) * n + k)) * n + l];
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& z : e) m = std::max(m, std::abs(z));
    return m;
  }
};

struct ValidationReport {
  double symmetry_residual = 0.0;
  double hermitian_residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

constexpr double kDefaultValidationTol = 1e-9;

// Scans all index quadruples against the two invariant families.
// Non-finite entries are rejected with their location.
inline ValidationReport validate(const CurvatureTensor& R, double tol = kDefaultValidationTol) {
  const int n = R.n;
  ValidationReport rep;
  rep.tol = tol;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const cplx v = R(i, j, k, l);
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            std::ostringstream os;
            os << "non-finite entry at R[" << i << "][" << j << "][" << k << "][" << l << "]";
            throw std::invalid_argument(os.str());
          }
          rep.symmetry_residual = std::max(rep.symmetry_residual, std::abs(v - R(k, j, i, l)));
          rep.symmetry_residual = std::max(rep.symmetry_residual, std::abs(v - R(i, l, k, j)));
          rep.hermitian_residual = std::max(rep.hermitian_residual, std::abs(std::conj(v) - R(j, i, l, k)));
        }
  rep.pass = rep.symmetry_residual <= tol && rep.hermitian_residual <= tol;
  return rep;
}

namespace detail {

// Contraction along one slot with a matrix of frame vectors (columns).
// conjugate=true applies conj(F) (for the barred slots).
inline std::vector<cplx> mode_product(const std::vector<cplx>& t, int n_in, int dims[4], int slot,
                                      const Eigen::MatrixXcd& F, bool conjugate) {
  const int m = static_cast<int>(F.cols());
  int out_dims[4] = {dims[0], dims[1], dims[2], dims[3]};
  out_dims[slot] = m;
  std::vector<cplx> out(static_cast<size_t>(out_dims[0]) * out_dims[1] * out_dims[2] * out_dims[3], cplx(0, 0));
  auto idx = [](const int d[4], int a, int b, int c, int dd) {
    return static_cast<size_t>(((a * d[1] + b) * d[2] + c)) * d[3] + dd;
  };
  int id[4];
  for (id[0] = 0; id[0] < out_dims[0]; ++id[0])
    for (id[1] = 0; id[1] < out_dims[1]; ++id[1])
      for (id[2] = 0; id[2] < out_dims[2]; ++id[2])
        for (id[3] = 0; id[3] < out_dims[3]; ++id[3]) {
          cplx acc(0, 0);
          int src[4] = {id[0], id[1], id[2], id[3]};
          for (int s = 0; s < n_in; ++s) {
            src[slot] = s;
            cplx f = F(s, id[slot]);
            if (conjugate) f = std::conj(f);
            acc += f * t[idx(dims, src[0], src[1], src[2], src[3])];
          }
          out[idx(out_dims, id[0], id[1], id[2], id[3])] = acc;
        }
  return out;
}

inline std::vector<cplx> contract_all_slots(const CurvatureTensor& R, const Eigen::MatrixXcd& F) {
  const int n = R.n;
  const int m = static_cast<int>(F.cols());
  int d0[4] = {n, n, n, n};
  std::vector<cplx> t = mode_product(R.e, n, d0, 0, F, false);
  int d1[4] = {m, n, n, n};
  t = mode_product(t, n, d1, 1, F, true);
  int d2[4] = {m, m, n, n};
  t = mode_product(t, n, d2, 2, F, false);
  int d3[4] = {m, m, m, n};
  t = mode_product(t, n, d3, 3, F, true);
  return t;
}

// Wirtinger derivatives of B(x,y) = sum R(i,j,k,l) x_i conj(x_j) y_k conj(y_l):
// bis_grad_x[m] = dB/dconj(x_m), bis_grad_y[m] = dB/dconj(y_m).
inline Eigen::VectorXcd bis_grad_x(const CurvatureTensor& R, const Eigen::VectorXcd& x,
                                   const Eigen::VectorXcd& y) {
  const int n = R.n;
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
  for (int m = 0; m < n; ++m) {
    cplx acc(0, 0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const cplx xy = x(i) * y(k);
        if (xy == cplx(0, 0)) continue;
        for (int l = 0; l < n; ++l) acc += xy * std::conj(y(l)) * R(i, m, k, l);
      }
    g(m) = acc;
  }
  return g;
}

inline Eigen::VectorXcd bis_grad_y(const CurvatureTensor& R, const Eigen::VectorXcd& x,
                                   const Eigen::VectorXcd& y) {
  const int n = R.n;
  Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n);
  for (int m = 0; m < n; ++m) {
    cplx acc(0, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const cplx xx = x(i) * std::conj(x(j));
        if (xx == cplx(0, 0)) continue;
        for (int k = 0; k < n; ++k) acc += xx * y(k) * R(i, j, k, m);
      }
    g(m) = acc;
  }
  return g;
}

}  // namespace detail

// R'(a,b,c,d) = sum U_{ai} conj(U_{bj}) U_{ck} conj(U_{dl}) R(i,j,k,l).
inline CurvatureTensor change_frame(const CurvatureTensor& R, const Eigen::MatrixXcd& U,
                                    double tol = kDefaultValidationTol) {
  if (U.rows() != R.n || U.cols() != R.n) throw std::invalid_argument("change_frame: U must be n x n");
  const double dev = (U.adjoint() * U - Eigen::MatrixXcd::Identity(R.n, R.n)).cwiseAbs().maxCoeff();
  if (dev > std::max(tol, 1e-9)) {
    std::ostringstream os;
    os << "change_frame: U not unitary, |U*U - I| = " << dev;
    throw std::invalid_argument(os.str());
  }
  CurvatureTensor out(R.n);
  out.e = detail::contract_all_slots(R, U.transpose());
  return out;
}

// B(X,Y) = R(X, conj(X), Y, conj(Y)); real for a valid tensor.
inline cplx contract4(const CurvatureTensor& R, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                      const Eigen::VectorXcd& c, const Eigen::VectorXcd& d) {
  const int n = R.n;
  cplx acc(0, 0);
  for (int i = 0; i < n; ++i) {
    if (a(i) == cplx(0, 0)) continue;
    for (int j = 0; j < n; ++j) {
      const cplx ab = a(i) * std::conj(b(j));
      if (ab == cplx(0, 0)) continue;
      for (int k = 0; k < n; ++k) {
        if (c(k) == cplx(0, 0)) continue;
        const cplx abc = ab * c(k);
        for (int l = 0; l < n; ++l) acc += abc * std::conj(d(l)) * R(i, j, k, l);
      }
    }
  }
  return acc;
}

inline double bisectional(const CurvatureTensor& R, const Eigen::VectorXcd& X, const Eigen::VectorXcd& Y) {
  const cplx v = contract4(R, X, X, Y, Y);
  const double scale = std::max(1.0, std::abs(v));
  if (std::abs(v.imag()) > 1e-7 * scale) {
    std::ostringstream os;
    os << "bisectional: non-real value (imag = " << v.imag() << "), tensor violates Hermitian symmetry";
    throw std::invalid_argument(os.str());
  }
  return v.real();
}

// H(X) = B(X/|X|, X/|X|).
inline double holo_sectional(const CurvatureTensor& R, const Eigen::VectorXcd& X) {
  const double nx = X.norm();
  if (nx < 1e-14) throw std::domain_error("holo_sectional: zero vector");
  const Eigen::VectorXcd Xh = X / nx;
  return bisectional(R, Xh, Xh);
}

// Ric_{ij} = sum_k R(i,j,k,k); Hermitian with trace = scalar curvature.
inline Eigen::MatrixXcd ricci(const CurvatureTensor& R) {
  const int n = R.n;
  Eigen::MatrixXcd ric = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx acc(0, 0);
      for (int k = 0; k < n; ++k) acc += R(i, j, k, k);
      ric(i, j) = acc;
    }
  return ric;
}

inline double scalar_curvature(const CurvatureTensor& R) {
  const int n = R.n;
  cplx acc(0, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) acc += R(i, i, k, k);
  return acc.real();
}

// Evaluation of a Hermitian coefficient array in the tensor slot convention:
// sum M(i,j) X_i conj(X_j) (the first index is the unbarred slot). Note this
// is the form at conj(X) in the usual matrix sense, so minimizers over X are
// conjugated eigenvectors of M.
inline double hermitian_pairing(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& X) {
  cplx acc(0, 0);
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) acc += M(i, j) * X(i) * std::conj(X(j));
  return acc.real();
}

// An orthonormal k-frame spanning a holomorphic subspace of C^n.
struct Subspace {
  Eigen::MatrixXcd frame;  // n x k, columns orthonormal

  int n() const { return static_cast<int>(frame.rows()); }
  int k() const { return static_cast<int>(frame.cols()); }

  static Subspace from_frame(const Eigen::MatrixXcd& F, double tol = kDefaultValidationTol) {
    const int k = static_cast<int>(F.cols());
    if (k < 1 || k > F.rows()) throw std::invalid_argument("Subspace: need 1 <= k <= n");
    const double dev = (F.adjoint() * F - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (dev > std::max(tol, 1e-9)) {
      std::ostringstream os;
      os << "Subspace: frame not orthonormal, deviation " << dev;
      throw std::invalid_argument(os.str());
    }
    return Subspace{F};
  }

  // Orthonormalizes the columns (QR with positive-real diagonal).
  static Subspace span_of(const Eigen::MatrixXcd& cols) {
    const int n = static_cast<int>(cols.rows());
    const int k = static_cast<int>(cols.cols());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(cols);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
    Eigen::MatrixXcd r = q.adjoint() * cols;
    for (int j = 0; j < k; ++j) {
      if (std::abs(r(j, j)) < 1e-12) throw std::invalid_argument("Subspace::span_of: rank-deficient columns");
      q.col(j) *= r(j, j) / std::abs(r(j, j));
    }
    return Subspace{q};
  }

  // Projection residual of v onto the subspace, relative to |v|.
  double projection_residual(const Eigen::VectorXcd& v) const {
    const double nv = v.norm();
    if (nv < 1e-14) return 0.0;
    return (v - frame * (frame.adjoint() * v)).norm() / nv;
  }
};

// Restriction of R to the subspace, expressed in the subspace's own frame.
inline CurvatureTensor restrict_tensor(const CurvatureTensor& R, const Subspace& sigma) {
  if (sigma.n() != R.n) throw std::invalid_argument("restrict_tensor: dimension mismatch");
  CurvatureTensor out(sigma.k());
  out.e = detail::contract_all_slots(R, sigma.frame);
  return out;
}

}  // namespace kcurv
