#pragma once

// Deterministic random sources for sampling, restarts and test generators.
// Everything is seeded explicitly; identical seeds give identical streams.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>

namespace kcurv {

using cplx = std::complex<double>;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-stream seed derivation (shards, restarts, conditions).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on (0,1]; used by Box-Muller so log() never sees zero.
  double uniform01() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = uniform01();
    double v = uniform01();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 2.0 * M_PI * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cplx cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return cplx(re, im) * M_SQRT1_2;
  }

  Eigen::VectorXcd cgaussian_vec(int n) {
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i) v(i) = cgaussian();
    return v;
  }

  Eigen::MatrixXcd cgaussian_mat(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r < rows; ++r) m(r, c) = cgaussian();
    return m;
  }

  // Uniform point on the unit sphere of C^n.
  Eigen::VectorXcd unit_vec(int n) {
    Eigen::VectorXcd v = cgaussian_vec(n);
    double nv = v.norm();
    while (nv < 1e-12) {
      v = cgaussian_vec(n);
      nv = v.norm();
    }
    return v / nv;
  }

  // Haar-ish unitary: QR of a Gaussian matrix with the R-diagonal phase fixed
  // so the factorization (hence the sample) is unique.
  Eigen::MatrixXcd unitary(int n) { return stiefel(n, n); }

  // Orthonormal k-frame in C^n, unitary-invariant distribution.
  Eigen::MatrixXcd stiefel(int n, int k) {
    Eigen::MatrixXcd g = cgaussian_mat(n, k);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
    Eigen::MatrixXcd r = q.adjoint() * g;
    for (int j = 0; j < k; ++j) {
      cplx d = r(j, j);
      double a = std::abs(d);
      if (a > 1e-300) q.col(j) *= d / a;
    }
    return q;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace kcurv
