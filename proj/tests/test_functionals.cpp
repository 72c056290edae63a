#include <catch2/catch.hpp>

#include "kcurv/functionals.hpp"
#include "kcurv/models.hpp"
#include "oracles.hpp"

using namespace kcurv;

TEST_CASE("orthogonal and augmented Ricci on models") {
  Rng rng(2);
  for (int n : {2, 4}) {
    const double c = 2.0;
    const CurvatureTensor R = space_form(n, c);
    const Eigen::VectorXcd X = 1.7 * rng.unit_vec(n);  // normalization happens inside
    CHECK(ric_perp(R, X) == Approx(c * (n - 1) / 2.0).margin(1e-12));
    CHECK(ric_plus(R, X) == Approx(c * (n + 3) / 2.0).margin(1e-12));
  }
  const CurvatureTensor P = product_tensor(space_form(1, 2.0), space_form(1, 2.0));
  CHECK(ric_perp(P, Eigen::VectorXcd::Unit(2, 0)) == Approx(0.0).margin(1e-13));

  const CurvatureTensor flat = space_form(3, 0.0);
  CHECK(ric_perp(flat, rng.unit_vec(3)) == 0.0);
  CHECK(ric_plus(flat, rng.unit_vec(3)) == 0.0);
  CHECK_THROWS_AS(ric_perp(flat, Eigen::VectorXcd::Zero(3)), std::domain_error);
}

TEST_CASE("ric_plus minus ric_perp is twice the sectional value") {
  Rng rng(3);
  const CurvatureTensor R = random_kahler(4, 12);
  for (int t = 0; t < 8; ++t) {
    const Eigen::VectorXcd X = rng.unit_vec(4);
    CHECK(ric_plus(R, X) - ric_perp(R, X) == Approx(2.0 * holo_sectional(R, X)).margin(1e-11));
  }
}

TEST_CASE("restricted Ricci form") {
  Rng rng(5);
  const int n = 5;
  const double c = 2.0;
  const CurvatureTensor R = space_form(n, c);
  for (int k = 1; k <= n; ++k) {
    const Subspace sigma{rng.stiefel(n, k)};
    Eigen::VectorXcd v = sigma.frame * rng.unit_vec(k);
    CHECK(ric_k_form(R, sigma, v) == Approx(c * (k + 1) / 2.0).margin(1e-11));
  }

  const CurvatureTensor Q = random_kahler(4, 9);
  const Subspace full{Eigen::MatrixXcd::Identity(4, 4)};
  const Eigen::VectorXcd v = rng.unit_vec(4);
  // Raw slot-convention pairing, sum Ric(i,j) v_i conj(v_j).
  cplx direct_acc(0, 0);
  const Eigen::MatrixXcd ricQ = ricci(Q);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) direct_acc += ricQ(i, j) * v(i) * std::conj(v(j));
  CHECK(ric_k_form(Q, full, v) == Approx(direct_acc.real()).margin(1e-11));

  const Subspace line{v};
  CHECK(ric_k_form(Q, line, v) == Approx(holo_sectional(Q, v)).margin(1e-11));

  Eigen::VectorXcd outside = Eigen::VectorXcd::Unit(4, 3);
  const Subspace sigma2{rng.stiefel(4, 2)};
  outside = outside - sigma2.frame * (sigma2.frame.adjoint() * outside);
  if (outside.norm() > 0.5)  // comfortably outside the span
    CHECK_THROWS_WITH(ric_k_form(Q, sigma2, outside), Catch::Contains("projection residual"));
}

TEST_CASE("restricted Ricci matches the Ricci of the restriction") {
  Rng rng(6);
  const CurvatureTensor R = random_kahler(5, 31);
  const int k = 3;
  const Subspace sigma{rng.stiefel(5, k)};
  const CurvatureTensor Rk = restrict_tensor(R, sigma);
  const Eigen::MatrixXcd rick = ricci(Rk);
  for (int a = 0; a < k; ++a) {
    const Eigen::VectorXcd v = sigma.frame.col(a);
    CHECK(ric_k_form(R, sigma, v) == Approx(rick(a, a).real()).margin(1e-11));
  }
}

TEST_CASE("orthogonal variant vanishes identically on lines") {
  Rng rng(7);
  const CurvatureTensor R = random_kahler(4, 14);
  const Eigen::VectorXcd v = rng.unit_vec(4);
  CHECK(ric_k_perp_form(R, Subspace{v}, v) == 0.0);
}

TEST_CASE("restricted variants on space forms and at full dimension") {
  Rng rng(8);
  const int n = 4;
  const double c = 2.0;
  const CurvatureTensor R = space_form(n, c);
  for (int k = 2; k <= n; ++k) {
    const Subspace sigma{rng.stiefel(n, k)};
    const Eigen::VectorXcd v = sigma.frame * rng.unit_vec(k);
    CHECK(ric_k_perp_form(R, sigma, v) == Approx(c * (k - 1) / 2.0).margin(1e-11));
    CHECK(ric_k_plus_form(R, sigma, v) == Approx(c * (k + 3) / 2.0).margin(1e-11));
  }
  const CurvatureTensor Q = random_kahler(n, 15);
  const Subspace full{Eigen::MatrixXcd::Identity(n, n)};
  const Eigen::VectorXcd v = rng.unit_vec(n);
  CHECK(ric_k_perp_form(Q, full, v) == Approx(ric_perp(Q, v)).margin(1e-11));
  CHECK(ric_k_plus_form(Q, full, v) == Approx(ric_plus(Q, v)).margin(1e-11));
}

TEST_CASE("subspace scalar curvature family") {
  Rng rng(9);
  const int n = 5;
  const double c = 2.0;
  const CurvatureTensor R = space_form(n, c);
  for (int k = 1; k <= n; ++k) {
    const Subspace sigma{rng.stiefel(n, k)};
    CHECK(s_k(R, sigma) == Approx(c * k * (k + 1) / 2.0).margin(1e-11));
    CHECK(s_k_perp(R, sigma) == Approx(c * k * (n - 1) / 2.0).margin(1e-11));
  }
  const Subspace line{rng.unit_vec(n)};
  CHECK(s_k(R, line) == Approx(holo_sectional(R, line.frame.col(0))).margin(1e-12));

  const CurvatureTensor Q = random_kahler(4, 16);
  const Subspace full{Eigen::MatrixXcd::Identity(4, 4)};
  CHECK(s_k(Q, full) == Approx(scalar_curvature(Q)).margin(1e-11));
  // At full dimension the orthogonal scalar is the fixed fraction of S.
  CHECK(s_k_perp(Q, full) == Approx((4.0 - 1.0) / (4.0 + 1.0) * scalar_curvature(Q)).margin(1e-11));

  for (int t = 0; t < 5; ++t) {
    const Subspace sigma{rng.stiefel(4, 2)};
    double tr = 0.0;
    const Eigen::MatrixXcd ricQ2 = ricci(Q);
    for (int a = 0; a < 2; ++a) {
      cplx acc(0, 0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) acc += ricQ2(i, j) * sigma.frame(i, a) * std::conj(sigma.frame(j, a));
      tr += acc.real();
    }
    CHECK(s_k_perp(Q, sigma) + s_k_plus(Q, sigma) == Approx(2.0 * tr).margin(1e-11));
  }
}

TEST_CASE("functionals are invariant under frame rotations of the subspace") {
  Rng rng(10);
  const CurvatureTensor R = random_kahler(4, 18);
  const Subspace sigma{rng.stiefel(4, 3)};
  const Eigen::MatrixXcd Uk = rng.unitary(3);
  const Subspace rotated{sigma.frame * Uk};
  CHECK(s_k(R, rotated) == Approx(s_k(R, sigma)).margin(1e-10));
  CHECK(s_k_perp(R, rotated) == Approx(s_k_perp(R, sigma)).margin(1e-10));
  CHECK(s_k_plus(R, rotated) == Approx(s_k_plus(R, sigma)).margin(1e-10));
  const Eigen::VectorXcd v = sigma.frame * rng.unit_vec(3);
  CHECK(ric_k_form(R, rotated, v) == Approx(ric_k_form(R, sigma, v)).margin(1e-10));
}

TEST_CASE("exact moment averages agree with the closed forms") {
  Rng rng(11);
  for (int n : {2, 3, 5}) {
    const CurvatureTensor R = random_kahler(n, 50 + n);
    for (int t = 0; t < 4; ++t) {
      const int k = 1 + static_cast<int>(rng.next_u64() % n);
      const Subspace sigma{rng.stiefel(n, k)};
      CHECK(sphere_average_exact(R, sigma, FunctionalKind::RicPerp) == Approx(s_k_perp(R, sigma)).margin(1e-10));
      CHECK(sphere_average_exact(R, sigma, FunctionalKind::RicPlus) == Approx(s_k_plus(R, sigma)).margin(1e-10));
      CHECK(sphere_average_exact(R, sigma, FunctionalKind::Ric) +
                sphere_average_exact(R, sigma, FunctionalKind::H) ==
            Approx(sphere_average_exact(R, sigma, FunctionalKind::RicPlus)).margin(1e-10));
    }
  }
}

TEST_CASE("Monte Carlo averages are deterministic and exact on constants") {
  Rng rng(12);
  const CurvatureTensor R = space_form(4, 2.0);
  const Subspace sigma{rng.stiefel(4, 2)};
  const McEstimate a = sphere_average_mc(R, sigma, FunctionalKind::RicPerp, 2000, 99);
  const McEstimate b = sphere_average_mc(R, sigma, FunctionalKind::RicPerp, 2000, 99);
  CHECK(a.value == b.value);  // bitwise determinism
  CHECK(a.value == Approx(s_k_perp(R, sigma)).margin(1e-9));
  CHECK(a.stderr_ < 1e-6);  // constant integrand, noise-floor variance only
}

TEST_CASE("Monte Carlo averages match the closed forms within 5 sigma") {
  Rng rng(13);
  const CurvatureTensor R = random_kahler(3, 61);
  const Subspace sigma{rng.stiefel(3, 2)};
  const McEstimate perp = sphere_average_mc(R, sigma, FunctionalKind::RicPerp, 200000, 5);
  CHECK(std::abs(perp.value - s_k_perp(R, sigma)) <= 5.0 * perp.stderr_ + 1e-12);
  const McEstimate plus = sphere_average_mc(R, sigma, FunctionalKind::RicPlus, 200000, 6);
  CHECK(std::abs(plus.value - s_k_plus(R, sigma)) <= 5.0 * plus.stderr_ + 1e-12);
}

TEST_CASE("identity residuals vanish on flat space and pass on random tensors") {
  const CurvatureTensor flat = space_form(3, 0.0);
  IdentityCheckOptions opts;
  opts.mc_samples = 2000;
  opts.subspaces = 2;
  for (const auto& r : identity_residuals(flat, opts)) CHECK(r.residual == 0.0);

  const CurvatureTensor R = random_kahler(4, 62);
  IdentityCheckOptions ro;
  ro.mc_samples = 100000;
  ro.subspaces = 3;
  ro.seed = 4;
  for (const auto& r : identity_residuals(R, ro)) {
    if (r.mc)
      CHECK(r.residual <= 5.0 * r.stderr_ + 1e-12);
    else
      CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("scalar averaging constants on space forms") {
  // avg RicPerp = (n-1)S/(n(n+1)) and avg RicPlus = (n+3)S/(n(n+1)); on a
  // space form both sides are constants, so the exact path must hit them.
  for (int n : {2, 5}) {
    const double c = -2.0;
    const CurvatureTensor R = space_form(n, c);
    const Subspace full{Eigen::MatrixXcd::Identity(n, n)};
    const double S = scalar_curvature(R);
    CHECK(sphere_average_exact(R, full, FunctionalKind::RicPerp) / n ==
          Approx((n - 1.0) * S / (n * (n + 1.0))).margin(1e-11));
    CHECK(sphere_average_exact(R, full, FunctionalKind::RicPlus) / n ==
          Approx((n + 3.0) * S / (n * (n + 1.0))).margin(1e-11));
  }
}

TEST_CASE("scalar family interpolation is monotone under inclusion of positivity") {
  // If every l-subspace has positive orthogonal scalar, sampled k-subspaces
  // with k >= l stay non-negative.
  Rng rng(14);
  const CurvatureTensor R = space_form(4, 2.0);  // strictly positive model
  const int l = 2;
  double lmin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 200; ++t) lmin = std::min(lmin, s_k_perp(R, Subspace{rng.stiefel(4, l)}));
  REQUIRE(lmin > 1e-6);
  for (int k = l + 1; k <= 4; ++k) {
    double kmin = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 200; ++t) kmin = std::min(kmin, s_k_perp(R, Subspace{rng.stiefel(4, k)}));
    CHECK(kmin > -1e-6);
  }
}
