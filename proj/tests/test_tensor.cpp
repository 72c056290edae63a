#include <catch2/catch.hpp>

#include "kcurv/models.hpp"
#include "kcurv/tensor.hpp"
#include "oracles.hpp"

using namespace kcurv;

TEST_CASE("validate accepts constructed models exactly") {
  const CurvatureTensor R = space_form(3, 2.0);
  const ValidationReport rep = validate(R);
  CHECK(rep.pass);
  CHECK(rep.symmetry_residual == 0.0);
  CHECK(rep.hermitian_residual == 0.0);
}

TEST_CASE("validate rejects a broken symmetry") {
  CurvatureTensor R = space_form(3, 2.0);
  R(0, 0, 0, 1) += cplx(1e-3, 0);
  const ValidationReport rep = validate(R, 1e-9);
  CHECK_FALSE(rep.pass);
  CHECK(rep.symmetry_residual > 1e-4);
}

TEST_CASE("random tensors validate at 1e-12") {
  for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
    const CurvatureTensor R = random_kahler(4, seed);
    const ValidationReport rep = validate(R, 1e-12);
    CHECK(rep.pass);
  }
}

TEST_CASE("validate reports non-finite entries with their location") {
  CurvatureTensor R = space_form(2, 1.0);
  R(1, 0, 1, 1) = cplx(std::numeric_limits<double>::quiet_NaN(), 0);
  CHECK_THROWS_WITH(validate(R), Catch::Contains("R[1][0][1][1]"));
}

TEST_CASE("change_frame with the identity is a no-op") {
  const CurvatureTensor R = random_kahler(3, 11);
  const CurvatureTensor Rp = change_frame(R, Eigen::MatrixXcd::Identity(3, 3));
  for (size_t m = 0; m < R.e.size(); ++m) CHECK(std::abs(R.e[m] - Rp.e[m]) < 1e-13);
}

TEST_CASE("space forms are frame invariant") {
  Rng rng(5);
  const CurvatureTensor R = space_form(2, -2.0);
  const CurvatureTensor Rp = change_frame(R, rng.unitary(2));
  for (size_t m = 0; m < R.e.size(); ++m) CHECK(std::abs(R.e[m] - Rp.e[m]) < 1e-12);
}

TEST_CASE("frame changes preserve validation, scalar and the Ricci spectrum") {
  Rng rng(17);
  for (int n : {2, 4}) {
    const CurvatureTensor R = random_kahler(n, 100 + n);
    const Eigen::MatrixXcd U = rng.unitary(n);
    const CurvatureTensor Rp = change_frame(R, U);
    CHECK(validate(Rp, 1e-10).pass);
    CHECK(scalar_curvature(Rp) == Approx(scalar_curvature(R)).margin(1e-10));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(ricci(R)), eb(ricci(Rp));
    for (int i = 0; i < n; ++i) CHECK(eb.eigenvalues()(i) == Approx(ea.eigenvalues()(i)).margin(1e-10));
  }
}

TEST_CASE("change_frame rejects non-unitary input") {
  const CurvatureTensor R = space_form(2, 1.0);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(2, 2);
  U(0, 0) = 2.0;
  CHECK_THROWS_WITH(change_frame(R, U), Catch::Contains("not unitary"));
}

TEST_CASE("bisectional curvature on space forms") {
  const double c = 2.0;
  for (int n : {2, 4}) {
    const CurvatureTensor R = space_form(n, c);
    Eigen::VectorXcd X = Eigen::VectorXcd::Unit(n, 0);
    Eigen::VectorXcd Y = Eigen::VectorXcd::Unit(n, 1);
    CHECK(bisectional(R, X, Y) == Approx(c / 2).margin(1e-13));
    CHECK(bisectional(R, X, X) == Approx(c).margin(1e-13));
  }
  const CurvatureTensor flat = space_form(3, 0.0);
  Rng rng(3);
  CHECK(bisectional(flat, rng.unit_vec(3), rng.unit_vec(3)) == 0.0);
}

TEST_CASE("bisectional matches the raw contraction and is symmetric") {
  Rng rng(23);
  const CurvatureTensor R = random_kahler(3, 23);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXcd X = rng.unit_vec(3), Y = rng.unit_vec(3);
    const double raw = oracle::contract(3, oracle::entry_of(R), X, X, Y, Y).real();
    CHECK(bisectional(R, X, Y) == Approx(raw).margin(1e-12));
    CHECK(bisectional(R, X, Y) == Approx(bisectional(R, Y, X)).margin(1e-10));
  }
}

TEST_CASE("holomorphic sectional curvature") {
  const CurvatureTensor R = space_form(4, 2.0);
  Rng rng(31);
  CHECK(holo_sectional(R, 3.7 * rng.unit_vec(4)) == Approx(2.0).margin(1e-12));

  const CurvatureTensor P = product_tensor(space_form(1, 2.0), space_form(1, 2.0));
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(2, 0);
  Eigen::VectorXcd diag(2);
  diag << M_SQRT1_2, M_SQRT1_2;
  CHECK(holo_sectional(P, e1) == Approx(2.0).margin(1e-13));
  CHECK(holo_sectional(P, diag) == Approx(1.0).margin(1e-13));

  CHECK(holo_sectional(space_form(2, 0.0), e1) == 0.0);
  CHECK_THROWS_AS(holo_sectional(R, Eigen::VectorXcd::Zero(4)), std::domain_error);
}

TEST_CASE("ricci contraction and scalar curvature") {
  for (int n : {2, 3, 5}) {
    const double c = -2.0;
    const Eigen::MatrixXcd ric = ricci(space_form(n, c));
    CHECK((ric - c * (n + 1) / 2.0 * Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(scalar_curvature(space_form(n, c)) == Approx(n * (n + 1) * c / 2.0).margin(1e-12));
  }
  const CurvatureTensor P = product_tensor(space_form(1, 2.0), space_form(1, 2.0));
  const Eigen::MatrixXcd ric = ricci(P);
  CHECK((ric - 2.0 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(ricci(space_form(3, 0.0)).cwiseAbs().maxCoeff() == 0.0);

  const CurvatureTensor R = random_kahler(4, 77);
  CHECK(ricci(R).trace().real() == Approx(scalar_curvature(R)).margin(1e-12));
}

TEST_CASE("restriction to subspaces") {
  Rng rng(41);
  const int n = 4, k = 2;
  const double c = 2.0;
  const CurvatureTensor R = space_form(n, c);
  const Subspace sigma{rng.stiefel(n, k)};
  const CurvatureTensor Rk = restrict_tensor(R, sigma);
  REQUIRE(Rk.n == k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          CHECK(std::abs(Rk(i, j, a, b) - oracle::space_form_entry(c, i, j, a, b)) < 1e-12);
  CHECK(validate(Rk, 1e-10).pass);
}

TEST_CASE("restriction to a full frame equals a frame change") {
  Rng rng(43);
  const int n = 3;
  const CurvatureTensor R = random_kahler(n, 43);
  const Eigen::MatrixXcd F = rng.unitary(n);
  const CurvatureTensor A = restrict_tensor(R, Subspace{F});
  const CurvatureTensor B = change_frame(R, F.transpose());
  for (size_t m = 0; m < A.e.size(); ++m) CHECK(std::abs(A.e[m] - B.e[m]) < 1e-11);
}

TEST_CASE("one-dimensional restriction is the sectional value") {
  Rng rng(47);
  const CurvatureTensor R = random_kahler(4, 47);
  const Eigen::VectorXcd v = rng.unit_vec(4);
  const CurvatureTensor R1 = restrict_tensor(R, Subspace{v});
  CHECK(R1.n == 1);
  CHECK(R1(0, 0, 0, 0).real() == Approx(holo_sectional(R, v)).margin(1e-12));
}

TEST_CASE("subspace construction rejects bad frames") {
  Eigen::MatrixXcd F(3, 2);
  F.setZero();
  F(0, 0) = 1.0;
  F(0, 1) = 1.0;  // repeated column, not orthonormal
  CHECK_THROWS_WITH(Subspace::from_frame(F), Catch::Contains("not orthonormal"));
  const CurvatureTensor R = space_form(2, 1.0);
  CHECK_THROWS_AS(restrict_tensor(R, Subspace{Eigen::MatrixXcd::Identity(3, 2)}), std::invalid_argument);
}
