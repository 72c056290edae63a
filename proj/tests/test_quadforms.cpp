#include <catch2/catch.hpp>

#include "kcurv/functionals.hpp"
#include "kcurv/models.hpp"
#include "kcurv/quadforms.hpp"
#include "oracles.hpp"

using namespace kcurv;

namespace {

Eigen::MatrixXcd random_hermitian(Rng& rng, int n) {
  const Eigen::MatrixXcd g = rng.cgaussian_mat(n, n);
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST_CASE("qb vanishes on multiples of the identity") {
  const CurvatureTensor R = random_kahler(3, 71);
  CHECK(qb_eval(R, Eigen::MatrixXcd::Identity(3, 3)) == Approx(0.0).margin(1e-11));
  Rng rng(1);
  const Eigen::MatrixXcd A = random_hermitian(rng, 3);
  CHECK(qb_eval(R, A + 2.5 * Eigen::MatrixXcd::Identity(3, 3)) == Approx(qb_eval(R, A)).margin(1e-10));
}

TEST_CASE("qb on a diagonal map follows the pair formula") {
  const double c = 2.0;
  const CurvatureTensor R2 = space_form(2, c);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = -1.0;
  CHECK(qb_eval(R2, A) == Approx(4.0 * c).margin(1e-12));

  Rng rng(2);
  const CurvatureTensor R = random_kahler(4, 72);
  Eigen::VectorXd a(4);
  for (int i = 0; i < 4; ++i) a(i) = rng.gaussian();
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) D(i, i) = a(i);
  double expect = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) expect += R(i, i, j, j).real() * (a(i) - a(j)) * (a(i) - a(j));
  CHECK(qb_eval(R, D) == Approx(expect).margin(1e-10));

  const CurvatureTensor flat = space_form(3, 0.0);
  CHECK(qb_eval(flat, random_hermitian(rng, 3)) == 0.0);
  Eigen::MatrixXcd nh = Eigen::MatrixXcd::Zero(3, 3);
  nh(0, 1) = 1.0;
  CHECK_THROWS_WITH(qb_eval(flat, nh), Catch::Contains("not Hermitian"));
}

TEST_CASE("cross form values on space forms") {
  for (double c : {2.0, -2.0}) {
    for (int n : {2, 3, 5}) {
      const CurvatureTensor R = space_form(n, c);
      Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
      A(0, 0) = 1.0;  // the canonical rank-one map along E_1
      CHECK(cqb_eval(R, A) == Approx(c * (n - 1) / 2.0).margin(1e-11));
      CHECK(cqb_eval(R, Eigen::MatrixXcd::Identity(n, n)) == Approx(c * n * (n - 1) / 2.0).margin(1e-11));
      CHECK(cqb_eval(R, Eigen::MatrixXcd::Zero(n, n)) == 0.0);
    }
  }
}

TEST_CASE("cqb of the canonical rank-one map is the orthogonal Ricci") {
  const CurvatureTensor R = random_kahler(4, 73);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(4, 4);
  A(0, 0) = 1.0;
  CHECK(cqb_eval(R, A) == Approx(ric_perp(R, Eigen::VectorXcd::Unit(4, 0))).margin(1e-11));
}

TEST_CASE("dual cross form values") {
  for (int n : {2, 3, 4}) {
    const double c = 2.0;
    const CurvatureTensor R = space_form(n, c);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    A(0, 0) = 1.0;
    CHECK(dcqb_eval(R, A) == Approx(c * (n + 3) / 2.0).margin(1e-11));
    CHECK(dcqb_eval(R, Eigen::MatrixXcd::Zero(n, n)) == 0.0);
  }
  // Skew rank-two maps kill the second sum and leave a Ricci trace.
  const CurvatureTensor Q = random_kahler(4, 74);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(4, 4);
  A(1, 0) = 1.0;   // E_1 -> conj(E_2)
  A(0, 1) = -1.0;  // E_2 -> -conj(E_1)
  const Eigen::MatrixXcd ric = ricci(Q);
  CHECK(dcqb_eval(Q, A) == Approx(ric(0, 0).real() + ric(1, 1).real()).margin(1e-10));
}

TEST_CASE("assembled forms reproduce the direct evaluations") {
  Rng rng(4);
  for (int n : {2, 3}) {
    const CurvatureTensor R = random_kahler(n, 80 + n);
    const AssembledForm qb = assemble_operator(R, FormKind::QB);
    const AssembledForm cqb = assemble_operator(R, FormKind::CQB);
    const AssembledForm dcqb = assemble_operator(R, FormKind::DCQB);
    CHECK(qb.hermitian_residual() <= 1e-12);
    CHECK(cqb.hermitian_residual() <= 1e-12);
    CHECK(dcqb.hermitian_residual() <= 1e-12);
    for (int t = 0; t < 25; ++t) {
      const Eigen::MatrixXcd A = rng.cgaussian_mat(n, n);
      const Eigen::MatrixXcd H = 0.5 * (A + A.adjoint());
      CHECK(qb.eval(H) == Approx(qb_eval(R, H)).margin(1e-10));
      CHECK(cqb.eval(A) == Approx(cqb_eval(R, A)).margin(1e-10));
      CHECK(dcqb.eval(A) == Approx(dcqb_eval(R, A)).margin(1e-10));
    }
  }
  const CurvatureTensor flat = space_form(3, 0.0);
  CHECK(assemble_operator(flat, FormKind::CQB).cmat.cwiseAbs().maxCoeff() == 0.0);
  CHECK(assemble_operator(flat, FormKind::QB).rmat.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("smallest eigenvalues of the full forms on models") {
  for (int n : {2, 3, 4}) {
    const double c = 2.0;
    const CurvatureTensor R = space_form(n, c);
    CHECK(min_eig(R, FormKind::CQB) == Approx(c * (n - 1) / 2.0).margin(1e-10));
    CHECK(min_eig(R, FormKind::DCQB) == Approx(c * (n + 1) / 2.0).margin(1e-10));
    CHECK(min_eig(R, FormKind::QB) == Approx(c * n).margin(1e-10));
    CHECK(min_eig(space_form(n, -c), FormKind::CQB) < 0.0);
  }
  CHECK(min_eig(space_form(3, 0.0), FormKind::DCQB) == Approx(0.0).margin(1e-14));
}

TEST_CASE("frame covariance of the three forms") {
  Rng rng(5);
  const int n = 3;
  const CurvatureTensor R = random_kahler(n, 85);
  const Eigen::MatrixXcd U = rng.unitary(n);
  const CurvatureTensor Rp = change_frame(R, U);
  const Eigen::MatrixXcd B = U.conjugate();
  const Eigen::MatrixXcd A = rng.cgaussian_mat(n, n);
  const Eigen::MatrixXcd H = 0.5 * (A + A.adjoint());
  CHECK(cqb_eval(Rp, B * A * B.transpose()) == Approx(cqb_eval(R, A)).margin(1e-9));
  CHECK(dcqb_eval(Rp, U * A * U.transpose()) == Approx(dcqb_eval(R, A)).margin(1e-9));
  CHECK(qb_eval(Rp, B * H * U.transpose()) == Approx(qb_eval(R, H)).margin(1e-9));
  // The spectra see the same invariance.
  CHECK(min_eig(Rp, FormKind::CQB) == Approx(min_eig(R, FormKind::CQB)).margin(1e-9));
}

TEST_CASE("symmetric curvature action spectrum") {
  for (double c : {2.0, -2.0, 1.0}) {
    const OperatorSpectrum spec = q_operator_spectrum(space_form(3, c));
    REQUIRE(spec.eigenvalues.size() == 6);  // n(n+1)/2
    CHECK(spec.nu1() == Approx(c).margin(1e-11));
    CHECK(spec.nu() == Approx(c).margin(1e-11));
  }
  const OperatorSpectrum flat = q_operator_spectrum(space_form(2, 0.0));
  CHECK(flat.eigenvalues.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Einstein sufficient margins") {
  const int n = 4;
  const double c = 2.0;
  const CurvatureTensor R = space_form(n, c);
  const EinsteinResult ein = einstein_constant(R);
  REQUIRE(ein.lambda.has_value());
  CHECK(*ein.lambda == Approx(c * (n + 1) / 2.0).margin(1e-12));
  const KeBounds b = ke_bounds(*ein.lambda, q_operator_spectrum(R), 1);
  CHECK(b.cqb_margin == Approx(c * (n - 1) / 2.0).margin(1e-10));
  CHECK(b.dcqb_margin == Approx(c * (n + 3) / 2.0).margin(1e-10));
  CHECK(b.hq_margin == Approx(b.dcqb_margin).margin(1e-10));  // q = 1

  // Large q approaches lambda + nu1/2.
  const KeBounds blim = ke_bounds(*ein.lambda, q_operator_spectrum(R), 1000000);
  CHECK(blim.hq_margin == Approx(*ein.lambda + c / 2.0).margin(1e-4));
  CHECK_THROWS_AS(ke_bounds(1.0, q_operator_spectrum(R), 0), std::invalid_argument);
}

TEST_CASE("tabulated margins match the Einstein bound arithmetic") {
  // lambda = 11/2, nu1 = -5, nu = 1: margins 1/2 and 9/2.
  OperatorSpectrum spec;
  spec.eigenvalues.resize(2);
  spec.eigenvalues << -5.0, 1.0;
  const KeBounds b = ke_bounds(5.5, spec, 1);
  CHECK(b.dcqb_margin == Approx(0.5).margin(1e-14));
  CHECK(b.cqb_margin == Approx(4.5).margin(1e-14));
}

TEST_CASE("Einstein sufficient margins are conservative") {
  // Where lambda - nu (resp. lambda + nu1) is positive, the corresponding
  // full form must be positive definite; checked on constant models and on
  // near-Einstein perturbations with margin to spare for the deviation.
  for (int n : {2, 3, 4}) {
    const CurvatureTensor R = space_form(n, 2.0);
    const EinsteinResult ein = einstein_constant(R);
    REQUIRE(ein.lambda.has_value());
    const KeBounds b = ke_bounds(*ein.lambda, q_operator_spectrum(R), 1);
    if (b.cqb_margin > 0) CHECK(min_eig(R, FormKind::CQB) > 0);
    if (b.dcqb_margin > 0) CHECK(min_eig(R, FormKind::DCQB) > 0);
  }
  for (std::uint64_t seed : {120ull, 121ull, 122ull}) {
    CurvatureTensor R = space_form(3, 2.0);
    const CurvatureTensor noise = random_kahler(3, seed, 0.02);
    for (size_t m = 0; m < R.e.size(); ++m) R.e[m] += noise.e[m];
    const EinsteinResult ein = einstein_constant(R, 0.2);
    REQUIRE(ein.lambda.has_value());
    const KeBounds b = ke_bounds(*ein.lambda, q_operator_spectrum(R), 1);
    const double slack = 4.0 * ein.deviation;
    if (b.cqb_margin > slack) CHECK(min_eig(R, FormKind::CQB) > 0);
    if (b.dcqb_margin > slack) CHECK(min_eig(R, FormKind::DCQB) > 0);
  }
}

TEST_CASE("einstein detection rejects unbalanced products") {
  const CurvatureTensor P = product_tensor(space_form(1, 2.0), space_form(1, 4.0));
  const EinsteinResult ein = einstein_constant(P);
  CHECK_FALSE(ein.lambda.has_value());
  CHECK(ein.deviation > 0.5);
  CHECK(einstein_constant(space_form(3, 0.0)).lambda.value() == 0.0);
}

TEST_CASE("symmetric/skew split under transpose") {
  Rng rng(6);
  const Eigen::MatrixXcd A = rng.cgaussian_mat(4, 4);
  const auto [a1, a2] = sym_skew_split(A);
  CHECK((a1 - a1.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((a2 + a2.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((a1 + a2 - A).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(a1.squaredNorm() + a2.squaredNorm() == Approx(A.squaredNorm()).margin(1e-12));

  const Eigen::MatrixXcd S = a1;
  const auto [s1, s2] = sym_skew_split(S);
  CHECK((s1 - S).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(s2.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hermitian decomposition of a (1,1)-coefficient array") {
  Rng rng(7);
  const Eigen::MatrixXcd O = rng.cgaussian_mat(3, 3);
  const auto [B, C] = hermitian_decomposition(O);
  CHECK((B - B.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((C - C.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((0.5 * (B - cplx(0, 1) * C) - O).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::MatrixXcd H = random_hermitian(rng, 3);
  const auto [B2, C2] = hermitian_decomposition(H);
  CHECK((B2 - 2.0 * H).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(C2.cwiseAbs().maxCoeff() < 1e-14);
  const auto [B3, C3] = hermitian_decomposition(cplx(0, 1) * H);
  CHECK(B3.cwiseAbs().maxCoeff() < 1e-14);
  CHECK((C3 + 2.0 * H).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("qb on Hermitian coefficient arrays") {
  const double c = 2.0;
  const CurvatureTensor R = space_form(2, c);
  CHECK(qb_on_form(R, Eigen::MatrixXcd::Identity(2, 2)).value == Approx(0.0).margin(1e-12));
  Eigen::MatrixXcd rank1 = Eigen::MatrixXcd::Zero(2, 2);
  rank1(0, 0) = 1.0;
  const FormOnFormResult res = qb_on_form(R, rank1);
  CHECK(res.value == Approx(c).margin(1e-12));
  CHECK(res.rank == 1);
  CHECK(qb_on_form(space_form(2, 0.0), rank1).value == 0.0);
}

TEST_CASE("rank-restricted minima on space forms") {
  OptimizerOptions opts;
  opts.restarts = 8;
  const CurvatureTensor R = space_form(3, 2.0);
  const RankRestrictedMin cqb1 = rank_restricted_min(R, FormKind::CQB, 1, opts);
  CHECK(cqb1.value == Approx(2.0).margin(1e-9));  // c(n-1)/2
  CHECK(cqb1.heuristic);
  CHECK(TangentMap{MapKind::AntiToHolo, cqb1.witness}.rank() == 1);

  // The rank-one dual minimum sits below the RicPlus value c(n+3)/2 = 6: the
  // bisectional slot decouples and contributes its smallest value, giving
  // c(n+2)/2.
  const RankRestrictedMin dcqb1 = rank_restricted_min(R, FormKind::DCQB, 1, opts);
  CHECK(dcqb1.value == Approx(5.0).margin(1e-8));

  // Negative curvature moves the cross rank-one minimum to c n/2.
  const RankRestrictedMin neg = rank_restricted_min(space_form(3, -2.0), FormKind::CQB, 1, opts);
  CHECK(neg.value == Approx(-3.0).margin(1e-8));
}

TEST_CASE("rank-restricted minimum at full rank is the exact eigenvalue") {
  OptimizerOptions opts;
  opts.restarts = 4;
  for (std::uint64_t seed : {90ull, 91ull, 92ull}) {
    const CurvatureTensor R = random_kahler(3, seed);
    for (FormKind kind : {FormKind::QB, FormKind::CQB, FormKind::DCQB}) {
      const RankRestrictedMin m = rank_restricted_min(R, kind, 3, opts);
      CHECK_FALSE(m.heuristic);
      CHECK(m.value == Approx(min_eig(R, kind)).margin(1e-10));
    }
  }
}

TEST_CASE("rank-restricted minima decrease with the rank bound") {
  OptimizerOptions opts;
  opts.restarts = 8;
  const CurvatureTensor R = random_kahler(4, 93);
  for (FormKind kind : {FormKind::QB, FormKind::CQB, FormKind::DCQB}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 4; ++k) {
      const double v = rank_restricted_min(R, kind, k, opts).value;
      CHECK(v <= prev + 1e-7);
      prev = v;
    }
  }
  CHECK_THROWS_AS(rank_restricted_min(R, FormKind::CQB, 0, opts), std::invalid_argument);
}
