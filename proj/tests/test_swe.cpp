// Pointwise shallow-water algebra against independent oracles: finite
// differences for Jacobians, Eigen for eigenstructure/definiteness, and the
// closed forms of the transmission-problem boundary calculus.
//
// Oracle tags: [TRIVIAL] direct formula, [DERIVED] independent computation,
// [PAPER] value quoted from the model description.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "owc/errors.hpp"
#include "owc/swe.hpp"

using namespace owc;
using swe::CellState;

namespace {
constexpr double kG = 9.81;

// fixed-seed subcritical state sampler (both rest depths)
struct Sampler {
  std::mt19937 rng{20260814u};
  std::uniform_real_distribution<double> dz{-0.3, 0.3};
  std::uniform_real_distribution<double> du{-0.8, 0.8};
  std::uniform_real_distribution<double> dh{1.0, 2.0};
  CellState operator()() {
    CellState u;
    u.h_rest = dh(rng);
    u.zeta = dz(rng);
    u.q = du(rng) * u.depth();  // |velocity| <= 0.8 < sqrt(g h): subcritical
    return u;
  }
};
}  // namespace

TEST_CASE("wet depth guards dry states") {
  CHECK(swe::wet_depth({0.25, 0.0, 1.0}) == doctest::Approx(1.25));
  CHECK_THROWS_AS(swe::wet_depth({-1.0, 0.0, 1.0}), DryState);
  CHECK_THROWS_AS(swe::wet_depth({-1.5, 0.0, 1.0}), DryState);
}

TEST_CASE("flux: rest-offset form") {
  // [TRIVIAL] the offset makes every rest state an exact equilibrium
  for (double hr : {1.0, 2.0, 0.37}) {
    const Vec2 F = swe::flux({0.0, 0.0, hr}, kG);
    CHECK(F[0] == 0.0);
    CHECK(F[1] == 0.0);
  }
  // [DERIVED] pure-pressure value: g((h_rest+zeta)^2 - h_rest^2)/2
  //           = 9.81 * (1.1^2 - 1) / 2 = 1.030050 at zeta = 0.1
  const Vec2 F = swe::flux({0.1, 0.0, 1.0}, kG);
  CHECK(F[0] == 0.0);
  CHECK(F[1] == doctest::Approx(1.03005).epsilon(1e-12));
  // [TRIVIAL] first component is the discharge
  CHECK(swe::flux({0.1, 0.7, 1.0}, kG)[0] == 0.7);
}

TEST_CASE("jacobian equals the flux derivative (FD oracle)") {
  Sampler sample;
  for (int k = 0; k < 50; ++k) {
    const CellState u = sample();
    auto f = [&](const Eigen::Vector2d& x) {
      const Vec2 F = swe::flux({x[0], x[1], u.h_rest}, kG);
      return Eigen::Vector2d(F[0], F[1]);
    };
    const Eigen::Matrix2d J_fd =
        oracle::fd_jacobian(f, Eigen::Vector2d(u.zeta, u.q));
    const Eigen::Matrix2d J = oracle::to_eigen(swe::jacobian(u, kG));
    CHECK((J - J_fd).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("eigenstructure against Eigen's solver") {
  Sampler sample;
  for (int k = 0; k < 50; ++k) {
    const CellState u = sample();
    const swe::EigenPair ep = swe::eigen(u, kG);
    CHECK(ep.lambda_minus < 0.0);  // subcritical ordering
    CHECK(ep.lambda_plus > 0.0);

    const Eigen::Matrix2d A = oracle::to_eigen(swe::jacobian(u, kG));
    Eigen::EigenSolver<Eigen::Matrix2d> es(A);
    const double l0 = es.eigenvalues()[0].real();
    const double l1 = es.eigenvalues()[1].real();
    CHECK(es.eigenvalues()[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::min(l0, l1) == doctest::Approx(ep.lambda_minus).epsilon(1e-10));
    CHECK(std::max(l0, l1) == doctest::Approx(ep.lambda_plus).epsilon(1e-10));

    // eigenvector residuals ||A e - lambda e||
    const Eigen::Vector2d epv(ep.e_plus[0], ep.e_plus[1]);
    const Eigen::Vector2d emv(ep.e_minus[0], ep.e_minus[1]);
    CHECK((A * epv - ep.lambda_plus * epv).norm() < 1e-10);
    CHECK((A * emv - ep.lambda_minus * emv).norm() < 1e-10);
    CHECK(epv.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(emv.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // critical state rejected: velocity = sqrt(g h) exactly
  CellState crit{0.0, std::sqrt(kG), 1.0};
  CHECK_THROWS_AS(swe::eigen(crit, kG), CriticalFlow);
}

TEST_CASE("Riemann invariants") {
  // [TRIVIAL] formulas at a hand state
  const CellState u{0.1, 0.55, 1.0};
  const auto ri = swe::riemann_invariants(u, kG);
  CHECK(ri.r_plus == doctest::Approx(0.5 + 2 * std::sqrt(kG * 1.1)));
  CHECK(ri.r_minus == doctest::Approx(0.5 - 2 * std::sqrt(kG * 1.1)));

  // [TRIVIAL] offset variant vanishes at rest
  for (double hr : {1.0, 2.0}) {
    const auto ro = swe::riemann_invariants_offset({0.0, 0.0, hr}, kG);
    CHECK(ro.r_plus == 0.0);
    CHECK(ro.r_minus == 0.0);
  }
  // [DERIVED] zeta = 0.21 on h_rest = 1: sqrt(1.21) = 1.1 exactly, so
  //           R~_+ = 2 sqrt(g)(1.1 - 1) = 0.2 sqrt(9.81) = 0.6264...
  const auto ro = swe::riemann_invariants_offset({0.21, 0.0, 1.0}, kG);
  CHECK(ro.r_plus == doctest::Approx(0.2 * std::sqrt(9.81)).epsilon(1e-13));
  CHECK(ro.r_minus == doctest::Approx(-0.2 * std::sqrt(9.81)).epsilon(1e-13));

  // [DERIVED] R_+- are constant along the opposite characteristic field:
  // grad R_+ . e_- = 0 (checked by finite differences)
  Sampler sample;
  for (int k = 0; k < 20; ++k) {
    const CellState s = sample();
    const swe::EigenPair ep = swe::eigen(s, kG);
    const double eps = 1e-6;
    auto rp = [&](double dz, double dq) {
      return swe::riemann_invariants({s.zeta + dz, s.q + dq, s.h_rest}, kG)
          .r_plus;
    };
    auto rm = [&](double dz, double dq) {
      return swe::riemann_invariants({s.zeta + dz, s.q + dq, s.h_rest}, kG)
          .r_minus;
    };
    const double dp = (rp(eps * ep.e_minus[0], eps * ep.e_minus[1]) -
                       rp(-eps * ep.e_minus[0], -eps * ep.e_minus[1])) /
                      (2 * eps);
    const double dm = (rm(eps * ep.e_plus[0], eps * ep.e_plus[1]) -
                       rm(-eps * ep.e_plus[0], -eps * ep.e_plus[1])) /
                      (2 * eps);
    CHECK(std::abs(dp) < 1e-6);
    CHECK(std::abs(dm) < 1e-6);
  }
}

TEST_CASE("boundary matrix M") {
  // [TRIVIAL] M u| = (jump q, avg q) on u| = (zeta-, q-, zeta+, q+)
  const Mat2x4 M = swe::boundary_matrix();
  const double want[2][4] = {{0, -1, 0, 1}, {0, 0.5, 0, 0.5}};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) CHECK(M[r][c] == want[r][c]);
}

TEST_CASE("Lopatinskii matrix is state-independent and uniformly invertible") {
  Sampler sample;
  for (int k = 0; k < 30; ++k) {
    const CellState ul = sample();
    const CellState ur = sample();
    const swe::Lopatinskii lop = swe::lopatinskii(ul, ur, kG);
    // [PAPER] L = [[-1, 1], [1/2, 1/2]], det L = -1, ||L^-1|| = sqrt(2) <= 2
    CHECK(lop.L[0][0] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(lop.L[0][1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lop.L[1][0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(lop.L[1][1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(lop.det == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(lop.inv_norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(lop.inv_norm <= 2.0);

    // [DERIVED] cross-check the norm with Eigen's SVD
    const Eigen::Matrix2d L = oracle::to_eigen(lop.L);
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(L);
    CHECK(1.0 / svd.singularValues().minCoeff() ==
          doctest::Approx(lop.inv_norm).epsilon(1e-12));
  }
}

TEST_CASE("single-block symmetrizer") {
  Sampler sample;
  for (int k = 0; k < 30; ++k) {
    const CellState u = sample();
    const Eigen::Matrix2d S = oracle::to_eigen(swe::symmetrizer(u, kG));
    const Eigen::Matrix2d A = oracle::to_eigen(swe::jacobian(u, kG));

    CHECK((S - S.transpose()).norm() == doctest::Approx(0.0));
    // [DERIVED] positive definite, det S = g h (Eigen oracle)
    CHECK(oracle::min_sym_eigenvalue(S) > 0.0);
    CHECK(S.determinant() ==
          doctest::Approx(kG * swe::wet_depth(u)).epsilon(1e-11));
    // S A symmetric is the symmetrizer property
    const Eigen::Matrix2d SA = S * A;
    CHECK((SA - SA.transpose()).cwiseAbs().maxCoeff() < 1e-10);

    // weighted variant with unit weights reproduces S exactly
    const Eigen::Matrix2d W =
        oracle::to_eigen(swe::weighted_symmetrizer(u, kG, 1.0, 1.0));
    CHECK((W - S).cwiseAbs().maxCoeff() < 1e-9 * S.norm());
  }
}

TEST_CASE("4x4 system matrix block layout") {
  const CellState ul{0.05, 0.2, 2.0};
  const CellState ur{-0.02, 0.1, 1.0};
  const Eigen::Matrix4d A4 = oracle::to_eigen(swe::system_matrix4(ul, ur, kG));
  const Eigen::Matrix2d Am = oracle::to_eigen(swe::jacobian(ul, kG));
  const Eigen::Matrix2d Ap = oracle::to_eigen(swe::jacobian(ur, kG));
  CHECK((A4.topLeftCorner<2, 2>() + Am).norm() == doctest::Approx(0.0));
  CHECK((A4.bottomRightCorner<2, 2>() - Ap).norm() == doctest::Approx(0.0));
  CHECK(A4.topRightCorner<2, 2>().norm() == 0.0);
  CHECK(A4.bottomLeftCorner<2, 2>().norm() == 0.0);
}

TEST_CASE("equal-weight block symmetrizer is not boundary dissipative") {
  // The naive diag(S, S) assembly symmetrizes the system but its kernel
  // form degenerates at rest -- the negative result motivating the
  // characteristic weighting. [DERIVED]
  const CellState ul{0.0, 0.0, 2.0};
  const CellState ur{0.0, 0.0, 1.0};
  const Mat4 A4 = swe::system_matrix4(ul, ur, kG);
  const Mat4 S4 = swe::symmetrizer4(ul, ur, kG);

  const Eigen::Matrix4d S = oracle::to_eigen(S4);
  const Eigen::Matrix4d A = oracle::to_eigen(A4);
  CHECK(oracle::min_sym_eigenvalue(S) > 0.0);
  CHECK(((S * A) - (S * A).transpose()).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(
      swe::boundary_dissipativity(S4, A4, swe::boundary_matrix()),
      NotDissipative);
}

TEST_CASE("weighted symmetrizer certifies maximal dissipativity") {
  Sampler sample;
  const Mat2x4 M = swe::boundary_matrix();
  const Eigen::Matrix<double, 2, 4> Me = oracle::to_eigen(M);

  std::mt19937 rng(7u);
  std::normal_distribution<double> gauss;

  auto check_state = [&](const CellState& ul, const CellState& ur) {
    const Mat4 A4 = swe::system_matrix4(ul, ur, kG);
    const Mat4 S4 = swe::kreiss_symmetrizer4(ul, ur, kG);
    const Eigen::Matrix4d S = oracle::to_eigen(S4);
    const Eigen::Matrix4d A = oracle::to_eigen(A4);

    CHECK(oracle::min_sym_eigenvalue(S) > 0.0);
    CHECK(((S * A) - (S * A).transpose()).cwiseAbs().maxCoeff() < 1e-9);

    const swe::Dissipativity dis = swe::boundary_dissipativity(S4, A4, M);
    CHECK(dis.c2 > 0.0);
    CHECK(dis.C2 > 0.0);
    CHECK(dis.kernel_min > 0.0);

    // [DERIVED] certificate checked against Eigen on random directions:
    // v^T (S A) v <= -c2 |v|^2 + C2 |M v|^2
    const Eigen::Matrix4d SA = S * A;
    for (int k = 0; k < 200; ++k) {
      Eigen::Vector4d v;
      for (int i = 0; i < 4; ++i) v[i] = gauss(rng);
      v.normalize();
      const double lhs = v.dot(SA * v);
      const double rhs = -dis.c2 + dis.C2 * (Me * v).squaredNorm();
      CHECK(lhs <= rhs + 1e-9);
    }

    // [DERIVED] kernel_min == smallest eigenvalue of -sym(SA) restricted to
    // ker M = span{e1, e3} (Eigen restricted eigenproblem)
    Eigen::Matrix<double, 4, 2> Kb;
    Kb.setZero();
    Kb(0, 0) = 1.0;
    Kb(2, 1) = 1.0;
    const Eigen::Matrix2d R = -Kb.transpose() *
                              (0.5 * (SA + SA.transpose())) * Kb;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(R);
    CHECK(dis.kernel_min ==
          doctest::Approx(es.eigenvalues().minCoeff()).epsilon(1e-9));
  };

  check_state({0.0, 0.0, 2.0}, {0.0, 0.0, 1.0});  // rest, where diag(S,S) fails
  for (int k = 0; k < 10; ++k) check_state(sample(), sample());
}
