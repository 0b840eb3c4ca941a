#pragma once

// Independent oracles shared by the unit tests. Everything here is computed
// by a different route than the library under test:
//   - Eigen's solvers for eigenstructure / definiteness / matrix exponentials
//   - central finite differences for Jacobians
//   - generic quadrature helpers for norms
// so that agreement is evidence, not tautology.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "owc/algebra.hpp"
#include "owc/params.hpp"

namespace oracle {

inline Eigen::Matrix2d to_eigen(const owc::Mat2& m) {
  Eigen::Matrix2d e;
  e << m[0][0], m[0][1], m[1][0], m[1][1];
  return e;
}

inline Eigen::Matrix4d to_eigen(const owc::Mat4& m) {
  Eigen::Matrix4d e;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) e(r, c) = m[r][c];
  return e;
}

inline Eigen::Matrix<double, 2, 4> to_eigen(const owc::Mat2x4& m) {
  Eigen::Matrix<double, 2, 4> e;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 4; ++c) e(r, c) = m[r][c];
  return e;
}

/// Central finite-difference Jacobian of a R^2 -> R^2 map.
inline Eigen::Matrix2d fd_jacobian(
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& f,
    const Eigen::Vector2d& x, double eps = 1e-6) {
  Eigen::Matrix2d J;
  for (int c = 0; c < 2; ++c) {
    Eigen::Vector2d hi = x, lo = x;
    hi[c] += eps;
    lo[c] -= eps;
    J.col(c) = (f(hi) - f(lo)) / (2.0 * eps);
  }
  return J;
}

/// Smallest eigenvalue of the symmetric part of M (definiteness probe).
inline double min_sym_eigenvalue(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (M + M.transpose()));
  return es.eigenvalues().minCoeff();
}

/// Exact solution of the affine boundary ODE with frozen traces:
///   G' = B G + c,  B = [[0, -1/(alpha rho)], [gamma_2, -gamma_1]],
///   c = (-J/alpha, 0),  J = jump of g zeta + q^2/(2 h^2).
/// Computed with Eigen's matrix exponential: G(t) = G_p + e^{Bt} (G0 - G_p),
/// B G_p = -c (B is invertible whenever gamma_2 > 0).
inline Eigen::Vector2d frozen_ode_solution(const owc::PhysicalParams& p,
                                           double trace_jump,
                                           const Eigen::Vector2d& G0,
                                           double t) {
  Eigen::Matrix2d B;
  B << 0.0, -1.0 / (p.alpha * p.rho), p.gamma_2, -p.gamma_1;
  const Eigen::Vector2d c(-trace_jump / p.alpha, 0.0);
  const Eigen::Vector2d Gp = B.fullPivLu().solve(-c);
  const Eigen::Matrix2d E = (B * t).exp();
  return Gp + E * (G0 - Gp);
}

/// Trapezoid rule on equally spaced samples.
inline double trapezoid(const std::vector<double>& y, double dt) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) s += 0.5 * (y[k] + y[k + 1]);
  return s * dt;
}

}  // namespace oracle
