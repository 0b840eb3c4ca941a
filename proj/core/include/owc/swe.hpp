#pragma once

// Pointwise shallow-water algebra: fluxes, Jacobians, eigenstructure,
// Riemann invariants, and the boundary calculus of the 4x4 two-sided
// transmission problem (condition matrix M, Lopatinskii determinant,
// symmetrizers, maximal dissipativity certificate).
//
// Conventions:
//   state u = (zeta, q), depth h = h_rest + zeta, velocity u = q/h
//   A(u) = [[0, 1], [g h - q^2/h^2, 2 q/h]]
//   lambda_pm = q/h +- sqrt(g h), right eigenvectors (1, lambda_pm)^T
//   subcritical iff g h - q^2/h^2 > 0 (equivalently lambda_- < 0 < lambda_+)

#include "owc/algebra.hpp"
#include "owc/errors.hpp"

namespace owc::swe {

struct CellState {
  double zeta = 0.0;
  double q = 0.0;
  double h_rest = 1.0;
  double depth() const { return h_rest + zeta; }
};

/// Depth with the wetness guard every op shares.
double wet_depth(const CellState& u);

/// Conservative flux in well-balanced rest-offset form:
/// F(u) = (q, q^2/h + g h^2/2 - g h_rest^2/2).
Vec2 flux(const CellState& u, double g);

/// Quasilinear Jacobian A(u).
Mat2 jacobian(const CellState& u, double g);

struct EigenPair {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  Vec2 e_plus;   // unit (1, lambda_+)^T / norm
  Vec2 e_minus;  // unit (1, lambda_-)^T / norm
};

/// Eigenstructure of A(u); throws CriticalFlow when subcriticality fails.
EigenPair eigen(const CellState& u, double g);

struct RiemannInvariants {
  double r_plus = 0.0;   // q/h + 2 sqrt(g h)
  double r_minus = 0.0;  // q/h - 2 sqrt(g h)
};

RiemannInvariants riemann_invariants(const CellState& u, double g);

/// Rest-offset variant R~_pm = R_pm -+ 2 sqrt(g h_rest): zero at rest,
/// convenient for inflow conditioning.
RiemannInvariants riemann_invariants_offset(const CellState& u, double g);

/// Transmission condition matrix: M u| = (jump(q), avg(q)) with
/// u| = (zeta^-, q^-, zeta^+, q^+) the two-sided wall traces.
Mat2x4 boundary_matrix();

struct Lopatinskii {
  Mat2 L;
  double det = 0.0;
  double inv_norm = 0.0;  // ||L^{-1}||_2
};

/// Lopatinskii matrix L = M E with E carrying the outgoing eigenvectors
/// (e_- of A(u^-), e_+ of A(u^+)) scaled to second component 1; with that
/// scaling L = [[-1, 1], [1/2, 1/2]] independent of the traces.
Lopatinskii lopatinskii(const CellState& u_minus, const CellState& u_plus,
                        double g);

/// Kreiss/Friedrichs symmetrizer S(u) = [[g h + q^2/h^2, -q/h], [-q/h, 1]]:
/// symmetric, positive definite, S A symmetric, det S = g h.
Mat2 symmetrizer(const CellState& u, double g);

/// 4x4 system matrix of the two-sided problem: diag(-A(u^-), A(u^+)).
Mat4 system_matrix4(const CellState& u_minus, const CellState& u_plus, double g);

/// Equal-weight block symmetrizer diag(S(u^-), S(u^+)). Symmetrizes the 4x4
/// system but is NOT boundary-dissipative (kernel form degenerates at rest);
/// kept as the reference/negative case.
Mat4 symmetrizer4(const CellState& u_minus, const CellState& u_plus, double g);

/// Characteristic-weighted symmetrizer: each block is
/// E^{-T} diag(2 g h w_+, 2 g h w_-) E^{-1} with weight `incoming_weight`
/// < 1 on the incoming mode of that block (e_- on the minus side, e_+ on the
/// plus side) and 1 on the outgoing mode. incoming_weight = 1 reproduces
/// symmetrizer4. This is the assembly that certifies maximal dissipativity.
Mat4 kreiss_symmetrizer4(const CellState& u_minus, const CellState& u_plus,
                         double g, double incoming_weight = 0.25);

/// Weighted single-block version (exposed for tests).
Mat2 weighted_symmetrizer(const CellState& u, double g, double w_plus,
                          double w_minus);

struct Dissipativity {
  double c2 = 0.0;          // certified coercivity constant
  double C2 = 0.0;          // certified boundary-control constant
  double kernel_min = 0.0;  // min over unit ker M of -v^T S4 A4 v
};

/// Certify v^T (S4 A4) v <= -c2 |v|^2 + C2 |M v|^2 for all v in R^4.
/// kernel_min is found by exact eigenvalues of the form restricted to
/// ker M = span{e1, e3}; c2 = kernel_min / 2; C2 by doubling + bisection on
/// lambda_max(sym(S4 A4) + c2 I - C2 M^T M) <= 0.
/// Throws NotDissipative when kernel_min <= 0.
Dissipativity boundary_dissipativity(const Mat4& S4, const Mat4& A4,
                                     const Mat2x4& M);

}  // namespace owc::swe
