#pragma once

// Structure/chamber coupling: the boundary ODE right-hand side Theta, the
// transmission and characteristic ghost closures at the four interfaces, the
// compatibility gate on initial data, and the reconstructed interior pressure.
//
// Jump convention: jump(f) = f(right side) - f(left side); at the structure
// the left side is the l_0 - r wall trace (from E^+_l) and the right side the
// l_0 + r wall trace (from E^+_r).

#include <vector>

#include "owc/algebra.hpp"
#include "owc/params.hpp"
#include "owc/swe.hpp"

namespace owc::coupling {

inline double jump(double left, double right) { return right - left; }
inline double average(double left, double right) { return 0.5 * (left + right); }

/// Wall traces feeding the boundary ODE (both sides have rest depth h_0).
struct WallTraces {
  swe::CellState left;   // trace at l_0 - r (from E^+_l)
  swe::CellState right;  // trace at l_0 + r (from E^+_r)
};

struct ThetaRate {
  double dq_i = 0.0;
  double dP_ch = 0.0;
};

/// Theta(G, traces):
///   dq_i/dt  = -(1/alpha) jump(g zeta + q^2/(2 h^2)) - P_ch/(alpha rho)
///   dP_ch/dt = -gamma_1 P_ch + gamma_2 q_i
ThetaRate theta(const BoundaryState& G, const WallTraces& tr,
                const PhysicalParams& p);

/// Boundary data of the 4x4 transmission problem: V(G) = (0, q_i).
Vec2 boundary_data(const BoundaryState& G);

/// Jacobian D_V of V with respect to G = (q_i, P_ch): [[0,0],[1,0]].
Mat2 boundary_data_jacobian();

/// Residual of the step continuity conditions at x = 0: (zeta_r - zeta_l,
/// q_r - q_l) of the one-sided face values. The solver drives this to zero
/// through the single-valued step face state.
Vec2 step_transmission_residual(const swe::CellState& left,
                                const swe::CellState& right);

/// Mirror ghost for a solid wall: (zeta, -q).
swe::CellState wall_mirror(const swe::CellState& inner);

/// Single-valued face state at the bottom step: continuity of zeta and q
/// with the outgoing invariants of both sides (R_+ carried from the E^- side
/// at rest depth h_s, R_- from the E^+_l side at h_0). Safeguarded
/// bisection + Newton on the scalar reduction in zeta*; exact at rest.
struct StepFace {
  swe::CellState left;   // (zeta*, q*) with h_rest = h_s
  swe::CellState right;  // (zeta*, q*) with h_rest = h_0
};
StepFace step_face(const swe::CellState& left_inner,
                   const swe::CellState& right_inner, double g);

/// Ghost/face state for the truncated E^- end with prescribed surface
/// elevation: h = h_rest + target_zeta, q from the outgoing invariant
/// R_- = q/h - 2 sqrt(g h) carried out of the domain.
/// Throws SupercriticalInflow when the reconstructed state is not subcritical.
swe::CellState inflow_state(double target_zeta, double r_minus_out,
                            double h_rest, double g);

/// Non-reflecting variant: incoming invariant pinned at its rest value.
swe::CellState open_state(double r_minus_out, double h_rest, double g);

/// Face states at the two structure side walls: q = q_i exactly, depth from
/// the outgoing invariant of the adjacent exterior cell (R_+ at l_0 - r,
/// R_- at l_0 + r). Safeguarded bisection + Newton, bracket
/// h in [1e-6 h_0, 10 h_0], tolerance 1e-12 h_0.
struct SidewallFaces {
  swe::CellState left;   // face at l_0 - r
  swe::CellState right;  // face at l_0 + r
};
SidewallFaces sidewall_closure(const swe::CellState& left_inner,
                               const swe::CellState& right_inner,
                               const BoundaryState& G,
                               const PhysicalParams& p);

/// Compatibility residuals of Definition-4.5 type at orders 0 and 1:
///   r0 = M u0| - V(G0)
///   r1 = M u1| - D_V Theta(G0, traces),  u1 = -A(u0) dx u0 (one-sided
///        second-order stencils at the walls).
struct CompatReport {
  Vec2 r0;
  Vec2 r1;
  double norm0 = 0.0;
  double norm1 = 0.0;
  int order = 0;  // highest order evaluated
};
CompatReport compatibility_check(const FieldState& u0, const BoundaryState& G0,
                                 int order, const PhysicalParams& p,
                                 const DomainLayout& lay);

/// Interior surface pressure reconstructed from the ODE:
/// dx P = -(rho/h_w) dq_i/dt, anchored P(l_0 - r) = P_atm. The jump over the
/// structure equals rho jump(g zeta + q^2/(2h^2)) + P_ch when dq_i/dt came
/// from theta.
struct PressureProfile {
  double p_left = 0.0;   // P(l_0 - r) = P_atm
  double p_right = 0.0;  // P(l_0 + r)
  double slope = 0.0;    // dx P
};
PressureProfile interior_pressure(double dq_i_dt, const PhysicalParams& p);

/// Time series of interface traces recorded by the solver. The PDE columns
/// hold inner-adjacent cell values (so transmission residuals stay visible);
/// q_i / P_ch are the ODE state.
struct TraceRecord {
  std::vector<double> t;
  std::vector<double> zeta_step_l, q_step_l, zeta_step_r, q_step_r;
  std::vector<double> zeta_lw, q_lw, zeta_rw, q_rw;
  std::vector<double> zeta_end, q_end;  // end wall l_1 (not in the CSV contract)
  std::vector<double> q_i, P_ch;
  std::size_t size() const { return t.size(); }
};

}  // namespace owc::coupling
