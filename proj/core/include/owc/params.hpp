#pragma once

// Device geometry, fluid constants and the discrete state containers.
//
// Geometry (1d, structure walls at l_0 -+ r, step at x = 0):
//
//   x: -L_ext ........ 0 ........ l_0-r ===== l_0+r ........ l_1
//       E^- (depth h_s)  E^+_l (h_0)   interior     E^+_r (h_0)  wall
//
// Under the structure the surface is pinned at zeta_w (immersion depth
// h_w = h_0 + zeta_w) and the discharge is the single dof q_i(t); the air
// chamber above E^+_r carries the pressure dof P_ch(t).

#include <string>
#include <vector>

#include "owc/errors.hpp"

namespace owc {

struct PhysicalParams {
  // primitive fields (config keys use exactly these names)
  double g = 9.81;         // gravity [m/s^2]
  double rho = 1000.0;     // water density [kg/m^3]
  double h_s = 2.0;        // rest depth in E^- [m]
  double h_0 = 1.0;        // rest depth in E^+ [m]
  double zeta_w = -0.5;    // pinned surface under the structure, in (-h_0, 0)
  double l_0 = 5.0;        // structure center [m]
  double r = 0.5;          // structure half-width [m]
  double l_1 = 8.0;        // end wall [m]
  double gamma = 1.4;      // adiabatic index of air
  double P_atm = 101325.0; // atmospheric pressure [Pa]
  double h_ch = 3.0;       // air chamber height [m]
  double K = 50000.0;      // turbine resistance scale (gamma_1 = gamma P_atm / (h_ch K))

  // derived fields, recomputed deterministically by derive()
  double h_w = 0.0;         // h_0 + zeta_w
  double s = 0.0;           // step size h_s - h_0
  double alpha = 0.0;       // 2 r / h_w
  double gamma_1 = 0.0;     // gamma P_atm / (h_ch K)
  double gamma_2 = 0.0;     // gamma P_atm / (h_ch |E^+_r|)
  double chamber_len = 0.0; // |E^+_r| = l_1 - (l_0 + r)

  /// Recompute every derived field from the primitives.
  void derive();

  /// Primitives + derive() in one call.
  static PhysicalParams defaults();
};

struct ValidationItem {
  std::string key;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationItem> violations;
  bool pass() const { return violations.empty(); }
};

/// Check every parameter invariant, including consistency of the derived
/// fields with the primitives (so manual overrides are flagged and require
/// force=true downstream). Pure: never throws, never mutates.
ValidationReport validate_params(const PhysicalParams& p);

enum class Dom { Eminus = 0, EplusL = 1, EplusR = 2 };
inline const char* dom_tag(Dom d) {
  switch (d) {
    case Dom::Eminus: return "E-";
    case Dom::EplusL: return "E+l";
    case Dom::EplusR: return "E+r";
  }
  return "?";
}

struct DomainLayout {
  double L_ext = 10.0;  // truncation length of E^-
  int n_minus = 400;
  int n_pl = 180;
  int n_pr = 100;

  // derived by derive(p): interface positions and cell widths
  double x_lw = 0.0, x_rw = 0.0, x_end = 0.0;  // l_0 - r, l_0 + r, l_1
  double dx_minus = 0.0, dx_pl = 0.0, dx_pr = 0.0;

  void derive(const PhysicalParams& p);

  int cells(Dom d) const {
    return d == Dom::Eminus ? n_minus : (d == Dom::EplusL ? n_pl : n_pr);
  }
  double dx(Dom d) const {
    return d == Dom::Eminus ? dx_minus : (d == Dom::EplusL ? dx_pl : dx_pr);
  }
  double left_edge(Dom d) const {
    return d == Dom::Eminus ? -L_ext : (d == Dom::EplusL ? 0.0 : x_rw);
  }
  double cell_center(Dom d, int i) const {
    return left_edge(d) + (i + 0.5) * dx(d);
  }
  double min_dx() const;
  int total_cells() const { return n_minus + n_pl + n_pr; }
};

ValidationReport validate_layout(const DomainLayout& lay);

struct SubField {
  std::vector<double> zeta;
  std::vector<double> q;
  void resize(int n) { zeta.assign(n, 0.0); q.assign(n, 0.0); }
  int size() const { return static_cast<int>(zeta.size()); }
};

/// Exterior free-surface state on the three sub-domains.
struct FieldState {
  SubField em, epl, epr;
  double t = 0.0;

  SubField& sub(Dom d) { return d == Dom::Eminus ? em : (d == Dom::EplusL ? epl : epr); }
  const SubField& sub(Dom d) const {
    return d == Dom::Eminus ? em : (d == Dom::EplusL ? epl : epr);
  }
  static FieldState rest(const DomainLayout& lay);
};

/// Interior/chamber ODE state G = (q_i, P_ch).
struct BoundaryState {
  double q_i = 0.0;
  double P_ch = 0.0;
  double t = 0.0;
};

/// Rest depth of a sub-domain.
inline double rest_depth(const PhysicalParams& p, Dom d) {
  return d == Dom::Eminus ? p.h_s : p.h_0;
}

struct InitialDataReport {
  double c0 = 0.0;  // min over cells of h_rest + zeta
  double c1 = 0.0;  // min over cells of g h - q^2 / h^2
  double c0_threshold = 0.0;
  double c1_threshold = 0.0;
  bool pass_depth = false;
  bool pass_subcritical = false;
  bool pass() const { return pass_depth && pass_subcritical; }
};

/// Assumption gate on discrete initial data. Thresholds <= 0 select the
/// defaults c0 = 1e-3 h_0, c1 = 1e-3 g h_0. Throws DimensionMismatch if the
/// field sizes do not match the layout.
InitialDataReport check_initial_data(const PhysicalParams& p,
                                     const DomainLayout& lay,
                                     const FieldState& u0,
                                     double c0_threshold = 0.0,
                                     double c1_threshold = 0.0);

}  // namespace owc
