#include "owc/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace owc {

void PhysicalParams::derive() {
  h_w = h_0 + zeta_w;
  s = h_s - h_0;
  chamber_len = l_1 - (l_0 + r);
  alpha = (h_w != 0.0) ? 2.0 * r / h_w : std::numeric_limits<double>::infinity();
  gamma_1 = (h_ch != 0.0 && K != 0.0) ? gamma * P_atm / (h_ch * K)
                                      : std::numeric_limits<double>::infinity();
  gamma_2 = (h_ch != 0.0 && chamber_len != 0.0)
                ? gamma * P_atm / (h_ch * chamber_len)
                : std::numeric_limits<double>::infinity();
}

PhysicalParams PhysicalParams::defaults() {
  PhysicalParams p;
  p.derive();
  return p;
}

namespace {
void require(ValidationReport& rep, bool ok, const std::string& key,
             const std::string& msg) {
  if (!ok) rep.violations.push_back({key, msg});
}
bool close(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= 1e-12 * scale;
}
}  // namespace

ValidationReport validate_params(const PhysicalParams& p) {
  ValidationReport rep;
  require(rep, p.g > 0.0, "g", "gravity must be positive");
  require(rep, p.rho > 0.0, "rho", "density must be positive");
  require(rep, p.h_0 > 0.0, "h_0", "rest depth h_0 must be positive");
  require(rep, p.h_s > p.h_0, "h_s",
          "step size s = h_s - h_0 must be positive (h_s > h_0)");
  require(rep, p.zeta_w > -p.h_0 && p.zeta_w < 0.0, "zeta_w",
          "immersion requires -h_0 < zeta_w < 0 (so 0 < h_w < h_0)");
  require(rep, p.r > 0.0, "r", "structure half-width must be positive");
  require(rep, p.l_0 - p.r > 0.0, "l_0", "left wall l_0 - r must lie right of the step");
  require(rep, p.l_0 + p.r < p.l_1, "l_1", "end wall must lie right of the structure");
  require(rep, p.gamma > 1.0, "gamma", "adiabatic index must exceed 1");
  require(rep, p.P_atm > 0.0, "P_atm", "atmospheric pressure must be positive");
  require(rep, p.h_ch > 0.0, "h_ch", "chamber height must be positive");
  require(rep, p.K > 0.0, "K", "turbine resistance scale must be positive");

  PhysicalParams q = p;
  q.derive();
  require(rep, close(p.h_w, q.h_w), "h_w", "derived h_w inconsistent with h_0 + zeta_w");
  require(rep, close(p.s, q.s), "s", "derived s inconsistent with h_s - h_0");
  require(rep, close(p.alpha, q.alpha), "alpha", "derived alpha inconsistent with 2r/h_w");
  require(rep, close(p.gamma_1, q.gamma_1), "gamma_1",
          "derived gamma_1 inconsistent with gamma P_atm/(h_ch K)");
  require(rep, close(p.gamma_2, q.gamma_2), "gamma_2",
          "derived gamma_2 inconsistent with gamma P_atm/(h_ch |E+_r|)");
  require(rep, close(p.chamber_len, q.chamber_len), "chamber_len",
          "derived chamber length inconsistent with l_1 - (l_0 + r)");
  return rep;
}

void DomainLayout::derive(const PhysicalParams& p) {
  x_lw = p.l_0 - p.r;
  x_rw = p.l_0 + p.r;
  x_end = p.l_1;
  dx_minus = n_minus > 0 ? L_ext / n_minus : 0.0;
  dx_pl = n_pl > 0 ? x_lw / n_pl : 0.0;
  dx_pr = n_pr > 0 ? (x_end - x_rw) / n_pr : 0.0;
}

double DomainLayout::min_dx() const {
  return std::min({dx_minus, dx_pl, dx_pr});
}

ValidationReport validate_layout(const DomainLayout& lay) {
  ValidationReport rep;
  require(rep, lay.L_ext > 0.0, "L_ext", "truncation length must be positive");
  require(rep, lay.n_minus >= 4, "n_minus", "need at least 4 cells in E^-");
  require(rep, lay.n_pl >= 4, "n_pl", "need at least 4 cells in E^+_l");
  require(rep, lay.n_pr >= 4, "n_pr", "need at least 4 cells in E^+_r");
  require(rep, lay.dx_minus > 0.0 && lay.dx_pl > 0.0 && lay.dx_pr > 0.0,
          "dx", "layout not derived or degenerate (call derive())");
  return rep;
}

FieldState FieldState::rest(const DomainLayout& lay) {
  FieldState u;
  u.em.resize(lay.n_minus);
  u.epl.resize(lay.n_pl);
  u.epr.resize(lay.n_pr);
  return u;
}

InitialDataReport check_initial_data(const PhysicalParams& p,
                                     const DomainLayout& lay,
                                     const FieldState& u0, double c0_threshold,
                                     double c1_threshold) {
  for (Dom d : {Dom::Eminus, Dom::EplusL, Dom::EplusR}) {
    const SubField& f = u0.sub(d);
    if (f.size() != lay.cells(d) || f.q.size() != f.zeta.size())
      throw DimensionMismatch(std::string("field size on ") + dom_tag(d) +
                              " does not match layout");
  }

  InitialDataReport rep;
  rep.c0_threshold = c0_threshold > 0.0 ? c0_threshold : 1e-3 * p.h_0;
  rep.c1_threshold = c1_threshold > 0.0 ? c1_threshold : 1e-3 * p.g * p.h_0;
  rep.c0 = std::numeric_limits<double>::infinity();
  rep.c1 = std::numeric_limits<double>::infinity();

  for (Dom d : {Dom::Eminus, Dom::EplusL, Dom::EplusR}) {
    const SubField& f = u0.sub(d);
    const double hr = rest_depth(p, d);
    for (int i = 0; i < f.size(); ++i) {
      const double h = hr + f.zeta[i];
      rep.c0 = std::min(rep.c0, h);
      if (h > 0.0) {
        const double u = f.q[i] / h;
        rep.c1 = std::min(rep.c1, p.g * h - u * u);
      } else {
        rep.c1 = std::min(rep.c1, -std::numeric_limits<double>::infinity());
      }
    }
  }
  rep.pass_depth = rep.c0 >= rep.c0_threshold;
  rep.pass_subcritical = rep.c1 >= rep.c1_threshold;
  return rep;
}

}  // namespace owc
