#include "owc/coupling.hpp"

#include <cmath>

namespace owc::coupling {

ThetaRate theta(const BoundaryState& G, const WallTraces& tr,
                const PhysicalParams& p) {
  const double hl = swe::wet_depth(tr.left);
  const double hr = swe::wet_depth(tr.right);
  const double bernoulli_l = p.g * tr.left.zeta + tr.left.q * tr.left.q / (2.0 * hl * hl);
  const double bernoulli_r = p.g * tr.right.zeta + tr.right.q * tr.right.q / (2.0 * hr * hr);
  ThetaRate th;
  th.dq_i = -jump(bernoulli_l, bernoulli_r) / p.alpha - G.P_ch / (p.alpha * p.rho);
  th.dP_ch = -p.gamma_1 * G.P_ch + p.gamma_2 * G.q_i;
  return th;
}

Vec2 boundary_data(const BoundaryState& G) { return {{0.0, G.q_i}}; }

Mat2 boundary_data_jacobian() { return {{{0.0, 0.0}, {1.0, 0.0}}}; }

Vec2 step_transmission_residual(const swe::CellState& left,
                                const swe::CellState& right) {
  return {{right.zeta - left.zeta, right.q - left.q}};
}

swe::CellState wall_mirror(const swe::CellState& inner) {
  return {inner.zeta, -inner.q, inner.h_rest};
}

namespace {

// Root of f(h) = q/h + sign*2*sqrt(g h) - R on the subcritical branch.
// Safeguarded bisection + Newton; bracket [1e-6 h_scale, 10 h_scale]
// intersected with the subcritical branch h > (q^2/g)^{1/3}.
double solve_subcritical_depth(double q, double R, int sign, double g,
                               double h_scale, double h_guess) {
  auto f = [&](double h) { return q / h + sign * 2.0 * std::sqrt(g * h) - R; };
  auto df = [&](double h) {
    return -q / (h * h) + sign * std::sqrt(g / h);
  };

  // Exact-data short circuit; keeps rest states bitwise at rest.
  if (h_guess > 0.0 && f(h_guess) == 0.0) return h_guess;

  double lo = 1e-6 * h_scale;
  if (q != 0.0) {
    const double h_crit = std::cbrt(q * q / g);
    lo = std::max(lo, h_crit * (1.0 + 1e-12));
  }
  double hi = 10.0 * h_scale;
  if (!(lo < hi)) throw NoSolution("invariant closure: empty subcritical bracket");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw NoSolution("invariant closure: no sign change in [1e-6 h_0, 10 h_0]");

  const double tol = 1e-12 * h_scale;
  double h = (h_guess > lo && h_guess < hi) ? h_guess : 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fh = f(h);
    if (fh == 0.0) return h;
    if (flo * fh < 0.0) {
      hi = h;
    } else {
      lo = h;
      flo = fh;
    }
    double step_to = h - fh / df(h);  // Newton candidate
    if (!(step_to > lo && step_to < hi)) step_to = 0.5 * (lo + hi);
    if (std::abs(step_to - h) <= tol) return step_to;
    h = step_to;
  }
  return h;
}

}  // namespace

StepFace step_face(const swe::CellState& left_inner,
                   const swe::CellState& right_inner, double g) {
  const double hs = left_inner.h_rest;
  const double h0 = right_inner.h_rest;
  const double rp = swe::riemann_invariants(left_inner, g).r_plus;
  const double rm = swe::riemann_invariants(right_inner, g).r_minus;

  // q(zeta) from the left invariant; residual of the right invariant.
  auto q_of = [&](double zeta) {
    const double hl = hs + zeta;
    return hl * (rp - 2.0 * std::sqrt(g * hl));
  };
  auto f = [&](double zeta) {
    const double hr = h0 + zeta;
    return q_of(zeta) / hr - 2.0 * std::sqrt(g * hr) - rm;
  };

  double zeta = average(left_inner.zeta, right_inner.zeta);
  const double scale = std::max(h0, hs);
  if (f(zeta) != 0.0) {
    double lo = -h0 * (1.0 - 1e-6);
    double hi = 10.0 * scale;
    double flo = f(lo), fhi = f(hi);
    if (flo * fhi > 0.0)
      throw NoSolution("step transmission: no root bracketed at x = 0");
    const double tol = 1e-12 * scale;
    if (!(zeta > lo && zeta < hi)) zeta = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double fz = f(zeta);
      if (fz == 0.0) break;
      if (flo * fz < 0.0) {
        hi = zeta;
      } else {
        lo = zeta;
        flo = fz;
      }
      // secant/bisection hybrid: derivative via small centered difference
      const double dz = std::max(1e-8, 1e-8 * std::abs(zeta));
      const double dfz = (f(zeta + dz) - f(zeta - dz)) / (2.0 * dz);
      double next = dfz != 0.0 ? zeta - fz / dfz : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - zeta) <= tol) {
        zeta = next;
        break;
      }
      zeta = next;
    }
  }

  const double q = q_of(zeta);
  return {{zeta, q, hs}, {zeta, q, h0}};
}

swe::CellState inflow_state(double target_zeta, double r_minus_out,
                            double h_rest, double g) {
  const double h = h_rest + target_zeta;
  if (!(h > 0.0)) throw DryState(h);
  const double c = std::sqrt(g * h);
  const double u = r_minus_out + 2.0 * c;
  if (!(std::abs(u) < c))
    throw SupercriticalInflow("prescribed inflow state has |u| >= sqrt(g h)");
  return {target_zeta, h * u, h_rest};
}

swe::CellState open_state(double r_minus_out, double h_rest, double g) {
  const double r_plus_rest = 2.0 * std::sqrt(g * h_rest);
  const double u = 0.5 * (r_plus_rest + r_minus_out);
  const double c = 0.25 * (r_plus_rest - r_minus_out);
  if (!(c > 0.0) || !(std::abs(u) < c))
    throw SupercriticalInflow("radiation state not subcritical");
  const double h = c * c / g;
  return {h - h_rest, h * u, h_rest};
}

SidewallFaces sidewall_closure(const swe::CellState& left_inner,
                               const swe::CellState& right_inner,
                               const BoundaryState& G,
                               const PhysicalParams& p) {
  const double rp = swe::riemann_invariants(left_inner, p.g).r_plus;
  const double rm = swe::riemann_invariants(right_inner, p.g).r_minus;
  const double hl = solve_subcritical_depth(G.q_i, rp, +1, p.g, p.h_0,
                                            left_inner.depth());
  const double hr = solve_subcritical_depth(G.q_i, rm, -1, p.g, p.h_0,
                                            right_inner.depth());
  return {{hl - left_inner.h_rest, G.q_i, left_inner.h_rest},
          {hr - right_inner.h_rest, G.q_i, right_inner.h_rest}};
}

namespace {

struct FaceTrace {
  swe::CellState value;
  swe::CellState dx;  // one-sided spatial derivative (same h_rest tag)
};

// Quadratic extrapolation of cell-center data to a sub-domain face, with the
// matching second-order one-sided derivative. side = +1: face at the right
// end of the field (stencil to the left); side = -1: face at the left end.
FaceTrace face_trace(const SubField& f, double dx, double h_rest, int side) {
  const int n = f.size();
  auto pick = [&](const std::vector<double>& y, int k) {
    return side > 0 ? y[n - 1 - k] : y[k];
  };
  auto value = [&](const std::vector<double>& y) {
    return (15.0 * pick(y, 0) - 10.0 * pick(y, 1) + 3.0 * pick(y, 2)) / 8.0;
  };
  auto deriv = [&](const std::vector<double>& y) {
    const double d = (-2.0 * pick(y, 0) + 3.0 * pick(y, 1) - pick(y, 2)) / dx;
    return side > 0 ? -d : d;
  };
  FaceTrace tr;
  tr.value = {value(f.zeta), value(f.q), h_rest};
  tr.dx = {deriv(f.zeta), deriv(f.q), h_rest};
  return tr;
}

}  // namespace

CompatReport compatibility_check(const FieldState& u0, const BoundaryState& G0,
                                 int order, const PhysicalParams& p,
                                 const DomainLayout& lay) {
  for (Dom d : {Dom::EplusL, Dom::EplusR})
    if (u0.sub(d).size() < 3 || u0.sub(d).size() != lay.cells(d))
      throw DimensionMismatch("compatibility check needs >= 3 cells per side");

  const FaceTrace lw = face_trace(u0.epl, lay.dx_pl, p.h_0, +1);
  const FaceTrace rw = face_trace(u0.epr, lay.dx_pr, p.h_0, -1);

  CompatReport rep;
  rep.order = order > 0 ? 1 : 0;

  const Vec2 v0 = boundary_data(G0);
  rep.r0 = Vec2{{jump(lw.value.q, rw.value.q) - v0[0],
                 average(lw.value.q, rw.value.q) - v0[1]}};
  rep.norm0 = std::sqrt(rep.r0[0] * rep.r0[0] + rep.r0[1] * rep.r0[1]);

  if (rep.order >= 1) {
    // u1 = -A(u0) dx u0 at each wall trace.
    auto u1 = [&](const FaceTrace& tr) {
      const Mat2 a = swe::jacobian(tr.value, p.g);
      const Vec2 du{{tr.dx.zeta, tr.dx.q}};
      const Vec2 adu = mul(a, du);
      return Vec2{{-adu[0], -adu[1]}};
    };
    const Vec2 u1l = u1(lw);
    const Vec2 u1r = u1(rw);
    const ThetaRate th = theta(G0, {lw.value, rw.value}, p);
    // r1 = M u1| - D_V Theta = (jump(q1), avg(q1) - Theta_1)
    rep.r1 = Vec2{{jump(u1l[1], u1r[1]), average(u1l[1], u1r[1]) - th.dq_i}};
    rep.norm1 = std::sqrt(rep.r1[0] * rep.r1[0] + rep.r1[1] * rep.r1[1]);
  }
  return rep;
}

PressureProfile interior_pressure(double dq_i_dt, const PhysicalParams& p) {
  PressureProfile pr;
  pr.slope = -(p.rho / p.h_w) * dq_i_dt;
  pr.p_left = p.P_atm;
  pr.p_right = p.P_atm + pr.slope * 2.0 * p.r;
  return pr;
}

}  // namespace owc::coupling
