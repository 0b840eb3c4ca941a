#include "owc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "owc/diagnostics.hpp"
#include "owc/errors.hpp"

namespace owc::solver {

namespace {

using coupling::WallTraces;
using swe::CellState;

inline std::size_t usize(const SubField& f) {
  return static_cast<std::size_t>(f.size());
}

inline CellState cell(const SubField& f, double h_rest, int j) {
  return CellState{f.zeta[static_cast<std::size_t>(j)],
                   f.q[static_cast<std::size_t>(j)], h_rest};
}

inline double wave_speed(const CellState& c, double g) {
  const double h = swe::wet_depth(c);
  return std::abs(c.q / h) + std::sqrt(g * h);
}

Vec2 rusanov_flux(const CellState& l, const CellState& r, double g) {
  const Vec2 fl = swe::flux(l, g);
  const Vec2 fr = swe::flux(r, g);
  const double s = std::max(wave_speed(l, g), wave_speed(r, g));
  return Vec2{0.5 * (fl[0] + fr[0]) - 0.5 * s * (r.zeta - l.zeta),
              0.5 * (fl[1] + fr[1]) - 0.5 * s * (r.q - l.q)};
}

Vec2 hll_flux(const CellState& l, const CellState& r, double g) {
  const double hl = swe::wet_depth(l);
  const double hr = swe::wet_depth(r);
  const double ul = l.q / hl;
  const double ur = r.q / hr;
  const double cl = std::sqrt(g * hl);
  const double cr = std::sqrt(g * hr);
  const double sl = std::min(ul - cl, ur - cr);
  const double sr = std::max(ul + cl, ur + cr);
  const Vec2 fl = swe::flux(l, g);
  const Vec2 fr = swe::flux(r, g);
  if (sl >= 0.0) return fl;
  if (sr <= 0.0) return fr;
  const double inv = 1.0 / (sr - sl);
  return Vec2{
      (sr * fl[0] - sl * fr[0] + sl * sr * (r.zeta - l.zeta)) * inv,
      (sr * fl[1] - sl * fr[1] + sl * sr * (r.q - l.q)) * inv};
}

inline double minmod(double a, double b) {
  if (a > 0.0 && b > 0.0) return std::min(a, b);
  if (a < 0.0 && b < 0.0) return std::max(a, b);
  return 0.0;
}

struct StageRhs {
  FieldState du;  // d/dt of (zeta, q); du.t unused
  coupling::ThetaRate dg{};
  double max_speed = 0.0;
  CellState face_lw{};  // sidewall face states fed to Theta
  CellState face_rw{};
};

/// Fluxes at the interior faces of one sub-domain (faces 1 .. n-1).
/// The closure faces 0 and n are filled by the caller.
void interior_fluxes(const SubField& f, double h_rest, double g, Scheme scheme,
                     std::vector<Vec2>& F) {
  const int n = f.size();
  if (scheme != Scheme::muscl_rusanov) {
    for (int j = 1; j < n; ++j) {
      const CellState l = cell(f, h_rest, j - 1);
      const CellState r = cell(f, h_rest, j);
      F[static_cast<std::size_t>(j)] = (scheme == Scheme::hll)
                                           ? hll_flux(l, r, g)
                                           : rusanov_flux(l, r, g);
    }
    return;
  }
  // MUSCL: minmod slopes, first-order at the closure-adjacent cells.
  std::vector<double> sz(static_cast<std::size_t>(n), 0.0);
  std::vector<double> sq(static_cast<std::size_t>(n), 0.0);
  for (int j = 1; j + 1 < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    sz[k] = minmod(f.zeta[k] - f.zeta[k - 1], f.zeta[k + 1] - f.zeta[k]);
    sq[k] = minmod(f.q[k] - f.q[k - 1], f.q[k + 1] - f.q[k]);
  }
  for (int j = 1; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const CellState l{f.zeta[k - 1] + 0.5 * sz[k - 1],
                      f.q[k - 1] + 0.5 * sq[k - 1], h_rest};
    const CellState r{f.zeta[k] - 0.5 * sz[k], f.q[k] - 0.5 * sq[k], h_rest};
    F[k] = rusanov_flux(l, r, g);
  }
}

StageRhs compute_rhs(const FieldState& u, const BoundaryState& g, double t,
                     const PhysicalParams& p, const DomainLayout& lay,
                     const SolverConfig& cfg, const ForcingSpec& forcing) {
  const double gr = p.g;
  StageRhs out;
  out.du.em.resize(u.em.size());
  out.du.epl.resize(u.epl.size());
  out.du.epr.resize(u.epr.size());

  std::vector<Vec2> Fm(usize(u.em) + 1);
  std::vector<Vec2> Fl(usize(u.epl) + 1);
  std::vector<Vec2> Fr(usize(u.epr) + 1);
  interior_fluxes(u.em, p.h_s, gr, cfg.scheme, Fm);
  interior_fluxes(u.epl, p.h_0, gr, cfg.scheme, Fl);
  interior_fluxes(u.epr, p.h_0, gr, cfg.scheme, Fr);

  const CellState em_first = cell(u.em, p.h_s, 0);
  const CellState em_last = cell(u.em, p.h_s, lay.n_minus - 1);
  const CellState epl_first = cell(u.epl, p.h_0, 0);
  const CellState epl_last = cell(u.epl, p.h_0, lay.n_pl - 1);
  const CellState epr_first = cell(u.epr, p.h_0, 0);
  const CellState epr_last = cell(u.epr, p.h_0, lay.n_pr - 1);

  // Truncated end at -L_ext.
  switch (forcing.type) {
    case ForcingSpec::Type::none: {
      const CellState ghost = coupling::wall_mirror(em_first);
      Fm[0] = (cfg.scheme == Scheme::hll) ? hll_flux(ghost, em_first, gr)
                                          : rusanov_flux(ghost, em_first, gr);
      break;
    }
    case ForcingSpec::Type::sine: {
      const double target = forcing_target(forcing, t);
      const double rm = swe::riemann_invariants(em_first, gr).r_minus;
      const CellState gs = coupling::inflow_state(target, rm, p.h_s, gr);
      Fm[0] = swe::flux(gs, gr);
      break;
    }
    case ForcingSpec::Type::open: {
      const double rm = swe::riemann_invariants(em_first, gr).r_minus;
      const CellState gs = coupling::open_state(rm, p.h_s, gr);
      Fm[0] = swe::flux(gs, gr);
      break;
    }
  }

  // Step at x = 0: one transmitted state, its exact flux on both sides.
  const coupling::StepFace sf = coupling::step_face(em_last, epl_first, gr);
  Fm[usize(u.em)] = swe::flux(sf.left, gr);
  Fl[0] = swe::flux(sf.right, gr);

  // Side walls: depth from the outgoing invariant, discharge q_i exactly.
  const coupling::SidewallFaces sw =
      coupling::sidewall_closure(epl_last, epr_first, g, p);
  Fl[usize(u.epl)] = swe::flux(sw.left, gr);
  Fr[0] = swe::flux(sw.right, gr);
  out.face_lw = sw.left;
  out.face_rw = sw.right;

  // Reflecting wall at l_1.
  {
    const CellState ghost = coupling::wall_mirror(epr_last);
    Fr[usize(u.epr)] = (cfg.scheme == Scheme::hll)
                           ? hll_flux(epr_last, ghost, gr)
                           : rusanov_flux(epr_last, ghost, gr);
  }

  auto accumulate = [&](const SubField& f, double h_rest, double dx,
                        const std::vector<Vec2>& F, SubField& df) {
    const std::size_t n = usize(f);
    for (std::size_t j = 0; j < n; ++j) {
      df.zeta[j] = -(F[j + 1][0] - F[j][0]) / dx;
      df.q[j] = -(F[j + 1][1] - F[j][1]) / dx;
      out.max_speed =
          std::max(out.max_speed,
                   wave_speed(CellState{f.zeta[j], f.q[j], h_rest}, gr));
    }
  };
  accumulate(u.em, p.h_s, lay.dx_minus, Fm, out.du.em);
  accumulate(u.epl, p.h_0, lay.dx_pl, Fl, out.du.epl);
  accumulate(u.epr, p.h_0, lay.dx_pr, Fr, out.du.epr);

  out.dg = coupling::theta(g, WallTraces{sw.left, sw.right}, p);
  return out;
}

void add_scaled(State& s, double a, const StageRhs& k) {
  auto axpy = [a](SubField& f, const SubField& d) {
    for (std::size_t j = 0; j < usize(f); ++j) {
      f.zeta[j] += a * d.zeta[j];
      f.q[j] += a * d.q[j];
    }
  };
  axpy(s.u.em, k.du.em);
  axpy(s.u.epl, k.du.epl);
  axpy(s.u.epr, k.du.epr);
  s.g.q_i += a * k.dg.dq_i;
  s.g.P_ch += a * k.dg.dP_ch;
}

}  // namespace

double max_wave_speed(const FieldState& u, const PhysicalParams& p) {
  double s = 0.0;
  auto scan = [&](const SubField& f, double h_rest) {
    for (std::size_t j = 0; j < usize(f); ++j)
      s = std::max(s,
                   wave_speed(CellState{f.zeta[j], f.q[j], h_rest}, p.g));
  };
  scan(u.em, p.h_s);
  scan(u.epl, p.h_0);
  scan(u.epr, p.h_0);
  return s;
}

void step(double dt, State& s, const PhysicalParams& p,
          const DomainLayout& lay, const SolverConfig& cfg,
          const ForcingSpec& forcing) {
  const double t0 = s.u.t;
  const StageRhs k1 = compute_rhs(s.u, s.g, t0, p, lay, cfg, forcing);
  if (k1.max_speed > 0.0) {
    const double dt_max = cfg.cfl * lay.min_dx() / k1.max_speed;
    if (dt > dt_max * (1.0 + 1e-9)) throw CflViolation(dt, dt_max);
  }
  switch (cfg.stepper) {
    case Stepper::euler: {
      add_scaled(s, dt, k1);
      break;
    }
    case Stepper::rk2: {  // Heun
      State s1 = s;
      add_scaled(s1, dt, k1);
      const StageRhs k2 =
          compute_rhs(s1.u, s1.g, t0 + dt, p, lay, cfg, forcing);
      add_scaled(s, 0.5 * dt, k1);
      add_scaled(s, 0.5 * dt, k2);
      break;
    }
    case Stepper::rk4: {
      State s2 = s;
      add_scaled(s2, 0.5 * dt, k1);
      const StageRhs k2 =
          compute_rhs(s2.u, s2.g, t0 + 0.5 * dt, p, lay, cfg, forcing);
      State s3 = s;
      add_scaled(s3, 0.5 * dt, k2);
      const StageRhs k3 =
          compute_rhs(s3.u, s3.g, t0 + 0.5 * dt, p, lay, cfg, forcing);
      State s4 = s;
      add_scaled(s4, dt, k3);
      const StageRhs k4 = compute_rhs(s4.u, s4.g, t0 + dt, p, lay, cfg, forcing);
      add_scaled(s, dt / 6.0, k1);
      add_scaled(s, dt / 3.0, k2);
      add_scaled(s, dt / 3.0, k3);
      add_scaled(s, dt / 6.0, k4);
      break;
    }
  }
  s.u.t = t0 + dt;
  s.g.t = s.u.t;
}

namespace {

struct ScanResult {
  bool ok = true;
  Violation v;
  double min_depth = std::numeric_limits<double>::infinity();
  double min_margin = std::numeric_limits<double>::infinity();
};

ScanResult scan_state(const FieldState& u, const PhysicalParams& p,
                      const DomainLayout& lay) {
  ScanResult r;
  for (const Dom d : {Dom::Eminus, Dom::EplusL, Dom::EplusR}) {
    const SubField& f = u.sub(d);
    const double hr = rest_depth(p, d);
    for (std::size_t j = 0; j < usize(f); ++j) {
      const double z = f.zeta[j];
      const double q = f.q[j];
      const double h = hr + z;
      const bool finite = std::isfinite(z) && std::isfinite(q);
      const double margin =
          (finite && h > 0.0) ? p.g * h - (q / h) * (q / h)
                              : -std::numeric_limits<double>::infinity();
      if (!finite || h <= 0.0 || margin <= 0.0) {
        if (r.ok) {
          r.ok = false;
          r.v.t = u.t;
          r.v.x = lay.cell_center(d, static_cast<int>(j));
          r.v.dom = d;
          r.v.what = !finite        ? "non-finite state"
                     : (h <= 0.0)   ? "dry state"
                                    : "supercritical flow";
        }
      }
      r.min_depth = std::min(r.min_depth, h);
      r.min_margin = std::min(r.min_margin, margin);
    }
  }
  return r;
}

double end_influx(const FieldState& u, const PhysicalParams& p,
                  const ForcingSpec& forcing, double t) {
  if (forcing.type == ForcingSpec::Type::none) return 0.0;
  const CellState first{u.em.zeta[0], u.em.q[0], p.h_s};
  const double rm = swe::riemann_invariants(first, p.g).r_minus;
  CellState gs{};
  if (forcing.type == ForcingSpec::Type::sine)
    gs = coupling::inflow_state(forcing_target(forcing, t), rm, p.h_s, p.g);
  else
    gs = coupling::open_state(rm, p.h_s, p.g);
  const double h = swe::wet_depth(gs);
  const double v = gs.q / h;
  return (p.g * gs.zeta + 0.5 * v * v) * gs.q;
}

}  // namespace

std::string gate_refusal(const State& initial, const PhysicalParams& p,
                         const DomainLayout& lay, const SolverConfig& cfg) {
  std::string why;
  const ValidationReport vp = validate_params(p);
  const ValidationReport vl = validate_layout(lay);
  for (const auto& it : vp.violations)
    why += "params." + it.key + ": " + it.message + "; ";
  for (const auto& it : vl.violations)
    why += "layout." + it.key + ": " + it.message + "; ";
  if (!why.empty()) return why;
  const InitialDataReport idr = check_initial_data(
      p, lay, initial.u, cfg.c0_threshold, cfg.c1_threshold);
  if (!idr.pass())
    why += "initial data: c0 = " + std::to_string(idr.c0) +
           " (threshold " + std::to_string(idr.c0_threshold) + "), c1 = " +
           std::to_string(idr.c1) + " (threshold " +
           std::to_string(idr.c1_threshold) + "); ";
  const coupling::CompatReport comp =
      coupling::compatibility_check(initial.u, initial.g, 1, p, lay);
  if (comp.norm0 > cfg.compat_tol)
    why += "compatibility order 0: |r0| = " + std::to_string(comp.norm0) +
           "; ";
  if (comp.norm1 > cfg.compat_tol)
    why += "compatibility order 1: |r1| = " + std::to_string(comp.norm1) +
           "; ";
  return why;
}

SimulationResult run(const State& initial, const PhysicalParams& p,
                     const DomainLayout& lay, const SolverConfig& cfg,
                     const ForcingSpec& forcing) {
  SimulationResult res;
  if (!cfg.force) {
    const std::string why = gate_refusal(initial, p, lay, cfg);
    if (!why.empty()) {
      res.status = RunStatus::refused;
      res.refusal = why;
      return res;
    }
  }

  State s = initial;
  s.g.t = s.u.t;

  const diag::FrozenQuadratic quad(s.u, p);

  double last_dt = 0.0;
  double last_speed = max_wave_speed(s.u, p);

  auto record = [&](const ScanResult& scan) {
    // Traces: innermost cell values next to each interface, plus G.
    coupling::TraceRecord& tr = res.traces;
    tr.t.push_back(s.u.t);
    tr.zeta_step_l.push_back(s.u.em.zeta.back());
    tr.q_step_l.push_back(s.u.em.q.back());
    tr.zeta_step_r.push_back(s.u.epl.zeta.front());
    tr.q_step_r.push_back(s.u.epl.q.front());
    tr.zeta_lw.push_back(s.u.epl.zeta.back());
    tr.q_lw.push_back(s.u.epl.q.back());
    tr.zeta_rw.push_back(s.u.epr.zeta.front());
    tr.q_rw.push_back(s.u.epr.q.front());
    tr.zeta_end.push_back(s.u.epr.zeta.back());
    tr.q_end.push_back(s.u.epr.q.back());
    tr.q_i.push_back(s.g.q_i);
    tr.P_ch.push_back(s.g.P_ch);

    DiagSeries& dg = res.diag;
    dg.t.push_back(s.u.t);
    dg.mass.push_back(diag::total_mass(s.u, lay));
    double mz = 0.0;
    for (const double z : s.u.epr.zeta) mz += z;
    dg.mean_zeta_epr.push_back(mz / static_cast<double>(s.u.epr.size()));
    dg.energy_phys.push_back(diag::physical_energy(s.u, p, lay));
    dg.energy_quad.push_back(quad(s.u, lay));
    dg.energy_influx.push_back(end_influx(s.u, p, forcing, s.u.t));
    dg.cfl_ratio.push_back(last_dt > 0.0
                               ? last_speed * last_dt / lay.min_dx()
                               : 0.0);
    dg.min_depth.push_back(scan.min_depth);
    dg.min_margin.push_back(scan.min_margin);
  };

  ScanResult scan = scan_state(s.u, p, lay);
  if (!scan.ok) {
    res.status = RunStatus::assumption_violated;
    res.violation = scan.v;
    res.final_state = s;
    return res;
  }
  record(scan);

  const int nsnap = std::max(2, cfg.snapshots);
  std::vector<double> snap_times(static_cast<std::size_t>(nsnap));
  for (int k = 0; k < nsnap; ++k)
    snap_times[static_cast<std::size_t>(k)] =
        cfg.t_end * static_cast<double>(k) / static_cast<double>(nsnap - 1);
  std::size_t next_snap = 0;
  res.snapshots.emplace_back(s.u.t, s.u);
  ++next_snap;

  const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);
  long step_idx = 0;
  while (s.u.t < cfg.t_end - t_eps) {
    last_speed = max_wave_speed(s.u, p);
    double dt = (cfg.dt_fixed > 0.0)
                    ? cfg.dt_fixed
                    : (last_speed > 0.0
                           ? cfg.cfl * lay.min_dx() / last_speed
                           : cfg.t_end - s.u.t);
    dt = std::min(dt, cfg.t_end - s.u.t);
    try {
      step(dt, s, p, lay, cfg, forcing);
    } catch (const Error& e) {
      res.status = RunStatus::numerical_failure;
      res.violation.t = s.u.t;
      res.violation.what = e.what();
      break;
    }
    last_dt = dt;
    ++step_idx;
    scan = scan_state(s.u, p, lay);
    if (!scan.ok) {
      res.status = RunStatus::assumption_violated;
      res.violation = scan.v;
      record(scan);
      res.snapshots.emplace_back(s.u.t, s.u);  // state dump at the abort
      break;
    }
    const bool last = s.u.t >= cfg.t_end - t_eps;
    if (step_idx % std::max(1, cfg.record_every) == 0 || last) record(scan);
    while (next_snap < snap_times.size() &&
           s.u.t >= snap_times[next_snap] - t_eps) {
      res.snapshots.emplace_back(s.u.t, s.u);
      ++next_snap;
    }
  }
  if (res.status == RunStatus::ok && next_snap < snap_times.size())
    res.snapshots.emplace_back(s.u.t, s.u);

  res.final_state = s;
  res.steps = step_idx;
  res.dt_last = last_dt;
  return res;
}

// ---------------------------------------------------------------------------
// Linear frozen-coefficient update
// ---------------------------------------------------------------------------

namespace {

struct FrozenChars {
  double v;  // velocity q/h of the frozen state
  double c;  // celerity sqrt(g h)
};

inline FrozenChars chars(const CellState& f, double g) {
  const double h = swe::wet_depth(f);
  return {f.q / h, std::sqrt(g * h)};
}

// Flux-Jacobian splitting A = A+ + A- at a frozen state.
struct SplitA {
  Mat2 plus, minus;
};

SplitA split_jacobian(const CellState& f, double g) {
  const FrozenChars fc = chars(f, g);
  const double lp = fc.v + fc.c;
  const double lm = fc.v - fc.c;
  // R = [[1, 1], [lp, lm]], R^-1 = (1/(lm-lp)) [[lm, -1], [-lp, 1]]
  const double inv = 1.0 / (lm - lp);
  auto assemble = [&](double dp, double dm) {
    Mat2 A{};
    A.m[0][0] = (dp * lm - dm * lp) * inv;
    A.m[0][1] = (dm - dp) * inv;
    A.m[1][0] = (dp * lp * lm - dm * lm * lp) * inv;
    A.m[1][1] = (dm * lm - dp * lp) * inv;
    return A;
  };
  SplitA s;
  s.plus = assemble(std::max(lp, 0.0), std::max(lm, 0.0));
  s.minus = assemble(std::min(lp, 0.0), std::min(lm, 0.0));
  return s;
}

inline Vec2 mat_diff(const Mat2& A, double dz, double dq) {
  return Vec2{A.m[0][0] * dz + A.m[0][1] * dq,
              A.m[1][0] * dz + A.m[1][1] * dq};
}

// Ghost values of the linear closures; every formula is affine in the
// state and the data with coefficients from the frozen field only.
struct GhostPair {
  double zeta, q;
};

GhostPair linear_wall(double z, double q) { return {z, -q}; }

GhostPair linear_inflow(double z, double q, const FrozenChars& fc,
                        double target) {
  // preserve w- = -(c+v) zeta + q
  const double wm = -(fc.c + fc.v) * z + q;
  return {target, wm + (fc.c + fc.v) * target};
}

GhostPair linear_open(double z, double q, const FrozenChars& fc) {
  // w- preserved, incoming w+ = (c-v) zeta + q pinned to its rest value 0
  const double wm = -(fc.c + fc.v) * z + q;
  const double zg = -wm / (2.0 * fc.c);
  return {zg, wm + (fc.c + fc.v) * zg};
}

GhostPair linear_sidewall_left(double z, double q, const FrozenChars& fc,
                               double q_i) {
  const double wp = (fc.c - fc.v) * z + q;
  return {(wp - q_i) / (fc.c - fc.v), q_i};
}

GhostPair linear_sidewall_right(double z, double q, const FrozenChars& fc,
                                double q_i) {
  const double wm = -(fc.c + fc.v) * z + q;
  return {(q_i - wm) / (fc.c + fc.v), q_i};
}

GhostPair linear_step(double zl, double ql, const FrozenChars& fl, double zr,
                      double qr, const FrozenChars& fr) {
  const double wp = (fl.c - fl.v) * zl + ql;   // from the left
  const double wm = -(fr.c + fr.v) * zr + qr;  // from the right
  const double zs = (wp - wm) / ((fl.c - fl.v) + (fr.c + fr.v));
  return {zs, wp - (fl.c - fl.v) * zs};
}

}  // namespace

void linear_rhs(const FieldState& u, const FieldState& frozen,
                const LinearBoundaryData& data, const PhysicalParams& p,
                const DomainLayout& lay, const ForcingSpec& forcing,
                FieldState& du) {
  du.em.resize(u.em.size());
  du.epl.resize(u.epl.size());
  du.epr.resize(u.epr.size());
  const double g = p.g;

  // du_j = -1/dx [ A+_{j-1/2} (U_j - U_{j-1}) + A-_{j+1/2} (U_{j+1} - U_j) ]
  // with A frozen at face-averaged states; ghost neighbours at the closures.
  auto domain = [&](const SubField& f, const SubField& fz, double h_rest,
                    double dx, const GhostPair& gl, const GhostPair& gr,
                    SubField& df) {
    const int n = static_cast<int>(f.size());
    auto frozen_cell = [&](int j) {
      return CellState{fz.zeta[static_cast<std::size_t>(j)],
                       fz.q[static_cast<std::size_t>(j)], h_rest};
    };
    auto face_split = [&](int jl, int jr) {
      const CellState a = frozen_cell(jl);
      const CellState b = frozen_cell(jr);
      return split_jacobian(
          CellState{0.5 * (a.zeta + b.zeta), 0.5 * (a.q + b.q), h_rest}, g);
    };
    for (int j = 0; j < n; ++j) {
      const auto k = static_cast<std::size_t>(j);
      double zl_n, ql_n, zr_n, qr_n;  // left/right neighbour values
      SplitA Al, Ar;
      if (j == 0) {
        zl_n = gl.zeta;
        ql_n = gl.q;
        Al = split_jacobian(frozen_cell(0), g);
      } else {
        zl_n = f.zeta[k - 1];
        ql_n = f.q[k - 1];
        Al = face_split(j - 1, j);
      }
      if (j == n - 1) {
        zr_n = gr.zeta;
        qr_n = gr.q;
        Ar = split_jacobian(frozen_cell(n - 1), g);
      } else {
        zr_n = f.zeta[k + 1];
        qr_n = f.q[k + 1];
        Ar = face_split(j, j + 1);
      }
      const Vec2 left = mat_diff(Al.plus, f.zeta[k] - zl_n, f.q[k] - ql_n);
      const Vec2 right = mat_diff(Ar.minus, zr_n - f.zeta[k], qr_n - f.q[k]);
      df.zeta[k] = -(left[0] + right[0]) / dx;
      df.q[k] = -(left[1] + right[1]) / dx;
    }
  };

  const double q_i = data.V[1];

  // ghosts at the ends of E-
  GhostPair gm_l{};
  {
    const FrozenChars fc = chars(CellState{frozen.em.zeta[0], frozen.em.q[0],
                                           p.h_s},
                                 g);
    const double z = u.em.zeta.front();
    const double q = u.em.q.front();
    switch (forcing.type) {
      case ForcingSpec::Type::none:
        gm_l = linear_wall(z, q);
        break;
      case ForcingSpec::Type::sine:
        gm_l = linear_inflow(z, q, fc, data.inflow_zeta);
        break;
      case ForcingSpec::Type::open:
        gm_l = linear_open(z, q, fc);
        break;
    }
  }
  const FrozenChars f_step_l =
      chars(CellState{frozen.em.zeta.back(), frozen.em.q.back(), p.h_s}, g);
  const FrozenChars f_step_r =
      chars(CellState{frozen.epl.zeta.front(), frozen.epl.q.front(), p.h_0},
            g);
  const GhostPair g_step =
      linear_step(u.em.zeta.back(), u.em.q.back(), f_step_l,
                  u.epl.zeta.front(), u.epl.q.front(), f_step_r);

  const FrozenChars f_lw =
      chars(CellState{frozen.epl.zeta.back(), frozen.epl.q.back(), p.h_0}, g);
  const GhostPair g_lw =
      linear_sidewall_left(u.epl.zeta.back(), u.epl.q.back(), f_lw, q_i);

  const FrozenChars f_rw =
      chars(CellState{frozen.epr.zeta.front(), frozen.epr.q.front(), p.h_0},
            g);
  const GhostPair g_rw = linear_sidewall_right(u.epr.zeta.front(),
                                               u.epr.q.front(), f_rw, q_i);

  const GhostPair g_end =
      linear_wall(u.epr.zeta.back(), u.epr.q.back());

  domain(u.em, frozen.em, p.h_s, lay.dx_minus, gm_l, g_step, du.em);
  domain(u.epl, frozen.epl, p.h_0, lay.dx_pl, g_step, g_lw, du.epl);
  domain(u.epr, frozen.epr, p.h_0, lay.dx_pr, g_rw, g_end, du.epr);
}

void linearized_step(double dt, const FieldState& frozen, FieldState& u,
                     const LinearBoundaryData& data, const PhysicalParams& p,
                     const DomainLayout& lay, const ForcingSpec& forcing) {
  FieldState du;
  linear_rhs(u, frozen, data, p, lay, forcing, du);
  auto axpy = [dt](SubField& f, const SubField& d) {
    for (std::size_t j = 0; j < usize(f); ++j) {
      f.zeta[j] += dt * d.zeta[j];
      f.q[j] += dt * d.q[j];
    }
  };
  axpy(u.em, du.em);
  axpy(u.epl, du.epl);
  axpy(u.epr, du.epr);
  u.t += dt;
}

}  // namespace owc::solver
