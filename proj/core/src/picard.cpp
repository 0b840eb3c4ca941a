#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "owc/diagnostics.hpp"
#include "owc/errors.hpp"
#include "owc/solver.hpp"

// Picard iteration of the existence proof, disrectized on a fixed uniform
// grid in time shared by every iterate:
//   u^0, G^0     : the initial data held constant in time
//   G^{n+1}      : quadrature of Theta(G^n(t), u^n wall faces(t))
//   u^{n+1}      : linear system with coefficients frozen at u^n and
//                  boundary data V(G^{n+1}), marched by the same stepper
// until the low-norm difference max_t ||u^{n+1}-u^n||_L2 + |G^{n+1}-G^n|_L2(t)
// drops below tol_low_norm.

namespace owc::solver {

namespace {

struct NodeTraces {  // wall-face values of one iterate at one time node
  double zeta_lw = 0.0;
  double zeta_rw = 0.0;
  double q_i = 0.0;
};

// Frozen-characteristic face elevations, matching the ghost formulas of
// linear_rhs (so Theta sees the same faces the linear solve enforces).
NodeTraces face_traces(const FieldState& u, const FieldState& frozen,
                       double q_i, const PhysicalParams& p) {
  NodeTraces t;
  t.q_i = q_i;
  {
    const double hz = frozen.epl.zeta.back();
    const double hq = frozen.epl.q.back();
    const double h = p.h_0 + hz;
    const double v = hq / h;
    const double c = std::sqrt(p.g * h);
    const double wp = (c - v) * u.epl.zeta.back() + u.epl.q.back();
    t.zeta_lw = (wp - q_i) / (c - v);
  }
  {
    const double hz = frozen.epr.zeta.front();
    const double hq = frozen.epr.q.front();
    const double h = p.h_0 + hz;
    const double v = hq / h;
    const double c = std::sqrt(p.g * h);
    const double wm = -(c + v) * u.epr.zeta.front() + u.epr.q.front();
    t.zeta_rw = (q_i - wm) / (c + v);
  }
  return t;
}

coupling::ThetaRate theta_of(const BoundaryState& g, const NodeTraces& tr,
                             const PhysicalParams& p) {
  return coupling::theta(
      g,
      coupling::WallTraces{swe::CellState{tr.zeta_lw, tr.q_i, p.h_0},
                           swe::CellState{tr.zeta_rw, tr.q_i, p.h_0}},
      p);
}

BoundaryState lerp(const BoundaryState& a, const BoundaryState& b, double w) {
  return BoundaryState{(1.0 - w) * a.q_i + w * b.q_i,
                       (1.0 - w) * a.P_ch + w * b.P_ch,
                       (1.0 - w) * a.t + w * b.t};
}

NodeTraces lerp(const NodeTraces& a, const NodeTraces& b, double w) {
  return NodeTraces{(1.0 - w) * a.zeta_lw + w * b.zeta_lw,
                    (1.0 - w) * a.zeta_rw + w * b.zeta_rw,
                    (1.0 - w) * a.q_i + w * b.q_i};
}

void add_scaled_field(FieldState& u, double a, const FieldState& d) {
  auto axpy = [a](SubField& f, const SubField& df) {
    for (std::size_t j = 0; j < f.zeta.size(); ++j) {
      f.zeta[j] += a * df.zeta[j];
      f.q[j] += a * df.q[j];
    }
  };
  axpy(u.em, d.em);
  axpy(u.epl, d.epl);
  axpy(u.epr, d.epr);
}

}  // namespace

PicardReport picard_solve(const State& initial, const PhysicalParams& p,
                          const DomainLayout& lay, const SolverConfig& cfg,
                          const ForcingSpec& forcing) {
  PicardReport rep;
  SimulationResult& res = rep.result;
  if (!cfg.force) {
    const std::string why = gate_refusal(initial, p, lay, cfg);
    if (!why.empty()) {
      res.status = RunStatus::refused;
      res.refusal = why;
      return rep;
    }
  }

  // Fixed step from the initial CFL speed, rounded to divide t_end.
  const double speed0 = max_wave_speed(initial.u, p);
  const double dt0 =
      cfg.dt_fixed > 0.0
          ? cfg.dt_fixed
          : (speed0 > 0.0 ? cfg.cfl * lay.min_dx() / speed0 : cfg.t_end);
  const int n = std::max(1, static_cast<int>(std::ceil(
                                cfg.t_end / dt0 - 1e-12)));
  const double dt = cfg.t_end / n;
  rep.dt = dt;
  rep.n_steps = n;

  const std::size_t N = static_cast<std::size_t>(n) + 1;
  std::vector<FieldState> Uprev(N, initial.u), Ucur(N, initial.u);
  std::vector<BoundaryState> Gprev(N, initial.g), Gcur(N, initial.g);
  std::vector<NodeTraces> Tprev(N), Tcur(N);
  for (std::size_t k = 0; k < N; ++k) {
    Uprev[k].t = static_cast<double>(k) * dt;
    Gprev[k].t = Uprev[k].t;
  }
  {
    // iterate 0: faces from the nonlinear closure of the constant data
    const swe::CellState li{initial.u.epl.zeta.back(), initial.u.epl.q.back(),
                            p.h_0};
    const swe::CellState ri{initial.u.epr.zeta.front(),
                            initial.u.epr.q.front(), p.h_0};
    const coupling::SidewallFaces sw =
        coupling::sidewall_closure(li, ri, initial.g, p);
    const NodeTraces t0{sw.left.zeta, sw.right.zeta, initial.g.q_i};
    std::fill(Tprev.begin(), Tprev.end(), t0);
  }

  double prev_norm = -1.0;
  int done = 0;
  for (int iter = 1; iter <= cfg.picard.max_iter; ++iter) {
    done = iter;
    // --- ODE pass: G^{n+1} by quadrature of Theta(G^n, traces^n) ---------
    Gcur[0] = initial.g;
    Gcur[0].t = 0.0;
    for (std::size_t k = 0; k + 1 < N; ++k) {
      coupling::ThetaRate r{};
      switch (cfg.stepper) {
        case Stepper::euler:
          r = theta_of(Gprev[k], Tprev[k], p);
          break;
        case Stepper::rk2: {  // trapezoid
          const auto ra = theta_of(Gprev[k], Tprev[k], p);
          const auto rb = theta_of(Gprev[k + 1], Tprev[k + 1], p);
          r.dq_i = 0.5 * (ra.dq_i + rb.dq_i);
          r.dP_ch = 0.5 * (ra.dP_ch + rb.dP_ch);
          break;
        }
        case Stepper::rk4: {  // Simpson
          const auto ra = theta_of(Gprev[k], Tprev[k], p);
          const auto rm = theta_of(lerp(Gprev[k], Gprev[k + 1], 0.5),
                                   lerp(Tprev[k], Tprev[k + 1], 0.5), p);
          const auto rb = theta_of(Gprev[k + 1], Tprev[k + 1], p);
          r.dq_i = (ra.dq_i + 4.0 * rm.dq_i + rb.dq_i) / 6.0;
          r.dP_ch = (ra.dP_ch + 4.0 * rm.dP_ch + rb.dP_ch) / 6.0;
          break;
        }
      }
      Gcur[k + 1].q_i = Gcur[k].q_i + dt * r.dq_i;
      Gcur[k + 1].P_ch = Gcur[k].P_ch + dt * r.dP_ch;
      Gcur[k + 1].t = static_cast<double>(k + 1) * dt;
    }

    // --- PDE pass: linear system, coefficients frozen at u^n -------------
    Ucur[0] = initial.u;
    Ucur[0].t = 0.0;
    Tcur[0] = face_traces(Ucur[0], Uprev[0], Gcur[0].q_i, p);
    for (std::size_t k = 0; k + 1 < N; ++k) {
      const FieldState& frozen = Uprev[k];
      const double tk = static_cast<double>(k) * dt;
      auto data_at = [&](double w) {
        const BoundaryState g = lerp(Gcur[k], Gcur[k + 1], w);
        LinearBoundaryData d;
        d.V = coupling::boundary_data(g);
        d.inflow_zeta = forcing_target(forcing, tk + w * dt);
        return d;
      };
      FieldState u = Ucur[k];
      FieldState k1, k2, k3, k4;
      switch (cfg.stepper) {
        case Stepper::euler: {
          linear_rhs(u, frozen, data_at(0.0), p, lay, forcing, k1);
          add_scaled_field(u, dt, k1);
          break;
        }
        case Stepper::rk2: {
          linear_rhs(u, frozen, data_at(0.0), p, lay, forcing, k1);
          FieldState u1 = u;
          add_scaled_field(u1, dt, k1);
          linear_rhs(u1, frozen, data_at(1.0), p, lay, forcing, k2);
          add_scaled_field(u, 0.5 * dt, k1);
          add_scaled_field(u, 0.5 * dt, k2);
          break;
        }
        case Stepper::rk4: {
          linear_rhs(u, frozen, data_at(0.0), p, lay, forcing, k1);
          FieldState u2 = u;
          add_scaled_field(u2, 0.5 * dt, k1);
          linear_rhs(u2, frozen, data_at(0.5), p, lay, forcing, k2);
          FieldState u3 = u;
          add_scaled_field(u3, 0.5 * dt, k2);
          linear_rhs(u3, frozen, data_at(0.5), p, lay, forcing, k3);
          FieldState u4 = u;
          add_scaled_field(u4, dt, k3);
          linear_rhs(u4, frozen, data_at(1.0), p, lay, forcing, k4);
          add_scaled_field(u, dt / 6.0, k1);
          add_scaled_field(u, dt / 3.0, k2);
          add_scaled_field(u, dt / 3.0, k3);
          add_scaled_field(u, dt / 6.0, k4);
          break;
        }
      }
      u.t = static_cast<double>(k + 1) * dt;
      Ucur[k + 1] = std::move(u);
      Tcur[k + 1] =
          face_traces(Ucur[k + 1], Uprev[k + 1], Gcur[k + 1].q_i, p);
    }

    // --- low-norm difference ---------------------------------------------
    double nu = 0.0;
    for (std::size_t k = 0; k < N; ++k)
      nu = std::max(nu, diag::l2_diff(Ucur[k], Uprev[k], lay));
    double ng2 = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double dq = Gcur[k].q_i - Gprev[k].q_i;
      const double dp = Gcur[k].P_ch - Gprev[k].P_ch;
      const double w = (k == 0 || k + 1 == N) ? 0.5 : 1.0;
      ng2 += w * (dq * dq + dp * dp) * dt;
    }
    const double norm = nu + std::sqrt(ng2);
    rep.low_norms.push_back(norm);
    if (prev_norm > 1e-300) rep.ratios.push_back(norm / prev_norm);
    prev_norm = norm;

    std::swap(Uprev, Ucur);
    std::swap(Gprev, Gcur);
    std::swap(Tprev, Tcur);
    if (norm <= cfg.picard.tol_low_norm) {
      rep.converged = true;
      break;
    }
  }
  rep.iterations = done;

  // --- assemble the result from the last iterate --------------------------
  res.status = RunStatus::ok;
  res.steps = n;
  res.dt_last = dt;
  res.final_state = State{Uprev[N - 1], Gprev[N - 1]};

  const diag::FrozenQuadratic quad(initial.u, p);
  const int cadence = std::max(1, cfg.record_every);
  for (std::size_t k = 0; k < N; ++k) {
    if (!(k % static_cast<std::size_t>(cadence) == 0 || k + 1 == N)) continue;
    const FieldState& u = Uprev[k];
    const BoundaryState& g = Gprev[k];
    coupling::TraceRecord& tr = res.traces;
    tr.t.push_back(u.t);
    tr.zeta_step_l.push_back(u.em.zeta.back());
    tr.q_step_l.push_back(u.em.q.back());
    tr.zeta_step_r.push_back(u.epl.zeta.front());
    tr.q_step_r.push_back(u.epl.q.front());
    tr.zeta_lw.push_back(u.epl.zeta.back());
    tr.q_lw.push_back(u.epl.q.back());
    tr.zeta_rw.push_back(u.epr.zeta.front());
    tr.q_rw.push_back(u.epr.q.front());
    tr.zeta_end.push_back(u.epr.zeta.back());
    tr.q_end.push_back(u.epr.q.back());
    tr.q_i.push_back(g.q_i);
    tr.P_ch.push_back(g.P_ch);

    DiagSeries& dg = res.diag;
    dg.t.push_back(u.t);
    dg.mass.push_back(diag::total_mass(u, lay));
    double mz = 0.0;
    for (const double z : u.epr.zeta) mz += z;
    dg.mean_zeta_epr.push_back(mz / static_cast<double>(u.epr.size()));
    dg.energy_phys.push_back(diag::physical_energy(u, p, lay));
    dg.energy_quad.push_back(quad(u, lay));
    dg.energy_influx.push_back(0.0);
    dg.cfl_ratio.push_back(speed0 * dt / lay.min_dx());
    double mind = std::numeric_limits<double>::infinity();
    double minm = mind;
    for (const Dom d : {Dom::Eminus, Dom::EplusL, Dom::EplusR}) {
      const SubField& f = u.sub(d);
      const double hr = rest_depth(p, d);
      for (std::size_t j = 0; j < f.zeta.size(); ++j) {
        const double h = hr + f.zeta[j];
        mind = std::min(mind, h);
        if (h > 0.0)
          minm = std::min(minm, p.g * h - (f.q[j] / h) * (f.q[j] / h));
      }
    }
    dg.min_depth.push_back(mind);
    dg.min_margin.push_back(minm);
  }
  res.snapshots.emplace_back(0.0, initial.u);
  res.snapshots.emplace_back(Uprev[N - 1].t, Uprev[N - 1]);

  rep.fields = std::move(Uprev);
  rep.g_series = std::move(Gprev);
  return rep;
}

}  // namespace owc::solver
