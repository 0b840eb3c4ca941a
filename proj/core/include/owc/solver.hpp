#pragma once

// Coupled time integration: conservative finite-volume update of the three
// exterior sub-domains + the boundary ODE, with the transmission/ghost
// closures of module coupling at the four interfaces. Also the frozen-
// coefficient linear update and the Picard iteration mirroring the
// existence proof.

#include <string>
#include <utility>
#include <vector>

#include "owc/coupling.hpp"
#include "owc/params.hpp"
#include "owc/setup.hpp"
#include "owc/swe.hpp"

namespace owc::solver {

enum class Scheme { rusanov, hll, muscl_rusanov };
enum class Stepper { euler, rk2, rk4 };

struct PicardOptions {
  bool enabled = false;
  int max_iter = 30;
  double tol_low_norm = 1e-8;
};

struct SolverConfig {
  double cfl = 0.45;
  double t_end = 1.0;
  Scheme scheme = Scheme::rusanov;
  Stepper stepper = Stepper::rk2;  // time integrator of the coupled system
  PicardOptions picard;
  int record_every = 1;  // trace/diagnostic cadence in steps
  int snapshots = 2;     // evenly spaced field snapshots kept in the result
  double dt_fixed = 0.0; // > 0: fixed step (still CFL-checked)
  double compat_tol = 1e-6;  // gate tolerance on |r0|, |r1|
  double c0_threshold = 0.0; // 0 -> default 1e-3 h_0
  double c1_threshold = 0.0; // 0 -> default 1e-3 g h_0
  bool force = false;        // bypass the admissibility gates
};

struct State {
  FieldState u;
  BoundaryState g;
};

/// Scalar diagnostics recorded along the run (same cadence as the traces).
struct DiagSeries {
  std::vector<double> t;
  std::vector<double> mass;           // sum of zeta dx over all sub-domains
  std::vector<double> mean_zeta_epr;  // chamber free-surface mean
  std::vector<double> energy_phys;    // sum q^2/(2h) + g zeta^2/2 dx
  std::vector<double> energy_quad;    // sum u^T S(u0) u dx, S frozen at t=0
  std::vector<double> energy_influx;  // (g z + u^2/2) q at the truncated end
  std::vector<double> cfl_ratio;      // max|lambda| dt / dx at the last step
  std::vector<double> min_depth;
  std::vector<double> min_margin;     // min g h - q^2/h^2
};

enum class RunStatus { ok, refused, assumption_violated, numerical_failure };

struct Violation {
  double t = 0.0;
  double x = 0.0;
  Dom dom = Dom::Eminus;
  std::string what;
};

struct SimulationResult {
  RunStatus status = RunStatus::ok;
  State final_state;
  coupling::TraceRecord traces;
  DiagSeries diag;
  std::vector<std::pair<double, FieldState>> snapshots;
  long steps = 0;
  double dt_last = 0.0;
  Violation violation;  // meaningful when status != ok
  std::string refusal;  // gate failure summary when status == refused
};

/// Largest |q/h| + sqrt(g h) over all cells (CFL speed).
double max_wave_speed(const FieldState& u, const PhysicalParams& p);

/// Admissibility gates shared by run and picard_solve: parameter/layout
/// validation, initial-data thresholds and compatibility orders 0-1.
/// Returns an empty string when everything passes, else a summary.
std::string gate_refusal(const State& initial, const PhysicalParams& p,
                         const DomainLayout& lay, const SolverConfig& cfg);

/// One explicit update of (u, G) by the configured stepper. Ghost closures
/// and the Theta traces are re-evaluated at every stage. Throws CflViolation
/// when dt exceeds cfl * min_dx / max_speed, and propagates closure errors.
void step(double dt, State& s, const PhysicalParams& p, const DomainLayout& lay,
          const SolverConfig& cfg, const ForcingSpec& forcing);

/// Integrate to t_end with CFL-chosen steps, runtime assumption monitoring
/// and trace/diagnostic recording. Never throws for physics failures: the
/// status/violation fields carry them (the CLI maps them to exit codes).
SimulationResult run(const State& initial, const PhysicalParams& p,
                     const DomainLayout& lay, const SolverConfig& cfg,
                     const ForcingSpec& forcing);

/// Boundary data of one linear solve: V = (0, q_i) at the structure walls
/// plus the prescribed elevation at the truncated end.
struct LinearBoundaryData {
  Vec2 V;                    // (0, q_i(t))
  double inflow_zeta = 0.0;  // target at -L_ext (sine forcing)
};

/// Right-hand side of the linear variable-coefficient system
/// dt u + A(frozen) dx u = 0 in upwind fluctuation form, with
/// frozen-characteristic ghost closures. Exactly linear in (u, data).
void linear_rhs(const FieldState& u, const FieldState& frozen,
                const LinearBoundaryData& data, const PhysicalParams& p,
                const DomainLayout& lay, const ForcingSpec& forcing,
                FieldState& du);

/// One Euler update of the linear system (the Picard building block).
void linearized_step(double dt, const FieldState& frozen, FieldState& u,
                     const LinearBoundaryData& data, const PhysicalParams& p,
                     const DomainLayout& lay, const ForcingSpec& forcing);

struct PicardReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> low_norms;  // ||(u,G)^{n+1} - (u,G)^n||_low per iteration
  std::vector<double> ratios;     // successive low-norm ratios
  double dt = 0.0;                // fixed step shared by all iterates
  int n_steps = 0;
  SimulationResult result;            // assembled from the last iterate
  std::vector<FieldState> fields;     // last iterate at every time node
  std::vector<BoundaryState> g_series;
};

/// Picard iteration of the existence proof: u^0, G^0 frozen at the initial
/// data; G^{n+1} integrates Theta(G^n, u^n|walls); u^{n+1} solves the linear
/// system with coefficients A(u^n) and boundary data V(G^{n+1}).
/// Non-contraction is reported (converged = false), not thrown.
PicardReport picard_solve(const State& initial, const PhysicalParams& p,
                          const DomainLayout& lay, const SolverConfig& cfg,
                          const ForcingSpec& forcing);

}  // namespace owc::solver
