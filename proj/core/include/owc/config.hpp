#pragma once

// INI-style run configuration:
//
//   [params]   g rho h_s h_0 zeta_w l_0 r l_1 gamma P_atm h_ch K
//              (optional gamma_1 / gamma_2 to override the derived values;
//               flagged by validation and usable only with force)
//   [domain]   L_ext n_minus n_pl n_pr
//   [solver]   cfl t_end scheme ode_stepper picard max_iter tol_low_norm
//              record_every snapshots dt_fixed compat_tol
//              c0_threshold c1_threshold
//   [initial]  type = rest | gaussian(amp, center, width) | file(path)
//              (or expanded keys amplitude/center/width/path) q_i0 P_ch0
//   [forcing]  type = none | sine(amplitude, omega) | open
//
// '#' starts a comment; keys match the type field names exactly.

#include <string>

#include "owc/params.hpp"
#include "owc/setup.hpp"
#include "owc/solver.hpp"

namespace owc::io {

struct RunConfig {
  PhysicalParams params;
  DomainLayout layout;
  solver::SolverConfig solver;
  InitialSpec initial;
  ForcingSpec forcing;
};

struct ParsedConfig {
  RunConfig config;
  ValidationReport validation;  // merged params + layout semantic checks
};

/// Parse configuration text. Throws ParseError (with 1-based line numbers),
/// UnknownKey, MissingKey for malformed input; semantic violations land in
/// the validation report instead (so --force can override them downstream).
ParsedConfig parse_config_text(const std::string& text);

/// Same, reading from a file. Throws ParseError(0) when unreadable.
ParsedConfig parse_config(const std::string& path);

/// Canonical form: fixed section and key order, %.17g numbers. Guaranteed
/// to re-parse to identical values (exact double round-trip).
std::string serialize(const RunConfig& rc);

}  // namespace owc::io
