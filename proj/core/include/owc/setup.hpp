#pragma once

// Initial-condition and forcing descriptions, decoupled from the config
// parser so the solver and diagnostics can build states programmatically.

#include <cmath>
#include <string>

#include "owc/params.hpp"

namespace owc {

struct InitialSpec {
  enum class Type { rest, gaussian, file };
  Type type = Type::rest;
  // gaussian(amplitude, center, width): zeta = A exp(-(x-c)^2/(2 w^2)), q = 0
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  std::string path;  // file(path): CSV x,zeta,q matching the cell centers
  double q_i0 = 0.0;
  double P_ch0 = 0.0;
};

struct ForcingSpec {
  enum class Type { none, sine, open };
  Type type = Type::none;
  double amplitude = 0.0;
  double omega = 0.0;
};

/// Prescribed surface elevation at the truncated end (sine forcing).
inline double forcing_target(const ForcingSpec& f, double t) {
  return f.type == ForcingSpec::Type::sine ? f.amplitude * std::sin(f.omega * t)
                                           : 0.0;
}

/// Build (u0, G0) from a spec by cell-center evaluation.
/// Throws ParseError for unreadable/mismatched initial-data files.
void make_initial_state(const PhysicalParams& p, const DomainLayout& lay,
                        const InitialSpec& spec, FieldState& u0,
                        BoundaryState& G0);

}  // namespace owc
