#pragma once

// Result serialization. All CSV numbers use %.17g so outputs round-trip
// exactly and runs are byte-for-byte reproducible. Fixed directory layout:
//
//   <out>/manifest.txt
//   <out>/config.cfg            canonical serialized configuration
//   <out>/traces.csv            t, wall/step traces, q_i, P_ch
//   <out>/snapshots/t_<idx>.csv x, zeta, q, domain_tag
//   <out>/diagnostics/*.csv     scalar series, energy ledger, mode extras

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "owc/config.hpp"
#include "owc/coupling.hpp"
#include "owc/diagnostics.hpp"
#include "owc/params.hpp"
#include "owc/solver.hpp"

namespace owc::io {

/// FNV-1a 64-bit hash (manifest config fingerprint).
std::uint64_t fnv1a64(const std::string& bytes);

void write_snapshot_csv(std::ostream& os, const FieldState& u,
                        const DomainLayout& lay);
void write_traces_csv(std::ostream& os, const coupling::TraceRecord& rec);
void write_diag_csv(std::ostream& os, const solver::DiagSeries& d);
void write_energy_csv(std::ostream& os, const diag::EnergySeries& e);
void write_picard_csv(std::ostream& os, const solver::PicardReport& rep);
void write_convergence_csv(std::ostream& os, const diag::ConvergenceReport& r);
void write_ode_scaling_csv(std::ostream& os, const diag::OdeScalingReport& r);

struct RunArtifacts {
  std::string dir;
  std::vector<std::string> files;  // relative paths, manifest excluded
};

/// Write the full output tree for a simulation (or picard) result and the
/// closing manifest. config_text is the raw configuration the run was
/// launched with (hashed into the manifest).
RunArtifacts write_run_output(const std::string& dir, const RunConfig& rc,
                              const std::string& config_text,
                              const solver::SimulationResult& result,
                              const solver::PicardReport* picard = nullptr);

/// Append-only manifest writer (also used by the non-simulation commands).
void write_manifest(const std::string& dir, const std::string& config_text,
                    const std::vector<std::string>& files);

}  // namespace owc::io
