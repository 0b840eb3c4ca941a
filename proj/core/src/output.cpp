#include "owc/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "owc/errors.hpp"
#include "owc/version.hpp"

namespace owc::io {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p);
  if (!os) throw Error("cannot write '" + p.string() + "'");
  return os;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_snapshot_csv(std::ostream& os, const FieldState& u,
                        const DomainLayout& lay) {
  os << "x,zeta,q,domain_tag\n";
  for (const Dom d : {Dom::Eminus, Dom::EplusL, Dom::EplusR}) {
    const SubField& f = u.sub(d);
    for (int j = 0; j < f.size(); ++j) {
      const auto k = static_cast<std::size_t>(j);
      os << fmt(lay.cell_center(d, j)) << ',' << fmt(f.zeta[k]) << ','
         << fmt(f.q[k]) << ',' << dom_tag(d) << '\n';
    }
  }
}

void write_traces_csv(std::ostream& os, const coupling::TraceRecord& rec) {
  os << "t,zeta_step_l,q_step_l,zeta_step_r,q_step_r,zeta_lw,q_lw,zeta_rw,"
        "q_rw,q_i,P_ch\n";
  for (std::size_t k = 0; k < rec.size(); ++k) {
    os << fmt(rec.t[k]) << ',' << fmt(rec.zeta_step_l[k]) << ','
       << fmt(rec.q_step_l[k]) << ',' << fmt(rec.zeta_step_r[k]) << ','
       << fmt(rec.q_step_r[k]) << ',' << fmt(rec.zeta_lw[k]) << ','
       << fmt(rec.q_lw[k]) << ',' << fmt(rec.zeta_rw[k]) << ','
       << fmt(rec.q_rw[k]) << ',' << fmt(rec.q_i[k]) << ','
       << fmt(rec.P_ch[k]) << '\n';
  }
}

void write_diag_csv(std::ostream& os, const solver::DiagSeries& d) {
  os << "t,mass,mean_zeta_epr,energy_phys,energy_quad,energy_influx,"
        "cfl_ratio,min_depth,min_margin\n";
  for (std::size_t k = 0; k < d.t.size(); ++k) {
    os << fmt(d.t[k]) << ',' << fmt(d.mass[k]) << ','
       << fmt(d.mean_zeta_epr[k]) << ',' << fmt(d.energy_phys[k]) << ','
       << fmt(d.energy_quad[k]) << ',' << fmt(d.energy_influx[k]) << ','
       << fmt(d.cfl_ratio[k]) << ',' << fmt(d.min_depth[k]) << ','
       << fmt(d.min_margin[k]) << '\n';
  }
}

void write_energy_csv(std::ostream& os, const diag::EnergySeries& e) {
  os << "t,physical,quadratic,boundary_work,ratio\n";
  for (std::size_t k = 0; k < e.t.size(); ++k) {
    os << fmt(e.t[k]) << ',' << fmt(e.physical[k]) << ','
       << fmt(e.quadratic[k]) << ',' << fmt(e.boundary_work[k]) << ','
       << fmt(e.ratio[k]) << '\n';
  }
}

void write_picard_csv(std::ostream& os, const solver::PicardReport& rep) {
  os << "iteration,low_norm,ratio\n";
  for (std::size_t k = 0; k < rep.low_norms.size(); ++k) {
    os << (k + 1) << ',' << fmt(rep.low_norms[k]) << ',';
    if (k >= 1) os << fmt(rep.ratios[k - 1]);
    os << '\n';
  }
}

void write_convergence_csv(std::ostream& os,
                           const diag::ConvergenceReport& r) {
  os << "factor,dx,error\n";
  for (std::size_t k = 0; k < r.errors.size(); ++k)
    os << r.factors[k] << ',' << fmt(r.dx[k]) << ',' << fmt(r.errors[k])
       << '\n';
  os << "# fitted_order," << fmt(r.fitted_order) << ",monotone,"
     << (r.monotone ? 1 : 0) << '\n';
}

void write_ode_scaling_csv(std::ostream& os, const diag::OdeScalingReport& r) {
  os << "T,h1_norm\n";
  for (std::size_t k = 0; k < r.T.size(); ++k)
    os << fmt(r.T[k]) << ',' << fmt(r.h1_norm[k]) << '\n';
  os << "# fitted_exponent," << fmt(r.fitted_exponent) << ",fitted_C,"
     << fmt(r.fitted_C) << ",residual," << fmt(r.fit_residual) << ",pass,"
     << (r.pass ? 1 : 0) << '\n';
}

void write_manifest(const std::string& dir, const std::string& config_text,
                    const std::vector<std::string>& files) {
  namespace fs = std::filesystem;
  std::ofstream os = open_out(fs::path(dir) / "manifest.txt");
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_text)));
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  os << "version: " << kVersion << '\n';
  os << "config_hash: fnv1a64:" << hash << '\n';
  os << "created: " << stamp << '\n';
  os << "files:\n";
  for (const std::string& f : files) os << "  " << f << '\n';
}

RunArtifacts write_run_output(const std::string& dir, const RunConfig& rc,
                              const std::string& config_text,
                              const solver::SimulationResult& result,
                              const solver::PicardReport* picard) {
  namespace fs = std::filesystem;
  RunArtifacts art;
  art.dir = dir;
  fs::create_directories(fs::path(dir) / "snapshots");
  fs::create_directories(fs::path(dir) / "diagnostics");

  {
    std::ofstream os = open_out(fs::path(dir) / "config.cfg");
    os << serialize(rc);
    art.files.push_back("config.cfg");
  }
  {
    std::ofstream os = open_out(fs::path(dir) / "traces.csv");
    write_traces_csv(os, result.traces);
    art.files.push_back("traces.csv");
  }
  for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "t_%04zu.csv", k);
    std::ofstream os = open_out(fs::path(dir) / "snapshots" / name);
    write_snapshot_csv(os, result.snapshots[k].second, rc.layout);
    art.files.push_back(std::string("snapshots/") + name);
  }
  {
    std::ofstream os = open_out(fs::path(dir) / "diagnostics" / "series.csv");
    write_diag_csv(os, result.diag);
    art.files.push_back("diagnostics/series.csv");
  }
  {
    std::ofstream os = open_out(fs::path(dir) / "diagnostics" / "energy.csv");
    write_energy_csv(os, diag::energy_monitor(result, rc.params));
    art.files.push_back("diagnostics/energy.csv");
  }
  if (picard != nullptr) {
    std::ofstream os = open_out(fs::path(dir) / "diagnostics" / "picard.csv");
    write_picard_csv(os, *picard);
    art.files.push_back("diagnostics/picard.csv");
  }
  write_manifest(dir, config_text, art.files);
  return art;
}

}  // namespace owc::io
