#include "owc/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "owc/errors.hpp"

namespace owc::io {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_real(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw ParseError(line, "expected a number, got '" + v + "'");
}

int parse_int(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (trim(v.substr(pos)).empty()) return static_cast<int>(x);
  } catch (const std::exception&) {
  }
  throw ParseError(line, "expected an integer, got '" + v + "'");
}

/// Split "name(a, b, c)" into name + raw args; returns false for bare words.
bool split_call(const std::string& v, std::string& name,
                std::vector<std::string>& args, int line) {
  const std::size_t open = v.find('(');
  if (open == std::string::npos) {
    name = v;
    return false;
  }
  if (v.back() != ')')
    throw ParseError(line, "unterminated argument list in '" + v + "'");
  name = trim(v.substr(0, open));
  const std::string inner = v.substr(open + 1, v.size() - open - 2);
  std::string cur;
  for (const char c : inner) {
    if (c == ',') {
      args.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !args.empty()) args.push_back(trim(cur));
  return true;
}

struct Entry {
  std::string value;
  int line = 0;
  bool seen = false;
};

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig out;
  RunConfig& rc = out.config;

  // Collected raw entries; interpretation happens after the scan so key
  // order inside a section never matters.
  auto entry_map = [] { return std::vector<std::pair<std::string, Entry>>{}; };
  auto sections = std::vector<std::pair<std::string, decltype(entry_map())>>{
      {"params", {}}, {"domain", {}}, {"solver", {}},
      {"initial", {}}, {"forcing", {}}};
  auto section_of = [&](const std::string& name)
      -> std::vector<std::pair<std::string, Entry>>* {
    for (auto& s : sections)
      if (s.first == name) return &s.second;
    return nullptr;
  };

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::vector<std::pair<std::string, Entry>>* current = nullptr;
  std::string current_name;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(line_no, "unterminated section header");
      current_name = trim(line.substr(1, line.size() - 2));
      current = section_of(current_name);
      if (current == nullptr) throw UnknownKey("[" + current_name + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, "expected 'key = value'");
    if (current == nullptr)
      throw ParseError(line_no, "key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (value.empty()) throw ParseError(line_no, "empty value");
    bool replaced = false;
    for (auto& kv : *current)
      if (kv.first == key) {  // last one wins
        kv.second = Entry{value, line_no, true};
        replaced = true;
      }
    if (!replaced) current->emplace_back(key, Entry{value, line_no, true});
  }

  auto get = [&](const std::string& section,
                 const std::string& key) -> const Entry* {
    for (const auto& kv : *section_of(section))
      if (kv.first == key) return &kv.second;
    return nullptr;
  };

  // --- [params] ------------------------------------------------------------
  {
    PhysicalParams& p = rc.params;
    bool has_g1 = false, has_g2 = false;
    double g1 = 0.0, g2 = 0.0;
    for (const auto& kv : *section_of("params")) {
      const std::string& k = kv.first;
      const Entry& e = kv.second;
      const double v = parse_real(e.value, e.line);
      if (k == "g") p.g = v;
      else if (k == "rho") p.rho = v;
      else if (k == "h_s") p.h_s = v;
      else if (k == "h_0") p.h_0 = v;
      else if (k == "zeta_w") p.zeta_w = v;
      else if (k == "l_0") p.l_0 = v;
      else if (k == "r") p.r = v;
      else if (k == "l_1") p.l_1 = v;
      else if (k == "gamma") p.gamma = v;
      else if (k == "P_atm") p.P_atm = v;
      else if (k == "h_ch") p.h_ch = v;
      else if (k == "K") p.K = v;
      else if (k == "gamma_1") { has_g1 = true; g1 = v; }
      else if (k == "gamma_2") { has_g2 = true; g2 = v; }
      else throw UnknownKey("params." + k);
    }
    p.derive();
    if (has_g1) p.gamma_1 = g1;  // deliberate override: validation flags it
    if (has_g2) p.gamma_2 = g2;
  }

  // --- [domain] ------------------------------------------------------------
  for (const auto& kv : *section_of("domain")) {
    const std::string& k = kv.first;
    const Entry& e = kv.second;
    if (k == "L_ext") rc.layout.L_ext = parse_real(e.value, e.line);
    else if (k == "n_minus") rc.layout.n_minus = parse_int(e.value, e.line);
    else if (k == "n_pl") rc.layout.n_pl = parse_int(e.value, e.line);
    else if (k == "n_pr") rc.layout.n_pr = parse_int(e.value, e.line);
    else throw UnknownKey("domain." + k);
  }
  rc.layout.derive(rc.params);

  // --- [solver] ------------------------------------------------------------
  for (const auto& kv : *section_of("solver")) {
    const std::string& k = kv.first;
    const Entry& e = kv.second;
    solver::SolverConfig& sc = rc.solver;
    if (k == "cfl") sc.cfl = parse_real(e.value, e.line);
    else if (k == "t_end") sc.t_end = parse_real(e.value, e.line);
    else if (k == "scheme") {
      if (e.value == "rusanov") sc.scheme = solver::Scheme::rusanov;
      else if (e.value == "hll") sc.scheme = solver::Scheme::hll;
      else if (e.value == "muscl_rusanov")
        sc.scheme = solver::Scheme::muscl_rusanov;
      else throw ParseError(e.line, "unknown scheme '" + e.value + "'");
    } else if (k == "ode_stepper") {
      if (e.value == "euler") sc.stepper = solver::Stepper::euler;
      else if (e.value == "rk2") sc.stepper = solver::Stepper::rk2;
      else if (e.value == "rk4") sc.stepper = solver::Stepper::rk4;
      else throw ParseError(e.line, "unknown stepper '" + e.value + "'");
    } else if (k == "picard") {
      std::string name;
      std::vector<std::string> args;
      const bool call = split_call(e.value, name, args, e.line);
      if (name == "off" && !call) sc.picard.enabled = false;
      else if (name == "on") {
        sc.picard.enabled = true;
        if (call) {
          if (args.size() != 2)
            throw ParseError(e.line, "picard = on(max_iter, tol_low_norm)");
          sc.picard.max_iter = parse_int(args[0], e.line);
          sc.picard.tol_low_norm = parse_real(args[1], e.line);
        }
      } else throw ParseError(e.line, "picard must be off or on(...)");
    }
    else if (k == "max_iter") sc.picard.max_iter = parse_int(e.value, e.line);
    else if (k == "tol_low_norm")
      sc.picard.tol_low_norm = parse_real(e.value, e.line);
    else if (k == "record_every") sc.record_every = parse_int(e.value, e.line);
    else if (k == "snapshots") sc.snapshots = parse_int(e.value, e.line);
    else if (k == "dt_fixed") sc.dt_fixed = parse_real(e.value, e.line);
    else if (k == "compat_tol") sc.compat_tol = parse_real(e.value, e.line);
    else if (k == "c0_threshold")
      sc.c0_threshold = parse_real(e.value, e.line);
    else if (k == "c1_threshold")
      sc.c1_threshold = parse_real(e.value, e.line);
    else throw UnknownKey("solver." + k);
  }

  // --- [initial] -------------------------------------------------------------
  {
    InitialSpec& is = rc.initial;
    const Entry* type = get("initial", "type");
    if (type != nullptr) {
      std::string name;
      std::vector<std::string> args;
      const bool call = split_call(type->value, name, args, type->line);
      if (name == "rest") is.type = InitialSpec::Type::rest;
      else if (name == "gaussian") {
        is.type = InitialSpec::Type::gaussian;
        if (call) {
          if (args.size() != 3)
            throw ParseError(type->line,
                             "gaussian(amplitude, center, width)");
          is.amplitude = parse_real(args[0], type->line);
          is.center = parse_real(args[1], type->line);
          is.width = parse_real(args[2], type->line);
        }
      } else if (name == "file") {
        is.type = InitialSpec::Type::file;
        if (call) {
          if (args.size() != 1) throw ParseError(type->line, "file(path)");
          is.path = args[0];
        }
      } else {
        throw ParseError(type->line,
                         "unknown initial type '" + name + "'");
      }
    }
    bool has_amp = false, has_center = false, has_width = false,
         has_path = false;
    for (const auto& kv : *section_of("initial")) {
      const std::string& k = kv.first;
      const Entry& e = kv.second;
      if (k == "type") continue;
      else if (k == "amplitude") { is.amplitude = parse_real(e.value, e.line); has_amp = true; }
      else if (k == "center") { is.center = parse_real(e.value, e.line); has_center = true; }
      else if (k == "width") { is.width = parse_real(e.value, e.line); has_width = true; }
      else if (k == "path") { is.path = e.value; has_path = true; }
      else if (k == "q_i0") is.q_i0 = parse_real(e.value, e.line);
      else if (k == "P_ch0") is.P_ch0 = parse_real(e.value, e.line);
      else throw UnknownKey("initial." + k);
    }
    if (is.type == InitialSpec::Type::gaussian) {
      const bool from_call = type != nullptr &&
                             type->value.find('(') != std::string::npos;
      if (!from_call) {
        if (!has_amp) throw MissingKey("initial.amplitude");
        if (!has_center) throw MissingKey("initial.center");
        if (!has_width) throw MissingKey("initial.width");
      }
    }
    if (is.type == InitialSpec::Type::file && is.path.empty() && !has_path)
      throw MissingKey("initial.path");
  }

  // --- [forcing] -------------------------------------------------------------
  {
    ForcingSpec& fs = rc.forcing;
    const Entry* type = get("forcing", "type");
    bool has_amp = false, has_omega = false;
    bool from_call = false;
    if (type != nullptr) {
      std::string name;
      std::vector<std::string> args;
      const bool call = split_call(type->value, name, args, type->line);
      if (name == "none") fs.type = ForcingSpec::Type::none;
      else if (name == "open") fs.type = ForcingSpec::Type::open;
      else if (name == "sine") {
        fs.type = ForcingSpec::Type::sine;
        if (call) {
          if (args.size() != 2)
            throw ParseError(type->line, "sine(amplitude, omega)");
          fs.amplitude = parse_real(args[0], type->line);
          fs.omega = parse_real(args[1], type->line);
          from_call = true;
        }
      } else {
        throw ParseError(type->line, "unknown forcing type '" + name + "'");
      }
    }
    for (const auto& kv : *section_of("forcing")) {
      const std::string& k = kv.first;
      const Entry& e = kv.second;
      if (k == "type") continue;
      else if (k == "amplitude") { fs.amplitude = parse_real(e.value, e.line); has_amp = true; }
      else if (k == "omega") { fs.omega = parse_real(e.value, e.line); has_omega = true; }
      else throw UnknownKey("forcing." + k);
    }
    if (fs.type == ForcingSpec::Type::sine && !from_call) {
      if (!has_amp) throw MissingKey("forcing.amplitude");
      if (!has_omega) throw MissingKey("forcing.omega");
    }
  }

  // --- semantic validation (reported, not thrown) -----------------------------
  ValidationReport vp = validate_params(rc.params);
  ValidationReport vl = validate_layout(rc.layout);
  out.validation = vp;
  for (auto& item : vl.violations) out.validation.violations.push_back(item);
  return out;
}

ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool close_rel(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= 1e-12 * scale;
}

}  // namespace

std::string serialize(const RunConfig& rc) {
  std::ostringstream o;
  const PhysicalParams& p = rc.params;
  o << "[params]\n";
  o << "g = " << fmt(p.g) << "\n";
  o << "rho = " << fmt(p.rho) << "\n";
  o << "h_s = " << fmt(p.h_s) << "\n";
  o << "h_0 = " << fmt(p.h_0) << "\n";
  o << "zeta_w = " << fmt(p.zeta_w) << "\n";
  o << "l_0 = " << fmt(p.l_0) << "\n";
  o << "r = " << fmt(p.r) << "\n";
  o << "l_1 = " << fmt(p.l_1) << "\n";
  o << "gamma = " << fmt(p.gamma) << "\n";
  o << "P_atm = " << fmt(p.P_atm) << "\n";
  o << "h_ch = " << fmt(p.h_ch) << "\n";
  o << "K = " << fmt(p.K) << "\n";
  {
    PhysicalParams ref = p;
    ref.derive();
    if (!close_rel(ref.gamma_1, p.gamma_1))
      o << "gamma_1 = " << fmt(p.gamma_1) << "\n";
    if (!close_rel(ref.gamma_2, p.gamma_2))
      o << "gamma_2 = " << fmt(p.gamma_2) << "\n";
  }
  o << "\n[domain]\n";
  o << "L_ext = " << fmt(rc.layout.L_ext) << "\n";
  o << "n_minus = " << rc.layout.n_minus << "\n";
  o << "n_pl = " << rc.layout.n_pl << "\n";
  o << "n_pr = " << rc.layout.n_pr << "\n";

  const solver::SolverConfig& sc = rc.solver;
  o << "\n[solver]\n";
  o << "cfl = " << fmt(sc.cfl) << "\n";
  o << "t_end = " << fmt(sc.t_end) << "\n";
  o << "scheme = "
    << (sc.scheme == solver::Scheme::rusanov
            ? "rusanov"
            : sc.scheme == solver::Scheme::hll ? "hll" : "muscl_rusanov")
    << "\n";
  o << "ode_stepper = "
    << (sc.stepper == solver::Stepper::euler
            ? "euler"
            : sc.stepper == solver::Stepper::rk2 ? "rk2" : "rk4")
    << "\n";
  o << "picard = " << (sc.picard.enabled ? "on" : "off") << "\n";
  o << "max_iter = " << sc.picard.max_iter << "\n";
  o << "tol_low_norm = " << fmt(sc.picard.tol_low_norm) << "\n";
  o << "record_every = " << sc.record_every << "\n";
  o << "snapshots = " << sc.snapshots << "\n";
  o << "dt_fixed = " << fmt(sc.dt_fixed) << "\n";
  o << "compat_tol = " << fmt(sc.compat_tol) << "\n";
  o << "c0_threshold = " << fmt(sc.c0_threshold) << "\n";
  o << "c1_threshold = " << fmt(sc.c1_threshold) << "\n";

  const InitialSpec& is = rc.initial;
  o << "\n[initial]\n";
  o << "type = "
    << (is.type == InitialSpec::Type::rest
            ? "rest"
            : is.type == InitialSpec::Type::gaussian ? "gaussian" : "file")
    << "\n";
  if (is.type == InitialSpec::Type::gaussian) {
    o << "amplitude = " << fmt(is.amplitude) << "\n";
    o << "center = " << fmt(is.center) << "\n";
    o << "width = " << fmt(is.width) << "\n";
  }
  if (is.type == InitialSpec::Type::file) o << "path = " << is.path << "\n";
  o << "q_i0 = " << fmt(is.q_i0) << "\n";
  o << "P_ch0 = " << fmt(is.P_ch0) << "\n";

  const ForcingSpec& fs = rc.forcing;
  o << "\n[forcing]\n";
  o << "type = "
    << (fs.type == ForcingSpec::Type::none
            ? "none"
            : fs.type == ForcingSpec::Type::sine ? "sine" : "open")
    << "\n";
  if (fs.type == ForcingSpec::Type::sine) {
    o << "amplitude = " << fmt(fs.amplitude) << "\n";
    o << "omega = " << fmt(fs.omega) << "\n";
  }
  return o.str();
}

}  // namespace owc::io
