// Config grammar: sections, comments, duplicates, functional forms, error
// reporting with line numbers, the gamma-override rule and the canonical
// serializer round-trip.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "owc/config.hpp"
#include "owc/errors.hpp"
#include "owc/solver.hpp"

using namespace owc;
using io::ParsedConfig;
using io::parse_config_text;

TEST_CASE("full config parse") {
  const std::string text = R"(# full grammar exercise
[params]
g = 9.81
h_s = 2.5        # trailing comment
h_0 = 1.25
zeta_w = -0.25
l_0 = 4.0
r = 0.4
l_1 = 7.0

[domain]
L_ext = 12
n_minus = 480
n_pl = 144
n_pr = 120

[solver]
cfl = 0.4
t_end = 2.5
scheme = hll
ode_stepper = rk4
picard = on(12, 1e-9)
record_every = 5
snapshots = 4
dt_fixed = 0.001
compat_tol = 1e-7

[initial]
type = gaussian(0.02, -4.0, 0.6)
q_i0 = 0.01

[forcing]
type = sine(0.05, 1.5)
)";
  const ParsedConfig pc = parse_config_text(text);
  const io::RunConfig& rc = pc.config;

  CHECK(rc.params.h_s == 2.5);
  CHECK(rc.params.h_0 == 1.25);
  CHECK(rc.params.zeta_w == -0.25);
  CHECK(rc.params.h_w == doctest::Approx(1.0));      // derived
  CHECK(rc.params.alpha == doctest::Approx(0.8));    // 2*0.4/1.0
  CHECK(rc.params.chamber_len == doctest::Approx(2.6));

  CHECK(rc.layout.L_ext == 12.0);
  CHECK(rc.layout.n_minus == 480);
  CHECK(rc.layout.dx_minus == doctest::Approx(0.025));
  CHECK(rc.layout.x_lw == doctest::Approx(3.6));

  CHECK(rc.solver.cfl == 0.4);
  CHECK(rc.solver.t_end == 2.5);
  CHECK(rc.solver.scheme == solver::Scheme::hll);
  CHECK(rc.solver.stepper == solver::Stepper::rk4);
  CHECK(rc.solver.picard.enabled);
  CHECK(rc.solver.picard.max_iter == 12);
  CHECK(rc.solver.picard.tol_low_norm == 1e-9);
  CHECK(rc.solver.record_every == 5);
  CHECK(rc.solver.snapshots == 4);
  CHECK(rc.solver.dt_fixed == 0.001);
  CHECK(rc.solver.compat_tol == 1e-7);

  CHECK(rc.initial.type == InitialSpec::Type::gaussian);
  CHECK(rc.initial.amplitude == 0.02);
  CHECK(rc.initial.center == -4.0);
  CHECK(rc.initial.width == 0.6);
  CHECK(rc.initial.q_i0 == 0.01);

  CHECK(rc.forcing.type == ForcingSpec::Type::sine);
  CHECK(rc.forcing.amplitude == 0.05);
  CHECK(rc.forcing.omega == 1.5);

  CHECK(pc.validation.pass());
}

TEST_CASE("defaults, ordering and duplicates") {
  SUBCASE("empty text yields the documented defaults") {
    const ParsedConfig pc = parse_config_text("");
    CHECK(pc.config.params.g == 9.81);
    CHECK(pc.config.layout.n_minus == 400);
    CHECK(pc.config.solver.scheme == solver::Scheme::rusanov);
    CHECK(pc.config.initial.type == InitialSpec::Type::rest);
    CHECK(pc.config.forcing.type == ForcingSpec::Type::none);
    CHECK(pc.validation.pass());
  }
  SUBCASE("section order does not matter") {
    const ParsedConfig pc = parse_config_text(
        "[solver]\nt_end = 7\n[params]\ng = 10\n");
    CHECK(pc.config.params.g == 10.0);
    CHECK(pc.config.solver.t_end == 7.0);
  }
  SUBCASE("the last occurrence of a key wins") {
    const ParsedConfig pc = parse_config_text(
        "[params]\ng = 1\ng = 2\n[params]\ng = 3\n");
    CHECK(pc.config.params.g == 3.0);
  }
  SUBCASE("expanded initial keys equal the functional form") {
    const ParsedConfig a = parse_config_text(
        "[initial]\ntype = gaussian(0.5, 1.5, 2.5)\n");
    const ParsedConfig b = parse_config_text(
        "[initial]\ntype = gaussian\namplitude = 0.5\ncenter = 1.5\nwidth = "
        "2.5\n");
    CHECK(a.config.initial.amplitude == b.config.initial.amplitude);
    CHECK(a.config.initial.center == b.config.initial.center);
    CHECK(a.config.initial.width == b.config.initial.width);
  }
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_config_text("[params]\ng = 9.81\nrho = soup\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_config_text("[nonsense]\nx = 1\n"), UnknownKey);
  CHECK_THROWS_AS(parse_config_text("[params]\nplanck = 6.6e-34\n"),
                  UnknownKey);
  CHECK_THROWS_AS(parse_config_text("g = 9.81\n"), ParseError);  // no section
  CHECK_THROWS_AS(parse_config_text("[initial]\ntype = gaussian\n"),
                  MissingKey);  // no amplitude/center/width anywhere
  CHECK_THROWS_AS(parse_config_text("[initial]\ntype = file\n"), MissingKey);
  CHECK_THROWS_AS(parse_config_text("[forcing]\ntype = sine\n"), MissingKey);
  CHECK_THROWS_AS(parse_config_text("[solver]\nscheme = upwind9\n"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_config_text("[initial]\ntype = gaussian(0.1, 0.0\n"), ParseError);
  CHECK_THROWS_AS(io::parse_config("/nonexistent/nowhere.cfg"), ParseError);
}

TEST_CASE("gamma overrides are applied after derivation and flagged") {
  // overriding gamma_2 = 0 (sealed chamber) must survive the derive() pass
  // but fail validation, so downstream runs demand force
  const ParsedConfig pc = parse_config_text(
      "[params]\nK = 50000\ngamma_2 = 0\n");
  CHECK(pc.config.params.gamma_2 == 0.0);
  CHECK(pc.config.params.gamma_1 == doctest::Approx(0.9457));
  CHECK_FALSE(pc.validation.pass());

  // a consistent explicit value is not flagged
  const ParsedConfig ok = parse_config_text("[params]\ngamma_1 = 0.9457\n");
  CHECK(ok.validation.pass());
}

TEST_CASE("canonical serialization round-trips exactly") {
  const std::string text = R"([params]
h_s = 2.125
zeta_w = -0.3712
K = 42321.5
[domain]
n_pr = 160
[solver]
cfl = 0.37
scheme = muscl_rusanov
ode_stepper = euler
picard = on(9, 3.5e-7)
[initial]
type = gaussian(0.0123456789012345, -3.25, 0.7071)
P_ch0 = 12.25
[forcing]
type = sine(0.001, 2.7182818284590452)
)";
  const ParsedConfig a = parse_config_text(text);
  const std::string canon = io::serialize(a.config);
  const ParsedConfig b = parse_config_text(canon);

  CHECK(b.config.params.h_s == a.config.params.h_s);
  CHECK(b.config.params.zeta_w == a.config.params.zeta_w);
  CHECK(b.config.params.K == a.config.params.K);
  CHECK(b.config.layout.n_pr == a.config.layout.n_pr);
  CHECK(b.config.solver.cfl == a.config.solver.cfl);
  CHECK(b.config.solver.scheme == a.config.solver.scheme);
  CHECK(b.config.solver.stepper == a.config.solver.stepper);
  CHECK(b.config.solver.picard.enabled == a.config.solver.picard.enabled);
  CHECK(b.config.solver.picard.max_iter == a.config.solver.picard.max_iter);
  CHECK(b.config.solver.picard.tol_low_norm ==
        a.config.solver.picard.tol_low_norm);
  CHECK(b.config.initial.amplitude == a.config.initial.amplitude);
  CHECK(b.config.initial.width == a.config.initial.width);
  CHECK(b.config.initial.P_ch0 == a.config.initial.P_ch0);
  CHECK(b.config.forcing.omega == a.config.forcing.omega);

  // serialization is a fixed point: serialize(parse(serialize(x))) == it
  CHECK(io::serialize(b.config) == canon);

  // inconsistent overrides are preserved through the round-trip
  const ParsedConfig c = parse_config_text("[params]\ngamma_2 = 0\n");
  const ParsedConfig d = parse_config_text(io::serialize(c.config));
  CHECK(d.config.params.gamma_2 == 0.0);
}
