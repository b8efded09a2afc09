#include <doctest.h>

#include <sstream>
#include <string>

#include "curvex/config.hpp"
#include "curvex/error.hpp"

using namespace curvex;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("defaults are the published parameter set") {
  const RunConfig c = parse("");
  CHECK(c.model.mass_amu == 35.4);
  CHECK(c.model.allowed_origin_cm1 == 10700.0);
  CHECK(c.model.forbidden_origin_cm1 == 10800.0);
  CHECK(c.model.displacement_A == 0.1);
  CHECK(c.model.coupling_erg_A == 5.54275e-15);
  CHECK(c.model.crossing_A == -0.02477);
  CHECK(c.model.gamma_cm1 == 450.0);
  CHECK(c.grid.points == 4096);
  CHECK(c.scan.photon_energies().size() == 401);
  CHECK(c.final_state == 1);
  CHECK(c.wavepacket.dt_fs == 0.05);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("sections, comments and values") {
  const auto c = parse(R"(
# leading comment
[model]
gamma_cm1 = 20   ; trailing comment
coupling_erg_A = 0
morse_depth_cm1 = 5000

[raman]
final_state = 2

[scan]
step_cm1 = 5
[run]
job = absorption
)");
  CHECK(c.model.gamma_cm1 == 20.0);
  CHECK(c.model.coupling_erg_A == 0.0);
  CHECK(c.morse_depth_cm1() == 5000.0);
  CHECK(c.final_state == 2);
  CHECK(c.scan.step == 5.0);
}

TEST_CASE("errors carry the offending line") {
  CHECK(error_line("[model]\nmass_amu = heavy\n") == 2);
  CHECK(error_line("[model]\n\nnot_a_key = 1\n") == 3);
  CHECK(error_line("[nowhere]\n") == 1);
  CHECK(error_line("mass_amu = 3\n") == 1);
  CHECK(error_line("[grid]\npoints = -4\n") == 2);
  CHECK(error_line("[grid\n") == 1);
  CHECK(error_line("[grid]\npoints 4096\n") == 2);
  try {
    parse("[model]\n\ngamma_cm1 = x\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("physical validation") {
  RunConfig c;
  c.model.mass_amu = -1.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = RunConfig{};
  c.model.gamma_cm1 = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = RunConfig{};
  c.model.crossing_A = 4.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = RunConfig{};
  c.final_state = 0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = RunConfig{};
  c.wavepacket.delta_width_steps = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
}

TEST_CASE("derived Morse depth") {
  const RunConfig c;
  // m w^2 / (2 alpha^2) in cm^-1 for 35.4 amu, 400 cm^-1, alpha = 1 / A.
  CHECK(c.morse_depth_cm1() == doctest::Approx(83998.0).epsilon(1e-4));
}

TEST_CASE("overrides") {
  RunConfig c;
  apply_override(c, "model.gamma_cm1=20");
  apply_override(c, "scan.step_cm1 = 2.5");
  CHECK(c.model.gamma_cm1 == 20.0);
  CHECK(c.scan.step == 2.5);
  CHECK_THROWS_AS(apply_override(c, "gamma_cm1=20"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "model.gamma_cm1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "model.nothing=1"), ConfigError);
}

TEST_CASE("echo round-trips every field") {
  RunConfig c;
  c.model.coupling_erg_A = 1.234567890123e-15;
  c.model.gamma_cm1 = 321.0;
  c.scan.step = 7.0;
  c.final_state = 3;
  c.wavepacket.points = 8192;
  c.output_dir = "out";
  const auto text = echo_config(c);
  const auto back = parse(text);
  CHECK(echo_config(back) == text);
  CHECK(back.model.coupling_erg_A == c.model.coupling_erg_A);
  CHECK(back.model.morse_depth_cm1.value() == c.morse_depth_cm1());
  CHECK(back.model.electronic_gap_cm1.value() == 10700.0);
  CHECK(back.final_state == 3);
  CHECK(back.wavepacket.points == 8192);
  CHECK(back.output_dir == "out");
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/curvex.ini"), ConfigError);
}
