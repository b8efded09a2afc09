#include "curvex/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "curvex/error.hpp"
#include "curvex/units.hpp"

namespace curvex {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("expected a number, got '" + text + "'", line);
  return v;
}

long parse_integer(const std::string& text, int line) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || errno == ERANGE)
    throw ConfigError("expected an integer, got '" + text + "'", line);
  return v;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(const std::string&, int)> set;
  std::function<std::optional<std::string>()> get;
};

Field number(const char* section, const char* key, double& ref) {
  return {section, key, [&ref](const std::string& v, int line) { ref = parse_double(v, line); },
          [&ref]() -> std::optional<std::string> { return format(ref); }};
}

Field optional_number(const char* section, const char* key, std::optional<double>& ref) {
  return {section, key,
          [&ref](const std::string& v, int line) {
            if (v == "auto") ref.reset();
            else ref = parse_double(v, line);
          },
          [&ref]() -> std::optional<std::string> {
            return ref ? std::optional(format(*ref)) : std::nullopt;
          }};
}

Field count(const char* section, const char* key, std::size_t& ref) {
  return {section, key,
          [&ref, key](const std::string& v, int line) {
            const long n = parse_integer(v, line);
            if (n < 0) throw ConfigError(std::string(key) + " must be >= 0", line);
            ref = static_cast<std::size_t>(n);
          },
          [&ref]() -> std::optional<std::string> { return std::to_string(ref); }};
}

std::vector<Field> fields(RunConfig& c) {
  auto& m = c.model;
  return {
      number("model", "mass_amu", m.mass_amu),
      number("model", "ground_frequency_cm1", m.ground_frequency_cm1),
      number("model", "allowed_frequency_cm1", m.allowed_frequency_cm1),
      number("model", "allowed_origin_cm1", m.allowed_origin_cm1),
      number("model", "displacement_A", m.displacement_A),
      number("model", "forbidden_origin_cm1", m.forbidden_origin_cm1),
      number("model", "forbidden_frequency_cm1", m.forbidden_frequency_cm1),
      number("model", "morse_range_invA", m.morse_range_invA),
      number("model", "morse_minimum_A", m.morse_minimum_A),
      optional_number("model", "morse_depth_cm1", m.morse_depth_cm1),
      number("model", "coupling_erg_A", m.coupling_erg_A),
      number("model", "crossing_A", m.crossing_A),
      number("model", "gamma_cm1", m.gamma_cm1),
      optional_number("model", "electronic_gap_cm1", m.electronic_gap_cm1),
      number("grid", "lo_A", c.grid.lo_A),
      number("grid", "hi_A", c.grid.hi_A),
      count("grid", "points", c.grid.points),
      number("scan", "start_cm1", c.scan.start),
      number("scan", "stop_cm1", c.scan.stop),
      number("scan", "step_cm1", c.scan.step),
      {"raman", "final_state",
       [&c](const std::string& v, int line) {
         c.final_state = static_cast<int>(parse_integer(v, line));
       },
       [&c]() -> std::optional<std::string> { return std::to_string(c.final_state); }},
      number("wavepacket", "lo_A", c.wavepacket.lo_A),
      number("wavepacket", "hi_A", c.wavepacket.hi_A),
      count("wavepacket", "points", c.wavepacket.points),
      number("wavepacket", "dt_fs", c.wavepacket.dt_fs),
      number("wavepacket", "delta_width_steps", c.wavepacket.delta_width_steps),
      number("wavepacket", "decay_product", c.wavepacket.decay_product),
      {"output", "dir", [&c](const std::string& v, int) { c.output_dir = v; },
       [&c]() -> std::optional<std::string> { return c.output_dir; }},
  };
}

}  // namespace

double RunConfig::morse_depth_cm1() const {
  if (model.morse_depth_cm1) return *model.morse_depth_cm1;
  // Harmonic frequency at the well bottom equals forbidden_frequency_cm1.
  const double m = units::amu(model.mass_amu);
  const double w = units::wavenumber(model.forbidden_frequency_cm1);
  const double a = model.morse_range_invA;
  return m * w * w / (2.0 * a * a);
}

TwoStateModel RunConfig::build_model() const {
  const auto& p = model;
  if (!(p.mass_amu > 0.0)) throw InvalidInput("mass must be positive");
  if (!(p.morse_range_invA > 0.0)) throw InvalidInput("Morse range must be positive");
  const double m = units::amu(p.mass_amu);
  const double k0 = units::to_internal(p.coupling_erg_A, units::Unit::erg_angstrom).value;
  TwoStateModel out{
      PotentialCurve::harmonic(m, units::wavenumber(p.ground_frequency_cm1), 0.0, 0.0),
      PotentialCurve::harmonic(m, units::wavenumber(p.allowed_frequency_cm1),
                               units::angstrom(p.displacement_A),
                               units::wavenumber(p.allowed_origin_cm1)),
      PotentialCurve::morse(m, units::wavenumber(morse_depth_cm1()), p.morse_range_invA,
                            units::angstrom(p.morse_minimum_A),
                            units::wavenumber(p.forbidden_origin_cm1)),
      {k0, units::angstrom(p.crossing_A)},
      units::wavenumber(p.gamma_cm1),
      units::wavenumber(p.electronic_gap_cm1.value_or(p.allowed_origin_cm1)),
  };
  out.validate();
  return out;
}

Grid RunConfig::resolvent_grid() const {
  Grid g{grid.lo_A, grid.hi_A, grid.points};
  g.validate();
  return g;
}

WavepacketGrid RunConfig::wavepacket_grid() const {
  WavepacketGrid g{wavepacket.lo_A, wavepacket.hi_A, wavepacket.points};
  g.validate();
  return g;
}

void RunConfig::validate() const {
  const auto m = build_model();
  const auto g = resolvent_grid();
  if (!g.contains(m.coupling.location)) throw InvalidInput("crossing point outside the grid");
  scan.validate();
  if (final_state < 1 || final_state > 200) throw InvalidInput("final_state must be in 1..200");
  wavepacket_grid();
  if (!(wavepacket.dt_fs > 0.0)) throw InvalidInput("wavepacket dt must be positive");
  if (wavepacket.delta_width_steps < 2.0)
    throw InvalidInput("wavepacket delta_width_steps must be >= 2");
  if (!(wavepacket.decay_product > 0.0)) throw InvalidInput("decay_product must be positive");
}

void RunConfig::set(const std::string& section, const std::string& key, const std::string& value,
                    int line) {
  for (auto& f : fields(*this)) {
    if (section == f.section && key == f.key) {
      f.set(value, line);
      return;
    }
  }
  throw ConfigError("unknown key '" + section + "." + key + "'", line);
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::string section, raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(text.substr(1, text.size() - 2));
      static const char* known[] = {"model", "grid", "scan", "raman", "wavepacket", "output", "run"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError("unknown section '" + section + "'", line);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    if (section == "run") continue;
    c.set(section, trim(text.substr(0, eq)), trim(text.substr(eq + 1)), line);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  config.set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
             trim(assignment.substr(eq + 1)));
}

std::string echo_config(const RunConfig& config) {
  RunConfig copy = config;
  // Resolve derived values so the echo reproduces the run even if the defaults change.
  copy.model.morse_depth_cm1 = config.morse_depth_cm1();
  copy.model.electronic_gap_cm1 =
      config.model.electronic_gap_cm1.value_or(config.model.allowed_origin_cm1);
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields(copy)) {
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    if (auto v = f.get()) out << f.key << " = " << *v << '\n';
  }
  return out.str();
}

}  // namespace curvex
