#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "curvex/model.hpp"
#include "curvex/spectra.hpp"
#include "curvex/wavepacket.hpp"

namespace curvex {

/// Model parameters in laboratory units. Defaults are the published parameter set.
struct ModelConfig {
  double mass_amu = 35.4;
  double ground_frequency_cm1 = 400.0;
  double allowed_frequency_cm1 = 400.0;
  double allowed_origin_cm1 = 10700.0;
  double displacement_A = 0.1;
  double forbidden_origin_cm1 = 10800.0;
  double forbidden_frequency_cm1 = 400.0;  // used only when morse_depth_cm1 is unset
  double morse_range_invA = 1.0;
  double morse_minimum_A = 0.0;
  std::optional<double> morse_depth_cm1;  // unset: m w_F^2 / (2 alpha^2)
  double coupling_erg_A = 5.54275e-15;
  double crossing_A = -0.02477;
  double gamma_cm1 = 450.0;
  std::optional<double> electronic_gap_cm1;  // unset: allowed origin
};

struct GridConfig {
  double lo_A = -1.5;
  double hi_A = 1.5;
  std::size_t points = 4096;
};

struct WavepacketConfig {
  double lo_A = -3.0;
  double hi_A = 1.5;
  std::size_t points = 4096;
  double dt_fs = 0.05;
  double delta_width_steps = 2.0;
  double decay_product = 10.0;  // T * Gamma
};

struct RunConfig {
  ModelConfig model;
  GridConfig grid;
  ScanWindow scan;
  int final_state = 1;
  WavepacketConfig wavepacket;
  std::string output_dir = ".";

  /// Converts to internal units and validates. Throws InvalidInput.
  TwoStateModel build_model() const;
  double morse_depth_cm1() const;
  Grid resolvent_grid() const;
  WavepacketGrid wavepacket_grid() const;
  /// Full validation of every section; throws InvalidInput.
  void validate() const;

  /// Sets `section.key` from text. Throws ConfigError carrying `line`.
  void set(const std::string& section, const std::string& key, const std::string& value,
           int line = 0);
};

/// INI-style text: `[section]` headers, `key = value` lines, `#` or `;` comments.
/// Sections: model, grid, scan, raman, wavepacket, output. A `[run]` section is accepted and
/// ignored so result sidecars can be fed back in.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Applies `section.key=value`.
void apply_override(RunConfig& config, const std::string& assignment);

/// Re-loadable text with every field resolved, 17 significant digits.
std::string echo_config(const RunConfig& config);

}  // namespace curvex
