#pragma once

#include <span>
#include <string>
#include <vector>

#include "curvex/coupled.hpp"
#include "curvex/model.hpp"
#include "curvex/resolvent.hpp"

namespace curvex {

/// Photon-energy window in cm^-1, both ends included.
struct ScanWindow {
  double start = 9500.0;
  double stop = 13500.0;
  double step = 10.0;

  std::vector<double> photon_energies() const;
  void validate() const;
};

/// Everything one photon energy needs: the ground-state bra/ket sampled on the grid and the
/// model. Immutable; shared read-only by all scan threads.
class ScanSetup {
public:
  ScanSetup(TwoStateModel model, Grid grid, int final_state = 1, ResolventOptions options = {});

  const TwoStateModel& model() const { return model_; }
  const Grid& grid() const { return grid_; }
  int final_state() const { return final_state_; }
  const ResolventOptions& options() const { return options_; }
  std::span<const double> initial() const { return initial_; }
  std::span<const double> final() const { return final_; }

  /// Resolvent argument for a photon energy: omega + omega_0 / 2 + i Gamma.
  cplx resolvent_argument(double photon_energy) const;

private:
  TwoStateModel model_;
  Grid grid_;
  int final_state_;
  ResolventOptions options_;
  std::vector<double> initial_;
  std::vector<double> final_;
};

/// Amplitudes at one photon energy. Absorption uses <i|G|i>, Raman <f|G|i>.
struct PointAmplitudes {
  double photon_energy;
  cplx absorption_coupled;
  cplx absorption_uncoupled;
  cplx raman_coupled;
  cplx raman_uncoupled;
  cplx denominator;
};

PointAmplitudes evaluate_point(const ScanSetup& setup, double photon_energy);

/// Serial reference scan, kept for testing the parallel kernel.
std::vector<PointAmplitudes> scan_amplitudes_reference(const ScanSetup& setup,
                                                       std::span<const double> photon_energies);

/// OpenMP scan over photon energies. Output order and values match the reference exactly.
std::vector<PointAmplitudes> scan_amplitudes(const ScanSetup& setup,
                                             std::span<const double> photon_energies);

enum class SpectrumKind { absorption, raman };
enum class Execution { serial, parallel };

struct SpectrumSample {
  double photon_energy;  // cm^-1
  double intensity;      // arbitrary units
};

struct SpectrumMetadata {
  std::string model_fingerprint;
  Grid grid;
  bool coupled = false;
  int final_state = 0;  // raman only
};

struct Spectrum {
  SpectrumKind kind;
  std::vector<SpectrumSample> samples;
  SpectrumMetadata metadata;
};

/// I_A = Re[i <i|G11|i>] per sample.
Spectrum absorption_from(const ScanSetup& setup, std::span<const PointAmplitudes> scan,
                         bool coupled);
/// I_R = |<f|G11|i>|^2 per sample.
Spectrum raman_from(const ScanSetup& setup, std::span<const PointAmplitudes> scan, bool coupled);

Spectrum absorption_spectrum(const TwoStateModel& model, const Grid& grid,
                             std::span<const double> photon_energies, bool coupled,
                             Execution execution = Execution::parallel);
Spectrum raman_profile(const TwoStateModel& model, int final_state, const Grid& grid,
                       std::span<const double> photon_energies, bool coupled,
                       Execution execution = Execution::parallel);

/// Integral of |I_c - I_u| over integral of I_u, trapezoid rule on the shared grid.
double deviation_metric(const Spectrum& coupled, const Spectrum& uncoupled);

/// Throws NumericalError if a sample is non-finite, energies are not increasing, or an
/// intensity falls below the -1e-12 zero floor.
void check_spectrum(const Spectrum& spectrum);

std::string model_fingerprint(const TwoStateModel& model);

}  // namespace curvex
