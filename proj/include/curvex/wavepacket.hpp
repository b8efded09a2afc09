#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "curvex/model.hpp"
#include "curvex/resolvent.hpp"

namespace curvex {

/// Periodic grid for the FFT propagator: `points` samples on [lo, hi), right end excluded.
struct WavepacketGrid {
  double lo = -3.0;
  double hi = 1.5;
  std::size_t points = 4096;

  double step() const { return (hi - lo) / static_cast<double>(points); }
  double x(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
  std::size_t nearest(double x) const;
  void validate() const;
};

struct WavepacketState {
  std::vector<cplx> psi1;  // allowed surface
  std::vector<cplx> psi2;  // forbidden surface
  double time = 0.0;
};

/// psi1 = f sampled on the grid, psi2 = 0.
WavepacketState make_state(const WavepacketGrid& grid, const std::function<double(double)>& f);

struct PropagationOptions {
  double delta_width = 2.0;  // Gaussian width of the regularized coupling, in grid steps
  bool absorber = true;      // cos^2 mask on the dissociative (left) edge of psi2
  double absorber_fraction = 0.15;
  /// The mask is applied every step as (cos^2 ramp)^exponent.
  double absorber_exponent = 1.0 / 32.0;
  double norm_growth_limit = 1e-6;  // per step, relative
};

/// Strang split-step propagator: kinetic half step, exact 2x2 local potential step, kinetic
/// half step. The delta coupling is spread over a normalized Gaussian of width
/// delta_width * dx centered on x_c.
class SplitStepPropagator {
public:
  SplitStepPropagator(const TwoStateModel& model, const WavepacketGrid& grid, double dt,
                      PropagationOptions options = {});
  ~SplitStepPropagator();
  SplitStepPropagator(const SplitStepPropagator&) = delete;
  SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

  const WavepacketGrid& grid() const { return grid_; }
  double dt() const { return dt_; }

  /// Advances by dt, applies the absorber, and throws StepSizeError on norm growth.
  void step(WavepacketState& state);
  /// Advances by -dt without absorber. Undoes step() when the absorber is off.
  void step_back(WavepacketState& state);

  double norm(const WavepacketState& state) const;
  /// Norm removed by the absorber so far.
  double absorbed_norm() const { return absorbed_; }
  std::span<const double> coupling_profile() const { return coupling_; }

  /// Largest kinetic energy among momentum components holding at least `threshold` of the
  /// peak momentum-space density of either component.
  double retained_kinetic_energy(const WavepacketState& state, double threshold = 1e-14);

private:
  struct Plans;
  void kinetic(std::vector<cplx>& psi, const std::vector<cplx>& phase);
  void potential(WavepacketState& state, bool forward) const;

  WavepacketGrid grid_;
  double dt_;
  double mass_;
  PropagationOptions options_;
  std::vector<double> coupling_;
  std::vector<double> wavenumbers_;
  std::vector<cplx> half_kinetic_, half_kinetic_back_;
  // Potential step matrix per node; the reverse step uses the conjugates.
  std::vector<cplx> p11_, p22_, p12_;
  std::vector<double> mask_;
  double absorbed_ = 0.0;
  std::unique_ptr<Plans> plans_;
};

/// Recorded time series: states at t = 0, stride*dt, 2*stride*dt, ...
struct WavepacketSeries {
  std::vector<WavepacketState> states;
  double dt = 0.0;  // spacing of the recorded states
  double absorbed_norm = 0.0;
};

WavepacketSeries propagate(const TwoStateModel& model, const WavepacketGrid& grid,
                           const WavepacketState& initial, double dt, double duration,
                           PropagationOptions options = {}, std::size_t stride = 1);

struct HalfFourierAmplitude {
  cplx energy;  // omega + i Gamma
  std::vector<cplx> psi1, psi2;
  double tail_bound = 0.0;     // bound on the truncated integral beyond T, per unit norm
  bool tail_warning = false;   // T * Gamma < 8
};

/// Streams states into Psi_bar(w) = int_0^T Psi(t) e^{i (w + i Gamma) t} dt by the trapezoid
/// rule. States must arrive at uniform spacing dt starting at t = 0.
class HalfFourierAccumulator {
public:
  HalfFourierAccumulator(std::vector<double> resolvent_energies, double gamma, double dt,
                         std::size_t points);

  void add(const WavepacketState& state);
  std::size_t count() const { return count_; }
  std::vector<HalfFourierAmplitude> result() const;

private:
  std::vector<double> energies_;
  double gamma_, dt_;
  std::size_t points_, count_ = 0;
  double time_ = 0.0;
  std::vector<std::vector<cplx>> sum1_, sum2_, first1_, first2_, last1_, last2_;
};

/// `resolvent_energy` is the real part of the resolvent argument, Gamma the damping.
HalfFourierAmplitude half_fourier(const WavepacketSeries& series, double resolvent_energy,
                                  double gamma);

struct IdentityOptions {
  WavepacketGrid grid{-3.0, 1.5, 16384};
  double dt = 0.0;             // 0 selects 0.01 fs
  double decay_product = 10.0; // T * Gamma
  PropagationOptions propagation{};
  Grid resolvent_grid{};
  int final_state = 1;
  /// psi2 is compared with i G21 chi_i on the wavepacket nodes within this distance of
  /// the crossing, as a relative L2 error.
  double probe_halfwidth = 0.1;
};

struct IdentitySample {
  double photon_energy;
  cplx frequency_domain;  // i <f|G11|i>
  cplx time_domain;       // <f|Psi_bar_1>
  double deviation_g11;
  double deviation_g21;   // relative L2 over the probe window
};

struct IdentityReport {
  std::vector<IdentitySample> samples;
  double max_deviation_g11 = 0.0;
  double max_deviation_g21 = 0.0;
  double absorbed_norm = 0.0;
  bool tail_warning = false;
};

/// Propagates chi_0 of the ground state on the allowed surface and compares the
/// half-Fourier transforms with the coupled resolvent at each photon energy.
IdentityReport verify_resolvent_identity(const TwoStateModel& model,
                                         std::span<const double> photon_energies,
                                         const IdentityOptions& options = {});

}  // namespace curvex
