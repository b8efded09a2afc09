#include "curvex/wavepacket.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "curvex/coupled.hpp"
#include "curvex/error.hpp"
#include "curvex/units.hpp"

namespace curvex {

namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

double sum_norm(std::span<const cplx> psi) {
  double s = 0.0;
  for (const auto& v : psi) s += std::norm(v);
  return s;
}

}  // namespace

std::size_t WavepacketGrid::nearest(double x) const {
  const double j = std::round((x - lo) / step());
  return static_cast<std::size_t>(std::clamp(j, 0.0, static_cast<double>(points - 1)));
}

void WavepacketGrid::validate() const {
  if (!(hi > lo)) throw InvalidInput("wavepacket grid needs lo < hi");
  if (points < 16 || points % 2 != 0)
    throw InvalidInput("wavepacket grid needs an even number of points >= 16");
}

WavepacketState make_state(const WavepacketGrid& grid, const std::function<double(double)>& f) {
  grid.validate();
  WavepacketState s;
  s.psi1.resize(grid.points);
  s.psi2.assign(grid.points, 0.0);
  for (std::size_t j = 0; j < grid.points; ++j) s.psi1[j] = f(grid.x(j));
  return s;
}

// --- propagator ---------------------------------------------------------------------------

struct SplitStepPropagator::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Plans(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(n);
    const int size = static_cast<int>(n);
    forward = fftw_plan_dft_1d(size, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(size, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
  cplx* data() { return reinterpret_cast<cplx*>(buffer); }
};

SplitStepPropagator::SplitStepPropagator(const TwoStateModel& model, const WavepacketGrid& grid,
                                         double dt, PropagationOptions options)
    : grid_(grid), dt_(dt), mass_(model.allowed.mass()), options_(options) {
  model.validate();
  grid_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be positive");
  if (options_.delta_width < 2.0)
    throw InvalidInput("coupling width must span at least 2 grid steps");
  if (!(options_.absorber_fraction > 0.0 && options_.absorber_fraction < 0.5))
    throw InvalidInput("absorber fraction must lie in (0, 0.5)");

  const std::size_t n = grid_.points;
  const double dx = grid_.step();
  const double xc = model.coupling.location;
  const double sigma = options_.delta_width * dx;

  // Normalized on the grid itself so that the discrete integral of the profile is K0.
  coupling_.resize(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = (grid_.x(j) - xc) / sigma;
    coupling_[j] = std::exp(-0.5 * u * u);
    total += coupling_[j] * dx;
  }
  for (auto& c : coupling_) c *= model.coupling.strength / total;

  p11_.resize(n);
  p22_.resize(n);
  p12_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid_.x(j);
    const double v1 = model.allowed(x), v2 = model.forbidden(x), c = coupling_[j];
    const double mu = 0.5 * (v1 + v2), de = 0.5 * (v1 - v2);
    const double r = std::hypot(de, c);
    const cplx ph = std::exp(cplx(0.0, -mu * dt_));
    const double cs = std::cos(r * dt_);
    const double sn = r > 0.0 ? std::sin(r * dt_) / r : dt_;
    p11_[j] = ph * cplx(cs, -sn * de);
    p22_[j] = ph * cplx(cs, sn * de);
    p12_[j] = ph * cplx(0.0, -sn * c);
  }

  wavenumbers_.resize(n);
  half_kinetic_.resize(n);
  half_kinetic_back_.resize(n);
  const double dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto m = static_cast<double>(j < n / 2 ? static_cast<std::ptrdiff_t>(j)
                                                 : static_cast<std::ptrdiff_t>(j) -
                                                       static_cast<std::ptrdiff_t>(n));
    wavenumbers_[j] = m * dk;
    const double phase = wavenumbers_[j] * wavenumbers_[j] / (2.0 * mass_) * 0.5 * dt_;
    // The 1/N of the inverse transform is folded into the phase factor.
    half_kinetic_[j] = std::exp(cplx(0.0, -phase)) * inv_n;
    half_kinetic_back_[j] = std::exp(cplx(0.0, phase)) * inv_n;
  }

  mask_.assign(n, 1.0);
  if (options_.absorber) {
    const double width = options_.absorber_fraction * (grid_.hi - grid_.lo);
    const double edge = grid_.lo + width;
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid_.x(j);
      if (x >= edge) continue;
      const double c = std::cos(0.5 * std::numbers::pi * (edge - x) / width);
      mask_[j] = std::pow(c * c, options_.absorber_exponent);
    }
  }

  plans_ = std::make_unique<Plans>(n);
}

SplitStepPropagator::~SplitStepPropagator() = default;

void SplitStepPropagator::kinetic(std::vector<cplx>& psi, const std::vector<cplx>& phase) {
  cplx* buf = plans_->data();
  std::copy(psi.begin(), psi.end(), buf);
  fftw_execute(plans_->forward);
  for (std::size_t j = 0; j < psi.size(); ++j) buf[j] *= phase[j];
  fftw_execute(plans_->backward);
  std::copy(buf, buf + psi.size(), psi.begin());
}

void SplitStepPropagator::potential(WavepacketState& s, bool forward) const {
  for (std::size_t j = 0; j < s.psi1.size(); ++j) {
    const cplx a = forward ? p11_[j] : std::conj(p11_[j]);
    const cplx d = forward ? p22_[j] : std::conj(p22_[j]);
    const cplx b = forward ? p12_[j] : std::conj(p12_[j]);
    const cplx u = s.psi1[j], v = s.psi2[j];
    s.psi1[j] = a * u + b * v;
    s.psi2[j] = b * u + d * v;
  }
}

void SplitStepPropagator::step(WavepacketState& s) {
  if (s.psi1.size() != grid_.points || s.psi2.size() != grid_.points)
    throw InvalidInput("state does not match the propagator grid");
  const double before = norm(s);
  kinetic(s.psi1, half_kinetic_);
  kinetic(s.psi2, half_kinetic_);
  potential(s, true);
  kinetic(s.psi1, half_kinetic_);
  kinetic(s.psi2, half_kinetic_);
  s.time += dt_;

  if (options_.absorber) {
    const double dx = grid_.step();
    double removed = 0.0;
    for (std::size_t j = 0; j < grid_.points; ++j) {
      if (mask_[j] == 1.0) continue;
      const double w = std::norm(s.psi2[j]);
      s.psi2[j] *= mask_[j];
      removed += (w - std::norm(s.psi2[j])) * dx;
    }
    absorbed_ += removed;
  }

  const double after = norm(s);
  if (!std::isfinite(after) || after - before > options_.norm_growth_limit * before)
    throw StepSizeError("norm grew by more than the per-step limit; reduce dt");
}

void SplitStepPropagator::step_back(WavepacketState& s) {
  if (s.psi1.size() != grid_.points || s.psi2.size() != grid_.points)
    throw InvalidInput("state does not match the propagator grid");
  kinetic(s.psi1, half_kinetic_back_);
  kinetic(s.psi2, half_kinetic_back_);
  potential(s, false);
  kinetic(s.psi1, half_kinetic_back_);
  kinetic(s.psi2, half_kinetic_back_);
  s.time -= dt_;
}

double SplitStepPropagator::norm(const WavepacketState& s) const {
  return (sum_norm(s.psi1) + sum_norm(s.psi2)) * grid_.step();
}

double SplitStepPropagator::retained_kinetic_energy(const WavepacketState& s, double threshold) {
  std::vector<double> density(grid_.points, 0.0);
  for (const auto* psi : {&s.psi1, &s.psi2}) {
    cplx* buf = plans_->data();
    std::copy(psi->begin(), psi->end(), buf);
    fftw_execute(plans_->forward);
    for (std::size_t j = 0; j < grid_.points; ++j)
      density[j] = std::max(density[j], std::norm(buf[j]));
  }
  const double peak = *std::max_element(density.begin(), density.end());
  double e = 0.0;
  for (std::size_t j = 0; j < grid_.points; ++j)
    if (density[j] >= threshold * peak)
      e = std::max(e, wavenumbers_[j] * wavenumbers_[j] / (2.0 * mass_));
  return e;
}

WavepacketSeries propagate(const TwoStateModel& model, const WavepacketGrid& grid,
                           const WavepacketState& initial, double dt, double duration,
                           PropagationOptions options, std::size_t stride) {
  if (!(duration >= 0.0)) throw InvalidInput("duration must be >= 0");
  if (stride == 0) throw InvalidInput("stride must be >= 1");
  SplitStepPropagator prop(model, grid, dt, options);
  if (prop.retained_kinetic_energy(initial) * dt >= 0.1)
    throw StepSizeError("dt does not resolve the retained kinetic energy (dt * E_max >= 0.1)");

  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  WavepacketSeries series;
  series.dt = dt * static_cast<double>(stride);
  series.states.reserve(steps / stride + 1);
  WavepacketState s = initial;
  series.states.push_back(s);
  for (std::size_t k = 1; k <= steps; ++k) {
    prop.step(s);
    if (k % stride == 0) series.states.push_back(s);
  }
  series.absorbed_norm = prop.absorbed_norm();
  return series;
}

// --- half-Fourier transform ---------------------------------------------------------------

HalfFourierAccumulator::HalfFourierAccumulator(std::vector<double> resolvent_energies,
                                               double gamma, double dt, std::size_t points)
    : energies_(std::move(resolvent_energies)), gamma_(gamma), dt_(dt), points_(points) {
  if (!(gamma > 0.0)) throw InvalidInput("damping must be positive");
  if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
  const std::vector<cplx> zero(points, 0.0);
  for (auto* v : {&sum1_, &sum2_, &first1_, &first2_, &last1_, &last2_})
    v->assign(energies_.size(), zero);
}

void HalfFourierAccumulator::add(const WavepacketState& s) {
  if (s.psi1.size() != points_ || s.psi2.size() != points_)
    throw InvalidInput("state does not match the accumulator size");
  const double t = static_cast<double>(count_) * dt_;
  for (std::size_t w = 0; w < energies_.size(); ++w) {
    const cplx f = std::exp(cplx(-gamma_ * t, energies_[w] * t)) * dt_;
    auto& s1 = sum1_[w];
    auto& s2 = sum2_[w];
    auto& l1 = last1_[w];
    auto& l2 = last2_[w];
    for (std::size_t j = 0; j < points_; ++j) {
      l1[j] = f * s.psi1[j];
      l2[j] = f * s.psi2[j];
      s1[j] += l1[j];
      s2[j] += l2[j];
    }
    if (count_ == 0) {
      first1_[w] = l1;
      first2_[w] = l2;
    }
  }
  ++count_;
  time_ = t;
}

std::vector<HalfFourierAmplitude> HalfFourierAccumulator::result() const {
  if (count_ < 2) throw InvalidInput("half-Fourier transform needs at least two states");
  std::vector<HalfFourierAmplitude> out;
  out.reserve(energies_.size());
  for (std::size_t w = 0; w < energies_.size(); ++w) {
    HalfFourierAmplitude a;
    a.energy = {energies_[w], gamma_};
    a.psi1.resize(points_);
    a.psi2.resize(points_);
    for (std::size_t j = 0; j < points_; ++j) {
      a.psi1[j] = sum1_[w][j] - 0.5 * (first1_[w][j] + last1_[w][j]);
      a.psi2[j] = sum2_[w][j] - 0.5 * (first2_[w][j] + last2_[w][j]);
    }
    a.tail_bound = std::exp(-gamma_ * time_) / gamma_;
    a.tail_warning = gamma_ * time_ < 8.0;
    out.push_back(std::move(a));
  }
  return out;
}

HalfFourierAmplitude half_fourier(const WavepacketSeries& series, double resolvent_energy,
                                  double gamma) {
  if (series.states.empty()) throw InvalidInput("empty wavepacket series");
  HalfFourierAccumulator acc({resolvent_energy}, gamma, series.dt,
                             series.states.front().psi1.size());
  for (const auto& s : series.states) acc.add(s);
  return acc.result().front();
}

// --- resolvent identity -------------------------------------------------------------------

IdentityReport verify_resolvent_identity(const TwoStateModel& model,
                                         std::span<const double> photon_energies,
                                         const IdentityOptions& options) {
  model.validate();
  const WavepacketGrid& wg = options.grid;
  const double dt = options.dt > 0.0 ? options.dt : units::femtoseconds(0.01);
  const double gamma = model.damping;
  const double duration = options.decay_product / gamma;

  const auto chi_i = harmonic_eigenstate(model.ground, 0);
  const auto chi_f = harmonic_eigenstate(model.ground, options.final_state);
  const WavepacketState initial = make_state(wg, [&](double x) { return chi_i(x); });

  std::vector<double> energies;
  for (double w : photon_energies) energies.push_back(w + model.zero_point_offset());

  SplitStepPropagator prop(model, wg, dt, options.propagation);
  if (prop.retained_kinetic_energy(initial) * dt >= 0.1)
    throw StepSizeError("dt does not resolve the retained kinetic energy (dt * E_max >= 0.1)");
  HalfFourierAccumulator acc(energies, gamma, dt, wg.points);
  WavepacketState s = initial;
  acc.add(s);
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt));
  for (std::size_t k = 0; k < steps; ++k) {
    prop.step(s);
    acc.add(s);
  }
  const auto amplitudes = acc.result();

  std::vector<double> bra(wg.points);
  for (std::size_t j = 0; j < wg.points; ++j) bra[j] = chi_f(wg.x(j));
  std::vector<std::size_t> probes;
  for (std::size_t j = 0; j < wg.points; ++j)
    if (std::abs(wg.x(j) - model.coupling.location) <= options.probe_halfwidth) probes.push_back(j);

  const auto ket = chi_i.sample(options.resolvent_grid);
  const auto bra_r = chi_f.sample(options.resolvent_grid);
  const cplx i{0.0, 1.0};

  IdentityReport report;
  report.absorbed_norm = prop.absorbed_norm();
  for (std::size_t w = 0; w < photon_energies.size(); ++w) {
    const cplx z = amplitudes[w].energy;
    const auto ev1 = build_resolvent(model.allowed, z, options.resolvent_grid);
    const auto ev2 = build_resolvent(model.forbidden, z, options.resolvent_grid);
    const CoupledGreens greens(ev1, ev2, model.coupling);

    IdentitySample sample{photon_energies[w], i * greens.g11(bra_r, ket).value, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < wg.points; ++j) sample.time_domain += bra[j] * amplitudes[w].psi1[j];
    sample.time_domain *= wg.step();
    sample.deviation_g11 =
        std::abs(sample.time_domain - sample.frequency_domain) / std::abs(sample.frequency_domain);

    double diff = 0.0, ref = 0.0;
    for (std::size_t p : probes) {
      const cplx expected = i * greens.g21_column(wg.x(p), ket);
      diff += std::norm(amplitudes[w].psi2[p] - expected);
      ref += std::norm(expected);
    }
    if (ref > 0.0) sample.deviation_g21 = std::sqrt(diff / ref);
    report.max_deviation_g11 = std::max(report.max_deviation_g11, sample.deviation_g11);
    report.max_deviation_g21 = std::max(report.max_deviation_g21, sample.deviation_g21);
    report.tail_warning = report.tail_warning || amplitudes[w].tail_warning;
    report.samples.push_back(sample);
  }
  return report;
}

}  // namespace curvex
