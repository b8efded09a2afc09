#include "curvex/spectra.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include "curvex/error.hpp"

namespace curvex {

std::vector<double> ScanWindow::photon_energies() const {
  validate();
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = start + static_cast<double>(k) * step;
  return out;
}

void ScanWindow::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !(stop > start))
    throw InvalidInput("scan window needs start < stop");
  if (!(step > 0.0)) throw InvalidInput("scan step must be positive");
}

ScanSetup::ScanSetup(TwoStateModel model, Grid grid, int final_state, ResolventOptions options)
    : model_(std::move(model)), grid_(grid), final_state_(final_state), options_(options) {
  model_.validate();
  grid_.validate();
  if (final_state < 0) throw InvalidInput("final vibrational state must be >= 0");
  if (!grid_.contains(model_.coupling.location))
    throw InvalidInput("coupling location outside the resolvent grid");
  initial_ = harmonic_eigenstate(model_.ground, 0).sample(grid_);
  final_ = harmonic_eigenstate(model_.ground, final_state).sample(grid_);
}

cplx ScanSetup::resolvent_argument(double photon_energy) const {
  return {photon_energy + model_.zero_point_offset(), model_.damping};
}

PointAmplitudes evaluate_point(const ScanSetup& setup, double photon_energy) {
  const cplx z = setup.resolvent_argument(photon_energy);
  const auto ev1 = build_resolvent(setup.model().allowed, z, setup.grid(), setup.options());
  const auto ev2 = build_resolvent(setup.model().forbidden, z, setup.grid(), setup.options());
  const CoupledGreens greens(ev1, ev2, setup.model().coupling);

  const auto absorption = greens.g11(setup.initial(), setup.initial());
  const auto raman = greens.g11(setup.final(), setup.initial());
  return {photon_energy,  absorption.value, absorption.direct,
          raman.value,    raman.direct,     greens.denominator()};
}

std::vector<PointAmplitudes> scan_amplitudes_reference(const ScanSetup& setup,
                                                       std::span<const double> photon_energies) {
  std::vector<PointAmplitudes> out;
  out.reserve(photon_energies.size());
  for (double w : photon_energies) out.push_back(evaluate_point(setup, w));
  return out;
}

std::vector<PointAmplitudes> scan_amplitudes(const ScanSetup& setup,
                                             std::span<const double> photon_energies) {
  const auto count = static_cast<std::ptrdiff_t>(photon_energies.size());
  std::vector<PointAmplitudes> out(photon_energies.size());
  // Exceptions cannot cross the parallel region; keep the first one and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      out[static_cast<std::size_t>(k)] =
          evaluate_point(setup, photon_energies[static_cast<std::size_t>(k)]);
    } catch (...) {
#pragma omp critical(curvex_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// --- spectra ------------------------------------------------------------------------------

namespace {

SpectrumMetadata metadata_for(const ScanSetup& setup, bool coupled, int final_state) {
  return {model_fingerprint(setup.model()), setup.grid(), coupled, final_state};
}

std::vector<PointAmplitudes> run(const ScanSetup& setup, std::span<const double> energies,
                                 Execution execution) {
  return execution == Execution::parallel ? scan_amplitudes(setup, energies)
                                          : scan_amplitudes_reference(setup, energies);
}

}  // namespace

Spectrum absorption_from(const ScanSetup& setup, std::span<const PointAmplitudes> scan,
                         bool coupled) {
  Spectrum s{SpectrumKind::absorption, {}, metadata_for(setup, coupled, 0)};
  s.samples.reserve(scan.size());
  const cplx i{0.0, 1.0};
  for (const auto& p : scan) {
    const cplx amp = coupled ? p.absorption_coupled : p.absorption_uncoupled;
    s.samples.push_back({p.photon_energy, (i * amp).real()});
  }
  check_spectrum(s);
  return s;
}

Spectrum raman_from(const ScanSetup& setup, std::span<const PointAmplitudes> scan, bool coupled) {
  Spectrum s{SpectrumKind::raman, {}, metadata_for(setup, coupled, setup.final_state())};
  s.samples.reserve(scan.size());
  for (const auto& p : scan) {
    const cplx amp = coupled ? p.raman_coupled : p.raman_uncoupled;
    s.samples.push_back({p.photon_energy, std::norm(amp)});
  }
  check_spectrum(s);
  return s;
}

Spectrum absorption_spectrum(const TwoStateModel& model, const Grid& grid,
                             std::span<const double> photon_energies, bool coupled,
                             Execution execution) {
  const ScanSetup setup(model, grid, 1);
  const auto scan = run(setup, photon_energies, execution);
  return absorption_from(setup, scan, coupled);
}

Spectrum raman_profile(const TwoStateModel& model, int final_state, const Grid& grid,
                       std::span<const double> photon_energies, bool coupled,
                       Execution execution) {
  if (final_state < 1) throw InvalidInput("Raman final state must be >= 1");
  const ScanSetup setup(model, grid, final_state);
  const auto scan = run(setup, photon_energies, execution);
  return raman_from(setup, scan, coupled);
}

double deviation_metric(const Spectrum& coupled, const Spectrum& uncoupled) {
  const auto& a = coupled.samples;
  const auto& b = uncoupled.samples;
  if (a.size() != b.size() || a.size() < 2) throw InvalidInput("spectra grids differ");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].photon_energy != b[k].photon_energy) throw InvalidInput("spectra grids differ");

  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k + 1 < a.size(); ++k) {
    const double h = a[k + 1].photon_energy - a[k].photon_energy;
    num += 0.5 * h *
           (std::abs(a[k].intensity - b[k].intensity) +
            std::abs(a[k + 1].intensity - b[k + 1].intensity));
    den += 0.5 * h * (b[k].intensity + b[k + 1].intensity);
  }
  if (!(den > 0.0)) throw InvalidInput("reference spectrum integrates to zero");
  return num / den;
}

void check_spectrum(const Spectrum& spectrum) {
  const auto& s = spectrum.samples;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!std::isfinite(s[k].photon_energy) || !std::isfinite(s[k].intensity))
      throw NumericalError("spectra", "non-finite sample");
    if (k > 0 && !(s[k].photon_energy > s[k - 1].photon_energy))
      throw NumericalError("spectra", "photon energies must increase strictly");
    if (s[k].intensity < -1e-12)
      throw NumericalError("spectra", "negative intensity below the numerical zero floor");
  }
}

std::string model_fingerprint(const TwoStateModel& model) {
  char buf[512];
  const auto curve = [](const PotentialCurve& c) {
    char b[160];
    if (c.is_harmonic()) {
      const auto& p = c.as_harmonic();
      std::snprintf(b, sizeof b, "H:%.17g:%.17g:%.17g:%.17g", p.mass, p.frequency, p.minimum,
                    p.origin);
    } else {
      const auto& p = c.as_morse();
      std::snprintf(b, sizeof b, "M:%.17g:%.17g:%.17g:%.17g:%.17g", p.mass, p.well_depth,
                    p.range, p.minimum, p.origin);
    }
    return std::string(b);
  };
  std::snprintf(buf, sizeof buf, "%s|%s|%s|%.17g:%.17g|%.17g|%.17g", curve(model.ground).c_str(),
                curve(model.allowed).c_str(), curve(model.forbidden).c_str(),
                model.coupling.strength, model.coupling.location, model.damping,
                model.electronic_gap);
  // FNV-1a, 64 bit.
  std::uint64_t hash = 1469598103934665603ull;
  for (const char* p = buf; *p; ++p) {
    hash ^= static_cast<unsigned char>(*p);
    hash *= 1099511628211ull;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(hash));
  return out;
}

}  // namespace curvex
