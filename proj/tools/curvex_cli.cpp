// Command-line driver: absorption | raman | validate | greens-probe.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "curvex/config.hpp"
#include "curvex/coupled.hpp"
#include "curvex/error.hpp"
#include "curvex/spectra.hpp"
#include "curvex/validation.hpp"

namespace fs = std::filesystem;
using namespace curvex;

namespace {

enum Exit { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct Flags {
  std::string config_path;
  std::optional<double> k0, gamma, displacement;
  std::optional<int> nf;
  std::optional<std::string> out;
  std::vector<std::string> overrides;
  bool quick = false;
};

RunConfig resolve_config(const Flags& f) {
  RunConfig c = f.config_path.empty() ? RunConfig{} : load_config(f.config_path);
  for (const auto& s : f.overrides) apply_override(c, s);
  if (f.k0) c.model.coupling_erg_A = *f.k0;
  if (f.gamma) c.model.gamma_cm1 = *f.gamma;
  if (f.displacement) c.model.displacement_A = *f.displacement;
  if (f.nf) c.final_state = *f.nf;
  if (f.out) c.output_dir = *f.out;
  c.validate();
  return c;
}

void write_spectrum(const fs::path& path, const Spectrum& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "omega_cm1,intensity\n";
  char line[96];
  for (const auto& p : s.samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", p.photon_energy, p.intensity);
    out << line;
  }
}

void write_sidecar(const fs::path& csv, const std::string& job, const RunConfig& c,
                   const Spectrum& s) {
  fs::path meta = csv;
  meta.replace_extension(".meta.txt");
  std::ofstream out(meta);
  if (!out) throw std::runtime_error("cannot write " + meta.string());
  out << "# Provenance for " << csv.filename().string()
      << ". Load with --config to reproduce the run.\n"
      << "[run]\n"
      << "job = " << job << '\n'
      << "coupled = " << (s.metadata.coupled ? "true" : "false") << '\n'
      << "code_version = " << CURVEX_VERSION << '\n'
      << "model_fingerprint = " << s.metadata.model_fingerprint << '\n'
      << "rows = " << s.samples.size() << "\n\n"
      << echo_config(c);
}

void emit(const RunConfig& c, const std::string& job, const Spectrum& coupled,
          const Spectrum& uncoupled) {
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  for (const auto* s : {&coupled, &uncoupled}) {
    const fs::path csv = dir / (job + (s->metadata.coupled ? "_coupled.csv" : "_uncoupled.csv"));
    write_spectrum(csv, *s);
    write_sidecar(csv, job, c, *s);
    std::cout << "wrote " << csv.string() << " (" << s->samples.size() << " rows)\n";
  }
}

int run_spectrum(const RunConfig& c, bool raman) {
  const ScanSetup setup(c.build_model(), c.resolvent_grid(), c.final_state);
  const auto energies = c.scan.photon_energies();
  const auto scan = scan_amplitudes(setup, energies);
  if (raman) {
    const auto sc = raman_from(setup, scan, true), su = raman_from(setup, scan, false);
    emit(c, "raman", sc, su);
    std::cout << "D_R = " << deviation_metric(sc, su) << '\n';
  } else {
    const auto sc = absorption_from(setup, scan, true), su = absorption_from(setup, scan, false);
    emit(c, "absorption", sc, su);
    std::cout << "D_A = " << deviation_metric(sc, su) << '\n';
  }
  return kOk;
}

int run_validate(const RunConfig& c, bool quick) {
  bool ok = true;
  for (const auto& r : run_invariant_suite(c, quick)) {
    std::cout << format_check(r) << std::endl;
    ok = ok && r.passed;
  }
  std::cout << (ok ? "all checks passed" : "validation FAILED") << '\n';
  return ok ? kOk : kValidationFailed;
}

int run_probe(const RunConfig& c) {
  const auto model = c.build_model();
  const auto grid = c.resolvent_grid();
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  const fs::path path = dir / "greens_probe.csv";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "omega_cm1,re_g1,im_g1,re_g2,im_g2,re_denominator,im_denominator\n";
  char line[256];
  for (double w : c.scan.photon_energies()) {
    const cplx z{w + model.zero_point_offset(), model.damping};
    const auto ev1 = build_resolvent(model.allowed, z, grid);
    const auto ev2 = build_resolvent(model.forbidden, z, grid);
    const CoupledGreens g(ev1, ev2, model.coupling);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", w,
                  g.g1_at_crossing().real(), g.g1_at_crossing().imag(),
                  g.g2_at_crossing().real(), g.g2_at_crossing().imag(), g.denominator().real(),
                  g.denominator().imag());
    out << line;
  }
  std::cout << "wrote " << path.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-state curve-crossing spectra from the exact coupled Green's function"};
  app.set_version_flag("--version", std::string(CURVEX_VERSION));
  app.require_subcommand(1);

  Flags flags;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "INI-style run configuration")
        ->check(CLI::ExistingFile);
    sub->add_option("--k0", flags.k0, "coupling strength K0 [erg*A]");
    sub->add_option("--gamma", flags.gamma, "damping Gamma [cm^-1]");
    sub->add_option("--nf", flags.nf, "Raman final vibrational state");
    sub->add_option("--displacement", flags.displacement, "allowed-curve displacement [A]");
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--set", flags.overrides, "override, section.key=value (repeatable)");
  };
  auto* absorption = app.add_subcommand("absorption", "coupled and uncoupled absorption spectra");
  auto* raman = app.add_subcommand("raman", "coupled and uncoupled Raman excitation profiles");
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  auto* probe = app.add_subcommand("greens-probe", "dump G1(xc,xc), G2(xc,xc) and D over the scan");
  for (auto* s : {absorption, raman, validate, probe}) common(s);
  validate->add_flag("--quick", flags.quick, "reduced suite for CI");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig config;
  try {
    config = resolve_config(flags);
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (*absorption) return run_spectrum(config, false);
    if (*raman) return run_spectrum(config, true);
    if (*validate) return run_validate(config, flags.quick);
    return run_probe(config);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure in module " << e.module() << ": " << e.what() << '\n';
    return kNumericalError;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}
