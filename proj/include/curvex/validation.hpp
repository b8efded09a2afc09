#pragma once

#include <string>
#include <vector>

#include "curvex/config.hpp"
#include "curvex/wavepacket.hpp"

namespace curvex {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

/// One line: "PASS  name  measured=... tol=... (detail) [t s]".
std::string format_check(const CheckResult& r);

CheckResult check_unit_roundtrips();
CheckResult check_eigenstate_orthonormality(const RunConfig& config);
/// Wronskian drift of both surfaces across the band.
CheckResult check_wronskian(const RunConfig& config);

/// Weak-form residual |<phi|(z - H) G|x0> - phi(x0)| / |phi(x0)| for Gaussian test functions
/// on both surfaces at several z.
CheckResult check_weak_form(const RunConfig& config, int functions = 20, int energies = 5);

/// Pointwise G(x, x0) of the allowed curve against the truncated eigenfunction sum.
CheckResult check_spectral_sum_pointwise(const RunConfig& config, int terms = 200,
                                         int samples = 10, double tolerance = 1e-6);
/// Same points against the resummed (Mehler kernel) closed form.
CheckResult check_kernel_oracle(const RunConfig& config, int samples = 10,
                                double tolerance = 1e-6);
/// Franck-Condon matrix elements <m|G|0> against the eigenfunction sum, where it converges.
CheckResult check_spectral_sum_elements(const RunConfig& config, int terms = 200);

/// Peaks of |G2(x, x; E + i Gamma)| at Gamma = 5 cm^-1 against the analytic Morse levels.
CheckResult check_morse_poles(const RunConfig& config, double scan_step_cm1 = 2.0);

/// Uncoupled absorption at Gamma = 20 cm^-1: peak positions and Poisson heights.
CheckResult check_uncoupled_absorption(const RunConfig& config);

/// K0 = 0 reduction and the K0 scaling exponents of the G11 correction and of G12, fitted
/// over K0 in [lo_fraction, hi_fraction] times the configured strength.
CheckResult check_partitioning_limits(const RunConfig& config, double lo_fraction = 0.125,
                                      double hi_fraction = 0.5);

/// Half-Fourier wavepacket transform against i <f|G11|i> at the given photon energies.
CheckResult check_wavepacket_identity(const RunConfig& config, const IdentityOptions& options,
                                      std::vector<double> photon_energies, double tolerance);
IdentityOptions acceptance_identity_options(const RunConfig& config);

/// Finite-difference coupled solve against the partitioning formula.
CheckResult check_discrete_solve(const RunConfig& config, std::size_t points = 16385,
                                 double tolerance = 0.01);

struct SensitivityResult {
  double absorption = 0.0;  // D_A
  double raman = 0.0;       // D_R
};
SensitivityResult coupling_sensitivity(const RunConfig& config, const ScanWindow& window);

/// D_R > D_A > 0, and both stable to 1% when the photon-energy step is halved.
CheckResult check_raman_sensitivity(const RunConfig& config, const ScanWindow& window);

/// The `validate` suite. quick trims grid sizes and sample counts to stay under a minute.
std::vector<CheckResult> run_invariant_suite(const RunConfig& config, bool quick);

}  // namespace curvex
