#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace curvex {

// All quantities below are in internal units (see units.hpp).

struct HarmonicParams {
  double mass;
  double frequency;
  double minimum;
  double origin;
};

/// Oriented so that the exponent grows for x > minimum: the curve dissociates toward
/// x -> -inf, where it levels off at origin + well_depth.
struct MorseParams {
  double mass;
  double well_depth;
  double range;
  double minimum;
  double origin;
};

class PotentialCurve {
public:
  static PotentialCurve harmonic(double mass, double frequency, double minimum, double origin);
  static PotentialCurve morse(double mass, double well_depth, double range, double minimum,
                              double origin);

  double operator()(double x) const;
  double mass() const;
  double origin() const;
  double minimum() const;

  bool is_harmonic() const { return std::holds_alternative<HarmonicParams>(params_); }
  bool is_morse() const { return std::holds_alternative<MorseParams>(params_); }

  /// Throw UnsupportedCurve for the wrong variant.
  const HarmonicParams& as_harmonic() const;
  const MorseParams& as_morse() const;

private:
  explicit PotentialCurve(std::variant<HarmonicParams, MorseParams> p) : params_(p) {}
  std::variant<HarmonicParams, MorseParams> params_;
};

inline double eval_potential(const PotentialCurve& curve, double x) { return curve(x); }

struct DeltaCoupling {
  double strength;
  double location;
};

struct TwoStateModel {
  PotentialCurve ground;
  PotentialCurve allowed;
  PotentialCurve forbidden;
  DeltaCoupling coupling;
  double damping;
  double electronic_gap;

  /// Throws InvalidInput when an invariant is broken (Gamma <= 0, ground not harmonic, ...).
  void validate() const;
  /// Energy added to the photon energy to form the resolvent argument: omega_0 / 2.
  double zero_point_offset() const;
};

/// Uniform spatial grid, both ends included.
struct Grid {
  double lo = -1.5;
  double hi = 1.5;
  std::size_t points = 4096;

  double step() const { return (hi - lo) / static_cast<double>(points - 1); }
  double x(std::size_t i) const { return lo + static_cast<double>(i) * step(); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  Grid refined(std::size_t factor = 2) const { return {lo, hi, (points - 1) * factor + 1}; }
  void validate() const;
};

/// Normalized eigenfunction of a harmonic curve, evaluated by the three-term recurrence on
/// normalized functions (stable to n = 200).
class HarmonicEigenstate {
public:
  HarmonicEigenstate(const PotentialCurve& curve, int n);

  double operator()(double x) const;
  double energy() const;
  int quantum_number() const { return n_; }
  std::vector<double> sample(const Grid& grid) const;

private:
  HarmonicParams params_;
  int n_;
};

inline HarmonicEigenstate harmonic_eigenstate(const PotentialCurve& curve, int n) {
  return HarmonicEigenstate(curve, n);
}

/// Values phi_0(x) .. phi_nmax(x) in one recurrence pass.
std::vector<double> harmonic_eigenfunctions(const HarmonicParams& p, int nmax, double x);

/// Bound levels of a Morse curve, ascending, all below origin + well_depth.
std::vector<double> morse_bound_energies(const PotentialCurve& curve);

/// <n_A|m_B> for two harmonic curves with equal mass and frequency. The sign follows the
/// displacement minimum_B - minimum_A.
double franck_condon_overlap(int n, int m, const PotentialCurve& a, const PotentialCurve& b);

/// Table t[n][m] = <n_A|m_B> for n <= nmax, m <= mmax.
std::vector<std::vector<double>> franck_condon_table(int nmax, int mmax, const PotentialCurve& a,
                                                     const PotentialCurve& b);

/// Huang-Rhys factor m w d^2 / 2 between two equal-frequency harmonic curves.
double huang_rhys_factor(const PotentialCurve& a, const PotentialCurve& b);

struct Crossing {
  double x;
  double energy;
  bool multiple_roots;  // the bracket held several sign changes; the one nearest the midpoint
};

Crossing find_crossing(const PotentialCurve& c1, const PotentialCurve& c2, double x_lo,
                       double x_hi);

/// Composite trapezoid over the grid.
double integrate(std::span<const double> samples, const Grid& grid);

}  // namespace curvex
