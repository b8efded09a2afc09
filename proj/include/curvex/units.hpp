#pragma once

#include <string_view>

namespace curvex::units {

// Internal system: energy in cm^-1 (times hc), length in angstrom, hbar = 1.
// Mass and time units follow from those three choices.
inline constexpr double kHbar = 1.054571817e-27;      // erg s
inline constexpr double kAmu = 1.66053907e-24;        // g
inline constexpr double kHc = 1.98644586e-16;         // erg cm
inline constexpr double kAngstrom = 1.0e-8;           // cm

/// One internal energy unit in erg (1 cm^-1).
inline constexpr double kEnergyUnit = kHc;
/// One internal mass unit in gram: hbar^2 / (E L^2).
inline constexpr double kMassUnit = kHbar * kHbar / (kEnergyUnit * kAngstrom * kAngstrom);
/// One internal time unit in seconds: hbar / E.
inline constexpr double kTimeUnit = kHbar / kEnergyUnit;

enum class Dimension { energy, mass, length, time, coupling_strength, angular_frequency };

enum class Unit {
  wavenumber,    // cm^-1
  erg,
  amu,
  gram,
  angstrom,
  centimeter,
  erg_angstrom,
  second,
  femtosecond,
  internal,
};

struct Quantity {
  double value;
  Dimension dimension;
};

/// Parses tags such as "cm-1", "erg", "amu", "g", "angstrom", "cm", "erg*angstrom",
/// "s", "fs", "internal". Throws InvalidInput for anything else.
Unit parse_unit(std::string_view tag);

std::string_view to_string(Unit unit);
std::string_view to_string(Dimension dimension);

/// Natural dimension of a unit tag. `internal` has none and throws.
Dimension natural_dimension(Unit unit);

/// Converts a laboratory value to the internal system. The dimension is implied by the
/// unit, except for `internal` (use the three-argument overload).
Quantity to_internal(double value, Unit unit);

/// Explicit-dimension form. Accepts `internal` for any dimension and `wavenumber` for
/// both energy and angular frequency (identical numbers because hbar = 1).
Quantity to_internal(double value, Unit unit, Dimension dimension);

/// Inverse of to_internal. Throws InvalidInput on a dimensional mismatch.
double from_internal(const Quantity& q, Unit unit);

// Shorthands used throughout the library.
inline double wavenumber(double cm1) { return to_internal(cm1, Unit::wavenumber).value; }
inline double angstrom(double a) { return to_internal(a, Unit::angstrom).value; }
inline double amu(double m) { return to_internal(m, Unit::amu).value; }
inline double femtoseconds(double fs) { return to_internal(fs, Unit::femtosecond).value; }

}  // namespace curvex::units
