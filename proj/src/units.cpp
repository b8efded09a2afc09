#include "curvex/units.hpp"

#include <array>
#include <string>
#include <utility>

#include "curvex/error.hpp"

namespace curvex::units {
namespace {

// Factor f such that internal = lab * f.
double factor(Unit unit) {
  switch (unit) {
    case Unit::wavenumber: return 1.0;
    case Unit::erg: return 1.0 / kEnergyUnit;
    case Unit::amu: return kAmu / kMassUnit;
    case Unit::gram: return 1.0 / kMassUnit;
    case Unit::angstrom: return 1.0;
    case Unit::centimeter: return 1.0 / kAngstrom;
    case Unit::erg_angstrom: return 1.0 / kEnergyUnit;
    case Unit::second: return 1.0 / kTimeUnit;
    case Unit::femtosecond: return 1.0e-15 / kTimeUnit;
    case Unit::internal: return 1.0;
  }
  throw InvalidInput("unknown unit");
}

bool compatible(Unit unit, Dimension dimension) {
  if (unit == Unit::internal) return true;
  if (unit == Unit::wavenumber)
    return dimension == Dimension::energy || dimension == Dimension::angular_frequency;
  return natural_dimension(unit) == dimension;
}

}  // namespace

Unit parse_unit(std::string_view tag) {
  static constexpr std::array<std::pair<std::string_view, Unit>, 14> kTags{{
      {"cm-1", Unit::wavenumber},
      {"cm^-1", Unit::wavenumber},
      {"erg", Unit::erg},
      {"amu", Unit::amu},
      {"g", Unit::gram},
      {"gram", Unit::gram},
      {"angstrom", Unit::angstrom},
      {"A", Unit::angstrom},
      {"cm", Unit::centimeter},
      {"erg*angstrom", Unit::erg_angstrom},
      {"erg.A", Unit::erg_angstrom},
      {"s", Unit::second},
      {"fs", Unit::femtosecond},
      {"internal", Unit::internal},
  }};
  for (const auto& [name, unit] : kTags)
    if (name == tag) return unit;
  throw InvalidInput("unknown unit tag '" + std::string(tag) + "'");
}

std::string_view to_string(Unit unit) {
  switch (unit) {
    case Unit::wavenumber: return "cm-1";
    case Unit::erg: return "erg";
    case Unit::amu: return "amu";
    case Unit::gram: return "g";
    case Unit::angstrom: return "angstrom";
    case Unit::centimeter: return "cm";
    case Unit::erg_angstrom: return "erg*angstrom";
    case Unit::second: return "s";
    case Unit::femtosecond: return "fs";
    case Unit::internal: return "internal";
  }
  return "?";
}

std::string_view to_string(Dimension dimension) {
  switch (dimension) {
    case Dimension::energy: return "energy";
    case Dimension::mass: return "mass";
    case Dimension::length: return "length";
    case Dimension::time: return "time";
    case Dimension::coupling_strength: return "coupling_strength";
    case Dimension::angular_frequency: return "angular_frequency";
  }
  return "?";
}

Dimension natural_dimension(Unit unit) {
  switch (unit) {
    case Unit::wavenumber:
    case Unit::erg: return Dimension::energy;
    case Unit::amu:
    case Unit::gram: return Dimension::mass;
    case Unit::angstrom:
    case Unit::centimeter: return Dimension::length;
    case Unit::erg_angstrom: return Dimension::coupling_strength;
    case Unit::second:
    case Unit::femtosecond: return Dimension::time;
    case Unit::internal: break;
  }
  throw InvalidInput("unit 'internal' carries no dimension; pass one explicitly");
}

Quantity to_internal(double value, Unit unit) {
  return to_internal(value, unit, natural_dimension(unit));
}

Quantity to_internal(double value, Unit unit, Dimension dimension) {
  if (!compatible(unit, dimension))
    throw InvalidInput("unit '" + std::string(to_string(unit)) + "' cannot express " +
                       std::string(to_string(dimension)));
  return {value * factor(unit), dimension};
}

double from_internal(const Quantity& q, Unit unit) {
  if (!compatible(unit, q.dimension))
    throw InvalidInput("cannot express " + std::string(to_string(q.dimension)) + " in '" +
                       std::string(to_string(unit)) + "'");
  return q.value / factor(unit);
}

}  // namespace curvex::units
