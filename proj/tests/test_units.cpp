#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvex/error.hpp"
#include "curvex/units.hpp"

using namespace curvex;
using namespace curvex::units;

namespace {
constexpr double kLightSpeed = 2.99792458e10;  // cm/s
}

TEST_CASE("wavenumber energies are numerically unchanged internally") {
  CHECK(to_internal(400.0, Unit::wavenumber).value == doctest::Approx(400.0).epsilon(1e-12));
  CHECK(to_internal(0.0, Unit::wavenumber).value == 0.0);
  const auto omega = to_internal(400.0, Unit::wavenumber, Dimension::angular_frequency);
  CHECK(omega.value == to_internal(400.0, Unit::wavenumber).value);
  CHECK(omega.dimension == Dimension::angular_frequency);
}

TEST_CASE("400 cm-1 as an angular frequency in s^-1 maps to 400 internal") {
  const double omega_per_second = 2.0 * std::numbers::pi * kLightSpeed * 400.0;
  CHECK(omega_per_second * kTimeUnit == doctest::Approx(400.0).epsilon(1e-8));
  const double from_seconds = to_internal(1.0 / omega_per_second, Unit::second).value;
  CHECK(1.0 / from_seconds == doctest::Approx(400.0).epsilon(1e-8));
}

TEST_CASE("energy in erg is the wavenumber times hc") {
  const auto q = to_internal(10700.0, Unit::wavenumber);
  CHECK(from_internal(q, Unit::erg) == doctest::Approx(10700.0 * 1.98644586e-16).epsilon(1e-12));
}

TEST_CASE("round trips are exact to 1e-12 for every tag") {
  const struct {
    double value;
    Unit unit;
  } cases[] = {{35.4, Unit::amu},           {5.87831e-23, Unit::gram},
               {0.1, Unit::angstrom},       {1e-9, Unit::centimeter},
               {5.54275e-15, Unit::erg_angstrom}, {2.1e-13, Unit::erg},
               {10800.0, Unit::wavenumber}, {0.05, Unit::femtosecond},
               {3e-14, Unit::second}};
  for (const auto& c : cases) {
    const auto q = to_internal(c.value, c.unit);
    CHECK(from_internal(q, c.unit) == doctest::Approx(c.value).epsilon(1e-12));
  }
}

TEST_CASE("zero maps to zero in any compatible unit") {
  const Quantity zero{0.0, Dimension::energy};
  CHECK(from_internal(zero, Unit::erg) == 0.0);
  CHECK(from_internal(zero, Unit::wavenumber) == 0.0);
  CHECK(from_internal({0.0, Dimension::length}, Unit::centimeter) == 0.0);
}

TEST_CASE("published mass and coupling in internal units") {
  // Hand calculation: hbar^2 / (hc * 1 A^2) = 5.59855e-23 g per internal mass unit.
  CHECK(amu(35.4) == doctest::Approx(35.4 * 1.66053907e-24 / 5.598554e-23).epsilon(1e-6));
  CHECK(to_internal(5.54275e-15, Unit::erg_angstrom).value ==
        doctest::Approx(5.54275e-15 / 1.98644586e-16).epsilon(1e-12));
  CHECK(angstrom(1.0) == 1.0);
  CHECK(to_internal(1.0, Unit::centimeter).value == doctest::Approx(1e8));
}

TEST_CASE("unit tags parse and unknown tags are rejected") {
  CHECK(parse_unit("cm-1") == Unit::wavenumber);
  CHECK(parse_unit("amu") == Unit::amu);
  CHECK(parse_unit("erg*angstrom") == Unit::erg_angstrom);
  CHECK(parse_unit("fs") == Unit::femtosecond);
  CHECK_THROWS_AS(parse_unit("furlong"), InvalidInput);
  CHECK_THROWS_AS(parse_unit(""), InvalidInput);
}

TEST_CASE("dimensional mismatch is rejected") {
  const auto energy = to_internal(100.0, Unit::wavenumber);
  CHECK_THROWS_AS(from_internal(energy, Unit::amu), InvalidInput);
  CHECK_THROWS_AS(from_internal(energy, Unit::angstrom), InvalidInput);
  CHECK_THROWS_AS(from_internal(to_internal(1.0, Unit::amu), Unit::erg), InvalidInput);
  CHECK_THROWS_AS(natural_dimension(Unit::internal), InvalidInput);
}

TEST_CASE("internal tag needs an explicit dimension and passes values through") {
  CHECK_THROWS_AS(to_internal(1.0, Unit::internal), InvalidInput);
  const auto q = to_internal(3.5, Unit::internal, Dimension::length);
  CHECK(q.value == 3.5);
  CHECK(from_internal(q, Unit::internal) == 3.5);
}
