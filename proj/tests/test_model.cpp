#include <doctest.h>

#include <cmath>
#include <vector>

#include "curvex/config.hpp"
#include "curvex/error.hpp"
#include "curvex/model.hpp"
#include "curvex/units.hpp"

using namespace curvex;

namespace {

TwoStateModel published() { return RunConfig{}.build_model(); }

double overlap(const HarmonicEigenstate& a, const HarmonicEigenstate& b, const Grid& grid) {
  std::vector<double> prod(grid.points);
  for (std::size_t j = 0; j < grid.points; ++j) prod[j] = a(grid.x(j)) * b(grid.x(j));
  return integrate(prod, grid);
}

}  // namespace

TEST_CASE("allowed curve sits at its origin energy at the minimum") {
  const auto m = published();
  CHECK(m.allowed(0.1) == doctest::Approx(10700.0).epsilon(1e-14));
  CHECK(m.forbidden(0.0) == doctest::Approx(10800.0).epsilon(1e-14));
  CHECK(m.ground(0.0) == 0.0);
}

TEST_CASE("harmonic energy 0.1 A from the minimum") {
  // Hand calculation in CGS: m = 35.4 amu = 5.87831e-23 g, w = 2 pi c 400 = 7.53460e13 s^-1,
  // (1/2) m w^2 (1e-9 cm)^2 = 1.66857e-13 erg = 839.98 cm^-1.
  const auto m = published();
  CHECK(m.allowed(0.2) - 10700.0 == doctest::Approx(839.98).epsilon(2e-5));
  CHECK(m.allowed(0.0) == doctest::Approx(m.allowed(0.2)).epsilon(1e-14));
}

TEST_CASE("Morse curve dissociates to the left") {
  const auto m = published();
  const auto& p = m.forbidden.as_morse();
  CHECK(m.forbidden(-50.0) == doctest::Approx(p.origin + p.well_depth).epsilon(1e-12));
  CHECK(m.forbidden(0.5) > m.forbidden(-0.5));
  // Well depth m w^2 / (2 alpha^2) at w = 400 cm^-1, alpha = 1 / A.
  CHECK(p.well_depth == doctest::Approx(units::amu(35.4) * 400.0 * 400.0 / 2.0).epsilon(1e-14));
}

TEST_CASE("harmonic eigenstates: normalization, nodes and parity") {
  const auto m = published();
  const Grid grid{-3.0, 3.0, 12001};
  const auto chi0 = harmonic_eigenstate(m.allowed, 0);
  CHECK(overlap(chi0, chi0, grid) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(chi0(0.1) > chi0(0.05));
  CHECK(harmonic_eigenstate(m.allowed, 1)(0.1) == 0.0);
  const auto chi50 = harmonic_eigenstate(m.allowed, 50);
  CHECK(overlap(chi50, chi50, grid) == doctest::Approx(1.0).epsilon(1e-8));

  for (int n = 0; n <= 7; ++n) {
    const auto chi = harmonic_eigenstate(m.ground, n);
    for (double x : {0.013, 0.07, 0.21}) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(chi(-x) - sign * chi(x)) <= 1e-12);
    }
  }
}

TEST_CASE("harmonic eigenstates are orthonormal up to n = 20") {
  const auto m = published();
  const Grid grid{-2.0, 2.0, 8001};
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n)
    for (int k = n; k <= 20; ++k) {
      const double o =
          overlap(harmonic_eigenstate(m.ground, n), harmonic_eigenstate(m.ground, k), grid);
      worst = std::max(worst, std::abs(o - (n == k ? 1.0 : 0.0)));
    }
  CHECK(worst < 1e-8);
}

TEST_CASE("eigenstate energies and variant errors") {
  const auto m = published();
  CHECK(harmonic_eigenstate(m.allowed, 3).energy() == doctest::Approx(10700.0 + 3.5 * 400.0));
  CHECK_THROWS_AS(harmonic_eigenstate(m.forbidden, 0), UnsupportedCurve);
  CHECK_THROWS_AS(m.allowed.as_morse(), UnsupportedCurve);
}

TEST_CASE("Morse bound levels") {
  const auto m = published();
  const auto& p = m.forbidden.as_morse();
  const auto levels = morse_bound_energies(m.forbidden);
  REQUIRE(!levels.empty());

  const double mass = p.mass;
  CHECK(levels[0] - p.origin ==
        doctest::Approx(200.0 - p.range * p.range / (2.0 * mass) * 0.25).epsilon(1e-12));
  const auto count = static_cast<std::size_t>(
      std::floor(std::sqrt(2.0 * mass * p.well_depth) / p.range - 0.5) + 1.0);
  CHECK(levels.size() == count);
  for (std::size_t n = 1; n < levels.size(); ++n) CHECK(levels[n] > levels[n - 1]);
  CHECK(levels.back() < p.origin + p.well_depth);
}

TEST_CASE("deep Morse well approaches the harmonic ladder") {
  const double mass = units::amu(35.4);
  const double omega = 400.0;
  const double alpha = 0.01;
  const double depth = mass * omega * omega / (2.0 * alpha * alpha);
  const auto deep = PotentialCurve::morse(mass, depth, alpha, 0.0, 0.0);
  const auto levels = morse_bound_energies(deep);
  for (int n = 0; n < 5; ++n) CHECK(levels[n] == doctest::Approx((n + 0.5) * omega).epsilon(1e-6));
}

TEST_CASE("Franck-Condon factors for the published displacement") {
  const auto m = published();
  const double s = huang_rhys_factor(m.ground, m.allowed);
  // S = m w d^2 / 2 with m = 1.04997 internal, w = 400, d = 0.1.
  CHECK(s == doctest::Approx(units::amu(35.4) * 400.0 * 0.01 / 2.0).epsilon(1e-14));
  CHECK(s == doctest::Approx(2.10).epsilon(1e-3));
  const double f00 = franck_condon_overlap(0, 0, m.ground, m.allowed);
  CHECK(f00 * f00 == doctest::Approx(std::exp(-s)).epsilon(1e-12));
  CHECK(f00 * f00 == doctest::Approx(0.122).epsilon(5e-3));

  double sum = 0.0;
  double previous = f00;
  for (int k = 0; k <= 60; ++k) {
    const double f = franck_condon_overlap(0, k, m.ground, m.allowed);
    sum += f * f;
    if (k > 0) CHECK(std::abs(f) == doctest::Approx(std::abs(previous) * std::sqrt(s / k)));
    previous = f;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Franck-Condon rows are complete and match quadrature") {
  const auto m = published();
  const auto table = franck_condon_table(5, 80, m.ground, m.allowed);
  for (const auto& row : table) {
    double sum = 0.0;
    for (double f : row) sum += f * f;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
  }
  const Grid grid{-2.0, 2.0, 8001};
  for (int n : {0, 1, 3})
    for (int k : {0, 2, 5})
      CHECK(table[n][k] == doctest::Approx(overlap(harmonic_eigenstate(m.ground, n),
                                                   harmonic_eigenstate(m.allowed, k), grid))
                               .epsilon(1e-9));
}

TEST_CASE("undisplaced Franck-Condon matrix is the identity") {
  const auto m = published();
  for (int n = 0; n < 6; ++n)
    for (int k = 0; k < 6; ++k)
      CHECK(franck_condon_overlap(n, k, m.ground, m.ground) ==
            doctest::Approx(n == k ? 1.0 : 0.0));
}

TEST_CASE("crossing of two harmonic curves") {
  const auto m = published();
  const auto& a = m.allowed.as_harmonic();
  const auto shifted = PotentialCurve::harmonic(a.mass, a.frequency, 0.0, 10800.0);
  const auto c = find_crossing(m.allowed, shifted, -0.5, 0.5);
  // Linear condition k (0.01 - 0.2 x) = 100 with k = m w^2 / 2.
  const double k = a.mass * a.frequency * a.frequency / 2.0;
  CHECK(c.x == doctest::Approx((0.01 - 100.0 / k) / 0.2).epsilon(1e-9));
  CHECK(c.x == doctest::Approx(0.0441).epsilon(1e-3));
  CHECK(c.energy == doctest::Approx(10963.0).epsilon(1e-4));
  CHECK_FALSE(c.multiple_roots);
}

TEST_CASE("crossing of the allowed curve with the Morse curve") {
  const auto m = published();
  const auto c = find_crossing(m.allowed, m.forbidden, 0.0, 0.1);
  CHECK(std::abs(m.allowed(c.x) - m.forbidden(c.x)) < 1e-6);
}

TEST_CASE("parallel curves do not cross") {
  const auto m = published();
  const auto& a = m.allowed.as_harmonic();
  const auto parallel = PotentialCurve::harmonic(a.mass, a.frequency, a.minimum, a.origin + 50.0);
  CHECK_THROWS_AS(find_crossing(m.allowed, parallel, -1.0, 1.0), NoCrossing);
}

TEST_CASE("model validation rejects broken invariants") {
  auto m = published();
  CHECK_NOTHROW(m.validate());
  auto bad = m;
  bad.damping = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = m;
  bad.coupling.strength = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK_THROWS_AS(PotentialCurve::harmonic(-1.0, 400.0, 0.0, 0.0), InvalidInput);
  CHECK_THROWS_AS(PotentialCurve::morse(1.0, 100.0, 0.0, 0.0, 0.0), InvalidInput);
  CHECK(m.zero_point_offset() == doctest::Approx(200.0));
}
