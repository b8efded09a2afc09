#include <doctest.h>

#include <cmath>

#include "curvex/config.hpp"
#include "curvex/coupled.hpp"
#include "curvex/error.hpp"
#include "curvex/validation.hpp"

using namespace curvex;

namespace {

TwoStateModel published() { return RunConfig{}.build_model(); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

struct Setup {
  TwoStateModel model = published();
  Grid grid{};
  cplx z;
  ResolventEvaluator ev1, ev2;
  std::vector<double> chi0, chi1;

  explicit Setup(double photon, Grid g = {})
      : grid(g),
        z(photon + model.zero_point_offset(), model.damping),
        ev1(build_resolvent(model.allowed, z, grid)),
        ev2(build_resolvent(model.forbidden, z, grid)),
        chi0(harmonic_eigenstate(model.ground, 0).sample(grid)),
        chi1(harmonic_eigenstate(model.ground, 1).sample(grid)) {}
};

}  // namespace

TEST_CASE("zero coupling reduces to the uncoupled resolvent") {
  const Setup s(11000.0);
  const CoupledGreens g(s.ev1, s.ev2, {0.0, s.model.coupling.location});
  const auto a = g.g11(s.chi1, s.chi0);
  CHECK(a.value == s.ev1.greens_matrix_element(s.chi1, s.chi0));
  CHECK(a.crossing_correction == cplx{0.0});
  CHECK(a.denominator == cplx{1.0});
  CHECK(g.g12(s.chi1, s.chi0) == cplx{0.0});
  CHECK(g.g21(s.chi1, s.chi0) == cplx{0.0});
  CHECK(g.g22(s.chi0, s.chi0).value == s.ev2.greens_matrix_element(s.chi0, s.chi0));
}

TEST_CASE("amplitude parts assemble the partitioning formula") {
  const Setup s(10800.0);
  const auto& k = s.model.coupling;
  const CoupledGreens g(s.ev1, s.ev2, k);
  const auto a = g.g11(s.chi1, s.chi0);
  CHECK(a.value == a.direct + a.crossing_correction);
  const cplx g1 = s.ev1.greens_point(k.location, k.location);
  const cplx g2 = s.ev2.greens_point(k.location, k.location);
  CHECK(rel(a.denominator, 1.0 - k.strength * k.strength * g1 * g2) < 1e-14);
  const cplx expected = k.strength * k.strength * s.ev1.greens_vector(s.chi1, k.location) * g2 *
                        s.ev1.greens_vector(s.chi0, k.location) / a.denominator;
  CHECK(rel(a.crossing_correction, expected) < 1e-14);
  CHECK(std::abs(a.crossing_correction) > 0.0);
  CHECK(g.g22(s.chi0, s.chi0).denominator == a.denominator);
}

TEST_CASE("exchanging bra and ket leaves real-state amplitudes unchanged") {
  for (double w : {10200.0, 11000.0, 12400.0}) {
    const Setup s(w);
    const CoupledGreens g(s.ev1, s.ev2, s.model.coupling);
    CHECK(rel(g.g11(s.chi1, s.chi0).value, g.g11(s.chi0, s.chi1).value) < 1e-12);
    CHECK(rel(g.g12(s.chi1, s.chi0), g.g21(s.chi0, s.chi1)) < 1e-12);
    const CoupledGreens swapped(s.ev2, s.ev1, s.model.coupling);
    CHECK(rel(g.g12(s.chi1, s.chi0), swapped.g21(s.chi1, s.chi0)) < 1e-12);
  }
}

TEST_CASE("off-diagonal block is linear in weak coupling") {
  const Setup s(11000.0);
  DeltaCoupling k = s.model.coupling;
  k.strength /= 10.0;
  const CoupledGreens full(s.ev1, s.ev2, k);
  DeltaCoupling half = k;
  half.strength /= 2.0;
  const CoupledGreens halved(s.ev1, s.ev2, half);
  const double ratio = std::abs(halved.g12(s.chi0, s.chi0)) / std::abs(full.g12(s.chi0, s.chi0));
  const double loop = std::abs(k.strength * k.strength * full.g1_at_crossing() * full.g2_at_crossing());
  CHECK(loop < 0.1);
  CHECK(std::abs(ratio / 0.5 - 1.0) < loop);
}

TEST_CASE("scaling exponents at weak coupling") {
  const auto r = check_partitioning_limits(RunConfig{}, 1.0 / 800.0, 1.0 / 200.0);
  INFO(r.detail);
  CHECK(r.passed);
}

TEST_CASE("crossing correction is grid converged") {
  const Setup coarse(10800.0);
  const Setup fine(10800.0, Grid{}.refined());
  auto ratio = [](const Setup& s) {
    const auto a = CoupledGreens(s.ev1, s.ev2, s.model.coupling).g11(s.chi0, s.chi0);
    return std::abs(a.crossing_correction / a.direct);
  };
  CHECK(ratio(coarse) > 1e-3);
  CHECK(ratio(coarse) == doctest::Approx(ratio(fine)).epsilon(5e-4));
}

TEST_CASE("finite-difference linear solve agrees to 1%") {
  const auto model = published();
  const Grid grid{-1.5, 1.5, 8193};
  const auto chi0 = harmonic_eigenstate(model.ground, 0).sample(grid);
  for (double w : {10500.0, 11300.0}) {
    const cplx z{w + model.zero_point_offset(), model.damping};
    const auto ev1 = build_resolvent(model.allowed, z, grid);
    const auto ev2 = build_resolvent(model.forbidden, z, grid);
    const cplx exact = CoupledGreens(ev1, ev2, model.coupling).g11(chi0, chi0).value;
    CHECK(rel(discrete_coupled_g11(model, grid, z, chi0, chi0), exact) < 0.01);
  }
}

TEST_CASE("mismatched evaluators are rejected") {
  const Setup a(11000.0);
  const Setup b(11500.0);
  CHECK_THROWS_AS(CoupledGreens(a.ev1, b.ev2, a.model.coupling), InvalidInput);
}
