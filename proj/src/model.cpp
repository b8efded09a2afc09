#include "curvex/model.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvex/error.hpp"

namespace curvex {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidInput(std::string(what) + " must be positive and finite, got " +
                       std::to_string(v));
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite");
}

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

}  // namespace

PotentialCurve PotentialCurve::harmonic(double mass, double frequency, double minimum,
                                        double origin) {
  require_positive(mass, "mass");
  require_positive(frequency, "harmonic frequency");
  require_finite(minimum, "minimum position");
  require_finite(origin, "origin energy");
  return PotentialCurve(HarmonicParams{mass, frequency, minimum, origin});
}

PotentialCurve PotentialCurve::morse(double mass, double well_depth, double range, double minimum,
                                     double origin) {
  require_positive(mass, "mass");
  require_positive(well_depth, "Morse well depth");
  require_positive(range, "Morse range");
  require_finite(minimum, "minimum position");
  require_finite(origin, "origin energy");
  return PotentialCurve(MorseParams{mass, well_depth, range, minimum, origin});
}

double PotentialCurve::operator()(double x) const {
  if (const auto* h = std::get_if<HarmonicParams>(&params_)) {
    const double d = x - h->minimum;
    return h->origin + 0.5 * h->mass * h->frequency * h->frequency * d * d;
  }
  const auto& m = std::get<MorseParams>(params_);
  const double s = 1.0 - std::exp(m.range * (x - m.minimum));
  return m.origin + m.well_depth * s * s;
}

double PotentialCurve::mass() const {
  return std::visit([](const auto& p) { return p.mass; }, params_);
}

double PotentialCurve::origin() const {
  return std::visit([](const auto& p) { return p.origin; }, params_);
}

double PotentialCurve::minimum() const {
  return std::visit([](const auto& p) { return p.minimum; }, params_);
}

const HarmonicParams& PotentialCurve::as_harmonic() const {
  if (const auto* h = std::get_if<HarmonicParams>(&params_)) return *h;
  throw UnsupportedCurve("operation requires a harmonic curve");
}

const MorseParams& PotentialCurve::as_morse() const {
  if (const auto* m = std::get_if<MorseParams>(&params_)) return *m;
  throw UnsupportedCurve("operation requires a Morse curve");
}

void TwoStateModel::validate() const {
  if (!ground.is_harmonic()) throw InvalidInput("ground curve must be harmonic");
  if (ground.minimum() != 0.0 || ground.origin() != 0.0)
    throw InvalidInput("ground curve must have its minimum at x = 0 and zero origin energy");
  if (!same(ground.mass(), allowed.mass()) || !same(ground.mass(), forbidden.mass()))
    throw InvalidInput("all curves share one nuclear mass");
  if (!(coupling.strength >= 0.0) || !std::isfinite(coupling.strength))
    throw InvalidInput("coupling strength must be >= 0");
  require_finite(coupling.location, "coupling location");
  require_positive(damping, "damping");
  require_finite(electronic_gap, "electronic gap");
}

double TwoStateModel::zero_point_offset() const { return 0.5 * ground.as_harmonic().frequency; }

void Grid::validate() const {
  if (!(hi > lo)) throw InvalidInput("grid upper bound must exceed lower bound");
  if (points < 8) throw InvalidInput("grid needs at least 8 points");
}

double integrate(std::span<const double> samples, const Grid& grid) {
  if (samples.size() != grid.points) throw InvalidInput("sample count does not match grid");
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) sum += samples[i];
  return sum * grid.step();
}

// --- harmonic eigenstates ---------------------------------------------------------------

std::vector<double> harmonic_eigenfunctions(const HarmonicParams& p, int nmax, double x) {
  std::vector<double> phi(static_cast<std::size_t>(nmax) + 1);
  const double mw = p.mass * p.frequency;
  const double y = std::sqrt(mw) * (x - p.minimum);
  phi[0] = std::pow(mw / std::numbers::pi, 0.25) * std::exp(-0.5 * y * y);
  if (nmax >= 1) phi[1] = std::numbers::sqrt2 * y * phi[0];
  for (int n = 1; n < nmax; ++n) {
    const double np1 = n + 1.0;
    phi[n + 1] = std::sqrt(2.0 / np1) * y * phi[n] - std::sqrt(n / np1) * phi[n - 1];
  }
  return phi;
}

HarmonicEigenstate::HarmonicEigenstate(const PotentialCurve& curve, int n)
    : params_(curve.as_harmonic()), n_(n) {
  if (n < 0 || n > 200) throw InvalidInput("harmonic quantum number must be in [0, 200]");
}

double HarmonicEigenstate::operator()(double x) const {
  return harmonic_eigenfunctions(params_, n_, x)[static_cast<std::size_t>(n_)];
}

double HarmonicEigenstate::energy() const {
  return params_.origin + (n_ + 0.5) * params_.frequency;
}

std::vector<double> HarmonicEigenstate::sample(const Grid& grid) const {
  std::vector<double> out(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) out[i] = (*this)(grid.x(i));
  return out;
}

// --- Morse levels -------------------------------------------------------------------------

std::vector<double> morse_bound_energies(const PotentialCurve& curve) {
  const auto& m = curve.as_morse();
  const double omega = m.range * std::sqrt(2.0 * m.well_depth / m.mass);
  const double anharm = m.range * m.range / (2.0 * m.mass);
  std::vector<double> levels;
  for (int n = 0;; ++n) {
    const double v = n + 0.5;
    const double slope = omega - 2.0 * anharm * v;
    const double e = omega * v - anharm * v * v;
    if (!(slope > 0.0) || !(e < m.well_depth)) break;
    levels.push_back(m.origin + e);
  }
  return levels;
}

// --- Franck-Condon ----------------------------------------------------------------------

double huang_rhys_factor(const PotentialCurve& a, const PotentialCurve& b) {
  const auto& pa = a.as_harmonic();
  const auto& pb = b.as_harmonic();
  if (!same(pa.frequency, pb.frequency) || !same(pa.mass, pb.mass))
    throw UnsupportedCurve("Franck-Condon overlaps need equal masses and frequencies");
  const double d = pb.minimum - pa.minimum;
  return 0.5 * pa.mass * pa.frequency * d * d;
}

std::vector<std::vector<double>> franck_condon_table(int nmax, int mmax, const PotentialCurve& a,
                                                     const PotentialCurve& b) {
  if (nmax < 0 || mmax < 0) throw InvalidInput("negative quantum number");
  const double s = huang_rhys_factor(a, b);
  // <n_A|m_B> = <n|D(beta)|m> with the displacement operator D(beta), beta = d sqrt(m w / 2).
  const double beta = std::copysign(std::sqrt(s), b.minimum() - a.minimum());
  const auto rows = static_cast<std::size_t>(nmax) + 1;
  const auto cols = static_cast<std::size_t>(mmax) + 1;
  std::vector<std::vector<double>> t(rows, std::vector<double>(cols, 0.0));

  // <0|D|m> = e^{-S/2} (-beta)^m / sqrt(m!)
  double first = std::exp(-0.5 * s);
  for (std::size_t m = 0; m < cols; ++m) {
    t[0][m] = first;
    first *= -beta / std::sqrt(static_cast<double>(m + 1));
  }
  // sqrt(n+1) <n+1|D|m> = sqrt(m) <n|D|m-1> + beta <n|D|m>
  for (std::size_t m = 0; m < cols; ++m) {
    for (std::size_t n = 0; n + 1 < rows; ++n) {
      const double prev = m > 0 ? std::sqrt(static_cast<double>(m)) * t[n][m - 1] : 0.0;
      t[n + 1][m] = (prev + beta * t[n][m]) / std::sqrt(static_cast<double>(n + 1));
    }
  }
  return t;
}

double franck_condon_overlap(int n, int m, const PotentialCurve& a, const PotentialCurve& b) {
  if (n < 0 || m < 0) throw InvalidInput("negative quantum number");
  return franck_condon_table(n, m, a, b)[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

// --- crossing -----------------------------------------------------------------------------

Crossing find_crossing(const PotentialCurve& c1, const PotentialCurve& c2, double x_lo,
                       double x_hi) {
  if (!(x_hi > x_lo)) throw InvalidInput("crossing bracket must have x_hi > x_lo");
  const auto diff = [&](double x) { return c1(x) - c2(x); };

  // Locate every sign change on a fine subdivision; keep the one nearest the midpoint.
  constexpr int kPanels = 2000;
  const double mid = 0.5 * (x_lo + x_hi);
  const double h = (x_hi - x_lo) / kPanels;
  int changes = 0;
  std::optional<std::pair<double, double>> best;
  double prev = diff(x_lo);
  for (int i = 1; i <= kPanels; ++i) {
    const double a = x_lo + (i - 1) * h;
    const double b = i == kPanels ? x_hi : x_lo + i * h;
    const double cur = diff(b);
    if (prev == 0.0 || (prev < 0.0) != (cur < 0.0)) {
      ++changes;
      if (!best || std::abs(0.5 * (a + b) - mid) < std::abs(0.5 * (best->first + best->second) - mid))
        best = {{a, b}};
    }
    prev = cur;
  }
  if (!best) throw NoCrossing("V1 - V2 does not change sign on the bracket");

  double root;
  if (diff(best->first) == 0.0) {
    root = best->first;
  } else {
    std::uintmax_t iters = 200;
    const auto tol = [](double a, double b) { return std::abs(b - a) < 1e-13; };
    const auto r = boost::math::tools::toms748_solve(diff, best->first, best->second, tol, iters);
    root = 0.5 * (r.first + r.second);
  }
  return {root, c1(root), changes > 1};
}

}  // namespace curvex
