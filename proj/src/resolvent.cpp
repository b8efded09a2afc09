#include "curvex/resolvent.hpp"

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "curvex/error.hpp"

namespace curvex {
namespace {

constexpr double kRescaleAbove = 1e100;
constexpr double kRescaleBelow = 1e-100;
constexpr cplx kI{0.0, 1.0};

// Local interpolation stencil for the cumulative integrals: Lagrange quintics through the
// nodes s = 0..5, integrated exactly over sub-intervals.
constexpr std::size_t kStencil = 6;

using Poly = std::array<double, kStencil>;  // coefficients of s^0 .. s^5

std::array<Poly, kStencil> lagrange_basis() {
  std::array<Poly, kStencil> out{};
  for (std::size_t j = 0; j < kStencil; ++j) {
    Poly p{};
    p[0] = 1.0;
    double denom = 1.0;
    for (std::size_t m = 0; m < kStencil; ++m) {
      if (m == j) continue;
      // p *= (s - m)
      for (std::size_t d = kStencil - 1; d > 0; --d) p[d] = p[d - 1] - static_cast<double>(m) * p[d];
      p[0] *= -static_cast<double>(m);
      denom *= static_cast<double>(j) - static_cast<double>(m);
    }
    for (auto& c : p) c /= denom;
    out[j] = p;
  }
  return out;
}

double antiderivative(const Poly& p, double s) {
  double acc = 0.0;
  for (std::size_t d = kStencil; d-- > 0;) acc = acc * s + p[d] / static_cast<double>(d + 1);
  return acc * s;
}

// Weights for the integral over local [a, b] of the interpolant through s = 0..5.
std::array<double, kStencil> stencil_weights(double a, double b) {
  static const auto basis = lagrange_basis();
  std::array<double, kStencil> w{};
  for (std::size_t j = 0; j < kStencil; ++j)
    w[j] = antiderivative(basis[j], b) - antiderivative(basis[j], a);
  return w;
}

cplx rescaled(cplx u, double log_scale, double ref) {
  if (u == cplx{} || log_scale == ref) return u;
  return u * std::exp(log_scale - ref);
}

cplx decaying_root(cplx q2) {
  cplx q = std::sqrt(q2);
  return q.real() < 0.0 ? -q : q;
}

// e^w - 1 without cancellation for small |w|.
cplx expm1(cplx w) {
  const double a = w.real(), b = w.imag();
  const double sh = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * sh * sh, std::exp(a) * std::sin(b)};
}

}  // namespace

// --- construction -------------------------------------------------------------------------

ResolventEvaluator build_resolvent(const PotentialCurve& curve, cplx z, const Grid& grid,
                                   ResolventOptions options) {
  return build_resolvent(curve.mass(), [curve](double x) { return curve(x); }, z, grid, options);
}

ResolventEvaluator build_resolvent(double mass, ResolventEvaluator::Potential potential, cplx z,
                                   const Grid& grid, ResolventOptions options) {
  return ResolventEvaluator(mass, std::move(potential), z, grid, options);
}

ResolventEvaluator::ResolventEvaluator(double mass, Potential potential, cplx z, const Grid& grid,
                                       ResolventOptions options)
    : mass_(mass), potential_(std::move(potential)), z_(z), grid_(grid), options_(options) {
  if (!(z.imag() > 0.0)) throw InvalidInput("resolvent needs Im z > 0 (retarded branch)");
  if (!(mass > 0.0)) throw InvalidInput("mass must be positive");
  if (options_.substeps < 1) throw InvalidInput("substeps must be >= 1");
  grid_.validate();

  const std::size_t n = grid_.points;
  const double h = grid_.step();
  um_.resize(n);
  dum_.resize(n);
  up_.resize(n);
  dup_.resize(n);
  sm_.assign(n, 0.0);
  sp_.assign(n, 0.0);

  // WKB seeds u ~ q^{-1/2} exp(+-int q): u'/u = +-q - q'/(2q), q' = m V'/q.
  const auto seed_slope = [&](double x, double sign) {
    const cplx q = decaying_root(2.0 * mass_ * (potential_(x) - z_));
    const double dx = 1e-6 * std::max(1.0, std::abs(x));
    const double dv = (potential_(x + dx) - potential_(x - dx)) / (2.0 * dx);
    const cplx dq = mass_ * dv / q;
    return sign * q - dq / (2.0 * q);
  };

  const auto renormalize = [](cplx& u, cplx& du, double& log_scale) {
    const double mag = std::max(std::abs(u), std::abs(du));
    if (mag > kRescaleAbove || (mag < kRescaleBelow && mag > 0.0)) {
      u /= mag;
      du /= mag;
      log_scale += std::log(mag);
    }
  };

  std::vector<Transfer> steps(n - 1);
  cplx u = 1.0, du = seed_slope(grid_.lo, +1.0);
  double s = 0.0;
  um_[0] = u;
  dum_[0] = du;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Transfer t = transfer(grid_.x(i), h);
    steps[i] = t;
    const cplx nu = t.a * u + t.b * du;
    const cplx ndu = t.c * u + t.d * du;
    u = nu;
    du = ndu;
    renormalize(u, du, s);
    um_[i + 1] = u;
    dum_[i + 1] = du;
    sm_[i + 1] = s;
  }

  u = 1.0;
  du = seed_slope(grid_.hi, -1.0);
  s = 0.0;
  up_[n - 1] = u;
  dup_[n - 1] = du;
  for (std::size_t i = n - 1; i-- > 0;) {
    // Unit determinant: the inverse is the adjugate.
    const Transfer& t = steps[i];
    const cplx nu = t.d * u - t.b * du;
    const cplx ndu = -t.c * u + t.a * du;
    u = nu;
    du = ndu;
    renormalize(u, du, s);
    up_[i] = u;
    dup_[i] = du;
    sp_[i] = s;
  }

  // Reference node: least cancellation in u- u+' - u-' u+.
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double size = std::abs(um_[i] * dup_[i]) + std::abs(dum_[i] * up_[i]);
    if (size == 0.0) continue;
    const double ratio = std::abs(wronskian_scaled(i)) / size;
    if (ratio > best) {
      best = ratio;
      ref_ = i;
    }
  }
  if (!(best > 1e-13))
    throw DegenerateSolution("Wronskian vanishes relative to the solution scale; the two "
                             "boundary solutions are linearly dependent on this grid");
  w_ref_ = wronskian_scaled(ref_);
  sigma_ref_ = sm_[ref_] + sp_[ref_];
}

ResolventEvaluator::Transfer ResolventEvaluator::magnus(double x, double h) const {
  // Fourth-order Magnus step with two Gauss points for y' = [[0, 1], [q(x), 0]] y.
  constexpr double c = 0.28867513459481288;  // sqrt(3) / 6
  const cplx q1 = 2.0 * mass_ * (potential_(x + (0.5 - c) * h) - z_);
  const cplx q2 = 2.0 * mass_ * (potential_(x + (0.5 + c) * h) - z_);
  const cplx w11 = (2.0 * c / 4.0) * h * h * (q1 - q2);  // sqrt(3)/12 h^2 [A2, A1]
  const cplx w12 = h;
  const cplx w21 = 0.5 * h * (q1 + q2);
  const cplx lam2 = w11 * w11 + w12 * w21;
  const cplx lam = std::sqrt(lam2);
  cplx ch, sh;
  if (std::abs(lam) < 1e-4) {
    ch = 1.0 + lam2 / 2.0 + lam2 * lam2 / 24.0;
    sh = 1.0 + lam2 / 6.0 + lam2 * lam2 / 120.0;
  } else {
    ch = std::cosh(lam);
    sh = std::sinh(lam) / lam;
  }
  return {ch + sh * w11, sh * w12, sh * w21, ch - sh * w11};
}

ResolventEvaluator::Transfer ResolventEvaluator::transfer(double x, double h) const {
  if (options_.substeps == 1) return magnus(x, h);
  const double sub = h / options_.substeps;
  Transfer acc{1.0, 0.0, 0.0, 1.0};
  for (int k = 0; k < options_.substeps; ++k) {
    const Transfer t = magnus(x + k * sub, sub);
    acc = {t.a * acc.a + t.b * acc.c, t.a * acc.b + t.b * acc.d, t.c * acc.a + t.d * acc.c,
           t.c * acc.b + t.d * acc.d};
  }
  return acc;
}

std::size_t ResolventEvaluator::interval(double x) const {
  const double r = (x - grid_.lo) / grid_.step();
  const auto i = static_cast<std::ptrdiff_t>(std::floor(r));
  return static_cast<std::size_t>(
      std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(grid_.points) - 2));
}

cplx ResolventEvaluator::wronskian_scaled(std::size_t i) const {
  return um_[i] * dup_[i] - dum_[i] * up_[i];
}

// --- point values -------------------------------------------------------------------------

SolutionValue ResolventEvaluator::decaying_left(double x) const {
  if (!grid_.contains(x)) throw InvalidInput("point outside the resolvent grid");
  const std::size_t i = interval(x);
  const double t = x - grid_.x(i);
  if (t == 0.0) return {um_[i], dum_[i], sm_[i]};
  const Transfer m = transfer(grid_.x(i), t);
  return {m.a * um_[i] + m.b * dum_[i], m.c * um_[i] + m.d * dum_[i], sm_[i]};
}

SolutionValue ResolventEvaluator::decaying_right(double x) const {
  if (!grid_.contains(x)) throw InvalidInput("point outside the resolvent grid");
  const std::size_t i = interval(x);
  if (x == grid_.x(i)) return {up_[i], dup_[i], sp_[i]};
  const double t = grid_.x(i + 1) - x;
  if (t <= 0.0) return {up_[i + 1], dup_[i + 1], sp_[i + 1]};
  const Transfer m = transfer(x, t);
  return {m.d * up_[i + 1] - m.b * dup_[i + 1], -m.c * up_[i + 1] + m.a * dup_[i + 1], sp_[i + 1]};
}

cplx ResolventEvaluator::greens_point(double x, double x0) const {
  const auto left = decaying_left(std::min(x, x0));
  const auto right = decaying_right(std::max(x, x0));
  const cplx mantissa = 2.0 * mass_ * left.u * right.u / w_ref_;
  if (mantissa == cplx{}) return {};
  return mantissa * std::exp(left.log_scale + right.log_scale - sigma_ref_);
}

// --- quadrature ---------------------------------------------------------------------------

cplx ResolventEvaluator::partial_integral(std::span<const double> f, const std::vector<cplx>& u,
                                          const std::vector<double>& log_scale, std::size_t k,
                                          double t, double ref) const {
  const std::size_t n = grid_.points;
  // Centered stencil k-2 .. k+3, shifted inward at the grid edges.
  const std::size_t j0 = std::min(k < 2 ? 0 : k - 2, n - kStencil);
  const double a = static_cast<double>(k - j0);
  // Full intervals share their weights; only partial ones need fresh antiderivatives.
  static const auto full = [] {
    std::array<std::array<double, kStencil>, kStencil - 1> w{};
    for (std::size_t o = 0; o + 1 < kStencil; ++o)
      w[o] = stencil_weights(static_cast<double>(o), static_cast<double>(o + 1));
    return w;
  }();
  const auto w = t == 1.0 ? full[k - j0] : stencil_weights(a, a + t);
  cplx sum = 0.0;
  for (std::size_t j = 0; j < kStencil; ++j) {
    const double fj = f[j0 + j];
    if (fj != 0.0) sum += w[j] * fj * rescaled(u[j0 + j], log_scale[j0 + j], ref);
  }
  return sum * grid_.step();
}

cplx ResolventEvaluator::greens_vector(std::span<const double> f, double x0) const {
  if (f.size() != grid_.points) throw InvalidInput("function samples do not match the grid");
  if (!grid_.contains(x0)) throw InvalidInput("point outside the resolvent grid");
  const std::size_t n = grid_.points;
  const std::size_t i = interval(x0);
  const double t = (x0 - grid_.x(i)) / grid_.step();

  // A = int_{lo}^{x0} f u-   (scale sm_[i]),   B = int_{x0}^{hi} f u+   (scale sp_[i + 1]).
  const double ref_a = sm_[i];
  cplx a = partial_integral(f, um_, sm_, i, t, ref_a);
  for (std::size_t k = 0; k < i; ++k) a += partial_integral(f, um_, sm_, k, 1.0, ref_a);

  const double ref_b = sp_[i + 1];
  cplx b = partial_integral(f, up_, sp_, i, 1.0, ref_b) - partial_integral(f, up_, sp_, i, t, ref_b);
  for (std::size_t k = i + 1; k + 1 < n; ++k) b += partial_integral(f, up_, sp_, k, 1.0, ref_b);

  const auto left = decaying_left(x0);
  const auto right = decaying_right(x0);
  cplx total = 0.0;
  if (const cplx m = right.u * a; m != cplx{})
    total += m * std::exp(right.log_scale + ref_a - sigma_ref_);
  if (const cplx m = left.u * b; m != cplx{})
    total += m * std::exp(left.log_scale + ref_b - sigma_ref_);
  return 2.0 * mass_ * total / w_ref_;
}

cplx ResolventEvaluator::greens_matrix_element(std::span<const double> f,
                                               std::span<const double> g) const {
  if (f.size() != grid_.points || g.size() != grid_.points)
    throw InvalidInput("function samples do not match the grid");
  const std::size_t n = grid_.points;

  // Running integrals, each kept in the scale of the node it ends on.
  std::vector<cplx> a(n), b(n);
  a[0] = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k)
    a[k + 1] = rescaled(a[k], sm_[k], sm_[k + 1]) + partial_integral(f, um_, sm_, k, 1.0, sm_[k + 1]);
  b[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;)
    b[k] = rescaled(b[k + 1], sp_[k + 1], sp_[k]) + partial_integral(f, up_, sp_, k, 1.0, sp_[k]);

  cplx sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (g[k] == 0.0) continue;
    const cplx m = g[k] * (up_[k] * a[k] + um_[k] * b[k]);
    if (m == cplx{}) continue;
    const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
    sum += w * m * std::exp(sm_[k] + sp_[k] - sigma_ref_);
  }
  return 2.0 * mass_ * sum * grid_.step() / w_ref_;
}

// --- diagnostics --------------------------------------------------------------------------

double ResolventEvaluator::wronskian_drift() const {
  double drift = 0.0;
  for (std::size_t i = 0; i < grid_.points; ++i) {
    const cplx w = rescaled(wronskian_scaled(i), sm_[i] + sp_[i], sigma_ref_);
    drift = std::max(drift, std::abs(w - w_ref_) / std::abs(w_ref_));
  }
  return drift;
}

std::pair<double, double> ResolventEvaluator::edge_decay() const {
  const double h = grid_.step();
  const auto decay_at = [&](std::size_t i) -> std::optional<double> {
    const double x = grid_.x(i);
    const cplx q2 = 2.0 * mass_ * (potential_(x) - z_);
    if (potential_(x) - z_.real() <= 0.0) return std::nullopt;
    return decaying_root(q2).real() * h;
  };
  double left = 0.0, right = 0.0;
  for (std::size_t i = 0; i < grid_.points; ++i) {
    const auto d = decay_at(i);
    if (!d) break;
    left += *d;
  }
  for (std::size_t i = grid_.points; i-- > 0;) {
    const auto d = decay_at(i);
    if (!d) break;
    right += *d;
  }
  return {left, right};
}

// --- harmonic oracles ---------------------------------------------------------------------

HarmonicSpectralSum::HarmonicSpectralSum(const PotentialCurve& curve, cplx z, int n_max)
    : params_(curve.as_harmonic()), z_(z), n_max_(n_max) {
  if (n_max < 0) throw InvalidInput("n_max must be >= 0");
}

cplx HarmonicSpectralSum::pole(int n) const {
  return 1.0 / (z_ - (params_.origin + (n + 0.5) * params_.frequency));
}

cplx HarmonicSpectralSum::greens(double x, double x0) const {
  const auto px = harmonic_eigenfunctions(params_, n_max_, x);
  const auto p0 = harmonic_eigenfunctions(params_, n_max_, x0);
  cplx sum = 0.0;
  for (int n = 0; n <= n_max_; ++n) sum += px[n] * p0[n] * pole(n);
  return sum;
}

double HarmonicSpectralSum::tail_estimate(double x, double x0) const {
  const int top = 2 * n_max_ + 1;
  const auto px = harmonic_eigenfunctions(params_, top, x);
  const auto p0 = harmonic_eigenfunctions(params_, top, x0);
  cplx block = 0.0;
  for (int n = n_max_ + 1; n <= top; ++n) block += px[n] * p0[n] * pole(n);
  return std::abs(block);
}

cplx HarmonicSpectralSum::vector(double x0, std::span<const double> ket) const {
  const int top = std::min<int>(n_max_, static_cast<int>(ket.size()) - 1);
  const auto p0 = harmonic_eigenfunctions(params_, std::max(top, 0), x0);
  cplx sum = 0.0;
  for (int n = 0; n <= top; ++n) sum += p0[n] * ket[n] * pole(n);
  return sum;
}

cplx HarmonicSpectralSum::element(std::span<const double> bra, std::span<const double> ket) const {
  const int top = std::min<int>({n_max_, static_cast<int>(bra.size()) - 1,
                                 static_cast<int>(ket.size()) - 1});
  cplx sum = 0.0;
  for (int n = 0; n <= top; ++n) sum += bra[n] * ket[n] * pole(n);
  return sum;
}

double HarmonicSpectralSum::element_tail_bound(std::span<const double> bra,
                                               std::span<const double> ket) const {
  const auto deficit = [&](std::span<const double> c) {
    double s = 0.0;
    for (int n = 0; n <= n_max_ && n < static_cast<int>(c.size()); ++n) s += c[n] * c[n];
    return std::sqrt(std::max(0.0, 1.0 - s));
  };
  const double next = params_.origin + (n_max_ + 1.5) * params_.frequency;
  const double gap = z_.real() >= next ? z_.imag() : std::abs(z_ - next);
  return deficit(bra) * deficit(ket) / gap;
}

cplx harmonic_kernel_greens(const PotentialCurve& curve, cplx z, double x, double x0) {
  const auto& p = curve.as_harmonic();
  if (!(z.imag() > 0.0)) throw InvalidInput("resolvent needs Im z > 0 (retarded branch)");
  const double mw = p.mass * p.frequency;
  const double gamma = z.imag();
  const double e0 = p.origin + 0.5 * p.frequency;
  const double above = std::max(z.real() - e0, 0.0);

  // t = s e^{-i theta}: every mode stays damped while the caustics at sin(w t) = 0 move off
  // the contour.
  const double theta = std::atan(0.5 * gamma / (above + gamma));
  const cplx rot = std::polar(1.0, -theta);
  const double decay = gamma * std::cos(theta) - above * std::sin(theta);

  const double dx = x - p.minimum, dx0 = x0 - p.minimum;
  const double diff2 = (dx - dx0) * (dx - dx0);
  const double cross = 2.0 * dx * dx0;
  const double norm = std::sqrt(mw / std::numbers::pi);

  const auto integrand = [&](double s) -> cplx {
    const cplx t = s * rot;
    const cplx one_minus_q = -expm1(-kI * p.frequency * t);
    const cplx one_minus_q2 = -expm1(-2.0 * kI * p.frequency * t);
    const cplx q = 1.0 - one_minus_q;
    const cplx expo = -0.5 * mw * (diff2 * (1.0 + q * q) + cross * one_minus_q * one_minus_q) /
                      one_minus_q2;
    return -kI * rot * norm * std::exp(kI * (z - e0) * t + expo) / std::sqrt(one_minus_q2);
  };

  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double panel = std::numbers::pi / p.frequency;
  const double s_max = 42.0 / decay;

  // Tail panels contribute far below the requested tolerance relative to their own size, so
  // their recursion depth is capped instead of letting roundoff drive it.
  constexpr unsigned depth = 4;
  // First panel in u = sqrt(s) to absorb the t^{-1/2} singularity. For x close to x0 the
  // factor exp(i m (x - x0)^2 / 2t) still needs adaptive refinement near t = 0.
  cplx total = Quad::integrate([&](double u) { return integrand(u * u) * (2.0 * u); }, 0.0,
                               std::sqrt(panel), 15, 1e-13);
  for (double s = panel; s < s_max; s += panel)
    total += Quad::integrate(integrand, s, s + panel, depth, 1e-13);
  return total;
}

}  // namespace curvex
