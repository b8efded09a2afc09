#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "curvex/model.hpp"

namespace curvex {

using cplx = std::complex<double>;

struct ResolventOptions {
  /// Magnus steps per grid interval.
  int substeps = 1;
};

/// A homogeneous solution value at a point. The true value is (u, du) * exp(log_scale).
struct SolutionValue {
  cplx u;
  cplx du;
  double log_scale;
};

/// Single-surface retarded Green's function G(x, x0; z) = <x|(z - H)^-1|x0> for
/// H = -1/(2m) d^2/dx^2 + V(x), built from the solution decaying to the left (u-) and the
/// one decaying to the right (u+):
///
///   G(x, x0) = 2m u-(min(x, x0)) u+(max(x, x0)) / W,   W = u- u+' - u-' u+.
///
/// Both solutions are tabulated on the grid with a running log scale so that neither
/// overflows; scales cancel in every returned quantity. Immutable after construction.
class ResolventEvaluator {
public:
  using Potential = std::function<double(double)>;

  ResolventEvaluator(double mass, Potential potential, cplx z, const Grid& grid,
                     ResolventOptions options = {});

  const Grid& grid() const { return grid_; }
  cplx energy() const { return z_; }
  double mass() const { return mass_; }
  double potential(double x) const { return potential_(x); }

  cplx greens_point(double x, double x0) const;
  /// Integral of f(x) G(x, x0) dx; f sampled on the grid.
  cplx greens_vector(std::span<const double> f, double x0) const;
  /// Double integral of f(x) G(x, x0) g(x0), evaluated in one O(N) pass.
  cplx greens_matrix_element(std::span<const double> f, std::span<const double> g) const;

  SolutionValue decaying_left(double x) const;
  SolutionValue decaying_right(double x) const;

  /// Largest relative deviation of the node-wise Wronskian from the reference value.
  double wronskian_drift() const;
  /// Integral of Re sqrt(2m(V - z)) from each grid edge to the nearest classical turning
  /// point of Re z (e-foldings of the WKB envelope inside the grid).
  std::pair<double, double> edge_decay() const;

private:
  struct Transfer {
    cplx a, b, c, d;  // (u, u')(x + h) = [[a, b], [c, d]] (u, u')(x)
  };

  Transfer magnus(double x, double h) const;
  Transfer transfer(double x, double h) const;
  std::size_t interval(double x) const;
  cplx wronskian_scaled(std::size_t i) const;
  // Integral of f * u over [x_k, x_k + t h] from the quintic through the six nodes around
  // interval k; values scaled by exp(log_scale[j] - ref).
  cplx partial_integral(std::span<const double> f, const std::vector<cplx>& u,
                        const std::vector<double>& log_scale, std::size_t k, double t,
                        double ref) const;

  double mass_;
  Potential potential_;
  cplx z_;
  Grid grid_;
  ResolventOptions options_;

  std::vector<cplx> um_, dum_, up_, dup_;
  std::vector<double> sm_, sp_;
  std::size_t ref_ = 0;
  cplx w_ref_;
  double sigma_ref_ = 0.0;
};

/// Validates Im z > 0 and builds the evaluator.
ResolventEvaluator build_resolvent(const PotentialCurve& curve, cplx z, const Grid& grid,
                                   ResolventOptions options = {});
ResolventEvaluator build_resolvent(double mass, ResolventEvaluator::Potential potential, cplx z,
                                   const Grid& grid, ResolventOptions options = {});

inline cplx greens_point(const ResolventEvaluator& ev, double x, double x0) {
  return ev.greens_point(x, x0);
}
inline cplx greens_vector(const ResolventEvaluator& ev, std::span<const double> f, double x0) {
  return ev.greens_vector(f, x0);
}
inline cplx greens_matrix_element(const ResolventEvaluator& ev, std::span<const double> f,
                                  std::span<const double> g) {
  return ev.greens_matrix_element(f, g);
}

// --- harmonic oracles -------------------------------------------------------------------

/// Truncated eigenfunction expansion sum_{n <= n_max} phi_n(x) phi_n(x0) / (z - E_n).
class HarmonicSpectralSum {
public:
  HarmonicSpectralSum(const PotentialCurve& curve, cplx z, int n_max);

  int n_max() const { return n_max_; }
  cplx pole(int n) const;

  cplx greens(double x, double x0) const;
  /// |S_{2N} - S_N| at the point: the size of the next block of terms.
  double tail_estimate(double x, double x0) const;

  /// sum_n phi_n(x0) c_n / (z - E_n). Takes expansion coefficients c_n = <phi_n|ket>, not
  /// grid samples.
  cplx vector(double x0, std::span<const double> ket_coefficients) const;
  /// sum_n b_n c_n / (z - E_n), both arguments expansion coefficients.
  cplx element(std::span<const double> bra_coefficients,
               std::span<const double> ket_coefficients) const;
  /// Bound on the neglected terms of element(): |z - E_{N+1}|^-1 times the completeness
  /// deficits of unit-normalized bra and ket.
  double element_tail_bound(std::span<const double> bra, std::span<const double> ket) const;

private:
  HarmonicParams params_;
  cplx z_;
  int n_max_;
};

inline HarmonicSpectralSum harmonic_spectral_sum(const PotentialCurve& curve, cplx z, int n_max) {
  return HarmonicSpectralSum(curve, z, n_max);
}

/// Harmonic Green's function from the fully summed eigenfunction expansion: Mehler's
/// generating function for sum_n phi_n(x) phi_n(x0) e^{-i E_n t}, Laplace transformed along
/// a slightly rotated time contour by adaptive Gauss-Kronrod quadrature.
cplx harmonic_kernel_greens(const PotentialCurve& curve, cplx z, double x, double x0);

}  // namespace curvex
