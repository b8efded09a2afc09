#pragma once

#include <span>

#include "curvex/model.hpp"
#include "curvex/resolvent.hpp"

namespace curvex {

struct CoupledAmplitude {
  cplx value;
  cplx direct;               // <f|G0|i> on the diagonal surface
  cplx crossing_correction;  // second term of the partitioning formula
  cplx denominator;          // 1 - K0^2 G1(xc, xc) G2(xc, xc)
};

/// Exact 2x2 block resolvent of two surfaces coupled by K0 delta(x - xc), assembled from
/// the uncoupled resolvents. All blocks share the point values at xc and the denominator.
///
///   G11 = G1 + K0^2 G1|xc> G2(xc,xc) <xc|G1 / D
///   G12 = K0 G1|xc> <xc|G2 / D
///   G21 = K0 G2|xc> <xc|G1 / D
///   G22 = G2 + K0^2 G2|xc> G1(xc,xc) <xc|G2 / D
///
/// with D = 1 - K0^2 G1(xc,xc) G2(xc,xc).
class CoupledGreens {
public:
  /// Both evaluators must share z and the grid. Throws ResonanceSingularity if |D| < 1e-12.
  CoupledGreens(const ResolventEvaluator& surface1, const ResolventEvaluator& surface2,
                DeltaCoupling coupling);

  cplx denominator() const { return denominator_; }
  cplx g1_at_crossing() const { return g1_cc_; }
  cplx g2_at_crossing() const { return g2_cc_; }
  const DeltaCoupling& coupling() const { return coupling_; }

  CoupledAmplitude g11(std::span<const double> f, std::span<const double> i) const;
  cplx g12(std::span<const double> f, std::span<const double> i) const;
  cplx g21(std::span<const double> f, std::span<const double> i) const;
  CoupledAmplitude g22(std::span<const double> f, std::span<const double> i) const;

  /// (G_ab i)(x): the block applied to a grid function, evaluated at a point.
  cplx g11_column(double x, std::span<const double> i) const;
  cplx g21_column(double x, std::span<const double> i) const;

private:
  const ResolventEvaluator& s1_;
  const ResolventEvaluator& s2_;
  DeltaCoupling coupling_;
  cplx g1_cc_, g2_cc_, denominator_;
};

inline CoupledAmplitude coupled_G11_element(const ResolventEvaluator& ev1,
                                            const ResolventEvaluator& ev2, double k0, double xc,
                                            std::span<const double> f, std::span<const double> i) {
  return CoupledGreens(ev1, ev2, {k0, xc}).g11(f, i);
}

inline cplx coupled_G12_element(const ResolventEvaluator& ev1, const ResolventEvaluator& ev2,
                                double k0, double xc, std::span<const double> f,
                                std::span<const double> i) {
  return CoupledGreens(ev1, ev2, {k0, xc}).g12(f, i);
}

inline CoupledGreens coupled_full_matrix(const ResolventEvaluator& ev1,
                                         const ResolventEvaluator& ev2, double k0, double xc) {
  return CoupledGreens(ev1, ev2, {k0, xc});
}

/// Independent route: second-order finite differences for both surfaces, the coupling as
/// K0 / dx on the node nearest xc, and a sparse LU solve of (z - H) y = (i, 0).
/// Returns <f|G11|i> on the grid.
cplx discrete_coupled_g11(const TwoStateModel& model, const Grid& grid, cplx z,
                          std::span<const double> f, std::span<const double> i);

}  // namespace curvex
