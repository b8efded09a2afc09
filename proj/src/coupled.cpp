#include "curvex/coupled.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

#include "curvex/error.hpp"

namespace curvex {

CoupledGreens::CoupledGreens(const ResolventEvaluator& surface1,
                             const ResolventEvaluator& surface2, DeltaCoupling coupling)
    : s1_(surface1), s2_(surface2), coupling_(coupling) {
  if (surface1.energy() != surface2.energy())
    throw InvalidInput("coupled blocks need both resolvents at the same z");
  const Grid& g1 = surface1.grid();
  const Grid& g2 = surface2.grid();
  if (g1.lo != g2.lo || g1.hi != g2.hi || g1.points != g2.points)
    throw InvalidInput("coupled blocks need both resolvents on the same grid");
  if (coupling.strength < 0.0) throw InvalidInput("coupling strength must be >= 0");

  const double xc = coupling.location;
  g1_cc_ = surface1.greens_point(xc, xc);
  g2_cc_ = surface2.greens_point(xc, xc);
  const double k2 = coupling.strength * coupling.strength;
  denominator_ = 1.0 - k2 * g1_cc_ * g2_cc_;
  if (std::abs(denominator_) < 1e-12)
    throw ResonanceSingularity("|1 - K0^2 G1(xc,xc) G2(xc,xc)| < 1e-12");
}

CoupledAmplitude CoupledGreens::g11(std::span<const double> f, std::span<const double> i) const {
  const cplx direct = s1_.greens_matrix_element(f, i);
  if (coupling_.strength == 0.0) return {direct, direct, 0.0, denominator_};
  const double xc = coupling_.location;
  const double k2 = coupling_.strength * coupling_.strength;
  const cplx correction =
      k2 * s1_.greens_vector(f, xc) * g2_cc_ * s1_.greens_vector(i, xc) / denominator_;
  return {direct + correction, direct, correction, denominator_};
}

CoupledAmplitude CoupledGreens::g22(std::span<const double> f, std::span<const double> i) const {
  const cplx direct = s2_.greens_matrix_element(f, i);
  if (coupling_.strength == 0.0) return {direct, direct, 0.0, denominator_};
  const double xc = coupling_.location;
  const double k2 = coupling_.strength * coupling_.strength;
  const cplx correction =
      k2 * s2_.greens_vector(f, xc) * g1_cc_ * s2_.greens_vector(i, xc) / denominator_;
  return {direct + correction, direct, correction, denominator_};
}

cplx CoupledGreens::g12(std::span<const double> f, std::span<const double> i) const {
  if (coupling_.strength == 0.0) return 0.0;
  const double xc = coupling_.location;
  return coupling_.strength * s1_.greens_vector(f, xc) * s2_.greens_vector(i, xc) / denominator_;
}

cplx CoupledGreens::g21(std::span<const double> f, std::span<const double> i) const {
  if (coupling_.strength == 0.0) return 0.0;
  const double xc = coupling_.location;
  return coupling_.strength * s2_.greens_vector(f, xc) * s1_.greens_vector(i, xc) / denominator_;
}

cplx CoupledGreens::g11_column(double x, std::span<const double> i) const {
  const cplx direct = s1_.greens_vector(i, x);
  if (coupling_.strength == 0.0) return direct;
  const double xc = coupling_.location;
  const double k2 = coupling_.strength * coupling_.strength;
  return direct + k2 * s1_.greens_point(x, xc) * g2_cc_ * s1_.greens_vector(i, xc) / denominator_;
}

cplx CoupledGreens::g21_column(double x, std::span<const double> i) const {
  if (coupling_.strength == 0.0) return 0.0;
  const double xc = coupling_.location;
  return coupling_.strength * s2_.greens_point(x, xc) * s1_.greens_vector(i, xc) / denominator_;
}

cplx discrete_coupled_g11(const TwoStateModel& model, const Grid& grid, cplx z,
                          std::span<const double> f, std::span<const double> i) {
  model.validate();
  grid.validate();
  if (f.size() != grid.points || i.size() != grid.points)
    throw InvalidInput("function samples do not match the grid");
  if (!grid.contains(model.coupling.location))
    throw InvalidInput("coupling location outside the grid");

  const auto n = static_cast<Eigen::Index>(grid.points);
  const double h = grid.step();
  const double mass = model.allowed.mass();
  const double kinetic = 1.0 / (2.0 * mass * h * h);
  const auto nearest = static_cast<Eigen::Index>(
      std::lround((model.coupling.location - grid.lo) / h));

  // Unknowns interleaved (psi1_j, psi2_j) keep the matrix banded.
  using Triplet = Eigen::Triplet<cplx>;
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(6 * n + 2));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = grid.x(static_cast<std::size_t>(j));
    const double v[2] = {model.allowed(x), model.forbidden(x)};
    for (int s = 0; s < 2; ++s) {
      const Eigen::Index r = 2 * j + s;
      entries.emplace_back(r, r, z - v[s] - 2.0 * kinetic);
      if (j > 0) entries.emplace_back(r, r - 2, kinetic);
      if (j + 1 < n) entries.emplace_back(r, r + 2, kinetic);
    }
  }
  const cplx k = -model.coupling.strength / h;
  entries.emplace_back(2 * nearest, 2 * nearest + 1, k);
  entries.emplace_back(2 * nearest + 1, 2 * nearest, k);

  Eigen::SparseMatrix<cplx> a(2 * n, 2 * n);
  a.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    throw NumericalError("coupled", "sparse LU factorization of (z - H) failed");

  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) rhs[2 * j] = i[static_cast<std::size_t>(j)];
  const Eigen::VectorXcd y = lu.solve(rhs);

  // Delta normalization on the grid: G = (z - H)^-1 / dx, and <f|.|i> carries dx^2.
  cplx sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) sum += f[static_cast<std::size_t>(j)] * y[2 * j];
  return sum * h;
}

}  // namespace curvex
