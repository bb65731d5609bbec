#include "btq/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace btq {

SpectralMeasure positive_spectrum(const OperatorMatrix& M, double threshold, double sup_norm,
                                  const Tolerances& tol) {
  if (!M.hermitian) throw NumericsError("positive_spectrum: operator is not Hermitian");
  EigenResult eig = hermitian_eigen(M.M, tol);
  const double top = eig.values.size() ? eig.values(0) : 0.0;
  if (threshold <= 0.0) threshold = 1e-12 * std::max(1.0, std::abs(top));
  SpectralMeasure out;
  out.p = M.p;
  out.dim = static_cast<int>(M.M.rows());
  out.threshold = threshold;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double lam = eig.values(i);
    if (lam < -1e-8 * std::max(1.0, std::abs(top)))
      throw NumericsError("positive_spectrum: positivity violated, eigenvalue " +
                          std::to_string(lam));
    if (sup_norm > 0.0 && lam > sup_norm * (1.0 + 1e-8))
      throw NumericsError("positive_spectrum: eigenvalue exceeds the symbol sup norm");
    if (lam > threshold) out.eigenvalues.push_back(lam);
  }
  return out;
}

long count_above(const SpectralMeasure& m, double lambda) {
  long n = 0;
  for (double lam : m.eigenvalues)
    if (lam > lambda) ++n;
  return n;
}

ExpansionReport expansion_fit(const std::vector<std::pair<int, cplx>>& values, int order) {
  ExpansionReport rep;
  rep.values = values;
  FitResult fit = fit_inverse_powers(values, order);
  rep.coefficients = fit.coefficients;
  rep.residual_norm = fit.residual_norm;

  // Slope of log|v(p) - b0| against log p; vacuous when the remainders sit at
  // rounding level relative to b0.
  const cplx b0 = fit.coefficients.empty() ? cplx(0.0) : fit.coefficients[0];
  const double scale = std::max(1.0, std::abs(b0));
  std::vector<std::pair<double, double>> pts;
  bool vacuous = false;
  for (const auto& [p, v] : values) {
    const double rem = std::abs(v - b0);
    if (rem < 1e-12 * scale) {
      vacuous = true;
      continue;
    }
    pts.emplace_back(std::log(static_cast<double>(p)), std::log(rem));
  }
  rep.slope_vacuous = vacuous;
  if (!vacuous && pts.size() >= 3) rep.slope = decay_slope(pts).first;
  return rep;
}

double near_diagonal_residual(const QuantumSpace& space, const ModelWeights& w,
                              const std::vector<std::pair<cplx, cplx>>& grid) {
  if (!space.lebesgue)
    throw ConfigError("near_diagonal_residual: requires a Lebesgue-normalized space");
  const double sp = std::sqrt(static_cast<double>(space.p));
  double worst = 0.0;
  for (const auto& [Z, Zp] : grid) {
    const cplx measured = space.bergman_kernel(Z / sp, Zp / sp) / static_cast<double>(space.p);
    const cplx model = model_kernel(w, {Z}, {Zp});
    worst = std::max(worst, std::abs(measured - model) / std::max(1.0, std::abs(model)));
  }
  return worst;
}

double bump_superlevel_area(const Geometry& geom, double R, int q, double lambda) {
  if (R <= 0.0 || q < 1) throw ConfigError("bump_superlevel_area: need R > 0, q >= 1");
  if (lambda >= 1.0) return 0.0;
  double rho = (lambda <= 0.0) ? R * R : R * R * (1.0 - std::pow(lambda, 1.0 / q));
  switch (geom.kind()) {
    case Geometry::Kind::bargmann:
      return geom.param() * rho / 2.0;
    case Geometry::Kind::fubini_study:
      return rho / (1.0 + rho);
    case Geometry::Kind::poincare_disc:
      if (rho >= 1.0) throw ConfigError("bump_superlevel_area: bump exceeds the disc chart");
      return geom.param() * rho / (1.0 - rho);
  }
  throw ConfigError("bump_superlevel_area: unknown geometry");
}

cplx moment_trace(const Eigen::MatrixXcd& M, int m) {
  if (m < 1) throw ConfigError("moment_trace: m >= 1 required");
  Eigen::MatrixXcd P = M;
  for (int k = 1; k < m; ++k) P = (P * M).eval();
  KahanCSum tr;
  for (Eigen::Index i = 0; i < P.rows(); ++i) tr.add(P(i, i));
  return tr.value();
}

double symbol_moment_integral(const QuantumSpace& space, const Symbol& f, int m) {
  if (m < 1) throw ConfigError("symbol_moment_integral: m >= 1 required");
  KahanSum acc;
  space.for_each_node([&](cplx z, double c, int, int) {
    const double v = f.f(z).real();
    acc.add(c * std::pow(v, m));
  });
  return acc.value();
}

double superlevel_area_quadrature(const QuantumSpace& space, const Symbol& f, double lambda,
                                  double width) {
  KahanSum acc;
  space.for_each_node([&](cplx z, double c, int, int) {
    const double v = f.f(z).real();
    acc.add(c * 0.5 * (1.0 + std::tanh((v - lambda) / width)));
  });
  return acc.value();
}

}  // namespace btq
