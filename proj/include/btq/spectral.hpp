#pragma once

#include <vector>

#include "btq/model_space.hpp"
#include "btq/toeplitz.hpp"

namespace btq {

/// Positive part of a Toeplitz spectrum at one level.
struct SpectralMeasure {
  int p = 0;
  int dim = 0;
  std::vector<double> eigenvalues;  // > threshold, sorted descending
  double threshold = 0.0;
};

/// Eigenvalues of a Hermitian PSD operator above the threshold.
/// sup_norm, when positive, bounds the spectrum from above (contract).
SpectralMeasure positive_spectrum(const OperatorMatrix& M, double threshold,
                                  double sup_norm = 0.0, const Tolerances& tol = {});

long count_above(const SpectralMeasure& m, double lambda);

struct ExpansionReport {
  std::vector<cplx> coefficients;  // b0, b1, ... from the 1/p fit
  double residual_norm = 0.0;
  double slope = 0.0;          // log-log slope of |v(p) - b0|
  bool slope_vacuous = false;  // residuals at rounding level, slope meaningless
  std::vector<std::pair<int, cplx>> values;
};

/// Fits v(p) = b0 + b1/p + ... and the decay slope of the remainder after b0.
ExpansionReport expansion_fit(const std::vector<std::pair<int, cplx>>& values, int order);

/// Max residual of p^{-1} P_p(Z/sqrt(p), Z'/sqrt(p)) against the flat model
/// kernel with weight a = 2 kappa_{z zbar}(0), on a Lebesgue-normalized space.
double near_diagonal_residual(const QuantumSpace& lebesgue_space, const ModelWeights& w,
                              const std::vector<std::pair<cplx, cplx>>& grid);

/// omega-area of the superlevel set {bump > lambda} for the centered radial
/// bump (1 - t/R^2)^q, from the analytic inverse of its profile.
double bump_superlevel_area(const Geometry& geom, double R, int q, double lambda);

/// Tr M^m.
cplx moment_trace(const Eigen::MatrixXcd& M, int m);

/// Quadrature of f^m against the omega-volume of the space's rule.
double symbol_moment_integral(const QuantumSpace& space, const Symbol& f, int m);

/// Quadrature omega-area of {f > lambda} with indicator smoothing width
/// `width` (fallback for non-centered symbols).
double superlevel_area_quadrature(const QuantumSpace& space, const Symbol& f, double lambda,
                                  double width = 1e-3);

}  // namespace btq
