#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "btq/common.hpp"

namespace btq {

/// Compensated (Kahan) accumulator. All reductions in the library run in a
/// fixed index order through one of these, so results are bit-stable across
/// runs and thread counts.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

struct KahanCSum {
  KahanSum re, im;
  void add(cplx x) {
    re.add(x.real());
    im.add(x.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

/// Gauss-Legendre nodes/weights on [a,b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b);

/// Planar quadrature nodes with Lebesgue-measure weights.
struct QuadratureRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;
};

/// Tensor rule on the disc of the given radius: Gauss-Legendre in r^2,
/// uniform trapezoid in the angle (spectrally accurate for periodic
/// integrands).
QuadratureRule radial_angular_rule(int n_radial, int n_angular, double radius);

struct EigenResult {
  Eigen::VectorXd values;   // sorted descending
  Eigen::MatrixXcd vectors; // columns match values
};

/// Dense Hermitian eigendecomposition with contract checks:
/// input Hermitian within tol, unitarity and reconstruction verified.
EigenResult hermitian_eigen(const Eigen::MatrixXcd& M, const Tolerances& tol = {});

/// Spectral norm via the Hermitian eigenproblem for M^*M.
double operator_norm(const Eigen::MatrixXcd& M);

struct FitResult {
  std::vector<cplx> coefficients; // c_0 ... c_order of sum c_r p^{-r}
  double residual_norm = 0.0;
  double condition_estimate = 0.0;
};

/// Least squares for value(p) ~ sum_{r<=order} c_r p^{-r}.
FitResult fit_inverse_powers(const std::vector<std::pair<int, cplx>>& data, int order);

/// Ordinary least squares line through (s, log|value|) points;
/// returns (slope, intercept).
std::pair<double, double> decay_slope(const std::vector<std::pair<double, double>>& pts);

/// In-place radix-2 FFT; size must be a power of two.
void fft_pow2(std::vector<cplx>& a, bool inverse = false);

int next_pow2(int n);

}  // namespace btq
