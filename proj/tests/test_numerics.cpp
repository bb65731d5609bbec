#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "btq/numerics.hpp"

using namespace btq;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  auto [x, w] = gauss_legendre(6, 0.0, 2.0);
  double s3 = 0.0, s11 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    s3 += w[i] * x[i] * x[i] * x[i];
    s11 += w[i] * std::pow(x[i], 11);
  }
  CHECK(s3 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s11 == doctest::Approx(std::pow(2.0, 12) / 12.0).epsilon(1e-13));
}

TEST_CASE("disc rule recovers areas and Gaussian integrals") {
  QuadratureRule r = radial_angular_rule(24, 32, 1.0);
  double area = 0.0;
  for (double w : r.weights) area += w;
  CHECK(area == doctest::Approx(kPi).epsilon(1e-13));

  QuadratureRule g = radial_angular_rule(80, 32, 7.0);
  double gauss = 0.0;
  for (size_t i = 0; i < g.nodes.size(); ++i) gauss += g.weights[i] * std::exp(-std::norm(g.nodes[i]));
  CHECK(gauss == doctest::Approx(kPi).epsilon(1e-12));

  CHECK_THROWS_AS(radial_angular_rule(2, 32, 1.0), ConfigError);
}

TEST_CASE("inverse-power fit recovers exact coefficients") {
  std::vector<std::pair<int, cplx>> data;
  for (int p : {8, 16, 32, 64}) data.push_back({p, cplx(3.0 + 5.0 / p - 2.0 / (p * p), 0.0)});
  FitResult fit = fit_inverse_powers(data, 2);
  CHECK(std::abs(fit.coefficients[0] - cplx(3.0)) < 1e-10);
  CHECK(std::abs(fit.coefficients[1] - cplx(5.0)) < 1e-9);
  CHECK(std::abs(fit.coefficients[2] - cplx(-2.0)) < 1e-7);
  CHECK(fit.residual_norm < 1e-12);
  CHECK_THROWS_AS(fit_inverse_powers({{4, cplx(1.0)}, {8, cplx(1.0)}}, 2), ConfigError);
}

TEST_CASE("decay slope on an exact line") {
  std::vector<std::pair<double, double>> pts = {{1, -2.5}, {2, -4.5}, {3, -6.5}, {4, -8.5}};
  auto [slope, intercept] = decay_slope(pts);
  CHECK(slope == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(intercept == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(decay_slope({{1, 0}, {1, 0}, {2, 0}}), ConfigError);
}

TEST_CASE("Hermitian eigendecomposition contracts") {
  std::mt19937_64 eng(7);
  auto u = [&] { return double(eng() >> 11) * 0x1.0p-53 - 0.5; };
  Eigen::MatrixXcd A(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) A(i, j) = cplx(u(), u());
  Eigen::MatrixXcd H = A + A.adjoint().eval();
  EigenResult r = hermitian_eigen(H);
  for (int i = 1; i < 8; ++i) CHECK(r.values(i) <= r.values(i - 1));
  Eigen::MatrixXcd rec = r.vectors * r.values.asDiagonal() * r.vectors.adjoint();
  CHECK((rec - H).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXcd bad = A;  // generically non-Hermitian
  CHECK_THROWS_AS(hermitian_eigen(bad), NumericsError);

  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
  D(0, 0) = 2.0;
  D(1, 1) = -5.0;
  D(2, 2) = 1.0;
  CHECK(operator_norm(D) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("radix-2 FFT matches the DFT and round-trips") {
  const int n = 16;
  std::vector<cplx> delta(n, 0.0);
  delta[0] = 1.0;
  fft_pow2(delta);
  for (int k = 0; k < n; ++k) CHECK(std::abs(delta[k] - cplx(1.0)) < 1e-14);

  std::mt19937_64 eng(3);
  auto u = [&] { return double(eng() >> 11) * 0x1.0p-53 - 0.5; };
  std::vector<cplx> x(n), y;
  for (auto& v : x) v = cplx(u(), u());
  y = x;
  fft_pow2(y);
  // naive DFT comparison
  for (int k = 0; k < n; ++k) {
    cplx s(0.0);
    for (int j = 0; j < n; ++j) s += x[j] * std::exp(cplx(0, -2.0 * kPi * j * k / n));
    CHECK(std::abs(s - y[k]) < 1e-12);
  }
  fft_pow2(y, true);
  for (int k = 0; k < n; ++k) CHECK(std::abs(y[k] - x[k]) < 1e-13);

  std::vector<cplx> odd(6);
  CHECK_THROWS_AS(fft_pow2(odd), ConfigError);
  CHECK(next_pow2(100) == 128);
}
