#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "btq/spectral.hpp"

using namespace btq;

namespace {
OperatorMatrix diag_op(std::initializer_list<double> vals) {
  OperatorMatrix op;
  const int n = static_cast<int>(vals.size());
  op.M = Eigen::MatrixXcd::Zero(n, n);
  int i = 0;
  for (double v : vals) op.M(i, i) = v, ++i;
  op.hermitian = true;
  op.p = 4;
  return op;
}
}  // namespace

TEST_CASE("positive spectrum: thresholding and the PSD contract") {
  OperatorMatrix op = diag_op({0.9, 0.5, 1e-14, -1e-13});
  SpectralMeasure m = positive_spectrum(op, 1e-10);
  CHECK(m.eigenvalues.size() == 2);
  CHECK(count_above(m, 0.7) == 1);
  CHECK(count_above(m, 0.1) == 2);

  OperatorMatrix bad = diag_op({1.0, -0.2});
  CHECK_THROWS_AS(positive_spectrum(bad, 1e-10), NumericsError);
  OperatorMatrix over = diag_op({1.0, 0.5});
  CHECK_THROWS_AS(positive_spectrum(over, 1e-10, 0.8), NumericsError);
}

TEST_CASE("expansion fit recovers coefficients and slope") {
  std::vector<std::pair<int, cplx>> vals;
  for (int p : {8, 16, 32, 64}) vals.push_back({p, cplx(1.0 + 0.5 / p - 0.1 / (p * p), 0.0)});
  ExpansionReport r = expansion_fit(vals, 2);
  CHECK(std::abs(r.coefficients[0].real() - 1.0) < 1e-9);
  CHECK(std::abs(r.coefficients[1].real() - 0.5) < 1e-7);
  CHECK(!r.slope_vacuous);
  CHECK(r.slope == doctest::Approx(-1.0).epsilon(0.05));

  std::vector<std::pair<int, cplx>> flat;
  for (int p : {8, 16, 32, 64}) flat.push_back({p, cplx(2.0)});
  ExpansionReport rf = expansion_fit(flat, 2);
  CHECK(rf.slope_vacuous);
}

TEST_CASE("near-diagonal rescaling is exact on the flat space") {
  BuildOptions o;
  o.lebesgue_volume = true;
  QuantumSpace sp = build_space(Geometry::bargmann(1.0), 16, 40, o);
  const std::vector<std::pair<cplx, cplx>> grid = {{cplx(0.3, 0), cplx(0.1, 0.2)},
                                                   {cplx(0, 0), cplx(0, 0)}};
  CHECK(near_diagonal_residual(sp, ModelWeights({1.0}), grid) < 1e-10);
  QuantumSpace sw = build_space(Geometry::bargmann(1.0), 16, 40, {});
  CHECK_THROWS_AS(near_diagonal_residual(sw, ModelWeights({1.0}), grid), ConfigError);
}

TEST_CASE("superlevel areas of the radial bump") {
  const Geometry g = Geometry::bargmann(1.0);
  CHECK(bump_superlevel_area(g, 2.0, 3, 0.0) == doctest::Approx(2.0));
  CHECK(bump_superlevel_area(g, 2.0, 3, 1.0) == doctest::Approx(0.0));
  CHECK(bump_superlevel_area(g, 2.0, 3, 0.125) == doctest::Approx(1.0).epsilon(1e-12));
  const Geometry d = Geometry::poincare_disc(2.0);
  CHECK(bump_superlevel_area(d, 0.6, 3, 0.0) == doctest::Approx(2.0 * 0.36 / 0.64));
  const Geometry f = Geometry::fubini_study();
  CHECK(bump_superlevel_area(f, 1.0, 3, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("trace moments and symbol integrals") {
  OperatorMatrix op = diag_op({2.0, 1.0, 0.5});
  CHECK(moment_trace(op.M, 1).real() == doctest::Approx(3.5));
  CHECK(moment_trace(op.M, 3).real() == doctest::Approx(8.0 + 1.0 + 0.125));

  BuildOptions o;
  o.kinks_t = {4.0};
  QuantumSpace sp = build_space(Geometry::bargmann(1.0), 16, 60, o);
  const Symbol b = symbols::bump(2.0, cplx(0, 0), 3);
  for (int m : {1, 2, 3}) {
    const double closed = 0.5 * 4.0 / (3.0 * m + 1.0);  // (a/2) R^2 / (3m+1)
    CHECK(symbol_moment_integral(sp, b, m) == doctest::Approx(closed).epsilon(1e-11));
  }
  const double qarea = superlevel_area_quadrature(sp, b, 0.125, 5e-4);
  CHECK(qarea == doctest::Approx(bump_superlevel_area(Geometry::bargmann(1.0), 2.0, 3, 0.125))
                     .epsilon(2e-3));
}
