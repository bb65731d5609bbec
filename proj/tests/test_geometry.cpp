#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "btq/geometry.hpp"

using namespace btq;

TEST_CASE("metric normalization at the origin") {
  CHECK(Geometry::bargmann(1.0).metric(0.0) == doctest::Approx(1.0 / (4.0 * kPi)));
  CHECK(Geometry::fubini_study().metric(0.0) == doctest::Approx(1.0 / (2.0 * kPi)));
  CHECK(Geometry::poincare_disc(2.0).metric(0.0) == doctest::Approx(1.0 / kPi));
  CHECK_THROWS_AS(Geometry::bargmann(-1.0), ConfigError);
  CHECK_THROWS_AS(Geometry::poincare_disc(1.5), ConfigError);
}

TEST_CASE("scalar curvature: constants and finite-difference cross-check") {
  const cplx z(0.3, -0.2);
  CHECK(Geometry::bargmann(2.0).scalar_curvature(z) == doctest::Approx(0.0));
  CHECK(Geometry::fubini_study().scalar_curvature(z) == doctest::Approx(8.0 * kPi).epsilon(1e-12));
  CHECK(Geometry::poincare_disc(3.0).scalar_curvature(z) ==
        doctest::Approx(-8.0 * kPi / 3.0).epsilon(1e-12));

  // rho = -d_z d_zbar log g by central differences.
  for (const Geometry& g : {Geometry::fubini_study(), Geometry::poincare_disc(2.0)}) {
    const double h = 1e-4;
    auto lg = [&](cplx w) { return std::log(g.metric(w)); };
    const double lap = (lg(z + h) + lg(z - h) + lg(z + cplx(0, h)) + lg(z - cplx(0, h)) -
                        4.0 * lg(z)) /
                       (h * h);
    const double rho_fd = -0.25 * lap;
    CHECK(std::abs(rho_fd - g.ricci_form(z)) < 1e-5 * std::abs(g.ricci_form(z)) + 1e-7);
  }
}

TEST_CASE("geodesic distance: symmetry and metric consistency") {
  for (const Geometry& g :
       {Geometry::bargmann(1.0), Geometry::fubini_study(), Geometry::poincare_disc(2.0)}) {
    const cplx x(0.3, 0.1), y(0.1, -0.2);
    CHECK(g.distance(x, y) == doctest::Approx(g.distance(y, x)).epsilon(1e-13));
    CHECK(g.distance(x, x) == doctest::Approx(0.0));
    // Infinitesimal distance matches ds^2 = 2 g |dz|^2.
    const double eps = 1e-5;
    const double d = g.distance(x, x + cplx(eps, 0));
    CHECK(d == doctest::Approx(std::sqrt(2.0 * g.metric(x)) * eps).epsilon(1e-4));
  }
}

TEST_CASE("coefficient formulas on the flat model") {
  const Geometry g = Geometry::bargmann(2.0);
  const Symbol z = symbols::monomial(1, 0), zb = symbols::monomial(0, 1);
  const cplx x(0.5, 0.3);
  CHECK(std::abs(c1_coefficient(g, z, zb, x) - cplx(-2.0 / 2.0)) < 1e-13);
  CHECK(std::abs(poisson_bracket(g, z, zb, x) - cplx(0, 2.0 / 2.0)) < 1e-13);
  // C1(f,g) - C1(g,f) = i {f,g} identically.
  const cplx lhs = c1_coefficient(g, z, zb, x) - c1_coefficient(g, zb, z, x);
  CHECK(std::abs(lhs - cplx(0, 1) * poisson_bracket(g, z, zb, x)) < 1e-13);

  const Symbol t = symbols::monomial(1, 1);
  CHECK(std::abs(laplace_beltrami(Geometry::bargmann(1.0), t, x) - cplx(-8.0 * kPi)) < 1e-12);
}

TEST_CASE("symbol derivatives: analytic vs finite differences") {
  const cplx x(0.31, 0.22);
  const double h = 1e-6;
  for (const Symbol& s : {symbols::bump(1.4, cplx(0.2, 0.1)), symbols::gaussian(cplx(0.1, 0), 0.8),
                          symbols::product(symbols::bump(1.4, cplx(0, 0)),
                                           symbols::gaussian(cplx(0, 0), 1.0))}) {
    const cplx dx = (s.f(x + h) - s.f(x - h)) / (2.0 * h);
    const cplx dy = (s.f(x + cplx(0, h)) - s.f(x - cplx(0, h))) / (2.0 * h);
    const cplx fz_fd = 0.5 * (dx - cplx(0, 1) * dy);
    CHECK(std::abs(fz_fd - s.fz(x)) < 1e-8);
  }
  // from_eval wraps a closure with finite-difference derivatives.
  const Symbol g = symbols::gaussian(cplx(0, 0), 1.0);
  const Symbol w = symbols::from_eval("wrapped", g.f, true);
  CHECK(std::abs(w.fz(x) - g.fz(x)) < 1e-8);
  CHECK(std::abs(w.fzzb(x) - g.fzzb(x)) < 1e-6);
  CHECK(w.fd_derivatives);
}

TEST_CASE("bump support and sup norm") {
  const Symbol b = symbols::bump(1.5, cplx(0.4, 0));
  CHECK(b.sup_norm == doctest::Approx(1.0));
  CHECK(*b.support_radius == doctest::Approx(1.9));
  CHECK(std::abs(b.f(cplx(2.0, 0))) == 0.0);
  CHECK(b.f(cplx(0.4, 0)).real() == doctest::Approx(1.0));
  const Symbol c = symbols::cone_bump(1.0, cplx(0, 0));
  CHECK(c.f(cplx(0.5, 0)).real() == doctest::Approx(0.125).epsilon(1e-12));
}
