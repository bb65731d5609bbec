#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "btq/quantum_space.hpp"

using namespace btq;

TEST_CASE("flat space: Gram diagonal and kernel match closed forms") {
  const int p = 8;
  QuantumSpace sp = build_space(Geometry::bargmann(1.0), p, 40, {});
  for (int k = 0; k < sp.d; ++k) {
    const double closed = k * std::log(2.0 / p) + std::lgamma(k + 1.0) - std::log(double(p));
    CHECK(std::abs(std::expm1(sp.lognu[k] - closed)) < 1e-11);
  }
  // P_p(x,x) = p identically in the omega normalization.
  CHECK(sp.kernel_diag(cplx(0.3, 0.2)) == doctest::Approx(double(p)).epsilon(1e-10));
  CHECK(sp.kernel_diag(cplx(0, 0)) == doctest::Approx(double(p)).epsilon(1e-12));
}

TEST_CASE("round sphere: forced dimension and constant diagonal") {
  const int p = 12;
  CHECK_THROWS_AS(build_space(Geometry::fubini_study(), p, 5, {}), ConfigError);
  QuantumSpace sp = build_space(Geometry::fubini_study(), p, p + 1, {});
  CHECK(sp.d == p + 1);
  CHECK(sp.kernel_diag(cplx(0.7, -0.4)) == doctest::Approx(double(p + 1)).epsilon(1e-10));

  BuildOptions lo;
  lo.lebesgue_volume = true;
  QuantumSpace sl = build_space(Geometry::fubini_study(), p, p + 1, lo);
  CHECK(sl.d == p - 1);  // top modes are not Lebesgue square-integrable
}

TEST_CASE("hyperbolic disc: kernel diagonal at the center") {
  const int p = 10;
  const double s = 2.0;
  QuantumSpace sp = build_space(Geometry::poincare_disc(s), p, 60, {});
  CHECK(sp.kernel_diag(cplx(0, 0)) == doctest::Approx(p - 1.0 / s).epsilon(1e-10));
}

TEST_CASE("reproducing identity and semigroup property") {
  QuantumSpace sp = build_space(Geometry::bargmann(1.0), 8, 32, {});
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(sp.d);
  c(1) = cplx(0.8, -0.2);
  c(4) = cplx(0.1, 0.5);
  const std::vector<cplx> probes = {cplx(0.3, 0), cplx(0.2, 0.4)};
  CHECK(sp.reproduce_residual(c, probes) < 1e-8);
  CHECK(sp.semigroup_residual(probes[0], probes[1]) < 1e-8 * sp.kernel_diag(probes[0]));
}

TEST_CASE("gauge shift leaves the kernel invariant") {
  Geometry a = Geometry::bargmann(1.0);
  Geometry b = a;
  b.kappa_shift = 0.7;
  QuantumSpace sa = build_space(a, 8, 32, {});
  QuantumSpace sb = build_space(b, 8, 32, {});
  const cplx x(0.4, 0.1);
  CHECK(sa.kernel_diag(x) == doctest::Approx(sb.kernel_diag(x)).epsilon(1e-11));
  // The Gram diagonal itself does shift: nu_k -> nu_k e^{-p c}.
  CHECK(sa.lognu[3] - sb.lognu[3] == doctest::Approx(8.0 * 0.7).epsilon(1e-10));
}

TEST_CASE("truncation gate rejects a starved basis") {
  BuildOptions o;
  o.truncation_gate = true;
  CHECK_THROWS_AS(build_space(Geometry::bargmann(1.0), 64, 2, o), NumericsError);
}

TEST_CASE("coherent states: norm equals the kernel diagonal") {
  QuantumSpace sp = build_space(Geometry::bargmann(1.0), 8, 32, {});
  const cplx x(0.5, -0.3);
  CoherentVector s = coherent_state(sp, x);
  CHECK(s.norm2 == doctest::Approx(sp.kernel_diag(x)).epsilon(1e-12));
  // The coherent vector reproduces point evaluation of members.
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(sp.d);
  c(2) = cplx(1.0, 0.4);
  Eigen::VectorXcd e = sp.section_values(x);
  const cplx fx = (c.transpose() * e)(0);
  const cplx ip = (c.transpose() * s.coeffs.conjugate())(0);
  CHECK(std::abs(fx - ip) < 1e-12);
}

TEST_CASE("invalid construction parameters") {
  CHECK_THROWS_AS(build_space(Geometry::bargmann(1.0), 0, 8, {}), ConfigError);
  CHECK_THROWS_AS(build_space(Geometry::bargmann(1.0), 4, 0, {}), ConfigError);
}
