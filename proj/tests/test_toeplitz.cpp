#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "btq/toeplitz.hpp"

using namespace btq;

namespace {
QuantumSpace flat_space(int p, int N) { return build_space(Geometry::bargmann(1.0), p, N, {}); }
}  // namespace

TEST_CASE("linear symbol: subdiagonal matches the Gamma closed form") {
  const int p = 8;
  QuantumSpace sp = flat_space(p, 40);
  OperatorMatrix Tz = assemble_toeplitz(sp, symbols::monomial(1, 0));
  Eigen::MatrixXcd ref = bargmann_monomial_toeplitz(p, 1.0, sp.d, 1, 0);
  CHECK((Tz.M - ref).cwiseAbs().maxCoeff() < 1e-10);
  for (int j = 0; j + 1 < sp.d; ++j) {
    const double expect = std::exp(0.5 * (sp.lognu[j + 1] - sp.lognu[j]));
    CHECK(std::abs(Tz.M(j + 1, j) - cplx(expect)) < 1e-11 * std::max(1.0, expect));
  }
}

TEST_CASE("assembly modes agree; serial is bitwise identical") {
  QuantumSpace sp = flat_space(4, 20);
  const Symbol f = symbols::bump(1.3, cplx(0.2, 0.1));
  OperatorMatrix par = assemble_toeplitz(sp, f, AssemblyMode::parallel);
  OperatorMatrix ser = assemble_toeplitz(sp, f, AssemblyMode::serial);
  OperatorMatrix dir = assemble_toeplitz(sp, f, AssemblyMode::direct2d);
  CHECK((par.M - ser.M).cwiseAbs().maxCoeff() == 0.0);
  CHECK((par.M - dir.M).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(par.hermitian);  // real symbol
}

TEST_CASE("support coverage is enforced") {
  QuantumSpace sp = flat_space(4, 20);
  CHECK_THROWS_AS(assemble_toeplitz(sp, symbols::bump(50.0, cplx(0, 0))), ConfigError);
}

TEST_CASE("Berezin symbol of the identity and unit Toeplitz kernel") {
  QuantumSpace sp = flat_space(8, 32);
  OperatorMatrix T1 = assemble_toeplitz(sp, symbols::constant(1.0));
  const cplx x(0.4, -0.2), y(0.1, 0.3);
  CHECK(std::abs(berezin_symbol(sp, T1.M, x) - cplx(1.0)) < 1e-10);
  // T_1 has the Bergman kernel as its kernel.
  CHECK(std::abs(toeplitz_kernel(sp, T1.M, x, y) - sp.bergman_kernel(x, y)) <
        1e-9 * std::abs(sp.bergman_kernel(x, y)));
}

TEST_CASE("monomial closed form: quadratic diagonal") {
  const int p = 8;
  Eigen::MatrixXcd M = bargmann_monomial_toeplitz(p, 1.0, 20, 1, 1);
  for (int j = 0; j < 20; ++j)
    CHECK(std::abs(M(j, j) - cplx(2.0 * (j + 1) / p)) < 1e-12 * (j + 1));
}

TEST_CASE("coherent reconstruction matches direct assembly") {
  Geometry g = Geometry::bargmann(1.0);
  BuildOptions o;
  o.kinks_t = {2.25};  // support edge of the bump below
  QuantumSpace sp = build_space(g, 8, 24, o);
  BuildOptions fo = o;
  fo.n_radial = 260;
  fo.n_angular = 512;
  fo.generic_cross_check = false;
  QuantumSpace fine = build_space(g, 8, 24, fo);
  const Symbol f = symbols::bump(1.2, cplx(0.3, 0));
  OperatorMatrix R = coherent_reconstruction(sp, fine, f);
  OperatorMatrix T = assemble_toeplitz(sp, f);
  CHECK((R.M - T.M).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("norm law rejects unbounded symbols") {
  QuantumSpace sp = flat_space(8, 32);
  std::vector<const QuantumSpace*> sv = {&sp};
  CHECK_THROWS_AS(norm_convergence(sv, symbols::monomial(1, 0)), ConfigError);
  const auto rows = norm_convergence(sv, symbols::bump(1.5, cplx(0, 0)));
  CHECK(rows[0].gap >= -1e-10);  // never above sup|f| = 1
  CHECK(rows[0].norm > 0.5);
}

TEST_CASE("star associativity closes at orders 0 and 1") {
  const Geometry g = Geometry::fubini_study();
  const Symbol f = symbols::bump(1.5, cplx(0, 0), 4);
  const Symbol h = symbols::bump(1.4, cplx(0.2, 0), 4);
  const Symbol k = symbols::bump(1.3, cplx(-0.1, 0), 4);
  const cplx x(0.1, 0.05);
  CHECK(star_associativity_check(g, f, h, k, x, 0) < 1e-15);
  CHECK(star_associativity_check(g, f, h, k, x, 1) < 1e-12);
  CHECK_THROWS_AS(star_associativity_check(g, f, h, k, x, 3), ConfigError);
}
