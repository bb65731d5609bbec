#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "btq/model_space.hpp"

using namespace btq;

TEST_CASE("model kernel closed form and normalization") {
  ModelWeights w({2.0});
  CHECK(std::abs(model_kernel(w, {cplx(0)}, {cplx(0)}) - cplx(1.0 / kPi)) < 1e-15);
  // Hermitian symmetry P(Z,Z') = conj(P(Z',Z)).
  const cplx Z(0.4, 0.3), Zp(-0.2, 0.5);
  CHECK(std::abs(model_kernel(w, {Z}, {Zp}) - std::conj(model_kernel(w, {Zp}, {Z}))) < 1e-15);
  CHECK_THROWS_AS(ModelWeights({-1.0}), ConfigError);
  CHECK_THROWS_AS(ModelWeights({2.0, 1.0}), ConfigError);
}

TEST_CASE("ground-state basis is orthonormal by quadrature") {
  ModelWeights w({1.0});
  QuadratureRule r = radial_angular_rule(90, 64, 11.0);
  double n00 = 0.0;
  cplx n01(0.0);
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    const cplx p0 = onb_phi(w, {0}, {r.nodes[i]});
    const cplx p1 = onb_phi(w, {1}, {r.nodes[i]});
    n00 += r.weights[i] * std::norm(p0);
    n01 += r.weights[i] * p0 * std::conj(p1);
  }
  CHECK(n00 == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(std::abs(n01) < 1e-11);
}

TEST_CASE("model spectrum lattice counts") {
  ModelWeights w({1.0, 2.0});
  auto spec = model_spectrum(w, 8.0);
  REQUIRE(!spec.empty());
  CHECK(spec[0].eigenvalue == doctest::Approx(0.0));
  CHECK(spec[0].lattice_count == 1);
  CHECK(spec[0].infinite_l2_multiplicity);
  // eigenvalue 4 = 2(alpha1 + 2 alpha2) for (2,0) and (0,1)
  bool found = false;
  for (const auto& e : spec)
    if (std::abs(e.eigenvalue - 4.0) < 1e-12) {
      found = true;
      CHECK(e.lattice_count == 2);
    }
  CHECK(found);
}

TEST_CASE("kernel composition: projector identity and quadrature oracle") {
  ModelWeights w({1.3});
  PolyKernel one = PolyKernel::one(1);
  PolyKernel K = kernel_compose(w, one, one);  // P o P = P
  const cplx Z(0.5, -0.2), Zp(0.1, 0.4);
  CHECK(std::abs(K.eval({Z}, {Zp}) - cplx(1.0)) < 1e-12);

  PolyKernel F = PolyKernel::monomial(1, {1, 0, 0, 1}, cplx(0.7, 0.2));
  F.add({0, 0, 0, 0}, cplx(0.3, -0.1));
  PolyKernel G = PolyKernel::monomial(1, {0, 1, 1, 0}, cplx(-0.4, 0.5));
  G.add({2, 0, 0, 0}, cplx(0.2, 0.0));
  PolyKernel C = kernel_compose(w, F, G);
  QuadratureRule r = radial_angular_rule(140, 128, 11.0);
  KahanCSum acc;
  for (size_t i = 0; i < r.nodes.size(); ++i) {
    const cplx W = r.nodes[i];
    acc.add(r.weights[i] * F.eval({Z}, {W}) * model_kernel(w, {Z}, {W}) * G.eval({W}, {Zp}) *
            model_kernel(w, {W}, {Zp}));
  }
  const cplx ref = C.eval({Z}, {Zp}) * model_kernel(w, {Z}, {Zp});
  CHECK(std::abs(acc.value() - ref) < 1e-10);
}

TEST_CASE("point scaling and rescaled kernel") {
  ModelWeights w({1.0});
  PolyKernel F = PolyKernel::monomial(1, {1, 0, 0, 1}, cplx(1.0));
  PolyKernel Fm = F.scale_points(-1.0);
  const cplx Z(0.3, 0.2), Zp(-0.1, 0.6);
  CHECK(std::abs(Fm.eval({Z}, {Zp}) - F.eval({-Z}, {-Zp})) < 1e-15);

  // p^n (1 . P)(sqrt(p) Z, sqrt(p) Z') equals the level-p flat kernel.
  const int p = 9;
  const cplx got = rescaled_kernel(w, PolyKernel::one(1), p, {Z}, {Zp});
  const double a = 1.0;
  const cplx expo = -p * a / 4.0 * (std::norm(Z) + std::norm(Zp)) +
                    p * a / 2.0 * Z * std::conj(Zp);
  const cplx ref = double(p) * a / (2.0 * kPi) * std::exp(expo);
  CHECK(std::abs(got - ref) < 1e-12 * std::abs(ref));
}
