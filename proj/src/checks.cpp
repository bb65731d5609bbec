#include "btq/checks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "btq/model_space.hpp"
#include "btq/numerics.hpp"
#include "btq/quantum_space.hpp"
#include "btq/spectral.hpp"
#include "btq/toeplitz.hpp"

namespace btq {

namespace {

// Seeded generator with explicit transforms, so streams are identical on
// every platform (no distribution objects).
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(unsigned long long seed) : eng(seed) {}
  double u() { return double(eng() >> 11) * 0x1.0p-53; }
  double u(double a, double b) { return a + (b - a) * u(); }
  cplx disc_point(double R) {
    const double r = R * std::sqrt(u());
    const double th = 2.0 * kPi * u();
    return {r * std::cos(th), r * std::sin(th)};
  }
};

Geometry geom_from(const GeometrySpec& gs, double shift) {
  Geometry g = Geometry::bargmann(1.0);
  if (gs.name == "bargmann")
    g = Geometry::bargmann(gs.param);
  else if (gs.name == "fubini_study")
    g = Geometry::fubini_study();
  else if (gs.name == "poincare_disc")
    g = Geometry::poincare_disc(gs.param);
  else
    throw ConfigError("config: unknown geometry name '" + gs.name + "'");
  g.kappa_shift = shift;
  return g;
}

std::vector<Geometry> target_geoms(const RunConfig& cfg) {
  if (cfg.geometry.specified) return {geom_from(cfg.geometry, cfg.kappa_shift)};
  Geometry b = Geometry::bargmann(1.0);
  Geometry f = Geometry::fubini_study();
  Geometry d = Geometry::poincare_disc(2.0);
  b.kappa_shift = f.kappa_shift = d.kappa_shift = cfg.kappa_shift;
  return {b, f, d};
}

int geom_index(const Geometry& g) { return static_cast<int>(g.kind()); }

std::vector<int> plist(const RunConfig& cfg, std::initializer_list<int> def) {
  if (!cfg.p_list.empty()) return cfg.p_list;
  return def;
}

BuildOptions opts_from(const RunConfig& cfg) {
  BuildOptions o;
  o.n_radial = cfg.n_radial;
  o.n_angular = cfg.n_angular;
  o.tol = cfg.tol;
  return o;
}

// Truncation large enough for the frozen check configurations; the round
// sphere is always the full space.
int frozen_N(const Geometry& g, int p, double scale, int add) {
  if (g.kind() == Geometry::Kind::fubini_study) return p + 1;
  return static_cast<int>(std::ceil(scale * p)) + add;
}

void add_support_kinks(BuildOptions& o, double R, cplx c, const Geometry& g) {
  const double lo = std::abs(c) - R, hi = std::abs(c) + R;
  if (lo > 1e-9) o.kinks_t.push_back(lo * lo);
  if (hi < g.chart_radius()) o.kinks_t.push_back(hi * hi);
}

double closed_lognu(const Geometry& g, int p, int k) {
  double v = 0.0;
  switch (g.kind()) {
    case Geometry::Kind::bargmann:
      v = k * std::log(2.0 / (p * g.param())) + std::lgamma(k + 1.0) - std::log(double(p));
      break;
    case Geometry::Kind::fubini_study:
      v = std::lgamma(k + 1.0) + std::lgamma(p - k + 1.0) - std::lgamma(p + 2.0);
      break;
    case Geometry::Kind::poincare_disc: {
      const double ps = p * g.param();
      v = std::log(g.param()) + std::lgamma(k + 1.0) + std::lgamma(ps - 1.0) -
          std::lgamma(k + ps);
      break;
    }
  }
  return v - p * g.kappa_shift;
}

cplx closed_kernel(const Geometry& g, int p, cplx x, cplx y) {
  const double tx = std::norm(x), ty = std::norm(y);
  const cplx xyb = x * std::conj(y);
  switch (g.kind()) {
    case Geometry::Kind::bargmann: {
      const double pa = p * g.param();
      return double(p) * std::exp(-pa / 4.0 * (tx + ty) + pa / 2.0 * xyb);
    }
    case Geometry::Kind::fubini_study:
      return double(p + 1) * std::pow(cplx(1.0) + xyb, double(p)) *
             std::pow(1.0 + tx, -p / 2.0) * std::pow(1.0 + ty, -p / 2.0);
    case Geometry::Kind::poincare_disc: {
      const double ps = p * g.param();
      return (ps - 1.0) / g.param() * std::pow(cplx(1.0) - xyb, -ps) *
             std::pow(1.0 - tx, ps / 2.0) * std::pow(1.0 - ty, ps / 2.0);
    }
  }
  return 0.0;
}

std::vector<cplx> chart_probes(const RunConfig& cfg, const Geometry& g) {
  std::vector<cplx> probes = cfg.probes;
  if (probes.empty()) probes = {cplx(0.3, 0.0), cplx(0.45, 0.3)};
  std::vector<cplx> out;
  for (cplx x : probes)
    if (g.in_chart(x)) out.push_back(x);
  if (out.empty()) throw ConfigError("config: no probe point lies in the chart");
  return out;
}

Symbol symbol_for(const RunConfig& cfg, const std::string& check, const Symbol& def) {
  auto it = cfg.symbols.find(check);
  return it == cfg.symbols.end() ? def : it->second.make();
}

// ---------------------------------------------------------------- space ---

CheckRecord check_space(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "space";
  rec.csv_header = {"geometry", "p", "N", "d", "semigroup", "reproduce", "area_err", "gauge_err"};
  Rng rng(cfg.seed);
  for (const Geometry& geom : target_geoms(cfg)) {
    const int p = plist(cfg, {16}).front();
    const int N = cfg.truncation > 0 ? cfg.truncation : frozen_N(geom, p, 1.0, 32);
    BuildOptions o = opts_from(cfg);
    o.truncation_gate = true;
    o.gate_probes = cfg.probes;
    QuantumSpace sp = build_space(geom, p, N, o);
    const std::string tag = geom.name() + " ";
    if (auto fd = geom.finite_dim(p))
      rec.require(tag + "finite dimension", sp.d == *fd, sp.d, "closed-form");

    const auto probes = chart_probes(cfg, geom);
    const double scale = sp.kernel_diag(probes.front());
    const double semi = sp.semigroup_residual(probes.front(), probes.back());
    rec.require(tag + "projection semigroup", semi <= cfg.tol.semigroup * scale, semi);

    Eigen::VectorXcd coeffs(sp.d);
    for (int k = 0; k < sp.d; ++k) coeffs(k) = cplx(rng.u(-1, 1), rng.u(-1, 1));
    coeffs /= coeffs.norm();
    const double rep = sp.reproduce_residual(coeffs, probes);
    rec.require(tag + "reproducing identity",
                rep <= cfg.tol.reproduce_residual * std::sqrt(scale), rep);

    // omega-area: full chart for the sphere, a closed-form ball otherwise.
    double area = 0.0, area_ref = 0.0;
    if (geom.kind() == Geometry::Kind::fubini_study) {
      KahanSum acc;
      for (int i = 0; i < sp.radial_count(); ++i) acc.add(kPi * sp.w[i] * sp.dens[i]);
      area = acc.value();
      area_ref = 1.0;
    } else {
      const double R = geom.kind() == Geometry::Kind::bargmann ? 1.3 : 0.6;
      BuildOptions ao = opts_from(cfg);
      ao.kinks_t.push_back(R * R);
      ao.generic_cross_check = false;
      ao.quadrature_gate = false;
      QuantumSpace spa = build_space(geom, p, 8, ao);
      KahanSum acc;
      for (int i = 0; i < spa.radial_count(); ++i)
        if (spa.t[i] < R * R) acc.add(kPi * spa.w[i] * spa.dens[i]);
      area = acc.value();
      area_ref = geom.kind() == Geometry::Kind::bargmann
                     ? geom.param() * R * R / 2.0
                     : geom.param() * R * R / (1.0 - R * R);
    }
    rec.compare(tag + "omega-area", area, area_ref, 1e-8);

    // Gauge invariance: the kernel diagonal must not see a potential shift.
    double gauge_err = 0.0;
    {
      Geometry gs = geom;
      gs.kappa_shift = geom.kappa_shift + 0.7;
      BuildOptions go = opts_from(cfg);
      go.generic_cross_check = false;
      const int Ng = frozen_N(geom, 8, 1.0, 24);
      QuantumSpace a = build_space(geom, 8, Ng, go);
      QuantumSpace b = build_space(gs, 8, Ng, go);
      const cplx x = probes.front();
      gauge_err = std::abs(a.kernel_diag(x) - b.kernel_diag(x)) / a.kernel_diag(x);
      rec.require(tag + "gauge invariance", gauge_err <= 1e-9, gauge_err);
    }
    rec.row({double(geom_index(geom)), double(p), double(N), double(sp.d), semi, rep,
             std::abs(area - area_ref), gauge_err});
  }
  return rec;
}

// -------------------------------------------------------------- bergman ---

CheckRecord check_bergman(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "bergman";
  rec.csv_header = {"geometry", "p", "kernel_rel_err", "norm_rel_err"};
  Rng rng(cfg.seed);
  for (const Geometry& geom : target_geoms(cfg)) {
    const double Rr = geom.kind() == Geometry::Kind::bargmann
                          ? 1.0
                          : (geom.kind() == Geometry::Kind::fubini_study ? 1.5 : 0.5);
    for (int p : plist(cfg, {4, 16, 64})) {
      const int N = frozen_N(geom, p, 1.0, 60);
      QuantumSpace sp = build_space(geom, p, N, opts_from(cfg));
      double nerr = 0.0;
      for (int k = 0; k < sp.d; ++k)
        nerr = std::max(nerr, std::abs(std::expm1(sp.lognu[k] - closed_lognu(geom, p, k))));
      double kerr = 0.0;
      for (int i = 0; i < 25; ++i) {
        const cplx x = rng.disc_point(Rr), y = rng.disc_point(Rr);
        const cplx K = sp.bergman_kernel(x, y);
        const cplx Kc = closed_kernel(geom, p, x, y);
        // Cauchy-Schwarz scale: |P(x,y)| <= sqrt(P(x,x) P(y,y)). Dividing by
        // |Kc| instead is ill-conditioned near the zeros of the off-diagonal
        // kernel (e.g. near-antipodal points on the sphere).
        const double cs = std::sqrt(std::abs(closed_kernel(geom, p, x, x)) *
                                    std::abs(closed_kernel(geom, p, y, y)));
        kerr = std::max(kerr, std::abs(K - Kc) / cs);
      }
      const std::string tag = geom.name() + " p=" + std::to_string(p) + " ";
      rec.require(tag + "basis norms vs closed form", nerr <= cfg.tol.onb_norm_rel, nerr,
                  "closed-form");
      rec.require(tag + "kernel vs closed form", kerr <= cfg.tol.model_kernel_rel, kerr,
                  "closed-form");
      rec.row({double(geom_index(geom)), double(p), kerr, nerr});
    }
  }
  return rec;
}

// ------------------------------------------------------------ expansion ---

CheckRecord check_expansion(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "expansion";
  rec.csv_header = {"geometry", "p", "diag_over_p"};
  const cplx x = cfg.probes.empty() ? cplx(0.3, 0.0) : cfg.probes.front();
  for (const Geometry& geom : target_geoms(cfg)) {
    if (!geom.in_chart(x)) throw ConfigError("expansion: probe outside the chart");
    std::vector<std::pair<int, cplx>> values;
    for (int p : plist(cfg, {8, 16, 32, 64})) {
      QuantumSpace sp = build_space(geom, p, frozen_N(geom, p, 0.5, 40), opts_from(cfg));
      const cplx v = sp.kernel_diag(x) / double(p);
      values.push_back({p, v});
      rec.row({double(geom_index(geom)), double(p), v.real()});
    }
    ExpansionReport er = expansion_fit(values, 2);
    const std::string tag = geom.name() + " ";
    rec.compare(tag + "leading coefficient b0", er.coefficients[0].real(), 1.0, 1e-3);
    if (er.slope_vacuous)
      rec.require(tag + "remainder at rounding level (flat kernel is exact)", true, 0.0,
                  "closed-form");
    else
      rec.compare(tag + "remainder log-log slope", er.slope, -1.0, 0.15,
                  "self-consistency-slope");
    if (geom.kind() != Geometry::Kind::bargmann) {
      const double b1_ref = geom.scalar_curvature(x) / (8.0 * kPi);
      rec.compare(tag + "b1 vs curvature/8pi", er.coefficients[1].real(), b1_ref,
                  0.05 * std::abs(b1_ref), "calibration");
    }
  }
  return rec;
}

// ---------------------------------------------------------------- decay ---

CheckRecord check_decay(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "decay";
  rec.csv_header = {"geometry", "pair", "p", "scaled_distance", "log_kernel", "log_toeplitz"};
  for (const Geometry& geom : target_geoms(cfg)) {
    std::vector<std::pair<cplx, cplx>> pairs;
    Symbol f = symbols::constant(1.0);
    double nscale = 0.7;
    int nadd = 48;
    switch (geom.kind()) {
      case Geometry::Kind::bargmann:
        pairs = {{cplx(0.1, 0), cplx(0.7, 0)}, {cplx(0, 0.2), cplx(-0.5, 0)}};
        f = symbols::bump(1.2, 0.0);
        break;
      case Geometry::Kind::fubini_study:
        pairs = {{cplx(0.1, 0), cplx(0.8, 0)}, {cplx(0.3, 0), cplx(-0.4, 0)}};
        f = symbols::bump(1.0, 0.0);
        break;
      case Geometry::Kind::poincare_disc:
        pairs = {{cplx(0.1, 0), cplx(0.45, 0)}, {cplx(0, 0.2), cplx(-0.4, 0)}};
        f = symbols::bump(0.7, 0.0);
        nscale = 1.35;
        break;
    }
    std::vector<std::vector<std::pair<double, double>>> ptsP(pairs.size()), ptsT(pairs.size());
    double kerr = 0.0;
    for (int p : plist(cfg, {8, 16, 32, 64})) {
      BuildOptions o = opts_from(cfg);
      add_support_kinks(o, *f.support_radius, 0.0, geom);
      QuantumSpace sp = build_space(geom, p, frozen_N(geom, p, nscale, nadd), o);
      OperatorMatrix Tf = assemble_toeplitz(sp, f, AssemblyMode::parallel, cfg.tol);
      for (size_t k = 0; k < pairs.size(); ++k) {
        const auto [x, y] = pairs[k];
        const double s = std::sqrt(double(p)) * geom.distance(x, y);
        const cplx K = sp.bergman_kernel(x, y);
        const cplx T = toeplitz_kernel(sp, Tf.M, x, y);
        ptsP[k].push_back({s, std::log(std::abs(K) / p)});
        ptsT[k].push_back({s, std::log(std::abs(T) / p)});
        if (geom.kind() == Geometry::Kind::bargmann) {
          const cplx Kc = closed_kernel(geom, p, x, y);
          kerr = std::max(kerr, std::abs(K - Kc) / std::abs(Kc));
        }
        rec.row({double(geom_index(geom)), double(k), double(p), s, std::log(std::abs(K) / p),
                 std::log(std::abs(T) / p)});
      }
    }
    for (size_t k = 0; k < pairs.size(); ++k) {
      const double cP = -decay_slope(ptsP[k]).first;
      const double cT = -decay_slope(ptsT[k]).first;
      const std::string tag = geom.name() + " pair " + std::to_string(k) + " ";
      rec.require(tag + "kernel decay rate positive", cP > 0.0, cP);
      rec.require(tag + "Toeplitz decay rate positive", cT > 0.0, cT);
    }
    if (geom.kind() == Geometry::Kind::bargmann)
      rec.require("bargmann log-kernel vs Gaussian exponent", kerr <= cfg.tol.model_kernel_rel,
                  kerr, "closed-form");
  }
  return rec;
}

// -------------------------------------------------------- near-diagonal ---

CheckRecord check_near_diagonal(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "near-diagonal";
  rec.csv_header = {"geometry", "p", "residual"};
  const std::vector<std::pair<cplx, cplx>> grid = {{cplx(0.2, 0), cplx(0.1, 0)},
                                                   {cplx(0.5, 0.3), cplx(0.4, -0.2)},
                                                   {cplx(0.8, 0), cplx(0, 0.6)},
                                                   {cplx(0, 0), cplx(0, 0)}};
  Geometry gb = Geometry::bargmann(1.0);
  Geometry gf = Geometry::fubini_study();
  gb.kappa_shift = gf.kappa_shift = cfg.kappa_shift;
  for (const Geometry& geom : {gb, gf}) {
    std::vector<double> residuals;
    for (int p : plist(cfg, {16, 32, 64})) {
      BuildOptions o = opts_from(cfg);
      o.lebesgue_volume = true;
      QuantumSpace sp = build_space(geom, p, frozen_N(geom, p, 0.25, 32), o);
      const double a_model = 2.0 * (geom.kind() == Geometry::Kind::bargmann ? geom.param() / 2.0
                                                                            : 1.0);
      const double res = near_diagonal_residual(sp, ModelWeights({a_model}), grid);
      residuals.push_back(res);
      rec.row({double(geom_index(geom)), double(p), res});
    }
    if (geom.kind() == Geometry::Kind::bargmann) {
      for (double r : residuals)
        rec.require("bargmann rescaled kernel equals flat model", r <= 1e-9, r, "closed-form");
    } else {
      for (size_t i = 1; i < residuals.size(); ++i) {
        const double ratio = residuals[i - 1] / residuals[i];
        rec.require("fubini_study residual halves per doubling", ratio >= 1.6 && ratio <= 2.6,
                    ratio);
      }
    }
  }
  return rec;
}

// ------------------------------------------------------------- toeplitz ---

CheckRecord check_toeplitz(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "toeplitz";
  rec.csv_header = {"p", "algebra1_err", "algebra2_err", "closed_form_err", "serial_err",
                    "direct2d_err"};
  const double a = (cfg.geometry.specified && cfg.geometry.name == "bargmann")
                       ? cfg.geometry.param
                       : 1.0;
  Geometry geom = Geometry::bargmann(a);
  geom.kappa_shift = cfg.kappa_shift;
  const Symbol z = symbols::monomial(1, 0), zb = symbols::monomial(0, 1),
               zzb = symbols::monomial(1, 1);
  for (int p : plist(cfg, {4, 16, 64})) {
    const int N = p + 40;
    QuantumSpace sp = build_space(geom, p, N, opts_from(cfg));
    OperatorMatrix Tz = assemble_toeplitz(sp, z, AssemblyMode::parallel, cfg.tol);
    OperatorMatrix Tzb = assemble_toeplitz(sp, zb, AssemblyMode::parallel, cfg.tol);
    OperatorMatrix Tzzb = assemble_toeplitz(sp, zzb, AssemblyMode::parallel, cfg.tol);
    const double scale = std::max(1.0, Tzzb.M.cwiseAbs().maxCoeff());
    const std::string tag = "p=" + std::to_string(p) + " ";

    // Terminating algebra of the solvable model.
    const int d = sp.d;
    const double e1 =
        (Tzb.M * Tz.M - Tzzb.M).topLeftCorner(d - 1, d - 1).cwiseAbs().maxCoeff();
    const double e2 = (Tz.M * Tzb.M - Tzzb.M +
                       (2.0 / (p * a)) * Eigen::MatrixXcd::Identity(d, d))
                          .cwiseAbs()
                          .maxCoeff();
    rec.require(tag + "T_zb T_z = T_{zb z}", e1 <= cfg.tol.model_algebra * scale, e1,
                "closed-form");
    rec.require(tag + "T_z T_zb = T_{z zb} - (2/pa) Id", e2 <= cfg.tol.model_algebra * scale, e2,
                "closed-form");

    // Quadrature assembly against the Gamma-function closed form.
    double cerr = 0.0;
    cerr = std::max(cerr, (Tz.M - bargmann_monomial_toeplitz(p, a, d, 1, 0)).cwiseAbs().maxCoeff());
    cerr =
        std::max(cerr, (Tzzb.M - bargmann_monomial_toeplitz(p, a, d, 1, 1)).cwiseAbs().maxCoeff());
    rec.require(tag + "entries vs closed form", cerr <= cfg.tol.model_algebra * scale, cerr,
                "closed-form");

    // Serial reference path must agree bit-for-bit with the parallel one.
    OperatorMatrix Ts = assemble_toeplitz(sp, zzb, AssemblyMode::serial, cfg.tol);
    const double serr = (Ts.M - Tzzb.M).cwiseAbs().maxCoeff();
    rec.require(tag + "serial/parallel bitwise identical", serr == 0.0, serr);

    double derr = 0.0;
    if (p <= 4) {
      OperatorMatrix Td = assemble_toeplitz(sp, zzb, AssemblyMode::direct2d, cfg.tol);
      derr = (Td.M - Tzzb.M).cwiseAbs().maxCoeff();
      rec.require(tag + "direct 2-D oracle agreement", derr <= 1e-10 * scale, derr);
    }
    rec.row({double(p), e1, e2, cerr, serr, derr});
  }
  return rec;
}

// ---------------------------------------------------- product symbols -----

struct SymPair {
  Symbol f, g;
  std::vector<std::pair<double, cplx>> bumps;  // (R, center) for rule kinks
};

std::vector<SymPair> defect_pairs(const Geometry& geom) {
  switch (geom.kind()) {
    case Geometry::Kind::bargmann:
      return {{symbols::bump(1.6, cplx(0.4, 0)), symbols::bump(1.6, cplx(0, 0.4)),
               {{1.6, cplx(0.4, 0)}, {1.6, cplx(0, 0.4)}}},
              {symbols::bump(1.5, cplx(0, 0)), symbols::bump(1.6, cplx(0.5, 0)),
               {{1.5, cplx(0, 0)}, {1.6, cplx(0.5, 0)}}}};
    case Geometry::Kind::fubini_study:
      return {{symbols::gaussian(cplx(0.35, 0), 0.9), symbols::gaussian(cplx(0, 0.35), 0.9), {}},
              {symbols::gaussian(cplx(0, 0), 0.8), symbols::gaussian(cplx(0.5, 0), 0.9), {}}};
    case Geometry::Kind::poincare_disc:
      return {{symbols::bump(0.6, cplx(0.15, 0)), symbols::bump(0.6, cplx(0, 0.15)),
               {{0.6, cplx(0.15, 0)}, {0.6, cplx(0, 0.15)}}},
              {symbols::bump(0.55, cplx(0, 0)), symbols::bump(0.6, cplx(0.2, 0)),
               {{0.55, cplx(0, 0)}, {0.6, cplx(0.2, 0)}}}};
  }
  return {};
}

std::vector<QuantumSpace> defect_spaces(const RunConfig& cfg, const Geometry& geom,
                                        const SymPair& pr, const std::vector<int>& ps) {
  const double scale = geom.kind() == Geometry::Kind::poincare_disc ? 4.2 : 2.5;
  const int add = geom.kind() == Geometry::Kind::poincare_disc ? 40 : 32;
  std::vector<QuantumSpace> spaces;
  for (int p : ps) {
    BuildOptions o = opts_from(cfg);
    for (const auto& [R, c] : pr.bumps) add_support_kinks(o, R, c, geom);
    spaces.push_back(build_space(geom, p, frozen_N(geom, p, scale, add), o));
  }
  return spaces;
}

CheckRecord check_product(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "product";
  rec.csv_header = {"geometry", "pair", "p", "e0", "e1"};
  const auto ps = plist(cfg, {16, 32, 64, 128});
  for (const Geometry& geom : target_geoms(cfg)) {
    const auto prs = defect_pairs(geom);
    for (size_t k = 0; k < prs.size(); ++k) {
      auto spaces = defect_spaces(cfg, geom, prs[k], ps);
      std::vector<const QuantumSpace*> sv;
      for (auto& s : spaces) sv.push_back(&s);
      const auto rows = product_defect(sv, prs[k].f, prs[k].g);
      double lo0 = 1e300, hi0 = 0, lo1 = 1e300, hi1 = 0;
      for (const auto& r : rows) {
        rec.row({double(geom_index(geom)), double(k), double(r.p), r.e0, r.e1});
        lo0 = std::min(lo0, r.e0 * r.p);
        hi0 = std::max(hi0, r.e0 * r.p);
        lo1 = std::min(lo1, r.e1 * r.p * r.p);
        hi1 = std::max(hi1, r.e1 * r.p * r.p);
      }
      const std::string tag = geom.name() + " pair " + std::to_string(k) + " ";
      rec.require(tag + "e0 scales like 1/p", hi0 / lo0 < 2.0, hi0 / lo0);
      rec.require(tag + "e1 scales like 1/p^2", hi1 / lo1 < 2.0, hi1 / lo1);
    }
  }
  return rec;
}

CheckRecord check_commutator(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "commutator";
  rec.csv_header = {"geometry", "pair", "p", "defect"};
  const auto ps = plist(cfg, {16, 32, 64, 128});
  for (const Geometry& geom : target_geoms(cfg)) {
    const auto prs = defect_pairs(geom);
    for (size_t k = 0; k < prs.size(); ++k) {
      auto spaces = defect_spaces(cfg, geom, prs[k], ps);
      std::vector<const QuantumSpace*> sv;
      for (auto& s : spaces) sv.push_back(&s);
      const auto rows = commutator_defect(sv, prs[k].f, prs[k].g);
      for (const auto& r : rows)
        rec.row({double(geom_index(geom)), double(k), double(r.p), r.defect});
      const std::string tag = geom.name() + " pair " + std::to_string(k) + " ";
      for (size_t i = 1; i < rows.size(); ++i) {
        const double ratio = rows[i - 1].defect / rows[i].defect;
        rec.require(tag + "defect halves per doubling", ratio >= 1.4 && ratio <= 2.8, ratio);
      }
    }
  }
  return rec;
}

// ----------------------------------------------------------------- norm ---

CheckRecord check_norm(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "norm";
  rec.csv_header = {"p", "norm", "gap", "gap_sqrt_p"};
  const double a = (cfg.geometry.specified && cfg.geometry.name == "bargmann")
                       ? cfg.geometry.param
                       : 1.0;
  Geometry geom = Geometry::bargmann(a);
  geom.kappa_shift = cfg.kappa_shift;
  const Symbol f = symbol_for(cfg, "norm", symbols::cone_bump(1.5, 0.0));
  std::vector<QuantumSpace> spaces;
  for (int p : plist(cfg, {16, 32, 64, 128, 256})) {
    BuildOptions o = opts_from(cfg);
    if (f.support_radius) add_support_kinks(o, *f.support_radius, 0.0, geom);
    spaces.push_back(build_space(geom, p, frozen_N(geom, p, 1.125, 32), o));
  }
  std::vector<const QuantumSpace*> sv;
  for (auto& s : spaces) sv.push_back(&s);
  const auto rows = norm_convergence(sv, f);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : rows) {
    const double gs = r.gap * std::sqrt(double(r.p));
    rec.row({double(r.p), r.norm, r.gap, gs});
    rec.require("p=" + std::to_string(r.p) + " norm below sup|f|",
                r.gap >= -cfg.tol.norm_upper_slack, r.gap);
    lo = std::min(lo, gs);
    hi = std::max(hi, gs);
  }
  rec.require("gap * sqrt(p) bounded (max/min < 3)", hi / lo < 3.0, hi / lo);
  return rec;
}

// ----------------------------------------------------------------- star ---

CheckRecord check_star(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "star";
  rec.csv_header = {"g0", "g1", "g2", "res0", "res1", "res2"};
  const double a = (cfg.geometry.specified && cfg.geometry.name == "bargmann")
                       ? cfg.geometry.param
                       : 1.0;
  Geometry geom = Geometry::bargmann(a);
  geom.kappa_shift = cfg.kappa_shift;
  const Symbol f = symbols::monomial(2, 0), g = symbols::monomial(0, 2);
  const cplx x(0.7, 0.0);
  std::vector<QuantumSpace> spaces;
  for (int p : plist(cfg, {16, 32, 64, 128}))
    spaces.push_back(build_space(geom, p, frozen_N(geom, p, 0.5, 48), opts_from(cfg)));
  std::vector<const QuantumSpace*> sv;
  for (auto& s : spaces) sv.push_back(&s);

  StarCoefficients sc = star_coefficient_extract(sv, f, g, x, 2);
  const double t = std::norm(x);
  const double g0_ref = t * t;
  const double g1_ref = c1_coefficient(geom, f, g, x).real();
  const double g2_ref = c2_coefficient(geom, f, g, x).real();
  rec.compare("C0 = f g", sc.g0.real(), g0_ref, 0.005 * std::abs(g0_ref));
  rec.compare("C1 coefficient", sc.g1.real(), g1_ref, 0.02 * std::abs(g1_ref), "calibration");
  rec.compare("C2 coefficient", sc.g2.real(), g2_ref, 0.05 * std::abs(g2_ref), "calibration");
  rec.require("extraction residuals small", !sc.low_confidence,
              sc.res0 + sc.res1 + sc.res2);

  StarCoefficients scr = star_coefficient_extract(sv, g, f, x, 1);
  const cplx anti = sc.g1 - scr.g1;
  const cplx anti_ref = cplx(0, 1) * poisson_bracket(geom, f, g, x);
  rec.compare("C1 antisymmetry = i{f,g}", std::abs(anti - anti_ref), 0.0,
              0.02 * std::abs(anti_ref));
  rec.row({sc.g0.real(), sc.g1.real(), sc.g2.real(), sc.res0, sc.res1, sc.res2});
  return rec;
}

// -------------------------------------------------------- associativity ---

PolyKernel random_poly(Rng& rng, int parity) {  // parity: -1 any, 0 even, 1 odd
  PolyKernel P(1);
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; a + b <= 2; ++b)
      for (int g = 0; a + b + g <= 2; ++g)
        for (int dd = 0; a + b + g + dd <= 2; ++dd) {
          const int tot = a + b + g + dd;
          if (parity >= 0 && tot % 2 != parity) continue;
          P.add({a, b, g, dd}, cplx(rng.u(-1, 1), rng.u(-1, 1)));
        }
  return P;
}

cplx eval_dressed(const ModelWeights& w, const PolyKernel& F, cplx Z, cplx Zp) {
  return F.eval({Z}, {Zp}) * model_kernel(w, {Z}, {Zp});
}

CheckRecord check_associativity(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "associativity";
  rec.csv_header = {"case", "order", "residual"};
  Rng rng(cfg.seed + 17);
  const ModelWeights w({rng.u(0.8, 1.6)});
  const PolyKernel F = random_poly(rng, -1), G = random_poly(rng, -1), H = random_poly(rng, -1);

  // Moment engine vs an independent 2-D quadrature composition.
  const double radius = 1.2 + std::sqrt(90.0 / w.a[0]);
  QuadratureRule rule = radial_angular_rule(200, 256, radius);
  const PolyKernel K = kernel_compose(w, F, G);
  double qerr = 0.0;
  for (int i = 0; i < 10; ++i) {
    const cplx Z = rng.disc_point(1.2), Zp = rng.disc_point(1.2);
    KahanCSum acc;
    for (size_t j = 0; j < rule.nodes.size(); ++j)
      acc.add(rule.weights[j] * eval_dressed(w, F, Z, rule.nodes[j]) *
              eval_dressed(w, G, rule.nodes[j], Zp));
    const cplx ref = eval_dressed(w, K, Z, Zp);
    qerr = std::max(qerr, std::abs(acc.value() - ref) / std::max(1.0, std::abs(ref)));
  }
  rec.require("composition vs 2-D quadrature", qerr <= cfg.tol.compose_oracle, qerr);
  rec.row({0.0, 0.0, qerr});

  // Associativity of the kernel calculus.
  const PolyKernel A1 = kernel_compose(w, K, H);
  const PolyKernel A2 = kernel_compose(w, F, kernel_compose(w, G, H));
  double aerr = 0.0;
  for (int i = 0; i < 5; ++i) {
    const cplx Z = rng.disc_point(1.2), Zp = rng.disc_point(1.2);
    const cplx v1 = eval_dressed(w, A1, Z, Zp), v2 = eval_dressed(w, A2, Z, Zp);
    aerr = std::max(aerr, std::abs(v1 - v2) / std::max(1.0, std::abs(v1)));
  }
  rec.require("kernel composition associative", aerr <= cfg.tol.compose_assoc, aerr);
  rec.row({1.0, 0.0, aerr});

  // Parity conservation: composing kernels of definite parity keeps parity.
  const PolyKernel Fe = random_poly(rng, 0), Go = random_poly(rng, 1);
  const PolyKernel Kp = kernel_compose(w, Fe, Go);
  bool parity_ok = true;
  for (const auto& [key, coef] : Kp.coefficients()) {
    int tot = 0;
    for (int e : key) tot += e;
    if (tot % 2 != 1 && std::abs(coef) > 1e-14) parity_ok = false;
  }
  rec.require("parity conserved under composition", parity_ok);

  // Star-product associativity order by order at a probe point.
  Geometry gb = Geometry::bargmann(1.0);
  Geometry gf = Geometry::fubini_study();
  gb.kappa_shift = gf.kappa_shift = cfg.kappa_shift;
  const Symbol sf = symbols::bump(1.5, cplx(0, 0), 4);
  const Symbol sg = symbols::bump(1.4, cplx(0.2, 0), 4);
  const Symbol sh = symbols::bump(1.3, cplx(-0.1, 0), 4);
  const cplx x(0.1, 0.05);
  int cs = 2;
  for (const Geometry& geom : {gb, gf}) {
    for (int k = 0; k <= 2; ++k) {
      const double r = star_associativity_check(geom, sf, sg, sh, x, k);
      const double tol = k == 0 ? 1e-14 : (k == 1 ? 1e-10 : 2e-5);
      rec.require(geom.name() + " star associativity order " + std::to_string(k), r <= tol, r);
      rec.row({double(cs), double(k), r});
    }
    ++cs;
  }
  return rec;
}

// -------------------------------------------------------------- berezin ---

CheckRecord check_berezin(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "berezin";
  rec.csv_header = {"probe", "x_re", "x_im", "unital_err", "transform_value"};
  const double a = (cfg.geometry.specified && cfg.geometry.name == "bargmann")
                       ? cfg.geometry.param
                       : 1.0;
  Geometry geom = Geometry::bargmann(a);
  geom.kappa_shift = cfg.kappa_shift;
  const int p = plist(cfg, {128}).back();
  const Symbol fb = symbol_for(cfg, "berezin", symbols::bump(1.2, cplx(0.3, 0)));
  BuildOptions o = opts_from(cfg);
  if (fb.support_radius) add_support_kinks(o, *fb.support_radius, 0.0, geom);
  QuantumSpace sp = build_space(geom, p, frozen_N(geom, p, 0.5, 48), o);

  const std::vector<cplx> probes = {cplx(0, 0), cplx(0.4, 0.2)};
  OperatorMatrix T1 = assemble_toeplitz(sp, symbols::constant(1.0), AssemblyMode::parallel,
                                        cfg.tol);
  int pi = 0;
  for (cplx x : probes) {
    const double uerr = std::abs(berezin_transform(sp, T1, x) - 1.0);
    rec.require("unital at probe " + std::to_string(pi), uerr <= cfg.tol.berezin_unital, uerr);
    rec.row({double(pi), x.real(), x.imag(), uerr, 1.0});
    ++pi;
  }

  OperatorMatrix Tf = assemble_toeplitz(sp, fb, AssemblyMode::parallel, cfg.tol);
  positive_spectrum(Tf, 0.0, fb.sup_norm, cfg.tol);  // throws if positivity fails
  double bmin = 0.0;
  for (cplx x : probes) bmin = std::min(bmin, berezin_transform(sp, Tf, x).real());
  rec.require("positivity preserved", bmin >= -1e-12, bmin);

  const Symbol gsym = symbols::gaussian(cplx(0, 0), 1.0);
  OperatorMatrix Tg = assemble_toeplitz(sp, gsym, AssemblyMode::parallel, cfg.tol);
  const cplx x0(0, 0);
  const double measured = (double(p) * (berezin_transform(sp, Tg, x0) - gsym.f(x0))).real();
  const double ref = -laplace_beltrami(geom, gsym, x0).real() / (4.0 * kPi);
  rec.compare("p (B_p f - f) vs -Laplacian f / 4 pi", measured, ref, 0.02 * std::abs(ref),
              "calibration");
  return rec;
}

// ------------------------------------------------------------- coherent ---

CheckRecord check_coherent(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "coherent";
  rec.csv_header = {"point", "x_re", "x_im", "norm_rel_err"};
  const double a = (cfg.geometry.specified && cfg.geometry.name == "bargmann")
                       ? cfg.geometry.param
                       : 1.0;
  Geometry geom = Geometry::bargmann(a);
  geom.kappa_shift = cfg.kappa_shift;
  const int p = plist(cfg, {16}).front();
  const Symbol f = symbols::bump(1.2, cplx(0.3, 0));
  BuildOptions o = opts_from(cfg);
  add_support_kinks(o, 1.2, cplx(0.3, 0), geom);
  QuantumSpace sp = build_space(geom, p, 48, o);

  Rng rng(cfg.seed + 5);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const cplx x = rng.disc_point(0.8);
    CoherentVector s = coherent_state(sp, x);
    // ||s_x||^2 recomputed through the full 2-D quadrature of |s_x|^2.
    const double res = sp.semigroup_residual(x, x) / s.norm2;
    worst = std::max(worst, res);
    rec.row({double(i), x.real(), x.imag(), res});
  }
  rec.require("coherent norms match the kernel diagonal", worst <= cfg.tol.coherent_norm_rel,
              worst);

  BuildOptions fo = o;
  fo.n_radial = std::max(2 * cfg.n_radial, 300);
  fo.n_angular = 1024;
  fo.generic_cross_check = false;
  QuantumSpace fine = build_space(geom, p, 48, fo);
  OperatorMatrix R = coherent_reconstruction(sp, fine, f);
  OperatorMatrix T = assemble_toeplitz(sp, f, AssemblyMode::parallel, cfg.tol);
  const double rerr = (R.M - T.M).cwiseAbs().maxCoeff();
  rec.require("coherent-projector reconstruction matches assembly",
              rerr <= cfg.tol.coherent_reconstruction, rerr);
  return rec;
}

// ---------------------------------------------------------------- szego ---

CheckRecord check_szego(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "szego";
  rec.csv_header = {"p", "lambda", "count", "count_over_p", "area", "rel_err"};
  const double a = (cfg.geometry.specified && cfg.geometry.name == "bargmann")
                       ? cfg.geometry.param
                       : 1.0;
  Geometry geom = Geometry::bargmann(a);
  geom.kappa_shift = cfg.kappa_shift;
  SymbolSpec def;
  def.kind = "bump";
  def.R = 2.2;
  def.q = 3;
  def.c = cplx(0, 0);
  auto it = cfg.symbols.find("szego");
  const SymbolSpec spec = it == cfg.symbols.end() ? def : it->second;
  const Symbol f = spec.make();
  if (!f.bounded || !f.is_real)
    throw ConfigError("szego: symbol must be real with finite sup norm");
  const std::vector<double> lambdas = {0.25 * f.sup_norm, 0.5 * f.sup_norm, 0.75 * f.sup_norm};
  const bool closed = spec.kind == "bump" && std::abs(spec.c) == 0.0;

  std::vector<double> errmax;
  std::vector<int> pl = plist(cfg, {32, 64, 128, 256});
  for (int p : pl) {
    BuildOptions o = opts_from(cfg);
    if (f.support_radius) add_support_kinks(o, *f.support_radius, 0.0, geom);
    QuantumSpace sp = build_space(geom, p, frozen_N(geom, p, 3.5, 40), o);
    OperatorMatrix Tf = assemble_toeplitz(sp, f, AssemblyMode::parallel, cfg.tol);
    SpectralMeasure sm = positive_spectrum(Tf, cfg.tol.zero_eigen_rel * f.sup_norm, f.sup_norm,
                                           cfg.tol);
    double emax = 0.0;
    for (double lam : lambdas) {
      const double area = closed ? bump_superlevel_area(geom, spec.R, spec.q, lam)
                                 : superlevel_area_quadrature(sp, f, lam);
      const double cnt = double(count_above(sm, lam));
      const double rel = std::abs(cnt / p - area) / area;
      emax = std::max(emax, rel);
      rec.row({double(p), lam, cnt, cnt / p, area, rel});
    }
    errmax.push_back(emax);
  }
  for (size_t i = 1; i < errmax.size(); ++i)
    rec.require("counting error non-increasing (p=" + std::to_string(pl[i]) + ")",
                errmax[i] <= errmax[i - 1] + 1e-9, errmax[i]);
  rec.require("counting error at the largest level below 5%", errmax.back() <= 0.05,
              errmax.back());
  return rec;
}

// -------------------------------------------------------------- moments ---

CheckRecord check_moments(const RunConfig& cfg) {
  CheckRecord rec;
  rec.id = "moments";
  rec.csv_header = {"m", "trace_over_p", "integral", "rel_err"};
  const double a = (cfg.geometry.specified && cfg.geometry.name == "bargmann")
                       ? cfg.geometry.param
                       : 1.0;
  Geometry geom = Geometry::bargmann(a);
  geom.kappa_shift = cfg.kappa_shift;
  SymbolSpec def;
  def.kind = "bump";
  def.R = 2.2;
  def.q = 3;
  auto it = cfg.symbols.find("szego");
  const SymbolSpec spec = it == cfg.symbols.end() ? def : it->second;
  const Symbol f = spec.make();
  const int p = plist(cfg, {128}).back();
  BuildOptions o = opts_from(cfg);
  if (f.support_radius) add_support_kinks(o, *f.support_radius, 0.0, geom);
  QuantumSpace sp = build_space(geom, p, frozen_N(geom, p, 3.5, 40), o);
  OperatorMatrix Tf = assemble_toeplitz(sp, f, AssemblyMode::parallel, cfg.tol);

  EigenResult eig = hermitian_eigen(Tf.M, cfg.tol);
  for (int m = 1; m <= 4; ++m) {
    const double tr = moment_trace(Tf.M, m).real();
    KahanSum lam;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
      lam.add(std::pow(eig.values(i), m));
    rec.require("m=" + std::to_string(m) + " eigenvalue/trace consistency",
                std::abs(lam.value() - tr) <= cfg.tol.eig_trace_consistency * std::abs(tr),
                std::abs(lam.value() - tr) / std::abs(tr));

    const double integral = symbol_moment_integral(sp, f, m);
    const double rel = std::abs(tr / p - integral) / integral;
    if (m == 1) {
      rec.require("m=1 trace identity exact to quadrature tolerance", rel <= 1e-10, rel);
      if (spec.kind == "bump" && std::abs(spec.c) == 0.0 && spec.q == 3) {
        const double closed = geom.param() / 2.0 * spec.R * spec.R / 4.0;
        rec.compare("m=1 integral vs closed form", integral, closed, 1e-10 * closed);
      }
    } else {
      rec.require("m=" + std::to_string(m) + " moment within 2%", rel <= 0.02, rel);
    }
    rec.row({double(m), tr / p, integral, rel});
  }
  return rec;
}

using CheckFn = CheckRecord (*)(const RunConfig&);

struct Entry {
  CheckInfo info;
  CheckFn fn;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {{"space", "Hilbert-space construction invariants",
        "Builds the level-p spaces and verifies the reproducing identity, the projection "
        "semigroup property, omega-volume normalization, and gauge invariance of the kernel "
        "under constant potential shifts."},
       &check_space},
      {{"bergman", "kernels and norms against closed forms",
        "Compares quadrature-built Bergman kernels and basis norms with their closed forms on "
        "the plane, the sphere and the disc."},
       &check_bergman},
      {{"expansion", "diagonal kernel expansion",
        "Fits P_p(x,x)/p = b0 + b1/p + ...: the leading coefficient equals 1, the remainder "
        "decays like 1/p, and b1 matches scalar curvature / 8 pi."},
       &check_expansion},
      {{"decay", "off-diagonal kernel decay",
        "Verifies that Bergman and Toeplitz kernels decay in the rescaled distance "
        "sqrt(p) d(x,y), with the flat-space log-kernel matching its Gaussian closed form."},
       &check_decay},
      {{"near-diagonal", "near-diagonal universality",
        "Rescales the kernel around a point by sqrt(p) and compares with the flat Gaussian "
        "model kernel; the residual vanishes at rate 1/p on curved geometries."},
       &check_near_diagonal},
      {{"toeplitz", "solvable Toeplitz algebra",
        "Terminating operator identities for linear symbols on the flat model, closed-form "
        "matrix entries, and agreement of the parallel, serial and direct assembly paths."},
       &check_toeplitz},
      {{"product", "semiclassical product law",
        "T_f T_g = T_{fg} + p^{-1} T_{C1(f,g)} + O(p^{-2}): the scaled defects p e0 and "
        "p^2 e1 stay bounded across doubling levels."},
       &check_product},
      {{"commutator", "semiclassical commutator law",
        "The defect of (p/i)[T_f, T_g] against the Toeplitz operator of the Poisson bracket "
        "halves when p doubles."},
       &check_commutator},
      {{"norm", "sup-norm law",
        "||T_{f,p}|| never exceeds sup|f|, and for a conical real peak the gap closes like "
        "1/sqrt(p)."},
       &check_norm},
      {{"star", "star-product coefficients",
        "Extracts C0, C1, C2 of the deformation product by inductive Richardson fits and "
        "checks them against the differential-operator formulas, including the antisymmetry "
        "identity C1(f,g) - C1(g,f) = i{f,g}."},
       &check_star},
      {{"associativity", "composition and star associativity",
        "The Gaussian moment engine matches 2-D quadrature composition, is associative and "
        "parity-preserving; star-product associativity holds order by order through C2."},
       &check_associativity},
      {{"berezin", "Berezin transform",
        "B_p is unital and positivity-preserving, and p (B_p f - f) converges to "
        "-Laplacian f / 4 pi."},
       &check_berezin},
      {{"coherent", "coherent states",
        "Coherent-state squared norms equal the kernel diagonal, and operator reconstruction "
        "from coherent projectors reproduces direct Toeplitz assembly."},
       &check_coherent},
      {{"szego", "eigenvalue counting law",
        "The normalized counting function of Toeplitz eigenvalues above lambda converges to "
        "the omega-area of the symbol superlevel set."},
       &check_szego},
      {{"moments", "trace moments",
        "Tr T_f^m / p against integrals of f^m over the phase space: exact at m = 1, "
        "convergent for higher m, with eigenvalue/trace consistency."},
       &check_moments},
      {{"suite", "all checks", "Runs every check in the catalog."}, nullptr},
  };
  return r;
}

}  // namespace

Symbol SymbolSpec::make() const {
  if (kind == "bump") return symbols::bump(R, c, q);
  if (kind == "cone_bump") return symbols::cone_bump(R, c);
  if (kind == "gaussian") return symbols::gaussian(c, width);
  throw ConfigError("config: unknown symbol kind '" + kind + "'");
}

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

bool known_check(const std::string& id) {
  for (const auto& e : registry())
    if (e.info.id == id) return true;
  return false;
}

std::vector<std::string> expand_checks(const std::vector<std::string>& ids) {
  bool all = ids.empty();
  std::set<std::string> want;
  for (const auto& id : ids) {
    if (!known_check(id)) throw ConfigError("config: unknown check id '" + id + "'");
    if (id == "suite")
      all = true;
    else
      want.insert(id);
  }
  std::vector<std::string> out;
  for (const auto& e : registry()) {
    if (e.info.id == "suite") continue;
    if (all || want.count(e.info.id)) out.push_back(e.info.id);
  }
  return out;
}

CheckRecord run_check(const std::string& id, const RunConfig& cfg) {
  for (const auto& e : registry())
    if (e.info.id == id) {
      if (!e.fn) throw ConfigError("run_check: '" + id + "' is an alias, not a runnable check");
      CheckRecord rec = e.fn(cfg);
      rec.inputs["seed"] = cfg.seed;
      rec.inputs["geometry"] = cfg.geometry.specified ? cfg.geometry.name : "all";
      return rec;
    }
  throw ConfigError("config: unknown check id '" + id + "'");
}

Report run_checks(const RunConfig& cfg) {
  Report rep;
  rep.environment["version"] = "0.1.0";
  rep.environment["seed"] = cfg.seed;
  rep.environment["geometry"] = cfg.geometry.specified ? cfg.geometry.name : "all";
  rep.environment["n_radial"] = cfg.n_radial;
  rep.environment["n_angular"] = cfg.n_angular;
  rep.environment["kappa_shift"] = cfg.kappa_shift;
  for (const std::string& id : expand_checks(cfg.checks)) rep.checks.push_back(run_check(id, cfg));
  return rep;
}

// ----------------------------------------------------------- config I/O ---

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError("config: unknown key '" + where + k + "'");
}

cplx parse_point(const json& v, const std::string& where) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx(v[0].get<double>(), v[1].get<double>());
  throw ConfigError("config: '" + where + "' entries must be numbers or [re, im] pairs");
}

const std::map<std::string, double Tolerances::*>& tolerance_fields() {
  static const std::map<std::string, double Tolerances::*> m = {
      {"hermitian_input", &Tolerances::hermitian_input},
      {"eigen_unitarity", &Tolerances::eigen_unitarity},
      {"eigen_reconstruction", &Tolerances::eigen_reconstruction},
      {"fit_exact_residual", &Tolerances::fit_exact_residual},
      {"gram_identity", &Tolerances::gram_identity},
      {"quadrature_stability", &Tolerances::quadrature_stability},
      {"truncation_stability", &Tolerances::truncation_stability},
      {"reproduce_residual", &Tolerances::reproduce_residual},
      {"semigroup", &Tolerances::semigroup},
      {"coherent_norm_rel", &Tolerances::coherent_norm_rel},
      {"coherent_reconstruction", &Tolerances::coherent_reconstruction},
      {"norm_upper_slack", &Tolerances::norm_upper_slack},
      {"berezin_unital", &Tolerances::berezin_unital},
      {"model_kernel_rel", &Tolerances::model_kernel_rel},
      {"onb_norm_rel", &Tolerances::onb_norm_rel},
      {"compose_oracle", &Tolerances::compose_oracle},
      {"compose_assoc", &Tolerances::compose_assoc},
      {"model_algebra", &Tolerances::model_algebra},
      {"eig_trace_consistency", &Tolerances::eig_trace_consistency},
      {"zero_eigen_rel", &Tolerances::zero_eigen_rel},
  };
  return m;
}

SymbolSpec parse_symbol_spec(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError("config: '" + where + "' must be an object");
  require_keys(v, {"kind", "R", "q", "c", "width"}, where + ".");
  SymbolSpec s;
  if (v.contains("kind")) s.kind = v.at("kind").get<std::string>();
  if (s.kind != "bump" && s.kind != "cone_bump" && s.kind != "gaussian")
    throw ConfigError("config: unknown symbol kind in '" + where + "'");
  if (v.contains("R")) s.R = v.at("R").get<double>();
  if (v.contains("q")) s.q = v.at("q").get<int>();
  if (v.contains("width")) s.width = v.at("width").get<double>();
  if (v.contains("c")) s.c = parse_point(v.at("c"), where + ".c");
  return s;
}

}  // namespace

RunConfig parse_config_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  require_keys(j,
               {"geometry", "p_list", "n_radial", "n_angular", "truncation", "probes", "checks",
                "seed", "kappa_shift", "tolerances", "symbols"},
               "");
  RunConfig cfg;
  if (j.contains("geometry")) {
    const json& g = j.at("geometry");
    if (!g.is_object() || !g.contains("name"))
      throw ConfigError("config: 'geometry' must be an object with a 'name'");
    cfg.geometry.name = g.at("name").get<std::string>();
    cfg.geometry.specified = true;
    if (cfg.geometry.name == "bargmann") {
      require_keys(g, {"name", "a"}, "geometry.");
      cfg.geometry.param = g.value("a", 1.0);
    } else if (cfg.geometry.name == "fubini_study") {
      require_keys(g, {"name"}, "geometry.");
    } else if (cfg.geometry.name == "poincare_disc") {
      require_keys(g, {"name", "s"}, "geometry.");
      cfg.geometry.param = g.value("s", 2.0);
    } else {
      throw ConfigError("config: unknown geometry name '" + cfg.geometry.name + "'");
    }
    geom_from(cfg.geometry, 0.0);  // validates parameter ranges
  }
  if (j.contains("p_list")) {
    for (const json& v : j.at("p_list")) {
      const int p = v.get<int>();
      if (p < 1 || p > 4096) throw ConfigError("config: 'p_list' entries must be in [1, 4096]");
      cfg.p_list.push_back(p);
    }
    if (!std::is_sorted(cfg.p_list.begin(), cfg.p_list.end()))
      throw ConfigError("config: 'p_list' must be ascending");
  }
  if (j.contains("n_radial")) cfg.n_radial = j.at("n_radial").get<int>();
  if (j.contains("n_angular")) cfg.n_angular = j.at("n_angular").get<int>();
  if (j.contains("truncation")) cfg.truncation = j.at("truncation").get<int>();
  if (cfg.n_radial < 0 || cfg.n_angular < 0 || cfg.truncation < 0)
    throw ConfigError("config: sizes must be nonnegative");
  if (j.contains("probes"))
    for (const json& v : j.at("probes")) cfg.probes.push_back(parse_point(v, "probes"));
  if (j.contains("checks")) {
    cfg.checks.clear();
    for (const json& v : j.at("checks")) {
      const std::string id = v.get<std::string>();
      if (!known_check(id)) throw ConfigError("config: unknown check id '" + id + "'");
      cfg.checks.push_back(id);
    }
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<unsigned long long>();
  if (j.contains("kappa_shift")) cfg.kappa_shift = j.at("kappa_shift").get<double>();
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    for (const auto& [k, v] : t.items()) {
      auto it = tolerance_fields().find(k);
      if (it == tolerance_fields().end())
        throw ConfigError("config: unknown key 'tolerances." + k + "'");
      cfg.tol.*(it->second) = v.get<double>();
    }
  }
  if (j.contains("symbols")) {
    for (const auto& [k, v] : j.at("symbols").items()) {
      if (k != "norm" && k != "szego" && k != "berezin")
        throw ConfigError("config: unknown key 'symbols." + k + "'");
      cfg.symbols[k] = parse_symbol_spec(v, "symbols." + k);
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_config_json(j);
}

}  // namespace btq
