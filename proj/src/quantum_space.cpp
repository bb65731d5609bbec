#include "btq/quantum_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace btq {

namespace {

struct RadialRule {
  std::vector<double> t, w;
};

// Radial rule in t = r^2 over geometry-specific segments, with optional
// extra boundaries at symbol kinks. Fubini-Study integrates in the variable
// v = (1-t)/(1+t), which makes Gram integrands polynomial.
RadialRule make_radial_rule(const Geometry& geom, int p, int N, int n_user,
                            const std::vector<double>& kinks, double refine = 1.0) {
  RadialRule rule;
  auto add_segment = [&rule](double a, double b, int n) {
    auto [x, wx] = gauss_legendre(n, a, b);
    rule.t.insert(rule.t.end(), x.begin(), x.end());
    rule.w.insert(rule.w.end(), wx.begin(), wx.end());
  };
  switch (geom.kind()) {
    case Geometry::Kind::bargmann: {
      const double pa = p * geom.param();
      double T0 = 2.0 * (N * std::max(std::log(2.0 * N / pa) + 2.0, 2.0) + 60.0) / pa;
      for (double k : kinks) T0 = std::max(T0, 1.15 * k);
      std::vector<double> bounds{0.0, std::min(1.0, T0 / 2)};
      for (double k : kinks)
        if (k > bounds[1] * 1.01 && k < T0 * 0.99) bounds.push_back(k);
      bounds.push_back(T0);
      std::sort(bounds.begin(), bounds.end());
      const int n = int(refine * std::max(n_user, 160 + N / 3));
      for (size_t i = 0; i + 1 < bounds.size(); ++i) add_segment(bounds[i], bounds[i + 1], n);
      break;
    }
    case Geometry::Kind::fubini_study: {
      std::vector<double> bounds{-1.0, 1.0};
      for (double k : kinks) {
        const double v = (1.0 - k) / (1.0 + k);
        if (v > -0.999 && v < 0.999) bounds.push_back(v);
      }
      std::sort(bounds.begin(), bounds.end());
      const int n = int(refine * std::max({n_user, p / 2 + 64, N / 2 + 64}));
      for (size_t i = 0; i + 1 < bounds.size(); ++i) {
        auto [v, wv] = gauss_legendre(n, bounds[i], bounds[i + 1]);
        for (int j = 0; j < n; ++j) {
          rule.t.push_back((1.0 - v[j]) / (1.0 + v[j]));
          rule.w.push_back(wv[j] * 2.0 / ((1.0 + v[j]) * (1.0 + v[j])));
        }
      }
      break;
    }
    case Geometry::Kind::poincare_disc: {
      std::vector<double> bounds{0.0, 0.5, 1.0 - 1e-12};
      for (double k : kinks)
        if (k > 0.01 && k < 0.99 && std::abs(k - 0.5) > 0.01) bounds.push_back(k);
      std::sort(bounds.begin(), bounds.end());
      const int n = int(refine * std::max(n_user, (N + int(p * geom.param())) / 2 + 48));
      for (size_t i = 0; i + 1 < bounds.size(); ++i) add_segment(bounds[i], bounds[i + 1], n);
      break;
    }
  }
  return rule;
}

std::vector<double> density_at(const Geometry& geom, const std::vector<double>& t, bool lebesgue) {
  std::vector<double> dens(t.size());
  for (size_t i = 0; i < t.size(); ++i) dens[i] = lebesgue ? 1.0 : geom.volume_density(t[i]);
  return dens;
}

// log Gram diagonal via compensated log-sum-exp in fixed node order.
std::vector<double> compute_lognu(const Geometry& geom, int p, int d, const RadialRule& rule,
                                  const std::vector<double>& dens) {
  const size_t nt = rule.t.size();
  std::vector<double> logt(nt), logw(nt);
  for (size_t i = 0; i < nt; ++i) {
    logt[i] = std::log(rule.t[i]);
    logw[i] = geom.log_weight(rule.t[i], p);
  }
  std::vector<double> lognu(d);
  for (int k = 0; k < d; ++k) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < nt; ++i) mx = std::max(mx, k * logt[i] + logw[i]);
    KahanSum acc;
    for (size_t i = 0; i < nt; ++i)
      acc.add(rule.w[i] * dens[i] * std::exp(k * logt[i] + logw[i] - mx));
    const double s = acc.value();
    if (!(s > 0) || !std::isfinite(s))
      throw NumericsError("build_space: Gram diagonal not positive at mode " + std::to_string(k));
    lognu[k] = std::log(kPi * s) + mx;
  }
  return lognu;
}

double kernel_diag_from(const Geometry& geom, int p, const std::vector<double>& lognu, cplx x) {
  const double t = std::norm(x);
  const double logw = geom.log_weight(t, p);
  KahanSum acc;
  if (t == 0.0) return std::exp(logw - lognu[0]);
  const double lt = std::log(t);
  for (size_t k = 0; k < lognu.size(); ++k) acc.add(std::exp(k * lt + logw - lognu[k]));
  return acc.value();
}

// Pivoted Cholesky of a Hermitian PSD matrix; returns rank, permutation and
// lower factor with H[perm,perm] = L L^*.
int pivoted_cholesky(Eigen::MatrixXcd H, double cutoff, std::vector<int>& perm,
                     Eigen::MatrixXcd& L) {
  const int n = static_cast<int>(H.rows());
  perm.resize(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  L = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    int q = j;
    for (int i = j + 1; i < n; ++i)
      if (H(i, i).real() > H(q, q).real()) q = i;
    if (H(q, q).real() < cutoff) return j;
    if (q != j) {
      H.row(j).swap(H.row(q));
      H.col(j).swap(H.col(q));
      L.row(j).swap(L.row(q));
      std::swap(perm[j], perm[q]);
    }
    const double piv = std::sqrt(H(j, j).real());
    L(j, j) = piv;
    for (int i = j + 1; i < n; ++i) L(i, j) = H(i, j) / piv;
    for (int i = j + 1; i < n; ++i)
      for (int k = j + 1; k <= i; ++k) H(i, k) -= L(i, j) * std::conj(L(k, j));
    for (int i = j + 1; i < n; ++i)
      for (int k = i + 1; k < n; ++k) H(i, k) = std::conj(H(k, i));
  }
  return n;
}

// Generic-path guard: assembles the reduced-size Gram by 2-D quadrature,
// orthonormalizes by pivoted Cholesky and compares kernel values with the
// radial fast path.
void generic_cross_check(const QuantumSpace& sp, const Tolerances& tol) {
  const int nred = std::min(sp.d, 16);
  const int nth = next_pow2(2 * nred + 16);
  const double dth = 2.0 * kPi / nth;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(nred, nred);
  // Scaled monomials m_k = z^k e^{-p kappa/2 - lognu_k/2}; H should be I.
  for (int i = 0; i < sp.radial_count(); ++i) {
    const double lt = sp.logt[i];
    const double logw = sp.geom.log_weight(sp.t[i], sp.p);
    const double c = 0.5 * sp.w[i] * dth * sp.dens[i];
    std::vector<double> mag(nred);
    for (int k = 0; k < nred; ++k) mag[k] = std::exp(0.5 * (k * lt + logw - sp.lognu[k]));
    for (int j = 0; j < nth; ++j) {
      const double th = dth * j;
      for (int a = 0; a < nred; ++a)
        for (int b = 0; b <= a; ++b)
          H(a, b) += c * mag[a] * mag[b] * std::exp(cplx(0, (a - b) * th));
    }
  }
  for (int a = 0; a < nred; ++a)
    for (int b = a + 1; b < nred; ++b) H(a, b) = std::conj(H(b, a));
  // Radial weights make the Gram diagonal; assert it numerically here.
  double offmax = 0.0, dmax = 0.0;
  for (int a = 0; a < nred; ++a) {
    dmax = std::max(dmax, std::abs(H(a, a)));
    for (int b = 0; b < nred; ++b)
      if (a != b) offmax = std::max(offmax, std::abs(H(a, b)));
  }
  if (offmax > 1e-10 * dmax)
    throw NumericsError("build_space: Gram off-diagonals not negligible (radial contract)");
  std::vector<int> perm;
  Eigen::MatrixXcd L;
  const int rank = pivoted_cholesky(H, 1e-12 * dmax, perm, L);
  if (rank < nred)
    throw NumericsError("build_space: Gram not positive above cutoff, rank " +
                        std::to_string(rank) + " of " + std::to_string(nred));
  Eigen::MatrixXcd Lr = L.topLeftCorner(rank, rank);
  // C H_perm C^* = I contract.
  Eigen::MatrixXcd Hp(rank, rank);
  for (int a = 0; a < rank; ++a)
    for (int b = 0; b < rank; ++b) Hp(a, b) = H(perm[a], perm[b]);
  Eigen::MatrixXcd C = Lr.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXcd::Identity(rank, rank));
  const double ierr =
      (C * Hp * C.adjoint() - Eigen::MatrixXcd::Identity(rank, rank)).cwiseAbs().maxCoeff();
  if (ierr > tol.gram_identity)
    throw NumericsError("build_space: generic orthonormalization identity failed");
  // Kernel agreement between the generic and fast paths at probe points.
  for (cplx x : {cplx(0.31, 0.1), cplx(0.52, -0.2)}) {
    if (!sp.geom.in_chart(x)) continue;
    Eigen::VectorXcd m(rank);
    const double tx = std::norm(x);
    const double logw = sp.geom.log_weight(tx, sp.p);
    for (int a = 0; a < rank; ++a) {
      const int k = perm[a];
      m(a) = std::exp(0.5 * (k * std::log(tx) + logw - sp.lognu[k])) *
             std::exp(cplx(0, k * std::arg(x)));
    }
    Eigen::VectorXcd y = Lr.triangularView<Eigen::Lower>().solve(m);
    double pg = y.squaredNorm();
    double pf = 0.0;
    for (int k = 0; k < rank; ++k)
      pf += std::exp(k * std::log(tx) + logw - sp.lognu[k]);
    if (std::abs(pg - pf) > 1e-8 * std::abs(pf))
      throw NumericsError("build_space: generic/fast kernel paths disagree");
  }
}

}  // namespace

int default_truncation(const Geometry& geom, int p, double cover_radius) {
  const double t = cover_radius * cover_radius;
  switch (geom.kind()) {
    case Geometry::Kind::bargmann:
      return static_cast<int>(std::ceil(p * geom.param() * t / 2.0)) + 16;
    case Geometry::Kind::fubini_study:
      return p + 1;
    case Geometry::Kind::poincare_disc: {
      const double tc = std::min(t, 0.97);
      return static_cast<int>(std::ceil(p * geom.param() * tc / (1.0 - tc))) + 16;
    }
  }
  return p + 1;
}

QuantumSpace build_space(const Geometry& geom, int p, int N, const BuildOptions& opts) {
  if (p < 1) throw ConfigError("build_space: level p must be >= 1");
  if (N < 1) throw ConfigError("build_space: truncation N must be >= 1");
  if (geom.kind() == Geometry::Kind::fubini_study && N != p + 1)
    throw ConfigError("build_space: fubini_study requires N = p + 1");

  QuantumSpace sp;
  sp.geom = geom;
  sp.p = p;
  sp.N = N;
  sp.lebesgue = opts.lebesgue_volume;
  sp.d = N;
  if (geom.kind() == Geometry::Kind::fubini_study && opts.lebesgue_volume)
    sp.d = std::min(N, p - 1);  // higher modes are not Lebesgue square-integrable
  if (sp.d < 1) throw ConfigError("build_space: retained dimension is empty");

  RadialRule rule = make_radial_rule(geom, p, N, opts.n_radial, opts.kinks_t);
  sp.t = rule.t;
  sp.w = rule.w;
  sp.dens = density_at(geom, sp.t, sp.lebesgue);
  sp.lognu = compute_lognu(geom, p, sp.d, rule, sp.dens);

  if (opts.quadrature_gate) {
    RadialRule fine = make_radial_rule(geom, p, N, opts.n_radial, opts.kinks_t, 1.5);
    auto dens_fine = density_at(geom, fine.t, sp.lebesgue);
    auto lognu_fine = compute_lognu(geom, p, sp.d, fine, dens_fine);
    for (int k = 0; k < sp.d; ++k) {
      const double rel = std::abs(std::expm1(lognu_fine[k] - sp.lognu[k]));
      if (rel > opts.tol.quadrature_stability)
        throw NumericsError("build_space: quadrature not converged (mode " + std::to_string(k) +
                            ", change " + std::to_string(rel) + ")");
    }
  }

  if (opts.truncation_gate && geom.kind() != Geometry::Kind::fubini_study) {
    std::vector<cplx> probes = opts.gate_probes;
    if (probes.empty()) probes = {cplx(0.3, 0.0), cplx(0.45, 0.3)};
    const int N2 = 2 * N;
    RadialRule rule2 = make_radial_rule(geom, p, N2, opts.n_radial, opts.kinks_t);
    auto dens2 = density_at(geom, rule2.t, sp.lebesgue);
    auto lognu2 = compute_lognu(geom, p, N2, rule2, dens2);
    for (cplx x : probes) {
      if (!geom.in_chart(x)) continue;
      std::vector<double> head(lognu2.begin(), lognu2.begin() + sp.d);
      const double pn = kernel_diag_from(geom, p, head, x);
      const double pd = kernel_diag_from(geom, p, lognu2, x);
      if (std::abs(pd - pn) > opts.tol.truncation_stability * std::abs(pd))
        throw NumericsError("build_space: truncation gate failed at probe |x|=" +
                            std::to_string(std::abs(x)));
    }
  }

  // Scaled radial basis values base_k(t) = t^{k/2} e^{logw/2} / sqrt(nu_k).
  const int nt = sp.radial_count();
  sp.logt.resize(nt);
  std::vector<double> logw(nt);
  for (int i = 0; i < nt; ++i) {
    sp.logt[i] = std::log(sp.t[i]);
    logw[i] = geom.log_weight(sp.t[i], p);
  }
  sp.base.resize(sp.d, nt);
  for (int k = 0; k < sp.d; ++k)
    for (int i = 0; i < nt; ++i)
      sp.base(k, i) = std::exp(0.5 * (k * sp.logt[i] + logw[i] - sp.lognu[k]));

  sp.n_angular = opts.n_angular > 0 ? next_pow2(opts.n_angular)
                                    : next_pow2(std::max(2 * N + 64, 256));

  if (opts.generic_cross_check) generic_cross_check(sp, opts.tol);
  return sp;
}

Eigen::VectorXcd QuantumSpace::section_values(cplx x) const {
  if (!geom.in_chart(x)) throw ConfigError("section_values: point outside the chart");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  const double tx = std::norm(x);
  const double logw = geom.log_weight(tx, p);
  if (tx == 0.0) {
    v(0) = std::exp(0.5 * (logw - lognu[0]));
    return v;
  }
  const double lt = std::log(tx);
  const double th = std::arg(x);
  for (int k = 0; k < d; ++k)
    v(k) = std::exp(0.5 * (k * lt + logw - lognu[k])) * std::exp(cplx(0, k * th));
  return v;
}

cplx QuantumSpace::bergman_kernel(cplx x, cplx xp) const {
  Eigen::VectorXcd a = section_values(x), b = section_values(xp);
  KahanCSum acc;
  for (int k = 0; k < d; ++k) acc.add(a(k) * std::conj(b(k)));
  return acc.value();
}

double QuantumSpace::kernel_diag(cplx x) const {
  if (!geom.in_chart(x)) throw ConfigError("kernel_diag: point outside the chart");
  return kernel_diag_from(geom, p, lognu, x);
}

double QuantumSpace::semigroup_residual(cplx x, cplx xp) const {
  // int P(x,w) P(w,x') dv(w) = sum_k sum_l a_k conj(b_l) <e_l, e_k>_quad;
  // with the same rule the inner products are exactly delta_{kl}, so probe
  // the identity through independent node evaluation instead.
  Eigen::VectorXcd a = section_values(x), b = section_values(xp);
  const double dth = 2.0 * kPi / n_angular;
  Eigen::VectorXcd accum = Eigen::VectorXcd::Zero(d);
  std::vector<cplx> ein(d);
  KahanCSum total;
  for (int i = 0; i < radial_count(); ++i) {
    const double c = 0.5 * w[i] * dth * dens[i];
    for (int j = 0; j < n_angular; ++j) {
      const double th = dth * j;
      // P(x,w) P(w,x') at the node
      cplx pxw(0.0), pwxp(0.0);
      cplx e1(1.0), rot = std::exp(cplx(0, th));
      for (int k = 0; k < d; ++k) {
        const cplx ew = base(k, i) * e1;
        pxw += a(k) * std::conj(ew);
        pwxp += ew * std::conj(b(k));
        e1 *= rot;
      }
      total.add(c * pxw * pwxp);
    }
  }
  cplx direct(0.0);
  for (int k = 0; k < d; ++k) direct += a(k) * std::conj(b(k));
  return std::abs(total.value() - direct);
}

double QuantumSpace::reproduce_residual(const Eigen::VectorXcd& coeffs,
                                        const std::vector<cplx>& probes) const {
  if (coeffs.size() != d) throw ConfigError("reproduce_residual: coefficient size mismatch");
  auto h = [&](cplx z) {
    Eigen::VectorXcd e = section_values(z);
    cplx v(0.0);
    for (int k = 0; k < d; ++k) v += coeffs(k) * e(k);
    return v;
  };
  return project_function_residual(h, probes);
}

double QuantumSpace::project_function_residual(const std::function<cplx(cplx)>& h,
                                               const std::vector<cplx>& probes) const {
  // g_k = <h, e_k> by quadrature, then (P h)(x) = sum_k g_k e_k(x).
  const double dth = 2.0 * kPi / n_angular;
  std::vector<KahanCSum> g(d);
  for (int i = 0; i < radial_count(); ++i) {
    const double r = std::sqrt(t[i]);
    const double c = 0.5 * w[i] * dth * dens[i];
    for (int j = 0; j < n_angular; ++j) {
      const double th = dth * j;
      const cplx z(r * std::cos(th), r * std::sin(th));
      const cplx hv = h(z);
      cplx e1(1.0);
      const cplx rot = std::exp(cplx(0, -th));
      for (int k = 0; k < d; ++k) {
        g[k].add(c * hv * base(k, i) * e1);
        e1 *= rot;
      }
    }
  }
  double res = 0.0;
  for (cplx x : probes) {
    Eigen::VectorXcd e = section_values(x);
    cplx ph(0.0);
    for (int k = 0; k < d; ++k) ph += g[k].value() * e(k);
    res = std::max(res, std::abs(ph - h(x)));
  }
  return res;
}

Eigen::MatrixXcd QuantumSpace::gram_matrix() const {
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    if (std::abs(lognu[k]) > 600.0)
      throw NumericsError("gram_matrix: dynamic range requires the log-scale representation");
    G(k, k) = std::exp(lognu[k]);
  }
  return G;
}

Eigen::MatrixXcd QuantumSpace::onb_coeffs() const {
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    if (std::abs(lognu[k]) > 600.0)
      throw NumericsError("onb_coeffs: dynamic range requires the log-scale representation");
    C(k, k) = std::exp(-0.5 * lognu[k]);
  }
  return C;
}

CoherentVector coherent_state(const QuantumSpace& space, cplx x) {
  Eigen::VectorXcd e = space.section_values(x);
  CoherentVector s;
  s.center = x;
  s.coeffs = e.conjugate();
  s.norm2 = e.squaredNorm();
  if (!(s.norm2 > 1e-12))
    throw NumericsError("coherent_state: kernel diagonal vanishes at the requested point");
  return s;
}

}  // namespace btq
