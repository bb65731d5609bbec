#pragma once

#include <functional>
#include <optional>
#include <string>

#include "btq/common.hpp"

namespace btq {

/// One-dimensional Kähler geometry on a radial chart in C.
/// Conventions (pinned by the exactly solvable flat model):
///   omega = (i/2pi) ddbar kappa,  g = kappa_{z zbar} / 2pi,
///   omega-volume density relative to Lebesgue = 2g,
///   Riemannian metric ds^2 = 2g |dz|^2.
class Geometry {
 public:
  enum class Kind { bargmann, fubini_study, poincare_disc };

  static Geometry bargmann(double a);
  static Geometry fubini_study();
  static Geometry poincare_disc(double s);

  Kind kind() const { return kind_; }
  double param() const { return par_; }
  const std::string& name() const { return name_; }

  /// Constant added to kappa (gauge shift); physical scalars must not
  /// depend on it.
  double kappa_shift = 0.0;

  bool in_chart(cplx z) const;
  double chart_radius() const;  // infinity for the plane / sphere chart

  double kappa(cplx z) const;
  double metric(cplx z) const;      // g_{1 1bar}
  double metric_inv(cplx z) const;  // g^{1 1bar}
  /// omega-volume density 2 g as a function of t = |z|^2.
  double volume_density(double t) const;
  /// log of the radial weight e^{-p (kappa + shift)} as a function of t.
  double log_weight(double t, int p) const;

  /// Christoffel-type contraction g^{1 1bar} d_z g_{1 1bar}.
  cplx gamma(cplx z) const;
  /// Ricci coefficient rho_{1 1bar} = -d_z d_zbar log g.
  double ricci_form(cplx z) const;
  /// Scalar curvature r = -(2/g) d_z d_zbar log g (flat -> 0, round -> 8pi).
  double scalar_curvature(cplx z) const;

  std::optional<int> finite_dim(int p) const;  // CP^1 -> p+1
  double distance(cplx x, cplx y) const;       // geodesic distance of 2g|dz|^2

 private:
  Geometry(Kind k, double par, std::string name) : kind_(k), par_(par), name_(std::move(name)) {}
  Kind kind_;
  double par_;
  std::string name_;
};

/// Scalar observable with analytic first (optionally second) derivatives.
struct Symbol {
  std::string name;
  std::function<cplx(cplx)> f;
  std::function<cplx(cplx)> fz, fzb;          // may be FD-backed (flagged)
  std::function<cplx(cplx)> fzz, fzzb, fzbzb; // optional
  std::optional<double> support_radius;       // about the origin
  double sup_norm = 0.0;
  bool bounded = true;   // false for monomial oracles (unbounded sup)
  bool is_real = false;
  bool fd_derivatives = false;

  bool has_first() const { return bool(fz) && bool(fzb); }
  bool has_second() const { return bool(fzz) && bool(fzzb) && bool(fzbzb); }
};

namespace symbols {

Symbol constant(cplx value);
/// (1 - |z-c|^2/R^2)^q inside |z-c| < R, 0 outside. q >= 2 keeps analytic
/// first and second derivatives continuous for q >= 3.
Symbol bump(double R, cplx c, int q = 3);
/// (1 - |z-c|/R)^3 inside; real bump with a conical (non-smooth) peak, so the
/// generic 1/sqrt(p) norm-law rate is attained.
Symbol cone_bump(double R, cplx c);
Symbol gaussian(cplx c, double width);
/// z^az conj(z)^azb; unbounded oracle family, excluded from norm/Szego laws.
Symbol monomial(int az, int azb);
Symbol product(const Symbol& f, const Symbol& g);
Symbol add(const Symbol& f, const Symbol& g);
Symbol scale(const Symbol& f, cplx s);
/// Wraps a bare evaluation closure, derivatives by central finite
/// differences (step 1e-5), flagged in reports.
Symbol from_eval(std::string name, std::function<cplx(cplx)> eval, bool real = false);

}  // namespace symbols

/// Poisson bracket {f,g} = (i/2pi) g^{11b} (f_z g_zb - f_zb g_z).
cplx poisson_bracket(const Geometry& geom, const Symbol& f, const Symbol& g, cplx z);

/// C_1(f,g) = -(1/2pi) g^{11b} f_z g_zb; satisfies
/// C_1(f,g) - C_1(g,f) = i {f,g} identically.
cplx c1_coefficient(const Geometry& geom, const Symbol& f, const Symbol& g, cplx z);

/// C_2(f,g) = (1/8pi^2)(g^{11b})^2 (f_zz - Gamma f_z)(g_zbzb - conj(Gamma) g_zb)
///          + (1/4pi^2)(g^{11b})^2 rho_{11b} f_z g_zb.
/// Pairing constants frozen by the flat-model calibration.
cplx c2_coefficient(const Geometry& geom, const Symbol& f, const Symbol& g, cplx z);

/// Nonnegative (spectral) Laplace-Beltrami operator: Delta f =
/// kLaplaceCoefficient * g^{11b} d_z d_zbar f.
inline constexpr double kLaplaceCoefficient = -2.0;
cplx laplace_beltrami(const Geometry& geom, const Symbol& f, cplx z);

}  // namespace btq
