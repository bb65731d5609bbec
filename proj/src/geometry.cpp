#include "btq/geometry.hpp"

#include <cmath>

namespace btq {

Geometry Geometry::bargmann(double a) {
  if (!(a > 0)) throw ConfigError("bargmann: weight a must be positive");
  return Geometry(Kind::bargmann, a, "bargmann");
}

Geometry Geometry::fubini_study() { return Geometry(Kind::fubini_study, 0.0, "fubini_study"); }

Geometry Geometry::poincare_disc(double s) {
  if (!(s >= 2.0)) throw ConfigError("poincare_disc: parameter s must be >= 2");
  return Geometry(Kind::poincare_disc, s, "poincare_disc");
}

bool Geometry::in_chart(cplx z) const {
  if (kind_ == Kind::poincare_disc) return std::abs(z) < 1.0;
  return true;
}

double Geometry::chart_radius() const {
  return kind_ == Kind::poincare_disc ? 1.0 : std::numeric_limits<double>::infinity();
}

double Geometry::kappa(cplx z) const {
  const double t = std::norm(z);
  switch (kind_) {
    case Kind::bargmann:
      return par_ * t / 2.0 + kappa_shift;
    case Kind::fubini_study:
      return std::log1p(t) + kappa_shift;
    case Kind::poincare_disc:
      if (t >= 1.0) throw ConfigError("poincare_disc: point outside the chart");
      return -par_ * std::log1p(-t) + kappa_shift;
  }
  return 0.0;
}

double Geometry::metric(cplx z) const {
  const double t = std::norm(z);
  switch (kind_) {
    case Kind::bargmann:
      return par_ / (4.0 * kPi);
    case Kind::fubini_study:
      return 1.0 / (2.0 * kPi * (1.0 + t) * (1.0 + t));
    case Kind::poincare_disc:
      if (t >= 1.0) throw ConfigError("poincare_disc: point outside the chart");
      return par_ / (2.0 * kPi * (1.0 - t) * (1.0 - t));
  }
  return 0.0;
}

double Geometry::metric_inv(cplx z) const { return 1.0 / metric(z); }

double Geometry::volume_density(double t) const {
  switch (kind_) {
    case Kind::bargmann:
      return par_ / (2.0 * kPi);
    case Kind::fubini_study:
      return 1.0 / (kPi * (1.0 + t) * (1.0 + t));
    case Kind::poincare_disc:
      return par_ / (kPi * (1.0 - t) * (1.0 - t));
  }
  return 0.0;
}

double Geometry::log_weight(double t, int p) const {
  switch (kind_) {
    case Kind::bargmann:
      return -p * (par_ * t / 2.0 + kappa_shift);
    case Kind::fubini_study:
      return -p * (std::log1p(t) + kappa_shift);
    case Kind::poincare_disc:
      return p * par_ * std::log1p(-t) - p * kappa_shift;
  }
  return 0.0;
}

cplx Geometry::gamma(cplx z) const {
  const double t = std::norm(z);
  switch (kind_) {
    case Kind::bargmann:
      return 0.0;
    case Kind::fubini_study:
      return -2.0 * std::conj(z) / (1.0 + t);
    case Kind::poincare_disc:
      return 2.0 * std::conj(z) / (1.0 - t);
  }
  return 0.0;
}

double Geometry::ricci_form(cplx z) const {
  const double t = std::norm(z);
  switch (kind_) {
    case Kind::bargmann:
      return 0.0;
    case Kind::fubini_study:
      return 2.0 / ((1.0 + t) * (1.0 + t));
    case Kind::poincare_disc:
      return -2.0 / ((1.0 - t) * (1.0 - t));
  }
  return 0.0;
}

double Geometry::scalar_curvature(cplx z) const { return 2.0 * ricci_form(z) / metric(z); }

std::optional<int> Geometry::finite_dim(int p) const {
  if (kind_ == Kind::fubini_study) return p + 1;
  return std::nullopt;
}

double Geometry::distance(cplx x, cplx y) const {
  switch (kind_) {
    case Kind::bargmann:
      return std::sqrt(par_ / (2.0 * kPi)) * std::abs(x - y);
    case Kind::fubini_study: {
      // Round sphere of radius 1/(2 sqrt(pi)) (total omega-area 1).
      const double num = std::abs(1.0 + x * std::conj(y));
      const double den = std::sqrt((1.0 + std::norm(x)) * (1.0 + std::norm(y)));
      const double c = std::min(1.0, num / den);
      return std::acos(c) / std::sqrt(kPi);
    }
    case Kind::poincare_disc: {
      const double rho = std::abs(x - y) / std::abs(1.0 - std::conj(y) * x);
      return std::sqrt(par_ / kPi) * std::atanh(std::min(rho, 1.0 - 1e-16));
    }
  }
  return 0.0;
}

namespace symbols {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kFdStep2 = 1e-4;

std::function<cplx(cplx)> fd_dz(std::function<cplx(cplx)> f) {
  return [f](cplx z) {
    const double h = kFdStep;
    cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
    cplx dy = (f(z + cplx(0, h)) - f(z - cplx(0, h))) / (2.0 * h);
    return 0.5 * (dx - cplx(0, 1) * dy);
  };
}

std::function<cplx(cplx)> fd_dzb(std::function<cplx(cplx)> f) {
  return [f](cplx z) {
    const double h = kFdStep;
    cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
    cplx dy = (f(z + cplx(0, h)) - f(z - cplx(0, h))) / (2.0 * h);
    return 0.5 * (dx + cplx(0, 1) * dy);
  };
}

// Second derivatives from a 3x3 stencil on eval.
struct Fd2 {
  std::function<cplx(cplx)> f;
  void hessian(cplx z, cplx& fxx, cplx& fyy, cplx& fxy) const {
    const double h = kFdStep2;
    const cplx c = f(z);
    fxx = (f(z + h) - 2.0 * c + f(z - h)) / (h * h);
    fyy = (f(z + cplx(0, h)) - 2.0 * c + f(z - cplx(0, h))) / (h * h);
    fxy = (f(z + cplx(h, h)) - f(z + cplx(h, -h)) - f(z + cplx(-h, h)) + f(z + cplx(-h, -h))) /
          (4.0 * h * h);
  }
};

std::function<cplx(cplx)> fd_dzz(std::function<cplx(cplx)> f) {
  return [st = Fd2{std::move(f)}](cplx z) {
    cplx fxx, fyy, fxy;
    st.hessian(z, fxx, fyy, fxy);
    return 0.25 * (fxx - fyy) - cplx(0, 0.5) * fxy;
  };
}

std::function<cplx(cplx)> fd_dzzb(std::function<cplx(cplx)> f) {
  return [st = Fd2{std::move(f)}](cplx z) {
    cplx fxx, fyy, fxy;
    st.hessian(z, fxx, fyy, fxy);
    return 0.25 * (fxx + fyy);
  };
}

std::function<cplx(cplx)> fd_dzbzb(std::function<cplx(cplx)> f) {
  return [st = Fd2{std::move(f)}](cplx z) {
    cplx fxx, fyy, fxy;
    st.hessian(z, fxx, fyy, fxy);
    return 0.25 * (fxx - fyy) + cplx(0, 0.5) * fxy;
  };
}

cplx ipow(cplx z, int k) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

Symbol constant(cplx value) {
  Symbol s;
  s.name = "constant";
  s.f = [value](cplx) { return value; };
  s.fz = s.fzb = s.fzz = s.fzzb = s.fzbzb = [](cplx) { return cplx(0.0); };
  s.sup_norm = std::abs(value);
  s.is_real = std::abs(value.imag()) == 0.0;
  return s;
}

Symbol bump(double R, cplx c, int q) {
  if (!(R > 0) || q < 2) throw ConfigError("bump: need R > 0 and q >= 2");
  Symbol s;
  s.name = "bump(R=" + std::to_string(R) + ",q=" + std::to_string(q) + ")";
  const double R2 = R * R;
  auto u = [R2, c](cplx z) { return std::norm(z - c) / R2; };
  s.f = [u, q](cplx z) {
    const double v = u(z);
    return v < 1.0 ? cplx(std::pow(1.0 - v, q)) : cplx(0.0);
  };
  s.fz = [u, q, c, R2](cplx z) {
    const double v = u(z);
    return v < 1.0 ? cplx(-q * std::pow(1.0 - v, q - 1)) * std::conj(z - c) / R2 : cplx(0.0);
  };
  s.fzb = [u, q, c, R2](cplx z) {
    const double v = u(z);
    return v < 1.0 ? cplx(-q * std::pow(1.0 - v, q - 1)) * (z - c) / R2 : cplx(0.0);
  };
  s.fzz = [u, q, c, R2](cplx z) {
    const double v = u(z);
    if (v >= 1.0) return cplx(0.0);
    return cplx(q * (q - 1) * std::pow(1.0 - v, q - 2)) * std::conj(z - c) * std::conj(z - c) /
           (R2 * R2);
  };
  s.fzbzb = [u, q, c, R2](cplx z) {
    const double v = u(z);
    if (v >= 1.0) return cplx(0.0);
    return cplx(q * (q - 1) * std::pow(1.0 - v, q - 2)) * (z - c) * (z - c) / (R2 * R2);
  };
  s.fzzb = [u, q, c, R2](cplx z) {
    const double v = u(z);
    if (v >= 1.0) return cplx(0.0);
    return cplx(q * (q - 1) * std::pow(1.0 - v, q - 2)) * std::norm(z - c) / (R2 * R2) -
           cplx(q * std::pow(1.0 - v, q - 1)) / R2;
  };
  s.support_radius = std::abs(c) + R;
  s.sup_norm = 1.0;
  s.is_real = true;
  return s;
}

Symbol cone_bump(double R, cplx c) {
  if (!(R > 0)) throw ConfigError("cone_bump: need R > 0");
  Symbol s;
  s.name = "cone_bump(R=" + std::to_string(R) + ")";
  s.f = [R, c](cplx z) {
    const double r = std::abs(z - c) / R;
    return r < 1.0 ? cplx(std::pow(1.0 - r, 3)) : cplx(0.0);
  };
  // Lipschitz peak: first derivatives exist away from the center only;
  // provided for decay/defect probes, never evaluated at the apex.
  s.fz = [R, c](cplx z) {
    const double ab = std::abs(z - c);
    const double r = ab / R;
    if (r >= 1.0 || ab == 0.0) return cplx(0.0);
    return cplx(-3.0 * (1.0 - r) * (1.0 - r) / R) * std::conj(z - c) / (2.0 * ab);
  };
  s.fzb = [R, c](cplx z) {
    const double ab = std::abs(z - c);
    const double r = ab / R;
    if (r >= 1.0 || ab == 0.0) return cplx(0.0);
    return cplx(-3.0 * (1.0 - r) * (1.0 - r) / R) * (z - c) / (2.0 * ab);
  };
  s.support_radius = std::abs(c) + R;
  s.sup_norm = 1.0;
  s.is_real = true;
  return s;
}

Symbol gaussian(cplx c, double width) {
  if (!(width > 0)) throw ConfigError("gaussian: width must be positive");
  Symbol s;
  s.name = "gaussian(w=" + std::to_string(width) + ")";
  const double s2 = width * width;
  auto g = [c, s2](cplx z) { return std::exp(-std::norm(z - c) / s2); };
  s.f = [g](cplx z) { return cplx(g(z)); };
  s.fz = [g, c, s2](cplx z) { return -std::conj(z - c) / s2 * g(z); };
  s.fzb = [g, c, s2](cplx z) { return -(z - c) / s2 * g(z); };
  s.fzz = [g, c, s2](cplx z) { return std::conj(z - c) * std::conj(z - c) / (s2 * s2) * g(z); };
  s.fzbzb = [g, c, s2](cplx z) { return (z - c) * (z - c) / (s2 * s2) * g(z); };
  s.fzzb = [g, c, s2](cplx z) { return (std::norm(z - c) / (s2 * s2) - 1.0 / s2) * g(z); };
  s.sup_norm = 1.0;
  s.is_real = true;
  return s;
}

Symbol monomial(int az, int azb) {
  if (az < 0 || azb < 0) throw ConfigError("monomial: exponents must be nonnegative");
  Symbol s;
  s.name = "monomial(z^" + std::to_string(az) + " zb^" + std::to_string(azb) + ")";
  s.f = [az, azb](cplx z) { return ipow(z, az) * ipow(std::conj(z), azb); };
  s.fz = [az, azb](cplx z) {
    return az == 0 ? cplx(0.0) : double(az) * ipow(z, az - 1) * ipow(std::conj(z), azb);
  };
  s.fzb = [az, azb](cplx z) {
    return azb == 0 ? cplx(0.0) : double(azb) * ipow(z, az) * ipow(std::conj(z), azb - 1);
  };
  s.fzz = [az, azb](cplx z) {
    return az < 2 ? cplx(0.0)
                  : double(az) * double(az - 1) * ipow(z, az - 2) * ipow(std::conj(z), azb);
  };
  s.fzbzb = [az, azb](cplx z) {
    return azb < 2 ? cplx(0.0)
                   : double(azb) * double(azb - 1) * ipow(z, az) * ipow(std::conj(z), azb - 2);
  };
  s.fzzb = [az, azb](cplx z) {
    return (az == 0 || azb == 0)
               ? cplx(0.0)
               : double(az) * double(azb) * ipow(z, az - 1) * ipow(std::conj(z), azb - 1);
  };
  s.bounded = false;
  s.is_real = (az == azb);
  return s;
}

Symbol product(const Symbol& a, const Symbol& b) {
  Symbol s;
  s.name = a.name + "*" + b.name;
  auto af = a.f, bf = b.f;
  s.f = [af, bf](cplx z) { return af(z) * bf(z); };
  if (a.has_first() && b.has_first()) {
    auto az = a.fz, bz = b.fz, azb = a.fzb, bzb = b.fzb;
    s.fz = [af, bf, az, bz](cplx z) { return az(z) * bf(z) + af(z) * bz(z); };
    s.fzb = [af, bf, azb, bzb](cplx z) { return azb(z) * bf(z) + af(z) * bzb(z); };
    if (a.has_second() && b.has_second()) {
      auto azz = a.fzz, bzz = b.fzz, azzb = a.fzzb, bzzb = b.fzzb, azbzb = a.fzbzb,
           bzbzb = b.fzbzb;
      s.fzz = [=](cplx z) { return azz(z) * bf(z) + 2.0 * az(z) * bz(z) + af(z) * bzz(z); };
      s.fzbzb = [=](cplx z) {
        return azbzb(z) * bf(z) + 2.0 * azb(z) * bzb(z) + af(z) * bzbzb(z);
      };
      s.fzzb = [=](cplx z) {
        return azzb(z) * bf(z) + az(z) * bzb(z) + azb(z) * bz(z) + af(z) * bzzb(z);
      };
    }
  }
  if (a.support_radius && b.support_radius)
    s.support_radius = std::min(*a.support_radius, *b.support_radius);
  else if (a.support_radius)
    s.support_radius = a.support_radius;
  else if (b.support_radius)
    s.support_radius = b.support_radius;
  s.sup_norm = a.sup_norm * b.sup_norm;
  s.bounded = a.bounded && b.bounded;
  s.is_real = a.is_real && b.is_real;
  s.fd_derivatives = a.fd_derivatives || b.fd_derivatives;
  return s;
}

Symbol add(const Symbol& a, const Symbol& b) {
  Symbol s;
  s.name = a.name + "+" + b.name;
  auto af = a.f, bf = b.f;
  s.f = [af, bf](cplx z) { return af(z) + bf(z); };
  auto lift = [](const std::function<cplx(cplx)>& u, const std::function<cplx(cplx)>& v)
      -> std::function<cplx(cplx)> {
    if (!u || !v) return nullptr;
    return [u, v](cplx z) { return u(z) + v(z); };
  };
  s.fz = lift(a.fz, b.fz);
  s.fzb = lift(a.fzb, b.fzb);
  s.fzz = lift(a.fzz, b.fzz);
  s.fzzb = lift(a.fzzb, b.fzzb);
  s.fzbzb = lift(a.fzbzb, b.fzbzb);
  if (a.support_radius && b.support_radius)
    s.support_radius = std::max(*a.support_radius, *b.support_radius);
  s.sup_norm = a.sup_norm + b.sup_norm;
  s.bounded = a.bounded && b.bounded;
  s.is_real = a.is_real && b.is_real;
  s.fd_derivatives = a.fd_derivatives || b.fd_derivatives;
  return s;
}

Symbol scale(const Symbol& a, cplx mult) {
  Symbol s = a;
  s.name = "scale*" + a.name;
  auto af = a.f;
  s.f = [af, mult](cplx z) { return mult * af(z); };
  auto lift = [mult](const std::function<cplx(cplx)>& u) -> std::function<cplx(cplx)> {
    if (!u) return nullptr;
    return [u, mult](cplx z) { return mult * u(z); };
  };
  s.fz = lift(a.fz);
  s.fzb = lift(a.fzb);
  s.fzz = lift(a.fzz);
  s.fzzb = lift(a.fzzb);
  s.fzbzb = lift(a.fzbzb);
  s.sup_norm = std::abs(mult) * a.sup_norm;
  s.is_real = a.is_real && std::abs(mult.imag()) == 0.0;
  return s;
}

Symbol from_eval(std::string name, std::function<cplx(cplx)> eval, bool real) {
  Symbol s;
  s.name = std::move(name);
  s.f = eval;
  s.fz = fd_dz(eval);
  s.fzb = fd_dzb(eval);
  s.fzz = fd_dzz(eval);
  s.fzzb = fd_dzzb(eval);
  s.fzbzb = fd_dzbzb(eval);
  s.is_real = real;
  s.fd_derivatives = true;
  return s;
}

}  // namespace symbols

cplx poisson_bracket(const Geometry& geom, const Symbol& f, const Symbol& g, cplx z) {
  if (!f.has_first() || !g.has_first())
    throw ConfigError("poisson_bracket: first derivatives required");
  const double gi = geom.metric_inv(z);
  return cplx(0, 1) / (2.0 * kPi) * gi * (f.fz(z) * g.fzb(z) - f.fzb(z) * g.fz(z));
}

cplx c1_coefficient(const Geometry& geom, const Symbol& f, const Symbol& g, cplx z) {
  if (!f.has_first() || !g.has_first())
    throw ConfigError("c1_coefficient: first derivatives required");
  return -geom.metric_inv(z) / (2.0 * kPi) * f.fz(z) * g.fzb(z);
}

cplx c2_coefficient(const Geometry& geom, const Symbol& f, const Symbol& g, cplx z) {
  if (!f.has_second() || !g.has_second())
    throw ConfigError("c2_coefficient: second derivatives required");
  const double gi = geom.metric_inv(z);
  const cplx gam = geom.gamma(z);
  const cplx fcov = f.fzz(z) - gam * f.fz(z);
  const cplx gcov = g.fzbzb(z) - std::conj(gam) * g.fzb(z);
  const double pi2 = kPi * kPi;
  return gi * gi * (fcov * gcov / (8.0 * pi2) + geom.ricci_form(z) * f.fz(z) * g.fzb(z) / (4.0 * pi2));
}

cplx laplace_beltrami(const Geometry& geom, const Symbol& f, cplx z) {
  if (!f.fzzb) throw ConfigError("laplace_beltrami: mixed second derivative required");
  return kLaplaceCoefficient * geom.metric_inv(z) * f.fzzb(z);
}

}  // namespace btq
