#include "btq/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace btq {

namespace {

void check_key(const PolyKernel::Key& key, int n) {
  if (static_cast<int>(key.size()) != 4 * n)
    throw ConfigError("PolyKernel: exponent key must have 4n entries");
  for (int e : key)
    if (e < 0) throw ConfigError("PolyKernel: exponents must be nonnegative");
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

cplx ipow(cplx z, int k) {
  cplx r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

ModelWeights::ModelWeights(std::vector<double> weights) : a(std::move(weights)) {
  if (a.empty()) throw ConfigError("ModelWeights: at least one weight required");
  for (size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0)) throw ConfigError("ModelWeights: weights must be positive");
    if (i > 0 && a[i] < a[i - 1]) throw ConfigError("ModelWeights: weights must be ascending");
  }
}

PolyKernel PolyKernel::one(int n) {
  PolyKernel F(n);
  F.add(Key(4 * n, 0), cplx(1.0, 0.0));
  return F;
}

PolyKernel PolyKernel::monomial(int n, const Key& key, cplx c) {
  PolyKernel F(n);
  F.add(key, c);
  return F;
}

void PolyKernel::add(const Key& key, cplx c) {
  check_key(key, n_);
  cplx& slot = coef_[key];
  slot += c;
  if (std::abs(slot) == 0.0) coef_.erase(key);
}

int PolyKernel::degree() const {
  int d = 0;
  for (const auto& [key, c] : coef_) {
    int tot = 0;
    for (int e : key) tot += e;
    d = std::max(d, tot);
  }
  return d;
}

cplx PolyKernel::eval(const std::vector<cplx>& Z, const std::vector<cplx>& Zp) const {
  if (static_cast<int>(Z.size()) != n_ || static_cast<int>(Zp.size()) != n_)
    throw ConfigError("PolyKernel::eval: dimension mismatch");
  KahanCSum acc;
  for (const auto& [key, c] : coef_) {
    cplx term = c;
    for (int i = 0; i < n_; ++i) {
      term *= ipow(Z[i], key[4 * i + 0]);
      term *= ipow(std::conj(Z[i]), key[4 * i + 1]);
      term *= ipow(Zp[i], key[4 * i + 2]);
      term *= ipow(std::conj(Zp[i]), key[4 * i + 3]);
    }
    acc.add(term);
  }
  return acc.value();
}

PolyKernel PolyKernel::operator+(const PolyKernel& o) const {
  if (o.n_ != n_) throw ConfigError("PolyKernel: dimension mismatch");
  PolyKernel r = *this;
  for (const auto& [key, c] : o.coef_) r.add(key, c);
  return r;
}

PolyKernel PolyKernel::operator*(cplx s) const {
  PolyKernel r(n_);
  if (std::abs(s) == 0.0) return r;
  for (const auto& [key, c] : coef_) r.add(key, c * s);
  return r;
}

PolyKernel PolyKernel::scale_points(double factor) const {
  PolyKernel r(n_);
  for (const auto& [key, c] : coef_) {
    int tot = 0;
    for (int e : key) tot += e;
    r.add(key, c * std::pow(factor, tot));
  }
  return r;
}

cplx model_kernel(const ModelWeights& w, const std::vector<cplx>& Z, const std::vector<cplx>& Zp) {
  const int n = w.n();
  if (static_cast<int>(Z.size()) != n || static_cast<int>(Zp.size()) != n)
    throw ConfigError("model_kernel: dimension mismatch");
  double pref = 1.0;
  cplx expo(0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    pref *= w.a[i] / (2.0 * kPi);
    expo += -0.25 * w.a[i] *
            (std::norm(Z[i]) + std::norm(Zp[i]) - 2.0 * Z[i] * std::conj(Zp[i]));
  }
  return pref * std::exp(expo);
}

cplx onb_phi(const ModelWeights& w, const std::vector<int>& beta, const std::vector<cplx>& z) {
  const int n = w.n();
  if (static_cast<int>(beta.size()) != n || static_cast<int>(z.size()) != n)
    throw ConfigError("onb_phi: dimension mismatch");
  double lognorm2 = 0.0;  // log of a^beta prod a_i / ((2pi)^n 2^{|beta|} beta!)
  cplx mono(1.0, 0.0);
  double expo = 0.0;
  for (int i = 0; i < n; ++i) {
    if (beta[i] < 0) throw ConfigError("onb_phi: multi-index must be nonnegative");
    lognorm2 += beta[i] * std::log(w.a[i]) + std::log(w.a[i]) - std::log(2.0 * kPi) -
                beta[i] * std::log(2.0) - std::log(factorial(beta[i]));
    mono *= ipow(z[i], beta[i]);
    expo += -0.25 * w.a[i] * std::norm(z[i]);
  }
  return std::exp(0.5 * lognorm2) * mono * std::exp(expo);
}

std::vector<SpectrumEntry> model_spectrum(const ModelWeights& w, double cutoff) {
  if (cutoff < 0) throw ConfigError("model_spectrum: cutoff must be >= 0");
  std::vector<double> values;
  std::function<void(int, double)> rec = [&](int i, double acc) {
    if (i == w.n()) {
      values.push_back(acc);
      return;
    }
    for (int alpha = 0;; ++alpha) {
      const double v = acc + 2.0 * w.a[i] * alpha;
      if (v > cutoff + 1e-12) break;
      rec(i + 1, v);
    }
  };
  rec(0, 0.0);
  std::sort(values.begin(), values.end());
  std::vector<SpectrumEntry> out;
  for (double v : values) {
    if (!out.empty() && std::abs(v - out.back().eigenvalue) < 1e-9) {
      ++out.back().lattice_count;
    } else {
      out.push_back({v, 1, true});
    }
  }
  return out;
}

PolyKernel kernel_compose(const ModelWeights& w, const PolyKernel& F, const PolyKernel& G) {
  const int n = w.n();
  if (F.n() != n || G.n() != n) throw ConfigError("kernel_compose: dimension mismatch");
  PolyKernel K(n);
  // For each coordinate the W-integral reduces to central Gaussian moments
  // after the shift w -> w + z, wbar -> wbar + conj z'; the cross moments are
  // <w^i wbar^j> = delta_ij j! (2/a)^j.
  for (const auto& [kf, cf] : F.coefficients()) {
    for (const auto& [kg, cg] : G.coefficients()) {
      // Iterate over the per-coordinate moment index j_i.
      std::vector<int> m(n), k(n), j(n, 0);
      for (int i = 0; i < n; ++i) {
        m[i] = kf[4 * i + 2] + kg[4 * i + 0];  // total w_i power
        k[i] = kf[4 * i + 3] + kg[4 * i + 1];  // total wbar_i power
      }
      while (true) {
        cplx c = cf * cg;
        PolyKernel::Key key(4 * n, 0);
        for (int i = 0; i < n; ++i) {
          c *= binom(m[i], j[i]) * binom(k[i], j[i]) * factorial(j[i]) *
               std::pow(2.0 / w.a[i], j[i]);
          key[4 * i + 0] = kf[4 * i + 0] + (m[i] - j[i]);
          key[4 * i + 1] = kf[4 * i + 1];
          key[4 * i + 2] = kg[4 * i + 2];
          key[4 * i + 3] = kg[4 * i + 3] + (k[i] - j[i]);
        }
        K.add(key, c);
        // Advance the multi-index j, bounded by min(m_i, k_i) per coordinate.
        int i = 0;
        for (; i < n; ++i) {
          if (j[i] < std::min(m[i], k[i])) {
            ++j[i];
            break;
          }
          j[i] = 0;
        }
        if (i == n) break;
      }
    }
  }
  return K;
}

cplx rescaled_kernel(const ModelWeights& w, const PolyKernel& F, int p,
                     const std::vector<cplx>& Z, const std::vector<cplx>& Zp) {
  if (p < 1) throw ConfigError("rescaled_kernel: p must be >= 1");
  const double sp = std::sqrt(double(p));
  std::vector<cplx> sZ(Z), sZp(Zp);
  for (auto& z : sZ) z *= sp;
  for (auto& z : sZp) z *= sp;
  return std::pow(double(p), w.n()) * F.eval(sZ, sZp) * model_kernel(w, sZ, sZp);
}

}  // namespace btq
