#pragma once

#include <map>
#include <vector>

#include "btq/common.hpp"
#include "btq/numerics.hpp"

namespace btq {

/// Weights 0 < a_1 <= ... <= a_n of the flat model on C^n.
struct ModelWeights {
  std::vector<double> a;
  explicit ModelWeights(std::vector<double> weights);
  int n() const { return static_cast<int>(a.size()); }
};

/// Polynomial in (Z, Z') multiplying the Gaussian model kernel.
/// Exponents are stored in the four-alphabet basis: for each coordinate i,
/// key[4i+0] = power of z_i, key[4i+1] = power of conj z_i,
/// key[4i+2] = power of z'_i, key[4i+3] = power of conj z'_i.
class PolyKernel {
 public:
  using Key = std::vector<int>;

  explicit PolyKernel(int n) : n_(n) {}
  static PolyKernel one(int n);
  /// Single monomial with coefficient c.
  static PolyKernel monomial(int n, const Key& key, cplx c);

  int n() const { return n_; }
  const std::map<Key, cplx>& coefficients() const { return coef_; }
  void add(const Key& key, cplx c);
  int degree() const;
  bool empty() const { return coef_.empty(); }

  cplx eval(const std::vector<cplx>& Z, const std::vector<cplx>& Zp) const;

  PolyKernel operator+(const PolyKernel& o) const;
  PolyKernel operator*(cplx s) const;
  /// Multiplies each monomial coefficient by factor^degree; realizes
  /// F(c Z, c Z') for real c.
  PolyKernel scale_points(double factor) const;

 private:
  int n_;
  std::map<Key, cplx> coef_;
};

/// Gaussian model kernel P(Z,Z') = prod(a_i/2pi) exp(-1/4 sum a_i
/// (|z_i|^2 + |z'_i|^2 - 2 z_i conj z'_i)).
cplx model_kernel(const ModelWeights& w, const std::vector<cplx>& Z, const std::vector<cplx>& Zp);

/// Orthonormal eigenbasis element of the ground space:
/// phi_beta(z) = (a^beta prod a_i / ((2pi)^n 2^{|beta|} beta!))^{1/2}
///               z^beta exp(-1/4 sum a_j |z_j|^2).
cplx onb_phi(const ModelWeights& w, const std::vector<int>& beta, const std::vector<cplx>& z);

struct SpectrumEntry {
  double eigenvalue = 0.0;
  long lattice_count = 0;  // number of alpha with 2 sum a_i alpha_i = eigenvalue
  bool infinite_l2_multiplicity = true;
};

/// Model operator spectrum {2 sum a_i alpha_i} up to the cutoff, sorted
/// ascending with alpha-lattice counts. The L^2 multiplicity itself is
/// infinite and reported only as a flag.
std::vector<SpectrumEntry> model_spectrum(const ModelWeights& w, double cutoff);

/// Composition (F P) o (G P) = K[F,G] P, computed by closed-form Gaussian
/// moment reduction (never runtime quadrature).
PolyKernel kernel_compose(const ModelWeights& w, const PolyKernel& F, const PolyKernel& G);

/// p^n (F P)(sqrt(p) Z, sqrt(p) Z').
cplx rescaled_kernel(const ModelWeights& w, const PolyKernel& F, int p,
                     const std::vector<cplx>& Z, const std::vector<cplx>& Zp);

}  // namespace btq
