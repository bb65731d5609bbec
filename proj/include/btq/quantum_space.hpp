#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "btq/common.hpp"
#include "btq/geometry.hpp"
#include "btq/numerics.hpp"

namespace btq {

struct BuildOptions {
  int n_radial = 0;   // nodes per radial segment; 0 = auto
  int n_angular = 0;  // 0 = auto (power of two >= 2N + 64)
  bool lebesgue_volume = false;  // raw Lebesgue normalization for oracles
  std::vector<double> kinks_t;   // extra radial segment boundaries, t = r^2
  bool generic_cross_check = true;  // pivoted-Cholesky path at reduced size
  bool quadrature_gate = true;      // Gram stability under rule refinement
  bool truncation_gate = false;     // kernel stability when N doubles
  std::vector<cplx> gate_probes;    // defaults if empty
  Tolerances tol;
};

/// Truncated orthonormalized space of L^2 holomorphic sections at level p.
/// The monomial basis z^k, k < N, is orthogonal for all three radial
/// geometries; the Gram matrix is diagonal and kept in log scale so the
/// construction is stable at any basis size.
class QuantumSpace {
 public:
  Geometry geom = Geometry::bargmann(1.0);
  int p = 0;
  int N = 0;  // raw monomial count requested
  int d = 0;  // retained dimension after the conditioning cutoff
  bool lebesgue = false;

  std::vector<double> t, w, dens;  // radial rule in t = r^2 and volume density
  std::vector<double> logt;        // cached log of nodes
  std::vector<double> lognu;       // log Gram diagonal, size d
  Eigen::MatrixXd base;            // d x nt scaled radial basis values
  int n_angular = 0;

  int radial_count() const { return static_cast<int>(t.size()); }

  /// ONB section values e_k(x), including the frame factor e^{-p kappa/2}.
  Eigen::VectorXcd section_values(cplx x) const;

  cplx bergman_kernel(cplx x, cplx xp) const;
  double kernel_diag(cplx x) const;

  /// Quadrature residual of the projection semigroup identity
  /// int P(x,w) P(w,x') dv(w) = P(x,x').
  double semigroup_residual(cplx x, cplx xp) const;

  /// Residual of the reproducing identity on a member section given by ONB
  /// coefficients, maximized over the probe points.
  double reproduce_residual(const Eigen::VectorXcd& coeffs,
                            const std::vector<cplx>& probes) const;

  /// Projects an arbitrary function and reports max |(P h)(x) - h(x)|.
  double project_function_residual(const std::function<cplx(cplx)>& h,
                                   const std::vector<cplx>& probes) const;

  /// Materialized Gram / ONB matrices (small N only; log-scale data is the
  /// primary representation).
  Eigen::MatrixXcd gram_matrix() const;
  Eigen::MatrixXcd onb_coeffs() const;

  /// Visits planar nodes with their omega-volume (or Lebesgue) weights.
  template <class F>
  void for_each_node(F&& fn) const {
    const double dth = 2.0 * kPi / n_angular;
    for (size_t i = 0; i < t.size(); ++i) {
      const double r = std::sqrt(t[i]);
      const double c = 0.5 * w[i] * dth * dens[i];
      for (int j = 0; j < n_angular; ++j) {
        const double th = dth * j;
        fn(cplx(r * std::cos(th), r * std::sin(th)), c, static_cast<int>(i), j);
      }
    }
  }
};

QuantumSpace build_space(const Geometry& geom, int p, int N, const BuildOptions& opts = {});

/// Default truncation: enough modes to cover |z| <= cover_radius with a
/// concentration-width buffer.
int default_truncation(const Geometry& geom, int p, double cover_radius);

struct CoherentVector {
  cplx center;
  Eigen::VectorXcd coeffs;  // in the ONB
  double norm2 = 0.0;       // equals P_p(x,x)
};

CoherentVector coherent_state(const QuantumSpace& space, cplx x);

}  // namespace btq
