#pragma once

#include <vector>

#include "btq/quantum_space.hpp"

namespace btq {

/// Dense operator in the ONB of a QuantumSpace.
struct OperatorMatrix {
  Eigen::MatrixXcd M;
  bool hermitian = false;
  std::string label;
  int p = 0;
};

enum class AssemblyMode {
  parallel,  // OpenMP over matrix diagonals (production path)
  serial,    // identical contraction, single thread (reference)
  direct2d   // raw 2-D node loop (small-size testing oracle)
};

/// T_{f,p} in the ONB: M_ij = <f e_j, e_i> by quadrature. The production
/// path angular-transforms the symbol once per radial node and contracts
/// per matrix diagonal; every entry is a fixed-order compensated sum, so
/// results are identical across modes and thread counts.
OperatorMatrix assemble_toeplitz(const QuantumSpace& space, const Symbol& f,
                                 AssemblyMode mode = AssemblyMode::parallel,
                                 const Tolerances& tol = {});

/// Kernel value T(x,x') = sum_ij e_i(x) M_ij conj(e_j(x')).
cplx toeplitz_kernel(const QuantumSpace& space, const Eigen::MatrixXcd& M, cplx x, cplx xp);

/// Coherent-state expectation sigma(M)(x) = <M s_x, s_x>/||s_x||^2.
cplx berezin_symbol(const QuantumSpace& space, const Eigen::MatrixXcd& M, cplx x);

/// B_p f(x) = T_{f,p}(x,x) / P_p(x,x) = sigma(T_{f,p})(x).
cplx berezin_transform(const QuantumSpace& space, const OperatorMatrix& Tf, cplx x);

/// Closed-form Toeplitz matrix of z^az conj(z)^azb on the flat model space
/// (the exactly solvable oracle family).
Eigen::MatrixXcd bargmann_monomial_toeplitz(int p, double a, int d, int az, int azb);

/// Independent reconstruction T_f = int f(x) Pi_p(x) P_p(x,x) dv(x) using the
/// quadrature rule of `fine` (a second, refined space at the same level).
OperatorMatrix coherent_reconstruction(const QuantumSpace& space, const QuantumSpace& fine,
                                       const Symbol& f);

struct DefectRow {
  int p = 0;
  double e0 = 0.0;  // ||T_f T_g - T_{fg}||
  double e1 = 0.0;  // ||T_f T_g - T_{fg} - p^{-1} T_{C1(f,g)}||
};
std::vector<DefectRow> product_defect(const std::vector<const QuantumSpace*>& spaces,
                                      const Symbol& f, const Symbol& g);

struct CommutatorRow {
  int p = 0;
  double defect = 0.0;  // ||(p/i)[T_f,T_g] - T_{{f,g}}||
};
std::vector<CommutatorRow> commutator_defect(const std::vector<const QuantumSpace*>& spaces,
                                             const Symbol& f, const Symbol& g);

struct NormRow {
  int p = 0;
  double norm = 0.0;
  double gap = 0.0;  // sup|f| - ||T_{f,p}||
};
std::vector<NormRow> norm_convergence(const std::vector<const QuantumSpace*>& spaces,
                                      const Symbol& f);

/// Star-product coefficient estimates at a point, from the inductive
/// diagonal-ratio scheme with Richardson extrapolation over the levels.
struct StarCoefficients {
  cplx g0{}, g1{}, g2{};
  double res0 = 0.0, res1 = 0.0, res2 = 0.0;
  bool low_confidence = false;
};
StarCoefficients star_coefficient_extract(const std::vector<const QuantumSpace*>& spaces,
                                          const Symbol& f, const Symbol& g, cplx x,
                                          int r_max = 2);

/// Residual of sum_{r+s=k} C_r(f, C_s(g,h)) = sum_{r+s=k} C_r(C_s(f,g), h).
double star_associativity_check(const Geometry& geom, const Symbol& f, const Symbol& g,
                                const Symbol& h, cplx x, int k);

}  // namespace btq
