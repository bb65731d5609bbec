#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace btq {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Raised for invalid user input: bad sizes, unknown names, rules that do
/// not cover a symbol's support. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical contract is violated: non-Hermitian input,
/// non-positive Gram, rank deficiency, failed stability gates.
/// Maps to CLI exit code 3.
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Central tolerance record. Every check reports measured-vs-threshold;
/// these are the defaults, overridable from the run configuration.
struct Tolerances {
  double hermitian_input = 1e-10;     // max |M - M^*| accepted as Hermitian
  double eigen_unitarity = 1e-9;      // ||V^*V - I||_max
  double eigen_reconstruction = 1e-9; // ||M - V L V^*||_max / ||M||_max
  double fit_exact_residual = 1e-12;  // residual when data lies in span
  double gram_identity = 1e-9;        // ||C G C^* - I||_max
  double quadrature_stability = 1e-9; // Gram diagonal change under refinement
  double truncation_stability = 1e-8; // kernel diagonal change when N doubles
  double reproduce_residual = 1e-7;   // projection identity on members
  double semigroup = 1e-7;            // P∘P = P by quadrature
  double coherent_norm_rel = 1e-10;   // ||s_x||^2 vs P_p(x,x)
  double coherent_reconstruction = 1e-7; // entrywise quantization rebuild
  double norm_upper_slack = 1e-8;     // ||T_f|| <= sup|f| + slack
  double berezin_unital = 1e-10;      // B_p 1 = 1
  double model_kernel_rel = 1e-8;     // quadrature space vs closed form
  double onb_norm_rel = 1e-9;         // monomial norms vs Gamma closed form
  double compose_oracle = 1e-8;       // moment engine vs 2-D quadrature
  double compose_assoc = 1e-10;       // K[K[F,G],H] = K[F,K[G,H]]
  double model_algebra = 1e-10;       // terminating Toeplitz identities
  double eig_trace_consistency = 1e-8; // sum lambda^m vs Tr M^m
  double zero_eigen_rel = 1e-12;      // spectrum threshold, relative to sup|f|
};

}  // namespace btq
