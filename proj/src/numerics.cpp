#include "btq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace btq {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    double wi = 2.0 / ((1.0 - z * z) * pp * pp);
    w[i] = wi;
    w[n - 1 - i] = wi;
  }
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid + half * x[i];
    w[i] *= half;
  }
  return {x, w};
}

QuadratureRule radial_angular_rule(int n_radial, int n_angular, double radius) {
  if (n_radial < 4 || n_angular < 4) throw ConfigError("radial_angular_rule: sizes must be >= 4");
  if (!(radius > 0)) throw ConfigError("radial_angular_rule: radius must be positive");
  auto [t, wt] = gauss_legendre(n_radial, 0.0, radius * radius);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<size_t>(n_radial) * n_angular);
  rule.weights.reserve(static_cast<size_t>(n_radial) * n_angular);
  const double wth = 2.0 * kPi / n_angular;
  for (int i = 0; i < n_radial; ++i) {
    const double r = std::sqrt(t[i]);
    for (int j = 0; j < n_angular; ++j) {
      const double th = wth * j;
      rule.nodes.push_back(cplx(r * std::cos(th), r * std::sin(th)));
      // dxdy = r dr dtheta = (1/2) dt dtheta
      rule.weights.push_back(0.5 * wt[i] * wth);
    }
  }
  return rule;
}

EigenResult hermitian_eigen(const Eigen::MatrixXcd& M, const Tolerances& tol) {
  const Eigen::Index d = M.rows();
  if (d != M.cols()) throw ConfigError("hermitian_eigen: square matrix required");
  const double asym = (M - M.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.hermitian_input)
    throw NumericsError("hermitian_eigen: input not Hermitian within tolerance (max |M - M*| = " +
                        std::to_string(asym) + ")");
  Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw NumericsError("hermitian_eigen: eigensolver failed");
  EigenResult out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  // Contract checks: unitarity and reconstruction.
  const double uerr =
      (out.vectors.adjoint() * out.vectors - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (uerr > tol.eigen_unitarity)
    throw NumericsError("hermitian_eigen: eigenvector unitarity violated");
  const double scale = std::max(1e-300, H.cwiseAbs().maxCoeff());
  const double rerr =
      (H - out.vectors * out.values.asDiagonal() * out.vectors.adjoint()).cwiseAbs().maxCoeff();
  if (rerr > tol.eigen_reconstruction * std::max(1.0, scale) * std::max<double>(8.0, double(d)))
    throw NumericsError("hermitian_eigen: reconstruction error too large");
  return out;
}

double operator_norm(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  if (M.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::MatrixXcd G = M.adjoint() * M;
  // Scale so the Hermiticity tolerance is meaningful for any magnitude.
  const double s = G.cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G / s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericsError("operator_norm: eigensolver failed");
  const double lmax = std::max(0.0, es.eigenvalues().maxCoeff());
  return std::sqrt(lmax * s);
}

FitResult fit_inverse_powers(const std::vector<std::pair<int, cplx>>& data, int order) {
  if (order < 0) throw ConfigError("fit_inverse_powers: order must be >= 0");
  const int m = static_cast<int>(data.size());
  if (m < order + 2) throw ConfigError("fit_inverse_powers: need at least order+2 data points");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (data[i].first == data[j].first)
        throw ConfigError("fit_inverse_powers: p values must be distinct");
  Eigen::MatrixXcd A(m, order + 1);
  Eigen::VectorXcd b(m);
  for (int i = 0; i < m; ++i) {
    const double x = 1.0 / double(data[i].first);
    double pw = 1.0;
    for (int r = 0; r <= order; ++r) {
      A(i, r) = pw;
      pw *= x;
    }
    b(i) = data[i].second;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
  FitResult out;
  const auto& R = qr.matrixR();
  double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (int r = 0; r <= order; ++r) {
    const double v = std::abs(R(r, r));
    rmax = std::max(rmax, v);
    rmin = std::min(rmin, v);
  }
  out.condition_estimate = (rmin > 0) ? rmax / rmin : std::numeric_limits<double>::infinity();
  if (qr.rank() < order + 1)
    throw NumericsError("fit_inverse_powers: rank-deficient system, condition estimate " +
                        std::to_string(out.condition_estimate));
  Eigen::VectorXcd c = qr.solve(b);
  out.coefficients.assign(c.data(), c.data() + c.size());
  out.residual_norm = (A * c - b).norm();
  return out;
}

std::pair<double, double> decay_slope(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) throw ConfigError("decay_slope: need at least 3 points");
  for (size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i].first > pts[i - 1].first))
      throw ConfigError("decay_slope: abscissae must be strictly increasing");
  KahanSum sx, sy, sxx, sxy;
  for (const auto& [x, y] : pts) {
    sx.add(x);
    sy.add(y);
    sxx.add(x * x);
    sxy.add(x * y);
  }
  const double n = double(pts.size());
  const double det = n * sxx.value() - sx.value() * sx.value();
  const double slope = (n * sxy.value() - sx.value() * sy.value()) / det;
  const double intercept = (sy.value() - slope * sx.value()) / n;
  return {slope, intercept};
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fft_pow2: size must be a power of two");
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * kPi / double(len) * (inverse ? 1.0 : -1.0);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse)
    for (auto& x : a) x /= double(n);
}

}  // namespace btq
