#include "eoent/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gsl/gsl_integration.h>

#include "eoent/constants.hpp"
#include "eoent/error.hpp"
#include "eoent/spectral.hpp"

namespace eoent {

using std::numbers::pi;

CovarianceMatrix4 steady_state_cm(double C, double eta_o, double eta_mw, double n_mode) {
  if (!(C >= 0)) throw InvalidParameter("cooperativity", "must be >= 0");
  if (!(C < 1)) throw InstabilityError(C, "the CM diverges at C=1");
  if (!(eta_o >= 0 && eta_o <= 1)) throw InvalidParameter("eta_optical", "must lie in [0, 1]");
  if (!(eta_mw >= 0 && eta_mw <= 1)) throw InvalidParameter("eta_microwave", "must lie in [0, 1]");
  if (!(n_mode >= 0)) throw InvalidParameter("n_mode", "must be >= 0");

  const double d = (1 - C) * (1 - C);
  const double a = 0.5 + 4 * C * (1 + n_mode) * eta_o / d;
  const double b = 0.5 + 4 * (C + n_mode) * eta_mw / d;
  const double c = std::sqrt(4 * eta_o * eta_mw * C) * (1 + C + 2 * n_mode) / d;

  Eigen::Matrix4d V = Eigen::Matrix4d::Zero();
  V(0, 0) = V(1, 1) = a;
  V(2, 2) = V(3, 3) = b;
  V(0, 2) = V(2, 0) = c;
  V(1, 3) = V(3, 1) = -c;
  return CovarianceMatrix4(V);
}

CovarianceMatrix4 steady_state_cm(const DerivedRates& r) {
  return steady_state_cm(r.cooperativity, r.eta_o(), r.eta_mw(), r.n_th_mode);
}

double wigner_density(const CovarianceMatrix4& V, const Eigen::Vector4d& x) {
  Eigen::LDLT<Eigen::Matrix4d> ldlt(V.matrix());
  const double det = V.matrix().fullPivLu().determinant();
  if (ldlt.info() != Eigen::Success || !(det > 1e-300) || ldlt.rcond() < 1e-14)
    throw NumericError("covariance matrix is singular or badly conditioned");
  const double quad = x.dot(ldlt.solve(x));
  return std::exp(-0.5 * quad) / (pi * pi * std::sqrt(det));
}

Eigen::Matrix2d wigner_projection(const CovarianceMatrix4& V, QuadraturePair pair) {
  int i = 0, j = 1;
  switch (pair) {
    case QuadraturePair::optical: i = 0; j = 1; break;
    case QuadraturePair::microwave: i = 2; j = 3; break;
    case QuadraturePair::q_cross: i = 0; j = 2; break;
    case QuadraturePair::p_cross: i = 1; j = 3; break;
    default: throw InvalidParameter("pair", "unknown quadrature pair");
  }
  Eigen::Matrix2d m;
  m << V(i, i), V(i, j), V(j, i), V(j, j);
  return m;
}

SqueezingReport squeezing_analysis(const CovarianceMatrix4& V) {
  const double v11 = V(0, 0), v33 = V(2, 2), v13 = V(0, 2);
  SqueezingReport s;

  // Eigenvalues of the (q_o, q_mw) marginal.
  const double mean = 0.5 * (v11 + v33);
  const double rad = std::hypot(0.5 * (v11 - v33), v13);
  s.var_minus = mean - rad;
  s.var_plus = mean + rad;

  const double scale = std::max({1.0, std::abs(v11), std::abs(v33)});
  const bool no_corr = std::abs(v13) <= 1e-15 * scale;
  if (no_corr && std::abs(v33 - v11) <= 1e-15 * scale) {
    s.degenerate = true;
    s.angle_theta = 45.0;
  } else {
    s.angle_theta = 0.5 * std::atan2(2 * std::abs(v13), std::abs(v33 - v11)) * 180.0 / pi;
  }

  s.purity = 1.0 / (2.0 * std::sqrt(s.var_minus * s.var_plus));
  s.r_eo = -0.5 * std::log(2.0 * s.var_minus);
  return s;
}

double partial_transpose_min(const CovarianceMatrix4& V) {
  const double det_a = V.optical_block().determinant();
  const double det_b = V.microwave_block().determinant();
  const double det_c = V.correlation_block().determinant();
  const double delta = det_a + det_b - 2 * det_c;
  const double det = V.matrix().fullPivLu().determinant();
  double disc = delta * delta - 4 * det;
  const double scale = std::max(1.0, delta * delta);
  if (disc < -1e-10 * scale) throw NumericError("negative discriminant: covariance matrix is unphysical");
  disc = std::max(0.0, disc);
  // delta - sqrt(disc) cancels badly for strongly entangled states; use det / larger root.
  const double big = 0.5 * (delta + std::sqrt(disc));
  if (!(big > 0)) throw NumericError("covariance matrix is unphysical");
  return std::sqrt(std::max(0.0, det / big));
}

double entanglement_formation_from_min(double d) {
  if (!(d > 0)) throw NumericError("symplectic eigenvalue must be positive");
  if (d >= 0.5) return 0.0;
  const double xm = std::max(0.5, (d * d + 0.25) / (2 * d));
  auto xlog = [](double x) { return x > 0 ? x * std::log2(x) : 0.0; };
  return xlog(xm + 0.5) - xlog(xm - 0.5);
}

double entanglement_formation(const CovarianceMatrix4& V) {
  return entanglement_formation_from_min(partial_transpose_min(V));
}

EntanglementReport log_negativity(const CovarianceMatrix4& V) {
  EntanglementReport e;
  e.symplectic_min = partial_transpose_min(V);
  e.log_negativity = std::max(0.0, -std::log2(2 * e.symplectic_min));
  e.entanglement_formation = entanglement_formation_from_min(e.symplectic_min);
  return e;
}

CovarianceMatrix4 band_averaged_cm(const DerivedRates& r, const ThermalEnvironment& env, int points) {
  if (points < 1) throw InvalidParameter("points", "must be >= 1");
  if (!(r.cooperativity < 1)) throw InstabilityError(r.cooperativity);
  const double half = emission_bandwidth(r) / 2;
  if (half == 0) return spectral_covariance(0, r, env);

  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(points);
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (int k = 0; k < points; ++k) {
    double x = 0, w = 0;
    gsl_integration_glfixed_point(-half, half, k, &x, &w, t);
    acc += w * spectral_covariance(x, r, env).matrix();
  }
  gsl_integration_glfixed_table_free(t);
  return CovarianceMatrix4(acc / (2 * half));
}

EntanglementReport ebit_rate(const DerivedRates& r, const ThermalEnvironment& env, int points) {
  EntanglementReport e = log_negativity(band_averaged_cm(r, env, points));
  e.bandwidth = emission_bandwidth(r);
  e.ebit_rate = e.entanglement_formation * e.bandwidth / constants::two_pi;
  return e;
}

EbitOptimum maximize_ebit_rate(const DerivedRates& rates, const ThermalEnvironment& env,
                               double lo, double hi, double tol) {
  if (!(lo >= 0 && hi < 1 && lo < hi)) throw InvalidParameter("cooperativity", "need 0 <= lo < hi < 1");
  auto f = [&](double C) { return ebit_rate(rates.with_cooperativity(C), env).ebit_rate; };

  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  EbitOptimum best;
  best.cooperativity = 0.5 * (a + b);
  best.report = ebit_rate(rates.with_cooperativity(best.cooperativity), env);
  return best;
}

}  // namespace eoent
