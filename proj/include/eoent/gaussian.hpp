#pragma once

#include <Eigen/Core>

#include "eoent/core_model.hpp"
#include "eoent/covariance.hpp"

namespace eoent {

struct SqueezingReport {
  double angle_theta = 0;  // degrees
  double var_minus = 0.5;
  double var_plus = 0.5;
  double purity = 1;
  double r_eo = 0;
  bool degenerate = false;  // V11 == V33 and V13 == 0: angle undefined, reported as 45
};

struct EntanglementReport {
  double log_negativity = 0;  // ebits
  double symplectic_min = 0.5;
  double entanglement_formation = 0;
  double ebit_rate = 0;       // ebit/s
  double bandwidth = 0;       // rad/s
};

/// Closed-form steady-state CM in the (q_o, p_o, q_mw, p_mw) basis.
/// Throws InstabilityError for C >= 1.
CovarianceMatrix4 steady_state_cm(double C, double eta_o, double eta_mw, double n_mode);
CovarianceMatrix4 steady_state_cm(const DerivedRates& rates);

/// W(x) = exp(-x V^-1 x / 2) / (pi^2 sqrt(det V)).
double wigner_density(const CovarianceMatrix4& V, const Eigen::Vector4d& x);

enum class QuadraturePair { optical, microwave, q_cross, p_cross };

/// Marginal CM of one quadrature pair (the 2x2 submatrix of V).
Eigen::Matrix2d wigner_projection(const CovarianceMatrix4& V, QuadraturePair pair);

/// Principal squeezed / anti-squeezed variances of the (q_o, q_mw) marginal.
SqueezingReport squeezing_analysis(const CovarianceMatrix4& V);

/// Smallest symplectic eigenvalue of the partial transpose.
double partial_transpose_min(const CovarianceMatrix4& V);

/// Fills log_negativity, symplectic_min and entanglement_formation.
EntanglementReport log_negativity(const CovarianceMatrix4& V);

double entanglement_formation(const CovarianceMatrix4& V);
double entanglement_formation_from_min(double symplectic_min);

/// CM averaged over |w| <= BW/2 with a Gauss-Legendre rule.
CovarianceMatrix4 band_averaged_cm(const DerivedRates& rates, const ThermalEnvironment& env = {},
                                   int points = 64);

/// E_F of the band-averaged CM times BW / 2pi. All report fields are set.
EntanglementReport ebit_rate(const DerivedRates& rates, const ThermalEnvironment& env = {},
                             int points = 64);

struct EbitOptimum {
  double cooperativity = 0;
  EntanglementReport report;
};

/// Golden-section search of the ebit rate over C in [c_lo, c_hi].
EbitOptimum maximize_ebit_rate(const DerivedRates& rates, const ThermalEnvironment& env = {},
                               double c_lo = 0.01, double c_hi = 0.95, double tol = 1e-4);

}  // namespace eoent
