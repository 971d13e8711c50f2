#pragma once

#include <complex>

#include <Eigen/Core>

#include "eoent/core_model.hpp"
#include "eoent/covariance.hpp"

namespace eoent {

/// Frequency-domain map from the input noise ports
/// (a_e,o, a_i,o, a_e,mw^dag, a_i,mw^dag) to the monitored outputs
/// (a_o^out(w), a_mw^out^dag(-w)). Only these two rows are ever needed.
struct ScatteringMatrix {
  double freq_offset = 0;  // rad/s
  Eigen::Matrix<std::complex<double>, 2, 4> entries;
};

enum class OutputPort { optical, microwave };

/// Throws InstabilityError for C >= 1.
ScatteringMatrix scattering_matrix(double omega, const DerivedRates& rates);

/// M(w) = (-iw + k_o/2)(-iw + k_mw/2) - |G|^2.
std::complex<double> scattering_denominator(double omega, const DerivedRates& rates);

/// Output photon flux density <a^dag a>(w) in photons / s / Hz, built from
/// |D(w)|^2 weighted by the input occupations.
double output_spectrum(double omega, const DerivedRates& rates, OutputPort port,
                       const ThermalEnvironment& env = {});

/// Zero-temperature closed form 4 C eta_j / (...). Equals output_spectrum
/// with a cold environment.
double output_spectrum_closed_form(double omega, const DerivedRates& rates, OutputPort port);

/// Full width at half maximum of the down-converted spectrum (rad/s).
double emission_bandwidth(const DerivedRates& rates);

/// Total output flux in photons / s: integral of output_spectrum over dw/2pi.
double integrated_flux(const DerivedRates& rates, OutputPort port,
                       const ThermalEnvironment& env = {});

/// Beam-splitter (conversion) regime, stable for every C >= 0.
double conversion_efficiency(double omega, const DerivedRates& rates);
double conversion_bandwidth(const DerivedRates& rates);

/// Quadrature CM of the output pair (a_o(w), a_mw(-w)) at one frequency.
CovarianceMatrix4 spectral_covariance(double omega, const DerivedRates& rates,
                                      const ThermalEnvironment& env = {});

}  // namespace eoent
