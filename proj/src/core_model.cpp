#include "eoent/core_model.hpp"

#include <cmath>
#include <limits>

#include "eoent/constants.hpp"
#include "eoent/error.hpp"

namespace eoent {

using constants::hbar;
using constants::k_boltzmann;
using constants::two_pi;

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw InvalidParameter(field, what);
}

// kappa_i from a linear frequency and Q; kappa from kappa_i and eta.
double internal_rate(double freq, double q) { return two_pi * freq / q; }

}  // namespace

SystemParams SystemParams::reference() { return SystemParams{}; }

void SystemParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(microwave_freq) && microwave_freq > 0, "microwave_freq", "must be > 0");
  require(finite(optical_freq) && optical_freq > 0, "optical_freq", "must be > 0");
  if (pump_freq) require(finite(*pump_freq) && *pump_freq > 0, "pump_freq", "must be > 0");
  require(finite(vacuum_coupling) && vacuum_coupling >= 0, "vacuum_coupling", "must be >= 0");
  require(q_int_microwave > 0, "q_int_microwave", "must be > 0");
  require(q_int_optical > 0, "q_int_optical", "must be > 0");
  require(eta_microwave >= 0 && eta_microwave <= 1, "eta_microwave", "must lie in [0, 1]");
  require(eta_optical >= 0 && eta_optical <= 1, "eta_optical", "must lie in [0, 1]");
  require(finite(pump_power) && pump_power >= 0, "pump_power", "must be >= 0");
  require(finite(bath_temp) && bath_temp >= 0, "bath_temp", "must be >= 0");
  require(finite(waveguide_temp) && waveguide_temp >= 0, "waveguide_temp", "must be >= 0");
}

const std::vector<std::string>& SystemParams::field_names() {
  static const std::vector<std::string> names = {
      "microwave_freq", "optical_freq",  "pump_freq",    "vacuum_coupling",
      "q_int_microwave", "q_int_optical", "eta_microwave", "eta_optical",
      "pump_power",     "bath_temp",     "waveguide_temp"};
  return names;
}

double SystemParams::get(std::string_view f) const {
  if (f == "microwave_freq") return microwave_freq;
  if (f == "optical_freq") return optical_freq;
  if (f == "pump_freq") return effective_pump_freq();
  if (f == "vacuum_coupling") return vacuum_coupling;
  if (f == "q_int_microwave") return q_int_microwave;
  if (f == "q_int_optical") return q_int_optical;
  if (f == "eta_microwave") return eta_microwave;
  if (f == "eta_optical") return eta_optical;
  if (f == "pump_power") return pump_power;
  if (f == "bath_temp") return bath_temp;
  if (f == "waveguide_temp") return waveguide_temp;
  throw InvalidParameter(std::string(f), "unknown parameter");
}

void SystemParams::set(std::string_view f, double v) {
  if (f == "microwave_freq") microwave_freq = v;
  else if (f == "optical_freq") optical_freq = v;
  else if (f == "pump_freq") pump_freq = v;
  else if (f == "vacuum_coupling") vacuum_coupling = v;
  else if (f == "q_int_microwave") q_int_microwave = v;
  else if (f == "q_int_optical") q_int_optical = v;
  else if (f == "eta_microwave") eta_microwave = v;
  else if (f == "eta_optical") eta_optical = v;
  else if (f == "pump_power") pump_power = v;
  else if (f == "bath_temp") bath_temp = v;
  else if (f == "waveguide_temp") waveguide_temp = v;
  else throw InvalidParameter(std::string(f), "unknown parameter");
}

DerivedRates DerivedRates::from_kappas(double kappa_e_o, double kappa_i_o,
                                       double kappa_e_mw, double kappa_i_mw,
                                       double multi_photon_G, double n_internal) {
  require(kappa_e_o >= 0 && kappa_i_o >= 0, "kappa_o", "loss rates must be >= 0");
  require(kappa_e_mw >= 0 && kappa_i_mw >= 0, "kappa_mw", "loss rates must be >= 0");
  require(kappa_e_o + kappa_i_o > 0, "kappa_o", "total loss must be > 0");
  require(kappa_e_mw + kappa_i_mw > 0, "kappa_mw", "total loss must be > 0");
  require(multi_photon_G >= 0, "multi_photon_G", "must be >= 0");
  require(n_internal >= 0, "n_internal", "must be >= 0");

  DerivedRates r;
  r.kappa_e_o = kappa_e_o;
  r.kappa_i_o = kappa_i_o;
  r.kappa_e_mw = kappa_e_mw;
  r.kappa_i_mw = kappa_i_mw;
  r.kappa_o = kappa_e_o + kappa_i_o;
  r.kappa_mw = kappa_e_mw + kappa_i_mw;
  r.delta_kappa_o = kappa_e_o - kappa_i_o;
  r.delta_kappa_mw = kappa_e_mw - kappa_i_mw;
  r.multi_photon_G = multi_photon_G;
  r.cooperativity = 4.0 * multi_photon_G * multi_photon_G / (r.kappa_o * r.kappa_mw);
  r.n_th_internal = n_internal;
  r.n_th_mode = mode_occupancy(r, n_internal);
  return r;
}

DerivedRates DerivedRates::with_cooperativity(double C) const {
  require(std::isfinite(C) && C >= 0, "cooperativity", "must be >= 0");
  DerivedRates r = *this;
  r.multi_photon_G = std::sqrt(C * kappa_o * kappa_mw / 4.0);
  r.cooperativity = C;
  if (cooperativity > 0) r.pump_photons = pump_photons * C / cooperativity;
  return r;
}

ThermalEnvironment ThermalEnvironment::from_params(const SystemParams& p) {
  ThermalEnvironment env;
  env.n_internal_mw = thermal_occupancy(p.bath_temp, p.microwave_freq);
  env.n_waveguide_mw = thermal_occupancy(p.waveguide_temp, p.microwave_freq);
  env.n_waveguide_o = thermal_occupancy(p.waveguide_temp, p.optical_freq);
  return env;
}

DerivedRates derive_rates(const SystemParams& p) {
  p.validate();
  require(p.eta_microwave < 1, "eta_microwave",
          "eta = 1 with finite Q implies infinite external coupling");
  require(p.eta_optical < 1, "eta_optical",
          "eta = 1 with finite Q implies infinite external coupling");

  const double kappa_i_mw = internal_rate(p.microwave_freq, p.q_int_microwave);
  const double kappa_i_o = internal_rate(p.optical_freq, p.q_int_optical);
  const double kappa_mw = kappa_i_mw / (1.0 - p.eta_microwave);
  const double kappa_o = kappa_i_o / (1.0 - p.eta_optical);

  const double omega_p = two_pi * p.effective_pump_freq();
  const double n_p = 4.0 * p.eta_optical / kappa_o * p.pump_power / (hbar * omega_p);
  const double g = two_pi * p.vacuum_coupling;

  DerivedRates r = DerivedRates::from_kappas(
      p.eta_optical * kappa_o, kappa_i_o, p.eta_microwave * kappa_mw, kappa_i_mw,
      std::sqrt(n_p) * g, thermal_occupancy(p.bath_temp, p.microwave_freq));
  // Keep the defining relations exact rather than re-derived from sums.
  r.kappa_o = kappa_o;
  r.kappa_mw = kappa_mw;
  r.pump_photons = n_p;
  r.cooperativity = 4.0 * n_p * g * g / (kappa_o * kappa_mw);
  return r;
}

double cooperativity_for_power(double pump_power, const SystemParams& params) {
  require(std::isfinite(pump_power) && pump_power >= 0, "pump_power", "must be >= 0");
  SystemParams p = params;
  p.pump_power = pump_power;
  return derive_rates(p).cooperativity;
}

double pump_power_for_cooperativity(double C, const SystemParams& params) {
  require(std::isfinite(C) && C >= 0, "cooperativity", "must be >= 0");
  // C is linear in P_p; the cooperativity at 1 W fixes the slope.
  const double per_watt = cooperativity_for_power(1.0, params);
  if (C == 0) return 0.0;
  if (per_watt <= 0)
    throw InvalidParameter("vacuum_coupling",
                           "no pump power reaches a nonzero cooperativity");
  return C / per_watt;
}

double cooperativity_critical_coupling(double pump_power, const SystemParams& p) {
  p.validate();
  const double g = two_pi * p.vacuum_coupling;
  const double omega_p = two_pi * p.effective_pump_freq();
  const double omega_mw = two_pi * p.microwave_freq;
  return pump_power * g * g * p.q_int_optical * p.q_int_optical * p.q_int_microwave /
         (hbar * omega_p * omega_p * omega_p * omega_mw);
}

SystemParams with_cooperativity(SystemParams params, double C) {
  params.pump_power = pump_power_for_cooperativity(C, params);
  return params;
}

double coupling_rate_from_field(const MaterialParams& mat, double pump_freq) {
  require(mat.refractive_index_e > 0, "refractive_index_e", "must be > 0");
  require(mat.electro_optic_coeff > 0, "electro_optic_coeff", "must be > 0");
  require(mat.single_photon_field >= 0, "single_photon_field", "must be >= 0");
  require(pump_freq > 0, "pump_freq", "must be > 0");
  const double omega_p = two_pi * pump_freq;
  const double g = mat.refractive_index_e * mat.refractive_index_e * omega_p *
                   mat.electro_optic_coeff * mat.single_photon_field /
                   (4.0 * std::numbers::sqrt2);
  return g / two_pi;
}

double gap_scaled_coupling(double g_ref, double d_ref, double d) {
  require(g_ref > 0, "g_ref", "must be > 0");
  auto in_range = [](double x) { return x >= kGapMin && x <= kGapMax; };
  if (!in_range(d_ref) || !in_range(d))
    throw RangeError("gap outside the fitted range [10 um, 1 mm]");
  return g_ref * std::pow(d / d_ref, kGapExponent);
}

double thermal_occupancy(double temperature, double freq) {
  require(temperature >= 0, "temperature", "must be >= 0");
  require(freq > 0, "freq", "must be > 0");
  if (temperature == 0) return 0.0;
  const double x = hbar * two_pi * freq / (k_boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double mode_occupancy(const DerivedRates& rates, double n_internal) {
  return rates.kappa_i_mw * n_internal / rates.kappa_mw;
}

bool phase_matching_check(int m_c, int m_s, int m_mw) {
  if (m_c < 0 || m_s < 0 || m_mw < 0)
    throw InvalidParameter("azimuthal_number", "must be non-negative");
  return m_c == m_s + m_mw;
}

}  // namespace eoent
