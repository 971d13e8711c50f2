#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eoent {

/// Raw device, drive and environment inputs. Frequencies are linear (Hz),
/// everything else SI. Rates derived from these are angular (rad/s).
struct SystemParams {
  double microwave_freq = 9e9;        // Omega / 2pi
  double optical_freq = 193.5e12;     // omega_o / 2pi
  std::optional<double> pump_freq;    // omega_p / 2pi, defaults to optical_freq
  double vacuum_coupling = 119.0;     // g / 2pi
  double q_int_microwave = 3e3;
  double q_int_optical = 5e8;
  double eta_microwave = 0.8;
  double eta_optical = 0.5;
  double pump_power = 19.2e-6;        // W
  double bath_temp = 0.01;            // K
  double waveguide_temp = 0.0;        // K

  /// Reference device (pump at 19.2 uW, 10 mK bath).
  static SystemParams reference();

  double effective_pump_freq() const { return pump_freq.value_or(optical_freq); }

  /// Throws InvalidParameter naming the first offending field.
  void validate() const;

  /// Field names accepted by get/set and by the parameter-file loader.
  static const std::vector<std::string>& field_names();
  double get(std::string_view field) const;
  void set(std::string_view field, double value);
};

/// Every angular loss rate, the multi-photon coupling and the cooperativity.
/// This is the single source fed into all downstream formulas.
struct DerivedRates {
  double kappa_o = 0, kappa_mw = 0;
  double kappa_e_o = 0, kappa_i_o = 0;
  double kappa_e_mw = 0, kappa_i_mw = 0;
  double delta_kappa_o = 0, delta_kappa_mw = 0;  // kappa_e - kappa_i
  double pump_photons = 0;
  double multi_photon_G = 0;  // |G| = sqrt(n_p) g, pump phase fixed to 0
  double cooperativity = 0;
  double n_th_mode = 0;       // kappa_i,mw n_internal / kappa_mw
  double n_th_internal = 0;   // Bose-Einstein occupation of the microwave bath

  double eta_o() const { return kappa_o > 0 ? kappa_e_o / kappa_o : 0.0; }
  double eta_mw() const { return kappa_mw > 0 ? kappa_e_mw / kappa_mw : 0.0; }

  /// Builds rates directly from the four loss channels and |G|. Needed for
  /// idealized cases (eta = 1, matched kappas) that no SystemParams expresses.
  static DerivedRates from_kappas(double kappa_e_o, double kappa_i_o,
                                  double kappa_e_mw, double kappa_i_mw,
                                  double multi_photon_G,
                                  double n_internal = 0.0);

  /// Same loss channels, |G| rescaled so that the cooperativity equals C.
  DerivedRates with_cooperativity(double C) const;
};

/// Occupations of the four input noise ports. The optical bath is always
/// treated as empty; waveguides default to cold.
struct ThermalEnvironment {
  double n_internal_mw = 0;
  double n_internal_o = 0;
  double n_waveguide_mw = 0;
  double n_waveguide_o = 0;

  static ThermalEnvironment from_params(const SystemParams& p);
};

struct MaterialParams {
  double refractive_index_e = 2.138;
  double electro_optic_coeff = 31e-12;  // m/V
  double single_photon_field = 0.0;     // V/m at the optical mode
};

DerivedRates derive_rates(const SystemParams& params);

double cooperativity_for_power(double pump_power, const SystemParams& params);
double pump_power_for_cooperativity(double C, const SystemParams& params);

/// Closed form valid only at critical coupling (eta_o = eta_mw = 1/2):
/// C = P g^2 Q_io^2 Q_imw / (hbar w_p^3 Omega).
double cooperativity_critical_coupling(double pump_power, const SystemParams& params);

/// Params with pump_power set so that the cooperativity equals C.
SystemParams with_cooperativity(SystemParams params, double C);

/// g / 2pi in Hz from the single-photon microwave field at the optical mode.
/// Includes the 1/sqrt(2) standing-wave factor.
double coupling_rate_from_field(const MaterialParams& mat, double pump_freq);

inline constexpr double kGapMin = 10e-6;
inline constexpr double kGapMax = 1e-3;
inline constexpr double kGapExponent = -0.8;

/// g(d) = g_ref (d / d_ref)^-0.8, valid for gaps in [10 um, 1 mm].
double gap_scaled_coupling(double g_ref, double d_ref, double d);

/// Bose-Einstein occupation 1/(exp(h f / k T) - 1); exactly 0 at T = 0.
double thermal_occupancy(double temperature, double freq);
double mode_occupancy(const DerivedRates& rates, double n_internal);

bool phase_matching_check(int m_c, int m_s, int m_mw);

}  // namespace eoent
