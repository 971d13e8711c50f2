#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "eoent/core_model.hpp"

namespace eoent {

enum class StateKind { gaussian, cat };
enum class Protocol { teleport, convert };

const char* to_string(StateKind k);
const char* to_string(Protocol p);

/// Coherent squeezed |alpha, r> (squeezed along q) or cat N(|alpha> + e^{i phi}|-alpha>).
struct InputState {
  StateKind kind = StateKind::gaussian;
  std::complex<double> alpha{0.0, 0.0};
  double squeezing = 0;  // r, gaussian only
  double cat_phase = 0;  // phi, cat only

  static InputState coherent_squeezed(std::complex<double> alpha, double r);
  static InputState cat(std::complex<double> alpha, double phi);

  /// r >= 0, finite alpha, nonzero cat normalization.
  void validate() const;
  /// N^2 = 2 + 2 exp(-2|alpha|^2) cos(phi).
  double cat_norm_sq() const;
};

struct FidelityResult {
  double fidelity = 0;
  Protocol protocol = Protocol::teleport;
  double classical_bound = 0;
  std::optional<double> bandwidth;  // rad/s, set by the rate-based overloads
};

/// Gaussian-state fidelity with V_F = 2 V_in + 2 V_out.
double gaussian_fidelity(const Eigen::Vector2d& x_in, const Eigen::Matrix2d& V_in,
                         const Eigen::Vector2d& x_out, const Eigen::Matrix2d& V_out);

/// Minimum two-mode quadrature variance Delta q_-^2 of the steady-state source.
double source_var_minus(double C, double eta_o, double eta_mw, double n_mode);

/// 1 / (2 cosh r).
double teleport_classical_limit(double r);
/// Cat teleportation fidelity for a source with minimum variance var_minus.
double teleport_fidelity_cat_at(std::complex<double> alpha, double phi, double var_minus);
/// Cat teleportation formula at Delta q_-^2 = 1/2 (no shared entanglement).
double teleport_classical_limit_cat(std::complex<double> alpha, double phi);

/// (4 d^2 + 4 d cosh 2r + 1)^-1/2 with d = Delta q_-^2; independent of alpha.
FidelityResult teleport_fidelity_gaussian(const InputState& s, double C, double eta_o,
                                          double eta_mw, double n_mode);
FidelityResult teleport_fidelity_cat(const InputState& s, double C, double eta_o,
                                     double eta_mw, double n_mode);

/// Closed form in which the phase weights cos(phi_alpha), sin(phi_alpha)
/// enter unsquared. Only phi_alpha in [0, pi/2] is accepted.
FidelityResult convert_fidelity_gaussian(const InputState& s, double C, double eta_o,
                                         double eta_mw, double n_mode);

/// Fidelity of the physical beam-splitter channel: amplitude transmission
/// eps3, vacuum admixture 1 - eps3^2 and thermal noise 4 eta_mw n / (1+C)^2.
FidelityResult convert_fidelity_gaussian_check(const InputState& s, double C, double eta_o,
                                               double eta_mw, double n_mode);

/// Overlap of the cat with a cat of amplitude eps3 alpha carrying added
/// thermal variance 4 eta_mw n / (1+C)^2. Real alpha only; complex alpha
/// raises UnsupportedInput.
FidelityResult convert_fidelity_cat(const InputState& s, double C, double eta_o,
                                    double eta_mw, double n_mode);

/// Protocol dispatch on the state kind, with bandwidth filled from the rates
/// (emission bandwidth for teleportation, conversion bandwidth otherwise).
FidelityResult transfer_fidelity(Protocol p, const InputState& s, const DerivedRates& rates);

/// Amplitude transmission sqrt(4 eta_o eta_mw C) / (1 + C) of the converter.
double conversion_amplitude(double C, double eta_o, double eta_mw);

/// Square phase-space grid over [-extent, extent]^2; values row-major with
/// row index along p and column index along q.
struct WignerGrid {
  double extent = 0;
  int points = 0;
  std::vector<double> values;

  double spacing() const { return 2 * extent / (points - 1); }
  double coord(int k) const { return -extent + k * spacing(); }
  double& at(int ip, int iq) { return values[static_cast<std::size_t>(ip) * points + iq]; }
  double at(int ip, int iq) const { return values[static_cast<std::size_t>(ip) * points + iq]; }
  /// Trapezoidal integral of W dq dp.
  double integral() const;
};

inline constexpr int kDefaultGridPoints = 512;

/// sqrt(2)|alpha| + 6 sqrt(max variance).
double default_grid_extent(std::complex<double> alpha, double max_variance);

WignerGrid gaussian_wigner_grid(const Eigen::Vector2d& mean, const Eigen::Matrix2d& V,
                                double extent, int points = kDefaultGridPoints);
WignerGrid cat_wigner_grid(std::complex<double> alpha, double phi, double extent,
                           int points = kDefaultGridPoints);

/// Convolution with an isotropic Gaussian of the given per-quadrature variance.
WignerGrid convolve_gaussian(const WignerGrid& w, double variance);

/// 2 pi * integral W_in W_out dq dp. Grids must match and be normalized to 1%.
double wigner_overlap_fidelity(const WignerGrid& w_in, const WignerGrid& w_out);

}  // namespace eoent
