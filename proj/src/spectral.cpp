#include "eoent/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "eoent/constants.hpp"
#include "eoent/error.hpp"

namespace eoent {

using cd = std::complex<double>;
using constants::two_pi;

namespace {

void require_stable(const DerivedRates& r) {
  if (!(r.cooperativity < 1.0)) throw InstabilityError(r.cooperativity);
}

// Ratio (k_o^2 + k_mw^2) / (2 k_o k_mw), shared by both bandwidth formulas.
double kappa_asymmetry(const DerivedRates& r) {
  return (r.kappa_o * r.kappa_o + r.kappa_mw * r.kappa_mw) / (2.0 * r.kappa_o * r.kappa_mw);
}

// Denominator shared by the emission and conversion line shapes:
// (1 -+ C - 4w^2/(k_o k_mw))^2 + 4 w^2 (k_o + k_mw)^2 / (k_o k_mw)^2
double lineshape_denominator(double omega, const DerivedRates& r, double signed_C) {
  const double kk = r.kappa_o * r.kappa_mw;
  const double w2 = omega * omega;
  const double a = 1.0 + signed_C - 4.0 * w2 / kk;
  const double s = r.kappa_o + r.kappa_mw;
  return a * a + 4.0 * w2 * s * s / (kk * kk);
}

// Input occupations ordered as the columns of D: (e,o), (i,o), (e,mw), (i,mw).
std::array<double, 4> port_occupations(const ThermalEnvironment& env) {
  return {env.n_waveguide_o, env.n_internal_o, env.n_waveguide_mw, env.n_internal_mw};
}

class GslWorkspace {
 public:
  explicit GslWorkspace(std::size_t n) : w_(gsl_integration_workspace_alloc(n)), n_(n) {}
  ~GslWorkspace() { gsl_integration_workspace_free(w_); }
  GslWorkspace(const GslWorkspace&) = delete;
  GslWorkspace& operator=(const GslWorkspace&) = delete;
  gsl_integration_workspace* get() { return w_; }
  std::size_t size() const { return n_; }

 private:
  gsl_integration_workspace* w_;
  std::size_t n_;
};

template <class F>
double gsl_thunk(double x, void* p) {
  return (*static_cast<F*>(p))(x);
}

}  // namespace

cd scattering_denominator(double omega, const DerivedRates& r) {
  const cd iw(0.0, omega);
  const double G = r.multi_photon_G;
  return (-iw + r.kappa_o / 2.0) * (-iw + r.kappa_mw / 2.0) - G * G;
}

ScatteringMatrix scattering_matrix(double omega, const DerivedRates& r) {
  require_stable(r);
  const cd iw(0.0, omega);
  const cd i(0.0, 1.0);
  const double G = r.multi_photon_G;  // real: pump phase 0
  const cd M = scattering_denominator(omega, r);

  ScatteringMatrix s;
  s.freq_offset = omega;
  auto& D = s.entries;
  D(0, 0) = (iw + r.delta_kappa_o / 2.0) * (-iw + r.kappa_mw / 2.0) + G * G;
  D(0, 1) = std::sqrt(r.kappa_e_o * r.kappa_i_o) * (-iw + r.kappa_mw / 2.0);
  D(0, 2) = -i * G * std::sqrt(r.kappa_e_o * r.kappa_e_mw);
  D(0, 3) = -i * G * std::sqrt(r.kappa_e_o * r.kappa_i_mw);
  D(1, 0) = i * G * std::sqrt(r.kappa_e_mw * r.kappa_e_o);
  D(1, 1) = i * G * std::sqrt(r.kappa_e_mw * r.kappa_i_o);
  D(1, 2) = (iw + r.delta_kappa_mw / 2.0) * (-iw + r.kappa_o / 2.0) + G * G;
  D(1, 3) = std::sqrt(r.kappa_e_mw * r.kappa_i_mw) * (-iw + r.kappa_o / 2.0);
  D /= M;
  return s;
}

double output_spectrum(double omega, const DerivedRates& r, OutputPort port,
                       const ThermalEnvironment& env) {
  const auto D = scattering_matrix(omega, r).entries;
  const auto n = port_occupations(env);
  // Row 0 holds a_o^out: annihilation inputs contribute n, creation inputs n+1.
  // Row 1 holds (a_mw^out)^dag, so the roles swap.
  double total = 0;
  for (int k = 0; k < 4; ++k) {
    const bool creation_input = k >= 2;
    const double w = std::norm(D(port == OutputPort::optical ? 0 : 1, k));
    if (port == OutputPort::optical)
      total += w * (creation_input ? n[k] + 1.0 : n[k]);
    else
      total += w * (creation_input ? n[k] : n[k] + 1.0);
  }
  return total;
}

double output_spectrum_closed_form(double omega, const DerivedRates& r, OutputPort port) {
  require_stable(r);
  const double eta = port == OutputPort::optical ? r.eta_o() : r.eta_mw();
  return 4.0 * r.cooperativity * eta / lineshape_denominator(omega, r, -r.cooperativity);
}

double emission_bandwidth(const DerivedRates& r) {
  require_stable(r);
  const double C = r.cooperativity;
  const double s = kappa_asymmetry(r);
  const double inner = std::sqrt((1.0 - C) * (1.0 - C) + (C + s) * (C + s));
  return std::sqrt(std::max(0.0, -C - s + inner)) * std::sqrt(r.kappa_o * r.kappa_mw);
}

double integrated_flux(const DerivedRates& r, OutputPort port, const ThermalEnvironment& env) {
  require_stable(r);
  if (r.cooperativity == 0 && env.n_internal_mw == 0 && env.n_internal_o == 0) return 0.0;

  // Reflected waveguide noise tends to a flat background that does not
  // integrate; only the flux above it is counted.
  const double background = port == OutputPort::optical ? env.n_waveguide_o : env.n_waveguide_mw;
  auto integrand = [&](double w) { return output_spectrum(w, r, port, env) - background; };

  gsl_function f;
  f.function = &gsl_thunk<decltype(integrand)>;
  f.params = &integrand;

  gsl_error_handler_t* old = gsl_set_error_handler_off();
  GslWorkspace ws(2000);
  const double cutoff = 50.0 * std::max(r.kappa_o, r.kappa_mw);
  // Peak width is set by the narrower cavity; split there so QAG sees it.
  const double knee = 5.0 * std::min(r.kappa_o, r.kappa_mw);
  double core = 0, part = 0, err = 0;
  int st = gsl_integration_qag(&f, 0.0, knee, 0.0, 1e-11, ws.size(), GSL_INTEG_GAUSS61,
                               ws.get(), &part, &err);
  core += part;
  if (st == GSL_SUCCESS)
    st = gsl_integration_qag(&f, knee, cutoff, 0.0, 1e-11, ws.size(), GSL_INTEG_GAUSS61,
                             ws.get(), &part, &err);
  core += part;
  gsl_set_error_handler(old);
  if (st != GSL_SUCCESS)
    throw NumericError(std::string("flux quadrature failed: ") + gsl_strerror(st));

  // Beyond the cutoff the integrand is a power law S ~ w^-p (p = 4 for the
  // pair emission, p = 2 for excess reflected noise); integrate it exactly.
  double tail = 0;
  const double s1 = integrand(cutoff), s2 = integrand(2.0 * cutoff);
  if (s1 > 0 && s2 > 0) {
    const double p = std::log2(s1 / s2);
    if (p <= 1.0) throw NumericError("flux integrand does not decay fast enough");
    tail = s1 * cutoff / (p - 1.0);
  }

  // Symmetric integrand; dw / 2pi converts to photons per second.
  return 2.0 * (core + tail) / two_pi;
}

double conversion_efficiency(double omega, const DerivedRates& r) {
  const double C = r.cooperativity;
  if (C < 0) throw InvalidParameter("cooperativity", "must be >= 0");
  return 4.0 * C * r.eta_o() * r.eta_mw() / lineshape_denominator(omega, r, C);
}

double conversion_bandwidth(const DerivedRates& r) {
  const double C = r.cooperativity;
  if (C < 0) throw InvalidParameter("cooperativity", "must be >= 0");
  const double s = kappa_asymmetry(r);
  const double inner = std::sqrt((1.0 + C) * (1.0 + C) + (C - s) * (C - s));
  return std::sqrt(std::max(0.0, C - s + inner)) * std::sqrt(r.kappa_o * r.kappa_mw);
}

CovarianceMatrix4 spectral_covariance(double omega, const DerivedRates& r,
                                      const ThermalEnvironment& env) {
  const auto D = scattering_matrix(omega, r).entries;
  const auto n = port_occupations(env);

  double n_o = 0, n_mw = 0;
  cd m(0.0, 0.0);  // <a_o^out a_mw^out>
  for (int k = 0; k < 4; ++k) {
    const bool creation_input = k >= 2;
    // <x x^dag> = n + 1 for annihilation inputs, <x^dag x> = n for creation ones.
    const double forward = creation_input ? n[k] : n[k] + 1.0;
    const double backward = creation_input ? n[k] + 1.0 : n[k];
    n_o += std::norm(D(0, k)) * backward;
    n_mw += std::norm(D(1, k)) * forward;
    m += D(0, k) * std::conj(D(1, k)) * forward;
  }
  // With G real the correlation is -i|m| at w = 0. Rotating the microwave
  // frame by pi/2 puts it on the real axis, i.e. in the q_o q_mw / p_o p_mw
  // entries, matching the steady-state block form.
  m *= cd(0.0, 1.0);

  Eigen::Matrix4d V = Eigen::Matrix4d::Zero();
  V(0, 0) = V(1, 1) = n_o + 0.5;
  V(2, 2) = V(3, 3) = n_mw + 0.5;
  V(0, 2) = V(2, 0) = m.real();
  V(1, 3) = V(3, 1) = -m.real();
  V(0, 3) = V(3, 0) = m.imag();
  V(1, 2) = V(2, 1) = m.imag();
  return CovarianceMatrix4(V);
}

}  // namespace eoent
