#include "eoent/state_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "eoent/error.hpp"
#include "eoent/gaussian.hpp"
#include "eoent/spectral.hpp"

namespace eoent {

using std::numbers::pi;

const char* to_string(StateKind k) { return k == StateKind::gaussian ? "gaussian" : "cat"; }
const char* to_string(Protocol p) { return p == Protocol::teleport ? "teleport" : "convert"; }

InputState InputState::coherent_squeezed(std::complex<double> alpha, double r) {
  InputState s;
  s.kind = StateKind::gaussian;
  s.alpha = alpha;
  s.squeezing = r;
  s.validate();
  return s;
}

InputState InputState::cat(std::complex<double> alpha, double phi) {
  InputState s;
  s.kind = StateKind::cat;
  s.alpha = alpha;
  s.cat_phase = phi;
  s.validate();
  return s;
}

double InputState::cat_norm_sq() const {
  return 2.0 + 2.0 * std::exp(-2.0 * std::norm(alpha)) * std::cos(cat_phase);
}

void InputState::validate() const {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw InvalidParameter("alpha", "must be finite");
  if (kind == StateKind::gaussian) {
    if (!(squeezing >= 0) || !std::isfinite(squeezing))
      throw InvalidParameter("squeezing", "must be >= 0");
  } else {
    if (!std::isfinite(cat_phase)) throw InvalidParameter("cat_phase", "must be finite");
    if (!(cat_norm_sq() > 1e-12))
      throw InvalidParameter("alpha", "cat state normalization vanishes");
  }
}

namespace {

void check_cooperativity(double C) {
  if (!(C >= 0) || !std::isfinite(C)) throw InvalidParameter("cooperativity", "must be >= 0");
}

void check_eta(double eta_o, double eta_mw, double n_mode) {
  if (!(eta_o >= 0 && eta_o <= 1)) throw InvalidParameter("eta_optical", "must lie in [0, 1]");
  if (!(eta_mw >= 0 && eta_mw <= 1)) throw InvalidParameter("eta_microwave", "must lie in [0, 1]");
  if (!(n_mode >= 0)) throw InvalidParameter("n_mode", "must be >= 0");
}

void require_kind(const InputState& s, StateKind k) {
  s.validate();
  if (s.kind != k)
    throw InvalidParameter("state", std::string("expected a ") + to_string(k) + " state");
}

double cat_teleport(double a2, double phi, double d) {
  const double k = 1 + 2 * d;
  const double norm = 1 + std::exp(-2 * a2) * std::cos(phi);
  const double num = 1 + std::exp(-4 * a2) - std::exp(-4 * a2 / k) - std::exp(-8 * d * a2 / k);
  return 1 / k - num / (2 * k * norm * norm);
}

// Added thermal variance (vacuum = 1/2) of the converted field.
double conversion_thermal_noise(double C, double eta_mw, double n_mode) {
  return 4 * eta_mw * n_mode / ((1 + C) * (1 + C));
}

Eigen::Matrix2d squeezed_cm(double r) {
  Eigen::Matrix2d V = Eigen::Matrix2d::Zero();
  V(0, 0) = 0.5 * std::exp(-2 * r);
  V(1, 1) = 0.5 * std::exp(2 * r);
  return V;
}

Eigen::Vector2d phase_point(std::complex<double> alpha) {
  return {std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag()};
}

// Isotropic Gaussian term amp * exp(-(x - m).(x - m) / (2 s)) with a complex
// centre; the dot product is bilinear so interference fringes fit the form.
struct GaussTerm {
  std::complex<double> amp;
  std::complex<double> mq, mp;
  double s;
};

// Wigner function of a real-amplitude cat convolved with variance q.
std::vector<GaussTerm> cat_terms(double a, double phi, double q) {
  const double x0 = std::sqrt(2.0) * a;
  const double norm = 1 / (pi * (2 + 2 * std::exp(-2 * a * a) * std::cos(phi)));
  const double s = 0.5 + q, w = 0.5 / s;
  const std::complex<double> i(0, 1);
  // 2 exp(-|x|^2) cos(2 x0 p - phi) = sum over +-: e^{-+i phi} e^{-x0^2} exp(-|x -+ i (0, x0)|^2)
  const std::complex<double> fringe = std::exp(-x0 * x0) * std::exp(-i * phi);
  return {{norm * w, x0, 0, s},
          {norm * w, -x0, 0, s},
          {norm * w * fringe, 0, i * x0, s},
          {norm * w * std::conj(fringe), 0, -i * x0, s}};
}

std::vector<GaussTerm> vacuum_terms(double q) {
  const double s = 0.5 + q;
  return {{1 / (2 * pi * s), 0, 0, s}};
}

// 2 pi * integral of the product of two Gaussian sums over the plane.
double gaussian_sum_overlap(const std::vector<GaussTerm>& x, const std::vector<GaussTerm>& y) {
  std::complex<double> acc = 0;
  for (const auto& u : x)
    for (const auto& v : y) {
      const double t = u.s + v.s;
      const std::complex<double> dq = u.mq - v.mq, dp = u.mp - v.mp;
      acc += u.amp * v.amp * (2 * pi * u.s * v.s / t) * std::exp(-(dq * dq + dp * dp) / (2 * t));
    }
  return 2 * pi * acc.real();
}

}  // namespace

double gaussian_fidelity(const Eigen::Vector2d& x_in, const Eigen::Matrix2d& V_in,
                         const Eigen::Vector2d& x_out, const Eigen::Matrix2d& V_out) {
  const Eigen::Matrix2d VF = 2 * V_in + 2 * V_out;
  const double det = (VF / 2).determinant();
  if (!(det > 1e-300)) throw NumericError("fidelity covariance sum is singular");
  const Eigen::Vector2d d = x_out - x_in;
  const double quad = d.dot(VF.inverse() * d);
  return std::exp(-quad) / std::sqrt(det);
}

double source_var_minus(double C, double eta_o, double eta_mw, double n_mode) {
  return squeezing_analysis(steady_state_cm(C, eta_o, eta_mw, n_mode)).var_minus;
}

double teleport_classical_limit(double r) {
  if (!(r >= 0)) throw InvalidParameter("squeezing", "must be >= 0");
  return std::exp(-r) / (1 + std::exp(-2 * r));
}

double teleport_fidelity_cat_at(std::complex<double> alpha, double phi, double var_minus) {
  if (!(var_minus >= 0)) throw InvalidParameter("var_minus", "must be >= 0");
  return cat_teleport(std::norm(alpha), phi, var_minus);
}

double teleport_classical_limit_cat(std::complex<double> alpha, double phi) {
  return cat_teleport(std::norm(alpha), phi, 0.5);
}

FidelityResult teleport_fidelity_gaussian(const InputState& s, double C, double eta_o,
                                          double eta_mw, double n_mode) {
  require_kind(s, StateKind::gaussian);
  const double d = source_var_minus(C, eta_o, eta_mw, n_mode);
  FidelityResult f;
  f.protocol = Protocol::teleport;
  f.fidelity = 1 / std::sqrt(4 * d * d + 4 * d * std::cosh(2 * s.squeezing) + 1);
  f.classical_bound = teleport_classical_limit(s.squeezing);
  return f;
}

FidelityResult teleport_fidelity_cat(const InputState& s, double C, double eta_o,
                                     double eta_mw, double n_mode) {
  require_kind(s, StateKind::cat);
  const double d = source_var_minus(C, eta_o, eta_mw, n_mode);
  FidelityResult f;
  f.protocol = Protocol::teleport;
  f.fidelity = cat_teleport(std::norm(s.alpha), s.cat_phase, d);
  f.classical_bound = teleport_classical_limit_cat(s.alpha, s.cat_phase);
  return f;
}

double conversion_amplitude(double C, double eta_o, double eta_mw) {
  return std::sqrt(4 * eta_o * eta_mw * C) / (1 + C);
}

FidelityResult convert_fidelity_gaussian(const InputState& s, double C, double eta_o,
                                         double eta_mw, double n_mode) {
  require_kind(s, StateKind::gaussian);
  check_cooperativity(C);
  check_eta(eta_o, eta_mw, n_mode);
  const double phase = std::abs(s.alpha) > 0 ? std::arg(s.alpha) : 0.0;
  if (phase < -1e-15 || phase > pi / 2 + 1e-15)
    throw UnsupportedInput("coherent amplitude phase must lie in [0, pi/2] for the conversion formula");

  const double r = s.squeezing;
  const double e2 = 1 + std::cosh(2 * r);
  const double e3 = conversion_amplitude(C, eta_o, eta_mw);
  const double e3sq = e3 * e3, e3q = e3sq * e3sq;
  // eps3^2 n / (C eta_o), written so that C = 0 stays finite.
  const double q = conversion_thermal_noise(C, eta_mw, n_mode);

  const double v_minus = 1 + e3sq * (std::exp(-2 * r) - 1) + 2 * q;
  const double v_plus = 1 + e3sq * (std::exp(2 * r) - 1) + 2 * q;
  const double a2 = std::norm(s.alpha);
  const double num = std::exp(-2 * a2 * (e3 - 1) * (e3 - 1) *
                              (std::cos(phase) / v_minus + std::sin(phase) / v_plus));
  const double den = std::sqrt(e2 / 2 * (1 - e3q) + e3q + e3sq * q * (e2 - 2) + e2 * q + q * q);

  FidelityResult f;
  f.protocol = Protocol::convert;
  f.fidelity = num / den;
  f.classical_bound = teleport_classical_limit(r);
  return f;
}

FidelityResult convert_fidelity_gaussian_check(const InputState& s, double C, double eta_o,
                                               double eta_mw, double n_mode) {
  require_kind(s, StateKind::gaussian);
  check_cooperativity(C);
  check_eta(eta_o, eta_mw, n_mode);
  const double e3 = conversion_amplitude(C, eta_o, eta_mw);
  const double q = conversion_thermal_noise(C, eta_mw, n_mode);

  const Eigen::Matrix2d V_in = squeezed_cm(s.squeezing);
  const Eigen::Matrix2d V_out =
      e3 * e3 * V_in + ((1 - e3 * e3) * 0.5 + q) * Eigen::Matrix2d::Identity();
  const Eigen::Vector2d x_in = phase_point(s.alpha);

  FidelityResult f;
  f.protocol = Protocol::convert;
  f.fidelity = gaussian_fidelity(x_in, V_in, e3 * x_in, V_out);
  f.classical_bound = teleport_classical_limit(s.squeezing);
  return f;
}

FidelityResult convert_fidelity_cat(const InputState& s, double C, double eta_o, double eta_mw,
                                    double n_mode) {
  require_kind(s, StateKind::cat);
  check_cooperativity(C);
  check_eta(eta_o, eta_mw, n_mode);
  if (s.alpha.imag() != 0)
    throw UnsupportedInput("cat conversion fidelity is defined for real alpha only");

  const double a = s.alpha.real();
  const double phi = s.cat_phase;
  const double e3 = conversion_amplitude(C, eta_o, eta_mw);
  const double q = conversion_thermal_noise(C, eta_mw, n_mode);

  FidelityResult f;
  f.protocol = Protocol::convert;
  f.classical_bound = teleport_classical_limit_cat(s.alpha, phi);
  // Output: pure cat of amplitude eps3 alpha (vacuum at eps3 = 0) with added
  // thermal variance q per quadrature.
  const auto in = cat_terms(a, phi, 0.0);
  const auto out = e3 > 0 ? cat_terms(e3 * a, phi, q) : vacuum_terms(q);
  f.fidelity = std::clamp(gaussian_sum_overlap(in, out), 0.0, 1.0);
  return f;
}

FidelityResult transfer_fidelity(Protocol p, const InputState& s, const DerivedRates& r) {
  const double C = r.cooperativity, eo = r.eta_o(), em = r.eta_mw(), n = r.n_th_mode;
  FidelityResult f;
  if (p == Protocol::teleport) {
    f = s.kind == StateKind::gaussian ? teleport_fidelity_gaussian(s, C, eo, em, n)
                                      : teleport_fidelity_cat(s, C, eo, em, n);
    f.bandwidth = emission_bandwidth(r);
  } else {
    f = s.kind == StateKind::gaussian ? convert_fidelity_gaussian(s, C, eo, em, n)
                                      : convert_fidelity_cat(s, C, eo, em, n);
    f.bandwidth = conversion_bandwidth(r);
  }
  return f;
}

// ---- Wigner grids --------------------------------------------------------

double WignerGrid::integral() const {
  const double h = spacing();
  double total = 0;
  for (int ip = 0; ip < points; ++ip) {
    const double wp = (ip == 0 || ip == points - 1) ? 0.5 : 1.0;
    for (int iq = 0; iq < points; ++iq) {
      const double wq = (iq == 0 || iq == points - 1) ? 0.5 : 1.0;
      total += wp * wq * at(ip, iq);
    }
  }
  return total * h * h;
}

double default_grid_extent(std::complex<double> alpha, double max_variance) {
  return std::sqrt(2.0) * std::abs(alpha) + 6 * std::sqrt(std::max(max_variance, 0.0));
}

namespace {

WignerGrid empty_grid(double extent, int points) {
  if (!(extent > 0)) throw InvalidParameter("extent", "must be > 0");
  if (points < 3) throw InvalidParameter("points", "must be >= 3");
  WignerGrid g;
  g.extent = extent;
  g.points = points;
  g.values.assign(static_cast<std::size_t>(points) * points, 0.0);
  return g;
}

}  // namespace

WignerGrid gaussian_wigner_grid(const Eigen::Vector2d& mean, const Eigen::Matrix2d& V,
                                double extent, int points) {
  const double det = V.determinant();
  if (!(det > 0)) throw NumericError("single-mode covariance is singular");
  const Eigen::Matrix2d inv = V.inverse();
  const double norm = 1 / (2 * pi * std::sqrt(det));
  WignerGrid g = empty_grid(extent, points);
  for (int ip = 0; ip < points; ++ip)
    for (int iq = 0; iq < points; ++iq) {
      const Eigen::Vector2d x(g.coord(iq) - mean(0), g.coord(ip) - mean(1));
      g.at(ip, iq) = norm * std::exp(-0.5 * x.dot(inv * x));
    }
  return g;
}

WignerGrid cat_wigner_grid(std::complex<double> alpha, double phi, double extent, int points) {
  const InputState s = InputState::cat(alpha, phi);
  const double q0 = std::sqrt(2.0) * alpha.real(), p0 = std::sqrt(2.0) * alpha.imag();
  const double norm = 1 / (pi * s.cat_norm_sq());
  WignerGrid g = empty_grid(extent, points);
  for (int ip = 0; ip < points; ++ip)
    for (int iq = 0; iq < points; ++iq) {
      const double q = g.coord(iq), p = g.coord(ip);
      const double plus = (q - q0) * (q - q0) + (p - p0) * (p - p0);
      const double minus = (q + q0) * (q + q0) + (p + p0) * (p + p0);
      const double mid = q * q + p * p;
      g.at(ip, iq) = norm * (std::exp(-plus) + std::exp(-minus) +
                             2 * std::exp(-mid) * std::cos(2 * (q0 * p - p0 * q) - phi));
    }
  return g;
}

WignerGrid convolve_gaussian(const WignerGrid& w, double variance) {
  if (!(variance >= 0)) throw InvalidParameter("variance", "must be >= 0");
  if (variance == 0) return w;
  const double h = w.spacing();
  const int n = w.points;
  const int half = std::min(n - 1, static_cast<int>(std::ceil(8 * std::sqrt(variance) / h)));
  std::vector<double> kernel(2 * half + 1);
  for (int k = -half; k <= half; ++k)
    kernel[k + half] = std::exp(-(k * h) * (k * h) / (2 * variance));
  double ksum = 0;
  for (double v : kernel) ksum += v;
  // A kernel narrower than the grid spacing collapses to a delta; keep it normalized.
  for (double& v : kernel) v /= ksum;

  WignerGrid tmp = w, out = w;
  for (int ip = 0; ip < n; ++ip)
    for (int iq = 0; iq < n; ++iq) {
      double acc = 0;
      for (int k = std::max(-half, -iq); k <= std::min(half, n - 1 - iq); ++k)
        acc += kernel[k + half] * w.at(ip, iq + k);
      tmp.at(ip, iq) = acc;
    }
  for (int ip = 0; ip < n; ++ip)
    for (int iq = 0; iq < n; ++iq) {
      double acc = 0;
      for (int k = std::max(-half, -ip); k <= std::min(half, n - 1 - ip); ++k)
        acc += kernel[k + half] * tmp.at(ip + k, iq);
      out.at(ip, iq) = acc;
    }
  return out;
}

double wigner_overlap_fidelity(const WignerGrid& a, const WignerGrid& b) {
  if (a.points != b.points || std::abs(a.extent - b.extent) > 1e-12 * a.extent ||
      a.values.size() != b.values.size())
    throw InvalidParameter("grid", "Wigner grids must share extent and resolution");
  for (const WignerGrid* g : {&a, &b})
    if (std::abs(g->integral() - 1) > 0.01)
      throw NumericError("Wigner grid is not normalized to within 1%");

  WignerGrid prod = a;
  for (std::size_t i = 0; i < prod.values.size(); ++i) prod.values[i] *= b.values[i];
  return 2 * pi * prod.integral();
}

}  // namespace eoent
