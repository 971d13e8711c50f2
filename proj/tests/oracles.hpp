// Independent reference computations used only by the tests. None of these
// call into the library routines they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "eoent/core_model.hpp"

namespace oracle {

using cd = std::complex<double>;

// Scattering rows from a direct solve of the Fourier-space Langevin system
//   [-iw + k_o/2,   iG        ] [a_o      ]   [sqrt(ke_o) a_e,o + sqrt(ki_o) a_i,o            ]
//   [-iG,           -iw + k_mw/2] [a_mw^dag] = [sqrt(ke_mw) a_e,mw^dag + sqrt(ki_mw) a_i,mw^dag]
// followed by a_out = sqrt(ke) a - a_e.
inline Eigen::Matrix<cd, 2, 4> scattering_by_solve(double w, const eoent::DerivedRates& r) {
  const cd iw(0, w), i(0, 1);
  const double G = r.multi_photon_G;
  Eigen::Matrix2cd A;
  A << -iw + r.kappa_o / 2, i * G, -i * G, -iw + r.kappa_mw / 2;
  Eigen::Matrix<cd, 2, 4> B = Eigen::Matrix<cd, 2, 4>::Zero();
  B(0, 0) = std::sqrt(r.kappa_e_o);
  B(0, 1) = std::sqrt(r.kappa_i_o);
  B(1, 2) = std::sqrt(r.kappa_e_mw);
  B(1, 3) = std::sqrt(r.kappa_i_mw);
  const Eigen::Matrix<cd, 2, 4> X = A.fullPivLu().solve(B);
  Eigen::Matrix<cd, 2, 4> D;
  D.row(0) = std::sqrt(r.kappa_e_o) * X.row(0);
  D.row(1) = std::sqrt(r.kappa_e_mw) * X.row(1);
  D(0, 0) -= 1.0;
  D(1, 2) -= 1.0;
  return D;
}

// Symplectic eigenvalues as the moduli of the eigenvalues of Omega V.
// Extended precision keeps the oracle well below the tolerances it checks.
inline Eigen::Vector2d symplectic_by_eig(const Eigen::Matrix4d& V) {
  using M4 = Eigen::Matrix<long double, 4, 4>;
  M4 Om = M4::Zero();
  Om(0, 1) = 1; Om(1, 0) = -1; Om(2, 3) = 1; Om(3, 2) = -1;
  Eigen::EigenSolver<M4> es(Om * V.cast<long double>());
  std::vector<long double> m;
  for (int k = 0; k < 4; ++k) m.push_back(std::abs(es.eigenvalues()(k)));
  std::sort(m.begin(), m.end());
  return {static_cast<double>(0.5L * (m[0] + m[1])), static_cast<double>(0.5L * (m[2] + m[3]))};
}

inline Eigen::Matrix4d partial_transpose(const Eigen::Matrix4d& V) {
  const Eigen::Vector4d l(1, 1, 1, -1);
  return l.asDiagonal() * V * l.asDiagonal();
}

// Closed-form variances with the pairing that reproduces the marginal
// eigenvalues: the smaller coupling ratio takes sin^2 in var_minus.
inline std::pair<double, double> variances_closed_form(double C, double eo, double em, double theta) {
  const double eps = (1 - C) * (1 - C);
  const double U = 4 * std::sqrt(eo * em * C) * (1 + C);
  const double num = ((8 * C * eo + eps) * (8 * C * em + eps) - U * U) / eps;
  const double lo = std::min(eo, em), hi = std::max(eo, em);
  const double s2 = std::sin(theta) * std::sin(theta), c2 = std::cos(theta) * std::cos(theta);
  const double vm = num / (2 * (eps + 8 * C * (lo * s2 + hi * c2) + U * std::sin(2 * theta)));
  const double vp = num / (2 * (eps + 8 * C * (hi * s2 + lo * c2) - U * std::sin(2 * theta)));
  return {vm, vp};
}

// Matched coupling, cold: E_N = -log2(1 - 4 eta sqrt(C) / (1 + sqrt(C))^2).
inline double log_negativity_matched(double C, double eta) {
  const double s = std::sqrt(C);
  return -std::log2(1 - 4 * eta * s / ((1 + s) * (1 + s)));
}

// Half-maximum crossing of a decreasing-from-zero line shape by bisection.
inline double half_width(const std::function<double(double)>& f, double hi) {
  const double half = 0.5 * f(0);
  double lo = 0;
  while (f(hi) > half) hi *= 2;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > half ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Random rates with C in [0, 0.95], eta in [0.05, 1], kappa ratios in [0.1, 10].
struct RandomRates {
  std::mt19937_64 rng;
  explicit RandomRates(std::uint64_t seed) : rng(seed) {}
  double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

  eoent::DerivedRates operator()(double n_internal = 0.0) {
    const double ko = 2 * M_PI * 1e6;
    const double km = ko * std::pow(10.0, uni(-1, 1));
    const double eo = uni(0.05, 1), em = uni(0.05, 1);
    auto r = eoent::DerivedRates::from_kappas(eo * ko, (1 - eo) * ko, em * km, (1 - em) * km, 0.0,
                                              n_internal);
    return r.with_cooperativity(uni(0, 0.95));
  }
};

}  // namespace oracle
