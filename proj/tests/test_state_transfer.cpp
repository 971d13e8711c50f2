#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "eoent/error.hpp"
#include "eoent/gaussian.hpp"
#include "eoent/state_transfer.hpp"

using namespace eoent;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

const auto kGauss21 = InputState::coherent_squeezed(2.0, 1.0);
const auto kOddCat = InputState::cat(2.0, kPi);

Eigen::Matrix2d squeezed(double r) {
  Eigen::Matrix2d V = Eigen::Matrix2d::Zero();
  V(0, 0) = 0.5 * std::exp(-2 * r);
  V(1, 1) = 0.5 * std::exp(2 * r);
  return V;
}

// Cat teleportation through the grid: the protocol adds isotropic
// Gaussian noise of variance 2 dq^2 per quadrature.
double teleport_cat_by_grid(cd alpha, double phi, double d) {
  const double ext = default_grid_extent(alpha, 0.5 + 2 * d);
  const auto in = cat_wigner_grid(alpha, phi, ext);
  return wigner_overlap_fidelity(in, convolve_gaussian(in, 2 * d));
}

double convert_cat_by_grid(double alpha, double phi, double eps3) {
  const double ext = default_grid_extent(alpha, 0.5);
  return wigner_overlap_fidelity(cat_wigner_grid(alpha, phi, ext), cat_wigner_grid(eps3 * alpha, phi, ext));
}

}  // namespace

TEST_CASE("input state validation") {
  CHECK_THROWS_AS(InputState::coherent_squeezed(1.0, -0.1), InvalidParameter);
  CHECK_THROWS_AS(InputState::cat(0.0, kPi), InvalidParameter);
  CHECK_NOTHROW(InputState::cat(0.0, 0.0));
  CHECK(kOddCat.cat_norm_sq() == Approx(2 - 2 * std::exp(-8.0)));
  CHECK(InputState::cat(cd(1, 1), 0.0).cat_norm_sq() == Approx(2 + 2 * std::exp(-4.0)));
  CHECK_THROWS_AS(teleport_fidelity_cat(kGauss21, 0.3, 1, 1, 0), InvalidParameter);
}

TEST_CASE("Gaussian fidelity") {
  const Eigen::Matrix2d vac = 0.5 * Eigen::Matrix2d::Identity();
  CHECK(gaussian_fidelity({0, 0}, vac, {0, 0}, vac) == Approx(1.0).epsilon(1e-15));
  CHECK(gaussian_fidelity({1, 2}, squeezed(0.7), {1, 2}, squeezed(0.7)) == Approx(1.0).epsilon(1e-14));
  // Coherent states: |<a|b>|^2 = exp(-|a - b|^2) with x = sqrt 2 (Re, Im).
  const cd a(1.0, 0.5), b(-0.3, 1.2);
  const Eigen::Vector2d xa(std::sqrt(2.0) * a.real(), std::sqrt(2.0) * a.imag());
  const Eigen::Vector2d xb(std::sqrt(2.0) * b.real(), std::sqrt(2.0) * b.imag());
  CHECK(gaussian_fidelity(xa, vac, xb, vac) == Approx(std::exp(-std::norm(a - b))).epsilon(1e-14));
  CHECK_THROWS_AS(gaussian_fidelity({0, 0}, Eigen::Matrix2d::Zero(), {0, 0}, Eigen::Matrix2d::Zero()),
                  NumericError);
}

TEST_CASE("teleportation classical limits") {
  CHECK(teleport_classical_limit(0.0) == 0.5);
  CHECK(teleport_classical_limit(1.0) == Approx(1 / (2 * std::cosh(1.0))).epsilon(1e-15));
  CHECK(teleport_classical_limit(1.0) == Approx(0.3240).epsilon(1e-4));
  // No shared entanglement (C = 0) reproduces the classical bound.
  CHECK(teleport_fidelity_gaussian(kGauss21, 0.0, 0.5, 0.8, 0).fidelity ==
        Approx(teleport_classical_limit(1.0)).epsilon(1e-14));
  CHECK(teleport_fidelity_cat(kOddCat, 0.0, 0.5, 0.8, 0).fidelity ==
        Approx(teleport_classical_limit_cat(2.0, kPi)).epsilon(1e-14));
  CHECK(teleport_classical_limit_cat(2.0, kPi) == Approx(0.25).epsilon(1e-6));
}

TEST_CASE("teleportation approaches unit fidelity for a lossless source") {
  for (double r : {0.0, 0.5, 1.0, 2.0})
    CHECK(teleport_fidelity_gaussian(InputState::coherent_squeezed(2.0, r), 0.9999, 1, 1, 0).fidelity >= 0.99);
  CHECK(teleport_fidelity_cat(kOddCat, 0.9999, 1, 1, 0).fidelity >= 0.99);
  CHECK(teleport_fidelity_cat_at(2.0, kPi, 0.0) == Approx(1.0).epsilon(1e-14));
  CHECK(teleport_fidelity_cat_at(cd(0.3, 1.1), 0.4, 0.0) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("teleportation fidelity does not depend on alpha") {
  for (double C : {0.1, 0.5, 0.9}) {
    const double ref = teleport_fidelity_gaussian(InputState::coherent_squeezed(0.0, 0.8), C, 0.5, 0.8, 0.2).fidelity;
    for (cd a : {cd(1, 0), cd(3, -2), cd(0, 7)})
      CHECK(teleport_fidelity_gaussian(InputState::coherent_squeezed(a, 0.8), C, 0.5, 0.8, 0.2).fidelity ==
            Approx(ref).epsilon(1e-15));
  }
}

TEST_CASE("teleportation through the grid oracle") {
  CHECK(teleport_cat_by_grid(2.0, kPi, 0.1) == Approx(teleport_fidelity_cat_at(2.0, kPi, 0.1)).epsilon(0.01));
  for (double phi : {0.0, kPi / 2, kPi})
    for (double d : {0.05, 0.3})
      CHECK(teleport_cat_by_grid(1.5, phi, d) == Approx(teleport_fidelity_cat_at(1.5, phi, d)).epsilon(0.01));
  // Gaussian input: convolving |alpha, r> with variance 2d matches the closed form.
  const double d = source_var_minus(0.4, 0.6, 0.9, 0);
  const double ext = default_grid_extent(2.0, std::exp(2.0) / 2 + 2 * d);
  const auto in = gaussian_wigner_grid({2 * std::sqrt(2.0), 0}, squeezed(1.0), ext);
  CHECK(wigner_overlap_fidelity(in, convolve_gaussian(in, 2 * d)) ==
        Approx(teleport_fidelity_gaussian(kGauss21, 0.4, 0.6, 0.9, 0).fidelity).epsilon(0.01));
}

TEST_CASE("conversion of Gaussian states") {
  // Lower bound at C = 0.
  const double lb = 2 * std::exp(-1.0 - 8.0) / (1 + std::exp(-2.0));
  CHECK(convert_fidelity_gaussian(kGauss21, 0.0, 0.5, 0.8, 0).fidelity == Approx(lb).epsilon(1e-12));
  CHECK(lb == Approx(2.18e-4).epsilon(2e-3));
  // Perfect converter.
  CHECK(convert_fidelity_gaussian(kGauss21, 1.0, 1, 1, 0).fidelity == Approx(1.0).epsilon(1e-14));
  CHECK(convert_fidelity_gaussian_check(kGauss21, 1.0, 1, 1, 0).fidelity == Approx(1.0).epsilon(1e-14));
  // Stable in the conversion branch beyond C = 1.
  CHECK_NOTHROW(convert_fidelity_gaussian(kGauss21, 2.0, 1, 1, 0));
  // Phase restriction of the unsquared weights.
  CHECK_NOTHROW(convert_fidelity_gaussian(InputState::coherent_squeezed(cd(0, 2), 1.0), 0.3, 1, 1, 0));
  CHECK_THROWS_AS(convert_fidelity_gaussian(InputState::coherent_squeezed(cd(-2, 0), 1.0), 0.3, 1, 1, 0),
                  UnsupportedInput);
  CHECK_THROWS_AS(convert_fidelity_gaussian(InputState::coherent_squeezed(cd(1, -1), 1.0), 0.3, 1, 1, 0),
                  UnsupportedInput);
}

TEST_CASE("physical conversion channel") {
  // Coherent input, cold: overlap of |alpha> with |eps3 alpha>.
  for (double C : {0.05, 0.3, 0.8}) {
    const double e3 = conversion_amplitude(C, 0.7, 0.9);
    const cd a(1.3, 0.4);
    CHECK(convert_fidelity_gaussian_check(InputState::coherent_squeezed(a, 0), C, 0.7, 0.9, 0).fidelity ==
          Approx(std::exp(-std::norm(a) * (1 - e3) * (1 - e3))).epsilon(1e-12));
  }
  // Grid oracle for the same channel with thermal noise.
  const double C = 0.3, n = 0.5;
  const double e3 = conversion_amplitude(C, 0.8, 0.8);
  const double q = 4 * 0.8 * n / ((1 + C) * (1 + C));
  const Eigen::Vector2d x(std::sqrt(2.0), 0);
  const Eigen::Matrix2d Vout = e3 * e3 * squeezed(0.5) + ((1 - e3 * e3) / 2 + q) * Eigen::Matrix2d::Identity();
  const double ext = default_grid_extent(1.0, Vout.maxCoeff());
  const double grid = wigner_overlap_fidelity(gaussian_wigner_grid(x, squeezed(0.5), ext),
                                              gaussian_wigner_grid(e3 * x, Vout, ext));
  CHECK(convert_fidelity_gaussian_check(InputState::coherent_squeezed(1.0, 0.5), C, 0.8, 0.8, n).fidelity ==
        Approx(grid).epsilon(1e-3));
}

TEST_CASE("conversion of cat states") {
  CHECK(convert_fidelity_cat(kOddCat, 1.0, 1, 1, 0).fidelity == Approx(1.0).epsilon(1e-9));
  CHECK(convert_fidelity_cat(InputState::cat(1.0, 0.0), 1.0, 1, 1, 0).fidelity == Approx(1.0).epsilon(1e-9));
  CHECK(convert_fidelity_cat(kOddCat, 0.0, 0.5, 0.8, 0).fidelity == 0.0);
  const double a2 = 4.0;
  CHECK(convert_fidelity_cat(InputState::cat(2.0, 0.0), 0.0, 0.5, 0.8, 0).fidelity ==
        Approx(2 / (std::exp(a2) + std::exp(-a2))).epsilon(1e-14));
  CHECK_THROWS_AS(convert_fidelity_cat(InputState::cat(cd(2, 1), kPi), 0.3, 1, 1, 0), UnsupportedInput);
}

TEST_CASE("cat conversion through the grid oracle") {
  for (double C : {0.1, 0.4, 0.8})
    for (double a : {0.5, 1.5, 2.5})
      for (double phi : {0.0, kPi}) {
        const double e3 = conversion_amplitude(C, 1, 1);
        CHECK(convert_fidelity_cat(InputState::cat(a, phi), C, 1, 1, 0).fidelity ==
              Approx(convert_cat_by_grid(a, phi, e3)).epsilon(0.01));
      }
}

TEST_CASE("thermal cat conversion through the grid oracle") {
  for (double n : {0.3, 1.4})
    for (double phi : {0.0, kPi / 2, kPi}) {
      const double C = 0.4, a = 1.2;
      const double e3 = conversion_amplitude(C, 0.7, 0.9);
      const double q = 4 * 0.9 * n / ((1 + C) * (1 + C));
      const double ext = default_grid_extent(a, 0.5 + q);
      const double grid = wigner_overlap_fidelity(cat_wigner_grid(a, phi, ext),
                                                  convolve_gaussian(cat_wigner_grid(e3 * a, phi, ext), q));
      CHECK(convert_fidelity_cat(InputState::cat(a, phi), C, 0.7, 0.9, n).fidelity == Approx(grid).epsilon(1e-3));
    }
}

TEST_CASE("grid oracle sanity") {
  const Eigen::Matrix2d vac = 0.5 * Eigen::Matrix2d::Identity();
  const auto v = gaussian_wigner_grid({0, 0}, vac, 6.0);
  CHECK(v.integral() == Approx(1.0).epsilon(1e-6));
  CHECK(wigner_overlap_fidelity(v, v) == Approx(1.0).epsilon(1e-3));
  // Coherent states |alpha| = 4 apart.
  const double ext = 10.0;
  const auto a = gaussian_wigner_grid({-2 * std::sqrt(2.0), 0}, vac, ext);
  const auto b = gaussian_wigner_grid({2 * std::sqrt(2.0), 0}, vac, ext);
  CHECK(wigner_overlap_fidelity(a, b) < 1e-6);
  CHECK(cat_wigner_grid(2.0, kPi, default_grid_extent(2.0, 0.5)).integral() == Approx(1.0).epsilon(1e-6));
  CHECK(convolve_gaussian(v, 0.3).integral() == Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(wigner_overlap_fidelity(v, gaussian_wigner_grid({0, 0}, vac, 5.0)), InvalidParameter);
  CHECK_THROWS_AS(wigner_overlap_fidelity(v, gaussian_wigner_grid({0, 0}, vac, 6.0, 101)), InvalidParameter);
  CHECK_THROWS_AS(wigner_overlap_fidelity(v, gaussian_wigner_grid({5, 0}, vac, 6.0)), NumericError);
}

TEST_CASE("fidelities lie in [0, 1]") {
  std::mt19937_64 rng(4242);
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  for (int k = 0; k < 1000; ++k) {
    const double C = uni(0, 0.99), eo = uni(0, 1), em = uni(0, 1), n = uni(0, 3);
    const double a = uni(0, 3), r = uni(0, 2), phi = uni(0, 2 * kPi);
    const auto g = InputState::coherent_squeezed(std::polar(a, uni(0, kPi / 2)), r);
    const auto c = InputState::cat(a + 0.1, phi);
    for (const FidelityResult& f :
         {teleport_fidelity_gaussian(g, C, eo, em, n), teleport_fidelity_cat(c, C, eo, em, n),
          convert_fidelity_gaussian(g, C, eo, em, n), convert_fidelity_gaussian_check(g, C, eo, em, n),
          convert_fidelity_cat(c, C, eo, em, n)}) {
      CHECK(f.fidelity >= 0);
      CHECK(f.fidelity <= 1 + 1e-12);
      CHECK(f.classical_bound >= 0);
      CHECK(f.classical_bound <= 1);
    }
  }
}

TEST_CASE("thermal noise lowers teleportation and cat-conversion fidelities") {
  for (double C : {0.05, 0.2, 0.5, 0.8})
    for (double n : {0.1, 1.0}) {
      CHECK(teleport_fidelity_gaussian(kGauss21, C, 0.5, 0.8, n).fidelity <
            teleport_fidelity_gaussian(kGauss21, C, 0.5, 0.8, 0).fidelity);
      CHECK(teleport_fidelity_cat(kOddCat, C, 0.5, 0.8, n).fidelity <
            teleport_fidelity_cat(kOddCat, C, 0.5, 0.8, 0).fidelity);
      CHECK(convert_fidelity_cat(kOddCat, C, 0.5, 0.8, n).fidelity <
            convert_fidelity_cat(kOddCat, C, 0.5, 0.8, 0).fidelity);
    }
}

TEST_CASE("Gaussian conversion can gain from added noise when the mean is off") {
  // Broadening the output raises its overlap with a far-displaced input, so
  // this protocol does not obey the thermal ordering of the others.
  CHECK(convert_fidelity_gaussian_check(kGauss21, 0.075, 0.31, 0.26, 1.0).fidelity >
        convert_fidelity_gaussian_check(kGauss21, 0.075, 0.31, 0.26, 0).fidelity);
  // Near-perfect transfer is degraded by noise as expected.
  CHECK(convert_fidelity_gaussian_check(kGauss21, 0.9, 1, 1, 1.0).fidelity <
        convert_fidelity_gaussian_check(kGauss21, 0.9, 1, 1, 0).fidelity);
}

TEST_CASE("cat crossover: conversion beats teleportation above C = 0.2") {
  for (double C = 0.21; C < 1.0; C += 0.02) {
    CHECK(convert_fidelity_cat(kOddCat, C, 1, 1, 0).fidelity > teleport_fidelity_cat(kOddCat, C, 1, 1, 0).fidelity);
    CHECK(convert_fidelity_cat(kOddCat, C, 0.5, 0.8, 0).fidelity >
          teleport_fidelity_cat(kOddCat, C, 0.5, 0.8, 0).fidelity);
  }
}

TEST_CASE("transfer_fidelity dispatch fills the bandwidth") {
  const auto r = derive_rates(SystemParams::reference()).with_cooperativity(0.3);
  const auto t = transfer_fidelity(Protocol::teleport, kOddCat, r);
  CHECK(t.fidelity == teleport_fidelity_cat(kOddCat, 0.3, r.eta_o(), r.eta_mw(), r.n_th_mode).fidelity);
  REQUIRE(t.bandwidth.has_value());
  CHECK(*t.bandwidth > 0);
  const auto c = transfer_fidelity(Protocol::convert, kGauss21, r);
  CHECK(c.protocol == Protocol::convert);
  REQUIRE(c.bandwidth.has_value());
  CHECK(*c.bandwidth > *t.bandwidth);
}
