// Copyright 2026 The qswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qswap/bath.hpp"

using namespace qswap;

namespace {

const BathParams kPaper{1.8e-5, 300.0, 400.0, BathMode::exact};

// Independent frequency quadrature of Gamma(t): composite Simpson with a
// fixed fine grid, no oscillatory weighting.
double gamma_bruteforce(double t, const BathParams& p, long panels = 400000) {
  auto g = [&](double om) {
    if (om < 1e-12 * p.temperature) return 2.0 * p.temperature;
    return om / std::tanh(om / (2.0 * p.temperature));
  };
  const double h = p.omega_c / panels;
  double s = g(0.0) + g(p.omega_c) * std::cos(p.omega_c * t);
  for (long k = 1; k < panels; ++k)
    s += ((k % 2 == 1) ? 4.0 : 2.0) * g(k * h) * std::cos(k * h * t);
  return p.lambda2_eta / std::numbers::pi * h / 3.0 * s;
}

}  // namespace

TEST_CASE("parameter validation") {
  BathParams p = kPaper;
  p.temperature = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = kPaper;
  p.omega_c = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = kPaper;
  p.lambda2_eta = -1e-9;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_NOTHROW(kPaper.validate());
}

TEST_CASE("markov constants at the reference parameters") {
  const double tau_s = std::numbers::pi;  // j0 = 1
  const MarkovConstants c = markov_constants(kPaper, tau_s);
  CHECK(c.gamma0 == doctest::Approx(1.8e-5 * 300.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(c.gamma0 == doctest::Approx(1.696e-2).epsilon(1e-3));
  CHECK(c.delta0 == doctest::Approx(7.2e-3).epsilon(1e-12));
}

TEST_CASE("Delta closed form: zero at t = 0, odd, series matches the formula") {
  CHECK(delta_closed_form(0.0, kPaper) == 0.0);
  const double t = 0.37 * std::numbers::pi;
  CHECK(delta_closed_form(-t, kPaper) == doctest::Approx(-delta_closed_form(t, kPaper))
                                             .epsilon(1e-13));
  // Continuity across the series switch at |wc t| = 1e-3.
  const double ts = 1e-3 / kPaper.omega_c;
  CHECK(delta_closed_form(ts * 0.999, kPaper) ==
        doctest::Approx(delta_closed_form(ts * 1.001, kPaper)).epsilon(1e-6));
  // Large-t sign structure: Delta(t) -> (lambda2_eta wc / pi) cos(wc t) / t.
  const double tl = 10.0;
  const double expect = kPaper.lambda2_eta * kPaper.omega_c / std::numbers::pi *
                        std::cos(kPaper.omega_c * tl) / tl;
  CHECK(delta_closed_form(tl, kPaper) == doctest::Approx(expect).epsilon(1e-2));
}

TEST_CASE("exact Gamma matches a brute-force frequency quadrature") {
  for (double t : {0.0, 0.01, 0.37 * std::numbers::pi, 1.0, 3.0}) {
    const double ref = gamma_bruteforce(t, kPaper);
    const KernelSample s = kernel_exact(t, kPaper);
    CHECK(s.gamma == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("exact Gamma is even in t") {
  const double t = 0.37 * std::numbers::pi;
  CHECK(kernel_exact(t, kPaper).gamma ==
        doctest::Approx(kernel_exact(-t, kPaper).gamma).epsilon(1e-12));
}

TEST_CASE("Gamma(0) equals the full thermal weight") {
  // Gamma(0) = (lambda2_eta/pi) int_0^wc w coth(w/2T) dw > (lambda2_eta/pi) T wc.
  const double g0 = kernel_exact(0.0, kPaper).gamma;
  CHECK(g0 > kPaper.lambda2_eta / std::numbers::pi * kPaper.temperature * kPaper.omega_c);
  CHECK(g0 == doctest::Approx(gamma_bruteforce(0.0, kPaper)).epsilon(1e-10));
}

TEST_CASE("zero coupling gives an identically zero kernel") {
  BathParams p = kPaper;
  p.lambda2_eta = 0.0;
  const KernelSample s = kernel_exact(1.3, p);
  CHECK(s.gamma == 0.0);
  CHECK(s.delta == 0.0);
}

TEST_CASE("high-T closed form: t -> 0 limit and Delta unchanged") {
  BathParams p = kPaper;
  p.mode = BathMode::high_t;
  const KernelSample s0 = kernel_high_t(0.0, p);
  CHECK(s0.gamma ==
        doctest::Approx(2.0 * p.lambda2_eta * p.temperature * p.omega_c / std::numbers::pi)
            .epsilon(1e-12));
  const double t = 0.37;
  CHECK(kernel_high_t(t, p).delta == doctest::Approx(delta_closed_form(t, p)).epsilon(1e-14));
  CHECK(kernel_sample(t, p).gamma == doctest::Approx(kernel_high_t(t, p).gamma));
}

TEST_CASE("high-T approximation converges to exact as T grows") {
  BathParams hot = kPaper;
  hot.temperature = 4000.0;
  const double t = 0.005;  // inside the first kernel lobe
  const double exact = kernel_exact(t, hot).gamma;
  const double approx = kernel_high_t(t, hot).gamma;
  CHECK(std::abs(approx - exact) / std::abs(exact) < 2e-3);

  const double exact300 = kernel_exact(t, kPaper).gamma;
  const double approx300 = kernel_high_t(t, kPaper).gamma;
  const double rel300 = std::abs(approx300 - exact300) / std::abs(exact300);
  CHECK(rel300 < 0.06);
  CHECK(rel300 > std::abs(approx - exact) / std::abs(exact));
}

TEST_CASE("kernel table grid: tau_s is an exact grid multiple, du within bound") {
  const EnergySpectrum spec = energies(1.0);
  const BathKernelTable table(kPaper, spec, 4.0 * spec.tau_s());
  CHECK(table.du() <= std::numbers::pi / (40.0 * kPaper.omega_c) + 1e-15);
  CHECK(table.steps_per_tau_s() * table.du() == doctest::Approx(spec.tau_s()).epsilon(1e-14));
  CHECK(table.u_max() >= 4.0 * spec.tau_s() - 1e-12);
  CHECK_THROWS_AS(BathKernelTable(kPaper, spec, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(BathKernelTable(kPaper, spec, -1.0), std::invalid_argument);
}

TEST_CASE("cumulative C obeys basic calculus identities") {
  const EnergySpectrum spec = energies(1.0);
  const BathKernelTable table(kPaper, spec, spec.tau_s());
  CHECK(std::abs(table.c(1, 0)) == 0.0);
  CHECK(std::abs(table.d(0)) == 0.0);
  // First Simpson pair is reproduced exactly.
  auto f = [&](long k) {
    return complexd(std::cos(k * table.du() * spec.j0), std::sin(k * table.du() * spec.j0)) *
           table.kernel_value(k);
  };
  CHECK(std::abs(table.c(2, 2) - table.du() / 3.0 * (f(0) + 4.0 * f(1) + f(2))) < 1e-18);
  // D is the cumulative of C_0 and therefore monotone-real at small u.
  CHECK(table.d(10).real() > 0.0);
}

TEST_CASE("with Delta dropped, C at +-J0 are complex conjugates") {
  const EnergySpectrum spec = energies(1.0);
  const BathKernelTable table(kPaper, spec, spec.tau_s(), 40, /*drop_delta=*/true);
  for (long k : {1L, 100L, table.size() / 2, table.size()}) {
    CHECK(std::abs(table.c(0, k) - std::conj(table.c(2, k))) < 1e-15);
    CHECK(std::abs(table.c(1, k).imag()) < 1e-15);
  }
}

TEST_CASE("grid refinement changes the cumulatives below 1e-8 relative") {
  const EnergySpectrum spec = energies(1.0);
  const BathKernelTable coarse(kPaper, spec, spec.tau_s(), 160);
  const BathKernelTable fine(kPaper, spec, spec.tau_s(), 320);
  const complexd a = coarse.c(1, coarse.steps_per_tau_s());
  const complexd b = fine.c(1, fine.steps_per_tau_s());
  CHECK(std::abs(a - b) / std::abs(b) < 1e-8);
}

TEST_CASE("Re C_0 saturates to Gamma0/tau_s at long times (high_t mode)") {
  BathParams p = kPaper;
  p.mode = BathMode::high_t;
  const EnergySpectrum spec = energies(1.0);
  const double tau_s = spec.tau_s();
  const BathKernelTable table(p, spec, 20.0 * tau_s);
  const double rate = markov_constants(p, tau_s).gamma0 / tau_s;
  CHECK(table.c(1, table.size()).real() == doctest::Approx(rate).epsilon(0.02));
  // Im C_0 saturates to -Delta0/tau_s.
  const double im_rate = -markov_constants(p, tau_s).delta0 / tau_s;
  CHECK(table.c(1, table.size()).imag() == doctest::Approx(im_rate).epsilon(0.02));
}

TEST_CASE("markov table degenerates to the delta-kernel convention") {
  BathParams p = kPaper;
  p.mode = BathMode::markov;
  const EnergySpectrum spec = energies(1.0);
  const double tau_s = spec.tau_s();
  const BathKernelTable table(p, spec, 4.0 * tau_s);
  CHECK(table.markov());
  const double rate = markov_constants(p, tau_s).gamma0 / tau_s;
  CHECK(table.markov_rate() == doctest::Approx(rate).epsilon(1e-14));
  CHECK(std::abs(table.c(0, 0)) == 0.0);
  for (int w = 0; w < 3; ++w)
    CHECK(table.c(w, 17) == complexd(rate, 0.0));
  CHECK(table.d(100) == complexd(rate * 100.0 * table.du(), 0.0));
  CHECK(table.c_interp(1, 0.5 * tau_s) == complexd(rate, 0.0));
}

TEST_CASE("c_interp interpolates linearly between nodes") {
  const EnergySpectrum spec = energies(1.0);
  const BathKernelTable table(kPaper, spec, spec.tau_s());
  const double du = table.du();
  CHECK(std::abs(table.c_interp(1, 0.0)) == 0.0);
  CHECK(std::abs(table.c_interp(1, 7 * du) - table.c(1, 7)) < 1e-18);
  const complexd mid = table.c_interp(1, 7.5 * du);
  CHECK(std::abs(mid - 0.5 * (table.c(1, 7) + table.c(1, 8))) < 1e-18);
  // Clamped at the horizon.
  CHECK(std::abs(table.c_interp(1, table.u_max() + du) - table.c(1, table.size())) < 1e-18);
}

TEST_CASE("zero coupling yields an all-zero table") {
  BathParams p = kPaper;
  p.lambda2_eta = 0.0;
  const EnergySpectrum spec = energies(1.0);
  const BathKernelTable table(p, spec, spec.tau_s());
  for (long k : {0L, 1L, table.size()}) {
    CHECK(std::abs(table.c(0, k)) == 0.0);
    CHECK(std::abs(table.c(1, k)) == 0.0);
    CHECK(std::abs(table.c(2, k)) == 0.0);
    CHECK(std::abs(table.d(k)) == 0.0);
  }
}
