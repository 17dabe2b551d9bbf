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

// Brute-force reference implementations used by the test suites. None of
// these share the three-region/cumulative-table evaluation path of the main
// propagator.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "qswap/algebra.hpp"
#include "qswap/bath.hpp"
#include "qswap/observables.hpp"
#include "qswap/propagator.hpp"

namespace qswap::oracle {

struct OracleConfig {
  int panels_per_tau_s = 8192;   // 2-D quadrature grid
  double rk4_step_frac = 0.04;   // RK4 step as a fraction of 1/omega_c
  std::uint64_t seed = 12345;
};

namespace detail_o {

// Composite Simpson over samples f(0..n) with spacing h; n must be even.
template <typename F>
complexd simpson_even(F&& f, long n, double h) {
  if (n == 0) return complexd(0.0, 0.0);
  complexd s = f(0) + f(n);
  for (long k = 1; k < n; ++k) s += ((k % 2 == 1) ? 4.0 : 2.0) * f(k);
  return h / 3.0 * s;
}

}  // namespace detail_o

/// Direct 2-D quadrature of
///   p(t) = int_0^t ds e^{-i sbar w_bd} int_0^s dtau e^{i taubar w_ag}
///          {Gamma(tau - s) - i Delta(tau - s)}
/// with Gamma even and Delta odd used to evaluate the negative arguments.
/// No region splitting, no cumulative tables; O(n^2) cost.
inline PTensor p_bruteforce(double t, const BathParams& params, const GateSchedule& schedule,
                            const OracleConfig& cfg = {}) {
  if (params.mode == BathMode::markov)
    throw std::invalid_argument("p_bruteforce supports exact and high_t kernels only");
  const double h = schedule.tau_s / cfg.panels_per_tau_s;
  long n = static_cast<long>(std::llround(t / h));
  n -= n % 4;  // outer grid (stride 2) must itself have an even interval count
  if (n <= 0) return PTensor(schedule.j0, {});

  std::vector<complexd> kbar(n + 1);  // Gamma(u) + i Delta(u), u = k h >= 0
  for (long k = 0; k <= n; ++k) {
    const KernelSample s = kernel_sample(k * h, params);
    kbar[k] = complexd(s.gamma, s.delta);
  }
  const double freqs[3] = {-schedule.j0, 0.0, schedule.j0};
  std::array<std::vector<complexd>, 3> phase;  // e^{i min(kh, tau_s) w}
  for (int i = 0; i < 3; ++i) {
    phase[i].resize(n + 1);
    for (long k = 0; k <= n; ++k) {
      const double tb = std::min(k * h, schedule.tau_s);
      phase[i][k] = qswap::detail::cis(tb * freqs[i]);
    }
  }

  // Inner integrals at even outer nodes: with u = s - tau,
  //   inner(s) = int_0^s dtau e^{i taubar w_a} K(s - tau),  K = Gamma + i Delta.
  std::array<std::vector<complexd>, 3> inner;
  for (int ia = 0; ia < 3; ++ia) {
    inner[ia].resize(n / 2 + 1);
    for (long m = 0; m <= n; m += 2) {
      inner[ia][m / 2] =
          detail_o::simpson_even([&](long k) { return phase[ia][k] * kbar[m - k]; }, m, h);
    }
  }

  std::array<std::array<complexd, 3>, 3> out{};
  for (int ia = 0; ia < 3; ++ia)
    for (int ib = 0; ib < 3; ++ib) {
      // Outer phase e^{-i sbar w_bd} = e^{+i sbar w_b}.
      out[ia][ib] = detail_o::simpson_even(
          [&](long j) { return phase[ib][2 * j] * inner[ia][j]; }, n / 2, 2.0 * h);
    }
  return PTensor(schedule.j0, out);
}

/// Interaction-picture TCL2 generator at time s, assembled from the
/// matrix elements of the double commutators:
///   A_w(s) = int_0^s dtau e^{i taubar w} K(s - tau)
///   B_w(s) = int_0^s dtau e^{i taubar w} conj(K(s - tau))
/// both reduced to lookups in the cumulative kernel table.
inline void tcl2_generator(double s, const BathKernelTable& table, const CouplingTensor& m,
                           const EnergySpectrum& spectrum, const GateSchedule& schedule,
                           Tensor4& l) {
  const double tau_s = schedule.tau_s;
  const double sb = std::min(s, tau_s);
  const double freqs[3] = {-schedule.j0, 0.0, schedule.j0};
  complexd a_w[3], b_w[3], ph[3];
  for (int i = 0; i < 3; ++i) {
    const double w = freqs[i];
    const int iw_neg = 2 - i;
    const int iw_pos = i;
    if (s <= tau_s) {
      a_w[i] = qswap::detail::cis(s * w) * table.c_interp(iw_neg, s);
      b_w[i] = qswap::detail::cis(s * w) * std::conj(table.c_interp(iw_pos, s));
    } else {
      a_w[i] = qswap::detail::cis(tau_s * w) * table.c_interp(1, s - tau_s) +
               qswap::detail::cis(s * w) *
                   (table.c_interp(iw_neg, s) - table.c_interp(iw_neg, s - tau_s));
      b_w[i] = qswap::detail::cis(tau_s * w) * std::conj(table.c_interp(1, s - tau_s)) +
               qswap::detail::cis(s * w) *
                   std::conj(table.c_interp(iw_pos, s) - table.c_interp(iw_pos, s - tau_s));
    }
    ph[i] = qswap::detail::cis(sb * w);
  }
  auto widx = [&](double w) { return BathKernelTable::widx(w, schedule.j0); };
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int g = 0; g < 4; ++g)
        for (int d = 0; d < 4; ++d) {
          complexd v(0.0, 0.0);
          if (b == d)
            for (int k = 0; k < 4; ++k)
              v += m(a, k, k, g) * ph[widx(spectrum.omega(a, k))] *
                   a_w[widx(spectrum.omega(k, g))];
          v -= m(a, g, d, b) * ph[widx(spectrum.omega(d, b))] * a_w[widx(spectrum.omega(a, g))];
          if (a == g)
            for (int k = 0; k < 4; ++k)
              v += m(d, k, k, b) * ph[widx(spectrum.omega(k, b))] *
                   b_w[widx(spectrum.omega(d, k))];
          v -= m(a, g, d, b) * ph[widx(spectrum.omega(a, g))] * b_w[widx(spectrum.omega(d, b))];
          l(a, b, g, d) = -v;
        }
}

/// Classical RK4 integration of the interaction-picture TCL2 equation
/// d rho~/dt = L(t) rho~. Returns Schroedinger-picture states at the
/// requested times.
inline std::vector<Matrix4c> rk4_tcl2(const Matrix4c& rho0, const std::vector<double>& times,
                                      const BathKernelTable& table, const CouplingTensor& m,
                                      const EnergySpectrum& spectrum,
                                      const GateSchedule& schedule,
                                      const OracleConfig& cfg = {}) {
  const double h_max = cfg.rk4_step_frac / table.params().omega_c;
  if (h_max > 0.05 / table.params().omega_c + 1e-15)
    throw std::invalid_argument("RK4 step must be at most 0.05 / omega_c");
  Matrix4c rho = rho0;  // interaction picture
  Tensor4 l;
  auto derivative = [&](double s, const Matrix4c& x, Matrix4c& dx) {
    tcl2_generator(s, table, m, spectrum, schedule, l);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        complexd v(0.0, 0.0);
        for (int g = 0; g < 4; ++g)
          for (int d = 0; d < 4; ++d) v += l(a, b, g, d) * x(g, d);
        dx(a, b) = v;
      }
  };
  std::vector<Matrix4c> out;
  out.reserve(times.size());
  double s = 0.0;
  Matrix4c k1, k2, k3, k4, tmp;
  for (double t : times) {
    if (t < s - 1e-12) throw std::invalid_argument("times must be sorted ascending");
    const double span = t - s;
    const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / h_max - 1e-12)) : 0;
    const double h = steps > 0 ? span / steps : 0.0;
    for (long i = 0; i < steps; ++i) {
      derivative(s, rho, k1);
      tmp = rho + 0.5 * h * k1;
      derivative(s + 0.5 * h, tmp, k2);
      tmp = rho + 0.5 * h * k2;
      derivative(s + 0.5 * h, tmp, k3);
      tmp = rho + h * k3;
      derivative(s + h, tmp, k4);
      rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      s += h;
    }
    s = t;
    const double tbar = std::min(t, schedule.tau_s);
    Matrix4c schroedinger;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        schroedinger(a, b) = qswap::detail::cis(-tbar * spectrum.omega(a, b)) * rho(a, b);
    out.push_back(schroedinger);
  }
  return out;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Monte-Carlo average of <psi| U_S^dag E[|psi><psi|] U_S |psi> over
/// Haar-random pure states (normalized complex Gaussian 4-vectors,
/// explicit Box-Muller so the stream is implementation-independent).
inline MonteCarloEstimate haar_average_fidelity(const EvolutionSuperOp& e,
                                               const EnergySpectrum& spectrum,
                                               const GateSchedule& schedule, int n,
                                               std::uint64_t seed) {
  if (n < 100) throw std::invalid_argument("haar_average_fidelity requires n >= 100");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto gaussian_pair = [&](double& x, double& y) {
    double u = 0.0;
    do { u = unif(rng); } while (u <= 0.0);
    const double r = std::sqrt(-2.0 * std::log(u));
    const double th = 2.0 * std::numbers::pi * unif(rng);
    x = r * std::cos(th);
    y = r * std::sin(th);
  };
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    Vector4c psi;
    for (int k = 0; k < 4; ++k) {
      double re, im;
      gaussian_pair(re, im);
      psi(k) = complexd(re, im);
    }
    psi.normalize();
    const Matrix4c rho_out = apply_superop(e, psi * psi.adjoint());
    const double f = state_fidelity(rho_out, psi, spectrum, schedule, e.t);
    sum += f;
    sum2 += f * f;
  }
  MonteCarloEstimate est;
  est.mean = sum / n;
  const double var = std::max(0.0, sum2 / n - est.mean * est.mean);
  est.stderr_ = std::sqrt(var / n);
  return est;
}

}  // namespace qswap::oracle
