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

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qswap/algebra.hpp"
#include "qswap/bath.hpp"

namespace qswap {

/// Rectangular exchange pulse: J(t) = J0 on [0, tau_s], zero after,
/// with J0 * tau_s = pi (one full swap).
struct GateSchedule {
  double j0 = 1.0;
  double tau_s = std::numbers::pi;
};

inline GateSchedule make_schedule(double j0) {
  if (!(j0 > 0.0)) throw std::invalid_argument("exchange energy j0 must be positive");
  return {j0, std::numbers::pi / j0};
}

/// tbar = min(t, tau_s); the same rule applies to s and tau inside integrals.
inline double clamp(double t, const GateSchedule& schedule) {
  if (t < 0.0) throw std::invalid_argument("time must be non-negative");
  return std::min(t, schedule.tau_s);
}

namespace detail {

inline complexd cis(double x) { return complexd(std::cos(x), std::sin(x)); }

// Quadrature of grid samples f(k0..k1) with spacing du: composite Simpson,
// with a 3/8 tail when the interval count is odd.
inline complexd simpson_grid(const std::function<complexd(long)>& f, long k0, long k1,
                             double du) {
  const long n = k1 - k0;
  if (n <= 0) return complexd(0.0, 0.0);
  if (n == 1) return 0.5 * du * (f(k0) + f(k1));
  complexd sum(0.0, 0.0);
  long even_end = k1;
  if (n % 2 != 0) even_end = k1 - 3;  // leave 3 intervals for the 3/8 rule
  if (even_end > k0) {
    complexd s = f(k0) + f(even_end);
    for (long k = k0 + 1; k < even_end; ++k) s += ((k - k0) % 2 == 1 ? 4.0 : 2.0) * f(k);
    sum += du / 3.0 * s;
  }
  if (even_end < k1) {
    if (even_end == k0) {
      // n == 3: pure 3/8 rule
    }
    sum += 3.0 * du / 8.0 * (f(even_end) + 3.0 * f(even_end + 1) + 3.0 * f(even_end + 2) + f(k1));
  }
  return sum;
}

// Integral of e^{i w s} ds over [a, b].
inline complexd cis_integral(double w, double a, double b) {
  if (std::abs(w) < 1e-14) return complexd(b - a, 0.0);
  return (cis(w * b) - cis(w * a)) / complexd(0.0, w);
}

}  // namespace detail

/// Double time integrals p_{ab|gd}(t). The tensor is degenerate: entries
/// depend on the indices only through (w_a, w_b) = (omega_ag, omega_db), so
/// nine canonical values are stored and looked up.
class PTensor {
 public:
  PTensor() = default;
  PTensor(double j0, std::array<std::array<complexd, 3>, 3> canonical)
      : j0_(j0), p_(canonical) {}

  complexd canonical(int ia, int ib) const { return p_[ia][ib]; }

  complexd lookup(int a, int b, int g, int d, const EnergySpectrum& spectrum) const {
    const int ia = BathKernelTable::widx(spectrum.omega(a, g), j0_);
    const int ib = BathKernelTable::widx(spectrum.omega(d, b), j0_);
    return p_[ia][ib];
  }

  /// P(w_a, w_b) by frequency value.
  complexd at(double w_a, double w_b) const {
    return p_[BathKernelTable::widx(w_a, j0_)][BathKernelTable::widx(w_b, j0_)];
  }

  double j0() const { return j0_; }

 private:
  double j0_ = 1.0;
  std::array<std::array<complexd, 3>, 3> p_{};
};

/// Three-region evaluation of the canonical integrals
///   region 1 = int_0^{min(t,tau_s)} ds e^{i s (w_b + w_a)} C_{-w_a}(s)
///   region 2 = e^{i tau_s w_b} int_{tau_s}^t ds e^{i s w_a}
///                [C_{-w_a}(s) - C_{-w_a}(s - tau_s)]        (t > tau_s only)
///   region 3 = e^{i tau_s (w_b + w_a)} D(t - tau_s)         (t > tau_s only)
/// Outer integrals are composite Simpson on the kernel-table grid; t is
/// snapped to the nearest grid node. In markov mode the window integrand of
/// region 2 vanishes (C is constant for u > 0) and regions 1 and 3 are
/// evaluated analytically.
inline PTensor p_tensor(double t, const BathKernelTable& table, const GateSchedule& schedule) {
  if (t < 0.0) throw std::invalid_argument("time must be non-negative");
  if (t > table.u_max() + 0.5 * table.du())
    throw std::invalid_argument("time exceeds the kernel table horizon");
  const double du = table.du();
  const long kt = std::min(static_cast<long>(std::llround(t / du)), table.size());
  const long ks = table.steps_per_tau_s();
  const double tau_s = schedule.tau_s;
  const double freqs[3] = {-schedule.j0, 0.0, schedule.j0};

  std::array<std::array<complexd, 3>, 3> out{};
  for (int ia = 0; ia < 3; ++ia) {
    const double wa = freqs[ia];
    const int iwa_neg = 2 - ia;  // index of -w_a
    for (int ib = 0; ib < 3; ++ib) {
      const double wb = freqs[ib];
      complexd p(0.0, 0.0);
      if (table.markov()) {
        const double rate = table.markov_rate();
        const double t_snap = kt * du;
        p = rate * detail::cis_integral(wa + wb, 0.0, std::min(t_snap, tau_s));
        if (kt > ks) p += detail::cis(tau_s * (wa + wb)) * rate * (t_snap - tau_s);
      } else {
        // region 1
        p += detail::simpson_grid(
            [&](long k) {
              return detail::cis(k * du * (wa + wb)) * table.c(iwa_neg, k);
            },
            0, std::min(kt, ks), du);
        if (kt > ks) {
          // region 2
          p += detail::cis(tau_s * wb) *
               detail::simpson_grid(
                   [&](long k) {
                     return detail::cis(k * du * wa) *
                            (table.c(iwa_neg, k) - table.c(iwa_neg, k - ks));
                   },
                   ks, kt, du);
          // region 3
          p += detail::cis(tau_s * (wa + wb)) * table.d(kt - ks);
        }
      }
      out[ia][ib] = p;
    }
  }
  return PTensor(schedule.j0, out);
}

enum class PrefactorConvention {
  /// Free evolution of the (a,b) coherence: e^{-i tbar omega_ab}. Reproduces
  /// the exact swap in the unitary limit.
  row_coherence,
  /// Diagnostic only: e^{-i tbar omega_ag} as printed in some references.
  printed
};

/// Second-order evolution superoperator E_{ab|gd}(t).
struct EvolutionSuperOp {
  Tensor4 e;
  double t = 0.0;
  double tbar = 0.0;
};

/// Assembles
///   E_{ab|gd} = e^{-i tbar w_ab} [ d_ag d_bd
///       - d_bd sum_k M_{akkg} P(w_kg, w_ak)
///       - d_ag sum_k M_{dkkb} conj(P(w_kd, w_bk))
///       + M_{agdb} (P(w_ag, w_db) + conj(P(w_bd, w_ga))) ].
/// The third term's P arguments follow from the matrix elements of
/// [rho S(tau), S(s)]; they are the unique choice preserving Hermiticity.
inline EvolutionSuperOp evolution_superop(
    double t, const PTensor& p, const CouplingTensor& m, const EnergySpectrum& spectrum,
    const GateSchedule& schedule,
    PrefactorConvention convention = PrefactorConvention::row_coherence) {
  EvolutionSuperOp out;
  out.t = t;
  out.tbar = clamp(t, schedule);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int g = 0; g < 4; ++g)
        for (int d = 0; d < 4; ++d) {
          complexd core(0.0, 0.0);
          if (a == g && b == d) core += 1.0;
          if (b == d)
            for (int k = 0; k < 4; ++k)
              core -= m(a, k, k, g) * p.at(spectrum.omega(k, g), spectrum.omega(a, k));
          if (a == g)
            for (int k = 0; k < 4; ++k)
              core -= m(d, k, k, b) *
                      std::conj(p.at(spectrum.omega(k, d), spectrum.omega(b, k)));
          core += m(a, g, d, b) * (p.at(spectrum.omega(a, g), spectrum.omega(d, b)) +
                                   std::conj(p.at(spectrum.omega(b, d), spectrum.omega(g, a))));
          const double w = (convention == PrefactorConvention::row_coherence)
                               ? spectrum.omega(a, b)
                               : spectrum.omega(a, g);
          out.e(a, b, g, d) = detail::cis(-out.tbar * w) * core;
        }
  return out;
}

/// rho(t)_{ab} = sum_{gd} E_{ab|gd} rho0_{gd}. Throws
/// NumericalIntegrityError when trace or Hermiticity is violated beyond
/// ten times the documented tolerance.
inline Matrix4c apply_superop(const EvolutionSuperOp& e, const Matrix4c& rho0) {
  Matrix4c out = Matrix4c::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      complexd v(0.0, 0.0);
      for (int g = 0; g < 4; ++g)
        for (int d = 0; d < 4; ++d) v += e.e(a, b, g, d) * rho0(g, d);
      out(a, b) = v;
    }
  const double trace_err = std::abs(out.trace() - rho0.trace());
  const double herm_err = (out - out.adjoint()).cwiseAbs().maxCoeff();
  if (trace_err > 1e-7 || herm_err > 1e-9)
    throw NumericalIntegrityError("evolved state violates trace/Hermiticity bounds (trace " +
                                  std::to_string(trace_err) + ", herm " +
                                  std::to_string(herm_err) + ")");
  return out;
}

struct EvolutionPoint {
  double t = 0.0;
  EvolutionSuperOp superop;
  Matrix4c rho;
};

/// One superoperator/state pair per requested time; every point is an
/// independent integral from t = 0, not a step-to-step map.
inline std::vector<EvolutionPoint> evolve_series(const std::vector<double>& times,
                                                 const Matrix4c& rho0,
                                                 const BathKernelTable& table,
                                                 const CouplingTensor& m,
                                                 const EnergySpectrum& spectrum,
                                                 const GateSchedule& schedule) {
  std::vector<EvolutionPoint> out;
  out.reserve(times.size());
  double prev = -1.0;
  for (double t : times) {
    if (t < prev) throw std::invalid_argument("times must be sorted ascending");
    prev = t;
    EvolutionPoint pt;
    pt.t = t;
    const PTensor p = p_tensor(t, table, schedule);
    pt.superop = evolution_superop(t, p, m, spectrum, schedule);
    pt.rho = apply_superop(pt.superop, rho0);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace qswap
