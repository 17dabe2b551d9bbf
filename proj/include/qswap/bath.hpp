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
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qswap/algebra.hpp"

namespace qswap {

enum class BathMode { exact, high_t, markov };

/// Ohmic bath with sharp cutoff: spectral density A(w) = eta * w for
/// w < omega_c. lambda2_eta is the combined coupling lambda^2 * eta.
struct BathParams {
  double lambda2_eta = 1.8e-5;  // dimensionless
  double temperature = 300.0;   // k_B T, Kelvin
  double omega_c = 400.0;       // cutoff, Kelvin
  BathMode mode = BathMode::exact;

  void validate() const {
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (!(omega_c > 0.0)) throw std::invalid_argument("omega_c must be positive");
    if (lambda2_eta < 0.0) throw std::invalid_argument("lambda2_eta must be non-negative");
  }
};

/// One sample of the bath autocorrelation kernel Gamma(t) + i Delta(t).
struct KernelSample {
  double gamma = 0.0;  // Kelvin^2
  double delta = 0.0;  // Kelvin^2
};

struct MarkovConstants {
  double gamma0 = 0.0;  // lambda2_eta * k_B T * tau_s
  double delta0 = 0.0;  // lambda2_eta * omega_c * tau_s / pi
};

inline MarkovConstants markov_constants(const BathParams& p, double tau_s) {
  p.validate();
  if (!(tau_s > 0.0)) throw std::invalid_argument("tau_s must be positive");
  return {p.lambda2_eta * p.temperature * tau_s,
          p.lambda2_eta * p.omega_c * tau_s / std::numbers::pi};
}

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Delta(t) has the exact antiderivative
///   Delta(t) = -(lambda2_eta/pi) [sin(w_c t) - w_c t cos(w_c t)] / t^2,
/// with a series used near t = 0 where the bracket cancels catastrophically.
inline double delta_closed_form(double t, const BathParams& p) {
  const double wc = p.omega_c;
  const double pref = -p.lambda2_eta / std::numbers::pi;
  const double x = wc * t;
  if (std::abs(x) < 1e-3) {
    const double t2 = t * t;
    return pref * (wc * wc * wc * t / 3.0 - wc * wc * wc * wc * wc * t * t2 / 30.0 +
                   wc * wc * wc * wc * wc * wc * wc * t2 * t2 * t / 840.0);
  }
  return pref * (std::sin(x) - x * std::cos(x)) / (t * t);
}

namespace detail {

// Oscillatory quadrature of F(t) = int_0^{wc} g(w) e^{iwt} dw with
// g(w) = w coth(w / 2T). The smooth factor g is fitted by a quadratic on
// each panel; the oscillatory weight is integrated exactly, so the panel
// error does not grow with t. Moment integrals over xi in [-1,1]:
//   m0 = 2 sin(th)/th
//   m1 = 2i [sin(th)/th^2 - cos(th)/th]
//   m2 = 2 [sin(th)/th + 2 cos(th)/th^2 - 2 sin(th)/th^3]
class OscillatoryGammaQuadrature {
 public:
  OscillatoryGammaQuadrature(double temperature, double omega_c, int panels)
      : omega_c_(omega_c), panels_(panels), half_(omega_c / (2.0 * panels)) {
    c0_.resize(panels);
    c1_.resize(panels);
    c2_.resize(panels);
    const double w = omega_c / panels;
    auto g = [temperature](double om) {
      if (om < 1e-12 * temperature) return 2.0 * temperature;
      return om / std::tanh(om / (2.0 * temperature));
    };
    for (int k = 0; k < panels; ++k) {
      const double a = k * w, b = (k + 1) * w, mid = a + half_;
      const double ga = g(a), gm = g(mid), gb = g(b);
      c0_[k] = gm;
      c1_[k] = 0.5 * (gb - ga);
      c2_[k] = 0.5 * (gb - 2.0 * gm + ga);
    }
  }

  complexd eval(double t) const {
    const double th = t * half_;
    double m0, m1i, m2;
    if (std::abs(th) < 1e-2) {
      const double th2 = th * th;
      m0 = 2.0 * (1.0 - th2 / 6.0 + th2 * th2 / 120.0);
      m1i = 2.0 * (th / 3.0 - th * th2 / 30.0 + th * th2 * th2 / 840.0);
      m2 = 2.0 * (1.0 / 3.0 - th2 / 10.0 + th2 * th2 / 168.0);
    } else {
      const double s = std::sin(th), c = std::cos(th);
      m0 = 2.0 * s / th;
      m1i = 2.0 * (s / (th * th) - c / th);
      m2 = 2.0 * (s / th + 2.0 * c / (th * th) - 2.0 * s / (th * th * th));
    }
    const double w = 2.0 * half_;
    const complexd step(std::cos(t * w), std::sin(t * w));
    complexd phase(std::cos(t * half_), std::sin(t * half_));  // e^{i t mid_0}
    complexd sum(0.0, 0.0);
    const complexd i(0.0, 1.0);
    for (int k = 0; k < panels_; ++k) {
      sum += phase * (c0_[k] * m0 + i * (c1_[k] * m1i) + c2_[k] * m2);
      phase *= step;
    }
    return half_ * sum;
  }

 private:
  double omega_c_;
  int panels_;
  double half_;
  std::vector<double> c0_, c1_, c2_;
};

// Two-resolution evaluator; the coarse/fine difference is the convergence
// estimate reported through QuadratureError.
class GammaEvaluator {
 public:
  GammaEvaluator(double temperature, double omega_c, int panels = 2048)
      : temperature_(temperature),
        omega_c_(omega_c),
        coarse_(temperature, omega_c, panels),
        fine_(temperature, omega_c, 2 * panels) {}

  double gamma_integral(double t) const {
    const double a = coarse_.eval(std::abs(t)).real();
    const double b = fine_.eval(std::abs(t)).real();
    // Scale of the full integral: int_0^wc w coth(w/2T) dw >= T*wc.
    const double scale = 2.0 * temperature_ * omega_c_;
    if (std::abs(a - b) > 1e-9 * scale)
      throw QuadratureError("bath kernel frequency quadrature did not converge at t = " +
                            std::to_string(t));
    return b;
  }

  double temperature() const { return temperature_; }
  double omega_c() const { return omega_c_; }

 private:
  double temperature_;
  double omega_c_;
  OscillatoryGammaQuadrature coarse_, fine_;
};

inline const GammaEvaluator& cached_gamma_evaluator(const BathParams& p) {
  thread_local std::unique_ptr<GammaEvaluator> cache;
  if (!cache || cache->temperature() != p.temperature || cache->omega_c() != p.omega_c)
    cache = std::make_unique<GammaEvaluator>(p.temperature, p.omega_c);
  return *cache;
}

}  // namespace detail

/// Exact kernel: Gamma by frequency quadrature of
/// (lambda2_eta/pi) int_0^{wc} w cos(wt) coth(w/2T) dw, Delta closed form.
inline KernelSample kernel_exact(double t, const BathParams& p) {
  p.validate();
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  if (p.lambda2_eta == 0.0) return {0.0, 0.0};
  const auto& ev = detail::cached_gamma_evaluator(p);
  const double gamma = p.lambda2_eta / std::numbers::pi * ev.gamma_integral(t);
  return {gamma, delta_closed_form(t, p)};
}

/// High-temperature closed form (k_B T >> omega_c / 2):
///   Gamma(t) = (2 lambda2_eta T / pi) sin(w_c t) / t, Delta as exact.
inline KernelSample kernel_high_t(double t, const BathParams& p) {
  p.validate();
  const double wc = p.omega_c;
  const double pref = 2.0 * p.lambda2_eta * p.temperature / std::numbers::pi;
  const double x = wc * t;
  double gamma;
  if (std::abs(x) < 1e-3) {
    gamma = pref * wc * (1.0 - x * x / 6.0 + x * x * x * x / 120.0);
  } else {
    gamma = pref * std::sin(x) / t;
  }
  return {gamma, delta_closed_form(t, p)};
}

inline KernelSample kernel_sample(double t, const BathParams& p) {
  switch (p.mode) {
    case BathMode::exact: return kernel_exact(t, p);
    case BathMode::high_t: return kernel_high_t(t, p);
    case BathMode::markov: return {0.0, 0.0};  // delta kernel: zero a.e.
  }
  return {0.0, 0.0};
}

/// Sampled kernel with per-frequency cumulative integrals
///   C_w(u) = int_0^u e^{i tau w} [Gamma + i Delta] dtau,  w in {-J0, 0, +J0},
/// plus the second cumulative D(u) = int_0^u C_0(v) dv. C is accumulated
/// with a fourth-order Simpson scheme. In markov mode the table degenerates to the
/// delta-kernel convention: C_w(u) = Gamma0/tau_s for u > 0, D(u) linear.
class BathKernelTable {
 public:
  BathKernelTable(const BathParams& params, const EnergySpectrum& spectrum, double u_max,
                  int du_divisor = 40, bool drop_delta = false)
      : params_(params), j0_(spectrum.j0) {
    params.validate();
    if (!(u_max > 0.0)) throw std::invalid_argument("u_max must be positive");
    const double tau_s = spectrum.tau_s();
    // du <= pi/(du_divisor * wc), adjusted downward so tau_s is a grid multiple.
    if (du_divisor < 20) throw std::invalid_argument("kernel_du_divisor must be >= 20");
    const double du0 = std::numbers::pi / (du_divisor * params.omega_c);
    steps_per_tau_s_ = static_cast<long>(std::ceil(tau_s / du0 - 1e-9));
    du_ = tau_s / static_cast<double>(steps_per_tau_s_);
    n_ = static_cast<long>(std::ceil(u_max / du_ - 1e-9));
    u_max_ = n_ * du_;
    markov_ = (params.mode == BathMode::markov);
    if (markov_) {
      gamma0_rate_ = markov_constants(params, tau_s).gamma0 / tau_s;
      return;
    }
    gamma_.resize(n_ + 1);
    delta_.resize(n_ + 1);
    for (long k = 0; k <= n_; ++k) {
      KernelSample s = kernel_sample(k * du_, params);
      gamma_[k] = s.gamma;
      delta_[k] = drop_delta ? 0.0 : s.delta;
    }
    const double freqs[3] = {-j0_, 0.0, j0_};
    for (int w = 0; w < 3; ++w) {
      auto& c = c_[w];
      c.resize(n_ + 1);
      std::vector<complexd> f(n_ + 1);
      for (long k = 0; k <= n_; ++k) {
        const double u = k * du_;
        f[k] = complexd(std::cos(u * freqs[w]), std::sin(u * freqs[w])) * kernel_value(k);
      }
      // Fourth-order cumulative: Simpson pairs at even nodes, a one-sided
      // quadratic rule for the half step to odd nodes (local, non-cumulative).
      c[0] = complexd(0.0, 0.0);
      if (n_ >= 1) {
        for (long k = 2; k <= n_; k += 2)
          c[k] = c[k - 2] + du_ / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
        for (long k = 1; k <= n_; k += 2) {
          if (k < n_)
            c[k] = c[k - 1] + du_ / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
          else if (k >= 2)
            c[k] = c[k - 1] + du_ / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
          else
            c[k] = 0.5 * du_ * (f[0] + f[1]);
        }
      }
    }
    d_.resize(n_ + 1);
    d_[0] = complexd(0.0, 0.0);
    for (long k = 1; k <= n_; ++k)
      d_[k] = d_[k - 1] + 0.5 * du_ * (c_[1][k - 1] + c_[1][k]);
  }

  double du() const { return du_; }
  double u_max() const { return u_max_; }
  long size() const { return n_; }
  long steps_per_tau_s() const { return steps_per_tau_s_; }
  bool markov() const { return markov_; }
  double markov_rate() const { return gamma0_rate_; }  // Gamma0 / tau_s
  const BathParams& params() const { return params_; }
  double j0() const { return j0_; }

  double gamma_at(long k) const { return markov_ ? 0.0 : gamma_[k]; }
  double delta_at(long k) const { return markov_ ? 0.0 : delta_[k]; }

  complexd kernel_value(long k) const {
    return markov_ ? complexd(0.0, 0.0) : complexd(gamma_[k], delta_[k]);
  }

  /// widx: 0 -> -J0, 1 -> 0, 2 -> +J0.
  static int widx(double omega, double j0) {
    if (omega < -0.5 * j0) return 0;
    if (omega > 0.5 * j0) return 2;
    return 1;
  }

  complexd c(int widx, long k) const {
    if (markov_) return k > 0 ? complexd(gamma0_rate_, 0.0) : complexd(0.0, 0.0);
    return c_[widx][k];
  }

  complexd d(long k) const {
    if (markov_) return complexd(gamma0_rate_ * k * du_, 0.0);
    return d_[k];
  }

  /// Linear interpolation of C_w at arbitrary u in [0, u_max].
  complexd c_interp(int widx, double u) const {
    if (u <= 0.0) return complexd(0.0, 0.0);
    if (markov_) return complexd(gamma0_rate_, 0.0);
    const double x = u / du_;
    long k = static_cast<long>(x);
    if (k >= n_) return c_[widx][n_];
    const double f = x - k;
    return (1.0 - f) * c_[widx][k] + f * c_[widx][k + 1];
  }

 private:
  BathParams params_;
  double j0_;
  double du_ = 0.0;
  double u_max_ = 0.0;
  long n_ = 0;
  long steps_per_tau_s_ = 0;
  bool markov_ = false;
  double gamma0_rate_ = 0.0;
  std::vector<double> gamma_, delta_;
  std::vector<complexd> c_[3];
  std::vector<complexd> d_;
};

inline BathKernelTable tabulate_kernel(const BathParams& params, const EnergySpectrum& spectrum,
                                       double u_max, int du_divisor = 40,
                                       bool drop_delta = false) {
  return BathKernelTable(params, spectrum, u_max, du_divisor, drop_delta);
}

}  // namespace qswap
