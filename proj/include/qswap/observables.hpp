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
#include <optional>

#include "qswap/algebra.hpp"
#include "qswap/propagator.hpp"

namespace qswap {

/// One CSV row of the `run` output.
struct ObservableRecord {
  double t = 0.0;
  double tbar = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double gate_fidelity = 0.0;
  double gate_purity = 0.0;
  std::optional<double> state_fidelity;
  double state_purity = 0.0;
  double entropy_bits = 0.0;
  double trace_error = 0.0;
  double herm_error = 0.0;
};

/// s = 2 <S_z^dot> = 2 Re tr[rho S_z^dot].
inline double polarization(const Matrix4c& rho, int dot) {
  const Matrix4c& sz = default_spin_operators().at(dot, 2);
  const complexd tr = (rho * sz).trace();
  if (std::abs(tr.imag()) > 1e-10)
    throw NumericalIntegrityError("polarization trace has a non-real part of magnitude " +
                                  std::to_string(std::abs(tr.imag())));
  return 2.0 * tr.real();
}

/// F = 1/6 + (1/24) [ sum_a E_{aa|aa} + sum_{ab} E_{ab|ab} e^{i tbar w_ab} ].
inline double gate_fidelity(const EvolutionSuperOp& e, const EnergySpectrum& spectrum) {
  complexd sum(0.0, 0.0);
  for (int a = 0; a < 4; ++a) sum += e.e(a, a, a, a);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      sum += e.e(a, b, a, b) * detail::cis(e.tbar * spectrum.omega(a, b));
  const complexd f = 1.0 / 6.0 + sum / 24.0;
  if (std::abs(f.imag()) > 1e-10)
    throw NumericalIntegrityError("gate fidelity has a non-real part of magnitude " +
                                  std::to_string(std::abs(f.imag())));
  return f.real();
}

/// P = (1/24) sum_{abg} [ |E_{ab|gg}|^2
///       + sum_d (E_{ab|gg} E*_{ab|dd} + |E_{ab|gd}|^2) ].
inline double gate_purity(const EvolutionSuperOp& e) {
  double sum = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int g = 0; g < 4; ++g) {
        sum += std::norm(e.e(a, b, g, g));
        for (int d = 0; d < 4; ++d) {
          sum += (e.e(a, b, g, g) * std::conj(e.e(a, b, d, d))).real();
          sum += std::norm(e.e(a, b, g, d));
        }
      }
  return sum / 24.0;
}

/// The ideal clamped gate U_S(tbar) applied to a multiplet-basis vector.
inline Vector4c ideal_gate(const Vector4c& psi, const EnergySpectrum& spectrum, double tbar) {
  Vector4c out;
  for (int a = 0; a < 4; ++a) out(a) = detail::cis(-tbar * spectrum.e[a]) * psi(a);
  return out;
}

/// Re <psi0| U_S^dag(tbar) rho(t) U_S(tbar) |psi0>.
inline double state_fidelity(const Matrix4c& rho_t, const Vector4c& psi0,
                             const EnergySpectrum& spectrum, const GateSchedule& schedule,
                             double t) {
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("state_fidelity requires a normalized pure state");
  const Vector4c phi = ideal_gate(psi0, spectrum, clamp(t, schedule));
  return (phi.adjoint() * rho_t * phi)(0, 0).real();
}

/// tr[rho^2].
inline double state_purity(const Matrix4c& rho) { return (rho * rho).trace().real(); }

/// Von Neumann entropy -tr[rho log2 rho] in bits. Eigenvalues below 1e-12
/// are treated as exact zeros; an eigenvalue below -1e-6 is a positivity
/// violation beyond what second-order evolution is allowed to produce.
inline double von_neumann_entropy(const Matrix4c& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (rho + rho.adjoint()));
  double entropy = 0.0;
  for (int i = 0; i < 4; ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < -1e-6)
      throw NumericalIntegrityError("density matrix eigenvalue " + std::to_string(lam) +
                                    " below the positivity tolerance");
    if (lam < 1e-12) continue;
    lam = std::min(lam, 1.0);
    entropy -= lam * std::log2(lam);
  }
  return entropy;
}

/// All observables of one evolved point.
inline ObservableRecord make_record(const EvolutionPoint& pt, const EnergySpectrum& spectrum,
                                    const GateSchedule& schedule,
                                    const std::optional<Vector4c>& psi0) {
  ObservableRecord r;
  r.t = pt.t;
  r.tbar = pt.superop.tbar;
  r.s1 = polarization(pt.rho, 1);
  r.s2 = polarization(pt.rho, 2);
  r.gate_fidelity = gate_fidelity(pt.superop, spectrum);
  r.gate_purity = gate_purity(pt.superop);
  if (psi0) r.state_fidelity = state_fidelity(pt.rho, *psi0, spectrum, schedule, pt.t);
  r.state_purity = state_purity(pt.rho);
  r.entropy_bits = von_neumann_entropy(pt.rho);
  r.trace_error = std::abs(pt.rho.trace() - complexd(1.0, 0.0));
  r.herm_error = (pt.rho - pt.rho.adjoint()).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace qswap
