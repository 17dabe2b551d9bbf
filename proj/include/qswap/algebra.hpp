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

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qswap {

using complexd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Raised when an evolved state or channel violates trace/Hermiticity/positivity
/// bounds beyond the documented tolerances.
class NumericalIntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 4x4x4x4 complex tensor, the storage behind coupling tensors and
/// evolution superoperators.
class Tensor4 {
 public:
  complexd& operator()(int a, int b, int c, int d) { return v_[idx(a, b, c, d)]; }
  const complexd& operator()(int a, int b, int c, int d) const { return v_[idx(a, b, c, d)]; }

  static constexpr int idx(int a, int b, int c, int d) {
    return ((a * 4 + b) * 4 + c) * 4 + d;
  }

 private:
  std::array<complexd, 256> v_{};
};

// Multiplet states over the product basis {uu, ud, du, dd}:
// |1> = uu, |2> = (ud+du)/sqrt2, |3> = dd, |4> = (ud-du)/sqrt2.
// Rows of the returned matrix are the multiplet amplitude vectors.
inline const Matrix4c& multiplet_basis() {
  static const Matrix4c b = [] {
    const double r = 1.0 / std::numbers::sqrt2;
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = r;
    m(1, 2) = r;
    m(2, 3) = 1.0;
    m(3, 1) = r;
    m(3, 2) = -r;
    return m;
  }();
  return b;
}

/// Basis change of an operator from the product basis {uu,ud,du,dd}
/// to the multiplet basis.
inline Matrix4c product_to_multiplet(const Matrix4c& a) {
  const Matrix4c& b = multiplet_basis();
  return b.conjugate() * a * b.transpose();
}

/// Inverse of product_to_multiplet.
inline Matrix4c multiplet_to_product(const Matrix4c& a) {
  const Matrix4c& b = multiplet_basis();
  return b.transpose() * a * b.conjugate();
}

/// Spin-1/2 operator S^axis of the given dot (1 or 2), expressed in the
/// multiplet basis. axis: 0 = x, 1 = y, 2 = z.
inline Matrix4c build_spin_operator(int dot, int axis) {
  using Eigen::Matrix2cd;
  const complexd i(0.0, 1.0);
  Matrix2cd s;
  switch (axis) {
    case 0: s << 0.0, 0.5, 0.5, 0.0; break;
    case 1: s << 0.0, -0.5 * i, 0.5 * i, 0.0; break;
    case 2: s << 0.5, 0.0, 0.0, -0.5; break;
    default: throw std::invalid_argument("axis must be 0, 1 or 2");
  }
  if (dot != 1 && dot != 2) throw std::invalid_argument("dot must be 1 or 2");
  const Matrix2cd id = Matrix2cd::Identity();
  Matrix4c prod = Matrix4c::Zero();
  // Product basis is ordered with the first dot as the slow index.
  const Matrix2cd& left = (dot == 1) ? s : id;
  const Matrix2cd& right = (dot == 1) ? id : s;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int c1 = 0; c1 < 2; ++c1)
      for (int r2 = 0; r2 < 2; ++r2)
        for (int c2 = 0; c2 < 2; ++c2)
          prod(2 * r1 + r2, 2 * c1 + c2) = left(r1, c1) * right(r2, c2);
  return product_to_multiplet(prod);
}

/// The six spin operators S^j_i in the multiplet basis.
struct SpinOperatorSet {
  std::array<Matrix4c, 6> ops;

  const Matrix4c& at(int dot, int axis) const { return ops[(dot - 1) * 3 + axis]; }

  static SpinOperatorSet build() {
    SpinOperatorSet s;
    for (int dot = 1; dot <= 2; ++dot)
      for (int axis = 0; axis < 3; ++axis)
        s.ops[(dot - 1) * 3 + axis] = build_spin_operator(dot, axis);
    return s;
  }
};

inline const SpinOperatorSet& default_spin_operators() {
  static const SpinOperatorSet s = SpinOperatorSet::build();
  return s;
}

/// Eigenenergies of the exchange Hamiltonian J0 * S1.S2 in the multiplet
/// basis and the transition frequencies omega_ab = E_a - E_b.
/// Units: hbar = k_B = 1, energies in Kelvin, time in 1/Kelvin.
struct EnergySpectrum {
  double j0 = 0.0;
  std::array<double, 4> e{};

  double omega(int a, int b) const { return e[a] - e[b]; }
  double tau_s() const { return std::numbers::pi / j0; }
};

inline EnergySpectrum energies(double j0) {
  if (!(j0 > 0.0)) throw std::invalid_argument("exchange energy j0 must be positive");
  EnergySpectrum s;
  s.j0 = j0;
  s.e = {j0 / 4.0, j0 / 4.0, j0 / 4.0, -3.0 * j0 / 4.0};
  return s;
}

using CouplingTensor = Tensor4;

/// M_{abcd} = sum_{ij} <a|S^j_i|b><c|S^j_i|d>.
inline CouplingTensor build_m_tensor(const SpinOperatorSet& ops) {
  CouplingTensor m;
  for (const auto& s : ops.ops)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) m(a, b, c, d) += s(a, b) * s(c, d);
  return m;
}

inline const CouplingTensor& default_m_tensor() {
  static const CouplingTensor m = build_m_tensor(default_spin_operators());
  return m;
}

enum class InitialStateKind { mixed_up, singlet };

/// Canonical initial states in the multiplet basis.
/// mixed_up: second spin up, first unpolarized.
inline Matrix4c initial_state(InitialStateKind kind) {
  Matrix4c r = Matrix4c::Zero();
  switch (kind) {
    case InitialStateKind::mixed_up:
      r(0, 0) = 0.5;
      r(1, 1) = 0.25;
      r(1, 3) = -0.25;
      r(3, 1) = -0.25;
      r(3, 3) = 0.25;
      break;
    case InitialStateKind::singlet:
      r(3, 3) = 1.0;
      break;
  }
  return r;
}

/// Validates a user-supplied density matrix. Throws std::invalid_argument
/// naming the failed check.
inline Matrix4c custom_initial_state(const Matrix4c& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-9)
    throw std::invalid_argument("custom initial state is not Hermitian (max deviation " +
                                std::to_string(herm) + ")");
  const double tr_err = std::abs(rho.trace() - complexd(1.0, 0.0));
  if (tr_err > 1e-9)
    throw std::invalid_argument("custom initial state does not have unit trace (deviation " +
                                std::to_string(tr_err) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (rho + rho.adjoint()));
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw std::invalid_argument("custom initial state is not positive semidefinite (min eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()) + ")");
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace qswap
