// Copyright 2026 The qvmc Authors
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
#include <variant>

#include "qvmc/pauli.hpp"

namespace qvmc {

class RngStream;

/// Diagonal Ising generator of the proposal dynamics:
/// h1 = sum_i l_i Z_i + sum_{i<j} J_ij Z_i Z_j, with symmetric zero-diagonal J.
struct SurrogateIsing {
  Eigen::VectorXd fields;     // l, length n
  Eigen::MatrixXd couplings;  // n x n, symmetric, zero diagonal

  int n() const { return static_cast<int>(fields.size()); }

  /// Validates symmetry and zero diagonal (exact).
  void validate() const;

  /// h1(v) = l.v + sum_{i<j} J_ij v_i v_j.
  double energy(const SpinConfiguration& v) const;

  /// h1 over all 2^n basis states, in basis order.
  Eigen::VectorXd diagonal_energies() const;

  static SurrogateIsing zero(int n);
};

struct Statevector {
  Eigen::VectorXcd amplitudes;
  int n = 0;

  static Statevector basis_state(const SpinConfiguration& v);
  double norm() const { return amplitudes.norm(); }
};

// Gate set realizing the Trotterized proposal circuit.
struct RxGate {
  double theta;
  int qubit;
};
struct RzGate {
  double theta;
  int qubit;
};
struct ZZPhaseGate {
  double theta;
  int qubit1, qubit2;
};
struct HGate {
  int qubit;
};
struct XGate {
  int qubit;
};
using Gate = std::variant<RxGate, RzGate, ZZPhaseGate, HGate, XGate>;

/// Standard action; rotation angles follow exp(-i theta P / 2). Norm preserved.
Statevector apply_gate(const Statevector& state, const Gate& gate);

/// exp(-i tau [gamma h1 + (1-gamma) h2]) with h2 = sum_i X_i, via dense
/// eigendecomposition. Unitary and complex-symmetric. gamma in [0, 1].
Eigen::MatrixXcd exact_propagator(const SurrogateIsing& h, double tau, double gamma);

enum class TrotterScheme { FirstOrder, Strang };

/// FirstOrder: [e^{-i gamma h1 dt} e^{-i (1-gamma) h2 dt}]^steps, dt = tau/steps,
/// assembled from Rz, ZZ-phase and Rx gate layers. Strang: the symmetric
/// splitting with half-angle h1 layers, which yields a symmetric matrix.
Eigen::MatrixXcd trotter_circuit(const SurrogateIsing& h, double tau, double gamma, int steps,
                                 TrotterScheme scheme);

/// Entry v' of the result is |<v'|U|v>|^2; sums to 1 within 1e-10.
Eigen::VectorXd proposal_distribution(const Eigen::MatrixXcd& U, const SpinConfiguration& v);

/// One inverse-CDF draw from proposal_distribution(U, v).
SpinConfiguration sample_proposal(const Eigen::MatrixXcd& U, const SpinConfiguration& v,
                                  RngStream& rng);

/// max |U^dag U - I| <= tol.
bool is_unitary(const Eigen::MatrixXcd& U, double tol = 1e-10);

/// Haar-random unitary on n qubits, deterministic in the seed.
Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed);

}  // namespace qvmc
