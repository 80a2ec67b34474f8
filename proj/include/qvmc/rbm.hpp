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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qvmc/pauli.hpp"

namespace qvmc {

class RngStream;

/// The learner: X = (a, b, W). Visible biases a (length n), hidden biases b
/// (length p), weights W (n x p). The canonical flattening used by gradients
/// and SR is (a, b, W row-major).
struct RbmParameters {
  Eigen::VectorXcd a;
  Eigen::VectorXcd b;
  Eigen::MatrixXcd W;

  int n() const { return static_cast<int>(a.size()); }
  int p() const { return static_cast<int>(b.size()); }
  int parameter_count() const { return n() + p() + n() * p(); }

  /// True iff every imaginary part is exactly zero.
  bool real_valued() const;

  Eigen::VectorXcd flatten() const;
  static RbmParameters unflatten(const Eigen::VectorXcd& flat, int n, int p);

  static RbmParameters zeros(int n, int p);

  /// a, b iid uniform(-a_range, a_range) / (-b_range, b_range); W iid
  /// uniform(-w_scale/sqrt(np), w_scale/sqrt(np)). The sweep instance ensemble.
  static RbmParameters random(int n, int p, double a_range, double b_range, double w_scale,
                              RngStream& rng);

  /// Training start: a = b = 0, W iid normal with the given deviation.
  static RbmParameters near_zero_init(int n, int p, double w_sigma, RngStream& rng);

  friend bool operator==(const RbmParameters&, const RbmParameters&);
};

/// log psi(v; X) = sum_i a_i v_i + sum_j log(2 cosh(theta_j)),
/// theta_j = b_j + sum_i W_ij v_i. Overflow-safe for |theta| >> 1.
Complex log_psi(const RbmParameters& X, const SpinConfiguration& v);

/// d log psi / d a_i = v_i; / d b_j = tanh(theta_j); / d W_ij = v_i tanh(theta_j),
/// in the canonical flattening order.
Eigen::VectorXcd log_derivatives(const RbmParameters& X, const SpinConfiguration& v);

/// Ising-type learner Hamiltonian on n+p qubits:
/// sum_i a_i Z(v_i) + sum_j b_j Z(h_j) + sum_ij W_ij Z(v_i) Z(h_j),
/// visible qubits at 0..n-1, hidden at n..n+p-1. Requires real X.
PauliSum learner_hamiltonian(const RbmParameters& X);

/// Classical energy of the learner at a joint configuration (real X).
double classical_energy(const RbmParameters& X, const SpinConfiguration& v,
                        const SpinConfiguration& h);

/// Diagonal of the learner Hamiltonian over all 2^{n+p} joint configurations,
/// in basis order (visible qubits most significant). Requires real X.
Eigen::VectorXd learner_diagonal_energies(const RbmParameters& X);

/// rho = e^{-H}/Tr e^{-H} for the diagonal learner Hamiltonian. The diagonal
/// is stored explicitly; dense() materializes the full operator on demand.
struct ThermalState {
  int n = 0;
  int p = 0;
  Eigen::VectorXd diagonal;  // probabilities over 2^{n+p}, basis order (v, h)
  double partition_log = 0.0;

  Eigen::MatrixXcd dense() const;
  /// Hidden-marginal p(v) = sum_h diag, length 2^n.
  Eigen::VectorXd visible_marginal() const;
};

ThermalState thermal_state(const RbmParameters& X);

struct JointSample {
  SpinConfiguration v;
  SpinConfiguration h;
};

/// Block Gibbs over e^{-H}: h | v from per-spin conditionals, then v | h.
/// Defaults: burn-in 10(n+p) sweeps, thinning 1 sweep.
std::vector<JointSample> gibbs_sample_joint(const RbmParameters& X, int count, RngStream& rng,
                                            int burn_in_sweeps = -1, int thin_sweeps = 1);

/// Flat text serialization: header `rbm <n> <p>`, then a-block, b-block and
/// W-block rows with `re,im` entries in canonical order.
void serialize_rbm(const RbmParameters& X, std::ostream& out);
std::string serialize_rbm(const RbmParameters& X);
RbmParameters parse_rbm(std::istream& in);
RbmParameters parse_rbm(const std::string& text);

}  // namespace qvmc
