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
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qvmc {

using Complex = std::complex<double>;

/// Largest qubit count for which dense 2^n objects may be materialized.
inline constexpr int kDenseQubitCap = 14;

/// Basis convention used throughout: |0> carries sigma_z eigenvalue +1, and
/// the spin-to-integer map is big-endian (spin 0 is the most significant bit).

enum class Axis : std::uint8_t { X, Y, Z };

char axis_letter(Axis a);

/// Tensor product of single-qubit Pauli operators; identity on unlisted
/// qubits. Factors are kept sorted by qubit index and indices are unique.
class PauliString {
 public:
  PauliString() = default;

  static PauliString single(int qubit, Axis axis);

  /// Adds a factor. Throws on a duplicate qubit index or a negative index.
  PauliString& set(int qubit, Axis axis);

  const std::vector<std::pair<int, Axis>>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }
  int max_qubit() const { return factors_.empty() ? -1 : factors_.back().first; }

  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  std::vector<std::pair<int, Axis>> factors_;
};

/// Weighted sum of Pauli strings on a fixed number of qubits.
class PauliSum {
 public:
  using Term = std::pair<Complex, PauliString>;

  explicit PauliSum(int num_qubits);

  int size() const { return num_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// Appends a term; every factor index must be < size().
  PauliSum& add(Complex coefficient, PauliString string);

  /// Canonical form: terms sorted, equal strings merged, exact zeros dropped.
  PauliSum normalized() const;

  /// A Pauli string is self-adjoint, so the sum is Hermitian iff all merged
  /// coefficients are real (within tol).
  bool is_hermitian(double tol = 1e-12) const;

 private:
  int num_qubits_;
  std::vector<Term> terms_;
};

/// Length-n sequence of +-1 visible spins; the Markov-chain state.
class SpinConfiguration {
 public:
  explicit SpinConfiguration(std::vector<int> spins);

  /// Inverse of to_index() under the big-endian, |0> = +1 convention.
  static SpinConfiguration from_index(std::uint64_t index, int n);
  std::uint64_t to_index() const;

  static SpinConfiguration random(int n, class RngStream& rng);

  int size() const { return static_cast<int>(spins_.size()); }
  int spin(int i) const { return spins_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& spins() const { return spins_; }

  SpinConfiguration flipped(int i) const;
  void flip(int i) { spins_[static_cast<std::size_t>(i)] = -spins_[static_cast<std::size_t>(i)]; }

  friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

 private:
  std::vector<int> spins_;
};

/// Transverse-field Ising chain -B sum_i X_i - J0 sum_<ij> Z_i Z_j over
/// nearest-neighbor bonds, optionally periodic (n >= 3).
PauliSum build_tfim(int n, double B, double J0, bool periodic);

/// Concentric TFIM: -B sum_i X_i - J0 sum_{k<n/2} Z_k Z_{n-1-k}. n even, >= 2.
PauliSum build_ctfim(int n, double B, double J0);

/// Text wire format: first line `qubits <n>`, then `<re> <im> <factor>...`
/// with factors like X0 Z3; `#` starts a comment; empty factor list is the
/// identity term. Parse errors carry the 1-based line number.
PauliSum parse_pauli_sum(std::istream& in);
PauliSum parse_pauli_sum(const std::string& text);

/// Emits the normalized sum; coefficients use 17 significant digits so finite
/// decimal values round-trip bit-exactly.
void serialize_pauli_sum(const PauliSum& sum, std::ostream& out);
std::string serialize_pauli_sum(const PauliSum& sum);

/// All v' with <v'|H|v> != 0 together with those matrix elements, ordered by
/// basis index. Z factors contribute spin eigenvalues, X flips, Y flips with
/// +-i phase.
std::vector<std::pair<SpinConfiguration, Complex>> connected_elements(const PauliSum& H,
                                                                      const SpinConfiguration& v);

/// Dense 2^n x 2^n matrix of the sum. Throws ResourceError above the cap.
Eigen::MatrixXcd dense_matrix(const PauliSum& H);

struct GroundState {
  double energy;
  Eigen::VectorXcd vector;
};

/// Lowest eigenvalue and unit-norm eigenvector by dense diagonalization.
/// Requires a Hermitian sum within the size cap.
GroundState exact_ground_state(const PauliSum& H);

}  // namespace qvmc
