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

#include "qvmc/statevector.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qvmc/errors.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {

void check_cap(int n, const char* what) {
  if (n > kDenseQubitCap)
    throw ResourceError(std::string(what) + " on " + std::to_string(n) +
                        " qubits exceeds the dense cap");
}

std::int64_t bit_of(int n, int qubit) { return std::int64_t{1} << (n - 1 - qubit); }

void check_qubit(int n, int qubit) {
  if (qubit < 0 || qubit >= n) throw std::domain_error("qubit index out of range");
}

}  // namespace

void SurrogateIsing::validate() const {
  const int size = n();
  if (couplings.rows() != size || couplings.cols() != size)
    throw DimensionError("coupling matrix shape differs from field length");
  for (int i = 0; i < size; ++i) {
    if (couplings(i, i) != 0.0) throw std::invalid_argument("coupling diagonal must be zero");
    for (int j = i + 1; j < size; ++j)
      if (couplings(i, j) != couplings(j, i))
        throw std::invalid_argument("coupling matrix must be symmetric");
  }
}

double SurrogateIsing::energy(const SpinConfiguration& v) const {
  if (v.size() != n()) throw DimensionError("configuration length differs from surrogate size");
  double e = 0.0;
  for (int i = 0; i < n(); ++i) {
    e += fields(i) * v.spin(i);
    for (int j = i + 1; j < n(); ++j) e += couplings(i, j) * v.spin(i) * v.spin(j);
  }
  return e;
}

Eigen::VectorXd SurrogateIsing::diagonal_energies() const {
  const int size = n();
  const std::int64_t dim = std::int64_t{1} << size;
  Eigen::VectorXd energies(dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    double e = 0.0;
    for (int i = 0; i < size; ++i) {
      const int si = ((idx >> (size - 1 - i)) & 1) ? -1 : 1;
      e += fields(i) * si;
      for (int j = i + 1; j < size; ++j) {
        const int sj = ((idx >> (size - 1 - j)) & 1) ? -1 : 1;
        e += couplings(i, j) * si * sj;
      }
    }
    energies(idx) = e;
  }
  return energies;
}

SurrogateIsing SurrogateIsing::zero(int n) {
  return SurrogateIsing{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
}

Statevector Statevector::basis_state(const SpinConfiguration& v) {
  Statevector s;
  s.n = v.size();
  s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << s.n);
  s.amplitudes(static_cast<std::int64_t>(v.to_index())) = Complex{1.0, 0.0};
  return s;
}

namespace {

void apply_rx(Eigen::VectorXcd& amp, int n, double theta, int qubit) {
  check_qubit(n, qubit);
  const std::int64_t bit = bit_of(n, qubit);
  const double c = std::cos(theta / 2.0);
  const Complex ms{0.0, -std::sin(theta / 2.0)};
  for (std::int64_t i = 0; i < amp.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amp(i);
    const Complex a1 = amp(i | bit);
    amp(i) = c * a0 + ms * a1;
    amp(i | bit) = ms * a0 + c * a1;
  }
}

void apply_rz(Eigen::VectorXcd& amp, int n, double theta, int qubit) {
  check_qubit(n, qubit);
  const std::int64_t bit = bit_of(n, qubit);
  const Complex ph0 = std::polar(1.0, -theta / 2.0);  // |0> = spin +1
  const Complex ph1 = std::polar(1.0, theta / 2.0);
  for (std::int64_t i = 0; i < amp.size(); ++i) amp(i) *= (i & bit) ? ph1 : ph0;
}

void apply_zzphase(Eigen::VectorXcd& amp, int n, double theta, int q1, int q2) {
  check_qubit(n, q1);
  check_qubit(n, q2);
  if (q1 == q2) throw std::domain_error("ZZ phase needs distinct qubits");
  const std::int64_t b1 = bit_of(n, q1);
  const std::int64_t b2 = bit_of(n, q2);
  const Complex ph_eq = std::polar(1.0, -theta / 2.0);  // Z Z eigenvalue +1
  const Complex ph_ne = std::polar(1.0, theta / 2.0);
  for (std::int64_t i = 0; i < amp.size(); ++i)
    amp(i) *= (((i & b1) != 0) == ((i & b2) != 0)) ? ph_eq : ph_ne;
}

void apply_h(Eigen::VectorXcd& amp, int n, int qubit) {
  check_qubit(n, qubit);
  const std::int64_t bit = bit_of(n, qubit);
  const double inv_sqrt2 = 0.70710678118654752440084436210485;
  for (std::int64_t i = 0; i < amp.size(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amp(i);
    const Complex a1 = amp(i | bit);
    amp(i) = inv_sqrt2 * (a0 + a1);
    amp(i | bit) = inv_sqrt2 * (a0 - a1);
  }
}

void apply_x(Eigen::VectorXcd& amp, int n, int qubit) {
  check_qubit(n, qubit);
  const std::int64_t bit = bit_of(n, qubit);
  for (std::int64_t i = 0; i < amp.size(); ++i) {
    if (i & bit) continue;
    std::swap(amp(i), amp(i | bit));
  }
}

}  // namespace

Statevector apply_gate(const Statevector& state, const Gate& gate) {
  Statevector out = state;
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, RxGate>) {
          apply_rx(out.amplitudes, out.n, g.theta, g.qubit);
        } else if constexpr (std::is_same_v<G, RzGate>) {
          apply_rz(out.amplitudes, out.n, g.theta, g.qubit);
        } else if constexpr (std::is_same_v<G, ZZPhaseGate>) {
          apply_zzphase(out.amplitudes, out.n, g.theta, g.qubit1, g.qubit2);
        } else if constexpr (std::is_same_v<G, HGate>) {
          apply_h(out.amplitudes, out.n, g.qubit);
        } else {
          apply_x(out.amplitudes, out.n, g.qubit);
        }
      },
      gate);
  return out;
}

Eigen::MatrixXcd exact_propagator(const SurrogateIsing& h, double tau, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::domain_error("gamma must lie in [0, 1]");
  h.validate();
  const int n = h.n();
  check_cap(n, "propagator");
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim, dim);
  G.diagonal() = gamma * h.diagonal_energies();
  const double mix = 1.0 - gamma;
  if (mix != 0.0) {
    for (std::int64_t i = 0; i < dim; ++i)
      for (int q = 0; q < n; ++q) G(i ^ bit_of(n, q), i) += mix;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G);
  if (solver.info() != Eigen::Success) throw std::runtime_error("propagator eigensolver failed");
  const Eigen::MatrixXd& V = solver.eigenvectors();
  Eigen::VectorXcd phases(dim);
  for (std::int64_t i = 0; i < dim; ++i) phases(i) = std::polar(1.0, -tau * solver.eigenvalues()(i));
  return (V.cast<Complex>() * phases.asDiagonal()) * V.transpose().cast<Complex>();
}

namespace {

// Diagonal of the e^{-i gamma h1 dt} layer, realized as one Rz layer plus one
// ZZ-phase layer acting on the all-ones amplitude vector.
Eigen::VectorXcd h1_layer_diagonal(const SurrogateIsing& h, double gamma, double dt) {
  const int n = h.n();
  Eigen::VectorXcd diag = Eigen::VectorXcd::Ones(std::int64_t{1} << n);
  for (int i = 0; i < n; ++i)
    if (h.fields(i) != 0.0) apply_rz(diag, n, 2.0 * gamma * h.fields(i) * dt, i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (h.couplings(i, j) != 0.0)
        apply_zzphase(diag, n, 2.0 * gamma * h.couplings(i, j) * dt, i, j);
  return diag;
}

// Dense matrix of the e^{-i (1-gamma) h2 dt} mixer layer via Rx gate kernels.
Eigen::MatrixXcd mixer_layer(int n, double gamma, double dt) {
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(dim, dim);
  const double theta = 2.0 * (1.0 - gamma) * dt;
  if (theta == 0.0) return M;
  for (std::int64_t col = 0; col < dim; ++col) {
    Eigen::VectorXcd column = M.col(col);
    for (int q = 0; q < n; ++q) apply_rx(column, n, theta, q);
    M.col(col) = column;
  }
  return M;
}

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, int exponent) {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

}  // namespace

Eigen::MatrixXcd trotter_circuit(const SurrogateIsing& h, double tau, double gamma, int steps,
                                 TrotterScheme scheme) {
  if (steps < 1) throw std::domain_error("Trotter step count must be >= 1");
  if (gamma < 0.0 || gamma > 1.0) throw std::domain_error("gamma must lie in [0, 1]");
  h.validate();
  const int n = h.n();
  check_cap(n, "Trotter circuit");
  const double dt = tau / steps;
  const Eigen::MatrixXcd mixer = mixer_layer(n, gamma, dt);
  if (scheme == TrotterScheme::FirstOrder) {
    const Eigen::VectorXcd diag = h1_layer_diagonal(h, gamma, dt);
    return matrix_power(diag.asDiagonal() * mixer, steps);
  }
  const Eigen::VectorXcd half = h1_layer_diagonal(h, gamma, dt / 2.0);
  return matrix_power(half.asDiagonal() * (mixer * half.asDiagonal()), steps);
}

Eigen::VectorXd proposal_distribution(const Eigen::MatrixXcd& U, const SpinConfiguration& v) {
  const std::int64_t dim = U.rows();
  if (U.cols() != dim || (std::int64_t{1} << v.size()) != dim)
    throw DimensionError("operator and configuration dimensions differ");
  Eigen::VectorXd probs = U.col(static_cast<std::int64_t>(v.to_index())).cwiseAbs2();
  const double total = probs.sum();
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("proposal column is not normalized; operator not unitary");
  return probs;
}

SpinConfiguration sample_proposal(const Eigen::MatrixXcd& U, const SpinConfiguration& v,
                                  RngStream& rng) {
  const Eigen::VectorXd probs = proposal_distribution(U, v);
  const double u = rng.uniform();
  double cdf = 0.0;
  std::int64_t chosen = probs.size() - 1;
  for (std::int64_t i = 0; i < probs.size(); ++i) {
    cdf += probs(i);
    if (u < cdf) {
      chosen = i;
      break;
    }
  }
  return SpinConfiguration::from_index(static_cast<std::uint64_t>(chosen), v.size());
}

bool is_unitary(const Eigen::MatrixXcd& U, double tol) {
  const Eigen::MatrixXcd gram = U.adjoint() * U;
  return (gram - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff() <= tol;
}

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed) {
  check_cap(n, "Haar unitary");
  const std::int64_t dim = std::int64_t{1} << n;
  RngStream rng(seed, "haar-unitary", 0);
  Eigen::MatrixXcd G(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i)
    for (std::int64_t j = 0; j < dim; ++j) G(i, j) = Complex{rng.normal(), rng.normal()};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ();
  const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase ambiguity so the distribution is Haar
  for (std::int64_t j = 0; j < dim; ++j) {
    const Complex r = R(j, j);
    Q.col(j) *= (r == Complex{0.0, 0.0}) ? Complex{1.0, 0.0} : r / std::abs(r);
  }
  return Q;
}

}  // namespace qvmc
