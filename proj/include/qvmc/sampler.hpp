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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qvmc/rbm.hpp"
#include "qvmc/statevector.hpp"

namespace qvmc {

// Proposal family of the gap study. Classical kinds: local single-spin flip,
// uniform random, Haar-random (one unitary fixed per experiment seed).
// Quantum kinds: mixture of time-homogeneous proposals over a tau grid,
// a single time-homogeneous propagator, and its Trotterized circuit.
struct LocalFlip {};
struct UniformRandom {};
struct HaarRandom {};
struct QuantumAveraged {
  std::vector<double> tau_grid;
  double gamma;
};
struct TimeHomogeneous {
  double tau;
  double gamma;
};
struct Trotterized {
  double tau;
  double gamma;
  int steps;
  TrotterScheme scheme;
};
using ProposalKind = std::variant<LocalFlip, UniformRandom, HaarRandom, QuantumAveraged,
                                  TimeHomogeneous, Trotterized>;

std::string kind_name(const ProposalKind& kind);

/// log pi(v) up to a constant: 2 Re log psi for the Born weight of an RBM, or
/// -beta E_h(v) for the Gibbs weight of a surrogate.
struct BornWeight {
  RbmParameters X;
};
struct SurrogateGibbs {
  SurrogateIsing h;
  double beta;
};
using TargetDistribution = std::variant<BornWeight, SurrogateGibbs>;

double target_log_weight(const TargetDistribution& target, const SpinConfiguration& v);
int target_size(const TargetDistribution& target);

/// Exact normalized pi over all 2^n states, by enumeration.
Eigen::VectorXd target_distribution_vector(const TargetDistribution& target);

/// Second-order expansion of -log|psi|^2 around W = 0:
/// l_i = -2 a_i - 2 sum_j W_ij tanh(b_j),
/// J_ii' = -2 sum_j sech^2(b_j) W_ij W_i'j  (i != i'),
/// so that e^{-h1(v)} tracks |psi(v)|^2 up to a constant for small ||W||.
SurrogateIsing surrogate_from_rbm(const RbmParameters& X);

/// Prepared proposal operator for quantum kinds: the 2^n x 2^n probability
/// matrix P(v'|v) with per-column CDFs. Classical kinds carry no state beyond
/// n. Shared read-only across chains.
class ProposalContext {
 public:
  /// `surrogate` is required for quantum kinds; `experiment_seed` fixes the
  /// Haar draw.
  static ProposalContext prepare(const ProposalKind& kind, int n, const SurrogateIsing* surrogate,
                                 std::uint64_t experiment_seed);

  int n() const { return n_; }
  bool has_matrix() const { return prob_.size() > 0; }
  /// P(row = v', col = v); quantum kinds only.
  const Eigen::MatrixXd& prob_matrix() const { return prob_; }

  SpinConfiguration draw(const SpinConfiguration& v, RngStream& rng) const;
  double log_prob(const SpinConfiguration& to, const SpinConfiguration& from) const;

 private:
  int n_ = 0;
  Eigen::MatrixXd prob_;
  Eigen::MatrixXd cdf_;
};

struct ProposalResult {
  SpinConfiguration next;
  double log_q_forward;
  double log_q_reverse;
};

/// Draws v' ~ q(.|v) and reports exact forward/reverse log-probabilities.
ProposalResult propose(const ProposalKind& kind, const SpinConfiguration& v,
                       const ProposalContext& context, RngStream& rng);

struct ChainState {
  SpinConfiguration current;
  double log_weight;
  long step_count = 0;
  long accept_count = 0;

  double acceptance_rate() const {
    return step_count == 0 ? 0.0 : static_cast<double>(accept_count) / step_count;
  }
};

ChainState make_chain_state(SpinConfiguration v, const TargetDistribution& target);

/// One Metropolis-Hastings step: accept v' with probability
/// min(1, exp(log pi(v') - log pi(v) + log q_rev - log q_fwd)).
ChainState metropolis_step(ChainState state, const ProposalKind& kind,
                           const TargetDistribution& target, const ProposalContext& context,
                           RngStream& rng);

/// Thinned post-burn-in states; each sample is recorded after `thin` steps.
/// Initial state is uniform random from the stream. Deterministic per seed.
std::vector<SpinConfiguration> run_chain(const ProposalKind& kind,
                                         const TargetDistribution& target,
                                         const ProposalContext& context, int length, int burn_in,
                                         int thin, RngStream& rng,
                                         ChainState* final_state = nullptr);

/// tau_int = 1/2 + sum_k rho(k), with Sokal's automatic windowing
/// (window at the smallest W with W >= 6 tau_int(W)). Requires length >= 10
/// and nonzero variance.
double integrated_autocorrelation(const std::vector<double>& series);

}  // namespace qvmc
