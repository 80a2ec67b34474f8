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

#include <map>
#include <optional>
#include <vector>

#include "qvmc/sampler.hpp"

namespace qvmc {

/// Largest qubit count for exact transition-matrix assembly (2^n x 2^n).
inline constexpr int kTransitionQubitCap = 10;

/// Row-stochastic Metropolis-Hastings transition matrix: row v holds T(v'|v),
/// rejection mass on the diagonal.
struct TransitionMatrix {
  Eigen::MatrixXd entries;

  int dimension() const { return static_cast<int>(entries.rows()); }
};

struct GapRecord {
  int n = 0;
  std::string kind;
  std::optional<double> beta;
  int instance = 0;
  double delta = 0.0;                  // lambda0 - lambda1 in modulus
  std::vector<double> lambda_moduli;   // top eigenvalue magnitudes
  double delta_stderr = 0.0;           // filled by sweeps (per kind, n group)
};

/// T(v'|v) = q(v'|v) min(1, pi(v') q(v|v') / (pi(v) q(v'|v))) off the
/// diagonal; diagonal absorbs the rejected mass.
TransitionMatrix build_transition_matrix(const ProposalKind& kind,
                                         const TargetDistribution& target,
                                         const ProposalContext& context);

/// Eigenvalues by dense solve; lambda0 = largest modulus (1 for stochastic T),
/// lambda1 = second largest modulus, delta = lambda0 - lambda1.
GapRecord spectral_gap(const TransitionMatrix& T);

/// l1 distance ||pi T - pi||_1 for an exactly enumerated pi.
double stationarity_residual(const TransitionMatrix& T, const Eigen::VectorXd& pi);

/// max_{v,v'} |pi(v) T(v,v') - pi(v') T(v',v)|.
double reversibility_residual(const TransitionMatrix& T, const Eigen::VectorXd& pi);

/// Parameters of the random-instance ensemble and of the quantum proposals
/// used by the sweeps. p = round(p_ratio * n) hidden units per instance.
struct SweepSettings {
  double a_range = 0.5;
  double b_range = 0.5;
  double w_scale = 1.0;
  double p_ratio = 1.0;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = hardware default
};

struct GapSweepResult {
  std::vector<GapRecord> records;                 // ordered by (kind, n, instance)
  std::map<std::string, double> slope_per_kind;   // least-squares slope of log mean-delta vs n
};

/// For each n and kind, averages delta over `instances` random RBM instances
/// with Born targets; quantum proposals use each instance's surrogate.
GapSweepResult gap_scaling_sweep(const std::vector<ProposalKind>& kinds,
                                 const std::vector<int>& n_range, int instances,
                                 const SweepSettings& settings);

/// Gap versus inverse temperature on a fixed surrogate: target is
/// SurrogateGibbs(h, beta) for each beta >= 0 in the grid.
std::vector<GapRecord> gap_beta_sweep(const std::vector<ProposalKind>& kinds,
                                      const SurrogateIsing& h, const std::vector<double>& betas,
                                      const SweepSettings& settings);

}  // namespace qvmc
