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

#include <utility>
#include <vector>

#include "qvmc/sampler.hpp"

namespace qvmc {

struct VmcConfig {
  ProposalKind kind = TimeHomogeneous{2.0, 0.4};
  int samples_per_iteration = 1024;
  int iterations = 200;
  double learning_rate = 0.02;
  double sr_reg = 1e-2;        // regularizer, decays by sr_reg_decay every
  double sr_reg_decay = 0.9;   // sr_reg_decay_period iterations, floored
  int sr_reg_decay_period = 50;
  double sr_reg_floor = 1e-4;
  std::uint64_t seed = 1;
  int surrogate_refresh_period = 10;  // iterations between proposal rebuilds
  int chains = 2;
  int burn_in = -1;  // -1: 10n steps (local flip: 10n^2)
  int thin = -1;     // -1: 1 step (local flip: n)
  bool enforce_real = true;
  int workers = 0;
  double zve_tail_fraction = 0.2;

  void validate() const;
};

struct TrainingTrace {
  std::vector<double> energy_mean;
  std::vector<double> energy_variance;
  std::vector<double> acceptance_rate;
  std::vector<double> parameter_norm;

  int iterations() const { return static_cast<int>(energy_mean.size()); }
};

/// Energy estimate diverged; carries the trace accumulated so far.
class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(const std::string& what, TrainingTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const TrainingTrace& trace() const { return trace_; }

 private:
  TrainingTrace trace_;
};

/// E_loc(v) = sum_{v'} <v|H|v'> psi(v')/psi(v), via connected elements and
/// log-psi differences.
Complex local_energy(const PauliSum& H, const RbmParameters& X, const SpinConfiguration& v);

/// Stochastic reconfiguration: F_ij = <D_i* D_j> - <D_i*><D_j>,
/// S_i = <E_loc D_i*> - <E_loc><D_i*>, X <- X - lr (F + reg I)^{-1} S.
RbmParameters sr_update(const RbmParameters& X, const std::vector<SpinConfiguration>& samples,
                        const PauliSum& H, double learning_rate, double reg);

struct TrainResult {
  RbmParameters X;
  TrainingTrace trace;
};

/// SR training loop with pluggable sampler kind; the quantum proposal operator
/// is rebuilt from the current parameters every surrogate_refresh_period
/// iterations. Deterministic for a fixed seed and worker count.
TrainResult train(const PauliSum& H, RbmParameters X0, const VmcConfig& cfg);

struct ZveFit {
  double intercept;
  double slope;
};

/// Ordinary least squares of energy mean against energy variance over the
/// last `tail` iterations; the intercept is the zero-variance estimate.
/// Throws std::domain_error when all tail variances coincide.
ZveFit zero_variance_extrapolate(const TrainingTrace& trace, int tail);

/// Fallback estimator: minimum energy over the last `tail` iterations.
double min_of_tail(const TrainingTrace& trace, int tail);

}  // namespace qvmc
