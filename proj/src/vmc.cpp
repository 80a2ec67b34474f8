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

#include "qvmc/vmc.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "qvmc/errors.hpp"
#include "qvmc/parallel.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

void VmcConfig::validate() const {
  if (samples_per_iteration < 1) throw std::domain_error("samples_per_iteration must be >= 1");
  if (iterations < 1) throw std::domain_error("iterations must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw std::domain_error("learning rate must be finite and > 0");
  if (sr_reg < 0.0) throw std::domain_error("SR regularizer must be >= 0");
  if (surrogate_refresh_period < 1) throw std::domain_error("refresh period must be >= 1");
  if (chains < 1) throw std::domain_error("chain count must be >= 1");
  if (zve_tail_fraction <= 0.0 || zve_tail_fraction > 1.0)
    throw std::domain_error("ZVE tail fraction must lie in (0, 1]");
}

Complex local_energy(const PauliSum& H, const RbmParameters& X, const SpinConfiguration& v) {
  if (H.size() != X.n() || v.size() != X.n())
    throw DimensionError("operator, parameters and configuration sizes differ");
  const Complex log_ref = log_psi(X, v);
  Complex e{0.0, 0.0};
  for (const auto& [coeff, string] : H.terms()) {
    // <v'|P|v> for the single connected v'; <v|c P|v'> = c * conj(phase)
    Complex amp{1.0, 0.0};
    SpinConfiguration target = v;
    for (const auto& [q, axis] : string.factors()) {
      const int s = target.spin(q);
      switch (axis) {
        case Axis::Z:
          amp *= static_cast<double>(s);
          break;
        case Axis::X:
          target.flip(q);
          break;
        case Axis::Y:
          amp *= (s == 1) ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
          target.flip(q);
          break;
      }
    }
    const Complex ratio =
        (target == v) ? Complex{1.0, 0.0} : std::exp(log_psi(X, target) - log_ref);
    e += coeff * std::conj(amp) * ratio;
  }
  return e;
}

RbmParameters sr_update(const RbmParameters& X, const std::vector<SpinConfiguration>& samples,
                        const PauliSum& H, double learning_rate, double reg) {
  if (samples.empty()) throw std::invalid_argument("SR update needs samples");
  const int dim = X.parameter_count();
  const double m = static_cast<double>(samples.size());

  Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXcd d_mean = Eigen::VectorXcd::Zero(dim);
  Eigen::VectorXcd ed_mean = Eigen::VectorXcd::Zero(dim);
  Complex e_mean{0.0, 0.0};
  for (const auto& v : samples) {
    const Eigen::VectorXcd d = log_derivatives(X, v);
    const Complex e = local_energy(H, X, v);
    F.noalias() += d.conjugate() * d.transpose();
    d_mean += d;
    ed_mean += e * d.conjugate();
    e_mean += e;
  }
  F /= m;
  d_mean /= m;
  ed_mean /= m;
  e_mean /= m;
  F.noalias() -= d_mean.conjugate() * d_mean.transpose();
  const Eigen::VectorXcd force = ed_mean - e_mean * d_mean.conjugate();

  Eigen::MatrixXcd reg_F = F;
  reg_F.diagonal().array() += reg;
  const Eigen::VectorXcd step = reg_F.ldlt().solve(force);
  const double residual = (reg_F * step - force).norm();
  if (!step.allFinite() || residual > 1e-8 * (force.norm() + 1.0))
    throw std::runtime_error("SR linear solve failed (singular covariance matrix)");
  return RbmParameters::unflatten(X.flatten() - learning_rate * step, X.n(), X.p());
}

namespace {

bool is_local_flip(const ProposalKind& kind) {
  return std::holds_alternative<LocalFlip>(kind);
}

bool needs_surrogate(const ProposalKind& kind) {
  return std::holds_alternative<QuantumAveraged>(kind) ||
         std::holds_alternative<TimeHomogeneous>(kind) ||
         std::holds_alternative<Trotterized>(kind);
}

RbmParameters real_part(const RbmParameters& X) {
  RbmParameters R = X;
  R.a = X.a.real().cast<Complex>();
  R.b = X.b.real().cast<Complex>();
  R.W = X.W.real().cast<Complex>();
  return R;
}

}  // namespace

TrainResult train(const PauliSum& H, RbmParameters X0, const VmcConfig& cfg) {
  cfg.validate();
  if (!H.is_hermitian()) throw std::invalid_argument("training needs a Hermitian Hamiltonian");
  if (H.size() != X0.n()) throw DimensionError("Hamiltonian size differs from visible layer");
  const int n = X0.n();
  RbmParameters X = cfg.enforce_real ? real_part(X0) : std::move(X0);

  const int burn_in = cfg.burn_in >= 0 ? cfg.burn_in : (is_local_flip(cfg.kind) ? 10 * n * n : 10 * n);
  const int thin = cfg.thin >= 0 ? cfg.thin : (is_local_flip(cfg.kind) ? n : 1);
  const int per_chain = (cfg.samples_per_iteration + cfg.chains - 1) / cfg.chains;

  TrainingTrace trace;
  double reg = cfg.sr_reg;
  ProposalContext context;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    if (iter % cfg.surrogate_refresh_period == 0) {
      if (needs_surrogate(cfg.kind)) {
        const SurrogateIsing surrogate = surrogate_from_rbm(real_part(X));
        context = ProposalContext::prepare(cfg.kind, n, &surrogate, cfg.seed);
      } else if (iter == 0) {
        context = ProposalContext::prepare(cfg.kind, n, nullptr, cfg.seed);
      }
    }

    const TargetDistribution target = BornWeight{X};
    std::vector<std::vector<SpinConfiguration>> chain_samples(
        static_cast<std::size_t>(cfg.chains));
    std::vector<double> chain_accept(static_cast<std::size_t>(cfg.chains));
    parallel_for(cfg.chains, cfg.workers, [&](int c) {
      RngStream stream(cfg.seed, "vmc-chain",
                       static_cast<std::uint64_t>(iter) * static_cast<std::uint64_t>(cfg.chains) +
                           static_cast<std::uint64_t>(c));
      ChainState final_state = make_chain_state(SpinConfiguration::random(n, stream), target);
      chain_samples[static_cast<std::size_t>(c)] =
          run_chain(cfg.kind, target, context, per_chain, burn_in, thin, stream, &final_state);
      chain_accept[static_cast<std::size_t>(c)] = final_state.acceptance_rate();
    });

    std::vector<SpinConfiguration> samples;
    samples.reserve(static_cast<std::size_t>(cfg.chains) * static_cast<std::size_t>(per_chain));
    for (auto& chain : chain_samples)
      samples.insert(samples.end(), chain.begin(), chain.end());

    double e_sum = 0.0, e_sq = 0.0;
    for (const auto& v : samples) {
      const double e = local_energy(H, X, v).real();
      e_sum += e;
      e_sq += e * e;
    }
    const double count = static_cast<double>(samples.size());
    const double mean = e_sum / count;
    const double variance = std::max(e_sq / count - mean * mean, 0.0);
    double accept = 0.0;
    for (double a : chain_accept) accept += a;
    accept /= cfg.chains;

    trace.energy_mean.push_back(mean);
    trace.energy_variance.push_back(variance);
    trace.acceptance_rate.push_back(accept);
    trace.parameter_norm.push_back(X.flatten().norm());
    if (!std::isfinite(mean) || !std::isfinite(variance))
      throw TrainingDiverged("energy estimate diverged at iteration " + std::to_string(iter),
                             trace);

    X = sr_update(X, samples, H, cfg.learning_rate, reg);
    if (cfg.enforce_real) X = real_part(X);
    if ((iter + 1) % cfg.sr_reg_decay_period == 0)
      reg = std::max(reg * cfg.sr_reg_decay, cfg.sr_reg_floor);
  }
  return TrainResult{std::move(X), std::move(trace)};
}

ZveFit zero_variance_extrapolate(const TrainingTrace& trace, int tail) {
  const int len = trace.iterations();
  if (tail < 2 || tail > len) throw std::domain_error("ZVE tail must satisfy 2 <= tail <= length");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = len - tail; i < len; ++i) {
    const double x = trace.energy_variance[static_cast<std::size_t>(i)];
    const double y = trace.energy_mean[static_cast<std::size_t>(i)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(tail);
  const double var_x = sxx / m - (sx / m) * (sx / m);
  if (var_x <= 0.0)
    throw std::domain_error("all tail variances coincide; zero-variance fit is degenerate");
  const double slope = (sxy / m - sx * sy / (m * m)) / var_x;
  return ZveFit{sy / m - slope * sx / m, slope};
}

double min_of_tail(const TrainingTrace& trace, int tail) {
  const int len = trace.iterations();
  if (tail < 1 || tail > len) throw std::domain_error("tail must satisfy 1 <= tail <= length");
  double best = trace.energy_mean[static_cast<std::size_t>(len - tail)];
  for (int i = len - tail + 1; i < len; ++i)
    best = std::min(best, trace.energy_mean[static_cast<std::size_t>(i)]);
  return best;
}

}  // namespace qvmc
