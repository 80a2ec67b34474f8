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

#include "qvmc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qvmc/errors.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sech2(double x) {
  if (std::abs(x) > 350.0) return 0.0;
  const double c = std::cosh(x);
  return 1.0 / (c * c);
}

}  // namespace

std::string kind_name(const ProposalKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LocalFlip>) return "local-flip";
        else if constexpr (std::is_same_v<K, UniformRandom>) return "uniform";
        else if constexpr (std::is_same_v<K, HaarRandom>) return "haar";
        else if constexpr (std::is_same_v<K, QuantumAveraged>) return "quantum-averaged";
        else if constexpr (std::is_same_v<K, TimeHomogeneous>) return "time-homogeneous";
        else return "trotterized";
      },
      kind);
}

double target_log_weight(const TargetDistribution& target, const SpinConfiguration& v) {
  return std::visit(
      [&](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, BornWeight>) {
          return 2.0 * log_psi(t.X, v).real();
        } else {
          return -t.beta * t.h.energy(v);
        }
      },
      target);
}

int target_size(const TargetDistribution& target) {
  return std::visit(
      [](const auto& t) -> int {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, BornWeight>) return t.X.n();
        else return t.h.n();
      },
      target);
}

Eigen::VectorXd target_distribution_vector(const TargetDistribution& target) {
  const int n = target_size(target);
  if (n > kDenseQubitCap) throw ResourceError("target enumeration exceeds the dense cap");
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::VectorXd logw(dim);
  for (std::int64_t idx = 0; idx < dim; ++idx)
    logw(idx) = target_log_weight(target, SpinConfiguration::from_index(idx, n));
  const double m = logw.maxCoeff();
  Eigen::VectorXd w = (logw.array() - m).exp();
  return w / w.sum();
}

SurrogateIsing surrogate_from_rbm(const RbmParameters& X) {
  if (!X.real_valued()) throw std::invalid_argument("surrogate requires real parameters");
  const int n = X.n();
  const int p = X.p();
  SurrogateIsing h = SurrogateIsing::zero(n);
  for (int i = 0; i < n; ++i) {
    double l = -2.0 * X.a(i).real();
    for (int j = 0; j < p; ++j) l -= 2.0 * X.W(i, j).real() * std::tanh(X.b(j).real());
    h.fields(i) = l;
  }
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      double J = 0.0;
      for (int j = 0; j < p; ++j)
        J -= 2.0 * sech2(X.b(j).real()) * X.W(i, j).real() * X.W(k, j).real();
      h.couplings(i, k) = J;
      h.couplings(k, i) = J;
    }
  }
  return h;
}

ProposalContext ProposalContext::prepare(const ProposalKind& kind, int n,
                                         const SurrogateIsing* surrogate,
                                         std::uint64_t experiment_seed) {
  ProposalContext ctx;
  ctx.n_ = n;
  auto from_unitary = [&](const Eigen::MatrixXcd& U) { ctx.prob_ = U.cwiseAbs2(); };
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, HaarRandom>) {
          from_unitary(haar_unitary(n, experiment_seed));
        } else if constexpr (std::is_same_v<K, QuantumAveraged>) {
          if (surrogate == nullptr)
            throw std::invalid_argument("quantum proposal needs a surrogate");
          if (k.tau_grid.empty()) throw std::domain_error("empty tau grid");
          Eigen::MatrixXd acc;
          for (double tau : k.tau_grid) {
            const Eigen::MatrixXd P = exact_propagator(*surrogate, tau, k.gamma).cwiseAbs2();
            acc = acc.size() ? (acc + P).eval() : P;
          }
          ctx.prob_ = acc / static_cast<double>(k.tau_grid.size());
        } else if constexpr (std::is_same_v<K, TimeHomogeneous>) {
          if (surrogate == nullptr)
            throw std::invalid_argument("quantum proposal needs a surrogate");
          from_unitary(exact_propagator(*surrogate, k.tau, k.gamma));
        } else if constexpr (std::is_same_v<K, Trotterized>) {
          if (surrogate == nullptr)
            throw std::invalid_argument("quantum proposal needs a surrogate");
          from_unitary(trotter_circuit(*surrogate, k.tau, k.gamma, k.steps, k.scheme));
        }
        // LocalFlip / UniformRandom need no prepared operator
      },
      kind);
  if (ctx.prob_.size() > 0) {
    ctx.cdf_ = ctx.prob_;
    for (std::int64_t col = 0; col < ctx.cdf_.cols(); ++col) {
      double run = 0.0;
      for (std::int64_t row = 0; row < ctx.cdf_.rows(); ++row) {
        run += ctx.cdf_(row, col);
        ctx.cdf_(row, col) = run;
      }
    }
  }
  return ctx;
}

SpinConfiguration ProposalContext::draw(const SpinConfiguration& v, RngStream& rng) const {
  const std::int64_t col = static_cast<std::int64_t>(v.to_index());
  const double u = rng.uniform() * cdf_(cdf_.rows() - 1, col);
  const double* begin = cdf_.col(col).data();
  const double* end = begin + cdf_.rows();
  const double* it = std::upper_bound(begin, end, u);
  std::int64_t idx = it - begin;
  if (idx >= cdf_.rows()) idx = cdf_.rows() - 1;
  return SpinConfiguration::from_index(static_cast<std::uint64_t>(idx), n_);
}

double ProposalContext::log_prob(const SpinConfiguration& to, const SpinConfiguration& from) const {
  const double p = prob_(static_cast<std::int64_t>(to.to_index()),
                         static_cast<std::int64_t>(from.to_index()));
  return p > 0.0 ? std::log(p) : kNegInf;
}

ProposalResult propose(const ProposalKind& kind, const SpinConfiguration& v,
                       const ProposalContext& context, RngStream& rng) {
  const int n = v.size();
  return std::visit(
      [&](const auto& k) -> ProposalResult {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LocalFlip>) {
          const int site = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
          const double logq = -std::log(static_cast<double>(n));
          return {v.flipped(site), logq, logq};
        } else if constexpr (std::is_same_v<K, UniformRandom>) {
          const std::uint64_t idx = rng.uniform_int(std::uint64_t{1} << n);
          const double logq = -static_cast<double>(n) * std::log(2.0);
          return {SpinConfiguration::from_index(idx, n), logq, logq};
        } else {
          SpinConfiguration next = context.draw(v, rng);
          return {next, context.log_prob(next, v), context.log_prob(v, next)};
        }
      },
      kind);
}

ChainState make_chain_state(SpinConfiguration v, const TargetDistribution& target) {
  const double logw = target_log_weight(target, v);
  return ChainState{std::move(v), logw, 0, 0};
}

ChainState metropolis_step(ChainState state, const ProposalKind& kind,
                           const TargetDistribution& target, const ProposalContext& context,
                           RngStream& rng) {
  ProposalResult prop = propose(kind, state.current, context, rng);
  const double log_weight_next = target_log_weight(target, prop.next);
  const double log_accept =
      log_weight_next - state.log_weight + prop.log_q_reverse - prop.log_q_forward;
  ++state.step_count;
  if (log_accept >= 0.0 || std::log(rng.uniform()) < log_accept) {
    state.current = std::move(prop.next);
    state.log_weight = log_weight_next;
    ++state.accept_count;
  }
  return state;
}

std::vector<SpinConfiguration> run_chain(const ProposalKind& kind,
                                         const TargetDistribution& target,
                                         const ProposalContext& context, int length, int burn_in,
                                         int thin, RngStream& rng, ChainState* final_state) {
  if (length < 1) throw std::domain_error("chain length must be >= 1");
  if (thin < 1) throw std::domain_error("thinning must be >= 1");
  if (burn_in < 0) throw std::domain_error("negative burn-in");
  const int n = target_size(target);
  ChainState state = make_chain_state(SpinConfiguration::random(n, rng), target);
  for (int s = 0; s < burn_in; ++s) state = metropolis_step(state, kind, target, context, rng);
  std::vector<SpinConfiguration> samples;
  samples.reserve(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k) {
    for (int s = 0; s < thin; ++s) state = metropolis_step(state, kind, target, context, rng);
    samples.push_back(state.current);
  }
  if (final_state != nullptr) *final_state = state;
  return samples;
}

double integrated_autocorrelation(const std::vector<double>& series) {
  const std::size_t len = series.size();
  if (len < 10) throw std::invalid_argument("series too short for autocorrelation analysis");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(len);
  double var = 0.0;
  for (double x : series) var += (x - mean) * (x - mean);
  var /= static_cast<double>(len);
  if (var == 0.0) throw std::invalid_argument("constant series has no autocorrelation time");

  const std::size_t max_lag = len / 3;
  double tau = 0.5;
  constexpr double c = 6.0;
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    double acov = 0.0;
    for (std::size_t t = 0; t + lag < len; ++t)
      acov += (series[t] - mean) * (series[t + lag] - mean);
    acov /= static_cast<double>(len);
    tau += acov / var;
    if (static_cast<double>(lag) >= c * tau) break;
  }
  return tau;
}

}  // namespace qvmc
