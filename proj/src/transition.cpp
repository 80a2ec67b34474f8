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

#include "qvmc/transition.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "qvmc/errors.hpp"
#include "qvmc/parallel.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {

// Proposal matrix Q with Q(row = v', col = v) = q(v'|v).
Eigen::MatrixXd proposal_matrix(const ProposalKind& kind, const ProposalContext& context, int n) {
  const std::int64_t dim = std::int64_t{1} << n;
  return std::visit(
      [&](const auto& k) -> Eigen::MatrixXd {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LocalFlip>) {
          Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dim, dim);
          const double q = 1.0 / n;
          for (std::int64_t v = 0; v < dim; ++v)
            for (int site = 0; site < n; ++site) Q(v ^ (std::int64_t{1} << (n - 1 - site)), v) = q;
          return Q;
        } else if constexpr (std::is_same_v<K, UniformRandom>) {
          return Eigen::MatrixXd::Constant(dim, dim, 1.0 / static_cast<double>(dim));
        } else {
          return context.prob_matrix();
        }
      },
      kind);
}

}  // namespace

TransitionMatrix build_transition_matrix(const ProposalKind& kind,
                                         const TargetDistribution& target,
                                         const ProposalContext& context) {
  const int n = target_size(target);
  if (n > kTransitionQubitCap)
    throw ResourceError("transition matrix above the " + std::to_string(kTransitionQubitCap) +
                        "-qubit cap");
  const std::int64_t dim = std::int64_t{1} << n;
  const Eigen::MatrixXd Q = proposal_matrix(kind, context, n);
  Eigen::VectorXd log_pi(dim);
  for (std::int64_t v = 0; v < dim; ++v)
    log_pi(v) = target_log_weight(target, SpinConfiguration::from_index(v, n));

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
  for (std::int64_t v = 0; v < dim; ++v) {
    double leaving = 0.0;
    for (std::int64_t w = 0; w < dim; ++w) {
      if (w == v) continue;
      const double q_fwd = Q(w, v);
      if (q_fwd <= 0.0) continue;
      const double q_rev = Q(v, w);
      double accept = 0.0;
      if (q_rev > 0.0) {
        const double log_ratio = log_pi(w) - log_pi(v) + std::log(q_rev) - std::log(q_fwd);
        accept = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
      }
      const double t = q_fwd * accept;
      T(v, w) = t;
      leaving += t;
    }
    T(v, v) = std::max(1.0 - leaving, 0.0);
  }
  // guard against accumulated roundoff in the row sums
  for (std::int64_t v = 0; v < dim; ++v) {
    const double sum = T.row(v).sum();
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::runtime_error("transition row " + std::to_string(v) + " sums to " +
                               std::to_string(sum));
  }
  return TransitionMatrix{std::move(T)};
}

GapRecord spectral_gap(const TransitionMatrix& T) {
  const std::int64_t dim = T.entries.rows();
  if (T.entries.cols() != dim) throw std::invalid_argument("transition matrix must be square");
  for (std::int64_t v = 0; v < dim; ++v) {
    if (T.entries.row(v).minCoeff() < -1e-14 || std::abs(T.entries.row(v).sum() - 1.0) > 1e-10)
      throw std::invalid_argument("matrix is not row-stochastic");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(T.entries, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  std::vector<double> moduli(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < dim; ++i) moduli[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  GapRecord record;
  record.n = static_cast<int>(std::round(std::log2(static_cast<double>(dim))));
  record.delta = moduli[0] - (moduli.size() > 1 ? moduli[1] : 0.0);
  const std::size_t keep = std::min<std::size_t>(moduli.size(), 5);
  record.lambda_moduli.assign(moduli.begin(), moduli.begin() + static_cast<std::ptrdiff_t>(keep));
  return record;
}

double stationarity_residual(const TransitionMatrix& T, const Eigen::VectorXd& pi) {
  const Eigen::VectorXd piT = T.entries.transpose() * pi;
  return (piT - pi).lpNorm<1>();
}

double reversibility_residual(const TransitionMatrix& T, const Eigen::VectorXd& pi) {
  const Eigen::MatrixXd flow = pi.asDiagonal() * T.entries;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

namespace {

struct SweepItem {
  int n;
  int instance;
};

GapRecord gap_for_instance(const ProposalKind& kind, const TargetDistribution& target,
                           const SurrogateIsing* surrogate, std::uint64_t experiment_seed) {
  const ProposalContext ctx =
      ProposalContext::prepare(kind, target_size(target), surrogate, experiment_seed);
  GapRecord record = spectral_gap(build_transition_matrix(kind, target, ctx));
  record.kind = kind_name(kind);
  return record;
}

}  // namespace

GapSweepResult gap_scaling_sweep(const std::vector<ProposalKind>& kinds,
                                 const std::vector<int>& n_range, int instances,
                                 const SweepSettings& settings) {
  if (n_range.empty()) throw std::domain_error("empty size range");
  if (instances < 1) throw std::domain_error("need at least one instance");
  for (int n : n_range)
    if (n < 1 || n > kTransitionQubitCap) throw std::domain_error("size out of range");

  std::vector<SweepItem> items;
  for (int n : n_range)
    for (int inst = 0; inst < instances; ++inst) items.push_back({n, inst});

  // one record slot per (n, instance, kind); instances are independent work items
  std::vector<std::vector<GapRecord>> slots(items.size());
  parallel_for(static_cast<int>(items.size()), settings.workers, [&](int idx) {
    const auto [n, inst] = items[static_cast<std::size_t>(idx)];
    const int p = std::max(1, static_cast<int>(std::lround(settings.p_ratio * n)));
    RngStream stream(settings.seed, "gap-instance",
                     (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint64_t>(inst));
    const RbmParameters X =
        RbmParameters::random(n, p, settings.a_range, settings.b_range, settings.w_scale, stream);
    const TargetDistribution target = BornWeight{X};
    const SurrogateIsing surrogate = surrogate_from_rbm(X);
    auto& out = slots[static_cast<std::size_t>(idx)];
    out.reserve(kinds.size());
    for (const auto& kind : kinds) {
      GapRecord rec = gap_for_instance(kind, target, &surrogate, settings.seed);
      rec.instance = inst;
      out.push_back(std::move(rec));
    }
  });

  GapSweepResult result;
  // merge ordered by (kind, n, instance)
  for (std::size_t ki = 0; ki < kinds.size(); ++ki)
    for (std::size_t idx = 0; idx < items.size(); ++idx)
      result.records.push_back(slots[idx][ki]);

  // per (kind, n): mean delta and its standard error over instances
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    const std::string name = kind_name(kinds[ki]);
    std::vector<double> log_means;
    std::vector<double> ns;
    for (std::size_t ni = 0; ni < n_range.size(); ++ni) {
      double mean = 0.0, sq = 0.0;
      for (int inst = 0; inst < instances; ++inst) {
        const double d =
            result.records[ki * items.size() + ni * instances + static_cast<std::size_t>(inst)]
                .delta;
        mean += d;
        sq += d * d;
      }
      mean /= instances;
      const double var = std::max(sq / instances - mean * mean, 0.0);
      const double se = instances > 1 ? std::sqrt(var / (instances - 1)) : 0.0;
      for (int inst = 0; inst < instances; ++inst)
        result.records[ki * items.size() + ni * instances + static_cast<std::size_t>(inst)]
            .delta_stderr = se;
      log_means.push_back(std::log(std::max(mean, 1e-300)));
      ns.push_back(static_cast<double>(n_range[ni]));
    }
    // least-squares slope of log mean-delta versus n
    const double count = static_cast<double>(ns.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      sx += ns[i];
      sy += log_means[i];
      sxx += ns[i] * ns[i];
      sxy += ns[i] * log_means[i];
    }
    const double denom = count * sxx - sx * sx;
    result.slope_per_kind[name] = denom == 0.0 ? 0.0 : (count * sxy - sx * sy) / denom;
  }
  return result;
}

std::vector<GapRecord> gap_beta_sweep(const std::vector<ProposalKind>& kinds,
                                      const SurrogateIsing& h, const std::vector<double>& betas,
                                      const SweepSettings& settings) {
  h.validate();
  for (double beta : betas)
    if (beta < 0.0) throw std::domain_error("beta must be >= 0");
  std::vector<GapRecord> records(kinds.size() * betas.size());
  parallel_for(static_cast<int>(records.size()), settings.workers, [&](int idx) {
    const std::size_t ki = static_cast<std::size_t>(idx) / betas.size();
    const std::size_t bi = static_cast<std::size_t>(idx) % betas.size();
    const TargetDistribution target = SurrogateGibbs{h, betas[bi]};
    GapRecord rec = gap_for_instance(kinds[ki], target, &h, settings.seed);
    rec.beta = betas[bi];
    records[static_cast<std::size_t>(idx)] = std::move(rec);
  });
  return records;
}

}  // namespace qvmc
