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

#include <string>
#include <vector>

#include "qvmc/transition.hpp"
#include "qvmc/vmc.hpp"

namespace qvmc {

inline constexpr const char* kVersion = "0.1.0";

/// Experiment configuration parsed from flat `key = value` text with
/// `[section]` headers. Unknown keys are rejected; absent keys take the
/// documented defaults.
struct ExperimentConfig {
  // [experiment]
  std::string kind;  // gap-scan | gap-beta | vmc | ieta | otoc-check
  std::uint64_t seed = 1;
  std::string out_dir;  // default: $QVMC_OUT or "qvmc-runs"
  int workers = 0;      // 0 = hardware default

  // [model] (vmc)
  std::string model_type = "tfim";  // tfim | ctfim | pauli-file
  int model_n = 4;
  double model_B = 1.0;
  double model_J0 = 1.0;
  bool model_periodic = false;
  std::string model_path;

  // [sampler]
  std::string sampler_kind = "time-homogeneous";
  double tau = 2.0;
  double gamma = 0.4;
  std::vector<double> tau_grid = {0.6, 1.2, 1.8, 2.4, 3.0};
  int trotter_steps = 8;
  std::string trotter_scheme = "strang";  // first-order | strang
  std::string target = "born";            // gap sweeps: born | gibbs

  // [vmc]
  int hidden_units = 0;  // 0 = n
  int iterations = 200;
  int samples = 1024;
  double learning_rate = 0.02;
  double sr_reg = 1e-2;
  double sr_reg_decay = 0.9;
  int sr_reg_decay_period = 50;
  double sr_reg_floor = 1e-4;
  int refresh_period = 10;
  int chains = 2;
  int burn_in = -1;
  int thin = -1;
  bool enforce_real = true;
  double zve_tail_fraction = 0.2;
  double w_init_sigma = 0.01;

  // [sweep]
  int n_min = 4;
  int n_max = 8;
  int sweep_n = 6;  // gap-beta surrogate size
  int instances = 20;
  std::vector<std::string> sweep_kinds = {"local-flip", "uniform", "time-homogeneous"};
  std::vector<double> beta_grid = {0.0, 1.0, 2.0, 5.0, 10.0, 20.0};
  double a_range = 0.5;
  double b_range = 0.5;
  double w_scale = 1.0;
  double p_ratio = 1.0;

  // [ieta]
  std::string rbm_file;
  int sample_count = 100000;

  // [otoc]
  int otoc_n = 3;
  int otoc_p = 3;
  int otoc_k = 0;
  int otoc_m = 0;
  double t_max = 2.0;
  int t_points = 40;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  ProposalKind proposal() const;  // from the [sampler] fields
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

struct RunManifest {
  std::string experiment;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string version;
  std::vector<std::string> artifacts;
  double duration_seconds = 0.0;
  std::string summary_json;  // experiment-specific scalars
};

/// Dispatches the configured experiment, writes every CSV artifact plus
/// manifest.json under the output directory, and returns the manifest.
/// CSV bytes are identical across repeated runs at fixed seed and workers.
RunManifest run_experiment(const ExperimentConfig& cfg);

}  // namespace qvmc
