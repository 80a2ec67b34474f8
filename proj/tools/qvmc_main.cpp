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

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "qvmc/errors.hpp"
#include "qvmc/orchestrator.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qvmc: RBM variational Monte Carlo with quantum-circuit proposals"};
  app.require_subcommand(1);

  std::string config_path;
  std::int64_t seed_override = -1;
  std::string out_override;
  int workers_override = -1;

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file path")->required();
  run->add_option("--seed", seed_override, "override the master seed");
  run->add_option("--out", out_override, "override the output directory");
  run->add_option("--workers", workers_override, "override the worker count");

  auto* validate = app.add_subcommand("validate", "parse and validate a config file");
  validate->add_option("config", config_path, "config file path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    qvmc::ExperimentConfig cfg = qvmc::parse_config(config_path);
    if (validate->parsed()) {
      std::cout << "ok: " << cfg.kind << " experiment, seed " << cfg.seed << "\n";
      return kOk;
    }
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (workers_override >= 0) cfg.workers = workers_override;
    const qvmc::RunManifest manifest = qvmc::run_experiment(cfg);
    std::cout << manifest.experiment << " finished in " << manifest.duration_seconds << " s; "
              << manifest.artifacts.size() << " artifact(s) under " << cfg.out_dir << "/"
              << cfg.kind << "\n";
    for (const auto& name : manifest.artifacts) std::cout << "  " << name << "\n";
    return kOk;
  } catch (const qvmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
}
