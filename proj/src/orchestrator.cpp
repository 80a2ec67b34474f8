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

#include "qvmc/orchestrator.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qvmc/errors.hpp"
#include "qvmc/otoc.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {

using Json = nlohmann::json;

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string fmt17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

struct KeyValue {
  std::string value;
  bool consumed = false;
};

class ConfigReader {
 public:
  explicit ConfigReader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("malformed section header at line " + std::to_string(line_no), "");
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("expected 'key = value' at line " + std::to_string(line_no), "");
      const std::string key = section + "." + trim(line.substr(0, eq));
      if (entries_.count(key))
        throw ConfigError("duplicate key", key);
      entries_[key] = KeyValue{trim(line.substr(eq + 1)), false};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.consumed = true;
    return it->second.value;
  }

  double get_double(const std::string& key, double fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.consumed = true;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second.value, &pos);
      if (pos != it->second.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("expected a number, found '" + it->second.value + "'", key);
    }
  }

  long get_int(const std::string& key, long fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.consumed = true;
    try {
      std::size_t pos = 0;
      const long v = std::stol(it->second.value, &pos);
      if (pos != it->second.value.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("expected an integer, found '" + it->second.value + "'", key);
    }
  }

  bool get_bool(const std::string& key, bool fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.consumed = true;
    if (it->second.value == "true") return true;
    if (it->second.value == "false") return false;
    throw ConfigError("expected true or false, found '" + it->second.value + "'", key);
  }

  std::vector<double> get_double_list(const std::string& key, std::vector<double> fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.consumed = true;
    std::vector<double> values;
    for (const auto& item : split_list(it->second.value)) {
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("expected a number list, found '" + item + "'", key);
      }
    }
    if (values.empty()) throw ConfigError("empty list", key);
    return values;
  }

  std::vector<std::string> get_string_list(const std::string& key,
                                           std::vector<std::string> fallback) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    it->second.consumed = true;
    auto values = split_list(it->second.value);
    if (values.empty()) throw ConfigError("empty list", key);
    return values;
  }

  void reject_unconsumed() const {
    for (const auto& [key, kv] : entries_)
      if (!kv.consumed) throw ConfigError("unknown key", key);
  }

 private:
  std::map<std::string, KeyValue> entries_;
};

const std::set<std::string> kExperimentKinds = {"gap-scan", "gap-beta", "vmc", "ieta",
                                                "otoc-check"};
const std::set<std::string> kSamplerKinds = {"local-flip",       "uniform",
                                             "haar",             "quantum-averaged",
                                             "time-homogeneous", "trotterized"};

ProposalKind make_proposal(const std::string& name, double tau, double gamma,
                           const std::vector<double>& tau_grid, int steps,
                           const std::string& scheme, const std::string& key_prefix) {
  if (name == "local-flip") return LocalFlip{};
  if (name == "uniform") return UniformRandom{};
  if (name == "haar") return HaarRandom{};
  if (name == "quantum-averaged") return QuantumAveraged{tau_grid, gamma};
  if (name == "time-homogeneous") return TimeHomogeneous{tau, gamma};
  if (name == "trotterized") {
    TrotterScheme ts;
    if (scheme == "first-order") ts = TrotterScheme::FirstOrder;
    else if (scheme == "strang") ts = TrotterScheme::Strang;
    else throw ConfigError("unknown Trotter scheme '" + scheme + "'", key_prefix + "trotter_scheme");
    return Trotterized{tau, gamma, steps, ts};
  }
  throw ConfigError("unknown sampler kind '" + name + "'", key_prefix + "kind");
}

}  // namespace

ProposalKind ExperimentConfig::proposal() const {
  return make_proposal(sampler_kind, tau, gamma, tau_grid, trotter_steps, trotter_scheme,
                       "sampler.");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ConfigReader reader(text);
  ExperimentConfig cfg;

  cfg.kind = reader.get_string("experiment.kind", "");
  if (cfg.kind.empty()) throw ConfigError("missing required key", "experiment.kind");
  if (!kExperimentKinds.count(cfg.kind))
    throw ConfigError("unknown experiment kind '" + cfg.kind + "'", "experiment.kind");
  const long seed = reader.get_int("experiment.seed", 1);
  if (seed < 0) throw ConfigError("seed must be >= 0", "experiment.seed");
  cfg.seed = static_cast<std::uint64_t>(seed);
  const char* env_out = std::getenv("QVMC_OUT");
  cfg.out_dir = reader.get_string("experiment.out", env_out != nullptr ? env_out : "qvmc-runs");
  cfg.workers = static_cast<int>(reader.get_int("experiment.workers", 0));
  if (cfg.workers < 0) throw ConfigError("workers must be >= 0", "experiment.workers");

  cfg.model_type = reader.get_string("model.type", cfg.model_type);
  if (cfg.model_type != "tfim" && cfg.model_type != "ctfim" && cfg.model_type != "pauli-file")
    throw ConfigError("unknown model type '" + cfg.model_type + "'", "model.type");
  cfg.model_n = static_cast<int>(reader.get_int("model.n", cfg.model_n));
  cfg.model_B = reader.get_double("model.B", cfg.model_B);
  cfg.model_J0 = reader.get_double("model.J0", cfg.model_J0);
  cfg.model_periodic = reader.get_bool("model.periodic", cfg.model_periodic);
  cfg.model_path = reader.get_string("model.path", cfg.model_path);

  cfg.sampler_kind = reader.get_string("sampler.kind", cfg.sampler_kind);
  if (!kSamplerKinds.count(cfg.sampler_kind))
    throw ConfigError("unknown sampler kind '" + cfg.sampler_kind + "'", "sampler.kind");
  cfg.tau = reader.get_double("sampler.tau", cfg.tau);
  cfg.gamma = reader.get_double("sampler.gamma", cfg.gamma);
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0)
    throw ConfigError("gamma must lie in [0, 1]", "sampler.gamma");
  cfg.tau_grid = reader.get_double_list("sampler.tau_grid", cfg.tau_grid);
  cfg.trotter_steps = static_cast<int>(reader.get_int("sampler.trotter_steps", cfg.trotter_steps));
  if (cfg.trotter_steps < 1)
    throw ConfigError("trotter_steps must be >= 1", "sampler.trotter_steps");
  cfg.trotter_scheme = reader.get_string("sampler.trotter_scheme", cfg.trotter_scheme);
  if (cfg.trotter_scheme != "first-order" && cfg.trotter_scheme != "strang")
    throw ConfigError("unknown Trotter scheme '" + cfg.trotter_scheme + "'",
                      "sampler.trotter_scheme");
  cfg.target = reader.get_string("sampler.target", cfg.target);
  if (cfg.target != "born" && cfg.target != "gibbs")
    throw ConfigError("target must be born or gibbs", "sampler.target");

  cfg.hidden_units = static_cast<int>(reader.get_int("vmc.p", cfg.hidden_units));
  cfg.iterations = static_cast<int>(reader.get_int("vmc.iterations", cfg.iterations));
  cfg.samples = static_cast<int>(reader.get_int("vmc.samples", cfg.samples));
  cfg.learning_rate = reader.get_double("vmc.learning_rate", cfg.learning_rate);
  cfg.sr_reg = reader.get_double("vmc.sr_reg", cfg.sr_reg);
  cfg.sr_reg_decay = reader.get_double("vmc.sr_reg_decay", cfg.sr_reg_decay);
  cfg.sr_reg_decay_period =
      static_cast<int>(reader.get_int("vmc.sr_reg_decay_period", cfg.sr_reg_decay_period));
  cfg.sr_reg_floor = reader.get_double("vmc.sr_reg_floor", cfg.sr_reg_floor);
  cfg.refresh_period = static_cast<int>(reader.get_int("vmc.refresh_period", cfg.refresh_period));
  cfg.chains = static_cast<int>(reader.get_int("vmc.chains", cfg.chains));
  cfg.burn_in = static_cast<int>(reader.get_int("vmc.burn_in", cfg.burn_in));
  cfg.thin = static_cast<int>(reader.get_int("vmc.thin", cfg.thin));
  cfg.enforce_real = reader.get_bool("vmc.enforce_real", cfg.enforce_real);
  cfg.zve_tail_fraction = reader.get_double("vmc.zve_tail_fraction", cfg.zve_tail_fraction);
  cfg.w_init_sigma = reader.get_double("vmc.w_init_sigma", cfg.w_init_sigma);

  cfg.n_min = static_cast<int>(reader.get_int("sweep.n_min", cfg.n_min));
  cfg.n_max = static_cast<int>(reader.get_int("sweep.n_max", cfg.n_max));
  cfg.sweep_n = static_cast<int>(reader.get_int("sweep.n", cfg.sweep_n));
  cfg.instances = static_cast<int>(reader.get_int("sweep.instances", cfg.instances));
  cfg.sweep_kinds = reader.get_string_list("sweep.kinds", cfg.sweep_kinds);
  for (const auto& kind : cfg.sweep_kinds)
    if (!kSamplerKinds.count(kind))
      throw ConfigError("unknown sampler kind '" + kind + "'", "sweep.kinds");
  cfg.beta_grid = reader.get_double_list("sweep.beta_grid", cfg.beta_grid);
  for (double beta : cfg.beta_grid)
    if (beta < 0.0) throw ConfigError("beta must be >= 0", "sweep.beta_grid");
  cfg.a_range = reader.get_double("sweep.a_range", cfg.a_range);
  cfg.b_range = reader.get_double("sweep.b_range", cfg.b_range);
  cfg.w_scale = reader.get_double("sweep.w_scale", cfg.w_scale);
  cfg.p_ratio = reader.get_double("sweep.p_ratio", cfg.p_ratio);

  cfg.rbm_file = reader.get_string("ieta.rbm_file", cfg.rbm_file);
  cfg.sample_count = static_cast<int>(reader.get_int("ieta.sample_count", cfg.sample_count));

  cfg.otoc_n = static_cast<int>(reader.get_int("otoc.n", cfg.otoc_n));
  cfg.otoc_p = static_cast<int>(reader.get_int("otoc.p", cfg.otoc_p));
  cfg.otoc_k = static_cast<int>(reader.get_int("otoc.k", cfg.otoc_k));
  cfg.otoc_m = static_cast<int>(reader.get_int("otoc.m", cfg.otoc_m));
  cfg.t_max = reader.get_double("otoc.t_max", cfg.t_max);
  cfg.t_points = static_cast<int>(reader.get_int("otoc.t_points", cfg.t_points));
  if (cfg.t_points < 1) throw ConfigError("t_points must be >= 1", "otoc.t_points");

  reader.reject_unconsumed();

  // per-experiment requirements
  if (cfg.kind == "vmc" && cfg.model_type == "pauli-file" && cfg.model_path.empty())
    throw ConfigError("missing required key", "model.path");
  if (cfg.kind == "vmc" && cfg.model_type == "pauli-file" &&
      !std::filesystem::exists(cfg.model_path))
    throw ConfigError("file does not exist: " + cfg.model_path, "model.path");
  if (cfg.kind == "ieta") {
    if (cfg.rbm_file.empty()) throw ConfigError("missing required key", "ieta.rbm_file");
    if (!std::filesystem::exists(cfg.rbm_file))
      throw ConfigError("file does not exist: " + cfg.rbm_file, "ieta.rbm_file");
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path, "");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto join_doubles = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) {
      if (!s.empty()) s += ", ";
      s += fmt17(x);
    }
    return s;
  };
  auto join_strings = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) {
      if (!s.empty()) s += ", ";
      s += x;
    }
    return s;
  };
  out << "[experiment]\n";
  out << "kind = " << cfg.kind << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "out = " << cfg.out_dir << "\n";
  out << "workers = " << cfg.workers << "\n";
  out << "\n[model]\n";
  out << "type = " << cfg.model_type << "\n";
  out << "n = " << cfg.model_n << "\n";
  out << "B = " << fmt17(cfg.model_B) << "\n";
  out << "J0 = " << fmt17(cfg.model_J0) << "\n";
  out << "periodic = " << (cfg.model_periodic ? "true" : "false") << "\n";
  if (!cfg.model_path.empty()) out << "path = " << cfg.model_path << "\n";
  out << "\n[sampler]\n";
  out << "kind = " << cfg.sampler_kind << "\n";
  out << "tau = " << fmt17(cfg.tau) << "\n";
  out << "gamma = " << fmt17(cfg.gamma) << "\n";
  out << "tau_grid = " << join_doubles(cfg.tau_grid) << "\n";
  out << "trotter_steps = " << cfg.trotter_steps << "\n";
  out << "trotter_scheme = " << cfg.trotter_scheme << "\n";
  out << "target = " << cfg.target << "\n";
  out << "\n[vmc]\n";
  out << "p = " << cfg.hidden_units << "\n";
  out << "iterations = " << cfg.iterations << "\n";
  out << "samples = " << cfg.samples << "\n";
  out << "learning_rate = " << fmt17(cfg.learning_rate) << "\n";
  out << "sr_reg = " << fmt17(cfg.sr_reg) << "\n";
  out << "sr_reg_decay = " << fmt17(cfg.sr_reg_decay) << "\n";
  out << "sr_reg_decay_period = " << cfg.sr_reg_decay_period << "\n";
  out << "sr_reg_floor = " << fmt17(cfg.sr_reg_floor) << "\n";
  out << "refresh_period = " << cfg.refresh_period << "\n";
  out << "chains = " << cfg.chains << "\n";
  out << "burn_in = " << cfg.burn_in << "\n";
  out << "thin = " << cfg.thin << "\n";
  out << "enforce_real = " << (cfg.enforce_real ? "true" : "false") << "\n";
  out << "zve_tail_fraction = " << fmt17(cfg.zve_tail_fraction) << "\n";
  out << "w_init_sigma = " << fmt17(cfg.w_init_sigma) << "\n";
  out << "\n[sweep]\n";
  out << "n_min = " << cfg.n_min << "\n";
  out << "n_max = " << cfg.n_max << "\n";
  out << "n = " << cfg.sweep_n << "\n";
  out << "instances = " << cfg.instances << "\n";
  out << "kinds = " << join_strings(cfg.sweep_kinds) << "\n";
  out << "beta_grid = " << join_doubles(cfg.beta_grid) << "\n";
  out << "a_range = " << fmt17(cfg.a_range) << "\n";
  out << "b_range = " << fmt17(cfg.b_range) << "\n";
  out << "w_scale = " << fmt17(cfg.w_scale) << "\n";
  out << "p_ratio = " << fmt17(cfg.p_ratio) << "\n";
  if (!cfg.rbm_file.empty() || cfg.kind == "ieta") {
    out << "\n[ieta]\n";
    out << "rbm_file = " << cfg.rbm_file << "\n";
    out << "sample_count = " << cfg.sample_count << "\n";
  }
  out << "\n[otoc]\n";
  out << "n = " << cfg.otoc_n << "\n";
  out << "p = " << cfg.otoc_p << "\n";
  out << "k = " << cfg.otoc_k << "\n";
  out << "m = " << cfg.otoc_m << "\n";
  out << "t_max = " << fmt17(cfg.t_max) << "\n";
  out << "t_points = " << cfg.t_points << "\n";
  return out.str();
}

namespace {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    names_.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write artifact " + name);
    return out;
  }

  const std::vector<std::string>& names() const { return names_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

void write_gap_records(std::ofstream& out, const std::vector<GapRecord>& records) {
  out << "kind,n,beta,instance,delta,lambda1_mod,stderr\n";
  for (const auto& rec : records) {
    out << rec.kind << ',' << rec.n << ',';
    if (rec.beta) out << fmt(*rec.beta);
    out << ',' << rec.instance << ',' << fmt(rec.delta) << ','
        << fmt(rec.lambda_moduli.size() > 1 ? rec.lambda_moduli[1] : 0.0) << ','
        << fmt(rec.delta_stderr) << '\n';
  }
}

PauliSum build_model(const ExperimentConfig& cfg) {
  if (cfg.model_type == "tfim")
    return build_tfim(cfg.model_n, cfg.model_B, cfg.model_J0, cfg.model_periodic);
  if (cfg.model_type == "ctfim") return build_ctfim(cfg.model_n, cfg.model_B, cfg.model_J0);
  std::ifstream in(cfg.model_path);
  if (!in) throw std::runtime_error("cannot read " + cfg.model_path);
  return parse_pauli_sum(in);
}

Json run_gap_scan(const ExperimentConfig& cfg, ArtifactWriter& artifacts) {
  std::vector<ProposalKind> kinds;
  for (const auto& name : cfg.sweep_kinds)
    kinds.push_back(make_proposal(name, cfg.tau, cfg.gamma, cfg.tau_grid, cfg.trotter_steps,
                                  cfg.trotter_scheme, "sampler."));
  std::vector<int> n_range;
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) n_range.push_back(n);
  SweepSettings settings{cfg.a_range, cfg.b_range, cfg.w_scale, cfg.p_ratio, cfg.seed,
                         cfg.workers};
  const GapSweepResult result = gap_scaling_sweep(kinds, n_range, cfg.instances, settings);
  auto out = artifacts.open("gap_records.csv");
  write_gap_records(out, result.records);
  Json summary;
  for (const auto& [kind, slope] : result.slope_per_kind) summary["slopes"][kind] = slope;
  return summary;
}

Json run_gap_beta(const ExperimentConfig& cfg, ArtifactWriter& artifacts) {
  std::vector<ProposalKind> kinds;
  for (const auto& name : cfg.sweep_kinds)
    kinds.push_back(make_proposal(name, cfg.tau, cfg.gamma, cfg.tau_grid, cfg.trotter_steps,
                                  cfg.trotter_scheme, "sampler."));
  const int n = cfg.sweep_n;
  const int p = std::max(1, static_cast<int>(std::lround(cfg.p_ratio * n)));
  RngStream stream(cfg.seed, "gap-beta-surrogate", 0);
  const RbmParameters X =
      RbmParameters::random(n, p, cfg.a_range, cfg.b_range, cfg.w_scale, stream);
  const SurrogateIsing h = surrogate_from_rbm(X);
  SweepSettings settings{cfg.a_range, cfg.b_range, cfg.w_scale, cfg.p_ratio, cfg.seed,
                         cfg.workers};
  const auto records = gap_beta_sweep(kinds, h, cfg.beta_grid, settings);
  auto out = artifacts.open("gap_records.csv");
  write_gap_records(out, records);
  Json summary;
  summary["surrogate_n"] = n;
  return summary;
}

Json run_vmc(const ExperimentConfig& cfg, ArtifactWriter& artifacts) {
  const PauliSum H = build_model(cfg).normalized();
  const int n = H.size();
  const int p = cfg.hidden_units > 0 ? cfg.hidden_units : n;
  VmcConfig vmc;
  vmc.kind = cfg.proposal();
  vmc.samples_per_iteration = cfg.samples;
  vmc.iterations = cfg.iterations;
  vmc.learning_rate = cfg.learning_rate;
  vmc.sr_reg = cfg.sr_reg;
  vmc.sr_reg_decay = cfg.sr_reg_decay;
  vmc.sr_reg_decay_period = cfg.sr_reg_decay_period;
  vmc.sr_reg_floor = cfg.sr_reg_floor;
  vmc.seed = cfg.seed;
  vmc.surrogate_refresh_period = cfg.refresh_period;
  vmc.chains = cfg.chains;
  vmc.burn_in = cfg.burn_in;
  vmc.thin = cfg.thin;
  vmc.enforce_real = cfg.enforce_real;
  vmc.workers = cfg.workers;
  vmc.zve_tail_fraction = cfg.zve_tail_fraction;

  RngStream init_stream(cfg.seed, "vmc-init", 0);
  RbmParameters X0 = RbmParameters::near_zero_init(n, p, cfg.w_init_sigma, init_stream);
  const TrainResult result = train(H, std::move(X0), vmc);

  {
    auto out = artifacts.open("training_trace.csv");
    out << "iter,energy_mean,energy_var,accept_rate,param_norm\n";
    for (int i = 0; i < result.trace.iterations(); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      out << i << ',' << fmt(result.trace.energy_mean[idx]) << ','
          << fmt(result.trace.energy_variance[idx]) << ','
          << fmt(result.trace.acceptance_rate[idx]) << ','
          << fmt(result.trace.parameter_norm[idx]) << '\n';
    }
  }
  {
    auto out = artifacts.open("rbm_final.txt");
    serialize_rbm(result.X, out);
  }

  const int tail = std::max(2, static_cast<int>(cfg.zve_tail_fraction * cfg.iterations));
  Json summary;
  summary["final_energy"] = result.trace.energy_mean.back();
  summary["min_of_tail"] = min_of_tail(result.trace, tail);
  try {
    const ZveFit fit = zero_variance_extrapolate(result.trace, tail);
    summary["zve_intercept"] = fit.intercept;
    summary["zve_slope"] = fit.slope;
  } catch (const std::domain_error&) {
    // degenerate fit: fall back to the tail minimum
    summary["zve_intercept"] = summary["min_of_tail"];
    summary["zve_degenerate"] = true;
  }
  if (n <= kDenseQubitCap) summary["exact_energy"] = exact_ground_state(H).energy;
  return summary;
}

Json run_ieta(const ExperimentConfig& cfg, ArtifactWriter& artifacts) {
  std::ifstream in(cfg.rbm_file);
  if (!in) throw std::runtime_error("cannot read " + cfg.rbm_file);
  const RbmParameters X = parse_rbm(in);
  IEtaScanOptions options;
  options.sample_count = cfg.sample_count;
  options.seed = cfg.seed;
  options.workers = cfg.workers;
  const auto points = i_eta_scan(X, options);
  auto out = artifacts.open("ieta_points.csv");
  out << "k,m,eta,mi,lb,ub,eta_stderr,mi_stderr\n";
  for (const auto& pt : points)
    out << pt.k << ',' << pt.m << ',' << fmt(pt.eta) << ',' << fmt(pt.mi) << ',' << fmt(pt.lb)
        << ',' << fmt(pt.ub) << ',' << fmt(pt.eta_stderr) << ',' << fmt(pt.mi_stderr) << '\n';
  double mean_abs_eta = 0.0;
  for (const auto& pt : points) mean_abs_eta += std::abs(pt.eta);
  Json summary;
  summary["pairs"] = points.size();
  summary["mean_abs_eta"] = points.empty() ? 0.0 : mean_abs_eta / points.size();
  return summary;
}

Json run_otoc_check(const ExperimentConfig& cfg, ArtifactWriter& artifacts) {
  RngStream stream(cfg.seed, "otoc-instance", 0);
  const RbmParameters X = RbmParameters::random(cfg.otoc_n, cfg.otoc_p, cfg.a_range, cfg.b_range,
                                                cfg.w_scale, stream);
  const int k = cfg.otoc_k;
  const int m = cfg.otoc_m;
  auto out = artifacts.open("otoc_trace.csv");
  out << "t,tau,re_direct,im_direct,re_closed,im_closed\n";
  const std::array<std::pair<Axis, Axis>, 4> pairings{
      {{Axis::X, Axis::X}, {Axis::X, Axis::Y}, {Axis::Y, Axis::X}, {Axis::Y, Axis::Y}}};
  std::array<double, 4> max_residual{0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < cfg.t_points; ++i) {
    const double t = cfg.t_max * (i + 1) / cfg.t_points;
    const OtocValue closed = otoc_closed_form(X, k, m, t);
    OtocValue direct_xx;
    for (std::size_t pi = 0; pi < pairings.size(); ++pi) {
      const OtocValue direct =
          otoc_direct(X, k, m, pairings[pi].first, pairings[pi].second, 0.0, 0.0, t);
      max_residual[pi] = std::max(max_residual[pi], std::abs(direct.value - closed.value));
      if (pi == 0) direct_xx = direct;
    }
    out << fmt(t) << ',' << fmt(closed.tau) << ',' << fmt(direct_xx.value.real()) << ','
        << fmt(direct_xx.value.imag()) << ',' << fmt(closed.value.real()) << ','
        << fmt(closed.value.imag()) << '\n';
  }
  Json summary;
  const std::array<const char*, 4> names{"xx", "xy", "yx", "yy"};
  for (std::size_t pi = 0; pi < pairings.size(); ++pi)
    summary["max_residual"][names[pi]] = max_residual[pi];
  summary["eta_covariance"] = eta_covariance(X, k, m);
  if (X.W(k, m).real() != 0.0) summary["eta_from_otocs"] = eta_from_otocs(X, k, m);
  return summary;
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ArtifactWriter artifacts(std::filesystem::path(cfg.out_dir) / cfg.kind);

  Json summary;
  if (cfg.kind == "gap-scan") summary = run_gap_scan(cfg, artifacts);
  else if (cfg.kind == "gap-beta") summary = run_gap_beta(cfg, artifacts);
  else if (cfg.kind == "vmc") summary = run_vmc(cfg, artifacts);
  else if (cfg.kind == "ieta") summary = run_ieta(cfg, artifacts);
  else if (cfg.kind == "otoc-check") summary = run_otoc_check(cfg, artifacts);
  else throw ConfigError("unknown experiment kind '" + cfg.kind + "'", "experiment.kind");

  RunManifest manifest;
  manifest.experiment = cfg.kind;
  manifest.seed = cfg.seed;
  manifest.workers = cfg.workers;
  manifest.version = kVersion;
  manifest.artifacts = artifacts.names();
  manifest.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.summary_json = summary.dump();

  Json doc;
  doc["experiment"] = manifest.experiment;
  doc["seed"] = manifest.seed;
  doc["workers"] = manifest.workers;
  doc["version"] = manifest.version;
  doc["artifacts"] = manifest.artifacts;
  doc["duration_seconds"] = manifest.duration_seconds;
  doc["summary"] = summary;
  doc["config"] = serialize_config(cfg);
  std::ofstream out(artifacts.dir() / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest.json");
  out << doc.dump(2) << '\n';
  return manifest;
}

}  // namespace qvmc
