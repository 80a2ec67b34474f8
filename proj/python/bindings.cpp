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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qvmc/errors.hpp"
#include "qvmc/orchestrator.hpp"
#include "qvmc/otoc.hpp"
#include "qvmc/rng.hpp"

namespace py = pybind11;
using namespace qvmc;

namespace {

SpinConfiguration to_config(const std::vector<int>& spins) { return SpinConfiguration(spins); }

ProposalKind proposal_from_name(const std::string& name, double tau, double gamma, int steps,
                                const std::string& scheme, const std::vector<double>& tau_grid) {
  if (name == "local-flip") return LocalFlip{};
  if (name == "uniform") return UniformRandom{};
  if (name == "haar") return HaarRandom{};
  if (name == "quantum-averaged") return QuantumAveraged{tau_grid, gamma};
  if (name == "time-homogeneous") return TimeHomogeneous{tau, gamma};
  if (name == "trotterized")
    return Trotterized{tau, gamma, steps,
                       scheme == "first-order" ? TrotterScheme::FirstOrder : TrotterScheme::Strang};
  throw std::invalid_argument("unknown proposal kind: " + name);
}

}  // namespace

PYBIND11_MODULE(_qvmc, m) {
  m.doc() = "RBM variational Monte Carlo with quantum-circuit proposals";
  m.attr("__version__") = kVersion;

  py::register_exception<ParseError>(m, "QvmcParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "QvmcConfigError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "QvmcResourceError", PyExc_RuntimeError);

  py::class_<PauliSum>(m, "PauliSum")
      .def_property_readonly("size", &PauliSum::size)
      .def("is_hermitian", &PauliSum::is_hermitian, py::arg("tol") = 1e-12)
      .def("__str__", [](const PauliSum& s) { return serialize_pauli_sum(s); });

  m.def("build_tfim", &build_tfim, py::arg("n"), py::arg("B"), py::arg("J0"),
        py::arg("periodic") = false);
  m.def("build_ctfim", &build_ctfim, py::arg("n"), py::arg("B"), py::arg("J0"));
  m.def("parse_pauli_sum",
        [](const std::string& text) { return parse_pauli_sum(text); });
  m.def("serialize_pauli_sum",
        [](const PauliSum& sum) { return serialize_pauli_sum(sum); });
  m.def("dense_matrix", &dense_matrix);
  m.def("exact_ground_state", [](const PauliSum& H) {
    const GroundState gs = exact_ground_state(H);
    return py::make_tuple(gs.energy, gs.vector);
  });
  m.def("connected_elements", [](const PauliSum& H, const std::vector<int>& spins) {
    std::vector<std::pair<std::vector<int>, Complex>> out;
    for (const auto& [v, amp] : connected_elements(H, to_config(spins)))
      out.emplace_back(v.spins(), amp);
    return out;
  });

  py::class_<RbmParameters>(m, "RbmParameters")
      .def(py::init([](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b,
                       const Eigen::MatrixXcd& W) {
             RbmParameters X;
             X.a = a;
             X.b = b;
             X.W = W;
             if (X.W.rows() != X.n() || X.W.cols() != X.p())
               throw std::invalid_argument("weight matrix shape must be n x p");
             return X;
           }),
           py::arg("a"), py::arg("b"), py::arg("W"))
      .def_readwrite("a", &RbmParameters::a)
      .def_readwrite("b", &RbmParameters::b)
      .def_readwrite("W", &RbmParameters::W)
      .def_property_readonly("n", &RbmParameters::n)
      .def_property_readonly("p", &RbmParameters::p)
      .def("real_valued", &RbmParameters::real_valued)
      .def_static("zeros", &RbmParameters::zeros, py::arg("n"), py::arg("p"))
      .def("__str__", [](const RbmParameters& X) { return serialize_rbm(X); });

  m.def("parse_rbm", [](const std::string& text) { return parse_rbm(text); });
  m.def("log_psi",
        [](const RbmParameters& X, const std::vector<int>& v) { return log_psi(X, to_config(v)); });
  m.def("log_derivatives", [](const RbmParameters& X, const std::vector<int>& v) {
    return log_derivatives(X, to_config(v));
  });
  m.def("learner_hamiltonian", &learner_hamiltonian);
  m.def("thermal_diagonal",
        [](const RbmParameters& X) { return thermal_state(X).diagonal; });

  py::class_<SurrogateIsing>(m, "SurrogateIsing")
      .def(py::init([](const Eigen::VectorXd& fields, const Eigen::MatrixXd& couplings) {
             SurrogateIsing h{fields, couplings};
             h.validate();
             return h;
           }),
           py::arg("fields"), py::arg("couplings"))
      .def_readonly("fields", &SurrogateIsing::fields)
      .def_readonly("couplings", &SurrogateIsing::couplings);

  m.def("surrogate_from_rbm", &surrogate_from_rbm);
  m.def("exact_propagator", &exact_propagator, py::arg("h"), py::arg("tau"), py::arg("gamma"));
  m.def(
      "trotter_circuit",
      [](const SurrogateIsing& h, double tau, double gamma, int steps, const std::string& scheme) {
        return trotter_circuit(
            h, tau, gamma, steps,
            scheme == "first-order" ? TrotterScheme::FirstOrder : TrotterScheme::Strang);
      },
      py::arg("h"), py::arg("tau"), py::arg("gamma"), py::arg("steps"),
      py::arg("scheme") = "strang");
  m.def("proposal_distribution", [](const Eigen::MatrixXcd& U, const std::vector<int>& v) {
    return proposal_distribution(U, to_config(v));
  });

  m.def(
      "transition_matrix",
      [](const std::string& kind_name, const RbmParameters& X, double tau, double gamma, int steps,
         const std::string& scheme, const std::vector<double>& tau_grid, std::uint64_t seed) {
        const ProposalKind kind =
            proposal_from_name(kind_name, tau, gamma, steps, scheme, tau_grid);
        const SurrogateIsing h = surrogate_from_rbm(X);
        const ProposalContext ctx = ProposalContext::prepare(kind, X.n(), &h, seed);
        return build_transition_matrix(kind, BornWeight{X}, ctx).entries;
      },
      py::arg("kind"), py::arg("X"), py::arg("tau") = 2.0, py::arg("gamma") = 0.4,
      py::arg("steps") = 8, py::arg("scheme") = "strang",
      py::arg("tau_grid") = std::vector<double>{0.6, 1.2, 1.8, 2.4, 3.0}, py::arg("seed") = 1);
  m.def("spectral_gap", [](const Eigen::MatrixXd& T) {
    const GapRecord rec = spectral_gap(TransitionMatrix{T});
    return py::make_tuple(rec.delta, rec.lambda_moduli);
  });

  m.def(
      "train_rbm",
      [](const PauliSum& H, int hidden, const std::string& kind_name, int iterations, int samples,
         double learning_rate, std::uint64_t seed, double tau, double gamma) {
        VmcConfig cfg;
        cfg.kind = proposal_from_name(kind_name, tau, gamma, 8, "strang", {0.6, 1.2, 1.8});
        cfg.iterations = iterations;
        cfg.samples_per_iteration = samples;
        cfg.learning_rate = learning_rate;
        cfg.seed = seed;
        RngStream init(seed, "vmc-init", 0);
        const TrainResult result =
            train(H, RbmParameters::near_zero_init(H.size(), hidden, 0.01, init), cfg);
        py::dict trace;
        trace["energy_mean"] = result.trace.energy_mean;
        trace["energy_variance"] = result.trace.energy_variance;
        trace["acceptance_rate"] = result.trace.acceptance_rate;
        trace["parameter_norm"] = result.trace.parameter_norm;
        return py::make_tuple(result.X, trace);
      },
      py::arg("H"), py::arg("hidden"), py::arg("kind") = "time-homogeneous",
      py::arg("iterations") = 200, py::arg("samples") = 1024, py::arg("learning_rate") = 0.02,
      py::arg("seed") = 1, py::arg("tau") = 2.0, py::arg("gamma") = 0.4);
  m.def("local_energy", [](const PauliSum& H, const RbmParameters& X, const std::vector<int>& v) {
    return local_energy(H, X, to_config(v));
  });

  m.def("otoc_direct",
        [](const RbmParameters& X, int k, int m, const std::string& alpha, const std::string& beta,
           Complex kappa1, Complex kappa2, double t) {
          auto axis = [](const std::string& s) {
            if (s == "x") return Axis::X;
            if (s == "y") return Axis::Y;
            throw std::invalid_argument("axis must be 'x' or 'y'");
          };
          return otoc_direct(X, k, m, axis(alpha), axis(beta), kappa1, kappa2, t).value;
        },
        py::arg("X"), py::arg("k"), py::arg("m"), py::arg("alpha") = "x", py::arg("beta") = "x",
        py::arg("kappa1") = Complex{0.0, 0.0}, py::arg("kappa2") = Complex{0.0, 0.0},
        py::arg("t") = 0.0);
  m.def("otoc_closed_form", [](const RbmParameters& X, int k, int m, double t) {
    return otoc_closed_form(X, k, m, t).value;
  });
  m.def("eta_covariance", &eta_covariance);
  m.def("eta_from_otocs", &eta_from_otocs);
  m.def("mutual_information", &mutual_information);
  m.def("lb_eta", &lb_eta);
  m.def("ub_eta", &ub_eta);
  m.def("i_eta_scan", [](const RbmParameters& X) {
    py::list out;
    for (const auto& pt : i_eta_scan(X)) {
      py::dict d;
      d["k"] = pt.k;
      d["m"] = pt.m;
      d["eta"] = pt.eta;
      d["mi"] = pt.mi;
      d["lb"] = pt.lb;
      d["ub"] = pt.ub;
      out.append(d);
    }
    return out;
  });

  m.def("run_experiment_file", [](const std::string& config_path) {
    const RunManifest manifest = run_experiment(parse_config(config_path));
    py::dict d;
    d["experiment"] = manifest.experiment;
    d["artifacts"] = manifest.artifacts;
    d["summary"] = manifest.summary_json;
    return d;
  });
}
