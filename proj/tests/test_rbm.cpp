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

#include <doctest.h>

#include <cmath>

#include "qvmc/errors.hpp"
#include "qvmc/rbm.hpp"
#include "qvmc/rng.hpp"

using namespace qvmc;

namespace {

RbmParameters random_complex_rbm(int n, int p, RngStream& rng) {
  RbmParameters X = RbmParameters::zeros(n, p);
  for (int i = 0; i < n; ++i) X.a(i) = Complex{rng.normal() * 0.4, rng.normal() * 0.4};
  for (int j = 0; j < p; ++j) X.b(j) = Complex{rng.normal() * 0.4, rng.normal() * 0.4};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X.W(i, j) = Complex{rng.normal() * 0.4, rng.normal() * 0.4};
  return X;
}

// brute-force sum over all hidden configurations of exp(a.v + b.h + v.W.h)
Complex brute_force_psi(const RbmParameters& X, const SpinConfiguration& v) {
  const int p = X.p();
  Complex total{0.0, 0.0};
  for (std::uint64_t hidx = 0; hidx < (std::uint64_t{1} << p); ++hidx) {
    const auto h = SpinConfiguration::from_index(hidx, p);
    Complex expo{0.0, 0.0};
    for (int i = 0; i < X.n(); ++i) expo += X.a(i) * static_cast<double>(v.spin(i));
    for (int j = 0; j < p; ++j) expo += X.b(j) * static_cast<double>(h.spin(j));
    for (int i = 0; i < X.n(); ++i)
      for (int j = 0; j < p; ++j)
        expo += X.W(i, j) * static_cast<double>(v.spin(i) * h.spin(j));
    total += std::exp(expo);
  }
  return total;
}

}  // namespace

TEST_CASE("log_psi closed form") {
  const int n = 3, p = 4;
  RngStream rng(3, "logpsi", 0);

  SUBCASE("zero parameters give p ln 2 for every configuration") {
    const RbmParameters X = RbmParameters::zeros(n, p);
    for (int rep = 0; rep < 5; ++rep) {
      const auto v = SpinConfiguration::random(n, rng);
      CHECK(log_psi(X, v).real() == doctest::Approx(p * std::log(2.0)).epsilon(1e-14));
      CHECK(log_psi(X, v).imag() == 0.0);
    }
  }

  SUBCASE("decoupled layers reduce to the bias sum") {
    RbmParameters X = RbmParameters::zeros(n, p);
    X.a(0) = 0.3;
    X.a(1) = -1.2;
    X.a(2) = 0.9;
    const auto v = SpinConfiguration({1, -1, 1});
    const double expected = 0.3 - (-1.2) + 0.9 + p * std::log(2.0);
    CHECK(log_psi(X, v).real() == doctest::Approx(expected).epsilon(1e-14));
  }

  SUBCASE("matches the hidden-layer enumeration oracle") {
    for (int rep = 0; rep < 20; ++rep) {
      const RbmParameters X = random_complex_rbm(3, 3, rng);
      const auto v = SpinConfiguration::random(3, rng);
      const Complex direct = std::exp(log_psi(X, v));
      const Complex oracle = brute_force_psi(X, v);
      CHECK(std::abs(direct - oracle) < 1e-10 * std::abs(oracle));
    }
  }

  SUBCASE("large parameters stay finite") {
    RbmParameters X = RbmParameters::zeros(1, 1);
    X.b(0) = 500.0;
    X.W(0, 0) = 200.0;
    const Complex lp = log_psi(X, SpinConfiguration({1}));
    CHECK(std::isfinite(lp.real()));
    CHECK(lp.real() == doctest::Approx(700.0).epsilon(1e-12));
  }
}

TEST_CASE("log_derivatives") {
  RngStream rng(4, "derivs", 0);

  SUBCASE("bias derivatives at W = 0") {
    RbmParameters X = RbmParameters::zeros(2, 3);
    X.b(0) = 0.7;
    X.b(1) = -0.2;
    X.b(2) = 1.5;
    const auto d = log_derivatives(X, SpinConfiguration({1, -1}));
    CHECK(std::abs(d(2) - Complex{std::tanh(0.7), 0.0}) < 1e-15);
    CHECK(std::abs(d(3) - Complex{std::tanh(-0.2), 0.0}) < 1e-15);
    CHECK(std::abs(d(4) - Complex{std::tanh(1.5), 0.0}) < 1e-15);
  }

  SUBCASE("visible derivatives are the spins exactly") {
    const RbmParameters X = random_complex_rbm(4, 2, rng);
    const auto v = SpinConfiguration::random(4, rng);
    const auto d = log_derivatives(X, v);
    for (int i = 0; i < 4; ++i) CHECK(d(i) == Complex{static_cast<double>(v.spin(i)), 0.0});
  }

  SUBCASE("matches central finite differences") {
    const double step = 1e-6;
    for (int rep = 0; rep < 10; ++rep) {
      const RbmParameters X = random_complex_rbm(3, 3, rng);
      const auto v = SpinConfiguration::random(3, rng);
      const Eigen::VectorXcd d = log_derivatives(X, v);
      const Eigen::VectorXcd flat = X.flatten();
      for (int idx = 0; idx < X.parameter_count(); ++idx) {
        Eigen::VectorXcd up = flat, down = flat;
        up(idx) += step;
        down(idx) -= step;
        const Complex fd = (log_psi(RbmParameters::unflatten(up, 3, 3), v) -
                            log_psi(RbmParameters::unflatten(down, 3, 3), v)) /
                           (2.0 * step);
        CHECK(std::abs(fd - d(idx)) < 1e-6);
      }
    }
  }
}

TEST_CASE("learner_hamiltonian") {
  SUBCASE("zero parameters give the zero operator") {
    const PauliSum H = learner_hamiltonian(RbmParameters::zeros(2, 2));
    CHECK(H.normalized().terms().empty());
    CHECK(H.size() == 4);
  }

  SUBCASE("direct transcription for n = p = 1") {
    RbmParameters X = RbmParameters::zeros(1, 1);
    X.a(0) = 1.0;
    X.b(0) = 2.0;
    X.W(0, 0) = 3.0;
    const PauliSum H = learner_hamiltonian(X).normalized();
    REQUIRE(H.terms().size() == 3);
    CHECK(H.terms()[0].second == PauliString::single(0, Axis::Z));
    CHECK(H.terms()[0].first == Complex{1.0, 0.0});
    CHECK(H.terms()[1].second == PauliString::single(0, Axis::Z).set(1, Axis::Z));
    CHECK(H.terms()[1].first == Complex{3.0, 0.0});
    CHECK(H.terms()[2].second == PauliString::single(1, Axis::Z));
    CHECK(H.terms()[2].first == Complex{2.0, 0.0});
  }

  SUBCASE("dense form is diagonal with the classical energies") {
    RngStream rng(6, "learner", 0);
    RbmParameters X = RbmParameters::random(2, 2, 0.5, 0.5, 1.0, rng);
    const Eigen::MatrixXcd M = dense_matrix(learner_hamiltonian(X));
    for (std::uint64_t idx = 0; idx < 16; ++idx) {
      const auto joint = SpinConfiguration::from_index(idx, 4);
      const auto v = SpinConfiguration({joint.spin(0), joint.spin(1)});
      const auto h = SpinConfiguration({joint.spin(2), joint.spin(3)});
      CHECK(M(idx, idx).real() ==
            doctest::Approx(classical_energy(X, v, h)).epsilon(1e-13));
    }
    CHECK(M.cwiseAbs().sum() == doctest::Approx(M.diagonal().cwiseAbs().sum()).epsilon(1e-14));
  }

  SUBCASE("complex parameters are rejected") {
    RbmParameters X = RbmParameters::zeros(1, 1);
    X.W(0, 0) = Complex{0.0, 0.1};
    CHECK_THROWS_AS(learner_hamiltonian(X), std::invalid_argument);
    CHECK_THROWS_AS(thermal_state(X), std::invalid_argument);
  }
}

TEST_CASE("thermal_state") {
  SUBCASE("zero parameters give the maximally mixed state") {
    const ThermalState state = thermal_state(RbmParameters::zeros(2, 2));
    CHECK((state.diagonal.array() - 1.0 / 16.0).abs().maxCoeff() < 1e-14);
    CHECK(state.partition_log == doctest::Approx(std::log(16.0)).epsilon(1e-12));
  }

  SUBCASE("single visible bias gives the stated Gibbs weights") {
    const double t = 0.8;
    RbmParameters X = RbmParameters::zeros(1, 1);
    X.a(0) = t;
    const ThermalState state = thermal_state(X);
    const double z = 2.0 * std::exp(-t) + 2.0 * std::exp(t);
    CHECK(state.diagonal(0) == doctest::Approx(std::exp(-t) / z).epsilon(1e-12));
    CHECK(state.diagonal(1) == doctest::Approx(std::exp(-t) / z).epsilon(1e-12));
    CHECK(state.diagonal(2) == doctest::Approx(std::exp(t) / z).epsilon(1e-12));
    CHECK(state.diagonal(3) == doctest::Approx(std::exp(t) / z).epsilon(1e-12));
  }

  SUBCASE("diagonal matches the classical partition oracle") {
    RngStream rng(8, "thermal", 0);
    const RbmParameters X = RbmParameters::random(3, 3, 0.5, 0.5, 1.5, rng);
    const ThermalState state = thermal_state(X);
    CHECK(state.diagonal.sum() == doctest::Approx(1.0).epsilon(1e-12));
    double z = 0.0;
    for (std::uint64_t idx = 0; idx < 64; ++idx) {
      const auto joint = SpinConfiguration::from_index(idx, 6);
      const auto v = SpinConfiguration({joint.spin(0), joint.spin(1), joint.spin(2)});
      const auto h = SpinConfiguration({joint.spin(3), joint.spin(4), joint.spin(5)});
      z += std::exp(-classical_energy(X, v, h));
    }
    for (std::uint64_t idx = 0; idx < 64; ++idx) {
      const auto joint = SpinConfiguration::from_index(idx, 6);
      const auto v = SpinConfiguration({joint.spin(0), joint.spin(1), joint.spin(2)});
      const auto h = SpinConfiguration({joint.spin(3), joint.spin(4), joint.spin(5)});
      CHECK(state.diagonal(static_cast<std::int64_t>(idx)) ==
            doctest::Approx(std::exp(-classical_energy(X, v, h)) / z).epsilon(1e-10));
    }
    CHECK(state.partition_log == doctest::Approx(std::log(z)).epsilon(1e-12));

    // the thermal state commutes with the learner Hamiltonian (both diagonal)
    const Eigen::MatrixXcd H = dense_matrix(learner_hamiltonian(X));
    const Eigen::MatrixXcd rho = state.dense();
    CHECK((H * rho - rho * H).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("the wavefunction is the hidden marginal of the sign-flipped thermal state") {
  RngStream rng(9, "marginal", 0);
  for (int rep = 0; rep < 5; ++rep) {
    const RbmParameters X = RbmParameters::random(3, 2, 0.5, 0.5, 1.0, rng);
    RbmParameters minus = X;
    minus.a = -X.a;
    minus.b = -X.b;
    minus.W = -X.W;
    const Eigen::VectorXd marginal = thermal_state(X).visible_marginal();
    double ratio0 = 0.0;
    for (std::uint64_t vi = 0; vi < 8; ++vi) {
      const auto v = SpinConfiguration::from_index(vi, 3);
      const double psi = std::exp(log_psi(minus, v).real());
      const double ratio = psi / marginal(static_cast<std::int64_t>(vi));
      if (vi == 0) ratio0 = ratio;
      CHECK(ratio == doctest::Approx(ratio0).epsilon(1e-10));
    }
  }
}

TEST_CASE("gibbs_sample_joint") {
  SUBCASE("count zero gives an empty sequence") {
    RngStream rng(1, "gibbs", 0);
    CHECK(gibbs_sample_joint(RbmParameters::zeros(2, 2), 0, rng).empty());
  }

  SUBCASE("uniform target passes a chi-square test") {
    RngStream rng(2, "gibbs", 1);
    const auto samples = gibbs_sample_joint(RbmParameters::zeros(2, 2), 100000, rng);
    std::vector<int> counts(16, 0);
    for (const auto& s : samples) {
      const std::uint64_t idx = (s.v.to_index() << 2) | s.h.to_index();
      ++counts[static_cast<std::size_t>(idx)];
    }
    const double expected = 100000.0 / 16.0;
    double chi2 = 0.0;
    for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
    CHECK(chi2 < 37.70);  // 0.999 quantile of chi-square with 15 dof
  }

  SUBCASE("a saturated bias freezes the spin") {
    RbmParameters X = RbmParameters::zeros(2, 2);
    X.a(0) = 20.0;  // e^{-H} weighting favors spin -1
    RngStream rng(3, "gibbs", 2);
    for (const auto& s : gibbs_sample_joint(X, 500, rng)) CHECK(s.v.spin(0) == -1);
  }

  SUBCASE("empirical cells match the exact diagonal within 3 sigma") {
    RngStream instance_rng(4, "gibbs", 3);
    const RbmParameters X = RbmParameters::random(3, 3, 0.5, 0.5, 1.0, instance_rng);
    const ThermalState state = thermal_state(X);
    RngStream rng(5, "gibbs", 4);
    const int count = 100000;
    const auto samples = gibbs_sample_joint(X, count, rng);
    Eigen::VectorXd freq = Eigen::VectorXd::Zero(64);
    for (const auto& s : samples) freq((s.v.to_index() << 3) | s.h.to_index()) += 1.0;
    freq /= count;
    for (std::int64_t idx = 0; idx < 64; ++idx) {
      const double pexp = state.diagonal(idx);
      const double sigma = std::sqrt(std::max(pexp * (1.0 - pexp) / count, 1e-12));
      CHECK(std::abs(freq(idx) - pexp) < 3.2 * sigma);
    }
  }
}

TEST_CASE("rbm serialization round-trips") {
  RngStream rng(10, "rbmser", 0);
  RbmParameters X = RbmParameters::zeros(2, 3);
  for (int i = 0; i < 2; ++i) X.a(i) = Complex{rng.normal(), rng.normal()};
  for (int j = 0; j < 3; ++j) X.b(j) = Complex{rng.normal(), rng.normal()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) X.W(i, j) = Complex{rng.normal(), rng.normal()};
  const RbmParameters back = parse_rbm(serialize_rbm(X));
  CHECK(back == X);

  CHECK_THROWS_AS(parse_rbm("rbm 2\n"), ParseError);
  CHECK_THROWS_AS(parse_rbm("rbm 1 1\n0.5,0\n"), ParseError);  // too few entries
}

TEST_CASE("flatten and unflatten are inverse") {
  RngStream rng(12, "flat", 0);
  const RbmParameters X = random_complex_rbm(3, 2, rng);
  CHECK(RbmParameters::unflatten(X.flatten(), 3, 2) == X);
}
