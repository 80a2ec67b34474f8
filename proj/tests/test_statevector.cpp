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

#include "oracles.hpp"
#include "qvmc/rng.hpp"
#include "qvmc/statevector.hpp"

using namespace qvmc;

namespace {

SurrogateIsing random_surrogate(int n, RngStream& rng, double scale = 1.0) {
  SurrogateIsing h = SurrogateIsing::zero(n);
  for (int i = 0; i < n; ++i) h.fields(i) = scale * (2.0 * rng.uniform() - 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double J = scale * (2.0 * rng.uniform() - 1.0);
      h.couplings(i, j) = J;
      h.couplings(j, i) = J;
    }
  return h;
}

// dense single-gate matrices for the composition oracle
Eigen::MatrixXcd gate_dense(int n, const Gate& gate) {
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::MatrixXcd M(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    Statevector basis;
    basis.n = n;
    basis.amplitudes = Eigen::VectorXcd::Zero(dim);
    basis.amplitudes(col) = 1.0;
    M.col(col) = apply_gate(basis, gate).amplitudes;
  }
  return M;
}

}  // namespace

TEST_CASE("exact_propagator limits") {
  RngStream rng(21, "prop", 0);
  const SurrogateIsing h = random_surrogate(3, rng);

  SUBCASE("tau = 0 is the identity") {
    const Eigen::MatrixXcd U = exact_propagator(h, 0.0, 0.5);
    CHECK((U - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("gamma = 1 is a diagonal phase and the chain never moves") {
    const Eigen::MatrixXcd U = exact_propagator(h, 1.3, 1.0);
    Eigen::MatrixXcd off = U;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
    const auto v = SpinConfiguration({1, -1, 1});
    const Eigen::VectorXd probs = proposal_distribution(U, v);
    CHECK(probs(static_cast<std::int64_t>(v.to_index())) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("gamma = 0, tau = pi/2 flips every spin") {
    const Eigen::MatrixXcd U = exact_propagator(h, 1.5707963267948966, 0.0);
    const auto v = SpinConfiguration({1, 1, -1});
    const Eigen::VectorXd probs = proposal_distribution(U, v);
    const auto flipped = SpinConfiguration({-1, -1, 1});
    CHECK(probs(static_cast<std::int64_t>(flipped.to_index())) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("unitary and symmetric") {
    const Eigen::MatrixXcd U = exact_propagator(h, 0.9, 0.45);
    CHECK(is_unitary(U, 1e-10));
    CHECK((U - U.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }

  CHECK_THROWS_AS(exact_propagator(h, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(exact_propagator(h, 1.0, -0.1), std::domain_error);
}

TEST_CASE("trotter_circuit") {
  RngStream rng(22, "trotter", 0);
  const SurrogateIsing h = random_surrogate(4, rng);

  SUBCASE("single generator is exact for any step count") {
    const Eigen::MatrixXcd exact = exact_propagator(h, 1.1, 1.0);
    for (int steps : {1, 3, 7}) {
      const Eigen::MatrixXcd U = trotter_circuit(h, 1.1, 1.0, steps, TrotterScheme::FirstOrder);
      CHECK((U - exact).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("strang splitting is symmetric") {
    const Eigen::MatrixXcd U = trotter_circuit(h, 1.0, 0.5, 5, TrotterScheme::Strang);
    CHECK((U - U.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(is_unitary(U, 1e-10));
  }

  SUBCASE("error halves (first order) and quarters (strang) when doubling steps") {
    const Eigen::MatrixXcd exact = exact_propagator(h, 1.0, 0.5);
    const double e10 =
        (trotter_circuit(h, 1.0, 0.5, 10, TrotterScheme::FirstOrder) - exact).norm();
    const double e20 =
        (trotter_circuit(h, 1.0, 0.5, 20, TrotterScheme::FirstOrder) - exact).norm();
    const double ratio_first = e10 / e20;
    CHECK(ratio_first > 1.6);
    CHECK(ratio_first < 2.4);

    const double s10 = (trotter_circuit(h, 1.0, 0.5, 10, TrotterScheme::Strang) - exact).norm();
    const double s20 = (trotter_circuit(h, 1.0, 0.5, 20, TrotterScheme::Strang) - exact).norm();
    const double ratio_strang = s10 / s20;
    CHECK(ratio_strang > 3.2);
    CHECK(ratio_strang < 4.8);
  }

  CHECK_THROWS_AS(trotter_circuit(h, 1.0, 0.5, 0, TrotterScheme::FirstOrder), std::domain_error);
}

TEST_CASE("apply_gate") {
  SUBCASE("X flips the addressed spin") {
    const auto v = SpinConfiguration({1, 1, 1});
    const Statevector flipped = apply_gate(Statevector::basis_state(v), XGate{0});
    const auto expect = SpinConfiguration({-1, 1, 1});
    CHECK(std::abs(flipped.amplitudes(static_cast<std::int64_t>(expect.to_index())) -
                   Complex{1.0, 0.0}) < 1e-15);
  }

  SUBCASE("Rz(2 pi) changes no probabilities") {
    RngStream rng(23, "gates", 0);
    Statevector state;
    state.n = 2;
    state.amplitudes = Eigen::VectorXcd::Zero(4);
    for (int i = 0; i < 4; ++i) state.amplitudes(i) = Complex{rng.normal(), rng.normal()};
    state.amplitudes.normalize();
    const Statevector rotated = apply_gate(state, RzGate{2.0 * 3.14159265358979323846, 1});
    CHECK((rotated.amplitudes.cwiseAbs2() - state.amplitudes.cwiseAbs2()).cwiseAbs().maxCoeff() <
          1e-12);
    // global phase only: amplitudes divided by the phase agree
    const Complex phase = rotated.amplitudes(0) / state.amplitudes(0);
    CHECK((rotated.amplitudes - phase * state.amplitudes).norm() < 1e-12);
  }

  SUBCASE("random circuit agrees with the dense composition oracle") {
    RngStream rng(24, "gates", 1);
    const int n = 3;
    std::vector<Gate> circuit;
    for (int g = 0; g < 20; ++g) {
      const int q = static_cast<int>(rng.uniform_int(n));
      switch (rng.uniform_int(5)) {
        case 0: circuit.push_back(RxGate{rng.uniform() * 6.28, q}); break;
        case 1: circuit.push_back(RzGate{rng.uniform() * 6.28, q}); break;
        case 2: circuit.push_back(ZZPhaseGate{rng.uniform() * 6.28, q, (q + 1) % n}); break;
        case 3: circuit.push_back(HGate{q}); break;
        default: circuit.push_back(XGate{q}); break;
      }
    }
    Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(8, 8);
    for (const auto& gate : circuit) product = gate_dense(n, gate) * product;

    Statevector state;
    state.n = n;
    state.amplitudes = Eigen::VectorXcd::Zero(8);
    for (int i = 0; i < 8; ++i) state.amplitudes(i) = Complex{rng.normal(), rng.normal()};
    state.amplitudes.normalize();
    Statevector evolved = state;
    for (const auto& gate : circuit) evolved = apply_gate(evolved, gate);
    CHECK((evolved.amplitudes - product * state.amplitudes).norm() < 1e-11);
    CHECK(evolved.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("out-of-range qubit throws") {
    const Statevector s = Statevector::basis_state(SpinConfiguration({1, 1}));
    CHECK_THROWS_AS(apply_gate(s, XGate{2}), std::domain_error);
    CHECK_THROWS_AS(apply_gate(s, ZZPhaseGate{0.1, 0, 0}), std::domain_error);
  }
}

TEST_CASE("proposal_distribution and sampling") {
  RngStream rng(25, "proposal", 0);

  SUBCASE("identity operator is a point mass") {
    const Eigen::MatrixXcd U = Eigen::MatrixXcd::Identity(8, 8);
    const auto v = SpinConfiguration({-1, 1, -1});
    const Eigen::VectorXd probs = proposal_distribution(U, v);
    CHECK(probs(static_cast<std::int64_t>(v.to_index())) == 1.0);
    RngStream draw_rng(26, "proposal", 1);
    for (int rep = 0; rep < 10; ++rep) CHECK(sample_proposal(U, v, draw_rng) == v);
  }

  SUBCASE("random unitary columns reproduce the distribution") {
    const Eigen::MatrixXcd U = haar_unitary(3, 99);
    const auto v = SpinConfiguration({1, -1, 1});
    const Eigen::VectorXd probs = proposal_distribution(U, v);
    CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const Eigen::VectorXd direct = U.col(static_cast<std::int64_t>(v.to_index())).cwiseAbs2();
    CHECK((probs - direct).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("empirical frequencies match within multinomial error") {
    const Eigen::MatrixXcd U = haar_unitary(3, 123);
    const auto v = SpinConfiguration({1, 1, -1});
    const Eigen::VectorXd probs = proposal_distribution(U, v);
    RngStream draw_rng(27, "proposal", 2);
    const int count = 100000;
    Eigen::VectorXd freq = Eigen::VectorXd::Zero(8);
    for (int rep = 0; rep < count; ++rep)
      freq(static_cast<std::int64_t>(sample_proposal(U, v, draw_rng).to_index())) += 1.0;
    freq /= count;
    for (int i = 0; i < 8; ++i) {
      const double sigma = std::sqrt(probs(i) * (1.0 - probs(i)) / count);
      CHECK(std::abs(freq(i) - probs(i)) < 3.5 * sigma + 1e-9);
    }
  }

  SUBCASE("a non-unitary operator is rejected") {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(4, 4) * 0.5;
    CHECK_THROWS_AS(proposal_distribution(M, SpinConfiguration({1, 1})), std::invalid_argument);
  }
}

TEST_CASE("haar unitary is unitary and seed-deterministic") {
  const Eigen::MatrixXcd U1 = haar_unitary(3, 7);
  const Eigen::MatrixXcd U2 = haar_unitary(3, 7);
  const Eigen::MatrixXcd U3 = haar_unitary(3, 8);
  CHECK(is_unitary(U1, 1e-10));
  CHECK((U1 - U2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((U1 - U3).cwiseAbs().maxCoeff() > 1e-3);
}
