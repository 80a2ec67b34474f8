# Copyright 2026 The qvmc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the _qvmc extension module."""

import math
import unittest

import numpy as np

import _qvmc as q


class PauliTests(unittest.TestCase):
    def test_tfim_ground_state(self):
        H = q.build_tfim(4, 1.0, 1.0, False)
        self.assertTrue(H.is_hermitian())
        energy, vector = q.exact_ground_state(H)
        dense = q.dense_matrix(H)
        residual = np.linalg.norm(dense @ vector - energy * vector)
        self.assertLess(residual, 1e-10)
        # ground energy matches a direct numpy diagonalization
        eigs = np.linalg.eigvalsh(dense)
        self.assertAlmostEqual(energy, eigs[0], places=10)

    def test_parse_round_trip(self):
        text = "qubits 2\n-1 0 Z0 Z1\n0.5 0 X0\n"
        H = q.parse_pauli_sum(text)
        again = q.parse_pauli_sum(q.serialize_pauli_sum(H))
        self.assertTrue(
            np.allclose(np.asarray(q.dense_matrix(H)), np.asarray(q.dense_matrix(again)))
        )

    def test_parse_error(self):
        with self.assertRaises(ValueError):
            q.parse_pauli_sum("qubits 2\n1.0 0.0 Z0 Z0\n")

    def test_connected_elements(self):
        H = q.parse_pauli_sum("qubits 1\n-1 0 X0\n")
        elements = q.connected_elements(H, [1])
        self.assertEqual(len(elements), 1)
        self.assertEqual(elements[0][0], [-1])
        self.assertAlmostEqual(elements[0][1], -1.0)


class RbmTests(unittest.TestCase):
    def test_log_psi_zero_parameters(self):
        X = q.RbmParameters.zeros(3, 4)
        self.assertAlmostEqual(q.log_psi(X, [1, -1, 1]).real, 4 * math.log(2.0), places=12)

    def test_log_derivatives_shape(self):
        X = q.RbmParameters.zeros(2, 3)
        d = np.asarray(q.log_derivatives(X, [1, -1]))
        self.assertEqual(d.shape, (2 + 3 + 6,))
        self.assertAlmostEqual(d[0].real, 1.0)
        self.assertAlmostEqual(d[1].real, -1.0)

    def test_thermal_diagonal_normalized(self):
        a = np.array([0.3 + 0j, -0.1 + 0j])
        b = np.array([0.2 + 0j])
        W = np.array([[0.5 + 0j], [-0.4 + 0j]])
        X = q.RbmParameters(a, b, W)
        diag = np.asarray(q.thermal_diagonal(X))
        self.assertAlmostEqual(diag.sum(), 1.0, places=12)
        self.assertTrue((diag > 0).all())


class SamplerTests(unittest.TestCase):
    def test_propagator_is_unitary_and_symmetric(self):
        X = q.RbmParameters.zeros(3, 3)
        h = q.surrogate_from_rbm(X)
        U = np.asarray(q.exact_propagator(h, 1.3, 0.5))
        self.assertLess(np.abs(U @ U.conj().T - np.eye(8)).max(), 1e-10)
        self.assertLess(np.abs(U - U.T).max(), 1e-10)

    def test_transition_matrix_stationarity(self):
        rng = np.random.default_rng(4)
        n = 3
        a = rng.uniform(-0.5, 0.5, n).astype(complex)
        b = rng.uniform(-0.5, 0.5, n).astype(complex)
        W = rng.uniform(-0.3, 0.3, (n, n)).astype(complex)
        X = q.RbmParameters(a, b, W)
        T = np.asarray(q.transition_matrix("time-homogeneous", X))
        self.assertTrue(np.allclose(T.sum(axis=1), 1.0, atol=1e-12))
        # stationary distribution from the Born weights
        logs = np.array([2.0 * q.log_psi(X, list(map(int, s))).real for s in spin_basis(n)])
        pi = np.exp(logs - logs.max())
        pi /= pi.sum()
        self.assertLess(np.abs(pi @ T - pi).sum(), 1e-10)
        delta, moduli = q.spectral_gap(T)
        self.assertGreaterEqual(delta, 0.0)
        self.assertAlmostEqual(moduli[0], 1.0, places=10)


def spin_basis(n):
    for idx in range(2**n):
        yield [1 if (idx >> (n - 1 - i)) & 1 == 0 else -1 for i in range(n)]


class VmcTests(unittest.TestCase):
    def test_train_small_tfim(self):
        H = q.build_tfim(3, 1.0, 1.0, False)
        exact, _ = q.exact_ground_state(H)
        X, trace = q.train_rbm(H, hidden=3, iterations=150, samples=512, seed=3)
        self.assertEqual(len(trace["energy_mean"]), 150)
        final = trace["energy_mean"][-1]
        self.assertLess(abs(final - exact) / abs(exact), 0.05)


class OtocTests(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(11)
        n = p = 3
        a = rng.uniform(-0.5, 0.5, n).astype(complex)
        b = rng.uniform(-0.5, 0.5, p).astype(complex)
        W = rng.uniform(-0.5, 0.5, (n, p)).astype(complex)
        self.X = q.RbmParameters(a, b, W)

    def test_closed_form_matches_direct(self):
        for t in (0.3, 0.9, 1.7):
            direct = q.otoc_direct(self.X, 1, 2, "x", "y", t=t)
            closed = q.otoc_closed_form(self.X, 1, 2, t)
            self.assertLess(abs(direct - closed), 1e-9)

    def test_eta_reconstruction(self):
        eta = q.eta_covariance(self.X, 0, 1)
        self.assertLess(abs(q.eta_from_otocs(self.X, 0, 1) - eta), 1e-8)

    def test_bounds_contain_scan_points(self):
        for pt in q.i_eta_scan(self.X):
            self.assertLessEqual(pt["lb"] - 1e-10, pt["mi"])
            self.assertLessEqual(pt["mi"], pt["ub"] + 1e-10)

    def test_bound_values(self):
        self.assertAlmostEqual(q.lb_eta(0.0), 0.0)
        self.assertAlmostEqual(q.ub_eta(0.0), 0.0)
        self.assertAlmostEqual(q.ub_eta(1.0), 1.0)
        # tighter than the generic quadratic bound
        for eta in np.linspace(-1, 1, 101):
            self.assertGreaterEqual(q.lb_eta(eta) + 1e-12, eta * eta / (2 * math.log(2)))


if __name__ == "__main__":
    unittest.main(verbosity=2)
