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

#include <vector>

#include "qvmc/rbm.hpp"

namespace qvmc {

/// Dense-operator routines materialize 2^{n+p} square matrices, so they stop
/// below the global diagonal cap.
inline constexpr int kOtocDenseQubitCap = 12;

struct OtocValue {
  Complex value;
  double t = 0.0;
  double tau = 0.0;  // 4 W_km t
  int k = 0;
  int m = 0;
  double correlator_stderr = 0.0;  // nonzero only when the correlator was sampled
};

/// Out-of-time-order string <s~a(v_k,0) s~b(h_m,t) s~a(v_k,0) s~b(h_m,t)> in
/// the learner's thermal state, with shifted operators s~ = s - kappa I and
/// Heisenberg evolution s(t) = e^{-iHt} s e^{+iHt} under the diagonal learner
/// Hamiltonian. alpha, beta must be X or Y.
OtocValue otoc_direct(const RbmParameters& X, int k, int m, Axis alpha, Axis beta, Complex kappa1,
                      Complex kappa2, double t);

/// Closed form cos(tau) + i <Z(v_k) Z(h_m)> sin(tau), tau = 4 W_km t. The
/// correlator is exact below the diagonal cap and Gibbs-sampled above it.
OtocValue otoc_closed_form(const RbmParameters& X, int k, int m, double t);

/// eta = <Z(v_k) Z(h_m)> - <Z(v_k)><Z(h_m)> over the thermal diagonal.
double eta_covariance(const RbmParameters& X, int k, int m);

/// Reconstruction of eta from OTOCs at the special time t1 = pi/(8|W_km|)
/// with shifts kappa1 = sqrt(i<Z(v_k)>), kappa2 = sqrt(i<Z(h_m)>) (principal
/// branch). Throws std::domain_error when W_km = 0, and std::runtime_error if
/// the combination carries an imaginary part above 1e-8.
double eta_from_otocs(const RbmParameters& X, int k, int m);

struct ReducedDensityMatrices {
  Eigen::MatrixXcd rho_v;   // 2x2
  Eigen::MatrixXcd rho_h;   // 2x2
  Eigen::MatrixXcd rho_vh;  // 4x4, visible factor first
};

/// Partial traces of the thermal state onto (v_k), (h_m) and the pair; all
/// diagonal in the computational basis.
ReducedDensityMatrices reduced_density_matrices(const RbmParameters& X, int k, int m);

/// I = S(rho_v) + S(rho_h) - S(rho_vh) with entropies in bits; eigenvalues
/// below 1e-15 contribute zero. Validates Hermiticity, unit trace and
/// positivity of the inputs.
double mutual_information(const Eigen::MatrixXcd& rho_v, const Eigen::MatrixXcd& rho_h,
                          const Eigen::MatrixXcd& rho_vh);

/// Bounds of the convex (I, eta) region, in bits, for |eta| <= 1:
/// LB(eta) = 1 - H2((1+|eta|)/2), UB(eta) = H2(1/2 + sqrt(1-|eta|)/2).
double lb_eta(double eta);
double ub_eta(double eta);

struct IEtaPoint {
  int k = 0;
  int m = 0;
  double eta = 0.0;
  double mi = 0.0;
  double lb = 0.0;  // NaN when |eta| > 1 (reported, not clamped)
  double ub = 0.0;
  double eta_stderr = 0.0;
  double mi_stderr = 0.0;
};

struct IEtaScanOptions {
  int sample_count = 100000;  // Gibbs samples when n+p exceeds the cap
  std::uint64_t seed = 1;
  int workers = 0;
};

/// One point per visible-hidden pair (k, m), ordered by (k, m). Exact below
/// the diagonal cap, Gibbs-sampled with standard errors above it.
std::vector<IEtaPoint> i_eta_scan(const RbmParameters& X, const IEtaScanOptions& options = {});

}  // namespace qvmc
