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

#include "qvmc/otoc.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <limits>

#include "qvmc/errors.hpp"
#include "qvmc/parallel.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {

void check_pair(const RbmParameters& X, int k, int m) {
  if (k < 0 || k >= X.n()) throw std::domain_error("visible index out of range");
  if (m < 0 || m >= X.p()) throw std::domain_error("hidden index out of range");
}

// Joint distribution of (Z_vk, Z_hm) over 4 cells indexed 2*bit_v + bit_h,
// bit 0 meaning spin +1, from the exact thermal diagonal.
Eigen::Vector4d pair_cells_exact(const RbmParameters& X, int k, int m) {
  const ThermalState state = thermal_state(X);
  const int n = X.n();
  const int p = X.p();
  Eigen::Vector4d cells = Eigen::Vector4d::Zero();
  for (std::int64_t idx = 0; idx < state.diagonal.size(); ++idx) {
    const int bit_v = static_cast<int>((idx >> (n + p - 1 - k)) & 1);
    const int bit_h = static_cast<int>((idx >> (p - 1 - m)) & 1);
    cells(2 * bit_v + bit_h) += state.diagonal(idx);
  }
  return cells;
}

double cells_covariance(const Eigen::Vector4d& cells) {
  // spin values: bit 0 -> +1, bit 1 -> -1
  const double mv = cells(0) + cells(1) - cells(2) - cells(3);
  const double mh = cells(0) - cells(1) + cells(2) - cells(3);
  const double r = cells(0) - cells(1) - cells(2) + cells(3);
  return r - mv * mh;
}

double pair_zz_exact(const RbmParameters& X, int k, int m) {
  const Eigen::Vector4d cells = pair_cells_exact(X, k, m);
  return cells(0) - cells(1) - cells(2) + cells(3);
}

Eigen::MatrixXcd pauli_site_dense(int num_qubits, int qubit, Axis axis) {
  const std::int64_t dim = std::int64_t{1} << num_qubits;
  const std::int64_t bit = std::int64_t{1} << (num_qubits - 1 - qubit);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::int64_t col = 0; col < dim; ++col) {
    const bool set = (col & bit) != 0;
    switch (axis) {
      case Axis::Z:
        M(col, col) = set ? -1.0 : 1.0;
        break;
      case Axis::X:
        M(col ^ bit, col) = 1.0;
        break;
      case Axis::Y:
        M(col ^ bit, col) = set ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
        break;
    }
  }
  return M;
}

constexpr double kLn2 = 0.69314718055994530941723212145818;

double entropy_bits_from_probs(const Eigen::VectorXd& probs) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double x = probs(i);
    if (x > 1e-15) s -= x * std::log(x);
  }
  return s / kLn2;
}

double binary_entropy_bits(double x) {
  double s = 0.0;
  if (x > 1e-15) s -= x * std::log(x);
  if (1.0 - x > 1e-15) s -= (1.0 - x) * std::log(1.0 - x);
  return s / kLn2;
}

double mi_bits_from_cells(const Eigen::Vector4d& cells) {
  const std::array<double, 2> pv{cells(0) + cells(1), cells(2) + cells(3)};
  const std::array<double, 2> ph{cells(0) + cells(2), cells(1) + cells(3)};
  double mi = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double c = cells(2 * i + j);
      if (c > 1e-15) mi += c * std::log(c / (pv[static_cast<std::size_t>(i)] *
                                               ph[static_cast<std::size_t>(j)]));
    }
  return std::max(mi / kLn2, 0.0);
}

}  // namespace

OtocValue otoc_direct(const RbmParameters& X, int k, int m, Axis alpha, Axis beta, Complex kappa1,
                      Complex kappa2, double t) {
  check_pair(X, k, m);
  if (alpha == Axis::Z || beta == Axis::Z)
    throw std::domain_error("OTOC operators act along x or y");
  if (!X.real_valued()) throw std::invalid_argument("OTOC requires real parameters");
  const int n = X.n();
  const int p = X.p();
  const int total = n + p;
  if (total > kOtocDenseQubitCap)
    throw ResourceError("dense OTOC on " + std::to_string(total) + " qubits exceeds the " +
                        std::to_string(kOtocDenseQubitCap) + "-qubit cap");
  const std::int64_t dim = std::int64_t{1} << total;

  const Eigen::VectorXd energies = learner_diagonal_energies(X);
  const ThermalState state = thermal_state(X);

  // Heisenberg evolution under the diagonal H: s(t) = e^{-iHt} s e^{+iHt}
  Eigen::VectorXcd evolve(dim);
  for (std::int64_t i = 0; i < dim; ++i) evolve(i) = std::polar(1.0, -energies(i) * t);

  Eigen::MatrixXcd shifted_a = pauli_site_dense(total, k, alpha);
  shifted_a.diagonal().array() -= kappa1;

  Eigen::MatrixXcd shifted_b = pauli_site_dense(total, n + m, beta);
  shifted_b = evolve.asDiagonal() * shifted_b * evolve.conjugate().asDiagonal();
  shifted_b.diagonal().array() -= kappa2;

  const Eigen::MatrixXcd half = shifted_a * shifted_b;
  // Tr[rho (AB)(AB)] with diagonal rho
  const Complex value =
      (state.diagonal.cast<Complex>().asDiagonal() * half).cwiseProduct(half.transpose()).sum();

  OtocValue out;
  out.value = value;
  out.t = t;
  out.tau = 4.0 * X.W(k, m).real() * t;
  out.k = k;
  out.m = m;
  return out;
}

OtocValue otoc_closed_form(const RbmParameters& X, int k, int m, double t) {
  check_pair(X, k, m);
  if (!X.real_valued()) throw std::invalid_argument("OTOC requires real parameters");
  OtocValue out;
  out.t = t;
  out.tau = 4.0 * X.W(k, m).real() * t;
  out.k = k;
  out.m = m;
  double correlator;
  if (X.n() + X.p() <= kDenseQubitCap) {
    correlator = pair_zz_exact(X, k, m);
  } else {
    RngStream stream(0x07c0c5eedULL, "otoc-correlator", (static_cast<std::uint64_t>(k) << 20) |
                                                            static_cast<std::uint64_t>(m));
    const auto samples = gibbs_sample_joint(X, 100000, stream);
    double sum = 0.0, sq = 0.0;
    for (const auto& s : samples) {
      const double zz = static_cast<double>(s.v.spin(k) * s.h.spin(m));
      sum += zz;
      sq += zz * zz;
    }
    const double count = static_cast<double>(samples.size());
    correlator = sum / count;
    out.correlator_stderr =
        std::sqrt(std::max(sq / count - correlator * correlator, 0.0) / count);
  }
  out.value = Complex{std::cos(out.tau), correlator * std::sin(out.tau)};
  return out;
}

double eta_covariance(const RbmParameters& X, int k, int m) {
  check_pair(X, k, m);
  if (!X.real_valued()) throw std::invalid_argument("eta requires real parameters");
  return cells_covariance(pair_cells_exact(X, k, m));
}

double eta_from_otocs(const RbmParameters& X, int k, int m) {
  check_pair(X, k, m);
  const double w = X.W(k, m).real();
  if (w == 0.0) throw std::domain_error("W_km = 0: the special time is undefined");
  const double t1 = 3.14159265358979323846264338328 / (8.0 * std::abs(w));
  const double sign = w > 0.0 ? 1.0 : -1.0;

  const Eigen::Vector4d cells = pair_cells_exact(X, k, m);
  const double mean_v = cells(0) + cells(1) - cells(2) - cells(3);
  const double mean_h = cells(0) - cells(1) + cells(2) - cells(3);
  const Complex kappa1 = std::sqrt(Complex{0.0, 1.0} * mean_v);
  const Complex kappa2 = std::sqrt(Complex{0.0, 1.0} * mean_h);

  const Complex c00 = otoc_direct(X, k, m, Axis::X, Axis::X, 0.0, 0.0, t1).value;
  const Complex c10 = otoc_direct(X, k, m, Axis::X, Axis::X, kappa1, 0.0, t1).value;
  const Complex c01 = otoc_direct(X, k, m, Axis::X, Axis::X, 0.0, kappa2, t1).value;
  const Complex c11 = otoc_direct(X, k, m, Axis::X, Axis::X, kappa1, kappa2, t1).value;

  // -i s C00 recovers the correlator carried by the imaginary part;
  // C00 - C10 - C01 + C11 = kappa1^2 kappa2^2 = -<Zv><Zh>.
  const Complex eta = Complex{0.0, -sign} * c00 + (c00 - c10 - c01 + c11);
  if (std::abs(eta.imag()) > 1e-8)
    throw std::runtime_error("eta reconstruction carries imaginary part " +
                             std::to_string(eta.imag()));
  return eta.real();
}

ReducedDensityMatrices reduced_density_matrices(const RbmParameters& X, int k, int m) {
  check_pair(X, k, m);
  const Eigen::Vector4d cells = pair_cells_exact(X, k, m);
  ReducedDensityMatrices out;
  out.rho_vh = Eigen::MatrixXcd::Zero(4, 4);
  for (int c = 0; c < 4; ++c) out.rho_vh(c, c) = cells(c);
  out.rho_v = Eigen::MatrixXcd::Zero(2, 2);
  out.rho_v(0, 0) = cells(0) + cells(1);
  out.rho_v(1, 1) = cells(2) + cells(3);
  out.rho_h = Eigen::MatrixXcd::Zero(2, 2);
  out.rho_h(0, 0) = cells(0) + cells(2);
  out.rho_h(1, 1) = cells(1) + cells(3);
  return out;
}

namespace {

Eigen::VectorXd density_eigenvalues(const Eigen::MatrixXcd& rho, const char* name) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument(std::string(name) + " is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument(std::string(name) + " does not have unit trace");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  const Eigen::VectorXd eigs = solver.eigenvalues();
  if (eigs.minCoeff() < -1e-10)
    throw std::invalid_argument(std::string(name) + " is not positive semidefinite");
  return eigs.cwiseMax(0.0);
}

}  // namespace

double mutual_information(const Eigen::MatrixXcd& rho_v, const Eigen::MatrixXcd& rho_h,
                          const Eigen::MatrixXcd& rho_vh) {
  const double sv = entropy_bits_from_probs(density_eigenvalues(rho_v, "rho_v"));
  const double sh = entropy_bits_from_probs(density_eigenvalues(rho_h, "rho_h"));
  const double svh = entropy_bits_from_probs(density_eigenvalues(rho_vh, "rho_vh"));
  const double mi = sv + sh - svh;
  if (mi < -1e-9) throw std::invalid_argument("negative mutual information: inconsistent states");
  return std::max(mi, 0.0);
}

double lb_eta(double eta) {
  const double mag = std::abs(eta);
  if (mag > 1.0 + 1e-12) throw std::domain_error("lb_eta needs |eta| <= 1");
  return 1.0 - binary_entropy_bits(0.5 * (1.0 + std::min(mag, 1.0)));
}

double ub_eta(double eta) {
  const double mag = std::abs(eta);
  if (mag > 1.0 + 1e-12) throw std::domain_error("ub_eta needs |eta| <= 1");
  return binary_entropy_bits(0.5 + 0.5 * std::sqrt(std::max(1.0 - mag, 0.0)));
}

namespace {

IEtaPoint point_from_cells(int k, int m, const Eigen::Vector4d& cells) {
  IEtaPoint pt;
  pt.k = k;
  pt.m = m;
  pt.eta = cells_covariance(cells);
  pt.mi = mi_bits_from_cells(cells);
  if (std::abs(pt.eta) <= 1.0 + 1e-12) {
    pt.lb = lb_eta(pt.eta);
    pt.ub = ub_eta(pt.eta);
  } else {
    // out-of-domain covariance is reported, not clamped
    pt.lb = std::numeric_limits<double>::quiet_NaN();
    pt.ub = std::numeric_limits<double>::quiet_NaN();
  }
  return pt;
}

}  // namespace

std::vector<IEtaPoint> i_eta_scan(const RbmParameters& X, const IEtaScanOptions& options) {
  if (!X.real_valued()) throw std::invalid_argument("i_eta_scan requires real parameters");
  const int n = X.n();
  const int p = X.p();
  std::vector<IEtaPoint> points(static_cast<std::size_t>(n) * static_cast<std::size_t>(p));

  if (n + p <= kDenseQubitCap) {
    const ThermalState state = thermal_state(X);
    // one pass over the diagonal accumulates every pair's 2x2 cell table
    std::vector<Eigen::Vector4d> cells(points.size(), Eigen::Vector4d::Zero());
    for (std::int64_t idx = 0; idx < state.diagonal.size(); ++idx) {
      const double weight = state.diagonal(idx);
      for (int k = 0; k < n; ++k) {
        const int bit_v = static_cast<int>((idx >> (n + p - 1 - k)) & 1);
        for (int m = 0; m < p; ++m) {
          const int bit_h = static_cast<int>((idx >> (p - 1 - m)) & 1);
          cells[static_cast<std::size_t>(k * p + m)](2 * bit_v + bit_h) += weight;
        }
      }
    }
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < p; ++m)
        points[static_cast<std::size_t>(k * p + m)] =
            point_from_cells(k, m, cells[static_cast<std::size_t>(k * p + m)]);
    return points;
  }

  // sampling fallback: joint Gibbs samples shared by all pairs
  RngStream stream(options.seed, "ieta-gibbs", 0);
  const auto samples = gibbs_sample_joint(X, options.sample_count, stream);
  const double count = static_cast<double>(samples.size());
  parallel_for(n * p, options.workers, [&](int flat) {
    const int k = flat / p;
    const int m = flat % p;
    Eigen::Vector4d cells = Eigen::Vector4d::Zero();
    for (const auto& s : samples) {
      const int bit_v = s.v.spin(k) == 1 ? 0 : 1;
      const int bit_h = s.h.spin(m) == 1 ? 0 : 1;
      cells(2 * bit_v + bit_h) += 1.0;
    }
    cells /= count;
    IEtaPoint pt = point_from_cells(k, m, cells);
    // delta-method standard errors on eta and I
    const double mv = cells(0) + cells(1) - cells(2) - cells(3);
    const double mh = cells(0) - cells(1) + cells(2) - cells(3);
    double var_eta = 0.0;
    double mi_sq = 0.0;
    const std::array<double, 2> pv{cells(0) + cells(1), cells(2) + cells(3)};
    const std::array<double, 2> ph{cells(0) + cells(2), cells(1) + cells(3)};
    for (int c = 0; c < 4; ++c) {
      const int sv = (c >> 1) ? -1 : 1;
      const int sh = (c & 1) ? -1 : 1;
      const double g = sv * sh - mh * sv - mv * sh;  // d eta / d count_c direction
      var_eta += cells(c) * g * g;
      if (cells(c) > 1e-15) {
        const double phi = std::log(cells(c) / (pv[static_cast<std::size_t>(c >> 1)] *
                                                ph[static_cast<std::size_t>(c & 1)])) /
                           kLn2;
        mi_sq += cells(c) * phi * phi;
      }
    }
    double mean_g = 0.0;
    for (int c = 0; c < 4; ++c) {
      const int sv = (c >> 1) ? -1 : 1;
      const int sh = (c & 1) ? -1 : 1;
      mean_g += cells(c) * (sv * sh - mh * sv - mv * sh);
    }
    var_eta -= mean_g * mean_g;
    pt.eta_stderr = std::sqrt(std::max(var_eta, 0.0) / count);
    pt.mi_stderr = std::sqrt(std::max(mi_sq - pt.mi * pt.mi, 0.0) / count);
    points[static_cast<std::size_t>(flat)] = pt;
  });
  return points;
}

}  // namespace qvmc
