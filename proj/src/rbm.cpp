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

#include "qvmc/rbm.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "qvmc/errors.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

namespace {

// log(2 cosh(z)) = |z| + log(1 + e^{-2|z|}), rewritten so the linear part
// carries the magnitude and the correction stays bounded. Real inputs stay
// exactly real.
Complex log_2cosh(Complex z) {
  if (z.imag() == 0.0) {
    const double x = std::abs(z.real());
    return Complex{x + std::log1p(std::exp(-2.0 * x)), 0.0};
  }
  const Complex w = (z.real() >= 0.0) ? z : -z;
  return w + std::log(1.0 + std::exp(-2.0 * w));
}

// tanh without overflow for large |Re z|.
Complex safe_tanh(Complex z) {
  const double x = z.real();
  if (x > 20.0) {
    const Complex t = std::exp(-2.0 * z);
    return (1.0 - t) / (1.0 + t);
  }
  if (x < -20.0) {
    const Complex t = std::exp(2.0 * z);
    return (t - 1.0) / (t + 1.0);
  }
  return std::tanh(z);
}

Eigen::VectorXcd thetas(const RbmParameters& X, const SpinConfiguration& v) {
  Eigen::VectorXcd th = X.b;
  for (int i = 0; i < X.n(); ++i) th += static_cast<double>(v.spin(i)) * X.W.row(i).transpose();
  return th;
}

void require_visible_size(const RbmParameters& X, const SpinConfiguration& v) {
  if (v.size() != X.n()) throw DimensionError("configuration length differs from visible size");
}

}  // namespace

bool RbmParameters::real_valued() const {
  return a.imag().isZero(0.0) && b.imag().isZero(0.0) && W.imag().isZero(0.0);
}

Eigen::VectorXcd RbmParameters::flatten() const {
  Eigen::VectorXcd flat(parameter_count());
  flat.head(n()) = a;
  flat.segment(n(), p()) = b;
  for (int i = 0; i < n(); ++i) flat.segment(n() + p() + i * p(), p()) = W.row(i).transpose();
  return flat;
}

RbmParameters RbmParameters::unflatten(const Eigen::VectorXcd& flat, int n, int p) {
  if (flat.size() != n + p + n * p) throw DimensionError("flat parameter vector has wrong length");
  RbmParameters X;
  X.a = flat.head(n);
  X.b = flat.segment(n, p);
  X.W.resize(n, p);
  for (int i = 0; i < n; ++i) X.W.row(i) = flat.segment(n + p + i * p, p).transpose();
  return X;
}

RbmParameters RbmParameters::zeros(int n, int p) {
  RbmParameters X;
  X.a = Eigen::VectorXcd::Zero(n);
  X.b = Eigen::VectorXcd::Zero(p);
  X.W = Eigen::MatrixXcd::Zero(n, p);
  return X;
}

RbmParameters RbmParameters::random(int n, int p, double a_range, double b_range, double w_scale,
                                    RngStream& rng) {
  RbmParameters X = zeros(n, p);
  const double w_range = w_scale / std::sqrt(static_cast<double>(n) * p);
  for (int i = 0; i < n; ++i) X.a(i) = a_range * (2.0 * rng.uniform() - 1.0);
  for (int j = 0; j < p; ++j) X.b(j) = b_range * (2.0 * rng.uniform() - 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X.W(i, j) = w_range * (2.0 * rng.uniform() - 1.0);
  return X;
}

RbmParameters RbmParameters::near_zero_init(int n, int p, double w_sigma, RngStream& rng) {
  RbmParameters X = zeros(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X.W(i, j) = w_sigma * rng.normal();
  return X;
}

bool operator==(const RbmParameters& lhs, const RbmParameters& rhs) {
  return lhs.a == rhs.a && lhs.b == rhs.b && lhs.W == rhs.W;
}

Complex log_psi(const RbmParameters& X, const SpinConfiguration& v) {
  require_visible_size(X, v);
  Complex sum{0.0, 0.0};
  for (int i = 0; i < X.n(); ++i) sum += X.a(i) * static_cast<double>(v.spin(i));
  const Eigen::VectorXcd th = thetas(X, v);
  for (int j = 0; j < X.p(); ++j) sum += log_2cosh(th(j));
  return sum;
}

Eigen::VectorXcd log_derivatives(const RbmParameters& X, const SpinConfiguration& v) {
  require_visible_size(X, v);
  const int n = X.n();
  const int p = X.p();
  Eigen::VectorXcd d(X.parameter_count());
  const Eigen::VectorXcd th = thetas(X, v);
  Eigen::VectorXcd t(p);
  for (int j = 0; j < p; ++j) t(j) = safe_tanh(th(j));
  for (int i = 0; i < n; ++i) d(i) = static_cast<double>(v.spin(i));
  d.segment(n, p) = t;
  for (int i = 0; i < n; ++i)
    d.segment(n + p + i * p, p) = static_cast<double>(v.spin(i)) * t;
  return d;
}

PauliSum learner_hamiltonian(const RbmParameters& X) {
  if (!X.real_valued())
    throw std::invalid_argument("learner Hamiltonian requires real parameters");
  const int n = X.n();
  const int p = X.p();
  PauliSum H(n + p);
  for (int i = 0; i < n; ++i)
    if (X.a(i).real() != 0.0) H.add(X.a(i).real(), PauliString::single(i, Axis::Z));
  for (int j = 0; j < p; ++j)
    if (X.b(j).real() != 0.0) H.add(X.b(j).real(), PauliString::single(n + j, Axis::Z));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j)
      if (X.W(i, j).real() != 0.0)
        H.add(X.W(i, j).real(), PauliString::single(i, Axis::Z).set(n + j, Axis::Z));
  return H;
}

double classical_energy(const RbmParameters& X, const SpinConfiguration& v,
                        const SpinConfiguration& h) {
  double e = 0.0;
  for (int i = 0; i < X.n(); ++i) e += X.a(i).real() * v.spin(i);
  for (int j = 0; j < X.p(); ++j) e += X.b(j).real() * h.spin(j);
  for (int i = 0; i < X.n(); ++i)
    for (int j = 0; j < X.p(); ++j) e += X.W(i, j).real() * v.spin(i) * h.spin(j);
  return e;
}

Eigen::MatrixXcd ThermalState::dense() const {
  const std::int64_t dim = diagonal.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho.diagonal() = diagonal.cast<Complex>();
  return rho;
}

Eigen::VectorXd ThermalState::visible_marginal() const {
  const std::int64_t hid = std::int64_t{1} << p;
  Eigen::VectorXd marg(std::int64_t{1} << n);
  for (std::int64_t v = 0; v < marg.size(); ++v) marg(v) = diagonal.segment(v * hid, hid).sum();
  return marg;
}

Eigen::VectorXd learner_diagonal_energies(const RbmParameters& X) {
  if (!X.real_valued()) throw std::invalid_argument("diagonal energies require real parameters");
  const int n = X.n();
  const int p = X.p();
  if (n + p > kDenseQubitCap)
    throw ResourceError("diagonal on " + std::to_string(n + p) + " qubits exceeds the cap");
  const std::int64_t dim = std::int64_t{1} << (n + p);
  Eigen::VectorXd energy(dim);
  // index = (v_index << p) | h_index; visible qubits are most significant
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    const auto joint = SpinConfiguration::from_index(static_cast<std::uint64_t>(idx), n + p);
    double e = 0.0;
    for (int i = 0; i < n; ++i) e += X.a(i).real() * joint.spin(i);
    for (int j = 0; j < p; ++j) e += X.b(j).real() * joint.spin(n + j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < p; ++j) e += X.W(i, j).real() * joint.spin(i) * joint.spin(n + j);
    energy(idx) = e;
  }
  return energy;
}

ThermalState thermal_state(const RbmParameters& X) {
  const int n = X.n();
  const int p = X.p();
  const Eigen::VectorXd energy = learner_diagonal_energies(X);
  const double e_min = energy.minCoeff();
  Eigen::VectorXd weights = (-(energy.array() - e_min)).exp();
  const double total = weights.sum();
  ThermalState state;
  state.n = n;
  state.p = p;
  state.diagonal = weights / total;
  state.partition_log = std::log(total) - e_min;
  return state;
}

std::vector<JointSample> gibbs_sample_joint(const RbmParameters& X, int count, RngStream& rng,
                                            int burn_in_sweeps, int thin_sweeps) {
  if (!X.real_valued()) throw std::invalid_argument("Gibbs sampling requires real parameters");
  if (count < 0) throw std::invalid_argument("negative sample count");
  if (thin_sweeps < 1) throw std::invalid_argument("thinning must be >= 1 sweep");
  const int n = X.n();
  const int p = X.p();
  if (burn_in_sweeps < 0) burn_in_sweeps = 10 * (n + p);

  std::vector<JointSample> samples;
  if (count == 0) return samples;
  samples.reserve(static_cast<std::size_t>(count));

  SpinConfiguration v = SpinConfiguration::random(n, rng);
  SpinConfiguration h = SpinConfiguration::random(p, rng);

  // conditional weights under e^{-H}: p(h_j = +1 | v) = sigmoid(-2 theta_j)
  auto sweep = [&] {
    for (int j = 0; j < p; ++j) {
      double theta = X.b(j).real();
      for (int i = 0; i < n; ++i) theta += X.W(i, j).real() * v.spin(i);
      const double prob_up = 1.0 / (1.0 + std::exp(2.0 * theta));
      const int want = rng.bernoulli(prob_up) ? 1 : -1;
      if (h.spin(j) != want) h.flip(j);
    }
    for (int i = 0; i < n; ++i) {
      double phi = X.a(i).real();
      for (int j = 0; j < p; ++j) phi += X.W(i, j).real() * h.spin(j);
      const double prob_up = 1.0 / (1.0 + std::exp(2.0 * phi));
      const int want = rng.bernoulli(prob_up) ? 1 : -1;
      if (v.spin(i) != want) v.flip(i);
    }
  };

  for (int s = 0; s < burn_in_sweeps; ++s) sweep();
  for (int k = 0; k < count; ++k) {
    for (int s = 0; s < thin_sweeps; ++s) sweep();
    samples.push_back(JointSample{v, h});
  }
  return samples;
}

namespace {

void write_entry(std::ostream& out, Complex z) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g", z.real(), z.imag());
  out << buf;
}

Complex read_entry(const std::string& tok, int line) {
  const auto comma = tok.find(',');
  if (comma == std::string::npos) throw ParseError("expected 're,im' entry", line);
  try {
    return Complex{std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ParseError("bad entry '" + tok + "'", line);
  }
}

}  // namespace

void serialize_rbm(const RbmParameters& X, std::ostream& out) {
  out << "rbm " << X.n() << ' ' << X.p() << '\n';
  for (int i = 0; i < X.n(); ++i) {
    write_entry(out, X.a(i));
    out << '\n';
  }
  for (int j = 0; j < X.p(); ++j) {
    write_entry(out, X.b(j));
    out << '\n';
  }
  for (int i = 0; i < X.n(); ++i) {
    for (int j = 0; j < X.p(); ++j) {
      if (j) out << ' ';
      write_entry(out, X.W(i, j));
    }
    out << '\n';
  }
}

std::string serialize_rbm(const RbmParameters& X) {
  std::ostringstream ss;
  serialize_rbm(X, ss);
  return ss.str();
}

RbmParameters parse_rbm(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty input", 1);
  ++line_no;
  std::istringstream header(line);
  std::string tag;
  int n = -1, p = -1;
  header >> tag >> n >> p;
  if (tag != "rbm" || n < 1 || p < 1 || !header.eof())
    throw ParseError("expected header 'rbm <n> <p>'", line_no);

  std::vector<Complex> entries;
  entries.reserve(static_cast<std::size_t>(n + p + n * p));
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) entries.push_back(read_entry(tok, line_no));
  }
  if (static_cast<int>(entries.size()) != n + p + n * p)
    throw ParseError("expected " + std::to_string(n + p + n * p) + " entries, found " +
                         std::to_string(entries.size()),
                     line_no == 0 ? 1 : line_no);
  Eigen::VectorXcd flat(n + p + n * p);
  for (std::size_t i = 0; i < entries.size(); ++i) flat(static_cast<Eigen::Index>(i)) = entries[i];
  return RbmParameters::unflatten(flat, n, p);
}

RbmParameters parse_rbm(const std::string& text) {
  std::istringstream ss(text);
  return parse_rbm(ss);
}

}  // namespace qvmc
