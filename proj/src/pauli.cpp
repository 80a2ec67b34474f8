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

#include "qvmc/pauli.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "qvmc/errors.hpp"
#include "qvmc/rng.hpp"

namespace qvmc {

char axis_letter(Axis a) {
  switch (a) {
    case Axis::X: return 'X';
    case Axis::Y: return 'Y';
    default: return 'Z';
  }
}

PauliString PauliString::single(int qubit, Axis axis) {
  PauliString s;
  s.set(qubit, axis);
  return s;
}

PauliString& PauliString::set(int qubit, Axis axis) {
  if (qubit < 0) throw std::invalid_argument("negative qubit index");
  auto it = std::lower_bound(factors_.begin(), factors_.end(), qubit,
                             [](const auto& f, int q) { return f.first < q; });
  if (it != factors_.end() && it->first == qubit)
    throw std::invalid_argument("duplicate qubit index " + std::to_string(qubit) +
                                " in Pauli string");
  factors_.insert(it, {qubit, axis});
  return *this;
}

std::string PauliString::to_string() const {
  std::string out;
  for (const auto& [q, a] : factors_) {
    if (!out.empty()) out += ' ';
    out += axis_letter(a);
    out += std::to_string(q);
  }
  return out;
}

PauliSum::PauliSum(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("PauliSum needs at least one qubit");
}

PauliSum& PauliSum::add(Complex coefficient, PauliString string) {
  if (string.max_qubit() >= num_qubits_)
    throw std::invalid_argument("Pauli factor index " + std::to_string(string.max_qubit()) +
                                " exceeds system size " + std::to_string(num_qubits_));
  terms_.emplace_back(coefficient, std::move(string));
  return *this;
}

PauliSum PauliSum::normalized() const {
  std::map<PauliString, Complex> merged;
  for (const auto& [c, s] : terms_) merged[s] += c;
  PauliSum out(num_qubits_);
  for (auto& [s, c] : merged) {
    if (c == Complex{0.0, 0.0}) continue;
    out.add(c, s);
  }
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  const PauliSum norm = normalized();
  for (const auto& [c, s] : norm.terms())
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

SpinConfiguration::SpinConfiguration(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_)
    if (s != 1 && s != -1) throw std::invalid_argument("spins must be +1 or -1");
}

SpinConfiguration SpinConfiguration::from_index(std::uint64_t index, int n) {
  if (n < 0 || (n < 64 && index >= (std::uint64_t{1} << n)))
    throw std::invalid_argument("basis index out of range");
  std::vector<int> spins(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool bit = (index >> (n - 1 - i)) & 1u;
    spins[static_cast<std::size_t>(i)] = bit ? -1 : 1;
  }
  return SpinConfiguration(std::move(spins));
}

std::uint64_t SpinConfiguration::to_index() const {
  std::uint64_t idx = 0;
  for (int s : spins_) idx = (idx << 1) | (s == 1 ? 0u : 1u);
  return idx;
}

SpinConfiguration SpinConfiguration::random(int n, RngStream& rng) {
  std::vector<int> spins(static_cast<std::size_t>(n));
  for (auto& s : spins) s = rng.spin();
  return SpinConfiguration(std::move(spins));
}

SpinConfiguration SpinConfiguration::flipped(int i) const {
  SpinConfiguration out = *this;
  out.flip(i);
  return out;
}

PauliSum build_tfim(int n, double B, double J0, bool periodic) {
  if (n < 1) throw std::invalid_argument("TFIM needs n >= 1");
  if (periodic && n < 3)
    throw std::invalid_argument("periodic TFIM needs n >= 3 to avoid the double-counted wrap bond");
  PauliSum H(n);
  if (B != 0.0)
    for (int i = 0; i < n; ++i) H.add(-B, PauliString::single(i, Axis::X));
  if (J0 != 0.0) {
    for (int i = 0; i + 1 < n; ++i)
      H.add(-J0, PauliString::single(i, Axis::Z).set(i + 1, Axis::Z));
    if (periodic) H.add(-J0, PauliString::single(0, Axis::Z).set(n - 1, Axis::Z));
  }
  return H;
}

PauliSum build_ctfim(int n, double B, double J0) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("c-TFIM needs even n >= 2");
  PauliSum H(n);
  if (B != 0.0)
    for (int i = 0; i < n; ++i) H.add(-B, PauliString::single(i, Axis::X));
  if (J0 != 0.0)
    for (int k = 0; k < n / 2; ++k)
      H.add(-J0, PauliString::single(k, Axis::Z).set(n - 1 - k, Axis::Z));
  return H;
}

namespace {

// strips a trailing comment and returns whitespace-split tokens
std::vector<std::string> tokenize(std::string line) {
  const auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) tokens.push_back(tok);
  return tokens;
}

double parse_double(const std::string& tok, int line) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + tok + "'", line);
  }
  if (pos != tok.size()) throw ParseError("bad number '" + tok + "'", line);
  return value;
}

}  // namespace

PauliSum parse_pauli_sum(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  // header
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 || tokens[0] != "qubits")
      throw ParseError("expected header 'qubits <n>'", line_no);
    try {
      n = std::stoi(tokens[1]);
    } catch (const std::exception&) {
      throw ParseError("bad qubit count '" + tokens[1] + "'", line_no);
    }
    if (n < 1) throw ParseError("qubit count must be >= 1", line_no);
    break;
  }
  if (n < 0) throw ParseError("missing header 'qubits <n>'", line_no == 0 ? 1 : line_no);

  PauliSum sum(n);
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 2) throw ParseError("expected '<re> <im> <factor>...'", line_no);
    const double re = parse_double(tokens[0], line_no);
    const double im = parse_double(tokens[1], line_no);
    PauliString string;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const std::string& f = tokens[i];
      Axis axis;
      switch (f.empty() ? '?' : f[0]) {
        case 'X': axis = Axis::X; break;
        case 'Y': axis = Axis::Y; break;
        case 'Z': axis = Axis::Z; break;
        default: throw ParseError("bad factor '" + f + "'", line_no);
      }
      int q = -1;
      try {
        std::size_t pos = 0;
        q = std::stoi(f.substr(1), &pos);
        if (pos != f.size() - 1) q = -1;
      } catch (const std::exception&) {
        q = -1;
      }
      if (q < 0) throw ParseError("bad factor '" + f + "'", line_no);
      if (q >= n)
        throw ParseError("factor index " + std::to_string(q) + " >= declared size " +
                             std::to_string(n),
                         line_no);
      try {
        string.set(q, axis);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line_no);
      }
    }
    sum.add(Complex{re, im}, std::move(string));
  }
  return sum.normalized();
}

PauliSum parse_pauli_sum(const std::string& text) {
  std::istringstream ss(text);
  return parse_pauli_sum(ss);
}

void serialize_pauli_sum(const PauliSum& sum, std::ostream& out) {
  const PauliSum norm = sum.normalized();
  out << "qubits " << norm.size() << '\n';
  char buf[64];
  for (const auto& [c, s] : norm.terms()) {
    std::snprintf(buf, sizeof(buf), "%.17g", c.real());
    out << buf << ' ';
    std::snprintf(buf, sizeof(buf), "%.17g", c.imag());
    out << buf;
    const std::string factors = s.to_string();
    if (!factors.empty()) out << ' ' << factors;
    out << '\n';
  }
}

std::string serialize_pauli_sum(const PauliSum& sum) {
  std::ostringstream ss;
  serialize_pauli_sum(sum, ss);
  return ss.str();
}

std::vector<std::pair<SpinConfiguration, Complex>> connected_elements(
    const PauliSum& H, const SpinConfiguration& v) {
  if (H.size() != v.size()) throw DimensionError("operator and configuration sizes differ");
  std::map<std::uint64_t, Complex> elements;
  for (const auto& [coeff, string] : H.terms()) {
    Complex amp = coeff;
    SpinConfiguration target = v;
    for (const auto& [q, axis] : string.factors()) {
      const int s = target.spin(q);
      switch (axis) {
        case Axis::Z:
          amp *= static_cast<double>(s);
          break;
        case Axis::X:
          target.flip(q);
          break;
        case Axis::Y:
          // Y|0> = i|1>, Y|1> = -i|0>
          amp *= (s == 1) ? Complex{0.0, 1.0} : Complex{0.0, -1.0};
          target.flip(q);
          break;
      }
    }
    elements[target.to_index()] += amp;
  }
  std::vector<std::pair<SpinConfiguration, Complex>> out;
  out.reserve(elements.size());
  for (const auto& [idx, amp] : elements) {
    if (amp == Complex{0.0, 0.0}) continue;
    out.emplace_back(SpinConfiguration::from_index(idx, v.size()), amp);
  }
  return out;
}

Eigen::MatrixXcd dense_matrix(const PauliSum& H) {
  const int n = H.size();
  if (n > kDenseQubitCap)
    throw ResourceError("dense matrix for " + std::to_string(n) + " qubits exceeds the " +
                        std::to_string(kDenseQubitCap) + "-qubit cap");
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [coeff, string] : H.terms()) {
    for (std::int64_t col = 0; col < dim; ++col) {
      Complex amp = coeff;
      std::int64_t row = col;
      for (const auto& [q, axis] : string.factors()) {
        const std::int64_t bit = std::int64_t{1} << (n - 1 - q);
        const bool set = (col & bit) != 0;  // set bit means spin -1
        switch (axis) {
          case Axis::Z:
            if (set) amp = -amp;
            break;
          case Axis::X:
            row ^= bit;
            break;
          case Axis::Y:
            amp *= set ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
            row ^= bit;
            break;
        }
      }
      M(row, col) += amp;
    }
  }
  return M;
}

GroundState exact_ground_state(const PauliSum& H) {
  if (!H.is_hermitian()) throw std::invalid_argument("exact_ground_state needs a Hermitian sum");
  const Eigen::MatrixXcd M = dense_matrix(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  GroundState gs{solver.eigenvalues()(0), solver.eigenvectors().col(0)};
  const double residual = (M * gs.vector - gs.energy * gs.vector).norm();
  if (residual > 1e-10)
    throw std::runtime_error("ground-state residual " + std::to_string(residual) +
                             " exceeds 1e-10");
  return gs;
}

}  // namespace qvmc
