#include "fhvqe/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "fhvqe/error.hpp"

namespace fhvqe {

namespace {

constexpr cplx kI{0.0, 1.0};

std::uint64_t insert_zero(std::uint64_t value, int bit) {
  const std::uint64_t low = value & ((std::uint64_t{1} << bit) - 1);
  return ((value >> bit) << (bit + 1)) | low;
}

TwoQubitGate make_gate(GateKind kind, std::array<cplx, 16> m) {
  TwoQubitGate g;
  g.kind = kind;
  g.matrix = m;
  return g;
}

}  // namespace

Statevector::Statevector(int n_qubits)
    : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits, cplx{0.0, 0.0}) {
  if (n_qubits < 0 || n_qubits > 30) {
    throw DimensionMismatch("unsupported qubit count " +
                            std::to_string(n_qubits));
  }
  amps_[0] = 1.0;
}

Statevector::Statevector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (amps_.size() != (std::size_t{1} << n_qubits)) {
    throw DimensionMismatch("amplitude count does not match 2^n_qubits");
  }
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void Statevector::set_basis_state(std::uint64_t index) {
  if (index >= amps_.size()) throw IndexError("basis index out of range");
  std::fill(amps_.begin(), amps_.end(), cplx{0.0, 0.0});
  amps_[index] = 1.0;
}

void Statevector::dump(std::ostream& out, double threshold) const {
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i]) > threshold) {
      out << i << ' ' << amps_[i].real() << ' ' << amps_[i].imag() << '\n';
    }
  }
}

Statevector init_occupation_state(int n_qubits, std::span<const int> occupied) {
  std::set<int> seen;
  std::uint64_t index = 0;
  for (int q : occupied) {
    if (q < 0 || q >= n_qubits) {
      throw IndexError("occupied qubit " + std::to_string(q) + " outside " +
                       std::to_string(n_qubits) + " qubits");
    }
    if (!seen.insert(q).second) {
      throw IndexError("qubit " + std::to_string(q) + " listed twice");
    }
    index |= std::uint64_t{1} << q;
  }
  Statevector s(n_qubits);
  s.set_basis_state(index);
  return s;
}

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::givens: return "givens";
    case GateKind::hop: return "hop";
    case GateKind::mod_hop: return "mod_hop";
    case GateKind::onsite: return "onsite";
    case GateKind::fswap: return "fswap";
    case GateKind::u_np: return "u_np";
    case GateKind::custom: return "custom";
  }
  return "?";
}

TwoQubitGate TwoQubitGate::on(int a, int b) const {
  TwoQubitGate g = *this;
  g.q_a = a;
  g.q_b = b;
  return g;
}

bool TwoQubitGate::number_preserving(double tol) const {
  // Occupation number of each 4x4 index: 0, 1, 1, 2.
  static constexpr int kCount[4] = {0, 1, 1, 2};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      if (kCount[r] != kCount[c] && std::abs((*this)(r, c)) > tol) {
        return false;
      }
    }
  }
  return true;
}

Eigen::Matrix4cd TwoQubitGate::to_eigen() const {
  Eigen::Matrix4cd m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = (*this)(r, c);
  }
  return m;
}

TwoQubitGate gate_givens(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return make_gate(GateKind::givens, {1, 0, 0, 0,  //
                                      0, c, -s, 0,  //
                                      0, s, c, 0,   //
                                      0, 0, 0, 1});
}

TwoQubitGate gate_hop(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return make_gate(GateKind::hop, {1, 0, 0, 0,           //
                                   0, c, kI * s, 0,      //
                                   0, kI * s, c, 0,      //
                                   0, 0, 0, 1});
}

TwoQubitGate gate_mod_hop(double theta, double phi) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx ep = std::polar(1.0, phi / 2), em = std::polar(1.0, -phi / 2);
  return make_gate(GateKind::mod_hop, {1, 0, 0, 0,                   //
                                       0, ep * c, kI * em * s, 0,    //
                                       0, kI * ep * s, em * c, 0,    //
                                       0, 0, 0, 1});
}

TwoQubitGate gate_onsite(double theta) {
  return make_gate(GateKind::onsite, {1, 0, 0, 0,  //
                                      0, 1, 0, 0,  //
                                      0, 0, 1, 0,  //
                                      0, 0, 0, std::polar(1.0, theta)});
}

TwoQubitGate gate_fswap() {
  return make_gate(GateKind::fswap, {1, 0, 0, 0,  //
                                     0, 0, 1, 0,  //
                                     0, 1, 0, 0,  //
                                     0, 0, 0, -1});
}

TwoQubitGate gate_u_np(double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  return make_gate(GateKind::u_np, {1, 0, 0, 0,       //
                                    0, c, kI * s, 0,  //
                                    0, kI * s, c, 0,  //
                                    0, 0, 0, std::polar(1.0, phi)});
}

void apply_gate(Statevector& state, const TwoQubitGate& gate) {
  const int n = state.n_qubits();
  if (gate.q_a == gate.q_b) {
    throw IndexError("gate targets must be distinct, got " +
                     std::to_string(gate.q_a) + " twice");
  }
  if (gate.q_a < 0 || gate.q_b < 0 || gate.q_a >= n || gate.q_b >= n) {
    throw IndexError("gate targets (" + std::to_string(gate.q_a) + ", " +
                     std::to_string(gate.q_b) + ") outside " +
                     std::to_string(n) + " qubits");
  }
  const std::uint64_t ba = std::uint64_t{1} << gate.q_a;
  const std::uint64_t bb = std::uint64_t{1} << gate.q_b;
  const int lo = std::min(gate.q_a, gate.q_b);
  const int hi = std::max(gate.q_a, gate.q_b);
  const std::uint64_t groups = std::uint64_t{1} << (n - 2);
  auto amps = state.amplitudes();
  const auto& m = gate.matrix;

  if (gate.number_preserving()) {
    const cplx m00 = m[0], m11 = m[5], m12 = m[6], m21 = m[9], m22 = m[10],
               m33 = m[15];
    for (std::uint64_t k = 0; k < groups; ++k) {
      const std::uint64_t i00 = insert_zero(insert_zero(k, lo), hi);
      const std::uint64_t i01 = i00 | bb, i10 = i00 | ba, i11 = i01 | ba;
      const cplx a01 = amps[i01], a10 = amps[i10];
      amps[i00] *= m00;
      amps[i01] = m11 * a01 + m12 * a10;
      amps[i10] = m21 * a01 + m22 * a10;
      amps[i11] *= m33;
    }
    return;
  }
  for (std::uint64_t k = 0; k < groups; ++k) {
    const std::uint64_t i00 = insert_zero(insert_zero(k, lo), hi);
    const std::uint64_t idx[4] = {i00, i00 | bb, i00 | ba, i00 | ba | bb};
    cplx in[4];
    for (int r = 0; r < 4; ++r) in[r] = amps[idx[r]];
    for (int r = 0; r < 4; ++r) {
      cplx acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += m[static_cast<std::size_t>(4 * r + c)] * in[c];
      amps[idx[r]] = acc;
    }
  }
}

SparseOperator::SparseOperator(const PauliSum& psum)
    : n_qubits_(psum.n_qubits()) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  // Row r collects P|c> = phase |c ^ x> for every term, i.e. c = r ^ x.
  row_start_.reserve(dim + 1);
  row_start_.push_back(0);
  std::vector<std::pair<std::uint64_t, cplx>> row;
  for (std::uint64_t r = 0; r < dim; ++r) {
    row.clear();
    for (const auto& t : psum.terms()) {
      const std::uint64_t c = r ^ t.ops.x;
      const double sign = (std::popcount(c & t.ops.z) & 1) ? -1.0 : 1.0;
      row.emplace_back(c, kIPow[t.ops.y_count() % 4] * (t.coefficient * sign));
    }
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size();) {
      cplx v = 0.0;
      const auto c = row[k].first;
      for (; k < row.size() && row[k].first == c; ++k) v += row[k].second;
      if (std::abs(v) > 1e-15) {
        col_.push_back(c);
        val_.push_back(v);
      }
    }
    row_start_.push_back(col_.size());
  }
}

double SparseOperator::expectation(std::span<const cplx> amps) const {
  if (amps.size() != row_start_.size() - 1) {
    throw DimensionMismatch("state dimension does not match operator");
  }
  cplx acc = 0.0;
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    if (amps[r] == cplx{0.0, 0.0}) continue;
    cplx hr = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      hr += val_[k] * amps[col_[k]];
    }
    acc += std::conj(amps[r]) * hr;
  }
  return acc.real();
}

void SparseOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != row_start_.size() - 1 || out.size() != in.size()) {
    throw DimensionMismatch("state dimension does not match operator");
  }
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    cplx hr = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      hr += val_[k] * in[col_[k]];
    }
    out[r] = hr;
  }
}

double expectation(const Statevector& state, const PauliSum& hamiltonian) {
  if (hamiltonian.n_qubits() != state.n_qubits()) {
    throw DimensionMismatch("Hamiltonian acts on " +
                            std::to_string(hamiltonian.n_qubits()) +
                            " qubits, state has " +
                            std::to_string(state.n_qubits()));
  }
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const auto amps = state.amplitudes();
  cplx total = 0.0;
  for (const auto& t : hamiltonian.terms()) {
    cplx term = 0.0;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
      if (amps[i] == cplx{0.0, 0.0}) continue;
      const double sign = (std::popcount(i & t.ops.z) & 1) ? -1.0 : 1.0;
      term += std::conj(amps[i ^ t.ops.x]) * amps[i] * sign;
    }
    total += t.coefficient * kIPow[t.ops.y_count() % 4] * term;
  }
  if (std::abs(total.imag()) > 1e-8 * std::max(1.0, std::abs(total.real()))) {
    throw NumericalError("expectation has imaginary part " +
                         std::to_string(total.imag()));
  }
  return total.real();
}

double expectation(const Statevector& state, const Eigen::MatrixXcd& matrix) {
  if (static_cast<std::size_t>(matrix.rows()) != state.dim() ||
      matrix.rows() != matrix.cols()) {
    throw DimensionMismatch("matrix dimension does not match state");
  }
  const auto amps = state.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> psi(amps.data(),
                                         static_cast<Eigen::Index>(amps.size()));
  const cplx value = psi.dot(matrix * psi);
  if (std::abs(value.imag()) > 1e-8 * std::max(1.0, std::abs(value.real()))) {
    throw NumericalError("expectation has imaginary part " +
                         std::to_string(value.imag()));
  }
  return value.real();
}

double expectation(const Statevector& state, const SparseOperator& op) {
  return op.expectation(state.amplitudes());
}

cplx overlap(const Statevector& a, const Statevector& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("overlap of states with different sizes");
  }
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

}  // namespace fhvqe
