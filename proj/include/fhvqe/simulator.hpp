#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fhvqe/hamiltonian.hpp"

namespace fhvqe {

using cplx = std::complex<double>;

/// Dense amplitude vector; bit q of a basis index is the occupation of qubit q.
class Statevector {
 public:
  explicit Statevector(int n_qubits = 0);
  Statevector(int n_qubits, std::vector<cplx> amplitudes);

  [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
  [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
  [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amps_; }
  [[nodiscard]] std::span<const cplx> amplitudes() const noexcept {
    return amps_;
  }
  [[nodiscard]] cplx operator[](std::size_t i) const { return amps_[i]; }
  cplx& operator[](std::size_t i) { return amps_[i]; }

  [[nodiscard]] double norm() const;
  /// Resets to the computational basis state `index`.
  void set_basis_state(std::uint64_t index);

  /// "index re im" per non-negligible amplitude.
  void dump(std::ostream& out, double threshold = 1e-12) const;

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

/// Computational basis state with exactly the listed qubits set to |1>.
Statevector init_occupation_state(int n_qubits, std::span<const int> occupied);

enum class GateKind { givens, hop, mod_hop, onsite, fswap, u_np, custom };

const char* to_string(GateKind kind);

/**
 * 4x4 unitary on an ordered qubit pair (q_a, q_b).
 *
 * Row/column index is 2*b_a + b_b, so |01> means q_b occupied. The
 * factories below place the gate on (0, 1); use on() to retarget.
 */
struct TwoQubitGate {
  GateKind kind = GateKind::custom;
  std::array<cplx, 16> matrix{};
  int q_a = 0;
  int q_b = 1;

  [[nodiscard]] cplx operator()(int row, int col) const {
    return matrix[static_cast<std::size_t>(4 * row + col)];
  }
  [[nodiscard]] TwoQubitGate on(int a, int b) const;
  /// No amplitude moves between different occupation-number blocks.
  [[nodiscard]] bool number_preserving(double tol = 0.0) const;
  [[nodiscard]] Eigen::Matrix4cd to_eigen() const;
};

/// Givens rotation, c = cos(theta/2), s = sin(theta/2):
/// |01> -> c|01> + s|10>, |10> -> -s|01> + c|10>.
TwoQubitGate gate_givens(double theta);
/// Hopping evolution, single-excitation block [[c, i s], [i s, c]].
TwoQubitGate gate_hop(double theta);
/// Hopping with a relative phase applied first: hop * diag(e^{i phi/2}, e^{-i phi/2})
/// on the single-excitation block.
TwoQubitGate gate_mod_hop(double theta, double phi);
/// diag(1, 1, 1, e^{i theta})
TwoQubitGate gate_onsite(double theta);
/// Fermionic swap: exchanges |01> and |10>, -1 on |11>.
TwoQubitGate gate_fswap();
/// Number-preserving unitary, block [[cos, i sin], [i sin, cos]] at the full
/// angle, e^{i phi} on |11>.
TwoQubitGate gate_u_np(double theta, double phi);

/// In place. Throws DimensionMismatch / IndexError on bad targets.
void apply_gate(Statevector& state, const TwoQubitGate& gate);

/// Compressed sparse row image of a PauliSum, for repeated expectations.
class SparseOperator {
 public:
  explicit SparseOperator(const PauliSum& psum);

  [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
  [[nodiscard]] double expectation(std::span<const cplx> amps) const;
  void apply(std::span<const cplx> in, std::span<cplx> out) const;

 private:
  int n_qubits_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint64_t> col_;
  std::vector<cplx> val_;
};

/// Term-by-term Pauli action; imaginary residue is discarded after a
/// Hermiticity check.
double expectation(const Statevector& state, const PauliSum& hamiltonian);
double expectation(const Statevector& state, const Eigen::MatrixXcd& matrix);
double expectation(const Statevector& state, const SparseOperator& op);

/// <a|b>
cplx overlap(const Statevector& a, const Statevector& b);

}  // namespace fhvqe
