#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fhvqe/lattice.hpp"

namespace fhvqe {

enum class TermKind { hopping, onsite };

/**
 * One second-quantized Hubbard term over qubit (spin-orbital) indices.
 *
 *  - hopping: coefficient * (a+_i a_j + a+_j a_i), i < j, same spin
 *  - onsite:  coefficient * n_i n_j, i = up orbital, j = down orbital
 */
struct FermionTerm {
  TermKind kind = TermKind::hopping;
  std::vector<int> orbitals;
  double coefficient = 0.0;
};

/// Per-qubit Pauli word packed as x/z bit masks (Y = X and Z set together).
/// Supports up to 64 qubits; the lattice cap keeps us far below that.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  [[nodiscard]] char at(int qubit) const noexcept;
  void set(int qubit, char op);
  [[nodiscard]] int y_count() const noexcept;

  /// "XZY..." with qubit 0 first.
  [[nodiscard]] std::string to_string(int n_qubits) const;
  static PauliString parse(const std::string& text);

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

struct PauliTerm {
  double coefficient = 0.0;
  PauliString ops;
};

/// Real linear combination of Pauli strings, hence Hermitian by construction.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits = 0) : n_qubits_(n_qubits) {}

  [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
  [[nodiscard]] const std::vector<PauliTerm>& terms() const noexcept {
    return terms_;
  }

  void add(double coefficient, PauliString ops);
  PauliSum& operator+=(const PauliSum& other);

  /// Sort lexicographically by the string form, merge duplicates and drop
  /// coefficients below `drop_below` in magnitude.
  void canonicalize(double drop_below = 1e-14);

  /// One "coeff PAULI_STRING" line per term.
  void dump(std::ostream& out) const;

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// Particle-number sector of fixed (n_up, n_down), basis states ascending.
struct SectorBasis {
  int n_up = 0;
  int n_down = 0;
  std::vector<std::uint64_t> states;

  [[nodiscard]] std::size_t size() const noexcept { return states.size(); }
  /// Position of `state` in `states`, or -1.
  [[nodiscard]] std::ptrdiff_t find(std::uint64_t state) const;
};

inline constexpr int kDenseQubitCap = 14;

/// Hopping (-1 per bond and spin, t = 1) and onsite (U per site) terms.
/// Throws UnsupportedParameter for U < 0.
std::vector<FermionTerm> build_hubbard(const LatticeGeometry& geometry,
                                       double u_over_t);

/// Jordan-Wigner image of a single term.
PauliSum jordan_wigner(const FermionTerm& term, int n_qubits);

/// Canonicalized sum of the Jordan-Wigner images of `terms`.
PauliSum jordan_wigner(const std::vector<FermionTerm>& terms, int n_qubits);

/// Full 2^n x 2^n matrix; throws SizeCapExceeded above kDenseQubitCap.
Eigen::MatrixXcd to_dense(const PauliSum& psum, int n_qubits);

SectorBasis sector_basis(const LatticeGeometry& geometry, int n_up,
                         int n_down);

/// Occupation-basis block of the Hamiltonian, built without going through
/// Pauli strings: hopping carries the sign (-1)^(occupied orbitals strictly
/// between i and j).
std::pair<SectorBasis, Eigen::MatrixXd> sector_matrix(
    const std::vector<FermionTerm>& terms, const LatticeGeometry& geometry,
    int n_up, int n_down);

/// Binomial coefficient, exact for the small arguments used here.
std::size_t binomial(int n, int k);

}  // namespace fhvqe
