#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fhvqe/lattice.hpp"
#include "fhvqe/simulator.hpp"

namespace fhvqe {

enum class AnsatzVariant { modified_hopping, plain_hopping, number_preserving };

const char* to_string(AnsatzVariant variant);
AnsatzVariant parse_variant(const std::string& text);

struct AnsatzConfig {
  int layers = 2;
  /// Route non-adjacent same-spin bonds through fermionic swaps. Has no
  /// effect on chains, where every bond is already qubit-adjacent.
  bool use_fswap = true;
  AnsatzVariant variant = AnsatzVariant::modified_hopping;
};

/// One gate position. Unused parameter slots hold -1.
struct GateSlot {
  GateKind kind = GateKind::givens;
  int q_a = 0;
  int q_b = 1;
  std::array<int, 2> params{-1, -1};

  [[nodiscard]] int n_params() const noexcept {
    return (params[0] >= 0) + (params[1] >= 0);
  }
};

/**
 * Hubbard circuit: X preparation of the reference occupation, a brick-wall
 * Givens block per spin, then `layers` rounds of onsite phases followed by
 * same-spin hopping. Every parameterized gate owns fresh parameter indices.
 */
struct ParameterizedCircuit {
  int n_qubits = 0;
  int n_up = 0;
  int n_down = 0;
  std::vector<int> prep;
  std::vector<GateSlot> slots;
  int n_params = 0;
  /// Set when a 2D lattice was built with use_fswap = false, so its
  /// non-adjacent hopping gates drop the Jordan-Wigner string.
  bool fswap_disabled_on_2d = false;

  /// One line per slot: "kind q_a q_b p0 p1".
  void dump(std::ostream& out) const;
};

/// Lowest snake-index orbitals of each spin block. Throws IndexError when
/// a count exceeds the number of sites.
std::vector<int> reference_occupation(const LatticeGeometry& geometry,
                                      int n_up, int n_down);

ParameterizedCircuit build_ansatz(const LatticeGeometry& geometry, int n_up,
                                  int n_down, const AnsatzConfig& config = {});

/// The gate a slot realizes for the given parameter vector.
TwoQubitGate slot_gate(const GateSlot& slot, std::span<const double> params);

/// Throws DimensionMismatch if params.size() != circuit.n_params.
Statevector run_circuit(const ParameterizedCircuit& circuit,
                        std::span<const double> params);

/// Same as run_circuit, reusing `state` as the output buffer.
void run_circuit_into(const ParameterizedCircuit& circuit,
                      std::span<const double> params, Statevector& state);

}  // namespace fhvqe
