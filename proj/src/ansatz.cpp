#include "fhvqe/ansatz.hpp"

#include <algorithm>
#include <ostream>

#include "fhvqe/error.hpp"

namespace fhvqe {

const char* to_string(AnsatzVariant variant) {
  switch (variant) {
    case AnsatzVariant::modified_hopping: return "modified_hopping";
    case AnsatzVariant::plain_hopping: return "plain_hopping";
    case AnsatzVariant::number_preserving: return "number_preserving";
  }
  return "?";
}

AnsatzVariant parse_variant(const std::string& text) {
  if (text == "modified_hopping") return AnsatzVariant::modified_hopping;
  if (text == "plain_hopping") return AnsatzVariant::plain_hopping;
  if (text == "number_preserving") return AnsatzVariant::number_preserving;
  throw ConfigError("unknown ansatz variant '" + text +
                    "' (expected modified_hopping, plain_hopping or "
                    "number_preserving)");
}

void ParameterizedCircuit::dump(std::ostream& out) const {
  out << "# qubits " << n_qubits << " params " << n_params << " prep";
  for (int q : prep) out << ' ' << q;
  out << '\n';
  for (const auto& s : slots) {
    out << to_string(s.kind) << ' ' << s.q_a << ' ' << s.q_b << ' '
        << s.params[0] << ' ' << s.params[1] << '\n';
  }
}

std::vector<int> reference_occupation(const LatticeGeometry& geometry,
                                      int n_up, int n_down) {
  const int n = geometry.n_sites();
  if (n_up < 0 || n_down < 0 || n_up > n || n_down > n) {
    throw IndexError("occupation (" + std::to_string(n_up) + ", " +
                     std::to_string(n_down) + ") invalid for " +
                     std::to_string(n) + " sites");
  }
  std::vector<int> occ;
  for (int k = 0; k < n_up; ++k) occ.push_back(geometry.qubit_index(k, Spin::up));
  for (int k = 0; k < n_down; ++k) {
    occ.push_back(geometry.qubit_index(k, Spin::down));
  }
  return occ;
}

ParameterizedCircuit build_ansatz(const LatticeGeometry& geometry, int n_up,
                                  int n_down, const AnsatzConfig& config) {
  if (config.layers < 1) throw ConfigError("ansatz needs at least one layer");
  ParameterizedCircuit c;
  c.n_qubits = geometry.n_qubits();
  c.n_up = n_up;
  c.n_down = n_down;
  c.prep = reference_occupation(geometry, n_up, n_down);

  const int n = geometry.n_sites();
  auto add = [&c](GateKind kind, int a, int b, int n_params) {
    GateSlot s{kind, a, b, {-1, -1}};
    for (int k = 0; k < n_params; ++k) s.params[static_cast<std::size_t>(k)] = c.n_params++;
    c.slots.push_back(s);
  };

  // Brick-wall Givens rotations over qubit-adjacent orbitals of each spin.
  for (Spin spin : {Spin::up, Spin::down}) {
    const int offset = geometry.qubit_index(0, spin);
    for (int round = 0; round < (n + 1) / 2; ++round) {
      for (int start : {0, 1}) {
        for (int q = start; q + 1 < n; q += 2) {
          add(GateKind::givens, offset + q, offset + q + 1, 1);
        }
      }
    }
  }

  GateKind hop_kind = GateKind::mod_hop;
  int hop_params = 2;
  switch (config.variant) {
    case AnsatzVariant::modified_hopping: break;
    case AnsatzVariant::plain_hopping:
      hop_kind = GateKind::hop;
      hop_params = 1;
      break;
    case AnsatzVariant::number_preserving:
      hop_kind = GateKind::u_np;
      break;
  }

  const bool two_d = geometry.rows() > 1 && geometry.cols() > 1;
  // Each layer: onsite phases first, then hopping in brick order (even bond
  // indices, then odd). The bond order is reversed on odd layers.
  std::vector<Bond> brick;
  const auto& bonds = geometry.bonds();
  for (std::size_t k = 0; k < bonds.size(); k += 2) brick.push_back(bonds[k]);
  for (std::size_t k = 1; k < bonds.size(); k += 2) brick.push_back(bonds[k]);
  for (int layer = 0; layer < config.layers; ++layer) {
    for (int site = 0; site < n; ++site) {
      add(GateKind::onsite, geometry.qubit_index(site, Spin::up),
          geometry.qubit_index(site, Spin::down), 1);
    }
    std::vector<Bond> order = brick;
    if (layer % 2 == 1) std::reverse(order.begin(), order.end());
    for (Spin spin : {Spin::up, Spin::down}) {
      for (const Bond& b : order) {
        const int i = geometry.qubit_index(b.site_a, spin);
        const int j = geometry.qubit_index(b.site_b, spin);
        if (j - i == 1) {
          add(hop_kind, i, j, hop_params);
        } else if (config.use_fswap) {
          // Carry orbital i up to j - 1, hop, and carry it back.
          for (int k = i; k + 1 < j; ++k) add(GateKind::fswap, k, k + 1, 0);
          add(hop_kind, j - 1, j, hop_params);
          for (int k = j - 2; k >= i; --k) add(GateKind::fswap, k, k + 1, 0);
        } else {
          add(hop_kind, i, j, hop_params);
          c.fswap_disabled_on_2d = c.fswap_disabled_on_2d || two_d;
        }
      }
    }
  }
  return c;
}

TwoQubitGate slot_gate(const GateSlot& slot, std::span<const double> params) {
  auto p = [&](int k) {
    return params[static_cast<std::size_t>(slot.params[static_cast<std::size_t>(k)])];
  };
  TwoQubitGate g;
  switch (slot.kind) {
    case GateKind::givens: g = gate_givens(p(0)); break;
    case GateKind::hop: g = gate_hop(p(0)); break;
    case GateKind::mod_hop: g = gate_mod_hop(p(0), p(1)); break;
    case GateKind::onsite: g = gate_onsite(p(0)); break;
    case GateKind::fswap: g = gate_fswap(); break;
    case GateKind::u_np: g = gate_u_np(p(0), p(1)); break;
    case GateKind::custom:
      throw MalformedTerm("circuit slot without a gate definition");
  }
  return g.on(slot.q_a, slot.q_b);
}

void run_circuit_into(const ParameterizedCircuit& circuit,
                      std::span<const double> params, Statevector& state) {
  if (params.size() != static_cast<std::size_t>(circuit.n_params)) {
    throw DimensionMismatch("circuit expects " +
                            std::to_string(circuit.n_params) +
                            " parameters, got " +
                            std::to_string(params.size()));
  }
  if (state.n_qubits() != circuit.n_qubits) state = Statevector(circuit.n_qubits);
  std::uint64_t mask = 0;
  for (int q : circuit.prep) mask |= std::uint64_t{1} << q;
  state.set_basis_state(mask);
  for (const auto& slot : circuit.slots) apply_gate(state, slot_gate(slot, params));
}

Statevector run_circuit(const ParameterizedCircuit& circuit,
                        std::span<const double> params) {
  Statevector state(circuit.n_qubits);
  run_circuit_into(circuit, params, state);
  return state;
}

}  // namespace fhvqe
