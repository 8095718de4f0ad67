#include <bit>
#include <random>
#include <sstream>

#include "doctest.h"

#include "fhvqe/ansatz.hpp"
#include "fhvqe/error.hpp"
#include "fhvqe/exactdiag.hpp"
#include "fhvqe/vqe.hpp"

using namespace fhvqe;

namespace {

std::vector<double> random_params(int n, std::uint64_t seed, double scale = 3.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) v = d(gen);
  return x;
}

struct Case {
  int rows, cols, n_up, n_down;
  AnsatzConfig config;
};

std::vector<Case> cases() {
  std::vector<Case> out;
  for (auto variant : {AnsatzVariant::modified_hopping, AnsatzVariant::plain_hopping,
                       AnsatzVariant::number_preserving}) {
    for (bool fswap : {true, false}) {
      const AnsatzConfig c{2, fswap, variant};
      out.push_back({1, 4, 2, 2, c});
      out.push_back({1, 4, 3, 1, c});
      out.push_back({2, 2, 2, 2, c});
      out.push_back({2, 2, 1, 2, c});
      out.push_back({2, 3, 2, 1, c});
      out.push_back({1, 1, 1, 0, c});
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("ansatz") {

TEST_CASE("reference occupation") {
  CHECK(reference_occupation(LatticeGeometry(1, 4), 2, 2) == std::vector<int>{0, 1, 4, 5});
  CHECK(reference_occupation(LatticeGeometry(1, 4), 0, 0).empty());
  CHECK(reference_occupation(LatticeGeometry(2, 2), 1, 0) == std::vector<int>{0});
  CHECK_THROWS_AS(reference_occupation(LatticeGeometry(1, 2), 3, 0), IndexError);
}

TEST_CASE("parameter counts are stable") {
  const LatticeGeometry chain(1, 4), square(2, 2), rect(3, 2);
  CHECK(build_ansatz(chain, 2, 2).n_params == 44);
  CHECK(build_ansatz(square, 2, 2).n_params == 52);
  CHECK(build_ansatz(rect, 3, 3).n_params == 98);
  CHECK(build_ansatz(chain, 2, 2, {2, true, AnsatzVariant::plain_hopping}).n_params == 32);
  CHECK(build_ansatz(square, 2, 2, {2, true, AnsatzVariant::plain_hopping}).n_params == 36);
  CHECK(build_ansatz(chain, 2, 2, {2, true, AnsatzVariant::number_preserving}).n_params == 44);
  CHECK(build_ansatz(square, 2, 2, {2, false}).n_params == 52);
}

TEST_CASE("two-site single layer gate sequence") {
  const auto c = build_ansatz(LatticeGeometry(1, 2), 1, 1, {1, true, AnsatzVariant::modified_hopping});
  CHECK(c.prep == std::vector<int>{0, 2});
  const std::vector<GateKind> kinds{GateKind::givens, GateKind::givens, GateKind::onsite,
                                    GateKind::onsite, GateKind::mod_hop, GateKind::mod_hop};
  REQUIRE(c.slots.size() == kinds.size());
  for (std::size_t i = 0; i < kinds.size(); ++i) CHECK(c.slots[i].kind == kinds[i]);
  std::ostringstream dump;
  c.dump(dump);
  CHECK(dump.str().rfind("# qubits 4 params 8 prep 0 2\n", 0) == 0);
}

TEST_CASE("single site has only onsite gates") {
  const auto c = build_ansatz(LatticeGeometry(1, 1), 1, 1);
  CHECK_FALSE(c.slots.empty());
  for (const auto& s : c.slots) CHECK(s.kind == GateKind::onsite);
}

TEST_CASE("zero parameters give the reference state") {
  for (const auto& k : cases()) {
    const LatticeGeometry g(k.rows, k.cols);
    const auto c = build_ansatz(g, k.n_up, k.n_down, k.config);
    const auto s = run_circuit(c, std::vector<double>(static_cast<std::size_t>(c.n_params), 0.0));
    std::uint64_t ref = 0;
    for (int q : reference_occupation(g, k.n_up, k.n_down)) ref |= std::uint64_t{1} << q;
    CHECK(std::abs(s[ref] - cplx(1.0)) < 1e-12);
  }
}

TEST_CASE("output stays in its sector") {
  for (const auto& k : cases()) {
    const LatticeGeometry g(k.rows, k.cols);
    const auto c = build_ansatz(g, k.n_up, k.n_down, k.config);
    const std::uint64_t up_mask = (std::uint64_t{1} << g.n_sites()) - 1;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto s = run_circuit(c, random_params(c.n_params, seed));
      CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
      for (std::size_t i = 0; i < s.dim(); ++i) {
        if (s[i] == cplx(0.0)) continue;
        const auto b = static_cast<std::uint64_t>(i);
        const bool in_sector = std::popcount(b & up_mask) == k.n_up &&
                               std::popcount(b >> g.n_sites()) == k.n_down;
        CHECK(in_sector);
      }
    }
  }
}

TEST_CASE("fermionic swap network is a net identity") {
  for (auto [r, c] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
    const LatticeGeometry g(r, c);
    const auto circ = build_ansatz(g, 2, 1);
    int swaps = 0;
    Eigen::MatrixXcd net = Eigen::MatrixXcd::Identity(1 << g.n_qubits(), 1 << g.n_qubits());
    Statevector col(g.n_qubits());
    // Columns of the product of every fswap in circuit order.
    for (Eigen::Index b = 0; b < net.cols(); ++b) {
      col.set_basis_state(static_cast<std::uint64_t>(b));
      for (const auto& s : circ.slots) {
        if (s.kind != GateKind::fswap) continue;
        if (b == 0) ++swaps;
        apply_gate(col, gate_fswap().on(s.q_a, s.q_b));
      }
      for (Eigen::Index a = 0; a < net.rows(); ++a) net(a, b) = col[static_cast<std::size_t>(a)];
    }
    CHECK(swaps > 0);
    CHECK((net - Eigen::MatrixXcd::Identity(net.rows(), net.cols())).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("fswap flag on two-dimensional lattices") {
  CHECK_FALSE(build_ansatz(LatticeGeometry(2, 2), 2, 2, {2, true}).fswap_disabled_on_2d);
  CHECK(build_ansatz(LatticeGeometry(2, 2), 2, 2, {2, false}).fswap_disabled_on_2d);
  CHECK_FALSE(build_ansatz(LatticeGeometry(1, 4), 2, 2, {2, false}).fswap_disabled_on_2d);
  for (const auto& s : build_ansatz(LatticeGeometry(2, 2), 2, 2, {2, false}).slots) {
    CHECK(s.kind != GateKind::fswap);
  }
}

TEST_CASE("Givens layer reaches the free-fermion ground state") {
  const LatticeGeometry g(1, 4);
  const auto c = build_ansatz(g, 2, 2);
  const auto angles = free_fermion_angles(g, c);
  const auto s = run_circuit(c, angles);
  const SparseOperator kinetic(jordan_wigner(build_hubbard(g, 0.0), 8));
  CHECK(std::abs(kinetic.expectation(s.amplitudes()) - free_fermion_ground(g, 2, 2)) < 1e-3);
}

TEST_CASE("bad inputs") {
  const auto c = build_ansatz(LatticeGeometry(1, 2), 1, 1);
  CHECK_THROWS_AS(run_circuit(c, std::vector<double>(3, 0.0)), DimensionMismatch);
  CHECK_THROWS_AS(build_ansatz(LatticeGeometry(1, 2), 1, 1, {0}), ConfigError);
  CHECK_THROWS_AS(parse_variant("hva"), ConfigError);
  CHECK(parse_variant("number_preserving") == AnsatzVariant::number_preserving);
}

}
