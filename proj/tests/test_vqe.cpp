#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "fhvqe/error.hpp"
#include "fhvqe/exactdiag.hpp"
#include "fhvqe/vqe.hpp"

using namespace fhvqe;

TEST_SUITE("vqe") {

TEST_CASE("objective with and without priors") {
  const LatticeGeometry g(1, 2);
  const auto circuit = build_ansatz(g, 1, 1);
  const auto h = jordan_wigner(build_hubbard(g, 4.0), 4);
  std::vector<double> x(static_cast<std::size_t>(circuit.n_params));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.3 + 0.1 * static_cast<double>(i);
  const auto psi = run_circuit(circuit, x);
  const double e = expectation(psi, h);

  const ObjectiveSpec plain(circuit, h);
  CHECK(plain.value(x) == doctest::Approx(e).epsilon(1e-12));

  const ObjectiveSpec same(circuit, h, {psi}, 7.0);
  CHECK(same.value(x) == doctest::Approx(e + 7.0).epsilon(1e-12));

  // (2,0) occupation is outside the (1,1) sector, hence orthogonal.
  const auto other = init_occupation_state(4, std::vector<int>{0, 1});
  const ObjectiveSpec orth(circuit, h, {other}, 7.0);
  CHECK(orth.value(x) == doctest::Approx(e).epsilon(1e-12));

  CHECK_THROWS_AS(ObjectiveSpec(circuit, h, {}, 0.0), UnsupportedParameter);
  CHECK_THROWS_AS(ObjectiveSpec(circuit, h, {Statevector(3)}), DimensionMismatch);
}

TEST_CASE("seed splitting") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 4; ++a) {
    for (std::uint64_t b = 0; b < 8; ++b) seeds.insert(derive_seed(42, a, b));
  }
  CHECK(seeds.size() == 32);
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
}

TEST_CASE("non-interacting chain ground state") {
  const LatticeGeometry g(1, 4);
  const auto r = solve_level(g, 0.0, 2, 2, 0);
  const double exact = oracle::fill(oracle::chain_modes(4), 2, 2);
  CHECK(std::abs(r.energy - exact) <= 0.02 * std::abs(exact));
  CHECK(r.energy >= exact - 1e-9);
  CHECK(r.runs.size() == 5);
}

TEST_CASE("dimer excited level") {
  const LatticeGeometry g(1, 2);
  LevelSolver solver(g, 4.0, 1, 1);
  const auto r0 = solver.solve_level(0);
  CHECK(r0.energy >= oracle::two_site_ground(4.0) - 1e-9);
  CHECK(r0.energy == doctest::Approx(oracle::two_site_ground(4.0)).epsilon(1e-6));
  const auto r1 = solver.solve_level(1);
  CHECK(std::abs(r1.energy - 0.0) < 0.05);
  REQUIRE(r1.overlaps_with_priors.size() == 1);
  CHECK(r1.overlaps_with_priors[0] < 1e-2);
}

TEST_CASE("level ordering") {
  const LatticeGeometry g(1, 2);
  LevelSolver solver(g, 1.0, 1, 1);
  CHECK_THROWS_AS(solver.solve_level(1), OrderingError);
  LevelSolver tiny(LatticeGeometry(1, 1), 1.0, 1, 1);
  (void)tiny.solve_level(0);
  CHECK_THROWS_AS(tiny.solve_level(1), OrderingError);
  OptimizerSchedule bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(LevelSolver(g, 1.0, 1, 1, {}, bad), ConfigError);
}

TEST_CASE("penalty weight defaults to three spectral ranges") {
  const LatticeGeometry g(1, 2);
  const LevelSolver solver(g, 4.0, 1, 1);
  const double range = 4.0 * std::sqrt(2.0);
  CHECK(solver.penalty_weight() == doctest::Approx(3.0 * range));
  const LevelSolver flat(LatticeGeometry(1, 1), 2.0, 1, 1);
  CHECK(flat.penalty_weight() == kFallbackPenaltyWeight);
}

TEST_CASE("fixed seed reproduces results, threads included") {
  const LatticeGeometry g(1, 4);
  OptimizerSchedule s;
  s.seed = 9;
  s.stage1.max_evaluations = 120;
  s.stage2.max_iterations = 10;
  s.restarts = 3;
  const auto a = solve_level(g, 2.0, 2, 1, 1, {}, s);
  const auto b = solve_level(g, 2.0, 2, 1, 1, {}, s);
  CHECK(a.params == b.params);
  CHECK(a.energy == b.energy);
  s.workers = 3;
  const auto c = solve_level(g, 2.0, 2, 1, 1, {}, s);
  CHECK(a.params == c.params);
  s.seed = 10;
  const auto d = solve_level(g, 2.0, 2, 1, 1, {}, s);
  CHECK(a.params != d.params);
}

TEST_CASE("restart statistics") {
  const LatticeGeometry g(1, 2);
  OptimizerSchedule s;
  s.stage1.max_evaluations = 30;
  s.stage2.max_iterations = 2;
  const auto r = solve_level(g, 3.0, 1, 1, 0, {}, s);
  double mean = 0.0;
  for (const auto& run : r.runs) mean += run.energy;
  mean /= static_cast<double>(r.runs.size());
  double var = 0.0;
  for (const auto& run : r.runs) var += (run.energy - mean) * (run.energy - mean);
  CHECK(r.mean == doctest::Approx(mean));
  CHECK(r.std_dev == doctest::Approx(std::sqrt(var / static_cast<double>(r.runs.size()))));
  double best = r.runs[0].objective;
  for (const auto& run : r.runs) best = std::min(best, run.objective);
  CHECK(r.objective == best);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hit(17, 0);
  parallel_for(17, 4, [&hit](int i) { hit[static_cast<std::size_t>(i)]++; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(5, 2, [](int i) { if (i == 3) throw NumericalError("x"); }),
                  NumericalError);
}

}
