#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fhvqe/ansatz.hpp"
#include "fhvqe/hamiltonian.hpp"
#include "fhvqe/lattice.hpp"
#include "fhvqe/optimize.hpp"
#include "fhvqe/simulator.hpp"

namespace fhvqe {

inline constexpr double kFallbackPenaltyWeight = 10.0;

/**
 * Energy of the circuit state plus a deflation penalty
 *   <psi|H|psi> + weight * sum_k |<prior_k|psi>|^2.
 * Priors are frozen statevectors of lower levels.
 */
class ObjectiveSpec {
 public:
  ObjectiveSpec(ParameterizedCircuit circuit, const PauliSum& hamiltonian,
                std::vector<Statevector> priors = {},
                double penalty_weight = kFallbackPenaltyWeight);

  [[nodiscard]] const ParameterizedCircuit& circuit() const { return circuit_; }
  [[nodiscard]] const std::vector<Statevector>& priors() const { return priors_; }
  [[nodiscard]] double penalty_weight() const { return penalty_weight_; }
  [[nodiscard]] const SparseOperator& hamiltonian() const { return hamiltonian_; }

  /// Penalized objective. `workspace` receives the circuit state.
  double value(std::span<const double> params, Statevector& workspace) const;
  double value(std::span<const double> params) const;
  /// Plain energy of a state, without penalty.
  [[nodiscard]] double energy(const Statevector& state) const;

 private:
  ParameterizedCircuit circuit_;
  SparseOperator hamiltonian_;
  std::vector<Statevector> priors_;
  double penalty_weight_;
};

struct OptimizerSchedule {
  Stage1Options stage1{};
  Stage2Options stage2{};
  int restarts = 5;
  std::uint64_t seed = 0;
  /// Half-width of the uniform initial-parameter distribution.
  double init_scale = 0.1;
  /// Start levels > 0 from the previous level's best parameters.
  bool warm_start = false;
  /// Centre the Givens angles of level k on the k-th U = 0 state reachable
  /// by the Givens layer, instead of on zero.
  bool free_fermion_start = true;
  /// Threads used for independent restarts; 0 picks hardware concurrency.
  int workers = 1;
};

struct RestartRecord {
  std::uint64_t seed = 0;
  double objective = 0.0;
  double energy = 0.0;
  double stage1_objective = 0.0;
  int evaluations = 0;
  bool line_search_failed = false;
};

struct VqeResult {
  int level = 0;
  int n_up = 0;
  int n_down = 0;
  /// Plain energy of the restart with the lowest penalized objective.
  double energy = 0.0;
  double objective = 0.0;
  std::vector<double> params;
  std::vector<RestartRecord> runs;
  double mean = 0.0;
  double std_dev = 0.0;
  /// |<prior_k|psi>|^2 of the reported state against every lower level.
  std::vector<double> overlaps_with_priors;
  double penalty_weight = 0.0;
  Statevector state;
};

/// Streams (restart, stage, evaluation, best objective) rows.
using VqeTraceFn =
    std::function<void(int restart, int stage, int evaluation, double value)>;

/// Seed of restart `restart` at `level`, split from `root`.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Stage 1 then stage 2 from a single start.
struct TwoStageResult {
  MinimizeResult stage1;
  MinimizeResult stage2;
};
TwoStageResult two_stage_minimize(const Objective& f, std::vector<double> x0,
                                  const OptimizerSchedule& schedule,
                                  const std::function<void(int stage, int evaluation,
                                                           double value)>& trace = {});

/**
 * Ground and excited levels of one (n_up, n_down) sector, solved in order.
 * Level k deflates every converged lower level.
 */
class LevelSolver {
 public:
  /// penalty_weight <= 0 selects 3 x (exact sector spectral range), or the
  /// fallback weight when the range is zero.
  LevelSolver(const LatticeGeometry& geometry, double u_over_t, int n_up,
              int n_down, AnsatzConfig config = {}, OptimizerSchedule schedule = {},
              double penalty_weight = 0.0);

  [[nodiscard]] int solved_levels() const { return static_cast<int>(results_.size()); }
  [[nodiscard]] std::size_t sector_dimension() const { return sector_dim_; }
  [[nodiscard]] double penalty_weight() const { return penalty_weight_; }
  [[nodiscard]] const ParameterizedCircuit& circuit() const { return circuit_; }
  [[nodiscard]] const PauliSum& hamiltonian() const { return hamiltonian_; }
  [[nodiscard]] const std::vector<VqeResult>& results() const { return results_; }

  /// Throws OrderingError unless level == solved_levels() and level is
  /// below the sector dimension.
  VqeResult solve_level(int level, const VqeTraceFn& trace = {});

 private:
  LatticeGeometry geometry_;
  int n_up_;
  int n_down_;
  OptimizerSchedule schedule_;
  ParameterizedCircuit circuit_;
  PauliSum hamiltonian_;
  std::size_t sector_dim_;
  double penalty_weight_;
  std::vector<Statevector> center_states_;
  std::vector<VqeResult> results_;
};

/// Convenience wrapper: levels 0..level of one sector.
VqeResult solve_level(const LatticeGeometry& geometry, double u_over_t, int n_up,
                      int n_down, int level, const AnsatzConfig& config = {},
                      const OptimizerSchedule& schedule = {});

/**
 * Angles for the Givens-only prefix of `circuit` minimizing
 * <op> + weight * sum |<avoid_k|psi>|^2. Entries past the prefix are zero.
 */
std::vector<double> fit_givens_prefix(const ParameterizedCircuit& circuit,
                                      const SparseOperator& op,
                                      const std::vector<Statevector>& avoid,
                                      double weight);

/**
 * Givens angles that bring the reference occupation to the lowest U = 0
 * state orthogonal to `avoid`, by descent on the hopping energy.
 */
std::vector<double> free_fermion_angles(const LatticeGeometry& geometry,
                                        const ParameterizedCircuit& circuit,
                                        const std::vector<Statevector>& avoid = {});

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

}  // namespace fhvqe
