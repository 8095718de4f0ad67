#include "fhvqe/vqe.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <thread>
#include <tuple>

#include "fhvqe/error.hpp"
#include "fhvqe/exactdiag.hpp"

namespace fhvqe {

ObjectiveSpec::ObjectiveSpec(ParameterizedCircuit circuit,
                             const PauliSum& hamiltonian,
                             std::vector<Statevector> priors,
                             double penalty_weight)
    : circuit_(std::move(circuit)),
      hamiltonian_(hamiltonian),
      priors_(std::move(priors)),
      penalty_weight_(penalty_weight) {
  if (hamiltonian.n_qubits() != circuit_.n_qubits) {
    throw DimensionMismatch("Hamiltonian and circuit qubit counts differ");
  }
  if (!(penalty_weight > 0.0)) {
    throw UnsupportedParameter("penalty weight must be positive");
  }
  for (const auto& p : priors_) {
    if (p.n_qubits() != circuit_.n_qubits) {
      throw DimensionMismatch("prior state has the wrong qubit count");
    }
    if (std::abs(p.norm() - 1.0) > 1e-8) {
      throw UnsupportedParameter("prior states must be normalized");
    }
  }
}

double ObjectiveSpec::value(std::span<const double> params,
                            Statevector& workspace) const {
  run_circuit_into(circuit_, params, workspace);
  double v = hamiltonian_.expectation(workspace.amplitudes());
  for (const auto& p : priors_) v += penalty_weight_ * std::norm(overlap(p, workspace));
  return v;
}

double ObjectiveSpec::value(std::span<const double> params) const {
  Statevector ws(circuit_.n_qubits);
  return value(params, ws);
}

double ObjectiveSpec::energy(const Statevector& state) const {
  return hamiltonian_.expectation(state.amplitudes());
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  // splitmix64 finalizer applied along the chain (root, a, b, c).
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(root);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

namespace {

std::vector<double> uniform_params(std::uint64_t seed, int n, double half_width) {
  std::mt19937_64 gen(seed);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& v : x) {
    // 53-bit mantissa draw, identical on every standard library.
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = (2.0 * u - 1.0) * half_width;
  }
  return x;
}

}  // namespace

std::vector<double> fit_givens_prefix(const ParameterizedCircuit& circuit,
                                      const SparseOperator& op,
                                      const std::vector<Statevector>& avoid,
                                      double weight) {
  ParameterizedCircuit prefix = circuit;
  prefix.slots.clear();
  int n_givens = 0;
  for (const auto& s : circuit.slots) {
    if (s.kind != GateKind::givens) break;
    prefix.slots.push_back(s);
    n_givens = std::max(n_givens, s.params[0] + 1);
  }
  prefix.n_params = n_givens;
  std::vector<double> angles(static_cast<std::size_t>(circuit.n_params), 0.0);
  if (n_givens == 0) return angles;

  Statevector ws(circuit.n_qubits);
  const Objective f = [&](std::span<const double> x) {
    run_circuit_into(prefix, x, ws);
    double v = op.expectation(ws.amplitudes());
    for (const auto& a : avoid) v += weight * std::norm(overlap(a, ws));
    return v;
  };
  // Zero angles sit on a stationary point whenever the reference is an
  // eigenstate of a hop; start slightly off it.
  std::vector<double> x0(static_cast<std::size_t>(n_givens));
  for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = 0.3 * std::cos(1.0 + static_cast<double>(i));
  Stage2Options opts;
  opts.max_iterations = 500;
  const auto fit = stage2_minimize(f, std::move(x0), opts);
  std::copy(fit.x.begin(), fit.x.end(), angles.begin());
  return angles;
}

std::vector<double> free_fermion_angles(const LatticeGeometry& geometry,
                                        const ParameterizedCircuit& circuit,
                                        const std::vector<Statevector>& avoid) {
  const SparseOperator kinetic(jordan_wigner(build_hubbard(geometry, 0.0), geometry.n_qubits()));
  // Any weight above the many-body kinetic bandwidth separates the levels.
  double width = 0.0;
  for (double e : single_particle_levels(geometry)) width += 2.0 * std::abs(e);
  return fit_givens_prefix(circuit, kinetic, avoid, 2.0 * width + 1.0);
}

TwoStageResult two_stage_minimize(
    const Objective& f, std::vector<double> x0, const OptimizerSchedule& schedule,
    const std::function<void(int, int, double)>& trace) {
  TwoStageResult r;
  TraceFn t1, t2;
  if (trace) {
    t1 = [&trace](int e, double v) { trace(1, e, v); };
    t2 = [&trace](int e, double v) { trace(2, e, v); };
  }
  r.stage1 = stage1_minimize(f, std::move(x0), schedule.stage1, t1);
  r.stage2 = stage2_minimize(f, r.stage1.x, schedule.stage2, t2);
  return r;
}

void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  if (workers <= 0) workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

LevelSolver::LevelSolver(const LatticeGeometry& geometry, double u_over_t,
                         int n_up, int n_down, AnsatzConfig config,
                         OptimizerSchedule schedule, double penalty_weight)
    : geometry_(geometry),
      n_up_(n_up),
      n_down_(n_down),
      schedule_(schedule),
      circuit_(build_ansatz(geometry, n_up, n_down, config)),
      hamiltonian_(jordan_wigner(build_hubbard(geometry, u_over_t),
                                 geometry.n_qubits())),
      sector_dim_(binomial(geometry.n_sites(), n_up) *
                  binomial(geometry.n_sites(), n_down)),
      penalty_weight_(penalty_weight) {
  if (schedule_.restarts < 1) throw ConfigError("restarts must be >= 1");
  if (schedule_.stage1.max_evaluations < 1 || schedule_.stage2.max_iterations < 1) {
    throw ConfigError("each optimizer stage needs at least one iteration");
  }
  if (!(penalty_weight_ > 0.0)) {
    const auto spectrum = exact_spectrum(geometry, u_over_t, n_up, n_down,
                                         static_cast<int>(sector_dim_));
    const double range = spectrum.energies.back() - spectrum.energies.front();
    penalty_weight_ = range > 1e-12 ? 3.0 * range : kFallbackPenaltyWeight;
  }
}

VqeResult LevelSolver::solve_level(int level, const VqeTraceFn& trace) {
  if (level != solved_levels()) {
    throw OrderingError("level " + std::to_string(level) +
                        " requested but only levels below " +
                        std::to_string(solved_levels()) + " are solved");
  }
  if (static_cast<std::size_t>(level) >= sector_dim_) {
    throw OrderingError("level " + std::to_string(level) + " does not exist in a sector of dimension " +
                        std::to_string(sector_dim_));
  }

  std::vector<double> center(static_cast<std::size_t>(circuit_.n_params), 0.0);
  if (schedule_.free_fermion_start) {
    center = free_fermion_angles(geometry_, circuit_, center_states_);
    center_states_.push_back(run_circuit(circuit_, center));
  }
  std::vector<Statevector> priors;
  for (const auto& r : results_) priors.push_back(r.state);
  const ObjectiveSpec spec(circuit_, hamiltonian_, std::move(priors), penalty_weight_);

  struct Run {
    RestartRecord record;
    std::vector<double> params;
    std::vector<std::tuple<int, int, double>> trace;
  };
  std::vector<Run> runs(static_cast<std::size_t>(schedule_.restarts));

  parallel_for(schedule_.restarts, schedule_.workers, [&](int r) {
    Run& run = runs[static_cast<std::size_t>(r)];
    run.record.seed = derive_seed(schedule_.seed, static_cast<std::uint64_t>(level),
                                  static_cast<std::uint64_t>(r));
    auto x0 = uniform_params(run.record.seed, circuit_.n_params, schedule_.init_scale);
    const auto& base =
        schedule_.warm_start && level > 0 ? results_.back().params : center;
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] += base[i];
    Statevector ws(circuit_.n_qubits);
    const Objective f = [&spec, &ws](std::span<const double> x) { return spec.value(x, ws); };
    std::function<void(int, int, double)> rec;
    if (trace) {
      rec = [&run](int stage, int e, double v) { run.trace.emplace_back(stage, e, v); };
    }
    const auto out = two_stage_minimize(f, std::move(x0), schedule_, rec);
    run.params = out.stage2.x;
    const Statevector state = run_circuit(circuit_, run.params);
    run.record.objective = out.stage2.value;
    run.record.energy = spec.energy(state);
    run.record.stage1_objective = out.stage1.value;
    run.record.evaluations = out.stage1.evaluations + out.stage2.evaluations;
    run.record.line_search_failed = out.stage2.line_search_failed;
  });

  if (trace) {
    for (int r = 0; r < schedule_.restarts; ++r) {
      for (const auto& [stage, e, v] : runs[static_cast<std::size_t>(r)].trace) trace(r, stage, e, v);
    }
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].record.objective < runs[best].record.objective) best = r;
  }

  VqeResult result;
  result.level = level;
  result.n_up = n_up_;
  result.n_down = n_down_;
  result.penalty_weight = penalty_weight_;
  result.params = runs[best].params;
  result.objective = runs[best].record.objective;
  result.energy = runs[best].record.energy;
  result.state = run_circuit(circuit_, result.params);
  double sum = 0.0;
  for (const auto& run : runs) {
    result.runs.push_back(run.record);
    sum += run.record.energy;
  }
  result.mean = sum / static_cast<double>(runs.size());
  double var = 0.0;
  for (const auto& run : runs) var += (run.record.energy - result.mean) * (run.record.energy - result.mean);
  result.std_dev = std::sqrt(var / static_cast<double>(runs.size()));
  for (const auto& prior : spec.priors()) {
    result.overlaps_with_priors.push_back(std::norm(overlap(prior, result.state)));
  }
  results_.push_back(std::move(result));
  return results_.back();
}

VqeResult solve_level(const LatticeGeometry& geometry, double u_over_t, int n_up,
                      int n_down, int level, const AnsatzConfig& config,
                      const OptimizerSchedule& schedule) {
  LevelSolver solver(geometry, u_over_t, n_up, n_down, config, schedule);
  for (int k = 0; k < level; ++k) (void)solver.solve_level(k);
  return solver.solve_level(level);
}

}  // namespace fhvqe
