#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fhvqe {

using Objective = std::function<double(std::span<const double>)>;

/// Called once per objective evaluation with the running best value.
using TraceFn = std::function<void(int evaluation, double best_value)>;

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
  /// Stage 1: trust radius reached rho_end. Stage 2: gradient or
  /// function-change tolerance met.
  bool converged = false;
  /// Stage 2 only: the line search could not find an acceptable step.
  bool line_search_failed = false;
  std::string message;
};

/// Derivative-free stage: linear models over a simplex, unconstrained COBYLA.
struct Stage1Options {
  /// Objective evaluation budget, the initial simplex included.
  int max_evaluations = 500;
  double rho_begin = 0.5;
  double rho_end = 1e-4;
};

/**
 * Minimizes `f` without derivatives. The objective is modelled linearly by
 * interpolation on n + 1 simplex vertices; each step moves a distance rho
 * down the model gradient, and rho halves whenever steps stop paying off on
 * a well-shaped simplex. Returns the best point seen, so value <= f(x0).
 *
 * Throws NumericalError if f returns a non-finite value.
 */
MinimizeResult stage1_minimize(const Objective& f, std::vector<double> x0,
                               const Stage1Options& options = {},
                               const TraceFn& trace = {});

struct Stage2Options {
  int max_iterations = 50;
  /// Central-difference step per coordinate.
  double fd_step = 1e-5;
  int memory = 10;
  double gradient_tolerance = 1e-9;
  double relative_tolerance = 1e-14;
};

/// Central-difference gradient, 2n evaluations.
std::vector<double> finite_difference_gradient(const Objective& f,
                                               std::span<const double> x,
                                               double step);

/// Limited-memory BFGS with a Wolfe line search on finite-difference
/// gradients. The best value never increases.
MinimizeResult stage2_minimize(const Objective& f, std::vector<double> x0,
                               const Stage2Options& options = {},
                               const TraceFn& trace = {});

}  // namespace fhvqe
