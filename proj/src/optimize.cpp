#include "fhvqe/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>

#include <Eigen/Dense>

#include "fhvqe/error.hpp"

namespace fhvqe {

namespace {

/// Counts evaluations, tracks the best point and rejects non-finite values.
class Evaluator {
 public:
  Evaluator(const Objective& f, const TraceFn& trace, int budget)
      : f_(f), trace_(trace), budget_(budget) {}

  [[nodiscard]] bool exhausted() const { return count_ >= budget_; }
  [[nodiscard]] int count() const { return count_; }
  [[nodiscard]] double best_value() const { return best_value_; }
  [[nodiscard]] const std::vector<double>& best_x() const { return best_x_; }

  double operator()(std::span<const double> x) {
    const double v = f_(x);
    ++count_;
    if (!std::isfinite(v)) {
      throw NumericalError("objective returned a non-finite value at "
                           "evaluation " + std::to_string(count_));
    }
    if (v < best_value_) {
      best_value_ = v;
      best_x_.assign(x.begin(), x.end());
    }
    if (trace_) trace_(count_, best_value_);
    return v;
  }

 private:
  const Objective& f_;
  const TraceFn& trace_;
  int budget_;
  int count_ = 0;
  double best_value_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;
};

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

MinimizeResult stage1_minimize(const Objective& f, std::vector<double> x0,
                               const Stage1Options& options,
                               const TraceFn& trace) {
  // Simplex acceptability and step-size constants of COBYLA.
  constexpr double kAlpha = 0.25;  // minimum vertex distance from opposite face
  constexpr double kBeta = 2.1;    // maximum edge length from the best vertex
  constexpr double kGamma = 0.5;   // geometry step length
  constexpr double kDelta = 1.1;   // edge length that favours dropping a vertex

  const auto n = static_cast<Eigen::Index>(x0.size());
  Evaluator eval(f, trace, options.max_evaluations);
  MinimizeResult result;

  auto finish = [&](bool converged, std::string message) {
    result.x = eval.best_x();
    result.value = eval.best_value();
    result.evaluations = eval.count();
    result.converged = converged;
    result.message = std::move(message);
    return result;
  };

  std::vector<VectorXd> vertex;
  std::vector<double> value;
  vertex.push_back(to_eigen(x0));
  value.push_back(eval(x0));
  if (n == 0) return finish(true, "no free parameters");

  double rho = options.rho_begin;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (eval.exhausted()) return finish(false, "evaluation budget exhausted");
    VectorXd v = vertex[0];
    v(j) += rho;
    value.push_back(eval(to_std(v)));
    vertex.push_back(std::move(v));
  }

  bool poor_step = false;
  while (true) {
    ++result.iterations;
    const auto best = static_cast<std::size_t>(
        std::min_element(value.begin(), value.end()) - value.begin());
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < vertex.size(); ++k) {
      if (k != best) others.push_back(k);
    }

    MatrixXd edges(n, n);
    VectorXd rise(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto v = others[static_cast<std::size_t>(k)];
      edges.col(k) = vertex[v] - vertex[best];
      rise(k) = value[v] - value[best];
    }
    Eigen::FullPivLU<MatrixXd> lu(edges);
    if (!lu.isInvertible()) {
      // Degenerate simplex: rebuild it around the best vertex.
      for (Eigen::Index k = 0; k < n; ++k) {
        if (eval.exhausted()) return finish(false, "evaluation budget exhausted");
        const auto v = others[static_cast<std::size_t>(k)];
        vertex[v] = vertex[best];
        vertex[v](k) += rho;
        value[v] = eval(to_std(vertex[v]));
      }
      continue;
    }
    const MatrixXd inv = lu.inverse();
    // Linear model f(best + d) ~ f(best) + g.d interpolating every vertex.
    const VectorXd g = inv.transpose() * rise;

    // Acceptability: no edge longer than beta*rho, no vertex closer than
    // alpha*rho to the opposite face.
    VectorXd edge_len(n), face_dist(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      edge_len(k) = edges.col(k).norm();
      face_dist(k) = 1.0 / inv.row(k).norm();
    }
    Eigen::Index worst = -1;
    Eigen::Index longest;
    if (edge_len.maxCoeff(&longest) > kBeta * rho) {
      worst = longest;
    } else {
      Eigen::Index flattest;
      if (face_dist.minCoeff(&flattest) < kAlpha * rho) worst = flattest;
    }

    if (worst >= 0) {
      poor_step = false;
      if (eval.exhausted()) return finish(false, "evaluation budget exhausted");
      VectorXd step = (kGamma * rho * face_dist(worst)) * inv.row(worst).transpose();
      if (g.dot(step) > 0.0) step = -step;
      const auto v = others[static_cast<std::size_t>(worst)];
      vertex[v] = vertex[best] + step;
      value[v] = eval(to_std(vertex[v]));
      continue;
    }

    if (poor_step) {
      poor_step = false;
      if (rho <= options.rho_end) return finish(true, "trust radius reached rho_end");
      rho *= 0.5;
      if (rho <= 1.5 * options.rho_end) rho = options.rho_end;
      continue;
    }

    const double gnorm = g.norm();
    if (!(gnorm > 0.0)) {
      poor_step = true;
      continue;
    }
    if (eval.exhausted()) return finish(false, "evaluation budget exhausted");
    const VectorXd step = -(rho / gnorm) * g;
    const VectorXd trial = vertex[best] + step;
    const double predicted = rho * gnorm;
    const double trial_value = eval(to_std(trial));
    const double actual = value[best] - trial_value;

    // Choose the vertex the trial point replaces: keep the simplex volume
    // (ratio > 1 required when the step did not improve), preferring to drop
    // far-away vertices.
    const VectorXd volume_ratio = (inv * step).cwiseAbs();
    Eigen::Index drop = -1;
    double best_ratio = actual > 0.0 ? 0.0 : 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (volume_ratio(k) > best_ratio) {
        best_ratio = volume_ratio(k);
        drop = k;
      }
    }
    double edge_max = kDelta * rho;
    Eigen::Index far = -1;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double new_face = volume_ratio(k) * face_dist(k);
      if (new_face >= kAlpha * rho || new_face >= face_dist(k)) {
        const auto v = others[static_cast<std::size_t>(k)];
        const double len =
            actual > 0.0 ? (vertex[v] - trial).norm() : edge_len(k);
        if (len > edge_max) {
          far = k;
          edge_max = len;
        }
      }
    }
    if (far >= 0) drop = far;
    if (drop >= 0) {
      const auto v = others[static_cast<std::size_t>(drop)];
      vertex[v] = trial;
      value[v] = trial_value;
    }
    if (drop < 0 || actual < 0.1 * predicted) poor_step = true;
  }
}

std::vector<double> finite_difference_gradient(const Objective& f,
                                               std::span<const double> x,
                                               double step) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

MinimizeResult stage2_minimize(const Objective& f, std::vector<double> x0,
                               const Stage2Options& options,
                               const TraceFn& trace) {
  constexpr double kArmijo = 1e-4;
  constexpr double kCurvature = 0.9;
  constexpr int kMaxTrials = 20;

  Evaluator eval(f, trace, std::numeric_limits<int>::max());
  const Objective counted = [&eval](std::span<const double> x) { return eval(x); };
  MinimizeResult result;

  VectorXd x = to_eigen(x0);
  double fx = counted(x0);
  VectorXd g = to_eigen(finite_difference_gradient(counted, x0, options.fd_step));

  std::deque<VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  bool converged = g.size() == 0 || g.cwiseAbs().maxCoeff() <= options.gradient_tolerance;
  bool ls_failed = false;
  std::string message = converged ? "gradient below tolerance at start" : "";

  for (int it = 0; it < options.max_iterations && !converged; ++it) {
    ++result.iterations;
    // Two-loop recursion for d = -H g.
    VectorXd q = g;
    std::vector<double> a(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      a[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= a[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      q /= std::max(1.0, g.norm());
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double b = rho_hist[k] * y_hist[k].dot(q);
      q += (a[k] - b) * s_hist[k];
    }
    VectorXd d = -q;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -g / std::max(1.0, g.norm());
      slope = g.dot(d);
    }

    // Strong Wolfe search; each trial point carries its own gradient.
    struct Trial {
      double alpha;
      double f;
      double slope;
      VectorXd g;
    };
    auto probe = [&](double alpha) {
      const auto pt = to_std(x + alpha * d);
      Trial t{alpha, counted(pt), 0.0,
              to_eigen(finite_difference_gradient(counted, pt, options.fd_step))};
      t.slope = t.g.dot(d);
      return t;
    };
    const Trial origin{0.0, fx, slope, g};
    auto armijo = [&](const Trial& t) { return t.f <= fx + kArmijo * t.alpha * slope; };
    auto curvature = [&](const Trial& t) { return std::abs(t.slope) <= kCurvature * std::abs(slope); };

    std::optional<Trial> found;
    int trials = 0;
    auto zoom = [&](Trial lo, Trial hi) {
      while (trials < kMaxTrials) {
        // Minimizer of the cubic through both ends, kept away from them.
        const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (lo.alpha - hi.alpha);
        const double disc = d1 * d1 - lo.slope * hi.slope;
        double a = 0.5 * (lo.alpha + hi.alpha);
        if (disc >= 0.0) {
          const double d2 = std::copysign(std::sqrt(disc), hi.alpha - lo.alpha);
          const double c = hi.alpha - (hi.alpha - lo.alpha) * (hi.slope + d2 - d1) /
                                          (hi.slope - lo.slope + 2.0 * d2);
          const double lo_a = std::min(lo.alpha, hi.alpha);
          const double width = std::abs(hi.alpha - lo.alpha);
          if (std::isfinite(c)) a = std::clamp(c, lo_a + 0.1 * width, lo_a + 0.9 * width);
        }
        ++trials;
        Trial t = probe(a);
        if (!armijo(t) || t.f >= lo.f) {
          hi = std::move(t);
        } else {
          if (curvature(t)) return std::optional<Trial>(std::move(t));
          if (t.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
          lo = std::move(t);
        }
      }
      // Out of trials: settle for the best sufficient-decrease point.
      return lo.alpha > 0.0 ? std::optional<Trial>(std::move(lo)) : std::nullopt;
    };

    Trial prev = origin;
    double alpha = 1.0;
    while (trials < kMaxTrials) {
      ++trials;
      Trial t = probe(alpha);
      if (!armijo(t) || (trials > 1 && t.f >= prev.f)) {
        found = zoom(prev, std::move(t));
        break;
      }
      if (curvature(t)) {
        found = std::move(t);
        break;
      }
      if (t.slope >= 0.0) {
        found = zoom(std::move(t), prev);
        break;
      }
      prev = std::move(t);
      alpha *= 2.0;
    }
    if (!found && prev.alpha > 0.0) found = std::move(prev);
    if (!found) {
      ls_failed = true;
      message = "line search failed to decrease the objective";
      break;
    }

    const VectorXd x_new = x + found->alpha * d;
    const double f_new = found->f;
    const VectorXd g_new = found->g;
    const VectorXd s = x_new - x;
    const VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double f_old = fx;
    x = x_new;
    fx = f_new;
    g = g_new;
    if (g.cwiseAbs().maxCoeff() <= options.gradient_tolerance) {
      converged = true;
      message = "gradient below tolerance";
    } else if (f_old - fx <= options.relative_tolerance *
                                  std::max({std::abs(f_old), std::abs(fx), 1.0})) {
      converged = true;
      message = "relative decrease below tolerance";
    }
  }
  if (!converged && !ls_failed && message.empty()) message = "iteration limit reached";

  // Accepted iterates decrease monotonically; probe points are not returned.
  result.x = to_std(x);
  result.value = fx;
  result.evaluations = eval.count();
  result.converged = converged;
  result.line_search_failed = ls_failed;
  result.message = message;
  return result;
}

}  // namespace fhvqe
