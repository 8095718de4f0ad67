#include "fhvqe/exactdiag.hpp"

#include <algorithm>
#include <numeric>

#include "fhvqe/error.hpp"

namespace fhvqe {

SectorEigensystem exact_eigensystem(const LatticeGeometry& geometry,
                                    double u_over_t, int n_up, int n_down) {
  auto [basis, h] =
      sector_matrix(build_hubbard(geometry, u_over_t), geometry, n_up, n_down);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sector eigensolve did not converge");
  }
  return {std::move(basis), solver.eigenvalues(), solver.eigenvectors()};
}

SpectrumResult exact_spectrum(const LatticeGeometry& geometry, double u_over_t,
                              int n_up, int n_down, int k) {
  if (k < 1) throw IndexError("requested level count must be >= 1");
  auto [basis, h] =
      sector_matrix(build_hubbard(geometry, u_over_t), geometry, n_up, n_down);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("sector eigensolve did not converge");
  }
  SpectrumResult result{n_up, n_down, k, {}, false};
  const auto dim = static_cast<int>(basis.size());
  const int kept = std::min(k, dim);
  result.truncated = kept < k;
  result.energies.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + kept);
  return result;
}

std::vector<double> single_particle_levels(const LatticeGeometry& geometry) {
  const int n = geometry.n_sites();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (const Bond& b : geometry.bonds()) {
    t(b.site_a, b.site_b) = -1.0;
    t(b.site_b, b.site_a) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      t, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double free_fermion_ground(const LatticeGeometry& geometry, int n_up,
                           int n_down) {
  const int n = geometry.n_sites();
  if (n_up < 0 || n_down < 0 || n_up > n || n_down > n) {
    throw IndexError("occupation counts exceed the number of sites");
  }
  const auto levels = single_particle_levels(geometry);
  return std::accumulate(levels.begin(), levels.begin() + n_up, 0.0) +
         std::accumulate(levels.begin(), levels.begin() + n_down, 0.0);
}

}  // namespace fhvqe
