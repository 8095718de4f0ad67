#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fhvqe/hamiltonian.hpp"
#include "fhvqe/lattice.hpp"

namespace fhvqe {

/// Lowest eigenvalues of one (n_up, n_down) block, ascending.
struct SpectrumResult {
  int n_up = 0;
  int n_down = 0;
  int requested = 0;
  std::vector<double> energies;
  /// Set when `requested` exceeded the sector dimension.
  bool truncated = false;
};

/// Full eigendecomposition of a sector block; eigenvector columns are
/// expressed in `basis` order.
struct SectorEigensystem {
  SectorBasis basis;
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
};

SectorEigensystem exact_eigensystem(const LatticeGeometry& geometry,
                                    double u_over_t, int n_up, int n_down);

/// Throws IndexError for an invalid sector or k < 1.
SpectrumResult exact_spectrum(const LatticeGeometry& geometry, double u_over_t,
                              int n_up, int n_down, int k);

/// Single-particle eigenvalues of the open-boundary hopping matrix, ascending.
std::vector<double> single_particle_levels(const LatticeGeometry& geometry);

/// Non-interacting ground energy: fill the lowest n_up and n_down modes.
double free_fermion_ground(const LatticeGeometry& geometry, int n_up,
                           int n_down);

}  // namespace fhvqe
