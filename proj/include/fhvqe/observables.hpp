#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fhvqe/ansatz.hpp"
#include "fhvqe/lattice.hpp"
#include "fhvqe/vqe.hpp"

namespace fhvqe {

/// Degeneracy tolerances used by the spin gap.
inline constexpr double kExactDegeneracyTol = 1e-8;
inline constexpr double kVqeDegeneracyTol = 1e-3;

/// Supplies per-sector energies of a given level.
class EnergySource {
 public:
  virtual ~EnergySource() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual double degeneracy_tolerance() const = 0;
  [[nodiscard]] virtual std::uint64_t seed() const { return 0; }
  /// Energy of `level` in sector (n_up, n_down), or nullopt when the sector
  /// has no such level. Must be safe to call concurrently.
  [[nodiscard]] virtual std::optional<double> sector_energy(
      const LatticeGeometry& geometry, double u, int n_up, int n_down,
      int level) const = 0;
};

class ExactSource final : public EnergySource {
 public:
  [[nodiscard]] std::string name() const override { return "exact"; }
  [[nodiscard]] double degeneracy_tolerance() const override { return kExactDegeneracyTol; }
  [[nodiscard]] std::optional<double> sector_energy(const LatticeGeometry& geometry,
                                                    double u, int n_up, int n_down,
                                                    int level) const override;
};

/// Runs the VQE per sector. The schedule seed is the root; each sector gets
/// its own seed split from it, so cells do not depend on evaluation order.
class VqeSource final : public EnergySource {
 public:
  VqeSource(AnsatzConfig config, OptimizerSchedule schedule)
      : config_(config), schedule_(schedule) {}
  [[nodiscard]] std::string name() const override { return "vqe"; }
  [[nodiscard]] double degeneracy_tolerance() const override { return kVqeDegeneracyTol; }
  [[nodiscard]] std::optional<double> sector_energy(const LatticeGeometry& geometry,
                                                    double u, int n_up, int n_down,
                                                    int level) const override;
  [[nodiscard]] std::uint64_t seed() const override { return schedule_.seed; }
  [[nodiscard]] const OptimizerSchedule& schedule() const { return schedule_; }

 private:
  AnsatzConfig config_;
  OptimizerSchedule schedule_;
};

/// Sector energies at fixed geometry, U and level.
using SectorEnergyFn = std::function<std::optional<double>(int n_up, int n_down)>;

struct SectorGround {
  double energy = 0.0;
  int n_up = 0;
  int n_down = 0;
};

/// Lowest energy over the splits of N electrons. Only n_up >= n_down is
/// visited; spin-flipped sectors are degenerate with their partners. Ties go
/// to smaller |n_up - n_down|, then larger n_up.
std::optional<SectorGround> sector_ground(const SectorEnergyFn& energy, int n_sites,
                                          int n_electrons);
std::optional<SectorGround> sector_ground(const EnergySource& source,
                                          const LatticeGeometry& geometry, double u,
                                          int n_electrons, int level = 0);

/// E(N+1) + E(N-1) - 2E(N); nullopt at the filling boundaries.
std::optional<double> charge_gap(const SectorEnergyFn& energy, int n_sites,
                                 int n_electrons);
std::optional<double> charge_gap(const EnergySource& source,
                                 const LatticeGeometry& geometry, double u,
                                 int n_electrons, int level = 0);

/// Gap between the lowest sector energy and the lowest one not within
/// `tolerance` of it; nullopt when every sector is degenerate.
std::optional<double> spin_gap(const SectorEnergyFn& energy, int n_sites,
                               int n_electrons, double tolerance);
std::optional<double> spin_gap(const EnergySource& source,
                               const LatticeGeometry& geometry, double u,
                               int n_electrons, int level = 0);

std::vector<double> default_u_grid();

struct SectorEntry {
  double u = 0.0;
  int n_up = 0;
  int n_down = 0;
  std::optional<double> energy;
  /// Non-empty when the solver threw for this sector.
  std::string error;
};

struct GapCell {
  int n_electrons = 0;
  double u = 0.0;
  std::optional<SectorGround> ground;
  std::optional<double> charge_gap;
  std::optional<double> spin_gap;

  /// Bit 0 energy, bit 1 charge gap, bit 2 spin gap.
  [[nodiscard]] int defined_flags() const;
};

struct GapDiagram {
  std::string geometry;
  std::string source;
  int level = 0;
  std::uint64_t seed = 0;
  std::vector<double> u_values;
  int max_electrons = 0;
  /// Ordered by U, then N.
  std::vector<GapCell> cells;
  /// Every sector energy the cells were built from.
  std::vector<SectorEntry> sectors;

  [[nodiscard]] const GapCell& at(std::size_t u_index, int n_electrons) const;
};

/**
 * Full (N, U) grid for N = 1..2*n_sites. Sector energies are computed once
 * each, fanned out over `workers` threads; a failing sector leaves its
 * cells undefined instead of aborting the sweep.
 */
GapDiagram build_diagram(const EnergySource& source, const LatticeGeometry& geometry,
                         const std::vector<double>& u_values, int level = 0,
                         int workers = 1);

/// Level-2 variant of build_diagram.
GapDiagram excited_gap_diagram(const EnergySource& source,
                               const LatticeGeometry& geometry,
                               const std::vector<double>& u_values, int workers = 1);

enum class Quantity { energy, charge_gap, spin_gap };
const char* to_string(Quantity q);

struct ErrorStats {
  Quantity quantity = Quantity::energy;
  int count = 0;
  double mae = 0.0;
  double mse = 0.0;
  /// |mean(vqe) - mean(exact)| / |mean(exact)| * 100.
  double mpe = 0.0;
};

/// Compares cells defined in both diagrams. Throws DimensionMismatch when
/// the grids differ.
std::vector<ErrorStats> error_summary(const GapDiagram& vqe, const GapDiagram& exact);

void write_csv(std::ostream& out, const GapDiagram& diagram);
std::string to_json(const GapDiagram& diagram);
std::string error_summary_json(const std::vector<ErrorStats>& stats);
/// Heatmap over N (x) and U (y) with a linear colour scale.
std::string heatmap_svg(const GapDiagram& diagram, Quantity quantity);

}  // namespace fhvqe
