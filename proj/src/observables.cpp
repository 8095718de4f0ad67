#include "fhvqe/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "fhvqe/error.hpp"
#include "fhvqe/exactdiag.hpp"
#include "fhvqe/hamiltonian.hpp"

namespace fhvqe {

namespace {

void check_sector(const LatticeGeometry& geometry, int n_up, int n_down, int level) {
  const int n = geometry.n_sites();
  if (n_up < 0 || n_up > n || n_down < 0 || n_down > n) {
    throw IndexError("sector (" + std::to_string(n_up) + "," + std::to_string(n_down) +
                     ") outside 0.." + std::to_string(n));
  }
  if (level < 0) throw IndexError("level must be non-negative");
}

void check_electrons(int n_sites, int n_electrons) {
  if (n_electrons < 1 || n_electrons > 2 * n_sites) {
    throw IndexError("N = " + std::to_string(n_electrons) + " outside 1.." +
                     std::to_string(2 * n_sites));
  }
}

/// Sector energies with n_up >= n_down at fixed N, in visiting order.
std::vector<SectorGround> sector_energies(const SectorEnergyFn& energy, int n_sites,
                                          int n_electrons) {
  std::vector<SectorGround> out;
  for (int n_up = (n_electrons + 1) / 2; n_up <= std::min(n_electrons, n_sites); ++n_up) {
    const int n_down = n_electrons - n_up;
    if (n_down > n_sites) continue;
    if (const auto e = energy(n_up, n_down)) out.push_back({*e, n_up, n_down});
  }
  return out;
}

SectorEnergyFn bind(const EnergySource& source, const LatticeGeometry& geometry,
                    double u, int level) {
  return [&source, &geometry, u, level](int n_up, int n_down) {
    return source.sector_energy(geometry, u, n_up, n_down, level);
  };
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::optional<double> ExactSource::sector_energy(const LatticeGeometry& geometry,
                                                 double u, int n_up, int n_down,
                                                 int level) const {
  check_sector(geometry, n_up, n_down, level);
  const auto dim = binomial(geometry.n_sites(), n_up) * binomial(geometry.n_sites(), n_down);
  if (static_cast<std::size_t>(level) >= dim) return std::nullopt;
  return exact_spectrum(geometry, u, n_up, n_down, level + 1).energies.back();
}

std::optional<double> VqeSource::sector_energy(const LatticeGeometry& geometry,
                                               double u, int n_up, int n_down,
                                               int level) const {
  check_sector(geometry, n_up, n_down, level);
  const auto dim = binomial(geometry.n_sites(), n_up) * binomial(geometry.n_sites(), n_down);
  if (static_cast<std::size_t>(level) >= dim) return std::nullopt;
  OptimizerSchedule schedule = schedule_;
  schedule.seed = derive_seed(schedule_.seed, static_cast<std::uint64_t>(n_up),
                              static_cast<std::uint64_t>(n_down),
                              std::bit_cast<std::uint64_t>(u));
  LevelSolver solver(geometry, u, n_up, n_down, config_, schedule);
  for (int k = 0; k < level; ++k) (void)solver.solve_level(k);
  const double e = solver.solve_level(level).energy;
  if (!std::isfinite(e)) throw NumericalError("non-finite VQE energy");
  return e;
}

std::optional<SectorGround> sector_ground(const SectorEnergyFn& energy, int n_sites,
                                          int n_electrons) {
  check_electrons(n_sites, n_electrons);
  const auto all = sector_energies(energy, n_sites, n_electrons);
  if (all.empty()) return std::nullopt;
  // Visiting order is already smaller |n_up - n_down| first, so a strict
  // comparison keeps the tie-break.
  const SectorGround* best = &all.front();
  for (const auto& s : all) {
    if (s.energy < best->energy) best = &s;
  }
  return *best;
}

std::optional<SectorGround> sector_ground(const EnergySource& source,
                                          const LatticeGeometry& geometry, double u,
                                          int n_electrons, int level) {
  return sector_ground(bind(source, geometry, u, level), geometry.n_sites(), n_electrons);
}

std::optional<double> charge_gap(const SectorEnergyFn& energy, int n_sites,
                                 int n_electrons) {
  check_electrons(n_sites, n_electrons);
  if (n_electrons - 1 < 1 || n_electrons + 1 > 2 * n_sites) return std::nullopt;
  const auto lo = sector_ground(energy, n_sites, n_electrons - 1);
  const auto mid = sector_ground(energy, n_sites, n_electrons);
  const auto hi = sector_ground(energy, n_sites, n_electrons + 1);
  if (!lo || !mid || !hi) return std::nullopt;
  return hi->energy + lo->energy - 2.0 * mid->energy;
}

std::optional<double> charge_gap(const EnergySource& source,
                                 const LatticeGeometry& geometry, double u,
                                 int n_electrons, int level) {
  return charge_gap(bind(source, geometry, u, level), geometry.n_sites(), n_electrons);
}

std::optional<double> spin_gap(const SectorEnergyFn& energy, int n_sites,
                               int n_electrons, double tolerance) {
  check_electrons(n_sites, n_electrons);
  const auto all = sector_energies(energy, n_sites, n_electrons);
  if (all.empty()) return std::nullopt;
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& s : all) lowest = std::min(lowest, s.energy);
  std::optional<double> next;
  for (const auto& s : all) {
    if (s.energy - lowest <= tolerance) continue;
    if (!next || s.energy < *next) next = s.energy;
  }
  if (!next) return std::nullopt;
  return *next - lowest;
}

std::optional<double> spin_gap(const EnergySource& source,
                               const LatticeGeometry& geometry, double u,
                               int n_electrons, int level) {
  return spin_gap(bind(source, geometry, u, level), geometry.n_sites(), n_electrons,
                  source.degeneracy_tolerance());
}

std::vector<double> default_u_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(0.5 * i);
  return grid;
}

int GapCell::defined_flags() const {
  return (ground ? 1 : 0) | (charge_gap ? 2 : 0) | (spin_gap ? 4 : 0);
}

const GapCell& GapDiagram::at(std::size_t u_index, int n_electrons) const {
  if (u_index >= u_values.size() || n_electrons < 1 || n_electrons > max_electrons) {
    throw IndexError("diagram cell out of range");
  }
  return cells[u_index * static_cast<std::size_t>(max_electrons) +
               static_cast<std::size_t>(n_electrons - 1)];
}

GapDiagram build_diagram(const EnergySource& source, const LatticeGeometry& geometry,
                         const std::vector<double>& u_values, int level, int workers) {
  if (u_values.empty()) throw ConfigError("U grid is empty");
  if (level < 0) throw IndexError("level must be non-negative");
  for (double u : u_values) {
    if (!std::isfinite(u) || u < 0.0) throw UnsupportedParameter("U must be finite and >= 0");
  }
  const int n = geometry.n_sites();

  GapDiagram d;
  d.geometry = geometry.tag();
  d.source = source.name();
  d.level = level;
  d.seed = source.seed();
  d.u_values = u_values;
  d.max_electrons = 2 * n;

  for (double u : u_values) {
    for (int n_up = 0; n_up <= n; ++n_up) {
      for (int n_down = 0; n_down <= n_up; ++n_down) {
        if (n_up + n_down == 0) continue;
        d.sectors.push_back({u, n_up, n_down, std::nullopt, {}});
      }
    }
  }
  parallel_for(static_cast<int>(d.sectors.size()), workers, [&](int i) {
    auto& s = d.sectors[static_cast<std::size_t>(i)];
    try {
      s.energy = source.sector_energy(geometry, s.u, s.n_up, s.n_down, level);
    } catch (const std::exception& e) {
      s.error = e.what();
      s.energy.reset();
    }
  });

  struct Failed {};
  std::size_t offset = 0;
  const std::size_t per_u = d.sectors.size() / u_values.size();
  for (double u : u_values) {
    const SectorEnergyFn lookup = [&d, offset](int n_up, int n_down) {
      // Sector list is row-major in (n_up, n_down <= n_up), from (1, 0).
      const std::size_t idx = static_cast<std::size_t>(n_up * (n_up + 1) / 2 + n_down - 1);
      const auto& s = d.sectors[offset + idx];
      if (!s.error.empty()) throw Failed{};
      return s.energy;
    };
    for (int N = 1; N <= 2 * n; ++N) {
      GapCell cell;
      cell.n_electrons = N;
      cell.u = u;
      try {
        cell.ground = sector_ground(lookup, n, N);
      } catch (const Failed&) {
      }
      try {
        cell.charge_gap = charge_gap(lookup, n, N);
      } catch (const Failed&) {
      }
      try {
        cell.spin_gap = spin_gap(lookup, n, N, source.degeneracy_tolerance());
      } catch (const Failed&) {
      }
      d.cells.push_back(cell);
    }
    offset += per_u;
  }
  return d;
}

GapDiagram excited_gap_diagram(const EnergySource& source,
                               const LatticeGeometry& geometry,
                               const std::vector<double>& u_values, int workers) {
  return build_diagram(source, geometry, u_values, 2, workers);
}

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::energy: return "energy";
    case Quantity::charge_gap: return "charge_gap";
    case Quantity::spin_gap: return "spin_gap";
  }
  return "?";
}

namespace {

std::optional<double> value_of(const GapCell& c, Quantity q) {
  switch (q) {
    case Quantity::energy:
      return c.ground ? std::optional<double>(c.ground->energy) : std::nullopt;
    case Quantity::charge_gap: return c.charge_gap;
    case Quantity::spin_gap: return c.spin_gap;
  }
  return std::nullopt;
}

}  // namespace

std::vector<ErrorStats> error_summary(const GapDiagram& vqe, const GapDiagram& exact) {
  if (vqe.geometry != exact.geometry || vqe.level != exact.level ||
      vqe.u_values != exact.u_values || vqe.cells.size() != exact.cells.size()) {
    throw DimensionMismatch("diagrams cover different grids");
  }
  std::vector<ErrorStats> out;
  for (Quantity q : {Quantity::energy, Quantity::charge_gap, Quantity::spin_gap}) {
    ErrorStats s;
    s.quantity = q;
    double abs_sum = 0.0, sq_sum = 0.0, v_sum = 0.0, e_sum = 0.0;
    for (std::size_t i = 0; i < vqe.cells.size(); ++i) {
      const auto a = value_of(vqe.cells[i], q);
      const auto b = value_of(exact.cells[i], q);
      if (!a || !b) continue;
      ++s.count;
      abs_sum += std::abs(*a - *b);
      sq_sum += (*a - *b) * (*a - *b);
      v_sum += *a;
      e_sum += *b;
    }
    if (s.count == 0) {
      s.mae = s.mse = s.mpe = std::numeric_limits<double>::quiet_NaN();
    } else {
      const double c = s.count;
      s.mae = abs_sum / c;
      s.mse = sq_sum / c;
      s.mpe = std::abs(v_sum / c - e_sum / c) / std::abs(e_sum / c) * 100.0;
    }
    out.push_back(s);
  }
  return out;
}

void write_csv(std::ostream& out, const GapDiagram& d) {
  out << "N,U,sector_up,sector_down,energy,charge_gap,spin_gap,defined_flags\n";
  for (const auto& c : d.cells) {
    out << c.n_electrons << ',' << fmt(c.u) << ',';
    if (c.ground) {
      out << c.ground->n_up << ',' << c.ground->n_down << ',' << fmt(c.ground->energy);
    } else {
      out << ",,";
    }
    out << ',' << fmt(c.charge_gap) << ',' << fmt(c.spin_gap) << ',' << c.defined_flags()
        << '\n';
  }
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json finite_json(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const GapDiagram& d) {
  nlohmann::ordered_json j;
  j["geometry"] = d.geometry;
  j["source"] = d.source;
  j["level"] = d.level;
  j["seed"] = d.seed;
  j["u_values"] = d.u_values;
  auto& cells = j["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : d.cells) {
    nlohmann::ordered_json cj;
    cj["N"] = c.n_electrons;
    cj["U"] = c.u;
    cj["sector_up"] = c.ground ? nlohmann::json(c.ground->n_up) : nlohmann::json(nullptr);
    cj["sector_down"] = c.ground ? nlohmann::json(c.ground->n_down) : nlohmann::json(nullptr);
    cj["energy"] = c.ground ? nlohmann::json(c.ground->energy) : nlohmann::json(nullptr);
    cj["charge_gap"] = opt_json(c.charge_gap);
    cj["spin_gap"] = opt_json(c.spin_gap);
    cj["defined_flags"] = c.defined_flags();
    cells.push_back(std::move(cj));
  }
  auto& sectors = j["sectors"] = nlohmann::ordered_json::array();
  for (const auto& s : d.sectors) {
    nlohmann::ordered_json sj;
    sj["U"] = s.u;
    sj["n_up"] = s.n_up;
    sj["n_down"] = s.n_down;
    sj["energy"] = opt_json(s.energy);
    if (!s.error.empty()) sj["error"] = s.error;
    sectors.push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

std::string error_summary_json(const std::vector<ErrorStats>& stats) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& s : stats) {
    nlohmann::ordered_json sj;
    sj["quantity"] = to_string(s.quantity);
    sj["count"] = s.count;
    sj["mae"] = finite_json(s.mae);
    sj["mse"] = finite_json(s.mse);
    sj["mpe_percent"] = finite_json(s.mpe);
    j.push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

std::string heatmap_svg(const GapDiagram& d, Quantity q) {
  constexpr int kCell = 36, kLeft = 56, kTop = 40, kBottom = 64;
  const int nx = d.max_electrons;
  const int ny = static_cast<int>(d.u_values.size());
  const int width = kLeft + nx * kCell + 16;
  const int height = kTop + ny * kCell + kBottom;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : d.cells) {
    if (const auto v = value_of(c, q)) {
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
  }
  const bool any = lo <= hi;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<text x=\"" << kLeft << "\" y=\"20\" font-size=\"13\">" << to_string(q) << " "
    << d.geometry << " " << d.source << " level " << d.level << "</text>\n";
  for (int iu = 0; iu < ny; ++iu) {
    // Largest U on top.
    const int y = kTop + (ny - 1 - iu) * kCell;
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + kCell / 2 + 4
      << "\" text-anchor=\"end\">" << fmt(d.u_values[static_cast<std::size_t>(iu)])
      << "</text>\n";
    for (int N = 1; N <= nx; ++N) {
      const auto v = value_of(d.at(static_cast<std::size_t>(iu), N), q);
      const int x = kLeft + (N - 1) * kCell;
      std::string fill = "#d9d9d9";
      if (v) {
        const double t = hi > lo ? (*v - lo) / (hi - lo) : 0.5;
        // Dark blue to yellow.
        const int r = static_cast<int>(std::lround(30 + t * (250 - 30)));
        const int g = static_cast<int>(std::lround(40 + t * (230 - 40)));
        const int b = static_cast<int>(std::lround(120 + t * (40 - 120)));
        char buf[8];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        fill = buf;
      }
      s << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCell << "\" height=\""
        << kCell << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
    }
  }
  const int axis_y = kTop + ny * kCell;
  for (int N = 1; N <= nx; ++N) {
    s << "<text x=\"" << kLeft + (N - 1) * kCell + kCell / 2 << "\" y=\"" << axis_y + 14
      << "\" text-anchor=\"middle\">" << N << "</text>\n";
  }
  s << "<text x=\"" << kLeft + nx * kCell / 2 << "\" y=\"" << axis_y + 30
    << "\" text-anchor=\"middle\">N</text>\n";
  s << "<text x=\"12\" y=\"" << kTop + ny * kCell / 2 << "\">U</text>\n";
  s << "<text x=\"" << kLeft << "\" y=\"" << axis_y + 52 << "\">";
  if (any) {
    s << "min " << fmt(lo) << "  max " << fmt(hi);
  } else {
    s << "no defined cells";
  }
  s << "</text>\n</svg>\n";
  return s.str();
}

}  // namespace fhvqe
