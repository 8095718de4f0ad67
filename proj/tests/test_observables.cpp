#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

#include "fhvqe/error.hpp"
#include "fhvqe/observables.hpp"

using namespace fhvqe;

namespace {

/// Returns a fixed value per (n_up, n_down, level); throws for one sector.
class TableSource final : public EnergySource {
 public:
  std::function<std::optional<double>(int, int, int)> fn;
  std::pair<int, int> broken{-1, -1};
  [[nodiscard]] std::string name() const override { return "table"; }
  [[nodiscard]] double degeneracy_tolerance() const override { return 1e-8; }
  [[nodiscard]] std::optional<double> sector_energy(const LatticeGeometry&, double, int nu,
                                                    int nd, int level) const override {
    if (std::pair{nu, nd} == broken) throw NumericalError("broken sector");
    return fn(nu, nd, level);
  }
};

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("sector ground examples") {
  const ExactSource exact;
  const LatticeGeometry chain(1, 4);
  const auto half = sector_ground(exact, chain, 0.0, 4);
  REQUIRE(half);
  CHECK(half->energy == doctest::Approx(-4.4721).epsilon(1e-4));
  CHECK(half->n_up == 2);
  CHECK(half->n_down == 2);
  const auto full = sector_ground(exact, chain, 3.0, 8);
  CHECK(full->energy == doctest::Approx(12.0));
  const auto one = sector_ground(exact, chain, 3.0, 1);
  CHECK(one->energy == doctest::Approx(-2 * std::cos(std::numbers::pi / 5)));
  CHECK_THROWS_AS(sector_ground(exact, chain, 0.0, 9), IndexError);
  CHECK_THROWS_AS(sector_ground(exact, chain, 0.0, 0), IndexError);
}

TEST_CASE("sector tie-break") {
  const SectorEnergyFn flat = [](int, int) { return std::optional<double>(1.0); };
  auto g = sector_ground(flat, 4, 3);
  CHECK(g->n_up == 2);
  CHECK(g->n_down == 1);
  g = sector_ground(flat, 4, 4);
  CHECK(g->n_up == 2);
  g = sector_ground(flat, 2, 3);
  CHECK(g->n_up == 2);
  CHECK(g->n_down == 1);
}

TEST_CASE("charge gap examples") {
  const SectorEnergyFn linear = [](int nu, int nd) { return std::optional<double>(0.7 * (nu + nd) - 2); };
  for (int n = 2; n <= 7; ++n) CHECK(std::abs(*charge_gap(linear, 4, n)) < 1e-12);
  CHECK_FALSE(charge_gap(linear, 4, 1));
  CHECK_FALSE(charge_gap(linear, 4, 8));

  const ExactSource exact;
  const LatticeGeometry dimer(1, 2);
  CHECK(*charge_gap(exact, dimer, 4.0, 2) == doctest::Approx(-2 + 4 * std::sqrt(2.0)).epsilon(1e-10));

  const LatticeGeometry chain(1, 4);
  CHECK(*charge_gap(exact, chain, 4.0, 4) == doctest::Approx(2.6).epsilon(0.2 / 2.6));
  const auto modes = oracle::chain_modes(4);
  CHECK(*charge_gap(exact, chain, 0.0, 4) == doctest::Approx(modes[2] - modes[1]).epsilon(1e-10));
}

TEST_CASE("spin gap examples") {
  const ExactSource exact;
  CHECK(*spin_gap(exact, LatticeGeometry(1, 2), 0.0, 2) == doctest::Approx(2.0));
  const LatticeGeometry chain(1, 4);
  for (double u : {0.0, 1.0, 4.0}) {
    for (int n = 2; n <= 6; ++n) {
      const auto s = spin_gap(exact, chain, u, n);
      REQUIRE(s);
      CHECK(*s >= 0.0);
    }
  }
  CHECK(*spin_gap(exact, chain, 0.0, 3) == doctest::Approx(std::sqrt(5.0)));
  const SectorEnergyFn flat = [](int, int) { return std::optional<double>(-1.0); };
  CHECK_FALSE(spin_gap(flat, 4, 4, 1e-8));
  CHECK_FALSE(spin_gap(exact, chain, 2.0, 1));
}

TEST_CASE("default grid") {
  const auto g = default_u_grid();
  REQUIRE(g.size() == 9);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 4.0);
}

TEST_CASE("exact diagram properties") {
  const ExactSource exact;
  const LatticeGeometry chain(1, 4);
  const auto d = build_diagram(exact, chain, default_u_grid(), 0, 2);
  CHECK(d.cells.size() == 9 * 8);
  for (std::size_t iu = 0; iu < d.u_values.size(); ++iu) {
    CHECK(d.at(iu, 1).defined_flags() == 1);
    CHECK_FALSE(d.at(iu, 8).charge_gap);
    CHECK(d.at(iu, 4).defined_flags() == 7);
    if (iu > 0) CHECK(*d.at(iu, 4).charge_gap >= *d.at(iu - 1, 4).charge_gap - 1e-12);
  }
  const auto serial = build_diagram(exact, chain, default_u_grid(), 0, 1);
  std::ostringstream a, b;
  write_csv(a, d);
  write_csv(b, serial);
  CHECK(a.str() == b.str());
  CHECK_THROWS_AS(build_diagram(exact, chain, {}), ConfigError);
}

TEST_CASE("exact sectors are spin-flip symmetric") {
  const ExactSource exact;
  const LatticeGeometry g(2, 2);
  for (int nu = 0; nu <= 4; ++nu) {
    for (int nd = 0; nd < nu; ++nd) {
      CHECK(*exact.sector_energy(g, 2.5, nu, nd, 0) ==
            doctest::Approx(*exact.sector_energy(g, 2.5, nd, nu, 0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("single site level-2 diagram is undefined") {
  const auto d = excited_gap_diagram(ExactSource{}, LatticeGeometry(1, 1), {0.0, 2.0});
  for (const auto& c : d.cells) CHECK(c.defined_flags() == 0);
}

TEST_CASE("degenerate levels collapse to the ground diagram") {
  TableSource t;
  t.fn = [](int nu, int nd, int) { return std::optional<double>(std::pow(nu - 1.5, 2) + 0.3 * nd); };
  const LatticeGeometry chain(1, 4);
  std::ostringstream a, b;
  write_csv(a, build_diagram(t, chain, {1.0}, 0));
  write_csv(b, excited_gap_diagram(t, chain, {1.0}));
  CHECK(a.str() == b.str());
}

TEST_CASE("a failing sector flags cells without aborting") {
  TableSource t;
  t.fn = [](int nu, int nd, int) { return std::optional<double>(nu + 2.0 * nd); };
  t.broken = {2, 1};
  const auto d = build_diagram(t, LatticeGeometry(1, 4), {0.0, 1.0}, 0, 2);
  for (std::size_t iu = 0; iu < 2; ++iu) {
    CHECK(d.at(iu, 3).defined_flags() == 0);
    CHECK_FALSE(d.at(iu, 2).charge_gap);
    CHECK_FALSE(d.at(iu, 4).charge_gap);
    CHECK(d.at(iu, 5).defined_flags() == 7);
  }
  int errors = 0;
  for (const auto& s : d.sectors) errors += !s.error.empty();
  CHECK(errors == 2);
}

TEST_CASE("error summary") {
  const ExactSource exact;
  const LatticeGeometry chain(1, 4);
  const auto e = build_diagram(exact, chain, {0.0, 4.0});
  auto v = e;
  for (auto& c : v.cells) {
    if (c.ground) c.ground->energy += 0.1;
  }
  const auto s = error_summary(v, e);
  REQUIRE(s.size() == 3);
  CHECK(s[0].quantity == Quantity::energy);
  CHECK(s[0].count == 16);
  CHECK(s[0].mae == doctest::Approx(0.1));
  CHECK(s[0].mse == doctest::Approx(0.01));
  double mean = 0.0;
  for (const auto& c : e.cells) mean += c.ground->energy;
  mean /= 16.0;
  CHECK(s[0].mpe == doctest::Approx(0.1 / std::abs(mean) * 100.0));
  CHECK(s[1].mae == doctest::Approx(0.0));
  auto other = e;
  other.u_values = {0.0, 3.0};
  CHECK_THROWS_AS(error_summary(other, e), DimensionMismatch);
}

TEST_CASE("CSV, JSON and SVG output") {
  const auto d = build_diagram(ExactSource{}, LatticeGeometry(1, 2), {4.0});
  std::ostringstream csv;
  write_csv(csv, d);
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "N,U,sector_up,sector_down,energy,charge_gap,spin_gap,defined_flags");
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 4);
  CHECK(csv.str().find("\n1,4,1,0,-1,,,1\n") != std::string::npos);

  const auto j = nlohmann::json::parse(to_json(d));
  CHECK(j["geometry"] == "2x1");
  CHECK(j["source"] == "exact");
  CHECK(j["level"] == 0);
  CHECK(j["seed"] == 0);
  CHECK(j["cells"].size() == 4);
  CHECK(j["cells"][0]["charge_gap"].is_null());
  CHECK(j["cells"][1]["charge_gap"].get<double>() == doctest::Approx(-2 + 4 * std::sqrt(2.0)));

  const auto svg = heatmap_svg(d, Quantity::charge_gap);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("min ") != std::string::npos);
  CHECK(svg.find("max ") != std::string::npos);
  CHECK(svg.find("#d9d9d9") != std::string::npos);
}

}
