#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "fhvqe/error.hpp"
#include "fhvqe/exactdiag.hpp"

using namespace fhvqe;

TEST_SUITE("exactdiag") {

TEST_CASE("two-site ground follows the closed form") {
  const LatticeGeometry g(1, 2);
  for (double u : {0.0, 1.0, 2.0, 4.0, 7.5}) {
    const auto s = exact_spectrum(g, u, 1, 1, 1);
    CHECK(std::abs(s.energies[0] - oracle::two_site_ground(u)) < 1e-10);
  }
  CHECK(exact_spectrum(g, 4.0, 1, 1, 1).energies[0] == doctest::Approx(2 - 2 * std::sqrt(2.0)));
}

TEST_CASE("non-interacting fillings") {
  const auto modes = oracle::chain_modes(4);
  const LatticeGeometry chain(1, 4);
  CHECK(exact_spectrum(chain, 0.0, 2, 2, 1).energies[0] == doctest::Approx(oracle::fill(modes, 2, 2)));
  CHECK(oracle::fill(modes, 2, 2) == doctest::Approx(-4.4721).epsilon(1e-4));
  CHECK(free_fermion_ground(chain, 2, 2) == doctest::Approx(oracle::fill(modes, 2, 2)));
  CHECK(free_fermion_ground(chain, 0, 0) == 0.0);
  for (int nu = 0; nu <= 4; ++nu) {
    for (int nd = 0; nd <= 4; ++nd) {
      CHECK(exact_spectrum(chain, 0.0, nu, nd, 1).energies[0] ==
            doctest::Approx(oracle::fill(modes, nu, nd)).epsilon(1e-10));
    }
  }
  const LatticeGeometry square(2, 2);
  CHECK(free_fermion_ground(square, 2, 2) == doctest::Approx(-4.0));
  const auto s = exact_spectrum(square, 0.0, 2, 2, 3);
  for (double e : s.energies) CHECK(e == doctest::Approx(-4.0));
}

TEST_CASE("single-particle levels") {
  const auto lv = single_particle_levels(LatticeGeometry(1, 4));
  const auto modes = oracle::chain_modes(4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(lv[i] == doctest::Approx(modes[i]));
  const auto sq = single_particle_levels(LatticeGeometry(2, 2));
  const std::vector<double> expected{-2, 0, 0, 2};
  for (std::size_t i = 0; i < 4; ++i) CHECK(sq[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("truncation and errors") {
  const LatticeGeometry g(1, 1);
  const auto s = exact_spectrum(g, 5.0, 1, 1, 3);
  CHECK(s.truncated);
  REQUIRE(s.energies.size() == 1);
  CHECK(s.energies[0] == doctest::Approx(5.0));
  CHECK_THROWS_AS(exact_spectrum(g, 1.0, 2, 0, 1), IndexError);
  CHECK_THROWS_AS(exact_spectrum(g, 1.0, 1, 0, 0), IndexError);
}

TEST_CASE("spin-flip partners are degenerate") {
  const LatticeGeometry g(2, 2);
  for (int nu = 0; nu <= 4; ++nu) {
    for (int nd = 0; nd < nu; ++nd) {
      const auto a = exact_spectrum(g, 3.0, nu, nd, 4).energies;
      const auto b = exact_spectrum(g, 3.0, nd, nu, 4).energies;
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("eigensystem vectors satisfy the block equation") {
  const LatticeGeometry g(1, 4);
  const auto sys = exact_eigensystem(g, 2.0, 2, 2);
  const auto [basis, block] = sector_matrix(build_hubbard(g, 2.0), g, 2, 2);
  const Eigen::MatrixXd resid = block * sys.vectors - sys.vectors * sys.energies.asDiagonal();
  CHECK(resid.cwiseAbs().maxCoeff() < 1e-10);
}

}
