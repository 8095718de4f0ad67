#include "fhvqe/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <complex>
#include <map>
#include <ostream>

#include "fhvqe/error.hpp"

namespace fhvqe {

char PauliString::at(int qubit) const noexcept {
  const bool xb = (x >> qubit) & 1U;
  const bool zb = (z >> qubit) & 1U;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

void PauliString::set(int qubit, char op) {
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  x &= ~bit;
  z &= ~bit;
  switch (op) {
    case 'I': break;
    case 'X': x |= bit; break;
    case 'Y': x |= bit; z |= bit; break;
    case 'Z': z |= bit; break;
    default:
      throw MalformedTerm(std::string("unknown Pauli operator '") + op + "'");
  }
}

int PauliString::y_count() const noexcept { return std::popcount(x & z); }

std::string PauliString::to_string(int n_qubits) const {
  std::string out(static_cast<std::size_t>(n_qubits), 'I');
  for (int q = 0; q < n_qubits; ++q) out[static_cast<std::size_t>(q)] = at(q);
  return out;
}

PauliString PauliString::parse(const std::string& text) {
  if (text.size() > 64) throw MalformedTerm("Pauli string longer than 64");
  PauliString p;
  for (std::size_t q = 0; q < text.size(); ++q) {
    p.set(static_cast<int>(q), text[q]);
  }
  return p;
}

void PauliSum::add(double coefficient, PauliString ops) {
  terms_.push_back({coefficient, ops});
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw DimensionMismatch("adding PauliSums over different qubit counts");
  }
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

void PauliSum::canonicalize(double drop_below) {
  std::map<std::string, PauliTerm> merged;
  for (const auto& t : terms_) {
    auto [it, inserted] = merged.try_emplace(t.ops.to_string(n_qubits_), t);
    if (!inserted) it->second.coefficient += t.coefficient;
  }
  terms_.clear();
  for (auto& [key, term] : merged) {
    if (std::abs(term.coefficient) >= drop_below) terms_.push_back(term);
  }
}

void PauliSum::dump(std::ostream& out) const {
  for (const auto& t : terms_) {
    out << t.coefficient << ' ' << t.ops.to_string(n_qubits_) << '\n';
  }
}

std::ptrdiff_t SectorBasis::find(std::uint64_t state) const {
  auto it = std::lower_bound(states.begin(), states.end(), state);
  if (it == states.end() || *it != state) return -1;
  return it - states.begin();
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  }
  return r;
}

std::vector<FermionTerm> build_hubbard(const LatticeGeometry& geometry,
                                       double u_over_t) {
  if (!(u_over_t >= 0.0)) {
    throw UnsupportedParameter("U/t must be non-negative, got " +
                               std::to_string(u_over_t));
  }
  std::vector<FermionTerm> terms;
  for (Spin spin : {Spin::up, Spin::down}) {
    for (const Bond& b : geometry.bonds()) {
      terms.push_back({TermKind::hopping,
                       {geometry.qubit_index(b.site_a, spin),
                        geometry.qubit_index(b.site_b, spin)},
                       -1.0});
    }
  }
  for (int site = 0; site < geometry.n_sites(); ++site) {
    terms.push_back({TermKind::onsite,
                     {geometry.qubit_index(site, Spin::up),
                      geometry.qubit_index(site, Spin::down)},
                     u_over_t});
  }
  return terms;
}

namespace {

void check_orbitals(const FermionTerm& term, int n_qubits) {
  if (term.orbitals.size() != 2) {
    throw MalformedTerm("Hubbard terms act on exactly two orbitals");
  }
  for (int q : term.orbitals) {
    if (q < 0 || q >= n_qubits) {
      throw MalformedTerm("orbital " + std::to_string(q) + " outside " +
                          std::to_string(n_qubits) + " qubits");
    }
  }
  if (term.orbitals[0] == term.orbitals[1]) {
    throw MalformedTerm("term references orbital " +
                        std::to_string(term.orbitals[0]) + " twice");
  }
}

}  // namespace

PauliSum jordan_wigner(const FermionTerm& term, int n_qubits) {
  check_orbitals(term, n_qubits);
  const int i = std::min(term.orbitals[0], term.orbitals[1]);
  const int j = std::max(term.orbitals[0], term.orbitals[1]);
  PauliSum out(n_qubits);

  if (term.kind == TermKind::hopping) {
    PauliString xx, yy;
    xx.set(i, 'X');
    xx.set(j, 'X');
    yy.set(i, 'Y');
    yy.set(j, 'Y');
    for (int k = i + 1; k < j; ++k) {
      xx.set(k, 'Z');
      yy.set(k, 'Z');
    }
    out.add(0.5 * term.coefficient, xx);
    out.add(0.5 * term.coefficient, yy);
  } else {
    // n_i n_j = (I - Z_i)(I - Z_j) / 4
    PauliString zi, zj, zz;
    zi.set(i, 'Z');
    zj.set(j, 'Z');
    zz.set(i, 'Z');
    zz.set(j, 'Z');
    const double c = 0.25 * term.coefficient;
    out.add(c, PauliString{});
    out.add(-c, zi);
    out.add(-c, zj);
    out.add(c, zz);
  }
  out.canonicalize();
  return out;
}

PauliSum jordan_wigner(const std::vector<FermionTerm>& terms, int n_qubits) {
  PauliSum out(n_qubits);
  for (const auto& t : terms) out += jordan_wigner(t, n_qubits);
  out.canonicalize();
  return out;
}

Eigen::MatrixXcd to_dense(const PauliSum& psum, int n_qubits) {
  if (n_qubits > kDenseQubitCap) {
    throw SizeCapExceeded("dense matrix over " + std::to_string(n_qubits) +
                          " qubits exceeds cap " +
                          std::to_string(kDenseQubitCap) +
                          "; use the sector_matrix path instead");
  }
  if (psum.n_qubits() != n_qubits) {
    throw DimensionMismatch("PauliSum has " + std::to_string(psum.n_qubits()) +
                            " qubits, requested " + std::to_string(n_qubits));
  }
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  static constexpr std::complex<double> kIPow[4] = {
      {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (const auto& t : psum.terms()) {
    const auto global = kIPow[t.ops.y_count() % 4] * t.coefficient;
    for (std::uint64_t col = 0; col < dim; ++col) {
      // Y = iXZ: Z-type bits contribute (-1)^bit, X-type bits flip.
      const int sign = (std::popcount(col & t.ops.z) & 1) ? -1 : 1;
      const std::uint64_t row = col ^ t.ops.x;
      h(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
          global * static_cast<double>(sign);
    }
  }
  return h;
}

SectorBasis sector_basis(const LatticeGeometry& geometry, int n_up,
                         int n_down) {
  const int n = geometry.n_sites();
  if (n_up < 0 || n_down < 0 || n_up > n || n_down > n) {
    throw IndexError("sector (" + std::to_string(n_up) + ", " +
                     std::to_string(n_down) + ") invalid for " +
                     std::to_string(n) + " sites");
  }
  auto combos = [n](int k) {
    std::vector<std::uint64_t> out;
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t m = 0; m < limit; ++m) {
      if (std::popcount(m) == k) out.push_back(m);
    }
    return out;
  };
  const auto ups = combos(n_up);
  const auto downs = combos(n_down);
  SectorBasis basis{n_up, n_down, {}};
  basis.states.reserve(ups.size() * downs.size());
  // Down block occupies the high bits, so iterating it outermost keeps the
  // combined states sorted.
  for (auto d : downs) {
    for (auto u : ups) basis.states.push_back((d << n) | u);
  }
  return basis;
}

std::pair<SectorBasis, Eigen::MatrixXd> sector_matrix(
    const std::vector<FermionTerm>& terms, const LatticeGeometry& geometry,
    int n_up, int n_down) {
  SectorBasis basis = sector_basis(geometry, n_up, n_down);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  const int nq = geometry.n_qubits();

  for (const auto& term : terms) {
    check_orbitals(term, nq);
    const int i = std::min(term.orbitals[0], term.orbitals[1]);
    const int j = std::max(term.orbitals[0], term.orbitals[1]);
    const std::uint64_t bi = std::uint64_t{1} << i;
    const std::uint64_t bj = std::uint64_t{1} << j;
    const std::uint64_t between = (bj - 1) & ~((bi << 1) - 1);

    for (Eigen::Index col = 0; col < dim; ++col) {
      const std::uint64_t s = basis.states[static_cast<std::size_t>(col)];
      if (term.kind == TermKind::onsite) {
        if ((s & bi) && (s & bj)) h(col, col) += term.coefficient;
        continue;
      }
      if (static_cast<bool>(s & bi) == static_cast<bool>(s & bj)) continue;
      const std::uint64_t t = s ^ bi ^ bj;
      const auto row = basis.find(t);
      if (row < 0) {
        throw MalformedTerm("hopping term mixes spin sectors");
      }
      const double sign = (std::popcount(s & between) & 1) ? -1.0 : 1.0;
      h(row, col) += term.coefficient * sign;
    }
  }
  return {std::move(basis), std::move(h)};
}

}  // namespace fhvqe
