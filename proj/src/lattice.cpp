#include "fhvqe/lattice.hpp"

#include <algorithm>
#include <charconv>

#include "fhvqe/error.hpp"

namespace fhvqe {

LatticeGeometry::LatticeGeometry(int rows, int cols, int qubit_cap)
    : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw InvalidGeometry("lattice dimensions must be positive, got rows=" +
                          std::to_string(rows) + " cols=" +
                          std::to_string(cols));
  }
  if (static_cast<long long>(rows) * cols * 2 > qubit_cap) {
    throw InvalidGeometry("lattice " + std::to_string(cols) + "x" +
                          std::to_string(rows) + " needs " +
                          std::to_string(2LL * rows * cols) +
                          " qubits, cap is " + std::to_string(qubit_cap));
  }

  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      const int here = site_at(r, c);
      if (c + 1 < cols_) {
        const int right = site_at(r, c + 1);
        bonds_.push_back({std::min(here, right), std::max(here, right),
                          Orientation::horizontal});
      }
      if (r + 1 < rows_) {
        const int below = site_at(r + 1, c);
        bonds_.push_back({std::min(here, below), std::max(here, below),
                          Orientation::vertical});
      }
    }
  }
  std::sort(bonds_.begin(), bonds_.end(), [](const Bond& a, const Bond& b) {
    return a.site_a != b.site_a ? a.site_a < b.site_a : a.site_b < b.site_b;
  });
}

LatticeGeometry LatticeGeometry::parse(std::string_view text, int qubit_cap) {
  const auto x = text.find_first_of("xX");
  auto parse_int = [&](std::string_view part) {
    int value = 0;
    const auto* end = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(part.data(), end, value);
    if (part.empty() || ec != std::errc{} || ptr != end) {
      throw InvalidGeometry("cannot parse geometry '" + std::string(text) +
                            "', expected WIDTHxHEIGHT");
    }
    return value;
  };
  if (x == std::string_view::npos) {
    throw InvalidGeometry("cannot parse geometry '" + std::string(text) +
                          "', expected WIDTHxHEIGHT");
  }
  // Width first: "4x1" is a single row of four sites.
  const int cols = parse_int(text.substr(0, x));
  const int rows = parse_int(text.substr(x + 1));
  return LatticeGeometry(rows, cols, qubit_cap);
}

int LatticeGeometry::site_at(int row, int col) const {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw IndexError("grid cell (" + std::to_string(row) + ", " +
                     std::to_string(col) + ") outside " + tag());
  }
  return row * cols_ + (row % 2 == 0 ? col : cols_ - 1 - col);
}

int LatticeGeometry::qubit_index(int site, Spin spin) const {
  if (site < 0 || site >= n_sites()) {
    throw IndexError("site " + std::to_string(site) + " outside " + tag());
  }
  return spin == Spin::up ? site : n_sites() + site;
}

std::string LatticeGeometry::tag() const {
  return std::to_string(cols_) + "x" + std::to_string(rows_);
}

}  // namespace fhvqe
