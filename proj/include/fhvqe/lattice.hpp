#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fhvqe {

enum class Spin { up, down };

enum class Orientation { horizontal, vertical };

/// Nearest-neighbour pair of sites, `site_a < site_b`.
struct Bond {
  int site_a = 0;
  int site_b = 0;
  Orientation orientation = Orientation::horizontal;

  friend bool operator==(const Bond&, const Bond&) = default;
};

inline constexpr int kDefaultQubitCap = 20;

/**
 * Rectangular Hubbard lattice with open boundaries.
 *
 * Sites are numbered boustrophedon ("snake"): left to right on even rows,
 * right to left on odd rows. The spin-up orbital of site k is qubit k and
 * the spin-down orbital is qubit n_sites + k, so every horizontal bond joins
 * neighbouring qubits of one spin block.
 */
class LatticeGeometry {
 public:
  /// Throws InvalidGeometry for zero dimensions or 2*rows*cols > qubit_cap.
  LatticeGeometry(int rows, int cols, int qubit_cap = kDefaultQubitCap);

  /// Parses "WIDTHxHEIGHT" (columns x rows), e.g. "2x2" or "4x1" (a chain).
  static LatticeGeometry parse(std::string_view text,
                               int qubit_cap = kDefaultQubitCap);

  [[nodiscard]] int rows() const noexcept { return rows_; }
  [[nodiscard]] int cols() const noexcept { return cols_; }
  [[nodiscard]] int n_sites() const noexcept { return rows_ * cols_; }
  [[nodiscard]] int n_qubits() const noexcept { return 2 * n_sites(); }

  /// Snake-ordered site index of grid cell (row, col).
  [[nodiscard]] int site_at(int row, int col) const;

  [[nodiscard]] int qubit_index(int site, Spin spin) const;

  /// Every grid-adjacent unordered pair once, sorted by (site_a, site_b).
  [[nodiscard]] const std::vector<Bond>& bonds() const noexcept {
    return bonds_;
  }

  /// "COLSxROWS", the inverse of parse().
  [[nodiscard]] std::string tag() const;

  friend bool operator==(const LatticeGeometry& a, const LatticeGeometry& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_;
  }

 private:
  int rows_;
  int cols_;
  std::vector<Bond> bonds_;
};

}  // namespace fhvqe
