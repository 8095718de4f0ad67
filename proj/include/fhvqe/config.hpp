#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fhvqe/ansatz.hpp"
#include "fhvqe/lattice.hpp"
#include "fhvqe/vqe.hpp"

namespace fhvqe {

enum class OutputFormat { csv, json, svg };

/**
 * Settings shared by every subcommand. Keys are the long flag names without
 * the leading dashes, e.g. "stage1-iters". A config file holds one
 * `key = value` per line; '#' starts a comment.
 */
struct RunConfig {
  std::string geometry = "4x1";
  std::optional<double> u;
  std::vector<double> u_grid;
  std::optional<std::pair<int, int>> sector;
  std::optional<int> n_electrons;
  int levels = 1;
  int diagram_level = 0;
  /// "both", "exact" or "vqe"; sweep only.
  std::string sources = "both";
  int layers = 2;
  AnsatzVariant variant = AnsatzVariant::modified_hopping;
  bool fswap = true;
  int restarts = 5;
  int stage1_iters = 500;
  int stage2_iters = 50;
  std::uint64_t seed = 0;
  /// 0 means available parallelism.
  int workers = 0;
  std::string out;
  OutputFormat format = OutputFormat::json;
  std::string trace;

  /// Throws ConfigError for an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);

  [[nodiscard]] LatticeGeometry lattice() const;
  [[nodiscard]] AnsatzConfig ansatz() const;
  [[nodiscard]] OptimizerSchedule schedule() const;
  /// The explicit sector, else the balanced split of n_electrons, else the
  /// balanced half-filled sector.
  [[nodiscard]] std::pair<int, int> resolved_sector() const;
  [[nodiscard]] std::vector<double> resolved_u_grid() const;
};

/// Every key accepted by RunConfig::set, in documentation order.
const std::vector<std::string>& config_keys();

/// Applies a config document to `config`. Throws ConfigError with the line
/// number on malformed lines or unknown keys.
void load_config(std::istream& in, RunConfig& config);
void load_config_file(const std::string& path, RunConfig& config);

/// "0,1,2,4" or "start:stop:step" (inclusive, tolerant of rounding).
std::vector<double> parse_u_grid(const std::string& text);

const char* to_string(OutputFormat f);

}  // namespace fhvqe
