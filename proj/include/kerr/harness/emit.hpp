#pragma once

#include "kerr/harness/config.hpp"
#include "kerr/wigner.hpp"

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace kerr::harness {

/// Empty cells (monostate) are written as empty CSV fields / JSON null.
using Cell = std::variant<std::monostate, double, long, std::string>;

struct Table {
  /// Appended to the output stem for secondary tables ("" for the main one).
  std::string suffix;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct WignerSnapshot {
  std::string suffix;
  std::string label;
  WignerGrid grid;
  double phi_opt = 0.0;
  double theta_opt = 0.0;
};

struct ExperimentOutput {
  std::vector<Table> tables;  // tables[0] is written to the --out path
  std::vector<WignerSnapshot> snapshots;
};

std::string to_csv(const Table& t);
std::string to_json(const Table& t, std::string_view experiment);
std::string to_json(const WignerSnapshot& s);

/// Writes every table and snapshot next to `out` and returns the paths.
/// Secondary files are named <stem><suffix>.<ext>; snapshots are always JSON.
std::vector<std::filesystem::path> emit(const ExperimentOutput& output,
                                        const std::filesystem::path& out,
                                        Format format, Experiment experiment);

}  // namespace kerr::harness
