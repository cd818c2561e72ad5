#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "wshift/curvature.hpp"

namespace wshift::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kClean = 0, kWitness = 1, kInputError = 2 };

struct Example45Options {
  unsigned n = 2;
  std::size_t m = 2;
  unsigned blocks = 2;
  unsigned eval_degree = kDefaultEvalDegree;
  unsigned precision_bits = kDefaultPrecisionBits;
  GridSpec grid;
  double tol = 1e-9;
  double trend_threshold = 0.5;
};

/// Builds the perturbed kernel and runs its five checks:
///   kernel_bound        K(w,w)(1-|w|^2)^n stays in (7/8, 9/8) on the |w|^2 grid
///   necessary_condition violated at the last block's witness index
///   ray_ratio           equals the block index on each block's ray
///   hypercontraction    the defect scan finds a negative entry
///   psh_boundedness     psi = log(h_perturbed / h_power) stays bounded on the grid
/// The report carries "passed" and, when a check fails, a top-level "witness" naming it.
nlohmann::ordered_json run_example45(const Example45Options& options);

/// Flat CSV of the kernel_bound rows of an example45 report.
std::string example45_csv(const nlohmann::ordered_json& report);

/// Writes through a temporary file in the same directory and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

/// Entry point behind the command-line tool. Exit codes: 0 clean, 1 a report with a
/// witness, 2 bad input or configuration.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wshift::cli
