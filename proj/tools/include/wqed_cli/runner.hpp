// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "wqed_cli/scenario.hpp"

namespace wqed::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string file;  ///< file name inside the output directory
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

struct Failure {
  std::string point;
  std::string error;
  bool config = false;  ///< input problem rather than numerical failure
};

struct ScenarioResult {
  std::vector<Table> tables;
  std::vector<std::string> json_lines;  ///< oracle reports
  std::vector<std::string> warnings;
  std::vector<Failure> failures;
};

/// Evaluate every requested output. Drive points run on `threads` workers;
/// results are assembled in input order, so output is independent of the
/// thread count.
ScenarioResult run_scenario(const Scenario& scenario, unsigned threads);

/// 17 significant digits, scientific.
std::string format_number(double v);
std::string to_csv(const Table& table);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes);

struct RunOptions {
  std::filesystem::path out_dir = "wqed-out";
  unsigned threads = 1;
  long long seed = 0;
};

/// Exit status: 0 success, 1 configuration error, 2 numerical error.
int run_command(const std::string& path_or_name, const RunOptions& options, std::ostream& log);
int sweep_command(const std::string& path_or_name, const std::string& axis, const std::vector<double>& values,
                  const RunOptions& options, std::ostream& log);

/// Apply fn(i) for i in [0, n) on a worker pool; results in index order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, unsigned threads, F&& fn);

}  // namespace wqed::cli

#include "wqed_cli/parallel.ipp"
