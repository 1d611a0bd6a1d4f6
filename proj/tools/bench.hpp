#pragma once

#include "dopsolve/csv.hpp"

#include <string>
#include <vector>

namespace dopsolve::cli {

struct BenchRow {
  std::string bench;
  std::string metric;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">=", "=="
  double threshold = 0.0;
  bool pass = false;
};

std::vector<std::string> bench_names();

// Runs one benchmark (or "all") and returns one row per checked quantity.
std::vector<BenchRow> run_bench(const std::string& which);

CsvTable bench_table(const std::vector<BenchRow>& rows);

}  // namespace dopsolve::cli
