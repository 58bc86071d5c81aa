#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "secrescope/config.hpp"

namespace secrescope {

// One output line. `error` is empty for a successful evaluation; otherwise it
// holds a short marker ("integrality", "capacity", "numerical") and `value`
// is NaN.
struct CsvRow {
    std::string scenario;
    double axis_value_db = 0.0;
    std::string metric;
    std::string engine;
    double value = 0.0;
    double std_error = 0.0;
    int series_terms = 0;
    double dropped_mass = 0.0;
    double runtime_ms = 0.0;
    std::string error;
};

std::vector<std::string> figure_names();
// Throws ConfigError listing the valid names.
SweepSpec figure_preset(const std::string& name);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Rows in axis-major order: for each axis value, each curve, each metric,
// each engine.
std::vector<CsvRow> run_sweep(const SweepSpec& spec, const ProgressFn& progress = {});

void write_csv(const std::vector<CsvRow>& rows, std::ostream& out);
void save_csv(const std::vector<CsvRow>& rows, const std::string& path);
std::vector<CsvRow> read_csv(std::istream& in);
std::vector<CsvRow> load_csv(const std::string& path);

// gnuplot-friendly blocks, one per (scenario, metric, engine), separated by
// two blank lines; columns axis_value_db, value, stderr.
void write_matrix(const std::vector<CsvRow>& rows, std::ostream& out);

}  // namespace secrescope
