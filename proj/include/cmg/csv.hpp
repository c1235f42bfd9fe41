#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmg/engine.hpp"
#include "cmg/stats.hpp"
#include "cmg/sweep.hpp"

namespace cmg {

/// Writes to `<path>.partial` and renames over `path` on success. A throwing
/// writer leaves neither file behind.
void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& writer);

/// Plain comma-separated table with a header row; no quoting.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws Error("csv", "column") if absent.
    std::size_t column(const std::string& name) const;
    bool has_column(const std::string& name) const noexcept;
    std::vector<double> numbers(const std::string& name) const;
};

CsvTable read_csv(std::istream& in, const std::string& source);
CsvTable read_csv_file(const std::string& path);

/// axis1, axis2, mean_rho, std_rho, n_runs.
void write_grid_csv(std::ostream& out, const SweepGrid& grid);

/// axis1, axis2, stock, run, t, expected_return, return. Needs collected samples.
void write_grid_scatter_csv(std::ostream& out, const SweepGrid& grid);

/// stock, run, t, expected_return, return.
void write_scatter_csv(std::ostream& out, const std::vector<RunResult>& runs);

/// stock, beta0, beta1, p_value, r_squared, n.
void write_regression_csv(std::ostream& out, const std::array<RegressionReport, kStocks>& reports);

/// Regression pairs from a trajectory table: r_j(t) against re_j_mean(t+1),
/// the mean expectation formed from r_j(t).
SampleSeries trajectory_samples(const CsvTable& table, std::size_t stock);

/// Regression pairs from a scatter table.
SampleSeries scatter_samples(const CsvTable& table, std::size_t stock);

}  // namespace cmg
