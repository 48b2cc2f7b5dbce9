#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "levykf/model.hpp"
#include "levykf/montecarlo.hpp"

namespace levykf::cli {

/// Malformed CSV input; `line()` is 1-based.
class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view text, std::size_t line);

std::vector<std::string> split_row(std::string_view line);

/// Columns k, x_1..x_n, z_1..z_m.
void write_trajectory(std::ostream& out, const RunRecord& record);

/// Columns k, [x_1..x_n], z_1..z_m, xprior_1..n, xpost_1..n, clipped, and,
/// when truth is present, obs_error, est_error, post_error. `clipped` holds
/// one 0/1 digit per observation component.
void write_filtered(std::ostream& out, const RunRecord& record, bool with_truth,
                    const std::vector<std::size_t>& observed);

/// Reads a trajectory (or filtered) CSV. The header must contain `k` and
/// exactly `obs_dim` z columns; x columns are optional but, when present,
/// must number `state_dim`. Estimate columns, when present, are read back.
/// Steps without truth get an empty x_true.
RunRecord read_trajectory(std::istream& in, std::size_t state_dim, std::size_t obs_dim);

/// Columns k, er_mean, er_median, or_mean, or_median, post_mean, post_median,
/// preceded by `#` comment lines spelling out each formula.
void write_metrics(std::ostream& out, const MetricsSeries& series);

/// Header "C,time_avg_est_error".
void write_sweep(std::ostream& out, const SweepResult& sweep);

}  // namespace levykf::cli
