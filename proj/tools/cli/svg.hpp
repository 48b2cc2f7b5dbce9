#pragma once

#include <iosfwd>

#include "levykf/montecarlo.hpp"

namespace levykf::cli {

/// Line chart of the mean observation error and the mean prior-estimate
/// error against the step index, with a legend carrying both formulas.
void write_error_plot(std::ostream& out, const MetricsSeries& series);

}  // namespace levykf::cli
