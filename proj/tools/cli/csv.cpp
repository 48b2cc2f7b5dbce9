#include "cli/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <map>
#include <optional>
#include <ostream>

namespace levykf::cli {

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
}

void append_indexed(std::vector<std::string>& cols, const char* prefix, std::size_t count) {
    for (std::size_t i = 1; i <= count; ++i) cols.push_back(prefix + std::to_string(i));
}

void write_vector(std::ostream& out, const Vector& v) {
    for (double x : v.entries()) out << ',' << format_double(x);
}

// Column positions for a family "<prefix><1..count>", in order.
std::optional<std::vector<std::size_t>> find_family(const std::map<std::string, std::size_t>& by_name,
                                                    const std::string& prefix, std::size_t& count) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 1;; ++i) {
        auto it = by_name.find(prefix + std::to_string(i));
        if (it == by_name.end()) break;
        pos.push_back(it->second);
    }
    count = pos.size();
    if (pos.empty()) return std::nullopt;
    return pos;
}

Vector gather(const std::vector<std::string>& fields, const std::vector<std::size_t>& pos,
              std::size_t line) {
    Vector v(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) v[i] = parse_double(fields[pos[i]], line);
    return v;
}

}  // namespace

std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text, std::size_t line) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw CsvError(line, "not a number: \"" + std::string(text) + "\"");
    }
    return v;
}

std::vector<std::string> split_row(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

void write_trajectory(std::ostream& out, const RunRecord& record) {
    if (record.steps.empty()) return;
    std::vector<std::string> cols{"k"};
    append_indexed(cols, "x_", record.steps.front().x_true.dim());
    append_indexed(cols, "z_", record.steps.front().z.dim());
    write_header(out, cols);
    for (const auto& s : record.steps) {
        out << s.k;
        write_vector(out, s.x_true);
        write_vector(out, s.z);
        out << '\n';
    }
}

void write_filtered(std::ostream& out, const RunRecord& record, bool with_truth,
                    const std::vector<std::size_t>& observed) {
    if (record.steps.empty()) return;
    const auto& first = record.steps.front();
    const std::size_t n = first.x_prior ? first.x_prior->dim() : 0;
    std::vector<std::string> cols{"k"};
    if (with_truth) append_indexed(cols, "x_", n);
    append_indexed(cols, "z_", first.z.dim());
    append_indexed(cols, "xprior_", n);
    append_indexed(cols, "xpost_", n);
    cols.emplace_back("clipped");
    if (with_truth) {
        cols.emplace_back("obs_error");
        cols.emplace_back("est_error");
        cols.emplace_back("post_error");
    }
    write_header(out, cols);

    std::vector<StepErrors> errors;
    if (with_truth) errors = compute_metrics(record, observed);
    for (std::size_t i = 0; i < record.steps.size(); ++i) {
        const auto& s = record.steps[i];
        out << s.k;
        if (with_truth) write_vector(out, s.x_true);
        write_vector(out, s.z);
        write_vector(out, s.x_prior.value());
        write_vector(out, s.x_post.value());
        out << ',';
        for (bool c : s.clipped) out << (c ? '1' : '0');
        if (with_truth) {
            out << ',' << format_double(errors[i].obs) << ',' << format_double(errors[i].est) << ','
                << format_double(errors[i].post);
        }
        out << '\n';
    }
}

RunRecord read_trajectory(std::istream& in, std::size_t state_dim, std::size_t obs_dim) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        header = split_row(line);
        break;
    }
    if (header.empty()) throw CsvError(line_no == 0 ? 1 : line_no, "missing header row");
    const std::size_t header_line = line_no;

    std::map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!by_name.emplace(header[i], i).second) {
            throw CsvError(header_line, "duplicate column \"" + header[i] + "\"");
        }
    }
    const auto k_col = by_name.find("k");
    if (k_col == by_name.end()) throw CsvError(header_line, "missing column \"k\"");

    std::size_t z_count = 0, x_count = 0, prior_count = 0, post_count = 0;
    const auto z_pos = find_family(by_name, "z_", z_count);
    const auto x_pos = find_family(by_name, "x_", x_count);
    const auto prior_pos = find_family(by_name, "xprior_", prior_count);
    const auto post_pos = find_family(by_name, "xpost_", post_count);
    if (z_count != obs_dim) {
        throw CsvError(header_line, "expected " + std::to_string(obs_dim) +
                                        " observation columns z_1..z_" + std::to_string(obs_dim) +
                                        ", found " + std::to_string(z_count));
    }
    if (by_name.contains("z_" + std::to_string(obs_dim + 1))) {
        throw CsvError(header_line, "too many observation columns for dimension " +
                                        std::to_string(obs_dim));
    }
    if (x_pos && x_count != state_dim) {
        throw CsvError(header_line, "expected " + std::to_string(state_dim) +
                                        " state columns, found " + std::to_string(x_count));
    }
    const bool with_estimates = prior_pos && post_pos && prior_count == state_dim &&
                                post_count == state_dim;

    RunRecord record;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        const auto fields = split_row(line);
        if (fields.size() != header.size()) {
            throw CsvError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                        std::to_string(fields.size()));
        }
        const double k = parse_double(fields[k_col->second], line_no);
        if (k != static_cast<double>(record.steps.size())) {
            throw CsvError(line_no, "step index must be " + std::to_string(record.steps.size()));
        }
        StepRecord step;
        step.k = record.steps.size();
        step.z = gather(fields, *z_pos, line_no);
        if (x_pos) step.x_true = gather(fields, *x_pos, line_no);
        if (with_estimates) {
            step.x_prior = gather(fields, *prior_pos, line_no);
            step.x_post = gather(fields, *post_pos, line_no);
        }
        record.steps.push_back(std::move(step));
    }
    if (record.steps.empty()) throw CsvError(line_no + 1, "no data rows");
    return record;
}

void write_metrics(std::ostream& out, const MetricsSeries& m) {
    out << "# runs=" << m.num_runs << '\n'
        << "# er   = mean over runs of sqrt(sum_i (z_k[i] - x_k[obs i])^2)"
           "  (observation error; labelled ER)\n"
        << "# or   = mean over runs of sqrt(sum_i (xprior_k[obs i] - x_k[obs i])^2)"
           "  (prior estimate error; labelled OR)\n"
        << "# post = mean over runs of sqrt(sum_i (xpost_k[obs i] - x_k[obs i])^2)"
           "  (posterior estimate error)\n"
        << "# ER/OR keep the names used by the original tracking experiment; the formulas above\n"
        << "# define them (ER is built from z, OR from the prior estimate)\n"
        << "# *_median columns are per-step medians over runs\n";
    out << "k,er_mean,er_median,or_mean,or_median,post_mean,post_median\n";
    for (std::size_t k = 0; k < m.num_steps(); ++k) {
        out << k << ',' << format_double(m.er_mean[k]) << ',' << format_double(m.er_median[k])
            << ',' << format_double(m.or_mean[k]) << ',' << format_double(m.or_median[k]) << ','
            << format_double(m.post_mean[k]) << ',' << format_double(m.post_median[k]) << '\n';
    }
}

void write_sweep(std::ostream& out, const SweepResult& sweep) {
    out << "C,time_avg_est_error\n";
    for (std::size_t i = 0; i < sweep.thresholds.size(); ++i) {
        out << format_double(sweep.thresholds[i]) << ','
            << format_double(sweep.time_avg_est_error[i]) << '\n';
    }
}

}  // namespace levykf::cli
