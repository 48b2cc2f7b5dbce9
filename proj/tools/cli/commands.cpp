#include "cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "cli/csv.hpp"
#include "cli/svg.hpp"
#include "levykf/errors.hpp"
#include "levykf/montecarlo.hpp"

namespace levykf::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& contents) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << contents;
    f.close();
    if (!f) throw IoError("failed writing " + path.string());
}

ExperimentOptions options_for(const ExperimentConfig& cfg, std::size_t threads) {
    ExperimentOptions o;
    o.threads = threads;
    o.initial_covariance = cfg.initial_covariance;
    o.burn_in = cfg.burn_in;
    return o;
}

}  // namespace

ExperimentConfig resolve_config(const fs::path& config_path, const Overrides& ov, bool sweep) {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.runs) {
        if (*ov.runs == 0) throw ConfigError("--runs", "must be at least 1");
        cfg.num_runs = *ov.runs;
    }
    if (ov.steps) {
        if (*ov.steps == 0) throw ConfigError("--steps", "must be at least 1");
        cfg.num_steps = *ov.steps;
    }
    if (!ov.thresholds.empty()) {
        for (double c : ov.thresholds) {
            if (!(c > 0.0)) throw ConfigError("--threshold", "C must be positive");
        }
        if (sweep) {
            cfg.sweep_thresholds = ov.thresholds;
        } else {
            if (ov.thresholds.size() != 1) {
                throw ConfigError("--threshold", "give a single value outside of sweep");
            }
            cfg.variant = ModifiedVariant{ModifiedFilterConfig(ov.thresholds.front())};
        }
    }
    if (ov.out) cfg.output_dir = *ov.out;
    return cfg;
}

std::size_t threads_from_env() {
    const char* raw = std::getenv("LEVY_KALMAN_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    const std::string s(raw);
    if (s.find_first_not_of("0123456789") != std::string::npos || s.size() > 6) {
        throw ConfigError("LEVY_KALMAN_THREADS", "expected a non-negative integer, got \"" + s + "\"");
    }
    return static_cast<std::size_t>(std::stoul(s));
}

fs::path cmd_simulate(const ExperimentConfig& cfg) {
    auto streams = experiment_streams(cfg.seed, 0);
    const RunRecord record = simulate(cfg.model, cfg.num_steps, streams.state, streams.obs);
    std::ostringstream out;
    write_trajectory(out, record);
    const fs::path path = cfg.output_dir / "trajectory.csv";
    write_file(path, out.str());
    return path;
}

fs::path cmd_filter(const ExperimentConfig& cfg, const fs::path& input) {
    std::ifstream in(input);
    if (!in) throw IoError("cannot read " + input.string());
    const RunRecord record = read_trajectory(in, cfg.model.state_dim(), cfg.model.obs_dim());
    const bool with_truth = record.steps.front().x_true.dim() == cfg.model.state_dim();

    const FilterState init =
        initial_state_for(cfg.model, record.steps.front().z, options_for(cfg, 1));
    const RunRecord filtered = run_filter(record, cfg.model, cfg.variant, init);

    std::vector<std::size_t> observed;
    if (with_truth) observed = observed_indices(cfg.model.H(0));
    std::ostringstream out;
    write_filtered(out, filtered, with_truth, observed);
    const fs::path path = cfg.output_dir / "filtered.csv";
    write_file(path, out.str());
    return path;
}

BenchmarkOutputs cmd_benchmark(const ExperimentConfig& cfg, std::size_t threads) {
    const MetricsSeries m = run_experiment(cfg.model, cfg.variant, cfg.num_steps, cfg.num_runs,
                                           cfg.seed, options_for(cfg, threads));
    BenchmarkOutputs res;
    res.time_avg_obs_error = time_average(m.er_mean, cfg.burn_in);
    res.time_avg_est_error = time_average(m.or_mean, cfg.burn_in);
    res.time_avg_post_error = time_average(m.post_mean, cfg.burn_in);

    std::ostringstream metrics;
    write_metrics(metrics, m);
    std::ostringstream plot;
    write_error_plot(plot, m);
    std::ostringstream summary;
    summary << "burn_in,time_avg_obs_error,time_avg_est_error,time_avg_post_error\n"
            << cfg.burn_in << ',' << format_double(res.time_avg_obs_error) << ','
            << format_double(res.time_avg_est_error) << ','
            << format_double(res.time_avg_post_error) << '\n';

    res.metrics_csv = cfg.output_dir / "metrics.csv";
    res.plot_svg = cfg.output_dir / "errors.svg";
    res.summary_csv = cfg.output_dir / "summary.csv";
    write_file(res.metrics_csv, metrics.str());
    write_file(res.plot_svg, plot.str());
    write_file(res.summary_csv, summary.str());
    return res;
}

fs::path cmd_sweep(const ExperimentConfig& cfg, std::size_t threads) {
    if (cfg.sweep_thresholds.empty()) {
        throw ConfigError("sweep_thresholds", "at least one threshold is required for sweep");
    }
    const SweepResult sweep = sweep_threshold(cfg.model, cfg.num_steps, cfg.num_runs, cfg.seed,
                                              cfg.sweep_thresholds, options_for(cfg, threads));
    std::ostringstream out;
    write_sweep(out, sweep);
    const fs::path path = cfg.output_dir / "sweep.csv";
    write_file(path, out.str());
    return path;
}

namespace {

int classify(const std::exception_ptr& e, std::ostream& err, const std::string& prefix) {
    try {
        std::rethrow_exception(e);
    } catch (const ExperimentError& ex) {
        return classify(ex.cause(), err, prefix + "run " + std::to_string(ex.run_index()) + ": ");
    } catch (const ConfigError& ex) {
        err << "error: " << prefix << ex.what() << '\n';
        return kExitUsage;
    } catch (const CsvError& ex) {
        err << "error: " << prefix << "malformed CSV, " << ex.what() << '\n';
        return kExitUsage;
    } catch (const IoError& ex) {
        err << "error: " << prefix << ex.what() << '\n';
        return kExitIo;
    } catch (const SingularityError& ex) {
        err << "error: " << prefix << "numerical failure: " << ex.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& ex) {
        // DimensionError / SpecificationError from the library.
        err << "error: " << prefix << ex.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& ex) {
        err << "error: " << prefix << ex.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kalman filtering under heavy-tailed measurement noise"};
    app.require_subcommand(1);

    std::string config_path;
    std::string input_path;
    Overrides ov;
    std::uint64_t seed = 0;
    std::size_t runs = 0, steps = 0;
    std::string out_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config (defaults if omitted)");
        sub->add_option("--seed", seed, "Random seed");
        sub->add_option("--runs", runs, "Monte Carlo runs");
        sub->add_option("--steps", steps, "Time steps per run");
        sub->add_option("--threshold", ov.thresholds,
                        "Clipping threshold C (repeatable for sweep)");
        sub->add_option("--out", out_dir, "Output directory");
    };

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one trajectory");
    auto* filter_cmd = app.add_subcommand("filter", "Filter recorded observations");
    auto* bench_cmd = app.add_subcommand("benchmark", "Averaged error curves over many runs");
    auto* sweep_cmd = app.add_subcommand("sweep", "Time-averaged error versus threshold C");
    for (auto* sub : {simulate_cmd, filter_cmd, bench_cmd, sweep_cmd}) add_common(sub);
    filter_cmd->add_option("--input", input_path, "Trajectory CSV to filter")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
            err << sub->help();
        } else {
            err << app.help();
        }
        return kExitUsage;
    }

    auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
    CLI::App* sub = app.get_subcommands().front();
    if (given(sub, "--seed")) ov.seed = seed;
    if (given(sub, "--runs")) ov.runs = runs;
    if (given(sub, "--steps")) ov.steps = steps;
    if (given(sub, "--out")) ov.out = out_dir;

    try {
        const ExperimentConfig cfg = resolve_config(config_path, ov, sub == sweep_cmd);
        if (sub == simulate_cmd) {
            out << "wrote " << cmd_simulate(cfg).string() << '\n';
        } else if (sub == filter_cmd) {
            out << "wrote " << cmd_filter(cfg, input_path).string() << '\n';
        } else if (sub == bench_cmd) {
            const auto res = cmd_benchmark(cfg, threads_from_env());
            out << "runs=" << cfg.num_runs << " steps=" << cfg.num_steps
                << " burn_in=" << cfg.burn_in << '\n'
                << "time-averaged observation error (ER): " << res.time_avg_obs_error << '\n'
                << "time-averaged prior estimate error (OR): " << res.time_avg_est_error << '\n'
                << "time-averaged posterior estimate error: " << res.time_avg_post_error << '\n'
                << "wrote " << res.metrics_csv.string() << ", " << res.plot_svg.string() << ", "
                << res.summary_csv.string() << '\n';
        } else {
            out << "wrote " << cmd_sweep(cfg, threads_from_env()).string() << '\n';
        }
    } catch (...) {
        return classify(std::current_exception(), err, "");
    }
    return kExitOk;
}

}  // namespace levykf::cli
