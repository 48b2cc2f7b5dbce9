#include "cli/config.hpp"

#include <fstream>
#include <set>

#include "levykf/errors.hpp"

namespace levykf::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& field) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError(join(field, key), "unknown key");
    }
}

const json& require_key(const json& obj, const char* key, const std::string& field) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(join(field, key), "missing required key");
    return *it;
}

double parse_number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field, "expected a number");
    return v.get<double>();
}

std::size_t parse_count(const json& v, const std::string& field, std::size_t min_value) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < static_cast<std::int64_t>(min_value)) {
        throw ConfigError(field, "expected an integer >= " + std::to_string(min_value));
    }
    return v.get<std::size_t>();
}

bool is_matrix_literal(const json& v) {
    return v.is_array() && !v.empty() && v.front().is_array() &&
           (v.front().empty() || v.front().front().is_number());
}

StepSequence parse_sequence(const json& v, const std::string& field) {
    if (is_matrix_literal(v)) return StepSequence(parse_matrix(v, field));
    if (!v.is_array() || v.empty()) {
        throw ConfigError(field, "expected a matrix or a non-empty list of per-step matrices");
    }
    std::vector<Matrix> items;
    for (std::size_t k = 0; k < v.size(); ++k) {
        items.push_back(parse_matrix(v[k], field + "[" + std::to_string(k) + "]"));
    }
    return StepSequence(std::move(items));
}

Vector parse_vector(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(parse_number(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return Vector(std::move(out));
}

StateSpaceModel parse_model(const json& v, std::string& name) {
    const std::string field = "model";
    if (v.is_string()) {
        name = v.get<std::string>();
        return preset_model(name);
    }
    if (!v.is_object()) throw ConfigError(field, "expected a preset name or an object");

    if (v.contains("preset")) {
        reject_unknown_keys(v,
                            {"preset", "stable_alpha", "stable_sigma", "gaussian_variance",
                             "process_variance"},
                            field);
        const json& p = v.at("preset");
        if (!p.is_string()) throw ConfigError("model.preset", "expected a string");
        name = p.get<std::string>();
        if (name != "tracking") {
            throw ConfigError("model.preset", "unknown preset \"" + name + "\"");
        }
        TrackingParameters params;
        if (v.contains("stable_alpha"))
            params.stable_alpha = parse_number(v.at("stable_alpha"), "model.stable_alpha");
        if (v.contains("stable_sigma"))
            params.stable_sigma = parse_number(v.at("stable_sigma"), "model.stable_sigma");
        if (v.contains("gaussian_variance"))
            params.gaussian_variance =
                parse_number(v.at("gaussian_variance"), "model.gaussian_variance");
        if (v.contains("process_variance"))
            params.process_variance =
                parse_number(v.at("process_variance"), "model.process_variance");
        try {
            return tracking_preset(params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(field, e.what());
        }
    }

    reject_unknown_keys(v, {"F", "H", "Q", "x0", "measurement_noise"}, field);
    name = "custom";
    StepSequence f = parse_sequence(require_key(v, "F", field), "model.F");
    StepSequence h = parse_sequence(require_key(v, "H", field), "model.H");
    StepSequence q = parse_sequence(require_key(v, "Q", field), "model.Q");
    Vector x0 = parse_vector(require_key(v, "x0", field), "model.x0");
    NoiseSpec noise = parse_noise(require_key(v, "measurement_noise", field),
                                  "model.measurement_noise");
    try {
        return StateSpaceModel(std::move(f), std::move(h), std::move(q), std::move(noise),
                               std::move(x0));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
}

FilterVariant parse_variant(const json& v, std::size_t obs_dim) {
    const std::string field = "variant";
    if (!v.is_object()) throw ConfigError(field, "expected an object");
    const json& type = require_key(v, "type", field);
    if (!type.is_string()) throw ConfigError("variant.type", "expected a string");
    const auto t = type.get<std::string>();
    if (t == "modified") {
        reject_unknown_keys(v, {"type", "threshold"}, field);
        const double c = v.contains("threshold")
                             ? parse_number(v.at("threshold"), "variant.threshold")
                             : kDefaultClipThreshold;
        if (!(c > 0.0)) throw ConfigError("variant.threshold", "C must be positive");
        return ModifiedVariant{ModifiedFilterConfig(c)};
    }
    if (t == "conventional") {
        reject_unknown_keys(v, {"type", "R"}, field);
        Matrix r = parse_matrix(require_key(v, "R", field), "variant.R");
        if (r.rows() != obs_dim || r.cols() != obs_dim) {
            throw ConfigError("variant.R", "expected a " + std::to_string(obs_dim) + "x" +
                                               std::to_string(obs_dim) + " matrix, got " +
                                               r.shape());
        }
        if (!is_symmetric(r) || !is_psd(r)) {
            throw ConfigError("variant.R", "must be symmetric positive semidefinite");
        }
        return ConventionalVariant{std::move(r)};
    }
    throw ConfigError("variant.type", "expected \"modified\" or \"conventional\", got \"" + t +
                                          "\"");
}

}  // namespace

StateSpaceModel preset_model(const std::string& name) {
    if (name == "tracking") return tracking_preset();
    throw ConfigError("model", "unknown preset \"" + name + "\"");
}

Matrix parse_matrix(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a non-empty array of rows");
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    std::vector<double> entries;
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = v[i];
        const std::string row_field = field + "[" + std::to_string(i) + "]";
        if (!row.is_array() || row.empty()) throw ConfigError(row_field, "expected a row array");
        if (i == 0) cols = row.size();
        if (row.size() != cols) throw ConfigError(row_field, "ragged matrix rows");
        for (std::size_t j = 0; j < cols; ++j) {
            entries.push_back(parse_number(row[j], row_field + "[" + std::to_string(j) + "]"));
        }
    }
    try {
        return Matrix(rows, cols, std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
}

NoiseSpec parse_noise(const json& v, const std::string& field) {
    if (!v.is_object()) throw ConfigError(field, "expected a noise object");
    const json& kind = require_key(v, "kind", field);
    if (!kind.is_string()) throw ConfigError(join(field, "kind"), "expected a string");
    const auto k = kind.get<std::string>();
    try {
        if (k == "gaussian") {
            reject_unknown_keys(v, {"kind", "covariance"}, field);
            return NoiseSpec::gaussian(
                parse_matrix(require_key(v, "covariance", field), join(field, "covariance")));
        }
        if (k == "alpha_stable") {
            reject_unknown_keys(v, {"kind", "alpha", "sigma", "dim"}, field);
            const double alpha = parse_number(require_key(v, "alpha", field), join(field, "alpha"));
            const double sigma = parse_number(require_key(v, "sigma", field), join(field, "sigma"));
            const std::size_t dim =
                v.contains("dim") ? parse_count(v.at("dim"), join(field, "dim"), 1) : 1;
            return NoiseSpec::alpha_stable(alpha, sigma, dim);
        }
        if (k == "sum") {
            reject_unknown_keys(v, {"kind", "parts"}, field);
            const json& parts = require_key(v, "parts", field);
            if (!parts.is_array() || parts.empty()) {
                throw ConfigError(join(field, "parts"), "expected a non-empty array");
            }
            std::vector<NoiseSpec> specs;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                specs.push_back(
                    parse_noise(parts[i], join(field, "parts") + "[" + std::to_string(i) + "]"));
            }
            return NoiseSpec::sum(std::move(specs));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    }
    throw ConfigError(join(field, "kind"),
                      "expected \"gaussian\", \"alpha_stable\" or \"sum\", got \"" + k + "\"");
}

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    reject_unknown_keys(doc,
                        {"version", "model", "num_steps", "num_runs", "seed", "variant",
                         "initial_covariance", "burn_in", "sweep_thresholds", "output_dir"},
                        "");

    const json& version = require_key(doc, "version", "");
    if (!version.is_number_integer() || version.get<int>() != kConfigVersion) {
        throw ConfigError("version", "unsupported config version (expected " +
                                         std::to_string(kConfigVersion) + ")");
    }

    ExperimentConfig cfg;
    if (doc.contains("model")) cfg.model = parse_model(doc.at("model"), cfg.model_name);
    if (doc.contains("num_steps")) cfg.num_steps = parse_count(doc.at("num_steps"), "num_steps", 1);
    if (doc.contains("num_runs")) cfg.num_runs = parse_count(doc.at("num_runs"), "num_runs", 1);
    if (doc.contains("burn_in")) cfg.burn_in = parse_count(doc.at("burn_in"), "burn_in", 0);
    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_unsigned()) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        cfg.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("variant")) {
        cfg.variant = parse_variant(doc.at("variant"), cfg.model.obs_dim());
    }
    if (doc.contains("initial_covariance")) {
        Matrix p0 = parse_matrix(doc.at("initial_covariance"), "initial_covariance");
        if (p0.rows() != cfg.model.state_dim() || p0.cols() != cfg.model.state_dim()) {
            throw ConfigError("initial_covariance", "expected a " +
                                                        std::to_string(cfg.model.state_dim()) +
                                                        "-square matrix, got " + p0.shape());
        }
        if (!is_symmetric(p0) || !is_psd(p0)) {
            throw ConfigError("initial_covariance", "must be symmetric positive semidefinite");
        }
        cfg.initial_covariance = std::move(p0);
    }
    if (doc.contains("sweep_thresholds")) {
        const json& t = doc.at("sweep_thresholds");
        if (!t.is_array()) throw ConfigError("sweep_thresholds", "expected an array");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string f = "sweep_thresholds[" + std::to_string(i) + "]";
            const double c = parse_number(t[i], f);
            if (!(c > 0.0)) throw ConfigError(f, "C must be positive");
            cfg.sweep_thresholds.push_back(c);
        }
    }
    if (doc.contains("output_dir")) {
        const json& o = doc.at("output_dir");
        if (!o.is_string() || o.get<std::string>().empty()) {
            throw ConfigError("output_dir", "expected a non-empty path string");
        }
        cfg.output_dir = o.get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

}  // namespace levykf::cli
