#include "tptweak/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tptweak {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "name",           "output_dir",     "hbar",           "mass",
        "gamma",          "x_initial",      "p_incident",     "barrier_height",
        "barrier_half_width", "x_detect",   "detection_margin", "window_sigmas",
        "panels",         "nodes_per_panel", "time_samples",  "eps_tail",
        "max_extensions", "max_phase_rate", "threads",        "delta_x",
        "sweep_gammas"};
    return keys;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& target,
                std::vector<std::string>& errors) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        errors.push_back(std::string("key '") + key + "' has the wrong type");
    }
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    std::vector<std::string> errors;
    if (!j.is_object()) throw ConfigError("configuration root must be a JSON object");

    for (const auto& item : j.items())
        if (known_keys().count(item.key()) == 0)
            errors.push_back("unknown key '" + item.key() + "'");

    ExperimentConfig c;
    read_field(j, "name", c.name, errors);
    read_field(j, "output_dir", c.output_dir, errors);
    read_field(j, "hbar", c.params.hbar, errors);
    read_field(j, "mass", c.params.mass, errors);
    read_field(j, "gamma", c.state.gamma, errors);
    read_field(j, "x_initial", c.state.x_center, errors);
    read_field(j, "p_incident", c.state.p_incident, errors);
    read_field(j, "barrier_height", c.barrier.height, errors);
    read_field(j, "barrier_half_width", c.barrier.half_width, errors);
    read_field(j, "x_detect", c.detection.x, errors);
    read_field(j, "detection_margin", c.detection.margin, errors);
    read_field(j, "window_sigmas", c.controls.window_sigmas, errors);
    read_field(j, "panels", c.controls.resolution.panels, errors);
    read_field(j, "nodes_per_panel", c.controls.resolution.nodes_per_panel, errors);
    read_field(j, "time_samples", c.controls.time_samples, errors);
    read_field(j, "eps_tail", c.controls.eps_tail, errors);
    read_field(j, "max_extensions", c.controls.max_extensions, errors);
    read_field(j, "max_phase_rate", c.controls.max_phase_rate, errors);
    read_field(j, "threads", c.controls.threads, errors);
    read_field(j, "delta_x", c.delta_x, errors);
    read_field(j, "sweep_gammas", c.sweep_gammas, errors);

    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid configuration:";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
    validate_config(c);
    return c;
}

void validate_config(const ExperimentConfig& c) {
    std::vector<std::string> errors;
    auto require = [&](bool ok, const std::string& msg) {
        if (!ok) errors.push_back(msg);
    };

    require(c.params.hbar > 0.0, "hbar must be positive");
    require(c.params.mass > 0.0, "mass must be positive");
    require(c.state.gamma > 0.0, "gamma must be positive");
    require(c.state.p_incident > 0.0, "p_incident must be positive");
    require(c.barrier.height >= 0.0, "barrier_height must be non-negative");
    require(c.barrier.half_width > 0.0, "barrier_half_width must be positive");
    require(c.detection.margin >= 0.0, "detection_margin must be non-negative");
    require(c.controls.window_sigmas >= 6.0, "window_sigmas must be at least 6");
    require(c.controls.resolution.panels >= 1, "panels must be at least 1");
    require(c.controls.resolution.nodes_per_panel >= 2, "nodes_per_panel must be at least 2");
    require(c.controls.time_samples >= 2, "time_samples must be at least 2");
    require(c.controls.eps_tail > 0.0 && c.controls.eps_tail < 1.0,
            "eps_tail must lie in (0, 1)");
    require(c.controls.max_extensions >= 0, "max_extensions must be non-negative");
    require(c.controls.max_phase_rate > 0.0, "max_phase_rate must be positive");
    require(c.controls.threads >= 1, "threads must be at least 1");
    require(c.delta_x > 0.0, "delta_x must be positive");
    require(!c.name.empty(), "name must not be empty");
    require(!c.sweep_gammas.empty(), "sweep_gammas must not be empty");
    for (double g : c.sweep_gammas)
        require(g > 0.0, "sweep_gammas entries must be positive");

    if (c.barrier.height > 0.0 && c.barrier.half_width > 0.0) {
        if (!outside_barrier_zone(c.detection, c.barrier))
            errors.push_back("x_detect must satisfy |x| > barrier_half_width + detection_margin");
        for (double off : {-c.delta_x / 2.0, c.delta_x / 2.0}) {
            PostSelection probe = c.detection;
            probe.x += off;
            if (!outside_barrier_zone(probe, c.barrier))
                errors.push_back(
                    "arrival-protocol probe points x_detect +- delta_x/2 must stay outside "
                    "the barrier exclusion zone");
        }
    }

    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid configuration:";
        for (const auto& e : errors) msg << "\n  - " << e;
        throw ConfigError(msg.str());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    return nlohmann::json{
        {"name", c.name},
        {"output_dir", c.output_dir},
        {"hbar", c.params.hbar},
        {"mass", c.params.mass},
        {"gamma", c.state.gamma},
        {"x_initial", c.state.x_center},
        {"p_incident", c.state.p_incident},
        {"barrier_height", c.barrier.height},
        {"barrier_half_width", c.barrier.half_width},
        {"x_detect", c.detection.x},
        {"detection_margin", c.detection.margin},
        {"window_sigmas", c.controls.window_sigmas},
        {"panels", c.controls.resolution.panels},
        {"nodes_per_panel", c.controls.resolution.nodes_per_panel},
        {"time_samples", c.controls.time_samples},
        {"eps_tail", c.controls.eps_tail},
        {"max_extensions", c.controls.max_extensions},
        {"max_phase_rate", c.controls.max_phase_rate},
        {"threads", c.controls.threads},
        {"delta_x", c.delta_x},
        {"sweep_gammas", c.sweep_gammas},
    };
}

std::string config_hash(const ExperimentConfig& c) {
    const std::string dump = config_to_json(c).dump();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64-bit
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace tptweak
