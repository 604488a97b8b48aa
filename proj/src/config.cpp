#include "alesupg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "alesupg/output.hpp"

namespace alesupg {

CaseId parse_case_id(std::string_view text) {
    if (text == "beam") return CaseId::Beam;
    if (text == "moving_square") return CaseId::MovingSquare;
    throw ConfigError("unknown case '" + std::string(text) + "' (expected beam or moving_square)");
}

std::string_view to_string(CaseId id) { return id == CaseId::Beam ? "beam" : "moving_square"; }

BeamMotionMode parse_beam_motion(std::string_view text) {
    if (text == "elastic") return BeamMotionMode::Elastic;
    if (text == "analytic") return BeamMotionMode::Analytic;
    throw ConfigError("unknown beam.motion '" + std::string(text) + "' (expected elastic or analytic)");
}

std::string_view to_string(BeamMotionMode mode) { return mode == BeamMotionMode::Elastic ? "elastic" : "analytic"; }

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key + ": '" + value + "' is not a number");
    return out;
}

int to_int(const std::string& key, const std::string& value) {
    int out = 0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key + ": '" + value + "' is not an integer");
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "off" || value == "no") return false;
    throw ConfigError(key + ": '" + value + "' is not a boolean");
}

std::optional<double> to_optional(const std::string& key, const std::string& value) {
    if (value == "auto" || value == "none") return std::nullopt;
    return to_double(key, value);
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    if (value == "none") return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

std::string optional_text(const std::optional<double>& v, const char* unset) {
    return v ? format_double(*v) : std::string(unset);
}

std::string list_text(const std::vector<double>& values) {
    if (values.empty()) return "none";
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"case", [](RunConfig& c, auto&, auto& v) { c.case_id = parse_case_id(v); }},
        {"mesh", [](RunConfig& c, auto&, auto& v) { c.mesh = v; }},
        {"fe.degree", [](RunConfig& c, auto& k, auto& v) { c.degree = to_int(k, v); }},
        {"fe.initial", [](RunConfig& c, auto&, auto& v) { c.initial = parse_initial_datum(v); }},
        {"time.scheme", [](RunConfig& c, auto&, auto& v) { c.scheme = parse_scheme(v); }},
        {"time.dt", [](RunConfig& c, auto& k, auto& v) { c.dt = to_double(k, v); }},
        {"time.T", [](RunConfig& c, auto& k, auto& v) { c.final_time = to_double(k, v); }},
        {"time.output_every", [](RunConfig& c, auto& k, auto& v) { c.output_every = to_int(k, v); }},
        {"time.cn_mass", [](RunConfig& c, auto&, auto& v) { c.cn_mass = parse_cn_mass(v); }},
        {"time.bdf2_velocity", [](RunConfig& c, auto&, auto& v) { c.bdf2_velocity = parse_bdf2_velocity(v); }},
        {"stab.delta0", [](RunConfig& c, auto& k, auto& v) { c.delta0 = to_double(k, v); }},
        {"stab.c_inv", [](RunConfig& c, auto& k, auto& v) { c.c_inv = to_optional(k, v); }},
        {"stab.dt_cap", [](RunConfig& c, auto& k, auto& v) { c.dt_cap = to_bool(k, v); }},
        {"stab.mu_override", [](RunConfig& c, auto& k, auto& v) { c.mu_override = to_optional(k, v); }},
        {"solver.method", [](RunConfig& c, auto&, auto& v) { c.solver_method = parse_solver_method(v); }},
        {"solver.tol", [](RunConfig& c, auto& k, auto& v) { c.solver_tol = to_double(k, v); }},
        {"solver.max_iter", [](RunConfig& c, auto& k, auto& v) { c.solver_max_iter = to_int(k, v); }},
        {"assembly.threads", [](RunConfig& c, auto& k, auto& v) { c.threads = to_int(k, v); }},
        {"beam.near_h", [](RunConfig& c, auto& k, auto& v) { c.beam_near_h = to_double(k, v); }},
        {"beam.far_h", [](RunConfig& c, auto& k, auto& v) { c.beam_far_h = to_double(k, v); }},
        {"beam.n_arc", [](RunConfig& c, auto& k, auto& v) { c.beam_n_arc = to_int(k, v); }},
        {"beam.motion", [](RunConfig& c, auto&, auto& v) { c.beam_motion = parse_beam_motion(v); }},
        {"beam.stiffen", [](RunConfig& c, auto& k, auto& v) { c.beam_stiffen = to_bool(k, v); }},
        {"mms.eps", [](RunConfig& c, auto& k, auto& v) { c.mms_eps = to_double(k, v); }},
        {"mms.n", [](RunConfig& c, auto& k, auto& v) { c.mms_n = to_int(k, v); }},
        {"output.dir", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
        {"output.snapshots", [](RunConfig& c, auto& k, auto& v) { c.snapshot_times = to_list(k, v); }},
        {"output.line_y", [](RunConfig& c, auto& k, auto& v) { c.line_y = to_double(k, v); }},
        {"output.line_points", [](RunConfig& c, auto& k, auto& v) { c.line_points = to_int(k, v); }},
    };
    return table;
}

}  // namespace

void RunConfig::validate() const {
    if (degree != 1 && degree != 2) throw ConfigError("fe.degree must be 1 or 2");
    step_count(dt, final_time);
    if (output_every < 0) throw ConfigError("time.output_every must be >= 0");
    if (!(delta0 >= 0.0)) throw ConfigError("stab.delta0 must be >= 0");
    if (c_inv && !(*c_inv > 0.0)) throw ConfigError("stab.c_inv must be positive");
    if (mu_override && !(*mu_override >= 0.0)) throw ConfigError("stab.mu_override must be >= 0");
    if (!(solver_tol > 0.0)) throw ConfigError("solver.tol must be positive");
    if (solver_max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
    if (threads < 0) throw ConfigError("assembly.threads must be >= 0");
    if (!(beam_near_h > 0.0) || !(beam_near_h < beam_far_h)) throw ConfigError("need 0 < beam.near_h < beam.far_h");
    if (beam_n_arc < 3) throw ConfigError("beam.n_arc must be >= 3");
    if (!(mms_eps > 0.0)) throw ConfigError("mms.eps must be positive");
    if (mms_n < 1) throw ConfigError("mms.n must be >= 1");
    if (output_dir.empty()) throw ConfigError("output.dir must not be empty");
    for (double t : snapshot_times) {
        if (!(t >= 0.0)) throw ConfigError("output.snapshots must be nonnegative times");
    }
    if (line_points < 2) throw ConfigError("output.line_points must be >= 2");
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [key, setter] : setters()) out.push_back(key);
        return out;
    }();
    return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(config, key, trim(value));
}

void apply_config_text(RunConfig& config, std::istream& in, const std::string& source) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source + ":" + std::to_string(number) + ": expected 'key = value'");
        }
        try {
            apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(source + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path.string() + "'");
    apply_config_text(config, in, path.string());
}

std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& c) {
    return {
        {"case", std::string(to_string(c.case_id))},
        {"mesh", c.mesh},
        {"fe.degree", std::to_string(c.degree)},
        {"fe.initial", std::string(to_string(c.initial))},
        {"time.scheme", std::string(to_string(c.scheme))},
        {"time.dt", format_double(c.dt)},
        {"time.T", format_double(c.final_time)},
        {"time.output_every", std::to_string(c.output_every)},
        {"time.cn_mass", std::string(to_string(c.cn_mass))},
        {"time.bdf2_velocity", std::string(to_string(c.bdf2_velocity))},
        {"stab.delta0", format_double(c.delta0)},
        {"stab.c_inv", optional_text(c.c_inv, "auto")},
        {"stab.dt_cap", c.dt_cap ? "true" : "false"},
        {"stab.mu_override", optional_text(c.mu_override, "none")},
        {"solver.method", std::string(to_string(c.solver_method))},
        {"solver.tol", format_double(c.solver_tol)},
        {"solver.max_iter", std::to_string(c.solver_max_iter)},
        {"assembly.threads", std::to_string(c.threads)},
        {"beam.near_h", format_double(c.beam_near_h)},
        {"beam.far_h", format_double(c.beam_far_h)},
        {"beam.n_arc", std::to_string(c.beam_n_arc)},
        {"beam.motion", std::string(to_string(c.beam_motion))},
        {"beam.stiffen", c.beam_stiffen ? "true" : "false"},
        {"mms.eps", format_double(c.mms_eps)},
        {"mms.n", std::to_string(c.mms_n)},
        {"output.dir", c.output_dir},
        {"output.snapshots", list_text(c.snapshot_times)},
        {"output.line_y", format_double(c.line_y)},
        {"output.line_points", std::to_string(c.line_points)},
    };
}

void write_config(std::ostream& out, const RunConfig& config) {
    for (const auto& [key, value] : resolved_settings(config)) out << key << " = " << value << "\n";
}

}  // namespace alesupg
