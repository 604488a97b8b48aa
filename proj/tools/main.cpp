#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alesupg/driver.hpp"
#include "alesupg/output.hpp"

namespace {

using namespace alesupg;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_number(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("'" + text + "' is not a number");
}

struct Overrides {
    std::string config_file;
    std::map<std::string, std::string> keyed;
    std::vector<std::string> set;
};

RunConfig resolve(const Overrides& o) {
    RunConfig config;
    if (!o.config_file.empty()) apply_config_file(config, o.config_file);
    for (const auto& [key, value] : o.keyed) apply_setting(config, key, value);
    for (const auto& kv : o.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    config.validate();
    return config;
}

std::filesystem::path self_path(const char* argv0) {
    std::error_code ec;
    auto p = std::filesystem::read_symlink("/proc/self/exe", ec);
    return ec ? std::filesystem::absolute(argv0) : p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ALE-SUPG solver for convection-diffusion-reaction on moving domains"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides overrides;
    app.add_option("--config", overrides.config_file, "Flat key = value config file");
    app.add_option("--set", overrides.set, "Override one config key (key=value)");
    const std::map<std::string, std::string> aliases = {
        {"scheme", "time.scheme"}, {"dt", "time.dt"}, {"T", "time.T"}, {"delta0", "stab.delta0"}, {"out", "output.dir"}};
    for (const auto& key : config_keys()) {
        app.add_option_function<std::string>(
            "--" + key, [&overrides, key](const std::string& v) { overrides.keyed[key] = v; }, "Config key " + key);
    }
    for (const auto& [alias, key] : aliases) {
        app.add_option_function<std::string>(
            "--" + alias, [&overrides, key = key](const std::string& v) { overrides.keyed[key] = v; },
            "Alias of --" + key);
    }

    auto* run_cmd = app.add_subcommand("run", "Run one case");

    auto* sweep_cmd = app.add_subcommand("sweep-delta", "Run a delta0 sweep per scheme");
    std::string deltas = "0.5,1,5,10";
    std::string schemes = "euler,cn";
    int parallel_runs = 1;
    sweep_cmd->add_option("--deltas", deltas, "Comma-separated delta0 values")->capture_default_str();
    sweep_cmd->add_option("--schemes", schemes, "Comma-separated schemes")->capture_default_str();
    sweep_cmd->add_option("--parallel-runs", parallel_runs, "Concurrent child processes")->capture_default_str();

    auto* conv_cmd = app.add_subcommand("convergence", "Refinement study on the manufactured case");
    std::string kind = "time";
    int levels = 4;
    conv_cmd->add_option("--kind", kind, "time or space")->capture_default_str();
    conv_cmd->add_option("--levels", levels, "Number of refinement levels")->capture_default_str();

    auto* mesh_cmd = app.add_subcommand("mesh-info", "Mesh statistics and audit");
    std::string write_mesh_path;
    mesh_cmd->add_option("--write", write_mesh_path, "Also write the mesh to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        const RunConfig config = resolve(overrides);
        if (run_cmd->parsed()) {
            RunHooks hooks;
            hooks.log = &std::cerr;
            const auto s = execute_run(config, hooks);
            std::cout << "steps " << s.steps << ", dofs " << s.dofs << ", final u in [" << format_double(s.final_u_min)
                      << ", " << format_double(s.final_u_max) << "], max undershoot "
                      << format_double(s.max_undershoot) << ", max overshoot " << format_double(s.max_overshoot);
            if (!std::isnan(s.l2_error)) std::cout << ", L2 error " << format_double(s.l2_error);
            std::cout << "\noutputs in " << config.output_dir << "\n";
        } else if (sweep_cmd->parsed()) {
            std::vector<double> ds;
            for (const auto& d : split(deltas)) ds.push_back(parse_number(d));
            std::vector<Scheme> ss;
            for (const auto& s : split(schemes)) ss.push_back(parse_scheme(s));
            const auto rows = sweep_delta(config, ds, ss, parallel_runs, self_path(argv[0]), &std::cerr);
            std::cout << "delta0,scheme,max_undershoot,max_overshoot\n";
            for (const auto& r : rows) {
                std::cout << format_double(r.delta0) << ',' << to_string(r.scheme) << ','
                          << format_double(r.max_undershoot) << ',' << format_double(r.max_overshoot) << "\n";
            }
        } else if (conv_cmd->parsed()) {
            const auto rows = convergence_study(config, parse_study_kind(kind), levels, true, &std::cerr);
            std::cout << "level,dt,n,l2_error,order,difference_order\n";
            for (const auto& r : rows) {
                std::cout << r.level << ',' << format_double(r.dt) << ',' << r.n << ',' << format_double(r.error) << ','
                          << format_double(r.order) << ',' << format_double(r.difference_order) << "\n";
            }
        } else if (mesh_cmd->parsed()) {
            describe_mesh(config, std::cout);
            if (!write_mesh_path.empty()) write_mesh_file(write_mesh_path, *build_case(config).mesh);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
