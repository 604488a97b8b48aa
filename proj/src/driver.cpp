#include "alesupg/driver.hpp"

#include <spawn.h>
#include <sys/wait.h>
#include <fcntl.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "json.hpp"

#include "alesupg/bench_cases.hpp"
#include "alesupg/mesh_generation.hpp"
#include "alesupg/output.hpp"

extern char** environ;

namespace alesupg {

namespace fs = std::filesystem;

CaseSetup build_case(const RunConfig& config) {
    CaseSetup setup;
    const bool generated = config.mesh == "generated";
    if (config.case_id == CaseId::Beam) {
        setup.problem = benchmark_problem();
        setup.map = beam::beam_map;
        if (generated) {
            beam::GeometryOptions geo;
            geo.near_h = config.beam_near_h;
            geo.far_h = config.beam_far_h;
            geo.n_arc = config.beam_n_arc;
            setup.mesh = std::make_shared<const Mesh>(beam::generate_mesh(geo));
        }
    } else {
        auto mms = manufactured_case(ManufacturedKind::MovingSquare, config.mms_eps);
        setup.problem = std::move(mms.problem);
        setup.map = std::move(mms.motion);
        if (generated) setup.mesh = std::make_shared<const Mesh>(unit_square_mesh(config.mms_n));
    }
    if (!generated) setup.mesh = std::make_shared<const Mesh>(read_mesh_file(config.mesh));
    return setup;
}

std::unique_ptr<MeshMotion> make_motion(const RunConfig& config, const CaseSetup& setup) {
    if (config.case_id == CaseId::MovingSquare) return std::make_unique<AnalyticMotion>(setup.mesh, setup.map);
    if (config.beam_motion == BeamMotionMode::Analytic) {
        return std::make_unique<AnalyticMotion>(setup.mesh, beam::analytic_fluid_map);
    }
    ElasticOptions elastic;
    elastic.stiffen = config.beam_stiffen;
    return std::make_unique<ElasticMotion>(setup.mesh, setup.map, BoundaryTag::Solid, elastic);
}

std::shared_ptr<const Trajectory> record_trajectory(const RunConfig& config, const CaseSetup& setup) {
    auto motion = make_motion(config, setup);
    return Trajectory::record(*motion, setup.mesh->nodes(), config.dt, step_count(config.dt, config.final_time));
}

StabilizationConfig make_stabilization(const RunConfig& config, const CaseSetup& setup, std::ostream* log) {
    StabilizationConfig stab;
    stab.delta0 = config.delta0;
    stab.c_inv = config.c_inv.value_or(default_c_inv(config.degree));
    stab.dt_cap_enabled = config.dt_cap;
    if (config.mu_override) {
        stab.mu = *config.mu_override;
    } else {
        const auto report = check_coercivity_assumption(setup.problem, *setup.mesh, setup.mesh->nodes(), 0.0);
        stab.mu = std::max(0.0, report.mu);
        if (report.violated && log) {
            *log << "warning: coercivity assumption fails (min of c - div(b)/2 is " << report.mu
                 << "); mu = 0, reaction cap and f-terms of the energy monitor inactive\n";
        }
    }
    return stab;
}

RunSettings make_run_settings(const RunConfig& config) {
    RunSettings rs;
    rs.scheme = config.scheme;
    rs.dt = config.dt;
    rs.final_time = config.final_time;
    rs.initial = config.initial;
    rs.step.solver.method = config.solver_method;
    rs.step.solver.tol = config.solver_tol;
    rs.step.solver.max_iter = config.solver_max_iter;
    rs.step.assembly.threads = config.threads;
    rs.step.cn_mass = config.cn_mass;
    rs.step.bdf2_velocity = config.bdf2_velocity;
    return rs;
}

namespace {

std::set<int> snapshot_steps(const RunConfig& config, int steps) {
    std::set<int> out;
    for (double t : config.snapshot_times) {
        const long n = std::lround(t / config.dt);
        if (n >= 0 && n <= steps && std::abs(n * config.dt - t) <= 1e-9 * std::max(1.0, t)) out.insert(static_cast<int>(n));
    }
    if (config.output_every > 0) {
        for (int n = 0; n <= steps; n += config.output_every) out.insert(n);
    }
    return out;
}

std::string snapshot_name(int step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "field_%06d.vtk", step);
    return buf;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

RunSummary execute_run(const RunConfig& config, const RunHooks& hooks) {
    config.validate();
    const auto wall_start = std::chrono::steady_clock::now();
    const CaseSetup setup = build_case(config);
    const FunctionSpace space(setup.mesh, config.degree);
    const StabilizationConfig stab = make_stabilization(config, setup, hooks.log);
    RunSettings settings = make_run_settings(config);
    settings.warnings = hooks.log;
    const int steps = step_count(config.dt, config.final_time);

    std::unique_ptr<MeshMotion> motion;
    if (hooks.trajectory) {
        if (hooks.trajectory->steps() < steps || std::abs(hooks.trajectory->dt() - config.dt) > 1e-15) {
            throw ConfigError("recorded trajectory does not cover this run");
        }
        motion = std::make_unique<ReplayMotion>(hooks.trajectory);
    } else {
        motion = make_motion(config, setup);
    }

    const fs::path dir = config.output_dir;
    std::unique_ptr<StepCsvWriter> csv;
    const auto snapshots = snapshot_steps(config, steps);
    if (hooks.write_outputs) {
        ensure_directory(dir);
        OutputFile cfg(dir / "config.cfg");
        write_config(cfg.stream(), config);
        cfg.close();
        csv = std::make_unique<StepCsvWriter>(dir / "steps.csv");
    }

    RunSummary summary;
    summary.dofs = space.num_dofs();
    summary.cells = static_cast<int>(setup.mesh->num_cells());
    summary.mu = stab.mu;
    summary.min_energy_slack = std::numeric_limits<double>::infinity();

    RunObserver observer;
    observer.on_start = [&](std::span<const double> u0, std::span<const Vec2> coords) {
        if (hooks.write_outputs && snapshots.count(0)) write_vtk(dir / snapshot_name(0), space, u0, coords, {}, 0.0);
    };
    observer.on_step = [&](const StepEvent& event) {
        const StepRecord rec = record_step(event, config.scheme, space, setup.problem, stab, settings.step.assembly);
        summary.max_undershoot = std::max(summary.max_undershoot, rec.undershoot);
        summary.max_overshoot = std::max(summary.max_overshoot, rec.overshoot);
        if (!std::isnan(rec.energy_slack)) summary.min_energy_slack = std::min(summary.min_energy_slack, rec.energy_slack);
        summary.records.push_back(rec);
        if (csv) csv->write(rec);
        if (hooks.write_outputs && snapshots.count(event.step)) {
            write_vtk(dir / snapshot_name(event.step), space, event.u_after, event.frame->coords_curr(),
                      event.frame->velocity(), event.t);
        }
    };

    const RunResult result = run(space, setup.problem, *motion, stab, settings, observer);
    summary.steps = result.steps;
    summary.dt_warnings = result.dt_warnings;
    summary.final_coefficients = result.state.u_curr;
    const auto ext = extrema_report(result.state.u_curr, setup.problem.lower_bound, setup.problem.upper_bound);
    summary.final_u_min = ext.u_min;
    summary.final_u_max = ext.u_max;
    summary.final_undershoot = ext.undershoot;
    summary.final_overshoot = ext.overshoot;
    summary.l2_error = setup.problem.exact
                           ? l2_error(space, result.state.u_curr, result.coords, setup.problem.exact, config.final_time)
                           : std::numeric_limits<double>::quiet_NaN();
    summary.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    if (hooks.write_outputs) {
        csv->close();
        const auto samples = line_sample(space, result.state.u_curr, result.coords, config.line_y, config.line_points);
        write_line_csv(dir / "line.csv", samples);

        nlohmann::json j;
        nlohmann::json cfg = nlohmann::json::object();
        for (const auto& [key, value] : resolved_settings(config)) cfg[key] = value;
        j["config"] = cfg;
        j["mesh"] = {{"nodes", setup.mesh->num_nodes()}, {"cells", summary.cells}, {"dofs", summary.dofs}};
        j["steps"] = summary.steps;
        j["mu"] = summary.mu;
        j["final"] = {{"t", config.final_time},
                      {"u_min", summary.final_u_min},
                      {"u_max", summary.final_u_max},
                      {"undershoot", summary.final_undershoot},
                      {"overshoot", summary.final_overshoot}};
        j["max_undershoot"] = summary.max_undershoot;
        j["max_overshoot"] = summary.max_overshoot;
        j["l2_error"] = number_or_null(summary.l2_error);
        j["min_energy_slack"] = number_or_null(summary.min_energy_slack);
        j["dt_warnings"] = summary.dt_warnings;
        nlohmann::json history = nlohmann::json::array();
        for (const auto& r : summary.records) history.push_back(number_or_null(r.dt_max));
        j["dt_max_history"] = history;
        j["wall_time_s"] = summary.wall_seconds;
        OutputFile out(dir / "summary.json");
        out.stream() << j.dump(2) << "\n";
        out.close();
    }
    return summary;
}

namespace {

fs::path sweep_subdir(const fs::path& root, double delta0, Scheme scheme) {
    return root / ("delta" + format_double(delta0) + "_" + std::string(to_string(scheme)));
}

SweepRow row_from_summary(double delta0, Scheme scheme, const fs::path& dir) {
    std::ifstream in(dir / "summary.json");
    if (!in) throw IoError("missing run summary in '" + dir.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
        return {delta0, scheme, j.at("max_undershoot").get<double>(), j.at("max_overshoot").get<double>(),
                j.at("final").at("undershoot").get<double>(), j.at("final").at("overshoot").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed run summary in '" + dir.string() + "': " + e.what());
    }
}

pid_t spawn_run(const fs::path& executable, const fs::path& config_file, const fs::path& log_file) {
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    const std::string log = log_file.string();
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
    std::string exe = executable.string();
    std::string cmd = "run";
    std::string flag = "--config";
    std::string cfg = config_file.string();
    char* argv[] = {exe.data(), cmd.data(), flag.data(), cfg.data(), nullptr};
    pid_t pid = 0;
    const int rc = posix_spawn(&pid, exe.c_str(), &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw IoError("cannot start '" + exe + "' for a sweep run");
    return pid;
}

}  // namespace

std::vector<SweepRow> sweep_delta(const RunConfig& config, const std::vector<double>& deltas,
                                  const std::vector<Scheme>& schemes, int parallel_runs, const fs::path& executable,
                                  std::ostream* log) {
    if (deltas.empty() || schemes.empty()) throw ConfigError("sweep needs at least one delta0 and one scheme");
    config.validate();
    const fs::path root = config.output_dir;
    ensure_directory(root);

    std::vector<std::pair<double, Scheme>> jobs;
    for (double d : deltas) {
        if (!(d >= 0.0)) throw ConfigError("sweep: delta0 values must be >= 0");
        for (Scheme s : schemes) jobs.emplace_back(d, s);
    }
    auto job_config = [&](double d, Scheme s) {
        RunConfig c = config;
        c.delta0 = d;
        c.scheme = s;
        c.output_dir = sweep_subdir(root, d, s).string();
        return c;
    };

    std::vector<SweepRow> rows;
    if (parallel_runs <= 1) {
        std::shared_ptr<const Trajectory> trajectory;
        if (config.case_id == CaseId::Beam && config.beam_motion == BeamMotionMode::Elastic) {
            if (log) *log << "recording mesh trajectory\n";
            trajectory = record_trajectory(config, build_case(config));
        }
        for (const auto& [d, s] : jobs) {
            if (log) *log << "run delta0 = " << format_double(d) << ", scheme = " << to_string(s) << "\n";
            RunHooks hooks;
            hooks.trajectory = trajectory;
            hooks.log = log;
            const auto summary = execute_run(job_config(d, s), hooks);
            rows.push_back({d, s, summary.max_undershoot, summary.max_overshoot, summary.final_undershoot,
                            summary.final_overshoot});
        }
    } else {
        std::map<pid_t, std::size_t> running;
        std::size_t next = 0;
        int failures = 0;
        auto reap_one = [&] {
            int status = 0;
            const pid_t pid = ::wait(&status);
            if (pid < 0) throw IoError("lost track of sweep child processes");
            const auto job = running.at(pid);
            running.erase(pid);
            if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
                ++failures;
                if (log) {
                    *log << "sweep run delta0 = " << format_double(jobs[job].first) << ", "
                         << to_string(jobs[job].second) << " failed (see its log.txt)\n";
                }
            }
        };
        while (next < jobs.size() || !running.empty()) {
            while (next < jobs.size() && static_cast<int>(running.size()) < parallel_runs) {
                const RunConfig c = job_config(jobs[next].first, jobs[next].second);
                const fs::path dir = c.output_dir;
                ensure_directory(dir);
                OutputFile cfg(dir / "config.cfg");
                write_config(cfg.stream(), c);
                cfg.close();
                running[spawn_run(executable, dir / "config.cfg", dir / "log.txt")] = next;
                ++next;
            }
            if (!running.empty()) reap_one();
        }
        if (failures > 0) throw NumericalError(std::to_string(failures) + " sweep run(s) failed");
        for (const auto& [d, s] : jobs) rows.push_back(row_from_summary(d, s, sweep_subdir(root, d, s)));
    }

    OutputFile table(root / "sweep.csv");
    table.stream() << "delta0,scheme,max_undershoot,max_overshoot,final_undershoot,final_overshoot\n";
    for (const auto& r : rows) {
        table.stream() << format_double(r.delta0) << ',' << to_string(r.scheme) << ',' << format_double(r.max_undershoot)
                       << ',' << format_double(r.max_overshoot) << ',' << format_double(r.final_undershoot) << ','
                       << format_double(r.final_overshoot) << "\n";
    }
    table.close();
    return rows;
}

StudyKind parse_study_kind(std::string_view text) {
    if (text == "time") return StudyKind::Time;
    if (text == "space") return StudyKind::Space;
    throw ConfigError("unknown study kind '" + std::string(text) + "' (expected time or space)");
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& config, StudyKind kind, int levels, bool write_outputs,
                                              std::ostream* log) {
    if (config.case_id != CaseId::MovingSquare) throw ConfigError("convergence studies need case = moving_square");
    if (config.mesh != "generated") throw ConfigError("convergence studies need mesh = generated");
    if (levels < 3) throw ConfigError("convergence studies need at least 3 levels");
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<ConvergenceRow> rows;
    std::vector<double> previous;
    for (int level = 0; level < levels; ++level) {
        RunConfig c = config;
        if (kind == StudyKind::Time) {
            c.dt = config.dt / std::ldexp(1.0, level);
        } else {
            c.mms_n = config.mms_n << level;
        }
        RunHooks hooks;
        hooks.write_outputs = false;
        hooks.log = log;
        const auto summary = execute_run(c, hooks);

        ConvergenceRow row{level, c.dt, c.mms_n, summary.l2_error, nan, nan, nan};
        if (!rows.empty()) row.order = std::log2(rows.back().error / row.error);
        if (kind == StudyKind::Time && !previous.empty()) {
            // Same mesh and same final geometry on every level.
            const CaseSetup setup = build_case(c);
            const FunctionSpace space(setup.mesh, c.degree);
            std::vector<Vec2> coords(setup.mesh->num_nodes());
            for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = setup.map(setup.mesh->nodes()[i], c.final_time);
            std::vector<double> diff(previous.size());
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = summary.final_coefficients[i] - previous[i];
            row.difference = l2_error(space, diff, coords, [](double, const Vec2&) { return 0.0; }, c.final_time);
            if (rows.size() >= 2) row.difference_order = std::log2(rows.back().difference / row.difference);
        }
        previous = summary.final_coefficients;
        if (log) {
            *log << "level " << level << ": dt = " << format_double(c.dt) << ", n = " << c.mms_n
                 << ", L2 error = " << format_double(row.error) << "\n";
        }
        rows.push_back(row);
    }

    if (write_outputs) {
        ensure_directory(config.output_dir);
        OutputFile out(fs::path(config.output_dir) / "convergence.csv");
        out.stream() << "level,dt,n,l2_error,order,difference,difference_order\n";
        for (const auto& r : rows) {
            out.stream() << r.level << ',' << format_double(r.dt) << ',' << r.n << ',' << format_double(r.error) << ','
                         << format_double(r.order) << ',' << format_double(r.difference) << ','
                         << format_double(r.difference_order) << "\n";
        }
        out.close();
    }
    return rows;
}

void describe_mesh(const RunConfig& config, std::ostream& out) {
    const CaseSetup setup = build_case(config);
    const Mesh& mesh = *setup.mesh;
    double h_min = std::numeric_limits<double>::infinity();
    double h_max = 0.0;
    double area_min = std::numeric_limits<double>::infinity();
    double area_total = 0.0;
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
        const double h = mesh.cell_diameters()[k];
        const double a = cell_area(mesh, mesh.nodes(), static_cast<int>(k));
        h_min = std::min(h_min, h);
        h_max = std::max(h_max, h);
        area_min = std::min(area_min, a);
        area_total += a;
    }
    std::map<BoundaryTag, int> tags;
    for (const auto& e : mesh.boundary_edges()) ++tags[e.tag];
    const auto audit = audit_mesh(mesh);
    out << "case: " << to_string(config.case_id) << "\n";
    out << "nodes: " << mesh.num_nodes() << "\n";
    out << "cells: " << mesh.num_cells() << "\n";
    out << "dofs P1: " << FunctionSpace(setup.mesh, 1).num_dofs() << "\n";
    out << "dofs P2: " << FunctionSpace(setup.mesh, 2).num_dofs() << "\n";
    out << "diameter min/max: " << format_double(h_min) << " / " << format_double(h_max) << "\n";
    out << "area min/total: " << format_double(area_min) << " / " << format_double(area_total) << "\n";
    for (const auto& [tag, count] : tags) out << "boundary edges " << to_string(tag) << ": " << count << "\n";
    out << "audit: " << (audit.ok ? "ok" : "FAILED") << "\n";
    for (const auto& p : audit.problems) out << "  " << p << "\n";
}

}  // namespace alesupg
