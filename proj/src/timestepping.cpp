#include "alesupg/timestepping.hpp"

#include <cmath>
#include <ostream>

namespace alesupg {

Scheme parse_scheme(std::string_view text) {
    if (text == "euler") return Scheme::Euler;
    if (text == "cn") return Scheme::CrankNicolson;
    if (text == "bdf2") return Scheme::Bdf2;
    throw ConfigError("unknown time scheme '" + std::string(text) + "' (expected euler, cn or bdf2)");
}

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Euler: return "euler";
        case Scheme::CrankNicolson: return "cn";
        case Scheme::Bdf2: return "bdf2";
    }
    return "unknown";
}

CnMass parse_cn_mass(std::string_view text) {
    if (text == "curr") return CnMass::Curr;
    if (text == "mid") return CnMass::Mid;
    throw ConfigError("unknown time.cn_mass '" + std::string(text) + "' (expected curr or mid)");
}

std::string_view to_string(CnMass mass) { return mass == CnMass::Curr ? "curr" : "mid"; }

Bdf2Velocity parse_bdf2_velocity(std::string_view text) {
    if (text == "two_level") return Bdf2Velocity::TwoLevel;
    if (text == "three_level") return Bdf2Velocity::ThreeLevel;
    throw ConfigError("unknown time.bdf2_velocity '" + std::string(text) + "' (expected two_level or three_level)");
}

std::string_view to_string(Bdf2Velocity velocity) {
    return velocity == Bdf2Velocity::TwoLevel ? "two_level" : "three_level";
}

InitialDatum parse_initial_datum(std::string_view text) {
    if (text == "projection") return InitialDatum::Projection;
    if (text == "interpolation") return InitialDatum::Interpolation;
    throw ConfigError("unknown fe.initial '" + std::string(text) + "' (expected projection or interpolation)");
}

std::string_view to_string(InitialDatum initial) {
    return initial == InitialDatum::Projection ? "projection" : "interpolation";
}

namespace {

void check_state(const TimeState& state, const FunctionSpace& space, const AleFrame& frame) {
    if (state.u_curr.size() != static_cast<std::size_t>(space.num_dofs())) {
        throw NumericalError("time step: coefficient vector does not match the space");
    }
    if (std::abs(frame.dt() - state.dt) > 1e-12 * state.dt) throw NumericalError("time step: frame dt differs from state dt");
}

StepResult finish(SparseMatrix& system, std::vector<double>& rhs, const TimeState& state, const FunctionSpace& space,
                  const AleFrame& frame, const ProblemSpec& problem, const StepSettings& settings,
                  std::vector<double> deltas) {
    const double t_next = (state.step_index + 1) * state.dt;
    const auto dofs = constrained_dofs(space, problem);
    const auto values = dirichlet_values(space, problem, dofs, frame.coords_curr(), t_next);
    apply_dirichlet(system, rhs, dofs, values);
    auto solved = solve(system, rhs, settings.solver, state.u_curr);
    StepResult out{std::move(solved.x), std::move(solved.report), std::move(deltas)};
    // Inject exactly; the iterative solution carries round-off in these rows.
    for (std::size_t i = 0; i < dofs.size(); ++i) out.u_next[dofs[i].first] = values[i];
    return out;
}

}  // namespace

StepResult step_euler(const TimeState& state, const FunctionSpace& space, const AleFrame& frame,
                      const ProblemSpec& problem, const StabilizationConfig& stab, const StepSettings& settings) {
    check_state(state, space, frame);
    const double dt = state.dt;
    const double t_next = (state.step_index + 1) * dt;
    AssemblyRequest req;
    req.mass = req.supg = req.mesh_convection = req.rhs = true;
    auto ops = assemble_operators(space, frame, GeometryLevel::Curr, problem, stab, t_next, req, settings.assembly);

    std::vector<double> rhs = spmv(ops.mass, state.u_curr);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = rhs[i] / dt + ops.rhs[i];
    SparseMatrix& system = ops.supg;
    system.axpy(1.0, ops.mesh_convection).axpy(1.0 / dt, ops.mass);
    return finish(system, rhs, state, space, frame, problem, settings, std::move(ops.deltas));
}

StepResult step_cn(const TimeState& state, const FunctionSpace& space, const AleFrame& frame,
                   const ProblemSpec& problem, const StabilizationConfig& stab, const StepSettings& settings) {
    check_state(state, space, frame);
    const double dt = state.dt;
    const double t_mid = (state.step_index + 0.5) * dt;
    AssemblyRequest req;
    req.supg = req.mesh_convection = req.rhs = true;
    req.mass = settings.cn_mass == CnMass::Mid;
    auto ops = assemble_operators(space, frame, GeometryLevel::Mid, problem, stab, t_mid, req, settings.assembly);
    if (settings.cn_mass == CnMass::Curr) ops.mass = assemble_mass(space, frame.coords_curr(), settings.assembly);

    SparseMatrix& spatial = ops.supg;
    spatial.axpy(1.0, ops.mesh_convection);
    const auto mu = spmv(ops.mass, state.u_curr);
    const auto au = spmv(spatial, state.u_curr);
    std::vector<double> rhs(mu.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = mu[i] / dt - 0.5 * au[i] + ops.rhs[i];
    spatial.scale(0.5).axpy(1.0 / dt, ops.mass);
    return finish(spatial, rhs, state, space, frame, problem, settings, std::move(ops.deltas));
}

StepResult step_bdf2(const TimeState& state, const FunctionSpace& space, const AleFrame& frame,
                     const ProblemSpec& problem, const StabilizationConfig& stab, const StepSettings& settings) {
    check_state(state, space, frame);
    if (state.u_prev.size() != state.u_curr.size()) throw NumericalError("BDF-2 step needs the solution at t^{n-1}");
    const double dt = state.dt;
    const double t_next = (state.step_index + 1) * dt;
    AssemblyRequest req;
    req.mass = req.supg = req.mesh_convection = req.rhs = true;
    auto ops = assemble_operators(space, frame, GeometryLevel::Curr, problem, stab, t_next, req, settings.assembly);

    std::vector<double> history(state.u_curr.size());
    for (std::size_t i = 0; i < history.size(); ++i) history[i] = 2.0 * state.u_curr[i] - 0.5 * state.u_prev[i];
    std::vector<double> rhs = spmv(ops.mass, history);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += dt * ops.rhs[i];
    SparseMatrix& system = ops.supg;
    system.axpy(1.0, ops.mesh_convection).scale(dt).axpy(1.5, ops.mass);
    return finish(system, rhs, state, space, frame, problem, settings, std::move(ops.deltas));
}

StepResult advance(TimeState& state, const FunctionSpace& space, const AleFrame& frame, const ProblemSpec& problem,
                   const StabilizationConfig& stab, const StepSettings& settings) {
    StepResult result;
    switch (state.scheme) {
        case Scheme::Euler: result = step_euler(state, space, frame, problem, stab, settings); break;
        case Scheme::CrankNicolson: result = step_cn(state, space, frame, problem, stab, settings); break;
        case Scheme::Bdf2:
            result = state.u_prev.empty() ? step_cn(state, space, frame, problem, stab, settings)
                                          : step_bdf2(state, space, frame, problem, stab, settings);
            break;
    }
    if (state.scheme == Scheme::Bdf2) state.u_prev = state.u_curr;
    state.u_curr = result.u_next;
    ++state.step_index;
    state.t_now = state.step_index * state.dt;
    return result;
}

int step_count(double dt, double final_time) {
    if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
    if (!(final_time >= dt)) throw ConfigError("time.T must be at least time.dt");
    const double ratio = final_time / dt;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(n)) > 1e-8 * ratio) {
        throw ConfigError("time.T must be an integer multiple of time.dt");
    }
    return static_cast<int>(n);
}

std::vector<double> initial_coefficients(const FunctionSpace& space, const ProblemSpec& problem,
                                         std::span<const Vec2> coords, InitialDatum initial,
                                         const SolverOptions& solver, const AssemblyOptions& options) {
    auto u0 = [&problem](const Vec2& x) { return problem.u0(0.0, x); };
    if (initial == InitialDatum::Interpolation) return space.interpolate(u0, coords);
    return l2_projection(space, coords, u0, solver, options);
}

RunResult run(const FunctionSpace& space, const ProblemSpec& problem, MeshMotion& motion,
              const StabilizationConfig& stab, const RunSettings& settings, const RunObserver& observer) {
    problem.validate();
    stab.validate();
    const int steps = step_count(settings.dt, settings.final_time);
    auto mesh = space.mesh_ptr();

    RunResult out;
    out.coords = mesh->nodes();
    out.state.scheme = settings.scheme;
    out.state.dt = settings.dt;
    out.state.u_curr = initial_coefficients(space, problem, out.coords, settings.initial, settings.step.solver,
                                            settings.step.assembly);
    if (observer.on_start) observer.on_start(out.state.u_curr, out.coords);

    std::vector<Vec2> before_prev_coords;
    for (int n = 0; n < steps; ++n) {
        const double t_now = n * settings.dt;
        const double t_next = (n + 1) * settings.dt;
        auto next = motion.advance(out.coords, t_now, t_next);
        std::vector<Vec2> kept = settings.scheme == Scheme::Bdf2 ? out.coords : std::vector<Vec2>{};
        AleFrame frame(mesh, std::move(out.coords), std::move(next), settings.dt);
        if (settings.scheme == Scheme::Bdf2 && settings.step.bdf2_velocity == Bdf2Velocity::ThreeLevel && n > 0) {
            frame.set_convective_velocity(
                backward_difference_velocity(before_prev_coords, frame.coords_prev(), frame.coords_curr(), settings.dt));
        }
        before_prev_coords = std::move(kept);
        const auto report = stability_report(frame);
        const double dt_max = settings.scheme == Scheme::Euler          ? report.dt_max_euler
                              : settings.scheme == Scheme::CrankNicolson ? report.dt_max_cn
                                                                         : report.dt_max_bdf2;
        if (settings.dt > dt_max) {
            ++out.dt_warnings;
            if (settings.warnings) {
                *settings.warnings << "warning: step " << n + 1 << ": dt = " << settings.dt
                                   << " exceeds the stability bound " << dt_max << "\n";
            }
        }
        std::vector<double> before = out.state.u_curr;
        std::vector<double> before_prev = out.state.u_prev;
        const auto result = advance(out.state, space, frame, problem, stab, settings.step);
        if (observer.on_step) {
            StepEvent ev;
            ev.step = n + 1;
            ev.t = t_next;
            ev.frame = &frame;
            ev.report = &report;
            ev.dt_max = dt_max;
            ev.u_before_prev = before_prev;
            ev.u_before = before;
            ev.u_after = out.state.u_curr;
            ev.result = &result;
            observer.on_step(ev);
        }
        out.coords = frame.coords_curr();
    }
    out.steps = steps;
    return out;
}

}  // namespace alesupg
