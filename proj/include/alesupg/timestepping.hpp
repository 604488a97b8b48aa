#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "alesupg/ale.hpp"
#include "alesupg/assembly.hpp"
#include "alesupg/motion.hpp"
#include "alesupg/solver.hpp"

namespace alesupg {

enum class Scheme { Euler, CrankNicolson, Bdf2 };

Scheme parse_scheme(std::string_view text);
std::string_view to_string(Scheme scheme);

/// Geometry of the mass-difference term in the Crank-Nicolson step.
/// Curr uses the mass matrix of the new geometry; Mid uses the midpoint
/// geometry like every other term of the step.
enum class CnMass { Curr, Mid };

CnMass parse_cn_mass(std::string_view text);
std::string_view to_string(CnMass mass);

/// Mesh velocity of the BDF-2 step. TwoLevel is (x^{n+1} - x^n)/dt, only
/// first-order accurate at t^{n+1}; ThreeLevel is the second-order
/// backward difference over x^{n-1}, x^n, x^{n+1}.
enum class Bdf2Velocity { TwoLevel, ThreeLevel };

Bdf2Velocity parse_bdf2_velocity(std::string_view text);
std::string_view to_string(Bdf2Velocity velocity);

enum class InitialDatum { Projection, Interpolation };

InitialDatum parse_initial_datum(std::string_view text);
std::string_view to_string(InitialDatum initial);

struct TimeState {
    Scheme scheme{Scheme::Euler};
    double dt{0.0};
    double t_now{0.0};
    int step_index{0};
    /// Coefficients at t^{n-1}; filled for BDF-2 once a step was taken.
    std::vector<double> u_prev;
    std::vector<double> u_curr;
};

struct StepSettings {
    SolverOptions solver;
    AssemblyOptions assembly;
    CnMass cn_mass{CnMass::Mid};
    Bdf2Velocity bdf2_velocity{Bdf2Velocity::ThreeLevel};
};

struct StepResult {
    std::vector<double> u_next;
    SolveReport solve;
    /// delta_K on the geometry of the spatial operators.
    std::vector<double> deltas;
};

/// (M/dt + A + W) u^{n+1} = M u^n / dt + F, everything on the new geometry
/// with data at t^{n+1}.
StepResult step_euler(const TimeState& state, const FunctionSpace& space, const AleFrame& frame,
                      const ProblemSpec& problem, const StabilizationConfig& stab, const StepSettings& settings);

/// M (u^{n+1} - u^n)/dt + (A + W)(u^{n+1} + u^n)/2 = F with A, W, F on the
/// midpoint geometry at t^{n+1/2} and M chosen by settings.cn_mass.
StepResult step_cn(const TimeState& state, const FunctionSpace& space, const AleFrame& frame,
                   const ProblemSpec& problem, const StabilizationConfig& stab, const StepSettings& settings);

/// (3/2 M + dt (A + W)) u^{n+1} = M (2 u^n - u^{n-1}/2) + dt F on the new
/// geometry. Throws NumericalError when u_prev is missing.
StepResult step_bdf2(const TimeState& state, const FunctionSpace& space, const AleFrame& frame,
                     const ProblemSpec& problem, const StabilizationConfig& stab, const StepSettings& settings);

/// One step of the state's scheme; BDF-2 takes a Crank-Nicolson step when no
/// history exists yet. Updates the state in place.
StepResult advance(TimeState& state, const FunctionSpace& space, const AleFrame& frame, const ProblemSpec& problem,
                   const StabilizationConfig& stab, const StepSettings& settings);

/// Step count for [0, T]; throws ConfigError unless T is a positive
/// multiple of dt.
int step_count(double dt, double final_time);

struct RunSettings {
    Scheme scheme{Scheme::Euler};
    double dt{0.01};
    double final_time{1.0};
    InitialDatum initial{InitialDatum::Projection};
    StepSettings step;
    /// Stream for step-size warnings; null silences them.
    std::ostream* warnings{nullptr};
};

struct StepEvent {
    int step{0};
    double t{0.0};
    const AleFrame* frame{nullptr};
    const AleStabilityReport* report{nullptr};
    /// dt bound of the active scheme for this step.
    double dt_max{0.0};
    std::span<const double> u_before_prev;  // u^{n-1}; empty when unavailable
    std::span<const double> u_before;       // u^n
    std::span<const double> u_after;        // u^{n+1}
    const StepResult* result{nullptr};
};

struct RunObserver {
    std::function<void(std::span<const double> u0, std::span<const Vec2> coords0)> on_start;
    std::function<void(const StepEvent&)> on_step;
};

struct RunResult {
    TimeState state;
    std::vector<Vec2> coords;
    int steps{0};
    /// Steps where dt exceeded the active scheme's bound.
    int dt_warnings{0};
};

/// Initial coefficients on the given coordinates.
std::vector<double> initial_coefficients(const FunctionSpace& space, const ProblemSpec& problem,
                                         std::span<const Vec2> coords, InitialDatum initial,
                                         const SolverOptions& solver, const AssemblyOptions& options = {});

/// Full time loop from t = 0: move the mesh, build the frame, report the
/// step bounds, step, notify the observer.
RunResult run(const FunctionSpace& space, const ProblemSpec& problem, MeshMotion& motion,
              const StabilizationConfig& stab, const RunSettings& settings, const RunObserver& observer = {});

}  // namespace alesupg
