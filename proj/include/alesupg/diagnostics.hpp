#pragma once

#include <span>
#include <vector>

#include "alesupg/assembly.hpp"
#include "alesupg/timestepping.hpp"

namespace alesupg {

struct ExtremaReport {
    double u_min{0.0};
    double u_max{0.0};
    double undershoot{0.0};  // max(0, lower - u_min)
    double overshoot{0.0};   // max(0, u_max - upper)
};

/// Extrema over dof values against the bounds [lower, upper].
ExtremaReport extrema_report(std::span<const double> coeffs, double lower, double upper);

struct LineSample {
    double x{0.0};
    double y{0.0};
    double u{0.0};  // NaN outside the mesh
    bool in_domain{false};
};

/// Samples the field at n_points equispaced points of the segment
/// y = y0, x in [x_min, x_max] on the mesh with nodes `coords`. Points in no
/// cell are gaps. Empty when the line misses the mesh's bounding box.
std::vector<LineSample> line_sample(const FunctionSpace& space, std::span<const double> coeffs,
                                    std::span<const Vec2> coords, double y0, double x_min, double x_max, int n_points);

/// Same, over the x-extent of the mesh.
std::vector<LineSample> line_sample(const FunctionSpace& space, std::span<const double> coeffs,
                                    std::span<const Vec2> coords, double y0, int n_points);

/// L2 norm of u_h - exact(t, .) on the mesh with nodes `coords`.
double l2_error(const FunctionSpace& space, std::span<const double> coeffs, std::span<const Vec2> coords,
                const ScalarField& exact, double t);

struct EnergyCheck {
    double lhs{0.0};
    double rhs{0.0};
    /// rhs - lhs; NaN when not evaluated.
    double slack{0.0};
    /// False when mu = 0 while the source is nonzero.
    bool evaluated{true};
};

/// Slack of the per-step stability inequality of `scheme` (before the
/// Gronwall argument) for the step u_before -> u_after across `frame`.
///   Euler: |u1|^2 + dt/2 |||u1|||^2
///            <= dt a1 |u1|^2 + (1 + dt a2) |u0|^2_prev + 2 dt/mu |f|^2 + 2 dt sum d_K |f|_K^2
///   CN:    |u1|^2 + dt/4 |||u1 + u0|||^2_mid
///            <= dt b1 |u1|^2 + (1 + dt b2) |u0|^2_prev + dt/mu |f|^2_mid + 2 dt sum d_K |f|_K^2
///   BDF-2: (|u1|^2 + |2u1 - u0|^2 + |u1 - 2u0 + um|^2)/4 + dt/4 |||u1|||^2
///            <= (|u0|^2 + |2u0 - um|^2)_new / 4 + dt/2 a1 |u1|^2 + 2 dt/mu |f|^2 + 2 dt sum d_K |f|_K^2
/// Norms without subscript live on the new geometry; f is taken at the
/// scheme's data time. BDF-2 without history is checked as CN.
EnergyCheck energy_inequality_residual(Scheme scheme, std::span<const double> u_before_prev,
                                       std::span<const double> u_before, std::span<const double> u_after,
                                       const FunctionSpace& space, const AleFrame& frame, double t_next,
                                       const ProblemSpec& problem, const StabilizationConfig& stab,
                                       const AssemblyOptions& options = {});

struct StepRecord {
    int step{0};
    double t{0.0};
    double u_min{0.0};
    double u_max{0.0};
    double undershoot{0.0};
    double overshoot{0.0};
    double l2{0.0};
    double supg{0.0};
    double alpha1{0.0};
    double alpha2{0.0};
    double dt_max{0.0};
    double energy_slack{0.0};
};

/// Diagnostics of one completed step.
StepRecord record_step(const StepEvent& event, Scheme scheme, const FunctionSpace& space, const ProblemSpec& problem,
                       const StabilizationConfig& stab, const AssemblyOptions& options = {});

}  // namespace alesupg
