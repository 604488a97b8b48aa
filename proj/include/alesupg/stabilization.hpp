#pragma once

#include <span>

#include "alesupg/mesh.hpp"
#include "alesupg/problem.hpp"

namespace alesupg {

struct StabilizationConfig {
    double delta0{0.0};
    /// Coercivity constant mu; also used as mu_0 in the reaction cap.
    double mu{0.0};
    double c_inv{20.0};
    /// Enforce delta_K <= dt / 4.
    bool dt_cap_enabled{true};

    void validate() const;
};

/// Inverse-inequality constant used when none is configured.
double default_c_inv(int degree);

struct CoercivityReport {
    /// min over quadrature points of c - div(b) / 2.
    double mu{0.0};
    bool violated{false};
};

/// Samples c - div(b)/2 at the degree-5 quadrature points of every cell.
CoercivityReport check_coercivity_assumption(const ProblemSpec& problem, const Mesh& mesh,
                                             std::span<const Vec2> coords, double t);

/// Per-cell SUPG parameter
///   min(delta0 h / (2 |b - w|), mu / (2 |c|^2), h^2 / (2 eps c_inv^2), dt / 4).
/// The convective term is 0 when |b - w| < 1e-12; the reaction cap is
/// dropped when |c| < 1e-12 and the step cap when it is disabled.
double delta_K(double h, double conv_norm, double c_norm, double eps, double dt, const StabilizationConfig& config);

}  // namespace alesupg
