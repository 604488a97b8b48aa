#pragma once

#include <functional>
#include <map>
#include <string>

#include "alesupg/mesh.hpp"

namespace alesupg {

using ScalarField = std::function<double(double t, const Vec2& x)>;
using VectorField = std::function<Vec2(double t, const Vec2& x)>;

struct BoundaryCondition {
    enum class Kind { Dirichlet, Neumann };
    Kind kind{Kind::Neumann};
    /// Dirichlet value; unused for homogeneous Neumann.
    ScalarField value;

    static BoundaryCondition dirichlet(ScalarField g) { return {Kind::Dirichlet, std::move(g)}; }
    static BoundaryCondition neumann() { return {Kind::Neumann, {}}; }
};

/// Transient convection-diffusion-reaction problem
///   u_t - eps Lap u + b . grad u + c u = f
/// on the moving domain, with boundary conditions per boundary tag.
struct ProblemSpec {
    std::string name;
    double eps{1.0};
    VectorField b;
    /// Exact divergence of b, used by the coercivity check.
    ScalarField div_b;
    ScalarField c;
    ScalarField f;
    ScalarField u0;
    std::map<BoundaryTag, BoundaryCondition> bc;
    /// Exact solution when known (manufactured cases); empty otherwise.
    ScalarField exact;
    /// Bounds of the maximum principle used for under/overshoots.
    double lower_bound{0.0};
    double upper_bound{1.0};

    /// Throws ConfigError on eps <= 0, a missing field or a Dirichlet tag
    /// without a value.
    void validate() const;

    /// Condition on a tag; tags missing from the map are homogeneous Neumann.
    const BoundaryCondition& condition(BoundaryTag tag) const;
};

}  // namespace alesupg
