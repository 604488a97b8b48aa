#pragma once

#include <span>
#include <vector>

#include "alesupg/mesh.hpp"
#include "alesupg/solver.hpp"

namespace alesupg {

struct NodalDisplacement {
    int node{0};
    Vec2 value;
};

struct ElasticOptions {
    double young{1.0};
    double poisson{0.3};
    /// Scale each cell's modulus by 1/area so small cells near moving
    /// boundaries deform less.
    bool stiffen{true};
    SolverOptions solver{SolverMethod::Gmres, 1e-8, 5000, 50};
};

/// Solves plane-strain linear elastostatics with P1 elements on the mesh
/// with node positions `coords`. Prescribed nodes take the given
/// displacement, all other boundary nodes are held fixed. Returns the
/// displacement of every node. Throws MeshError when coords + displacement
/// has an inverted cell and NumericalError when the solve fails.
std::vector<Vec2> elastic_update(const Mesh& mesh, std::span<const Vec2> coords,
                                 std::span<const NodalDisplacement> prescribed, const ElasticOptions& options = {});

}  // namespace alesupg
