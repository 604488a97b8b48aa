#pragma once

#include <functional>
#include <vector>

#include "alesupg/mesh.hpp"

namespace alesupg {

/// Planar straight-line graph: boundary polygons as tagged segments.
struct Pslg {
    struct Segment {
        int a{0};
        int b{0};
        BoundaryTag tag{BoundaryTag::Dirichlet};
    };
    std::vector<Vec2> points;
    std::vector<Segment> segments;
    /// True for points of the meshed region (excludes holes).
    std::function<bool(const Vec2&)> inside;
};

struct RefinementOptions {
    /// Target edge length at a point.
    std::function<double(const Vec2&)> size;
    /// Bound on circumradius / shortest edge (1.3 keeps angles above ~22.6 deg).
    double max_radius_edge_ratio{1.3};
    std::size_t max_points{2'000'000};
};

/// Conforming Delaunay refinement of the region bounded by the PSLG:
/// segments are split at midpoints until no vertex lies inside a
/// subsegment's diametral circle, and circumcentres of poorly shaped or
/// oversized triangles are inserted. Input angles must be at least 60
/// degrees. Throws MeshError when refinement fails.
Mesh refine_pslg(const Pslg& pslg, const RefinementOptions& options);

/// n x n squares on [0,1]^2, each split along its rising diagonal; every
/// boundary edge gets `tag`.
Mesh unit_square_mesh(int n, BoundaryTag tag = BoundaryTag::Dirichlet);

}  // namespace alesupg
