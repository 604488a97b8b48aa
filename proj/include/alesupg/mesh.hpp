#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alesupg/common.hpp"

namespace alesupg {

enum class BoundaryTag { Dirichlet, Neumann, Solid };

std::string_view to_string(BoundaryTag tag);
BoundaryTag parse_boundary_tag(std::string_view text);

struct BoundaryEdge {
    std::array<int, 2> nodes{};
    BoundaryTag tag{BoundaryTag::Dirichlet};
};

using Cell = std::array<int, 3>;

/// Signed area of the triangle (a, b, c); positive for counterclockwise order.
inline double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * cross(b - a, c - a);
}

/// Physical gradients of the barycentric coordinates of triangle (a, b, c).
inline std::array<Vec2, 3> barycentric_gradients(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double two_area = cross(b - a, c - a);
    auto inward = [two_area](const Vec2& from, const Vec2& to) {
        const Vec2 e = to - from;
        return Vec2{-e.y / two_area, e.x / two_area};
    };
    return {inward(b, c), inward(c, a), inward(a, b)};
}

/// Affine map from the reference triangle (0,0),(1,0),(0,1) onto a cell.
struct AffineMap {
    Vec2 origin;
    // Columns of the Jacobian: x = origin + col0 * xi + col1 * eta.
    Vec2 col0;
    Vec2 col1;
    double det{0.0};
    // Rows of J^{-T}; physical gradient = inv_t * reference gradient.
    Vec2 inv_t_row0;
    Vec2 inv_t_row1;

    Vec2 map(const Vec2& xi) const { return origin + col0 * xi.x + col1 * xi.y; }
    Vec2 physical_gradient(const Vec2& ref_grad) const {
        return {dot(inv_t_row0, ref_grad), dot(inv_t_row1, ref_grad)};
    }
};

/// Unstructured triangulation. Topology is fixed for the lifetime of a run;
/// the stored node coordinates are the reference configuration, while every
/// geometric query also accepts an explicit coordinate set (moved mesh).
class Mesh {
public:
    Mesh(std::vector<Vec2> nodes, std::vector<Cell> cells, std::vector<BoundaryEdge> boundary_edges);

    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
    /// Longest edge per cell on the reference coordinates.
    const std::vector<double>& cell_diameters() const { return cell_diameters_; }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_cells() const { return cells_.size(); }

    /// Per-node flag: node lies on at least one boundary edge.
    const std::vector<bool>& boundary_node_mask() const { return boundary_node_mask_; }

private:
    std::vector<Vec2> nodes_;
    std::vector<Cell> cells_;
    std::vector<BoundaryEdge> boundary_edges_;
    std::vector<double> cell_diameters_;
    std::vector<bool> boundary_node_mask_;
};

/// Cells with signed area below this fraction of the reference cell area
/// count as inverted.
inline constexpr double kInversionThreshold = 1e-14;

double cell_area(const Mesh& mesh, std::span<const Vec2> coords, int cell);
double cell_diameter(const Mesh& mesh, std::span<const Vec2> coords, int cell);

/// Affine reference map of a cell on the given coordinates; throws MeshError
/// for a degenerate cell.
AffineMap reference_map(const Mesh& mesh, std::span<const Vec2> coords, int cell);
AffineMap reference_map(const Vec2& a, const Vec2& b, const Vec2& c);

struct MeshAudit {
    bool ok{true};
    std::vector<std::string> problems;
};

/// Checks orientation (on the given coordinates, relative to the reference
/// cell areas), index ranges, edge manifoldness and the boundary-edge set.
MeshAudit audit_mesh(const Mesh& mesh, std::span<const Vec2> coords);
inline MeshAudit audit_mesh(const Mesh& mesh) { return audit_mesh(mesh, mesh.nodes()); }

/// Index of the first inverted cell on `coords`, or -1.
int find_inverted_cell(const Mesh& mesh, std::span<const Vec2> coords);

// ASCII mesh file: "ale-mesh 1", "nodes N", N lines "x y", "cells M",
// M lines "i j k", "bedges B", B lines "i j tag". Indices are 0-based.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh_file(const std::string& path, const Mesh& mesh);

}  // namespace alesupg
