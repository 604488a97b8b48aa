#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "alesupg/basis.hpp"
#include "alesupg/mesh.hpp"
#include "alesupg/sparse.hpp"

namespace alesupg {

/// Continuous Lagrange space of degree 1 or 2 on a Mesh. Vertex dofs carry the
/// node numbers; degree-2 edge dofs follow, numbered by global edge index.
class FunctionSpace {
public:
    FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree);

    const Mesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
    int degree() const { return degree_; }
    int num_local() const { return num_local_; }
    int num_dofs() const { return num_dofs_; }

    /// Global dofs of a cell in reference-element order.
    std::span<const int> cell_dofs(int cell) const {
        return {cell_dofs_.data() + static_cast<std::size_t>(cell) * num_local_, static_cast<std::size_t>(num_local_)};
    }

    /// Node pairs of the global edges (degree 2 dof i >= num_nodes sits on edge i - num_nodes).
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }

    /// Dof positions for a given node-coordinate set (midpoints for edge dofs).
    std::vector<Vec2> dof_coordinates(std::span<const Vec2> coords) const;
    std::vector<Vec2> dof_coordinates() const { return dof_coordinates(mesh_->nodes()); }

    /// Dofs on edges tagged Dirichlet or Solid, sorted.
    const std::vector<int>& dirichlet_dofs() const { return dirichlet_dofs_; }

    /// Bitmask per dof of the boundary tags of all boundary edges touching it
    /// (bit = 1 << int(tag)); zero for interior dofs.
    const std::vector<unsigned char>& boundary_tag_mask() const { return tag_mask_; }

    const std::shared_ptr<const SparsityPattern>& pattern() const { return pattern_; }
    /// For cell c, position in the CSR value array of local entry (i, j).
    std::span<const int> cell_csr_positions(int cell) const {
        const std::size_t block = static_cast<std::size_t>(num_local_) * num_local_;
        return {csr_positions_.data() + cell * block, block};
    }

    /// Nodal interpolation of a function given on the current coordinates.
    template <class F>
    std::vector<double> interpolate(F&& fn, std::span<const Vec2> coords) const {
        const auto pts = dof_coordinates(coords);
        std::vector<double> u(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) u[i] = fn(pts[i]);
        return u;
    }

private:
    std::shared_ptr<const Mesh> mesh_;
    int degree_;
    int num_local_;
    int num_dofs_{0};
    std::vector<int> cell_dofs_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<int> dirichlet_dofs_;
    std::vector<unsigned char> tag_mask_;
    std::shared_ptr<const SparsityPattern> pattern_;
    std::vector<int> csr_positions_;
};

inline unsigned char tag_bit(BoundaryTag tag) { return static_cast<unsigned char>(1u << static_cast<int>(tag)); }

/// Evaluates a finite element function at reference point xi of a cell.
double evaluate_in_cell(const FunctionSpace& space, std::span<const double> coeffs, int cell, const Vec2& xi);

}  // namespace alesupg
