#include "alesupg/function_space.hpp"

#include <algorithm>
#include <map>

namespace alesupg {

namespace {

// Local edge e of a cell joins local vertices (e, e+1 mod 3), matching the
// reference ordering of the degree-2 edge dofs.
constexpr std::array<std::array<int, 2>, 3> kLocalEdges = {{{0, 1}, {1, 2}, {2, 0}}};

}  // namespace

FunctionSpace::FunctionSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree), num_local_(local_dof_count(degree)) {
    const Mesh& m = *mesh_;
    const int nn = static_cast<int>(m.num_nodes());
    const int nc = static_cast<int>(m.num_cells());
    for (int k = 0; k < nc; ++k) {
        if (cell_area(m, m.nodes(), k) <= 0.0) {
            throw MeshError("degenerate cell " + std::to_string(k) + " in function space construction");
        }
    }

    std::map<std::pair<int, int>, int> edge_index;
    for (const auto& c : m.cells()) {
        for (const auto& le : kLocalEdges) {
            const int a = std::min(c[le[0]], c[le[1]]);
            const int b = std::max(c[le[0]], c[le[1]]);
            if (edge_index.emplace(std::pair{a, b}, static_cast<int>(edges_.size())).second) {
                edges_.push_back({a, b});
            }
        }
    }
    // Renumber edges in sorted (a, b) order so dof numbering only depends on
    // the mesh, not on cell traversal.
    {
        std::vector<std::array<int, 2>> sorted;
        sorted.reserve(edge_index.size());
        int next = 0;
        for (auto& [key, idx] : edge_index) {
            idx = next++;
            sorted.push_back({key.first, key.second});
        }
        edges_ = std::move(sorted);
    }

    num_dofs_ = degree_ == 1 ? nn : nn + static_cast<int>(edges_.size());
    cell_dofs_.resize(static_cast<std::size_t>(nc) * num_local_);
    for (int k = 0; k < nc; ++k) {
        const auto& c = m.cells()[k];
        int* dofs = cell_dofs_.data() + static_cast<std::size_t>(k) * num_local_;
        for (int v = 0; v < 3; ++v) dofs[v] = c[v];
        if (degree_ == 2) {
            for (int e = 0; e < 3; ++e) {
                const int a = std::min(c[kLocalEdges[e][0]], c[kLocalEdges[e][1]]);
                const int b = std::max(c[kLocalEdges[e][0]], c[kLocalEdges[e][1]]);
                dofs[3 + e] = nn + edge_index.at({a, b});
            }
        }
    }

    tag_mask_.assign(num_dofs_, 0);
    for (const auto& be : m.boundary_edges()) {
        const unsigned char bit = tag_bit(be.tag);
        tag_mask_[be.nodes[0]] |= bit;
        tag_mask_[be.nodes[1]] |= bit;
        if (degree_ == 2) {
            const int a = std::min(be.nodes[0], be.nodes[1]);
            const int b = std::max(be.nodes[0], be.nodes[1]);
            const auto it = edge_index.find({a, b});
            if (it == edge_index.end()) throw MeshError("boundary edge is not an edge of any cell");
            tag_mask_[nn + it->second] |= bit;
        }
    }
    const unsigned char constrained = tag_bit(BoundaryTag::Dirichlet) | tag_bit(BoundaryTag::Solid);
    for (int i = 0; i < num_dofs_; ++i) {
        if (tag_mask_[i] & constrained) dirichlet_dofs_.push_back(i);
    }

    std::vector<std::vector<int>> columns(num_dofs_);
    for (int k = 0; k < nc; ++k) {
        const auto dofs = cell_dofs(k);
        for (int i : dofs) columns[i].insert(columns[i].end(), dofs.begin(), dofs.end());
    }
    pattern_ = std::make_shared<const SparsityPattern>(SparsityPattern::from_rows(num_dofs_, num_dofs_, std::move(columns)));

    const std::size_t block = static_cast<std::size_t>(num_local_) * num_local_;
    csr_positions_.resize(static_cast<std::size_t>(nc) * block);
    for (int k = 0; k < nc; ++k) {
        const auto dofs = cell_dofs(k);
        for (int i = 0; i < num_local_; ++i) {
            for (int j = 0; j < num_local_; ++j) {
                csr_positions_[k * block + i * num_local_ + j] = pattern_->find(dofs[i], dofs[j]);
            }
        }
    }
}

std::vector<Vec2> FunctionSpace::dof_coordinates(std::span<const Vec2> coords) const {
    std::vector<Vec2> pts(num_dofs_);
    const int nn = static_cast<int>(mesh_->num_nodes());
    for (int i = 0; i < nn; ++i) pts[i] = coords[i];
    if (degree_ == 2) {
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            pts[nn + e] = 0.5 * (coords[edges_[e][0]] + coords[edges_[e][1]]);
        }
    }
    return pts;
}

double evaluate_in_cell(const FunctionSpace& space, std::span<const double> coeffs, int cell, const Vec2& xi) {
    std::array<double, kMaxLocalDofs> phi{};
    std::array<Vec2, kMaxLocalDofs> grad{};
    eval_basis(space.degree(), xi, phi, grad);
    const auto dofs = space.cell_dofs(cell);
    double u = 0.0;
    for (int i = 0; i < space.num_local(); ++i) u += coeffs[dofs[i]] * phi[i];
    return u;
}

}  // namespace alesupg
