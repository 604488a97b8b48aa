#include "alesupg/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace alesupg {

std::string_view to_string(BoundaryTag tag) {
    switch (tag) {
        case BoundaryTag::Dirichlet: return "dirichlet";
        case BoundaryTag::Neumann: return "neumann";
        case BoundaryTag::Solid: return "solid";
    }
    return "unknown";
}

BoundaryTag parse_boundary_tag(std::string_view text) {
    if (text == "dirichlet") return BoundaryTag::Dirichlet;
    if (text == "neumann") return BoundaryTag::Neumann;
    if (text == "solid") return BoundaryTag::Solid;
    throw MeshError("unknown boundary tag '" + std::string(text) + "'");
}

namespace {

double longest_edge(const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<Cell> cells, std::vector<BoundaryEdge> boundary_edges)
    : nodes_(std::move(nodes)), cells_(std::move(cells)), boundary_edges_(std::move(boundary_edges)) {
    const int n = static_cast<int>(nodes_.size());
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        for (int v : cells_[k]) {
            if (v < 0 || v >= n) {
                throw MeshError("cell " + std::to_string(k) + " references node " + std::to_string(v) +
                                " out of range");
            }
        }
        const auto& c = cells_[k];
        if (signed_area(nodes_[c[0]], nodes_[c[1]], nodes_[c[2]]) <= 0.0) {
            throw MeshError("cell " + std::to_string(k) + " is degenerate or clockwise");
        }
    }
    boundary_node_mask_.assign(nodes_.size(), false);
    for (std::size_t k = 0; k < boundary_edges_.size(); ++k) {
        for (int v : boundary_edges_[k].nodes) {
            if (v < 0 || v >= n) {
                throw MeshError("boundary edge " + std::to_string(k) + " references node " +
                                std::to_string(v) + " out of range");
            }
            boundary_node_mask_[v] = true;
        }
    }
    cell_diameters_.reserve(cells_.size());
    for (const auto& c : cells_) {
        cell_diameters_.push_back(longest_edge(nodes_[c[0]], nodes_[c[1]], nodes_[c[2]]));
    }
}

double cell_area(const Mesh& mesh, std::span<const Vec2> coords, int cell) {
    const auto& c = mesh.cells()[cell];
    return signed_area(coords[c[0]], coords[c[1]], coords[c[2]]);
}

double cell_diameter(const Mesh& mesh, std::span<const Vec2> coords, int cell) {
    const auto& c = mesh.cells()[cell];
    return longest_edge(coords[c[0]], coords[c[1]], coords[c[2]]);
}

AffineMap reference_map(const Vec2& a, const Vec2& b, const Vec2& c) {
    AffineMap m;
    m.origin = a;
    m.col0 = b - a;
    m.col1 = c - a;
    m.det = cross(m.col0, m.col1);
    if (std::abs(m.det) <= 0.0 || !std::isfinite(m.det)) {
        throw MeshError("degenerate cell in reference map");
    }
    // J = [col0 col1]; J^{-1} = 1/det [[col1.y, -col1.x], [-col0.y, col0.x]].
    // J^{-T} rows are the columns of J^{-1}.
    const double inv = 1.0 / m.det;
    m.inv_t_row0 = {m.col1.y * inv, -m.col0.y * inv};
    m.inv_t_row1 = {-m.col1.x * inv, m.col0.x * inv};
    return m;
}

AffineMap reference_map(const Mesh& mesh, std::span<const Vec2> coords, int cell) {
    const auto& c = mesh.cells()[cell];
    return reference_map(coords[c[0]], coords[c[1]], coords[c[2]]);
}

int find_inverted_cell(const Mesh& mesh, std::span<const Vec2> coords) {
    const auto& ref = mesh.nodes();
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
        const auto& c = mesh.cells()[k];
        const double ref_area = signed_area(ref[c[0]], ref[c[1]], ref[c[2]]);
        if (signed_area(coords[c[0]], coords[c[1]], coords[c[2]]) < kInversionThreshold * ref_area) {
            return static_cast<int>(k);
        }
    }
    return -1;
}

MeshAudit audit_mesh(const Mesh& mesh, std::span<const Vec2> coords) {
    MeshAudit report;
    auto fail = [&report](std::string msg) {
        report.ok = false;
        report.problems.push_back(std::move(msg));
    };
    if (coords.size() != mesh.num_nodes()) {
        fail("coordinate count does not match node count");
        return report;
    }
    if (const int bad = find_inverted_cell(mesh, coords); bad >= 0) {
        fail("cell " + std::to_string(bad) + " is inverted or degenerate");
    }
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
        const double h = cell_diameter(mesh, mesh.nodes(), static_cast<int>(k));
        if (std::abs(h - mesh.cell_diameters()[k]) > 1e-14 * h) {
            fail("stored diameter of cell " + std::to_string(k) + " is stale");
            break;
        }
    }

    std::map<std::pair<int, int>, int> edge_use;
    for (const auto& c : mesh.cells()) {
        for (int e = 0; e < 3; ++e) {
            int a = c[e], b = c[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_use[{a, b}];
        }
    }
    std::map<std::pair<int, int>, int> bedge_use;
    for (const auto& be : mesh.boundary_edges()) {
        int a = be.nodes[0], b = be.nodes[1];
        if (a > b) std::swap(a, b);
        ++bedge_use[{a, b}];
    }
    for (const auto& [edge, count] : edge_use) {
        if (count > 2) {
            fail("edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) + ") shared by " +
                 std::to_string(count) + " cells");
        } else if (count == 1 && bedge_use.count(edge) == 0) {
            fail("edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) +
                 ") lies on the boundary but carries no boundary tag");
        } else if (count == 2 && bedge_use.count(edge) != 0) {
            fail("interior edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) +
                 ") is tagged as boundary");
        }
    }
    for (const auto& [edge, count] : bedge_use) {
        if (count > 1) fail("duplicate boundary edge");
        if (edge_use.count(edge) == 0) {
            fail("boundary edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) +
                 ") is not an edge of any cell");
        }
    }
    return report;
}

Mesh read_mesh(std::istream& in) {
    auto expect = [&in](const std::string& keyword) {
        std::string word;
        if (!(in >> word) || word != keyword) {
            throw MeshError("mesh file: expected '" + keyword + "', found '" + word + "'");
        }
    };
    auto read_count = [&in](const std::string& what) {
        long long n = -1;
        if (!(in >> n) || n < 0) throw MeshError("mesh file: invalid " + what + " count");
        return static_cast<std::size_t>(n);
    };

    expect("ale-mesh");
    int version = 0;
    if (!(in >> version) || version != 1) throw MeshError("mesh file: unsupported version");

    expect("nodes");
    std::vector<Vec2> nodes(read_count("node"));
    for (auto& p : nodes) {
        if (!(in >> p.x >> p.y)) throw MeshError("mesh file: truncated node list");
    }
    expect("cells");
    std::vector<Cell> cells(read_count("cell"));
    for (auto& c : cells) {
        if (!(in >> c[0] >> c[1] >> c[2])) throw MeshError("mesh file: truncated cell list");
    }
    expect("bedges");
    std::vector<BoundaryEdge> edges(read_count("boundary edge"));
    for (auto& e : edges) {
        std::string tag;
        if (!(in >> e.nodes[0] >> e.nodes[1] >> tag)) throw MeshError("mesh file: truncated bedge list");
        e.tag = parse_boundary_tag(tag);
    }
    return Mesh(std::move(nodes), std::move(cells), std::move(edges));
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out << "ale-mesh 1\n";
    out << "nodes " << mesh.num_nodes() << '\n';
    out << std::setprecision(17);
    for (const auto& p : mesh.nodes()) out << p.x << ' ' << p.y << '\n';
    out << "cells " << mesh.num_cells() << '\n';
    for (const auto& c : mesh.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
    out << "bedges " << mesh.boundary_edges().size() << '\n';
    for (const auto& e : mesh.boundary_edges()) {
        out << e.nodes[0] << ' ' << e.nodes[1] << ' ' << to_string(e.tag) << '\n';
    }
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write mesh file '" + path + "'");
    write_mesh(out, mesh);
    if (!out) throw IoError("write failed for mesh file '" + path + "'");
}

}  // namespace alesupg
