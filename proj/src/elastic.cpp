#include "alesupg/elastic.hpp"

#include <array>

namespace alesupg {

std::vector<Vec2> elastic_update(const Mesh& mesh, std::span<const Vec2> coords,
                                 std::span<const NodalDisplacement> prescribed, const ElasticOptions& options) {
    const int nn = static_cast<int>(mesh.num_nodes());
    if (coords.size() != mesh.num_nodes()) throw NumericalError("elastic update: coordinate count mismatch");
    if (!(options.young > 0.0) || !(options.poisson > -1.0 && options.poisson < 0.5)) {
        throw ConfigError("elastic update: need E > 0 and -1 < nu < 0.5");
    }
    const int n = 2 * nn;

    std::vector<char> fixed(n, 0);
    std::vector<double> value(n, 0.0);
    for (int i = 0; i < nn; ++i) {
        if (mesh.boundary_node_mask()[i]) fixed[2 * i] = fixed[2 * i + 1] = 1;
    }
    for (const auto& p : prescribed) {
        if (p.node < 0 || p.node >= nn) throw MeshError("elastic update: prescribed node out of range");
        fixed[2 * p.node] = fixed[2 * p.node + 1] = 1;
        value[2 * p.node] = p.value.x;
        value[2 * p.node + 1] = p.value.y;
    }

    std::vector<std::vector<int>> columns(n);
    for (const auto& c : mesh.cells()) {
        for (int a : c) {
            for (int b : c) {
                for (int da = 0; da < 2; ++da) {
                    for (int db = 0; db < 2; ++db) columns[2 * a + da].push_back(2 * b + db);
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) columns[i].push_back(i);
    auto pattern = std::make_shared<const SparsityPattern>(SparsityPattern::from_rows(n, n, std::move(columns)));
    SparseMatrix k_global(pattern);
    std::vector<double> rhs(n, 0.0);

    const double nu = options.poisson;
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
        const auto& c = mesh.cells()[k];
        const double area = signed_area(coords[c[0]], coords[c[1]], coords[c[2]]);
        if (area <= 0.0) throw MeshError("elastic update: cell " + std::to_string(k) + " is inverted");
        const double e = options.stiffen ? options.young / area : options.young;
        const double lame = e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
        const double shear = e / (2.0 * (1.0 + nu));
        const auto g = barycentric_gradients(coords[c[0]], coords[c[1]], coords[c[2]]);

        std::array<std::array<double, 6>, 6> ke{};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const Vec2 ga = g[a];
                const Vec2 gb = g[b];
                ke[2 * a][2 * b] = area * ((lame + 2.0 * shear) * ga.x * gb.x + shear * ga.y * gb.y);
                ke[2 * a][2 * b + 1] = area * (lame * ga.x * gb.y + shear * ga.y * gb.x);
                ke[2 * a + 1][2 * b] = area * (lame * ga.y * gb.x + shear * ga.x * gb.y);
                ke[2 * a + 1][2 * b + 1] = area * ((lame + 2.0 * shear) * ga.y * gb.y + shear * ga.x * gb.x);
            }
        }
        for (int a = 0; a < 6; ++a) {
            const int row = 2 * c[a / 2] + a % 2;
            for (int b = 0; b < 6; ++b) {
                const int col = 2 * c[b / 2] + b % 2;
                if (fixed[row]) continue;
                if (fixed[col]) {
                    rhs[row] -= ke[a][b] * value[col];
                } else {
                    k_global.add(row, col, ke[a][b]);
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (fixed[i]) {
            k_global.add(i, i, 1.0);
            rhs[i] = value[i];
        }
    }

    const auto result = solve(k_global, rhs, options.solver, value);
    std::vector<Vec2> disp(nn);
    std::vector<Vec2> moved(nn);
    for (int i = 0; i < nn; ++i) {
        disp[i] = fixed[2 * i] ? Vec2{value[2 * i], value[2 * i + 1]} : Vec2{result.x[2 * i], result.x[2 * i + 1]};
        moved[i] = coords[i] + disp[i];
    }
    if (const int bad = find_inverted_cell(mesh, moved); bad >= 0) {
        throw MeshError("elastic update inverts cell " + std::to_string(bad) + " (boundary motion too large for one step)");
    }
    return disp;
}

}  // namespace alesupg
