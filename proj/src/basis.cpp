#include "alesupg/basis.hpp"

#include <cmath>
#include <span>

namespace alesupg {

const QuadratureRule& quadrature_degree5() {
    static const QuadratureRule rule = [] {
        QuadratureRule r;
        r.degree = 5;
        const double s15 = std::sqrt(15.0);
        const double a = (6.0 - s15) / 21.0;
        const double b = (6.0 + s15) / 21.0;
        const double wa = (155.0 - s15) / 1200.0;
        const double wb = (155.0 + s15) / 1200.0;
        r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
                    {a, a, 1.0 - 2.0 * a}, {a, 1.0 - 2.0 * a, a}, {1.0 - 2.0 * a, a, a},
                    {b, b, 1.0 - 2.0 * b}, {b, 1.0 - 2.0 * b, b}, {1.0 - 2.0 * b, b, b}};
        r.weights = {9.0 / 40.0, wa, wa, wa, wb, wb, wb};
        return r;
    }();
    return rule;
}

const QuadratureRule& quadrature_degree2() {
    static const QuadratureRule rule = [] {
        QuadratureRule r;
        r.degree = 2;
        r.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
        r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
        return r;
    }();
    return rule;
}

int local_dof_count(int degree) {
    if (degree == 1) return 3;
    if (degree == 2) return 6;
    throw ConfigError("unsupported polynomial degree " + std::to_string(degree));
}

std::vector<Vec2> reference_nodes(int degree) {
    std::vector<Vec2> pts = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    if (degree == 2) {
        pts.push_back({0.5, 0.0});
        pts.push_back({0.5, 0.5});
        pts.push_back({0.0, 0.5});
    } else if (degree != 1) {
        throw ConfigError("unsupported polynomial degree " + std::to_string(degree));
    }
    return pts;
}

void eval_basis(int degree, const Vec2& xi, std::span<double> values, std::span<Vec2> ref_grads) {
    const double l0 = 1.0 - xi.x - xi.y;
    const double l1 = xi.x;
    const double l2 = xi.y;
    constexpr Vec2 g0{-1.0, -1.0}, g1{1.0, 0.0}, g2{0.0, 1.0};
    if (degree == 1) {
        values[0] = l0;
        values[1] = l1;
        values[2] = l2;
        ref_grads[0] = g0;
        ref_grads[1] = g1;
        ref_grads[2] = g2;
        return;
    }
    if (degree != 2) throw ConfigError("unsupported polynomial degree " + std::to_string(degree));
    values[0] = l0 * (2.0 * l0 - 1.0);
    values[1] = l1 * (2.0 * l1 - 1.0);
    values[2] = l2 * (2.0 * l2 - 1.0);
    values[3] = 4.0 * l0 * l1;
    values[4] = 4.0 * l1 * l2;
    values[5] = 4.0 * l2 * l0;
    ref_grads[0] = g0 * (4.0 * l0 - 1.0);
    ref_grads[1] = g1 * (4.0 * l1 - 1.0);
    ref_grads[2] = g2 * (4.0 * l2 - 1.0);
    ref_grads[3] = 4.0 * (g0 * l1 + g1 * l0);
    ref_grads[4] = 4.0 * (g1 * l2 + g2 * l1);
    ref_grads[5] = 4.0 * (g2 * l0 + g0 * l2);
}

ShapeTable shape_values(int degree, const QuadratureRule& quad) {
    ShapeTable table;
    table.degree = degree;
    table.num_local = local_dof_count(degree);
    table.values.resize(quad.size());
    table.ref_grads.resize(quad.size());
    for (std::size_t q = 0; q < quad.size(); ++q) {
        eval_basis(degree, quad.reference_point(q), table.values[q], table.ref_grads[q]);
    }
    return table;
}

std::array<double, kMaxLocalDofs> basis_laplacians(int degree, const std::array<Vec2, 3>& gl) {
    std::array<double, kMaxLocalDofs> lap{};
    if (degree == 1) return lap;
    // phi_i = 2 l_i^2 - l_i      -> Laplacian 4 |grad l_i|^2
    // phi_ab = 4 l_a l_b         -> Laplacian 8 grad l_a . grad l_b
    for (int i = 0; i < 3; ++i) lap[i] = 4.0 * dot(gl[i], gl[i]);
    lap[3] = 8.0 * dot(gl[0], gl[1]);
    lap[4] = 8.0 * dot(gl[1], gl[2]);
    lap[5] = 8.0 * dot(gl[2], gl[0]);
    return lap;
}

}  // namespace alesupg
