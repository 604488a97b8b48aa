#pragma once

#include <array>
#include <span>
#include <vector>

#include "alesupg/common.hpp"

namespace alesupg {

/// Quadrature on the reference triangle. Points are barycentric
/// (l0, l1, l2); weights are normalised to sum to 1, so an integral over a
/// cell K is area(K) * sum_q w_q f(x_q).
struct QuadratureRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
    int degree{0};

    std::size_t size() const { return weights.size(); }
    /// Reference coordinates (xi, eta) = (l1, l2) of point q.
    Vec2 reference_point(std::size_t q) const { return {points[q][1], points[q][2]}; }
};

/// 7-point rule exact for polynomials of total degree 5.
const QuadratureRule& quadrature_degree5();
/// 3-point edge-midpoint rule, exact to degree 2.
const QuadratureRule& quadrature_degree2();

inline constexpr int kMaxLocalDofs = 6;

/// Number of local basis functions of the Lagrange element of `degree`.
int local_dof_count(int degree);

/// Reference-element nodal points (vertices, then edge midpoints of edges
/// (0,1), (1,2), (2,0) for degree 2).
std::vector<Vec2> reference_nodes(int degree);

/// Basis values and reference gradients at a reference point.
void eval_basis(int degree, const Vec2& xi, std::span<double> values, std::span<Vec2> ref_grads);

/// Tabulated basis on a quadrature rule.
struct ShapeTable {
    int degree{1};
    int num_local{3};
    std::vector<std::array<double, kMaxLocalDofs>> values;     // [q][i]
    std::vector<std::array<Vec2, kMaxLocalDofs>> ref_grads;    // [q][i]
};

ShapeTable shape_values(int degree, const QuadratureRule& quad);

/// Physical Laplacian of each local basis function on an affine cell, given
/// the physical gradients of the barycentric coordinates. Zero for degree 1.
std::array<double, kMaxLocalDofs> basis_laplacians(int degree, const std::array<Vec2, 3>& grad_lambda);

}  // namespace alesupg
