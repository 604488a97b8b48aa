#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "alesupg/basis.hpp"
#include "alesupg/function_space.hpp"
#include "alesupg/mesh_generation.hpp"

using namespace alesupg;

namespace {

// Exact integral of xi^a eta^b over the reference triangle: a! b! / (a + b + 2)!
double monomial_integral(int a, int b) {
    return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

}  // namespace

TEST(Quadrature, Degree5IntegratesMonomials) {
    const auto& q = quadrature_degree5();
    EXPECT_EQ(q.size(), 7u);
    for (int a = 0; a <= 5; ++a) {
        for (int b = 0; a + b <= 5; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                const Vec2 p = q.reference_point(i);
                s += 0.5 * q.weights[i] * std::pow(p.x, a) * std::pow(p.y, b);
            }
            EXPECT_NEAR(s, monomial_integral(a, b), 1e-15) << a << "," << b;
        }
    }
}

TEST(Quadrature, Degree2IntegratesQuadratics) {
    const auto& q = quadrature_degree2();
    for (int a = 0; a <= 2; ++a) {
        for (int b = 0; a + b <= 2; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                const Vec2 p = q.reference_point(i);
                s += 0.5 * q.weights[i] * std::pow(p.x, a) * std::pow(p.y, b);
            }
            EXPECT_NEAR(s, monomial_integral(a, b), 1e-15);
        }
    }
}

class BasisDegree : public ::testing::TestWithParam<int> {};

TEST_P(BasisDegree, NodalAndPartitionOfUnity) {
    const int k = GetParam();
    const auto nodes = reference_nodes(k);
    const int n = local_dof_count(k);
    ASSERT_EQ(static_cast<int>(nodes.size()), n);
    std::array<double, kMaxLocalDofs> v{};
    std::array<Vec2, kMaxLocalDofs> g{};
    for (int i = 0; i < n; ++i) {
        eval_basis(k, nodes[i], std::span(v.data(), n), std::span(g.data(), n));
        for (int j = 0; j < n; ++j) EXPECT_NEAR(v[j], i == j ? 1.0 : 0.0, 1e-15);
    }
    for (const Vec2 xi : {Vec2{0.2, 0.3}, Vec2{0.6, 0.1}, Vec2{1.0 / 3.0, 1.0 / 3.0}}) {
        eval_basis(k, xi, std::span(v.data(), n), std::span(g.data(), n));
        EXPECT_NEAR(std::accumulate(v.begin(), v.begin() + n, 0.0), 1.0, 1e-15);
        Vec2 gs{};
        for (int j = 0; j < n; ++j) gs += g[j];
        EXPECT_NEAR(norm(gs), 0.0, 1e-14);
    }
}

TEST_P(BasisDegree, GradientsMatchFiniteDifferences) {
    const int k = GetParam();
    const int n = local_dof_count(k);
    const Vec2 xi{0.27, 0.41};
    const double h = 1e-6;
    std::array<double, kMaxLocalDofs> v{}, vp{}, vm{};
    std::array<Vec2, kMaxLocalDofs> g{}, unused{};
    eval_basis(k, xi, std::span(v.data(), n), std::span(g.data(), n));
    for (int dir = 0; dir < 2; ++dir) {
        const Vec2 e = dir == 0 ? Vec2{h, 0} : Vec2{0, h};
        eval_basis(k, xi + e, std::span(vp.data(), n), std::span(unused.data(), n));
        eval_basis(k, xi - e, std::span(vm.data(), n), std::span(unused.data(), n));
        for (int j = 0; j < n; ++j) {
            const double fd = (vp[j] - vm[j]) / (2 * h);
            EXPECT_NEAR(dir == 0 ? g[j].x : g[j].y, fd, 1e-8);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(P1P2, BasisDegree, ::testing::Values(1, 2));

TEST(Basis, BarycentreValues) {
    std::array<double, 3> v{};
    std::array<Vec2, 3> g{};
    eval_basis(1, {1.0 / 3.0, 1.0 / 3.0}, v, g);
    for (double x : v) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Basis, P2LaplaciansOnReferenceCell) {
    const auto gl = barycentric_gradients({0, 0}, {1, 0}, {0, 1});
    const auto lap = basis_laplacians(2, gl);
    // phi_0 = (1 - x - y)(1 - 2x - 2y): Laplacian 8; phi_1 = x(2x - 1): 4;
    // phi_3 = 4x(1 - x - y): -8; phi_4 = 4xy: 0.
    EXPECT_NEAR(lap[0], 8.0, 1e-14);
    EXPECT_NEAR(lap[1], 4.0, 1e-14);
    EXPECT_NEAR(lap[2], 4.0, 1e-14);
    EXPECT_NEAR(lap[3], -8.0, 1e-14);
    EXPECT_NEAR(lap[4], 0.0, 1e-14);
    EXPECT_NEAR(lap[5], -8.0, 1e-14);
    const auto lap1 = basis_laplacians(1, gl);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(lap1[i], 0.0);
}

TEST(FunctionSpace, DofCounts) {
    auto one = std::make_shared<const Mesh>(Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {}));
    EXPECT_EQ(FunctionSpace(one, 1).num_dofs(), 3);
    EXPECT_EQ(FunctionSpace(one, 2).num_dofs(), 6);
    auto sq = std::make_shared<const Mesh>(unit_square_mesh(2));
    EXPECT_EQ(FunctionSpace(sq, 2).num_dofs(), 25);
    EXPECT_EQ(FunctionSpace(sq, 1).num_dofs(), 9);
    EXPECT_EQ(FunctionSpace(sq, 2).dirichlet_dofs().size(), 16u);
}

TEST(FunctionSpace, QuadraticInterpolantIsExact) {
    auto mesh = std::make_shared<const Mesh>(unit_square_mesh(3));
    const FunctionSpace space(mesh, 2);
    auto fn = [](const Vec2& x) { return 1.0 + 2.0 * x.x - x.y + 3.0 * x.x * x.y - x.y * x.y; };
    const auto u = space.interpolate(fn, mesh->nodes());
    for (int k = 0; k < static_cast<int>(mesh->num_cells()); k += 5) {
        const auto map = reference_map(*mesh, mesh->nodes(), k);
        for (const Vec2 xi : {Vec2{0.1, 0.2}, Vec2{0.5, 0.4}}) {
            EXPECT_NEAR(evaluate_in_cell(space, u, k, xi), fn(map.map(xi)), 1e-13);
        }
    }
}

TEST(FunctionSpace, EdgeDofsSitAtMidpoints) {
    auto mesh = std::make_shared<const Mesh>(unit_square_mesh(2));
    const FunctionSpace space(mesh, 2);
    const auto pts = space.dof_coordinates();
    for (std::size_t e = 0; e < space.edges().size(); ++e) {
        const auto [a, b] = space.edges()[e];
        const Vec2 mid = 0.5 * (mesh->nodes()[a] + mesh->nodes()[b]);
        EXPECT_EQ(pts[mesh->num_nodes() + e], mid);
    }
}
