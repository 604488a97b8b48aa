#pragma once

#include <memory>
#include <random>
#include <vector>

#include "alesupg/mesh_generation.hpp"
#include "alesupg/problem.hpp"

namespace testing_support {

using alesupg::Vec2;

inline std::shared_ptr<const alesupg::Mesh> square(int n, alesupg::BoundaryTag tag = alesupg::BoundaryTag::Dirichlet) {
    return std::make_shared<const alesupg::Mesh>(alesupg::unit_square_mesh(n, tag));
}

/// Polynomial data of low degree, so that degree-5 quadrature integrates
/// every P2 operator exactly.
inline alesupg::ProblemSpec polynomial_problem(double eps) {
    alesupg::ProblemSpec p;
    p.name = "polynomial";
    p.eps = eps;
    p.b = [](double t, const Vec2& x) { return Vec2{1.0 + 0.5 * x.y, -0.3 + 0.4 * x.x + 0.1 * t}; };
    p.div_b = [](double, const Vec2&) { return 0.0; };
    p.c = [](double, const Vec2& x) { return 1.0 + 0.5 * x.x; };
    p.f = [](double t, const Vec2& x) { return (1.0 + t) * (x.x * x.x * x.y - 0.5 * x.y + 0.2); };
    p.u0 = [](double, const Vec2& x) { return x.x * (1.0 - x.x) + 0.3 * x.y * x.y + 0.1; };
    p.bc[alesupg::BoundaryTag::Dirichlet] =
        alesupg::BoundaryCondition::dirichlet([](double t, const Vec2& x) { return 0.1 + 0.2 * t * x.x + 0.05 * x.y; });
    p.lower_bound = 0.0;
    p.upper_bound = 1.0;
    return p;
}

/// Smooth motion of the unit square that keeps the boundary in place.
inline Vec2 wobble(const Vec2& y, double t) {
    const double bump = 16.0 * y.x * (1.0 - y.x) * y.y * (1.0 - y.y);
    return y + 0.06 * std::sin(2.0 * t) * bump * Vec2{1.0, -0.5};
}

inline std::vector<double> random_vector(std::size_t n, unsigned seed, double lo = -1.0, double hi = 1.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(gen);
    return v;
}

}  // namespace testing_support
