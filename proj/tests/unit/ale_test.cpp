#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "alesupg/ale.hpp"
#include "alesupg/mesh_generation.hpp"
#include "test_problems.hpp"

using namespace alesupg;

namespace {

std::shared_ptr<const Mesh> one_cell() {
    return std::make_shared<const Mesh>(
        Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {{{0, 1}}, {{1, 2}}, {{2, 0}}}));
}

std::vector<Vec2> scaled(const std::vector<Vec2>& x, double factor) {
    std::vector<Vec2> out;
    for (const auto& p : x) out.push_back(factor * p);
    return out;
}

std::vector<Vec2> shifted(const std::vector<Vec2>& x, const Vec2& by) {
    std::vector<Vec2> out;
    for (const auto& p : x) out.push_back(p + by);
    return out;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST(MeshVelocity, SingleNodeArithmetic) {
    const std::vector<Vec2> a{{1, 0}}, b{{1, 0.05}};
    const auto w = mesh_velocity(a, b, 0.01);
    EXPECT_NEAR(w[0].x, 0.0, 1e-15);
    EXPECT_NEAR(w[0].y, 5.0, 1e-12);
}

TEST(MeshVelocity, TranslationAndErrors) {
    const auto mesh = testing_support::square(3);
    const auto moved = shifted(mesh->nodes(), {0.2, -0.1});
    for (const auto& w : mesh_velocity(mesh->nodes(), moved, 0.5)) {
        EXPECT_NEAR(w.x, 0.4, 1e-15);
        EXPECT_NEAR(w.y, -0.2, 1e-15);
    }
    EXPECT_THROW(mesh_velocity(mesh->nodes(), moved, 0.0), NumericalError);
    EXPECT_THROW(mesh_velocity(mesh->nodes(), std::vector<Vec2>(3), 0.1), NumericalError);
}

TEST(MeshVelocity, BackwardDifferenceExactForQuadraticPaths) {
    // x(t) = x0 + v t + a t^2 has x'(t) = v + 2 a t, reproduced exactly by BDF-2.
    const Vec2 x0{0.3, 0.1}, v{1.0, -2.0}, a{0.5, 0.25};
    const double dt = 0.1, t = 0.3;
    auto x = [&](double s) { return x0 + v * s + a * (s * s); };
    const std::vector<Vec2> pm{x(t - 2 * dt)}, p0{x(t - dt)}, p1{x(t)};
    const auto w = backward_difference_velocity(pm, p0, p1, dt);
    EXPECT_NEAR(w[0].x, v.x + 2 * a.x * t, 1e-12);
    EXPECT_NEAR(w[0].y, v.y + 2 * a.y * t, 1e-12);
}

TEST(Midpoint, ArithmeticMeanAndInversion) {
    const auto mesh = one_cell();
    auto shifted_node = mesh->nodes();
    shifted_node[2] = {0, 1.1};
    const auto mid = midpoint_coords(*mesh, mesh->nodes(), shifted_node);
    EXPECT_NEAR(mid[2].y, 1.05, 1e-15);
    EXPECT_EQ(midpoint_coords(*mesh, mesh->nodes(), mesh->nodes()), mesh->nodes());
    // Half-turn rotation: both ends valid, the midpoint collapses.
    const std::vector<Vec2> turned{{0, 0}, {-1, 0}, {0, -1}};
    EXPECT_THROW(midpoint_coords(*mesh, mesh->nodes(), turned), MeshError);
}

TEST(AleFrame, RejectsInvertedEnds) {
    const auto mesh = one_cell();
    std::vector<Vec2> flipped{{0, 0}, {1, 0}, {0, -1}};
    EXPECT_THROW(AleFrame(mesh, mesh->nodes(), flipped, 0.1), MeshError);
    EXPECT_THROW(AleFrame(mesh, flipped, mesh->nodes(), 0.1), MeshError);
}

TEST(AleFrame, ConvectiveVelocityOverride) {
    const auto mesh = one_cell();
    AleFrame frame(mesh, mesh->nodes(), scaled(mesh->nodes(), 1.1), 0.1);
    EXPECT_EQ(frame.convective_velocity(), frame.velocity());
    frame.set_convective_velocity(std::vector<Vec2>(3, Vec2{1, 2}));
    EXPECT_EQ(frame.convective_velocity()[1], (Vec2{1, 2}));
    EXPECT_THROW(frame.set_convective_velocity(std::vector<Vec2>(2)), NumericalError);
}

TEST(Divergence, TranslationAndDilation) {
    const auto mesh = testing_support::square(4);
    const AleFrame translate(mesh, mesh->nodes(), shifted(mesh->nodes(), {0.3, 0.2}), 0.1);
    EXPECT_NEAR(divergence_w_sup(translate, GeometryLevel::Curr), 0.0, 1e-13);

    const double s = 0.1, dt = 0.1;
    const AleFrame dilate(mesh, mesh->nodes(), scaled(mesh->nodes(), 1.0 + s), dt);
    for (double d : cell_divergence(dilate, GeometryLevel::Prev)) EXPECT_NEAR(d, 2 * s / dt, 1e-12);
    for (double d : cell_divergence(dilate, GeometryLevel::Curr)) EXPECT_NEAR(d, 2 * s / ((1 + s) * dt), 1e-12);
}

TEST(StabilityReport, StationaryMesh) {
    const auto mesh = testing_support::square(3);
    const auto frame = AleFrame::stationary(mesh, mesh->nodes(), 0.1);
    const auto r = stability_report(frame);
    EXPECT_EQ(r.alpha1, 0.0);
    EXPECT_EQ(r.alpha2, 0.0);
    EXPECT_EQ(r.beta1, 0.0);
    EXPECT_EQ(r.beta2, 0.0);
    EXPECT_EQ(r.dt_max_euler, kInf);
    EXPECT_EQ(r.dt_max_cn, kInf);
    EXPECT_EQ(r.dt_max_bdf2, kInf);
}

TEST(StabilityReport, TranslationIsExactlyNeutral) {
    const auto mesh = testing_support::square(4);
    const auto r = stability_report(AleFrame(mesh, mesh->nodes(), shifted(mesh->nodes(), {0.25, -0.125}), 0.125));
    EXPECT_EQ(r.alpha1, 0.0);
    EXPECT_EQ(r.alpha2, 0.0);
    EXPECT_EQ(r.dt_max_euler, kInf);
    EXPECT_EQ(r.dt_max_cn, kInf);
    EXPECT_EQ(r.dt_max_bdf2, kInf);
}

TEST(StabilityReport, OneCellDilationHandValues) {
    // x = (1 + theta s) X over the step; div w on the cell at stage theta is
    // 2 s / ((1 + theta s) dt) and the Jacobian from t^n is (1 + theta s)^2.
    const double s = 0.1, dt = 0.1;
    const auto mesh = one_cell();
    const AleFrame frame(mesh, mesh->nodes(), scaled(mesh->nodes(), 1 + s), dt);
    const auto r = stability_report(frame);
    const double alpha1 = 2 * s / ((1 + s) * dt);
    const double alpha2 = 2 * s * (1 + s) / dt;
    const double beta1 = std::pow((1 + s / 2) / (1 + s), 2) * 2 * s / ((1 + s / 2) * dt);
    const double beta2 = std::pow(1 + s / 2, 2) * 2 * s / dt;
    EXPECT_NEAR(r.alpha1, alpha1, 1e-10);
    EXPECT_NEAR(r.alpha2, alpha2, 1e-10);
    EXPECT_NEAR(r.beta1, beta1, 1e-10);
    EXPECT_NEAR(r.beta2, beta2, 1e-10);
    EXPECT_NEAR(r.dt_max_euler, 1 / (alpha1 + alpha2), 1e-10);
    EXPECT_NEAR(r.dt_max_cn, 1 / (beta1 + beta2), 1e-10);
    EXPECT_NEAR(r.dt_max_bdf2, 1 / (2 * alpha1 + alpha2), 1e-10);
}

TEST(StabilityReport, NonNegativeUnderWobble) {
    const auto mesh = testing_support::square(6);
    std::vector<Vec2> a, b;
    for (const auto& y : mesh->nodes()) {
        a.push_back(testing_support::wobble(y, 0.2));
        b.push_back(testing_support::wobble(y, 0.25));
    }
    const auto r = stability_report(AleFrame(mesh, a, b, 0.05));
    EXPECT_GT(r.alpha1, 0.0);
    EXPECT_GE(r.alpha2, r.alpha1 * 0.5);
    EXPECT_GT(r.beta1, 0.0);
    EXPECT_GT(r.beta2, 0.0);
    EXPECT_NEAR(r.dt_max_euler, 1 / (r.alpha1 + r.alpha2), 1e-14);
    EXPECT_LT(r.dt_max_bdf2, r.dt_max_euler);
}

TEST(StabilityReport, Alpha2SamplesAttainSupremum) {
    // J(t) div w(t) is affine in t on each cell; compare with a fine sweep.
    const auto mesh = testing_support::square(5);
    std::vector<Vec2> a, b;
    for (const auto& y : mesh->nodes()) {
        a.push_back(testing_support::wobble(y, 0.0));
        b.push_back(testing_support::wobble(y, 0.4));
    }
    const double dt = 0.1;
    const auto r = stability_report(AleFrame(mesh, a, b, dt));
    double sup = 0.0;
    for (int i = 0; i <= 50; ++i) {
        const double th = i / 50.0;
        std::vector<Vec2> x;
        for (std::size_t n = 0; n < a.size(); ++n) x.push_back((1 - th) * a[n] + th * b[n]);
        const auto w = mesh_velocity(a, b, dt);
        for (std::size_t k = 0; k < mesh->num_cells(); ++k) {
            const auto& c = mesh->cells()[k];
            const auto g = barycentric_gradients(x[c[0]], x[c[1]], x[c[2]]);
            double div = 0.0;
            for (int j = 0; j < 3; ++j) div += dot(w[c[j]], g[j]);
            const double jac = cell_area(*mesh, x, static_cast<int>(k)) / cell_area(*mesh, a, static_cast<int>(k));
            sup = std::max(sup, std::abs(jac * div));
        }
    }
    EXPECT_NEAR(r.alpha2, sup, 1e-12 * sup);
}
