#include <gtest/gtest.h>

#include <cmath>

#include "alesupg/bench_cases.hpp"
#include "alesupg/stabilization.hpp"

using namespace alesupg;

namespace {

const Mesh& coarse_beam() {
    static const Mesh mesh = beam::generate_mesh({0.05, 1.0, 8, 0.3});
    return mesh;
}

double near_beam_diameter(const Mesh& mesh) {
    double h = 0.0;
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
        Vec2 c{};
        for (int v : mesh.cells()[k]) c += mesh.nodes()[v] * (1.0 / 3.0);
        if (beam::distance_to_beam(c) < 0.1) h = std::max(h, mesh.cell_diameters()[k]);
    }
    return h;
}

}  // namespace

TEST(BeamMotion, TipAtQuarterPeriod) {
    const Vec2 x = beam::beam_map({4.5, 0.0}, 1.25);
    EXPECT_NEAR(x.x, 4.5, 1e-14);
    EXPECT_NEAR(x.y, 0.6, 1e-14);
}

TEST(BeamMotion, FormulaDisplacementAgainstLongDouble) {
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double y1 = 4.5L, y2 = 0.03L, t = 0.7L;
    const long double d = 0.75L * (y1 - 0.5L) * (y1 - 0.5L) * std::sin(2 * pi * t / 5);
    const long double th = std::atan(y2 / (y1 - 0.5L));
    const long double dx = 0.05L * (0.25L * d * std::tan(th) - y2 * std::sin(th));
    const long double dy = 0.05L * d;
    const Vec2 got = beam::formula_displacement({4.5, 0.03}, 0.7);
    EXPECT_NEAR(got.x, static_cast<double>(dx), 1e-15);
    EXPECT_NEAR(got.y, static_cast<double>(dy), 1e-14);
    EXPECT_EQ(norm(beam::formula_displacement({0.3, 0.01}, 0.7)), 0.0);
}

TEST(BeamMotion, IdentityAtHalfPeriodsAndPeriodic) {
    for (const Vec2 y : {Vec2{4.5, 0.03}, Vec2{2.0, -0.03}, Vec2{0.5, 0.0}, Vec2{-0.5, 0.5}, Vec2{4.53, 0.0}}) {
        for (double t : {0.0, 2.5, 5.0}) EXPECT_NEAR(norm(beam::beam_map(y, t) - y), 0.0, 1e-14);
        const Vec2 a = beam::beam_map(y, 0.8), b = beam::beam_map(y, 5.8);
        EXPECT_NEAR(norm(a - b), 0.0, 1e-13);
    }
}

TEST(BeamMotion, CutoffIsSmoothStep) {
    EXPECT_EQ(beam::cutoff(0.0), 1.0);
    EXPECT_EQ(beam::cutoff(1.5), 0.0);
    EXPECT_EQ(beam::cutoff(3.0), 0.0);
    EXPECT_NEAR(beam::cutoff(0.75), 0.5, 1e-15);
    const double h = 1e-6;
    EXPECT_NEAR((beam::cutoff(h) - beam::cutoff(0.0)) / h, 0.0, 1e-5);
    EXPECT_NEAR((beam::cutoff(1.5) - beam::cutoff(1.5 - h)) / h, 0.0, 1e-5);
}

TEST(BeamMotion, AnalyticFluidMapMatchesBeamOnSurfaceAndFarField) {
    const Vec2 tip{4.53, 0.0};
    EXPECT_NEAR(norm(beam::analytic_fluid_map(tip, 1.0) - beam::beam_map(tip, 1.0)), 0.0, 1e-14);
    const Vec2 far{10.0, 3.0};
    EXPECT_EQ(beam::analytic_fluid_map(far, 1.0), far);
}

TEST(BeamGeometry, DistanceAndOutline) {
    EXPECT_EQ(beam::distance_to_beam({0.0, 0.0}), 0.0);
    EXPECT_NEAR(beam::distance_to_beam({4.6, 0.0}), 0.07, 1e-15);
    EXPECT_NEAR(beam::distance_to_beam({2.0, 1.0}), 0.97, 1e-15);
    const auto pts = beam::outline(8);
    double area2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) area2 += cross(pts[i], pts[(i + 1) % pts.size()]);
    EXPECT_GT(area2, 0.0);
    EXPECT_THROW(beam::outline(2), ConfigError);
}

TEST(BeamGeometry, CoarseMeshPassesAudit) {
    const Mesh& mesh = coarse_beam();
    const auto audit = audit_mesh(mesh);
    EXPECT_TRUE(audit.ok) << (audit.problems.empty() ? "" : audit.problems.front());
    double area = 0.0;
    for (std::size_t k = 0; k < mesh.num_cells(); ++k) area += cell_area(mesh, mesh.nodes(), static_cast<int>(k));
    // Channel minus square, arm and polygonised tip (8 segments).
    const double tip = 0.5 * 8 * 0.03 * 0.03 * std::sin(M_PI / 8);
    EXPECT_NEAR(area, 230.0 - 1.0 - 4.0 * 0.06 - tip, 1e-9);
    int solid = 0, neumann = 0;
    for (const auto& e : mesh.boundary_edges()) {
        solid += e.tag == BoundaryTag::Solid;
        if (e.tag == BoundaryTag::Neumann) {
            ++neumann;
            EXPECT_EQ(mesh.nodes()[e.nodes[0]].x, beam::kChannelXMax);
        }
    }
    EXPECT_GT(solid, 8);
    EXPECT_GT(neumann, 0);
}

TEST(BeamGeometry, InvalidOptionsRejected) {
    EXPECT_THROW(beam::generate_mesh({0.05, 1.0, 2, 0.3}), ConfigError);
    EXPECT_THROW(beam::generate_mesh({1.0, 0.5, 8, 0.3}), ConfigError);
}

TEST(BeamGeometry, NearSizeControlsResolution) {
    const double coarse = near_beam_diameter(beam::generate_mesh({0.1, 1.0, 8, 0.3}));
    const double fine = near_beam_diameter(coarse_beam());
    EXPECT_GT(coarse / fine, 1.6);
    EXPECT_LT(coarse / fine, 2.5);
}

TEST(BeamGeometry, AnalyticMotionKeepsOrientationOverPeriod) {
    const Mesh& mesh = coarse_beam();
    for (int i = 0; i <= 40; ++i) {
        const double t = 5.0 * i / 40;
        std::vector<Vec2> x;
        for (const auto& y : mesh.nodes()) x.push_back(beam::analytic_fluid_map(y, t));
        EXPECT_EQ(find_inverted_cell(mesh, x), -1) << "t = " << t;
    }
}

TEST(BenchmarkProblem, Values) {
    const auto p = benchmark_problem();
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.eps, 1e-6);
    EXPECT_EQ(p.condition(BoundaryTag::Solid).value(0.3, {0.5, 0.5}), 1.0);
    EXPECT_EQ(p.condition(BoundaryTag::Dirichlet).value(0.3, {-5.0, 1.0}), 0.0);
    EXPECT_EQ(p.condition(BoundaryTag::Neumann).kind, BoundaryCondition::Kind::Neumann);
    EXPECT_EQ(p.b(1.0, {3.0, 2.0}), (Vec2{1.0, 0.0}));
    const auto& mesh = coarse_beam();
    const auto report = check_coercivity_assumption(p, mesh, mesh.nodes(), 0.0);
    EXPECT_EQ(report.mu, 0.0);
    EXPECT_TRUE(report.violated);
}

TEST(ManufacturedCase, SourceMatchesFiniteDifferences) {
    for (double eps : {1.0, 0.01}) {
        const auto mc = manufactured_case(parse_manufactured_kind("moving_square"), eps);
        const auto& p = mc.problem;
        const double h = 1e-4;
        for (const Vec2 x : {Vec2{0.3, 0.6}, Vec2{0.71, 0.2}}) {
            for (double t : {0.0, 0.4}) {
                auto u = [&](double s, const Vec2& y) { return p.exact(s, y); };
                const double ut = (u(t + h, x) - u(t - h, x)) / (2 * h);
                const Vec2 ex{h, 0}, ey{0, h};
                const double ux = (u(t, x + ex) - u(t, x - ex)) / (2 * h);
                const double uy = (u(t, x + ey) - u(t, x - ey)) / (2 * h);
                const double lap = (u(t, x + ex) + u(t, x - ex) + u(t, x + ey) + u(t, x - ey) - 4 * u(t, x)) / (h * h);
                const Vec2 b = p.b(t, x);
                const double residual = ut - eps * lap + b.x * ux + b.y * uy + p.c(t, x) * u(t, x);
                EXPECT_NEAR(p.f(t, x), residual, 1e-5 * (1 + eps * 10));
            }
        }
        EXPECT_NEAR(norm(mc.motion({0.0, 0.4}, 0.3) - Vec2{0.0, 0.4}), 0.0, 1e-15);
        EXPECT_NEAR(norm(mc.motion({0.5, 0.5}, 0.0) - Vec2{0.5, 0.5}), 0.0, 1e-15);
        EXPECT_NEAR(mc.motion({0.5, 0.5}, 0.25).x, 0.55, 1e-15);
    }
    EXPECT_THROW(parse_manufactured_kind("rotating_disc"), ConfigError);
    EXPECT_THROW(manufactured_case(ManufacturedKind::MovingSquare, 0.0), ConfigError);
}
