#include <gtest/gtest.h>

#include "alesupg/bench_cases.hpp"
#include "alesupg/elastic.hpp"
#include "alesupg/motion.hpp"
#include "test_problems.hpp"

using namespace alesupg;
using testing_support::square;

namespace {

std::vector<NodalDisplacement> boundary_displacement(const Mesh& mesh, const Vec2& d) {
    std::vector<NodalDisplacement> out;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
        if (mesh.boundary_node_mask()[i]) out.push_back({static_cast<int>(i), d});
    }
    return out;
}

}  // namespace

TEST(Elastic, ZeroBoundaryDisplacementGivesZero) {
    const auto mesh = square(6);
    const auto u = elastic_update(*mesh, mesh->nodes(), boundary_displacement(*mesh, {0, 0}));
    for (const auto& d : u) EXPECT_EQ(norm(d), 0.0);
}

TEST(Elastic, RigidTranslationReproduced) {
    const auto mesh = square(6);
    for (bool stiffen : {false, true}) {
        ElasticOptions opt;
        opt.stiffen = stiffen;
        opt.solver = {SolverMethod::Gmres, 1e-12, 2000, 50};
        const auto u = elastic_update(*mesh, mesh->nodes(), boundary_displacement(*mesh, {0.1, -0.05}), opt);
        for (const auto& d : u) {
            EXPECT_NEAR(d.x, 0.1, 1e-10);
            EXPECT_NEAR(d.y, -0.05, 1e-10);
        }
    }
}

TEST(Elastic, PartialDisplacementMovesInterior) {
    const auto mesh = square(6);
    std::vector<NodalDisplacement> pushed;
    for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
        if (mesh->nodes()[i].y == 0.0) pushed.push_back({static_cast<int>(i), {0.0, 0.05}});
    }
    const auto u = elastic_update(*mesh, mesh->nodes(), pushed);
    double lifted = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!mesh->boundary_node_mask()[i]) lifted = std::max(lifted, u[i].y);
        if (mesh->nodes()[i].y == 1.0) EXPECT_EQ(norm(u[i]), 0.0);
    }
    EXPECT_GT(lifted, 0.01);
    EXPECT_LT(lifted, 0.05);
}

TEST(Elastic, InvalidInputsRejected) {
    const auto mesh = square(3);
    EXPECT_THROW(elastic_update(*mesh, std::vector<Vec2>(3), {}), NumericalError);
    const std::vector<NodalDisplacement> bad{{999, {0, 0}}};
    EXPECT_THROW(elastic_update(*mesh, mesh->nodes(), bad), MeshError);
    ElasticOptions opt;
    opt.poisson = 0.5;
    EXPECT_THROW(elastic_update(*mesh, mesh->nodes(), {}, opt), ConfigError);
    // Folding the bottom row over the top one inverts cells.
    std::vector<NodalDisplacement> fold;
    for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
        if (mesh->nodes()[i].y == 0.0) fold.push_back({static_cast<int>(i), {0.0, 2.0}});
    }
    EXPECT_THROW(elastic_update(*mesh, mesh->nodes(), fold), MeshError);
}

TEST(Motion, AnalyticFollowsMap) {
    const auto mesh = square(3);
    AnalyticMotion m(mesh, testing_support::wobble);
    const auto x = m.advance(mesh->nodes(), 0.0, 0.4);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i], testing_support::wobble(mesh->nodes()[i], 0.4));
    EXPECT_THROW(m.advance(std::vector<Vec2>(2), 0.0, 0.1), NumericalError);
}

TEST(Motion, ElasticDrivesTaggedBoundary) {
    const auto mesh = square(6, BoundaryTag::Solid);
    auto shift = [](const Vec2& y, double t) { return y + Vec2{0.2 * t, 0.0}; };
    ElasticMotion m(mesh, shift);
    const auto x = m.advance(mesh->nodes(), 0.0, 0.5);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(norm(x[i] - shift(mesh->nodes()[i], 0.5)), 0.0, 1e-7);
}

TEST(Motion, BeamElasticFirstStepKeepsOrientation) {
    auto mesh = std::make_shared<const Mesh>(beam::generate_mesh({0.1, 1.5, 6, 0.3}));
    ElasticMotion m(mesh, beam::beam_map);
    const auto x = m.advance(mesh->nodes(), 0.0, 0.01);
    EXPECT_EQ(find_inverted_cell(*mesh, x), -1);
    for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
        const Vec2 y = mesh->nodes()[i];
        if (y.x == beam::kChannelXMax || y.y == beam::kChannelYMax) EXPECT_EQ(x[i], y);
    }
}

TEST(Motion, TrajectoryReplay) {
    const auto mesh = square(3);
    AnalyticMotion m(mesh, testing_support::wobble);
    const auto traj = Trajectory::record(m, mesh->nodes(), 0.1, 5);
    EXPECT_EQ(traj->steps(), 5);
    EXPECT_EQ(traj->coords(0), mesh->nodes());
    ReplayMotion replay(traj);
    auto x = replay.advance(traj->coords(2), 0.2, 0.3);
    EXPECT_EQ(x, traj->coords(3));
    EXPECT_THROW(replay.advance(x, 0.3, 0.35), NumericalError);
    EXPECT_THROW(replay.advance(x, 0.5, 0.6), NumericalError);
    EXPECT_THROW(Trajectory::record(m, mesh->nodes(), 0.0, 5), ConfigError);
}
