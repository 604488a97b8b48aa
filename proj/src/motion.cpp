#include "alesupg/motion.hpp"

#include <algorithm>
#include <cmath>

namespace alesupg {

std::vector<Vec2> AnalyticMotion::advance(std::span<const Vec2> coords_now, double, double t_next) {
    const auto& ref = mesh_->nodes();
    if (coords_now.size() != ref.size()) throw NumericalError("analytic motion: coordinate count mismatch");
    std::vector<Vec2> next(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) next[i] = map_(ref[i], t_next);
    return next;
}

ElasticMotion::ElasticMotion(std::shared_ptr<const Mesh> mesh, PointMap boundary_map, BoundaryTag driven,
                             ElasticOptions options)
    : mesh_(std::move(mesh)), map_(std::move(boundary_map)), options_(std::move(options)) {
    for (const auto& e : mesh_->boundary_edges()) {
        if (e.tag != driven) continue;
        driven_nodes_.push_back(e.nodes[0]);
        driven_nodes_.push_back(e.nodes[1]);
    }
    std::sort(driven_nodes_.begin(), driven_nodes_.end());
    driven_nodes_.erase(std::unique(driven_nodes_.begin(), driven_nodes_.end()), driven_nodes_.end());
}

std::vector<Vec2> ElasticMotion::advance(std::span<const Vec2> coords_now, double, double t_next) {
    const auto& ref = mesh_->nodes();
    std::vector<NodalDisplacement> prescribed;
    prescribed.reserve(driven_nodes_.size());
    for (int node : driven_nodes_) prescribed.push_back({node, map_(ref[node], t_next) - coords_now[node]});
    const auto disp = elastic_update(*mesh_, coords_now, prescribed, options_);
    std::vector<Vec2> next(coords_now.begin(), coords_now.end());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += disp[i];
    // Driven nodes land exactly on the map, free of solver round-off.
    for (int node : driven_nodes_) next[node] = map_(ref[node], t_next);
    return next;
}

std::shared_ptr<const Trajectory> Trajectory::record(MeshMotion& motion, std::vector<Vec2> initial, double dt, int steps) {
    if (!(dt > 0.0) || steps < 0) throw ConfigError("trajectory: need dt > 0 and steps >= 0");
    auto traj = std::make_shared<Trajectory>();
    traj->dt_ = dt;
    traj->levels_.reserve(static_cast<std::size_t>(steps) + 1);
    traj->levels_.push_back(std::move(initial));
    for (int n = 0; n < steps; ++n) {
        traj->levels_.push_back(motion.advance(traj->levels_.back(), n * dt, (n + 1) * dt));
    }
    return traj;
}

std::vector<Vec2> ReplayMotion::advance(std::span<const Vec2>, double, double t_next) {
    const double level = t_next / trajectory_->dt();
    const long n = std::lround(level);
    if (std::abs(level - static_cast<double>(n)) > 1e-9 || n < 0 || n > trajectory_->steps()) {
        throw NumericalError("trajectory replay: time " + std::to_string(t_next) + " is not a recorded level");
    }
    return trajectory_->coords(static_cast<int>(n));
}

}  // namespace alesupg
