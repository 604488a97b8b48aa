#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "alesupg/elastic.hpp"
#include "alesupg/mesh.hpp"

namespace alesupg {

/// Closed-form motion of a reference point: x = map(Y, t).
using PointMap = std::function<Vec2(const Vec2& reference, double t)>;

/// Produces the node coordinates of the next time level.
class MeshMotion {
public:
    virtual ~MeshMotion() = default;
    virtual std::vector<Vec2> advance(std::span<const Vec2> coords_now, double t_now, double t_next) = 0;
};

class StaticMotion final : public MeshMotion {
public:
    std::vector<Vec2> advance(std::span<const Vec2> coords_now, double, double) override {
        return {coords_now.begin(), coords_now.end()};
    }
};

/// Every node follows the closed-form map of its reference position.
class AnalyticMotion final : public MeshMotion {
public:
    AnalyticMotion(std::shared_ptr<const Mesh> mesh, PointMap map) : mesh_(std::move(mesh)), map_(std::move(map)) {}
    std::vector<Vec2> advance(std::span<const Vec2> coords_now, double t_now, double t_next) override;

private:
    std::shared_ptr<const Mesh> mesh_;
    PointMap map_;
};

/// Nodes on edges with the driven tag follow the closed-form map; interior
/// nodes follow an incremental elastic update on the current mesh; all other
/// boundary nodes stay put.
class ElasticMotion final : public MeshMotion {
public:
    ElasticMotion(std::shared_ptr<const Mesh> mesh, PointMap boundary_map, BoundaryTag driven = BoundaryTag::Solid,
                  ElasticOptions options = {});
    std::vector<Vec2> advance(std::span<const Vec2> coords_now, double t_now, double t_next) override;

private:
    std::shared_ptr<const Mesh> mesh_;
    PointMap map_;
    std::vector<int> driven_nodes_;
    ElasticOptions options_;
};

/// Node coordinates at t = 0, dt, ..., steps * dt, recorded once and shared
/// between runs that use the same mesh, motion and step size.
class Trajectory {
public:
    static std::shared_ptr<const Trajectory> record(MeshMotion& motion, std::vector<Vec2> initial, double dt, int steps);

    double dt() const { return dt_; }
    int steps() const { return static_cast<int>(levels_.size()) - 1; }
    const std::vector<Vec2>& coords(int level) const { return levels_.at(level); }

private:
    double dt_{0.0};
    std::vector<std::vector<Vec2>> levels_;
};

/// Replays a recorded trajectory; t_next must be a recorded level.
class ReplayMotion final : public MeshMotion {
public:
    explicit ReplayMotion(std::shared_ptr<const Trajectory> trajectory) : trajectory_(std::move(trajectory)) {}
    std::vector<Vec2> advance(std::span<const Vec2> coords_now, double t_now, double t_next) override;

private:
    std::shared_ptr<const Trajectory> trajectory_;
};

}  // namespace alesupg
