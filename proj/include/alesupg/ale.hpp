#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "alesupg/mesh.hpp"

namespace alesupg {

/// Which coordinate set of a step defines the integration domain.
enum class GeometryLevel { Prev, Mid, Curr };

std::string_view to_string(GeometryLevel level);

/// Nodal mesh velocity (x_curr - x_prev) / dt. Throws on dt <= 0 or a
/// node-count mismatch.
std::vector<Vec2> mesh_velocity(std::span<const Vec2> coords_prev, std::span<const Vec2> coords_curr, double dt);

/// Second-order backward-difference velocity at t^{n+1}:
/// (3 x^{n+1} - 4 x^n + x^{n-1}) / (2 dt).
std::vector<Vec2> backward_difference_velocity(std::span<const Vec2> coords_before_prev, std::span<const Vec2> coords_prev,
                                               std::span<const Vec2> coords_curr, double dt);

/// Node-wise average of two coordinate sets; throws MeshError when the
/// resulting mesh has an inverted cell.
std::vector<Vec2> midpoint_coords(const Mesh& mesh, std::span<const Vec2> coords_prev, std::span<const Vec2> coords_curr);

/// Snapshot of one time step [t^n, t^{n+1}] of the discrete ALE map: the
/// mesh moves linearly in time between the two coordinate sets, so the mesh
/// velocity is constant in time and piecewise linear in space.
class AleFrame {
public:
    AleFrame(std::shared_ptr<const Mesh> mesh, std::vector<Vec2> coords_prev, std::vector<Vec2> coords_curr, double dt);

    const Mesh& mesh() const { return *mesh_; }
    const std::vector<Vec2>& reference_coords() const { return mesh_->nodes(); }
    const std::vector<Vec2>& coords(GeometryLevel level) const;
    const std::vector<Vec2>& coords_prev() const { return prev_; }
    const std::vector<Vec2>& coords_curr() const { return curr_; }
    const std::vector<Vec2>& coords_mid() const { return mid_; }
    const std::vector<Vec2>& velocity() const { return velocity_; }
    /// Velocity entering the mesh-convection term and delta_K; equals
    /// velocity() unless replaced.
    const std::vector<Vec2>& convective_velocity() const { return convective_.empty() ? velocity_ : convective_; }
    void set_convective_velocity(std::vector<Vec2> w);
    double dt() const { return dt_; }

    /// A frame with identical coordinates at both ends (zero mesh velocity).
    static AleFrame stationary(std::shared_ptr<const Mesh> mesh, std::vector<Vec2> coords, double dt);

private:
    std::shared_ptr<const Mesh> mesh_;
    std::vector<Vec2> prev_;
    std::vector<Vec2> curr_;
    std::vector<Vec2> mid_;
    std::vector<Vec2> velocity_;
    std::vector<Vec2> convective_;
    double dt_;
};

/// Per-cell divergence of the P1 mesh velocity on the chosen geometry.
std::vector<double> cell_divergence(const AleFrame& frame, GeometryLevel level);

/// max_K |div w_h| on the chosen geometry.
double divergence_w_sup(const AleFrame& frame, GeometryLevel level);

struct AleStabilityReport {
    double alpha1{0.0};
    double alpha2{0.0};
    double beta1{0.0};
    double beta2{0.0};
    double dt_max_euler{std::numeric_limits<double>::infinity()};
    double dt_max_cn{std::numeric_limits<double>::infinity()};
    double dt_max_bdf2{std::numeric_limits<double>::infinity()};
};

/// Step-size bounds of the fully discrete stability estimates.
///   alpha1 = ||div w||_inf on the new geometry,
///   alpha2 = max over {prev, mid, curr} of ||J_{t^n -> t} div w||_inf,
///   beta1  = ||J_{n+1 -> n+1/2}||_inf ||div w||_inf(mid),
///   beta2  = ||J_{n -> n+1/2}||_inf ||div w||_inf(prev).
/// On affine cells J(t) div w(t) = dJ/dt is linear in t, so the three
/// samples attain the supremum over the step.
AleStabilityReport stability_report(const AleFrame& frame);

}  // namespace alesupg
