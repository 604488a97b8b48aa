#include "alesupg/ale.hpp"

#include <algorithm>
#include <cmath>

namespace alesupg {

std::string_view to_string(GeometryLevel level) {
    switch (level) {
        case GeometryLevel::Prev: return "prev";
        case GeometryLevel::Mid: return "mid";
        case GeometryLevel::Curr: return "curr";
    }
    return "unknown";
}

std::vector<Vec2> mesh_velocity(std::span<const Vec2> coords_prev, std::span<const Vec2> coords_curr, double dt) {
    if (!(dt > 0.0)) throw NumericalError("mesh velocity requires dt > 0");
    if (coords_prev.size() != coords_curr.size()) throw NumericalError("mesh velocity: node count mismatch");
    std::vector<Vec2> w(coords_prev.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (coords_curr[i] - coords_prev[i]) * (1.0 / dt);
    return w;
}

std::vector<Vec2> backward_difference_velocity(std::span<const Vec2> coords_before_prev, std::span<const Vec2> coords_prev,
                                               std::span<const Vec2> coords_curr, double dt) {
    if (!(dt > 0.0)) throw NumericalError("mesh velocity requires dt > 0");
    if (coords_prev.size() != coords_curr.size() || coords_before_prev.size() != coords_curr.size()) {
        throw NumericalError("mesh velocity: node count mismatch");
    }
    std::vector<Vec2> w(coords_curr.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = (3.0 * coords_curr[i] - 4.0 * coords_prev[i] + coords_before_prev[i]) * (0.5 / dt);
    }
    return w;
}

std::vector<Vec2> midpoint_coords(const Mesh& mesh, std::span<const Vec2> coords_prev, std::span<const Vec2> coords_curr) {
    if (coords_prev.size() != coords_curr.size()) throw NumericalError("midpoint: node count mismatch");
    std::vector<Vec2> mid(coords_prev.size());
    for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = 0.5 * (coords_prev[i] + coords_curr[i]);
    if (const int bad = find_inverted_cell(mesh, mid); bad >= 0) {
        throw MeshError("midpoint mesh has inverted cell " + std::to_string(bad) + " (mesh motion too large for dt)");
    }
    return mid;
}

AleFrame::AleFrame(std::shared_ptr<const Mesh> mesh, std::vector<Vec2> coords_prev, std::vector<Vec2> coords_curr, double dt)
    : mesh_(std::move(mesh)), prev_(std::move(coords_prev)), curr_(std::move(coords_curr)), dt_(dt) {
    if (prev_.size() != mesh_->num_nodes()) throw NumericalError("frame: coordinate count does not match mesh");
    velocity_ = mesh_velocity(prev_, curr_, dt_);
    if (const int bad = find_inverted_cell(*mesh_, prev_); bad >= 0) {
        throw MeshError("frame: cell " + std::to_string(bad) + " inverted at t^n");
    }
    if (const int bad = find_inverted_cell(*mesh_, curr_); bad >= 0) {
        throw MeshError("frame: cell " + std::to_string(bad) + " inverted at t^{n+1}");
    }
    mid_ = midpoint_coords(*mesh_, prev_, curr_);
}

void AleFrame::set_convective_velocity(std::vector<Vec2> w) {
    if (w.size() != velocity_.size()) throw NumericalError("frame: convective velocity has the wrong length");
    convective_ = std::move(w);
}

AleFrame AleFrame::stationary(std::shared_ptr<const Mesh> mesh, std::vector<Vec2> coords, double dt) {
    auto copy = coords;
    return AleFrame(std::move(mesh), std::move(coords), std::move(copy), dt);
}

const std::vector<Vec2>& AleFrame::coords(GeometryLevel level) const {
    switch (level) {
        case GeometryLevel::Prev: return prev_;
        case GeometryLevel::Mid: return mid_;
        case GeometryLevel::Curr: return curr_;
    }
    throw NumericalError("invalid geometry selector");
}

std::vector<double> cell_divergence(const AleFrame& frame, GeometryLevel level) {
    const auto& mesh = frame.mesh();
    const auto& x = frame.coords(level);
    const auto& w = frame.velocity();
    std::vector<double> div(mesh.num_cells());
    for (std::size_t k = 0; k < div.size(); ++k) {
        const auto& c = mesh.cells()[k];
        const auto g = barycentric_gradients(x[c[0]], x[c[1]], x[c[2]]);
        // The gradients sum to zero, so a uniform velocity gives exactly 0.
        div[k] = dot(w[c[1]] - w[c[0]], g[1]) + dot(w[c[2]] - w[c[0]], g[2]);
    }
    return div;
}

double divergence_w_sup(const AleFrame& frame, GeometryLevel level) {
    double m = 0.0;
    for (double d : cell_divergence(frame, level)) m = std::max(m, std::abs(d));
    return m;
}

namespace {

double bound(double rate) { return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity(); }

}  // namespace

AleStabilityReport stability_report(const AleFrame& frame) {
    const auto& mesh = frame.mesh();
    const std::size_t nc = mesh.num_cells();
    const auto div_prev = cell_divergence(frame, GeometryLevel::Prev);
    const auto div_mid = cell_divergence(frame, GeometryLevel::Mid);
    const auto div_curr = cell_divergence(frame, GeometryLevel::Curr);

    AleStabilityReport r;
    double jac_mid_over_curr = 0.0;
    double jac_mid_over_prev = 0.0;
    double div_mid_sup = 0.0;
    double div_prev_sup = 0.0;
    for (std::size_t k = 0; k < nc; ++k) {
        const int cell = static_cast<int>(k);
        const double a_prev = cell_area(mesh, frame.coords_prev(), cell);
        const double a_mid = cell_area(mesh, frame.coords_mid(), cell);
        const double a_curr = cell_area(mesh, frame.coords_curr(), cell);
        r.alpha1 = std::max(r.alpha1, std::abs(div_curr[k]));
        r.alpha2 = std::max({r.alpha2, std::abs(div_prev[k]), a_mid / a_prev * std::abs(div_mid[k]),
                             a_curr / a_prev * std::abs(div_curr[k])});
        jac_mid_over_curr = std::max(jac_mid_over_curr, a_mid / a_curr);
        jac_mid_over_prev = std::max(jac_mid_over_prev, a_mid / a_prev);
        div_mid_sup = std::max(div_mid_sup, std::abs(div_mid[k]));
        div_prev_sup = std::max(div_prev_sup, std::abs(div_prev[k]));
    }
    r.beta1 = jac_mid_over_curr * div_mid_sup;
    r.beta2 = jac_mid_over_prev * div_prev_sup;
    r.dt_max_euler = bound(r.alpha1 + r.alpha2);
    r.dt_max_cn = bound(r.beta1 + r.beta2);
    r.dt_max_bdf2 = bound(2.0 * r.alpha1 + r.alpha2);
    return r;
}

}  // namespace alesupg
