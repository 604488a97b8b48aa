#include "alesupg/bench_cases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "alesupg/mesh_generation.hpp"

namespace alesupg {

namespace beam {

std::vector<Vec2> outline(int n_arc) {
    if (n_arc < 3) throw ConfigError("beam.n_arc must be at least 3 (tip under-resolved)");
    const double w = kArmHalfWidth;
    std::vector<Vec2> pts{{-0.5, -0.5}, {0.5, -0.5}, {kArmRoot, -w}, {kTipCentre, -w}};
    for (int k = 1; k < n_arc; ++k) {
        const double a = -std::numbers::pi / 2.0 + std::numbers::pi * k / n_arc;
        pts.push_back({kTipCentre + w * std::cos(a), w * std::sin(a)});
    }
    pts.insert(pts.end(), {{kTipCentre, w}, {kArmRoot, w}, {0.5, 0.5}, {-0.5, 0.5}});
    return pts;
}

namespace {

double box_distance(const Vec2& x, const Vec2& lo, const Vec2& hi) {
    const double dx = std::max({lo.x - x.x, 0.0, x.x - hi.x});
    const double dy = std::max({lo.y - x.y, 0.0, x.y - hi.y});
    return std::hypot(dx, dy);
}

bool inside_polygon(const std::vector<Vec2>& poly, const Vec2& p) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
    }
    return in;
}

}  // namespace

double distance_to_beam(const Vec2& x) {
    const double square = box_distance(x, {-0.5, -0.5}, {0.5, 0.5});
    const double arm = box_distance(x, {kArmRoot, -kArmHalfWidth}, {kTipCentre, kArmHalfWidth});
    const double tip = std::max(0.0, norm(x - Vec2{kTipCentre, 0.0}) - kArmHalfWidth);
    return std::min({square, arm, tip});
}

double target_size(const Vec2& x, const GeometryOptions& options) {
    const double d = distance_to_beam(x);
    return std::min(options.far_h, options.near_h + options.grading * std::max(0.0, d - 0.5));
}

Mesh generate_mesh(const GeometryOptions& options) {
    if (!(options.near_h > 0.0) || !(options.near_h < options.far_h)) {
        throw ConfigError("beam mesh needs 0 < beam.near_h < beam.far_h");
    }
    if (!(options.grading > 0.0)) throw ConfigError("beam mesh grading must be positive");
    const auto solid = outline(options.n_arc);

    Pslg pslg;
    pslg.points = {{kChannelXMin, kChannelYMin}, {kChannelXMax, kChannelYMin}, {kChannelXMax, kChannelYMax},
                   {kChannelXMin, kChannelYMax}};
    pslg.segments = {{0, 1, BoundaryTag::Dirichlet},
                     {1, 2, BoundaryTag::Neumann},
                     {2, 3, BoundaryTag::Dirichlet},
                     {3, 0, BoundaryTag::Dirichlet}};
    const int base = static_cast<int>(pslg.points.size());
    const int n = static_cast<int>(solid.size());
    pslg.points.insert(pslg.points.end(), solid.begin(), solid.end());
    for (int i = 0; i < n; ++i) pslg.segments.push_back({base + i, base + (i + 1) % n, BoundaryTag::Solid});
    pslg.inside = [solid](const Vec2& p) {
        return p.x > kChannelXMin && p.x < kChannelXMax && p.y > kChannelYMin && p.y < kChannelYMax &&
               !inside_polygon(solid, p);
    };

    RefinementOptions refine;
    refine.size = [options](const Vec2& p) { return target_size(p, options); };
    return refine_pslg(pslg, refine);
}

Vec2 formula_displacement(const Vec2& reference, double t) {
    const double dx = reference.x - kArmRoot;
    if (dx <= 0.0) return {0.0, 0.0};
    const double d = kAmplitude * dx * dx * std::sin(2.0 * std::numbers::pi * t / kPeriod);
    const double theta = std::atan(reference.y / dx);
    return {kScale * (0.25 * d * std::tan(theta) - reference.y * std::sin(theta)), kScale * d};
}

Vec2 beam_map(const Vec2& reference, double t) {
    return reference + formula_displacement(reference, t) - formula_displacement(reference, 0.0);
}

double cutoff(double r) {
    if (r >= kCutoffRadius) return 0.0;
    const double s = std::max(r, 0.0) / kCutoffRadius;
    return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

Vec2 analytic_fluid_map(const Vec2& reference, double t) {
    const double weight = cutoff(distance_to_beam(reference));
    if (weight == 0.0) return reference;
    const Vec2 anchor{std::clamp(reference.x, kArmRoot, kTipCentre + kArmHalfWidth),
                      std::clamp(reference.y, -kArmHalfWidth, kArmHalfWidth)};
    return reference + weight * (beam_map(anchor, t) - anchor);
}

}  // namespace beam

ProblemSpec benchmark_problem() {
    ProblemSpec p;
    p.name = "beam";
    p.eps = 1e-6;
    p.b = [](double, const Vec2&) { return Vec2{1.0, 0.0}; };
    p.div_b = [](double, const Vec2&) { return 0.0; };
    p.c = [](double, const Vec2&) { return 0.0; };
    p.f = [](double, const Vec2&) { return 0.0; };
    p.u0 = [](double, const Vec2&) { return 0.0; };
    p.bc[BoundaryTag::Solid] = BoundaryCondition::dirichlet([](double, const Vec2&) { return 1.0; });
    p.bc[BoundaryTag::Dirichlet] = BoundaryCondition::dirichlet([](double, const Vec2&) { return 0.0; });
    p.bc[BoundaryTag::Neumann] = BoundaryCondition::neumann();
    p.lower_bound = 0.0;
    p.upper_bound = 1.0;
    return p;
}

ManufacturedKind parse_manufactured_kind(std::string_view text) {
    if (text == "moving_square") return ManufacturedKind::MovingSquare;
    throw ConfigError("unknown manufactured case '" + std::string(text) + "'");
}

ManufacturedCase manufactured_case(ManufacturedKind kind, double eps) {
    if (kind != ManufacturedKind::MovingSquare) throw ConfigError("unsupported manufactured case");
    if (!(eps > 0.0)) throw ConfigError("mms.eps must be positive");
    constexpr double pi = std::numbers::pi;
    const Vec2 velocity{1.0, 0.5};
    auto exact = [](double t, const Vec2& x) { return std::sin(pi * x.x) * std::sin(pi * x.y) * std::exp(-t); };

    ManufacturedCase mc;
    ProblemSpec& p = mc.problem;
    p.name = "moving_square";
    p.eps = eps;
    p.b = [velocity](double, const Vec2&) { return velocity; };
    p.div_b = [](double, const Vec2&) { return 0.0; };
    p.c = [](double, const Vec2&) { return 1.0; };
    p.f = [eps, velocity](double t, const Vec2& x) {
        const double e = std::exp(-t);
        const double sx = std::sin(pi * x.x), cx = std::cos(pi * x.x);
        const double sy = std::sin(pi * x.y), cy = std::cos(pi * x.y);
        const double u = sx * sy * e;
        const Vec2 grad{pi * cx * sy * e, pi * sx * cy * e};
        // u_t = -u and c u = u cancel.
        return 2.0 * eps * pi * pi * u + dot(velocity, grad);
    };
    p.u0 = [exact](double, const Vec2& x) { return exact(0.0, x); };
    p.exact = exact;
    const auto dirichlet = BoundaryCondition::dirichlet(exact);
    p.bc[BoundaryTag::Dirichlet] = dirichlet;
    p.bc[BoundaryTag::Solid] = dirichlet;
    p.bc[BoundaryTag::Neumann] = dirichlet;
    p.lower_bound = 0.0;
    p.upper_bound = 1.0;

    mc.motion = [](const Vec2& y, double t) {
        const double s = 0.05 * std::sin(2.0 * pi * t) * std::sin(pi * y.x) * std::sin(pi * y.y);
        return y + Vec2{s, s};
    };
    return mc;
}

}  // namespace alesupg
