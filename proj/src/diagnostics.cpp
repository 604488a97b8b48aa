#include "alesupg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace alesupg {

ExtremaReport extrema_report(std::span<const double> coeffs, double lower, double upper) {
    ExtremaReport r;
    if (coeffs.empty()) return r;
    const auto [lo, hi] = std::minmax_element(coeffs.begin(), coeffs.end());
    r.u_min = *lo;
    r.u_max = *hi;
    r.undershoot = std::max(0.0, lower - r.u_min);
    r.overshoot = std::max(0.0, r.u_max - upper);
    return r;
}

namespace {

// Cell lookup by bounding boxes bucketed along x.
class CellLocator {
public:
    CellLocator(const Mesh& mesh, std::span<const Vec2> coords) : mesh_(mesh), coords_(coords) {
        if (mesh.num_cells() == 0) return;
        lo_ = hi_ = coords[0];
        for (const auto& p : coords) {
            lo_ = {std::min(lo_.x, p.x), std::min(lo_.y, p.y)};
            hi_ = {std::max(hi_.x, p.x), std::max(hi_.y, p.y)};
        }
        nb_ = std::max<int>(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_cells()))));
        buckets_.resize(nb_);
        for (std::size_t k = 0; k < mesh.num_cells(); ++k) {
            const auto& c = mesh.cells()[k];
            double x0 = coords[c[0]].x, x1 = x0;
            for (int v : c) {
                x0 = std::min(x0, coords[v].x);
                x1 = std::max(x1, coords[v].x);
            }
            for (int b = bucket(x0); b <= bucket(x1); ++b) buckets_[b].push_back(static_cast<int>(k));
        }
    }

    const Vec2& lower() const { return lo_; }
    const Vec2& upper() const { return hi_; }

    /// Cell containing p and the reference coordinates of p, or -1.
    int find(const Vec2& p, Vec2& xi) const {
        if (buckets_.empty() || p.x < lo_.x || p.x > hi_.x || p.y < lo_.y || p.y > hi_.y) return -1;
        const double tol = 1e-12;
        for (int k : buckets_[bucket(p.x)]) {
            const auto& c = mesh_.cells()[k];
            const Vec2& a = coords_[c[0]];
            const Vec2& b = coords_[c[1]];
            const Vec2& d = coords_[c[2]];
            const double area2 = cross(b - a, d - a);
            const double l1 = cross(p - a, d - a) / area2;
            const double l2 = cross(b - a, p - a) / area2;
            const double l0 = 1.0 - l1 - l2;
            if (l0 >= -tol && l1 >= -tol && l2 >= -tol) {
                xi = {l1, l2};
                return k;
            }
        }
        return -1;
    }

private:
    int bucket(double x) const {
        const double w = (hi_.x - lo_.x) / nb_;
        if (w <= 0.0) return 0;
        return std::clamp(static_cast<int>((x - lo_.x) / w), 0, nb_ - 1);
    }

    const Mesh& mesh_;
    std::span<const Vec2> coords_;
    Vec2 lo_;
    Vec2 hi_;
    int nb_{1};
    std::vector<std::vector<int>> buckets_;
};

std::vector<LineSample> sample(const FunctionSpace& space, std::span<const double> coeffs, const CellLocator& locator,
                               double y0, double x_min, double x_max, int n_points) {
    std::vector<LineSample> out;
    if (n_points < 1 || space.mesh().num_cells() == 0) return out;
    if (y0 < locator.lower().y || y0 > locator.upper().y) return out;
    out.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double x = n_points == 1 ? x_min : x_min + (x_max - x_min) * i / (n_points - 1);
        LineSample s{x, y0, std::numeric_limits<double>::quiet_NaN(), false};
        Vec2 xi;
        const int cell = locator.find({x, y0}, xi);
        if (cell >= 0) {
            s.u = evaluate_in_cell(space, coeffs, cell, xi);
            s.in_domain = true;
        }
        out.push_back(s);
    }
    return out;
}

}  // namespace

std::vector<LineSample> line_sample(const FunctionSpace& space, std::span<const double> coeffs,
                                    std::span<const Vec2> coords, double y0, double x_min, double x_max, int n_points) {
    const CellLocator locator(space.mesh(), coords);
    return sample(space, coeffs, locator, y0, x_min, x_max, n_points);
}

std::vector<LineSample> line_sample(const FunctionSpace& space, std::span<const double> coeffs,
                                    std::span<const Vec2> coords, double y0, int n_points) {
    const CellLocator locator(space.mesh(), coords);
    return sample(space, coeffs, locator, y0, locator.lower().x, locator.upper().x, n_points);
}

double l2_error(const FunctionSpace& space, std::span<const double> coeffs, std::span<const Vec2> coords,
                const ScalarField& exact, double t) {
    const auto& quad = quadrature_degree5();
    const ShapeTable shapes = shape_values(space.degree(), quad);
    double sum = 0.0;
    for (std::size_t k = 0; k < space.mesh().num_cells(); ++k) {
        const auto& c = space.mesh().cells()[k];
        const Vec2& a = coords[c[0]];
        const Vec2& b = coords[c[1]];
        const Vec2& d = coords[c[2]];
        const double area = signed_area(a, b, d);
        const auto dofs = space.cell_dofs(static_cast<int>(k));
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto& l = quad.points[q];
            double uh = 0.0;
            for (int i = 0; i < shapes.num_local; ++i) uh += coeffs[dofs[i]] * shapes.values[q][i];
            const double e = uh - exact(t, a * l[0] + b * l[1] + d * l[2]);
            sum += area * quad.weights[q] * e * e;
        }
    }
    return std::sqrt(sum);
}

namespace {

std::vector<double> combine(std::span<const double> x, double a, std::span<const double> y, double b) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
}

double sq(const SparseMatrix& m, std::span<const double> u) { return bilinear(m, u, u); }

}  // namespace

EnergyCheck energy_inequality_residual(Scheme scheme, std::span<const double> u_before_prev,
                                       std::span<const double> u_before, std::span<const double> u_after,
                                       const FunctionSpace& space, const AleFrame& frame, double t_next,
                                       const ProblemSpec& problem, const StabilizationConfig& stab,
                                       const AssemblyOptions& options) {
    const double dt = frame.dt();
    const auto report = stability_report(frame);
    if (scheme == Scheme::Bdf2 && u_before_prev.size() != u_before.size()) scheme = Scheme::CrankNicolson;

    EnergyCheck out;
    auto source_terms = [&](double f_l2_sq, double f_delta_sq, double mu_factor) {
        if (f_l2_sq == 0.0) return 0.0;
        if (!(stab.mu > 0.0)) {
            out.evaluated = false;
            return 0.0;
        }
        return mu_factor * dt / stab.mu * f_l2_sq + 2.0 * dt * f_delta_sq;
    };

    AssemblyRequest req;
    req.norm = req.rhs = true;
    if (scheme == Scheme::CrankNicolson) {
        const double t_mid = t_next - 0.5 * dt;
        const auto mid = assemble_operators(space, frame, GeometryLevel::Mid, problem, stab, t_mid, req, options);
        const auto mass_curr = assemble_mass(space, frame.coords_curr(), options);
        const auto mass_prev = assemble_mass(space, frame.coords_prev(), options);
        const auto sum = combine(u_after, 1.0, u_before, 1.0);
        out.lhs = sq(mass_curr, u_after) + 0.25 * dt * sq(mid.norm, sum);
        out.rhs = dt * report.beta1 * sq(mass_curr, u_after) + (1.0 + dt * report.beta2) * sq(mass_prev, u_before) +
                  source_terms(mid.f_l2_sq, mid.f_delta_sq, 1.0);
    } else {
        req.mass = true;
        const auto curr = assemble_operators(space, frame, GeometryLevel::Curr, problem, stab, t_next, req, options);
        const double u1 = sq(curr.mass, u_after);
        if (scheme == Scheme::Euler) {
            const auto mass_prev = assemble_mass(space, frame.coords_prev(), options);
            out.lhs = u1 + 0.5 * dt * sq(curr.norm, u_after);
            out.rhs = dt * report.alpha1 * u1 + (1.0 + dt * report.alpha2) * sq(mass_prev, u_before) +
                      source_terms(curr.f_l2_sq, curr.f_delta_sq, 2.0);
        } else {
            const auto two_a_minus_b = combine(u_after, 2.0, u_before, -1.0);
            std::vector<double> second(u_after.size());
            for (std::size_t i = 0; i < second.size(); ++i) {
                second[i] = u_after[i] - 2.0 * u_before[i] + u_before_prev[i];
            }
            const auto two_b_minus_c = combine(u_before, 2.0, u_before_prev, -1.0);
            out.lhs = 0.25 * (u1 + sq(curr.mass, two_a_minus_b) + sq(curr.mass, second)) + 0.25 * dt * sq(curr.norm, u_after);
            // Old-level norms transported to the new geometry (exact for fixed coefficients).
            out.rhs = 0.25 * (sq(curr.mass, u_before) + sq(curr.mass, two_b_minus_c)) + 0.5 * dt * report.alpha1 * u1 +
                      source_terms(curr.f_l2_sq, curr.f_delta_sq, 2.0);
        }
    }
    out.slack = out.evaluated ? out.rhs - out.lhs : std::numeric_limits<double>::quiet_NaN();
    return out;
}

StepRecord record_step(const StepEvent& event, Scheme scheme, const FunctionSpace& space, const ProblemSpec& problem,
                       const StabilizationConfig& stab, const AssemblyOptions& options) {
    StepRecord r;
    r.step = event.step;
    r.t = event.t;
    const auto ext = extrema_report(event.u_after, problem.lower_bound, problem.upper_bound);
    r.u_min = ext.u_min;
    r.u_max = ext.u_max;
    r.undershoot = ext.undershoot;
    r.overshoot = ext.overshoot;
    AssemblyRequest req;
    req.mass = req.norm = true;
    const auto ops =
        assemble_operators(space, *event.frame, GeometryLevel::Curr, problem, stab, event.t, req, options);
    r.l2 = std::sqrt(std::max(0.0, sq(ops.mass, event.u_after)));
    r.supg = std::sqrt(std::max(0.0, sq(ops.norm, event.u_after)));
    r.alpha1 = event.report->alpha1;
    r.alpha2 = event.report->alpha2;
    r.dt_max = event.dt_max;
    r.energy_slack = energy_inequality_residual(scheme, event.u_before_prev, event.u_before, event.u_after, space,
                                                *event.frame, event.t, problem, stab, options)
                         .slack;
    return r;
}

}  // namespace alesupg
