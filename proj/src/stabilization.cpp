#include "alesupg/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alesupg/basis.hpp"

namespace alesupg {

void StabilizationConfig::validate() const {
    if (!(delta0 >= 0.0)) throw ConfigError("stab.delta0 must be >= 0");
    if (!(mu >= 0.0)) throw ConfigError("coercivity constant mu must be >= 0");
    if (!(c_inv > 0.0)) throw ConfigError("stab.c_inv must be > 0");
}

double default_c_inv(int degree) { return degree == 1 ? 8.0 : 20.0; }

CoercivityReport check_coercivity_assumption(const ProblemSpec& problem, const Mesh& mesh,
                                             std::span<const Vec2> coords, double t) {
    const auto& quad = quadrature_degree5();
    double mu = std::numeric_limits<double>::infinity();
    for (const auto& cell : mesh.cells()) {
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto& l = quad.points[q];
            const Vec2 x = coords[cell[0]] * l[0] + coords[cell[1]] * l[1] + coords[cell[2]] * l[2];
            mu = std::min(mu, problem.c(t, x) - 0.5 * problem.div_b(t, x));
        }
    }
    if (mesh.num_cells() == 0) mu = 0.0;
    return {mu, !(mu > 0.0)};
}

double delta_K(double h, double conv_norm, double c_norm, double eps, double dt, const StabilizationConfig& config) {
    if (!(h > 0.0)) throw NumericalError("delta_K: cell size must be positive");
    if (!(eps > 0.0)) throw NumericalError("delta_K: eps must be positive");
    if (!(dt > 0.0)) throw NumericalError("delta_K: dt must be positive");
    double delta = conv_norm < 1e-12 ? 0.0 : config.delta0 * h / (2.0 * conv_norm);
    if (c_norm >= 1e-12) delta = std::min(delta, config.mu / (2.0 * c_norm * c_norm));
    delta = std::min(delta, h * h / (2.0 * eps * config.c_inv * config.c_inv));
    if (config.dt_cap_enabled) delta = std::min(delta, dt / 4.0);
    return std::max(delta, 0.0);
}

}  // namespace alesupg
