#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "alesupg/mesh.hpp"
#include "alesupg/motion.hpp"
#include "alesupg/problem.hpp"

namespace alesupg {

// Oscillating-beam benchmark: channel (-5, 18) x (-5, 5) around a beam made
// of the square (-0.5, 0.5)^2 and the arm (0.5, 4.5) x (-0.03, 0.03) with a
// semicircular tip of radius 0.03 centred at (4.5, 0).
namespace beam {

inline constexpr double kChannelXMin = -5.0;
inline constexpr double kChannelXMax = 18.0;
inline constexpr double kChannelYMin = -5.0;
inline constexpr double kChannelYMax = 5.0;
inline constexpr double kArmHalfWidth = 0.03;
inline constexpr double kArmRoot = 0.5;
inline constexpr double kTipCentre = 4.5;
inline constexpr double kPeriod = 5.0;
inline constexpr double kAmplitude = 0.75;
inline constexpr double kScale = 0.05;
/// Radius of the smooth cutoff of the all-analytic motion.
inline constexpr double kCutoffRadius = 1.5;

struct GeometryOptions {
    double near_h{0.04};
    double far_h{0.8};
    int n_arc{12};
    /// Growth of the target size per unit distance beyond 0.5 from the beam.
    double grading{0.3};
};

/// Closed beam outline, counterclockwise, tip polygonised with n_arc segments.
std::vector<Vec2> outline(int n_arc);

/// Distance from x to the beam with its exact circular tip (0 inside).
double distance_to_beam(const Vec2& x);

/// Target cell size at x.
double target_size(const Vec2& x, const GeometryOptions& options);

/// Throws ConfigError for n_arc < 3 or near_h >= far_h.
Mesh generate_mesh(const GeometryOptions& options = {});

/// Displacement given literally by the published formulas:
///   d = 0.75 (Y1 - 0.5)^2 sin(2 pi t / 5), theta = atan(Y2 / (Y1 - 0.5)),
///   (0.05 (0.25 d tan(theta) - Y2 sin(theta)), 0.05 d),
/// zero for Y1 <= 0.5.
Vec2 formula_displacement(const Vec2& reference, double t);

/// Beam motion: the formula displacement minus its value at t = 0, so the
/// map is the identity whenever sin(2 pi t / 5) = 0.
Vec2 beam_map(const Vec2& reference, double t);

/// Smooth cutoff 1 - 3 s^2 + 2 s^3 with s = r / 1.5, zero for r >= 1.5.
double cutoff(double r);

/// All-analytic fluid motion: the beam motion of the nearest point of the
/// arm's bounding strip, damped by the cutoff of the distance to the beam.
Vec2 analytic_fluid_map(const Vec2& reference, double t);

}  // namespace beam

/// eps = 1e-6, b = (1, 0), c = f = 0, u0 = 0; u = 1 on the beam, 0 on the
/// other walls, homogeneous Neumann at the outflow.
ProblemSpec benchmark_problem();

enum class ManufacturedKind { MovingSquare };

ManufacturedKind parse_manufactured_kind(std::string_view text);

struct ManufacturedCase {
    ProblemSpec problem;
    PointMap motion;
};

/// Unit square moving by x = Y + 0.05 sin(2 pi t) sin(pi Y1) sin(pi Y2) (1, 1)
/// with exact solution u = sin(pi x1) sin(pi x2) exp(-t), b = (1, 0.5),
/// c = 1 and the matching source. Dirichlet data from the exact solution.
ManufacturedCase manufactured_case(ManufacturedKind kind, double eps);

}  // namespace alesupg
