#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "alesupg/ale.hpp"
#include "alesupg/function_space.hpp"
#include "alesupg/problem.hpp"
#include "alesupg/solver.hpp"
#include "alesupg/sparse.hpp"
#include "alesupg/stabilization.hpp"

namespace alesupg {

struct AssemblyOptions {
    /// Worker count for the cell loop; 0 picks ALE_SUPG_THREADS or the
    /// hardware concurrency. Results do not depend on this value.
    int threads{0};
};

/// Worker count actually used for `requested` (see AssemblyOptions).
int resolve_thread_count(int requested);

/// Which operators a pass over the cells should build.
struct AssemblyRequest {
    bool mass{false};
    bool supg{false};
    bool mesh_convection{false};
    /// Gram matrix of the mesh-dependent norm |||.|||^2.
    bool norm{false};
    bool rhs{false};
};

/// Operators of one geometry level. Matrices share the space's pattern;
/// members that were not requested stay empty.
struct StepOperators {
    SparseMatrix mass;
    SparseMatrix supg;
    SparseMatrix mesh_convection;
    SparseMatrix norm;
    std::vector<double> rhs;
    /// delta_K per cell.
    std::vector<double> deltas;
    /// int f^2 over the domain and sum_K delta_K int_K f^2.
    double f_l2_sq{0.0};
    double f_delta_sq{0.0};
};

/// One pass over the cells of `level`'s geometry. Coefficients b, c, f are
/// evaluated at time t; delta_K uses the frame's mesh velocity.
StepOperators assemble_operators(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                 const ProblemSpec& problem, const StabilizationConfig& stab, double t,
                                 const AssemblyRequest& request, const AssemblyOptions& options = {});

/// a_SUPG(u, v) = eps (grad u, grad v) + (b . grad u, v) + (c u, v)
///   + sum_K delta_K (-eps Lap u + (b - w) . grad u + c u, (b - w) . grad v)_K
SparseMatrix assemble_supg_form(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                const ProblemSpec& problem, const StabilizationConfig& stab, double t,
                                const AssemblyOptions& options = {});

/// Matrix of -(w . grad u, v) in convective form.
SparseMatrix assemble_mesh_convection(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                      const AssemblyOptions& options = {});

/// Mass matrix on the given node coordinates.
SparseMatrix assemble_mass(const FunctionSpace& space, std::span<const Vec2> coords, const AssemblyOptions& options = {});

/// (f, v) + sum_K delta_K (f, (b - w) . grad v)_K
std::vector<double> assemble_rhs(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                 const ProblemSpec& problem, const StabilizationConfig& stab, double t,
                                 const AssemblyOptions& options = {});

/// delta_K per cell on the given geometry.
std::vector<double> cell_deltas(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                const ProblemSpec& problem, const StabilizationConfig& stab, double t);

/// |||u||| with |||u|||^2 = eps |u|_1^2 + sum_K delta_K ||(b - w) . grad u||_K^2 + mu ||u||^2.
double supg_norm(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level, const ProblemSpec& problem,
                 const StabilizationConfig& stab, double t, std::span<const double> coeffs);

/// Dofs constrained by Dirichlet conditions of the problem, sorted, with the
/// tag that supplies the value. A dof touching several Dirichlet tags takes
/// Solid over Dirichlet over Neumann.
std::vector<std::pair<int, BoundaryTag>> constrained_dofs(const FunctionSpace& space, const ProblemSpec& problem);

/// Dirichlet values of the constrained dofs at time t on the given nodes.
std::vector<double> dirichlet_values(const FunctionSpace& space, const ProblemSpec& problem,
                                     std::span<const std::pair<int, BoundaryTag>> dofs,
                                     std::span<const Vec2> coords, double t);

/// Row replacement: identity rows for the constrained dofs, values injected
/// into the right-hand side.
void apply_dirichlet(SparseMatrix& matrix, std::vector<double>& rhs, std::span<const std::pair<int, BoundaryTag>> dofs,
                     std::span<const double> values);

/// L2 projection of a function on the given coordinates. The nodal
/// interpolant seeds the iterative solve.
std::vector<double> l2_projection(const FunctionSpace& space, std::span<const Vec2> coords,
                                  const std::function<double(const Vec2&)>& fn, const SolverOptions& solver,
                                  const AssemblyOptions& options = {});

}  // namespace alesupg
