#include "alesupg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

namespace alesupg {

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("ALE_SUPG_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap > 0) return std::min(cap, hw);
        } catch (const std::exception&) {
            throw ConfigError(std::string("ALE_SUPG_THREADS is not an integer: ") + env);
        }
    }
    return hw;
}

namespace {

constexpr int kBlock = kMaxLocalDofs * kMaxLocalDofs;
constexpr std::size_t kChunkCells = 4096;

struct CellBlock {
    std::array<double, kBlock> mass;
    std::array<double, kBlock> supg;
    std::array<double, kBlock> conv;
    std::array<double, kBlock> norm;
    std::array<double, kMaxLocalDofs> rhs;
    double delta;
    double f_l2;
    double f_delta;
};

struct KernelInput {
    const FunctionSpace* space;
    std::span<const Vec2> coords;
    std::span<const Vec2> velocity;  // empty means zero
    const ProblemSpec* problem;      // may be null when only mass/convection are requested
    const StabilizationConfig* stab;
    double t;
    double dt;
    AssemblyRequest request;
    const ShapeTable* shapes;
};

double longest_edge(const Vec2& a, const Vec2& b, const Vec2& c) {
    return std::max({norm(b - a), norm(c - b), norm(a - c)});
}

void cell_kernel(const KernelInput& in, int k, CellBlock& out) {
    const auto& quad = quadrature_degree5();
    const auto& shapes = *in.shapes;
    const int nl = shapes.num_local;
    const auto& cell = in.space->mesh().cells()[k];
    const Vec2& xa = in.coords[cell[0]];
    const Vec2& xb = in.coords[cell[1]];
    const Vec2& xc = in.coords[cell[2]];
    const double area = signed_area(xa, xb, xc);
    if (!(area > 0.0)) throw MeshError("assembly: cell " + std::to_string(k) + " is inverted or degenerate");
    const AffineMap map = reference_map(xa, xb, xc);
    const auto& req = in.request;
    const bool need_data = req.supg || req.norm || req.rhs;

    std::array<Vec2, 3> wv{};
    if (!in.velocity.empty()) wv = {in.velocity[cell[0]], in.velocity[cell[1]], in.velocity[cell[2]]};

    const std::size_t nq = quad.size();
    std::array<std::array<Vec2, kMaxLocalDofs>, 7> grads{};
    std::array<Vec2, 7> w{};
    std::array<Vec2, 7> b{};
    std::array<double, 7> c{};
    std::array<double, 7> f{};
    double conv_norm = 0.0;
    double c_norm = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
        const auto& l = quad.points[q];
        for (int i = 0; i < nl; ++i) grads[q][i] = map.physical_gradient(shapes.ref_grads[q][i]);
        w[q] = wv[0] * l[0] + wv[1] * l[1] + wv[2] * l[2];
        if (need_data) {
            const Vec2 x = xa * l[0] + xb * l[1] + xc * l[2];
            b[q] = in.problem->b(in.t, x);
            c[q] = in.problem->c(in.t, x);
            if (req.rhs) f[q] = in.problem->f(in.t, x);
            conv_norm = std::max(conv_norm, norm(b[q] - w[q]));
            c_norm = std::max(c_norm, std::abs(c[q]));
        }
    }

    double delta = 0.0;
    if (need_data) {
        delta = delta_K(longest_edge(xa, xb, xc), conv_norm, c_norm, in.problem->eps, in.dt, *in.stab);
    }
    out.delta = delta;
    std::array<double, kMaxLocalDofs> lap{};
    if (req.supg && shapes.degree == 2) lap = basis_laplacians(2, barycentric_gradients(xa, xb, xc));

    out.mass.fill(0.0);
    out.supg.fill(0.0);
    out.conv.fill(0.0);
    out.norm.fill(0.0);
    out.rhs.fill(0.0);
    out.f_l2 = 0.0;
    out.f_delta = 0.0;
    const double eps = need_data ? in.problem->eps : 0.0;
    const double mu = in.stab ? in.stab->mu : 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
        const double jw = area * quad.weights[q];
        const auto& phi = shapes.values[q];
        const auto& g = grads[q];
        const Vec2 bw = b[q] - w[q];
        std::array<double, kMaxLocalDofs> stream{};  // (b - w) . grad phi_i
        for (int i = 0; i < nl; ++i) stream[i] = dot(bw, g[i]);
        if (req.mass) {
            for (int i = 0; i < nl; ++i) {
                const double wi = jw * phi[i];
                for (int j = 0; j < nl; ++j) out.mass[i * nl + j] += wi * phi[j];
            }
        }
        if (req.mesh_convection) {
            std::array<double, kMaxLocalDofs> wgrad{};
            for (int j = 0; j < nl; ++j) wgrad[j] = jw * dot(w[q], g[j]);
            for (int i = 0; i < nl; ++i) {
                for (int j = 0; j < nl; ++j) out.conv[i * nl + j] -= wgrad[j] * phi[i];
            }
        }
        if (req.supg) {
            std::array<double, kMaxLocalDofs> bgrad{}, residual{};
            for (int j = 0; j < nl; ++j) {
                bgrad[j] = dot(b[q], g[j]);
                residual[j] = -eps * lap[j] + stream[j] + c[q] * phi[j];
            }
            for (int i = 0; i < nl; ++i) {
                const double ds = delta * stream[i];
                for (int j = 0; j < nl; ++j) {
                    const double galerkin = eps * dot(g[j], g[i]) + bgrad[j] * phi[i] + c[q] * phi[j] * phi[i];
                    out.supg[i * nl + j] += jw * (galerkin + ds * residual[j]);
                }
            }
        }
        if (req.norm) {
            for (int i = 0; i < nl; ++i) {
                const double ds = delta * stream[i];
                const double mi = mu * phi[i];
                for (int j = 0; j < nl; ++j) {
                    out.norm[i * nl + j] += jw * (eps * dot(g[i], g[j]) + ds * stream[j] + mi * phi[j]);
                }
            }
        }
        if (req.rhs) {
            for (int i = 0; i < nl; ++i) out.rhs[i] += jw * f[q] * (phi[i] + delta * stream[i]);
        }
        if (req.rhs) {
            out.f_l2 += jw * f[q] * f[q];
            out.f_delta += jw * delta * f[q] * f[q];
        }
    }
}

void init_matrix(SparseMatrix& m, bool wanted, const FunctionSpace& space) {
    if (wanted) m = SparseMatrix(space.pattern());
}

StepOperators run_assembly(const KernelInput& in, const AssemblyOptions& options) {
    const FunctionSpace& space = *in.space;
    const int nc = static_cast<int>(space.mesh().num_cells());
    const int nl = space.num_local();
    StepOperators ops;
    init_matrix(ops.mass, in.request.mass, space);
    init_matrix(ops.supg, in.request.supg, space);
    init_matrix(ops.mesh_convection, in.request.mesh_convection, space);
    init_matrix(ops.norm, in.request.norm, space);
    if (in.request.rhs) ops.rhs.assign(space.num_dofs(), 0.0);
    ops.deltas.assign(nc, 0.0);

    const int workers = resolve_thread_count(options.threads);
    std::vector<CellBlock> blocks(std::min<std::size_t>(kChunkCells, static_cast<std::size_t>(nc)));
    auto add_block = [nl](SparseMatrix& m, std::span<const int> pos, const std::array<double, kBlock>& v) {
        auto& vals = m.values();
        for (int ij = 0; ij < nl * nl; ++ij) vals[pos[ij]] += v[ij];
    };

    for (int start = 0; start < nc; start += static_cast<int>(kChunkCells)) {
        const int count = std::min(static_cast<int>(kChunkCells), nc - start);
        const int used = std::max(1, std::min(workers, count / 64));
        if (used == 1) {
            for (int k = 0; k < count; ++k) cell_kernel(in, start + k, blocks[k]);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(used);
            for (int wkr = 0; wkr < used; ++wkr) {
                pool.emplace_back([&, wkr] {
                    try {
                        for (int k = wkr; k < count; k += used) cell_kernel(in, start + k, blocks[k]);
                    } catch (...) {
                        errors[wkr] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
        }
        // Scatter strictly in cell order so sums do not depend on the worker count.
        for (int k = 0; k < count; ++k) {
            const int cell = start + k;
            const auto& blk = blocks[k];
            const auto pos = space.cell_csr_positions(cell);
            if (in.request.mass) add_block(ops.mass, pos, blk.mass);
            if (in.request.supg) add_block(ops.supg, pos, blk.supg);
            if (in.request.mesh_convection) add_block(ops.mesh_convection, pos, blk.conv);
            if (in.request.norm) add_block(ops.norm, pos, blk.norm);
            if (in.request.rhs) {
                const auto dofs = space.cell_dofs(cell);
                for (int i = 0; i < nl; ++i) ops.rhs[dofs[i]] += blk.rhs[i];
                ops.f_l2_sq += blk.f_l2;
                ops.f_delta_sq += blk.f_delta;
            }
            ops.deltas[cell] = blk.delta;
        }
    }
    return ops;
}

}  // namespace

StepOperators assemble_operators(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                 const ProblemSpec& problem, const StabilizationConfig& stab, double t,
                                 const AssemblyRequest& request, const AssemblyOptions& options) {
    if (frame.mesh().num_cells() != space.mesh().num_cells() || frame.mesh().num_nodes() != space.mesh().num_nodes()) {
        throw MeshError("assembly: frame and function space use different meshes");
    }
    const ShapeTable shapes = shape_values(space.degree(), quadrature_degree5());
    const KernelInput in{&space, frame.coords(level), frame.convective_velocity(), &problem, &stab, t, frame.dt(), request, &shapes};
    return run_assembly(in, options);
}

SparseMatrix assemble_supg_form(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                const ProblemSpec& problem, const StabilizationConfig& stab, double t,
                                const AssemblyOptions& options) {
    AssemblyRequest req;
    req.supg = true;
    return std::move(assemble_operators(space, frame, level, problem, stab, t, req, options).supg);
}

SparseMatrix assemble_mesh_convection(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                      const AssemblyOptions& options) {
    const ShapeTable shapes = shape_values(space.degree(), quadrature_degree5());
    AssemblyRequest req;
    req.mesh_convection = true;
    const KernelInput in{&space, frame.coords(level), frame.convective_velocity(), nullptr, nullptr, 0.0, frame.dt(), req, &shapes};
    return std::move(run_assembly(in, options).mesh_convection);
}

SparseMatrix assemble_mass(const FunctionSpace& space, std::span<const Vec2> coords, const AssemblyOptions& options) {
    if (coords.size() != space.mesh().num_nodes()) throw NumericalError("assemble_mass: coordinate count mismatch");
    const ShapeTable shapes = shape_values(space.degree(), quadrature_degree5());
    AssemblyRequest req;
    req.mass = true;
    const KernelInput in{&space, coords, {}, nullptr, nullptr, 0.0, 1.0, req, &shapes};
    return std::move(run_assembly(in, options).mass);
}

std::vector<double> assemble_rhs(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                 const ProblemSpec& problem, const StabilizationConfig& stab, double t,
                                 const AssemblyOptions& options) {
    AssemblyRequest req;
    req.rhs = true;
    return std::move(assemble_operators(space, frame, level, problem, stab, t, req, options).rhs);
}

std::vector<double> cell_deltas(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level,
                                const ProblemSpec& problem, const StabilizationConfig& stab, double t) {
    AssemblyRequest req;
    req.rhs = true;
    return std::move(assemble_operators(space, frame, level, problem, stab, t, req).deltas);
}

double supg_norm(const FunctionSpace& space, const AleFrame& frame, GeometryLevel level, const ProblemSpec& problem,
                 const StabilizationConfig& stab, double t, std::span<const double> coeffs) {
    AssemblyRequest req;
    req.norm = true;
    const auto ops = assemble_operators(space, frame, level, problem, stab, t, req);
    return std::sqrt(std::max(0.0, bilinear(ops.norm, coeffs, coeffs)));
}

std::vector<std::pair<int, BoundaryTag>> constrained_dofs(const FunctionSpace& space, const ProblemSpec& problem) {
    auto rank = [](BoundaryTag tag) {
        switch (tag) {
            case BoundaryTag::Solid: return 0;
            case BoundaryTag::Dirichlet: return 1;
            case BoundaryTag::Neumann: return 2;
        }
        return 3;
    };
    const int nn = static_cast<int>(space.mesh().num_nodes());
    std::vector<int> best(space.num_dofs(), -1);
    auto mark = [&](int dof, BoundaryTag tag) {
        if (best[dof] < 0 || rank(tag) < rank(static_cast<BoundaryTag>(best[dof]))) best[dof] = static_cast<int>(tag);
    };
    const auto& edges = space.edges();
    for (const auto& be : space.mesh().boundary_edges()) {
        if (problem.condition(be.tag).kind != BoundaryCondition::Kind::Dirichlet) continue;
        mark(be.nodes[0], be.tag);
        mark(be.nodes[1], be.tag);
        if (space.degree() == 2) {
            const std::array<int, 2> key{std::min(be.nodes[0], be.nodes[1]), std::max(be.nodes[0], be.nodes[1])};
            const auto it = std::lower_bound(edges.begin(), edges.end(), key);
            if (it == edges.end() || *it != key) throw MeshError("boundary edge missing from function space");
            mark(nn + static_cast<int>(it - edges.begin()), be.tag);
        }
    }
    std::vector<std::pair<int, BoundaryTag>> out;
    for (int i = 0; i < space.num_dofs(); ++i) {
        if (best[i] >= 0) out.emplace_back(i, static_cast<BoundaryTag>(best[i]));
    }
    return out;
}

std::vector<double> dirichlet_values(const FunctionSpace& space, const ProblemSpec& problem,
                                     std::span<const std::pair<int, BoundaryTag>> dofs,
                                     std::span<const Vec2> coords, double t) {
    const auto pts = space.dof_coordinates(coords);
    std::vector<double> values(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        values[i] = problem.condition(dofs[i].second).value(t, pts[dofs[i].first]);
    }
    return values;
}

void apply_dirichlet(SparseMatrix& matrix, std::vector<double>& rhs, std::span<const std::pair<int, BoundaryTag>> dofs,
                     std::span<const double> values) {
    if (values.size() != dofs.size()) throw NumericalError("apply_dirichlet: value count mismatch");
    for (std::size_t i = 0; i < dofs.size(); ++i) {
        matrix.set_identity_row(dofs[i].first);
        rhs[dofs[i].first] = values[i];
    }
}

std::vector<double> l2_projection(const FunctionSpace& space, std::span<const Vec2> coords,
                                  const std::function<double(const Vec2&)>& fn, const SolverOptions& solver,
                                  const AssemblyOptions& options) {
    const auto mass = assemble_mass(space, coords, options);
    const auto& quad = quadrature_degree5();
    const ShapeTable shapes = shape_values(space.degree(), quad);
    std::vector<double> load(space.num_dofs(), 0.0);
    for (std::size_t k = 0; k < space.mesh().num_cells(); ++k) {
        const auto& cell = space.mesh().cells()[k];
        const Vec2& a = coords[cell[0]];
        const Vec2& b = coords[cell[1]];
        const Vec2& c = coords[cell[2]];
        const double area = signed_area(a, b, c);
        const auto dofs = space.cell_dofs(static_cast<int>(k));
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const auto& l = quad.points[q];
            const double v = area * quad.weights[q] * fn(a * l[0] + b * l[1] + c * l[2]);
            for (int i = 0; i < shapes.num_local; ++i) load[dofs[i]] += v * shapes.values[q][i];
        }
    }
    const auto guess = space.interpolate(fn, coords);
    return solve(mass, load, solver, guess).x;
}

}  // namespace alesupg
