#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "alesupg/config.hpp"
#include "alesupg/diagnostics.hpp"
#include "alesupg/motion.hpp"
#include "alesupg/problem.hpp"
#include "alesupg/stabilization.hpp"

namespace alesupg {

struct CaseSetup {
    std::shared_ptr<const Mesh> mesh;
    ProblemSpec problem;
    /// Beam: map of the solid boundary. Moving square: map of every node.
    PointMap map;
};

/// Builds the mesh (generated or read from config.mesh) and the problem.
CaseSetup build_case(const RunConfig& config);

std::unique_ptr<MeshMotion> make_motion(const RunConfig& config, const CaseSetup& setup);

/// Precomputes the mesh coordinates of every step of [0, T].
std::shared_ptr<const Trajectory> record_trajectory(const RunConfig& config, const CaseSetup& setup);

/// delta0, c_inv (default per degree), the dt cap and mu (coercivity check
/// at t = 0 unless overridden). Coercivity warnings go to `log`.
StabilizationConfig make_stabilization(const RunConfig& config, const CaseSetup& setup, std::ostream* log);

RunSettings make_run_settings(const RunConfig& config);

struct RunSummary {
    int steps{0};
    int dofs{0};
    int cells{0};
    double mu{0.0};
    double final_u_min{0.0};
    double final_u_max{0.0};
    double final_undershoot{0.0};
    double final_overshoot{0.0};
    double max_undershoot{0.0};
    double max_overshoot{0.0};
    /// Final-time L2 error against the exact solution; NaN without one.
    double l2_error{0.0};
    double min_energy_slack{0.0};
    int dt_warnings{0};
    double wall_seconds{0.0};
    std::vector<StepRecord> records;
    std::vector<double> final_coefficients;
};

struct RunHooks {
    /// Replayed instead of computing the mesh motion when set.
    std::shared_ptr<const Trajectory> trajectory;
    bool write_outputs{true};
    std::ostream* log{nullptr};
};

/// One full run. With write_outputs: resolved config, step CSV, field
/// snapshots, final line sample and summary.json under config.output_dir.
RunSummary execute_run(const RunConfig& config, const RunHooks& hooks = {});

struct SweepRow {
    double delta0{0.0};
    Scheme scheme{Scheme::Euler};
    double max_undershoot{0.0};
    double max_overshoot{0.0};
    double final_undershoot{0.0};
    double final_overshoot{0.0};
};

/// One run per (delta0, scheme) pair in output_dir/delta<d>_<scheme>, table in
/// output_dir/sweep.csv. With parallel_runs > 1 the runs are child processes
/// of `executable` (at most parallel_runs at a time).
std::vector<SweepRow> sweep_delta(const RunConfig& config, const std::vector<double>& deltas,
                                  const std::vector<Scheme>& schemes, int parallel_runs,
                                  const std::filesystem::path& executable, std::ostream* log);

enum class StudyKind { Time, Space };

StudyKind parse_study_kind(std::string_view text);

struct ConvergenceRow {
    int level{0};
    double dt{0.0};
    int n{0};
    double error{0.0};
    /// log2 of the error ratio to the previous level; NaN on the first.
    double order{0.0};
    /// Time study: L2 norm of the change from the previous level.
    double difference{0.0};
    double difference_order{0.0};
};

/// Refinement study on the moving-square case. Time: dt halved per level on
/// a fixed mesh. Space: mms.n doubled per level at fixed dt. Writes
/// output_dir/convergence.csv when write_outputs.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config, StudyKind kind, int levels, bool write_outputs,
                                              std::ostream* log);

/// Mesh statistics and audit result as text.
void describe_mesh(const RunConfig& config, std::ostream& out);

}  // namespace alesupg
