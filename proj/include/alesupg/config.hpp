#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "alesupg/solver.hpp"
#include "alesupg/timestepping.hpp"

namespace alesupg {

enum class CaseId { Beam, MovingSquare };
enum class BeamMotionMode { Elastic, Analytic };

CaseId parse_case_id(std::string_view text);
std::string_view to_string(CaseId id);
BeamMotionMode parse_beam_motion(std::string_view text);
std::string_view to_string(BeamMotionMode mode);

/// Fully resolved run configuration. Every field has a config key; see
/// config_keys() for the list and resolved_settings() for the text form.
struct RunConfig {
    CaseId case_id{CaseId::Beam};
    /// "generated" or a mesh file path.
    std::string mesh{"generated"};

    int degree{2};
    InitialDatum initial{InitialDatum::Projection};

    Scheme scheme{Scheme::Euler};
    double dt{0.01};
    double final_time{2.5};
    /// Field snapshot every this many steps; 0 writes only the fixed snapshot times.
    int output_every{0};
    CnMass cn_mass{CnMass::Mid};
    Bdf2Velocity bdf2_velocity{Bdf2Velocity::ThreeLevel};

    double delta0{5.0};
    std::optional<double> c_inv;
    bool dt_cap{true};
    std::optional<double> mu_override;

    SolverMethod solver_method{SolverMethod::Gmres};
    double solver_tol{1e-10};
    int solver_max_iter{2000};
    int threads{0};

    double beam_near_h{0.04};
    double beam_far_h{0.8};
    int beam_n_arc{12};
    BeamMotionMode beam_motion{BeamMotionMode::Elastic};
    bool beam_stiffen{true};

    double mms_eps{1.0};
    int mms_n{32};

    std::string output_dir{"out"};
    std::vector<double> snapshot_times{0.05, 3.9, 6.2, 10.0};
    double line_y{0.0};
    int line_points{2001};

    /// Throws ConfigError on an inconsistent configuration.
    void validate() const;
};

const std::vector<std::string>& config_keys();

/// Sets one key from its text value; throws ConfigError for unknown keys or
/// malformed values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" lines, '#' starts a comment.
void apply_config_text(RunConfig& config, std::istream& in, const std::string& source = "<config>");
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Every key with its value in a form apply_setting accepts back.
std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& config);
void write_config(std::ostream& out, const RunConfig& config);

}  // namespace alesupg
