#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "alesupg/diagnostics.hpp"
#include "alesupg/function_space.hpp"

namespace alesupg {

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// Output file opened for writing; throws IoError when the path cannot be
/// opened and from close() when buffered data cannot be flushed.
class OutputFile {
public:
    explicit OutputFile(const std::filesystem::path& path);
    std::ofstream& stream() { return out_; }
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

/// Creates the directory (and parents); throws IoError on failure.
void ensure_directory(const std::filesystem::path& dir);

/// Legacy ASCII VTK unstructured grid of the field on the given node
/// coordinates. P2 fields are written as quadratic triangles over all dofs.
/// `node_velocity` is the P1 mesh velocity per mesh node (empty for zero).
void write_vtk(const std::filesystem::path& path, const FunctionSpace& space, std::span<const double> coeffs,
               std::span<const Vec2> coords, std::span<const Vec2> node_velocity, double t);

class StepCsvWriter {
public:
    explicit StepCsvWriter(const std::filesystem::path& path);
    void write(const StepRecord& record);
    void close() { file_.close(); }

private:
    OutputFile file_;
};

void write_line_csv(const std::filesystem::path& path, std::span<const LineSample> samples);

}  // namespace alesupg
