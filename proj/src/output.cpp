#include "alesupg/output.hpp"

#include <cmath>
#include <cstdio>

namespace alesupg {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

OutputFile::OutputFile(const std::filesystem::path& path) : path_(path), out_(path) {
    if (!out_) throw IoError("cannot open '" + path.string() + "' for writing");
}

void OutputFile::close() {
    out_.close();
    if (out_.fail()) throw IoError("failed writing '" + path_.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
}

void write_vtk(const std::filesystem::path& path, const FunctionSpace& space, std::span<const double> coeffs,
               std::span<const Vec2> coords, std::span<const Vec2> node_velocity, double t) {
    const Mesh& mesh = space.mesh();
    if (coeffs.size() != static_cast<std::size_t>(space.num_dofs())) throw NumericalError("vtk: coefficient length mismatch");
    const auto points = space.dof_coordinates(coords);
    std::vector<Vec2> velocity(points.size());
    if (!node_velocity.empty()) {
        std::vector<Vec2> nodal(node_velocity.begin(), node_velocity.end());
        velocity = space.degree() == 1 ? nodal : std::vector<Vec2>(points.size());
        if (space.degree() == 2) {
            const int nn = static_cast<int>(mesh.num_nodes());
            for (int i = 0; i < nn; ++i) velocity[i] = nodal[i];
            const auto& edges = space.edges();
            for (std::size_t e = 0; e < edges.size(); ++e) {
                velocity[nn + e] = 0.5 * (nodal[edges[e][0]] + nodal[edges[e][1]]);
            }
        }
    }

    OutputFile file(path);
    auto& out = file.stream();
    out << "# vtk DataFile Version 3.0\n";
    out << "u at t=" << format_double(t) << "\n";
    out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << points.size() << " double\n";
    for (const auto& p : points) out << format_double(p.x) << ' ' << format_double(p.y) << " 0\n";
    const int nl = space.num_local();
    const std::size_t nc = mesh.num_cells();
    out << "CELLS " << nc << ' ' << nc * (nl + 1) << "\n";
    for (std::size_t k = 0; k < nc; ++k) {
        out << nl;
        for (int d : space.cell_dofs(static_cast<int>(k))) out << ' ' << d;
        out << "\n";
    }
    out << "CELL_TYPES " << nc << "\n";
    const char* type = space.degree() == 2 ? "22\n" : "5\n";
    for (std::size_t k = 0; k < nc; ++k) out << type;
    out << "POINT_DATA " << points.size() << "\n";
    out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
    for (double v : coeffs) out << format_double(v) << "\n";
    out << "VECTORS mesh_velocity double\n";
    for (const auto& w : velocity) out << format_double(w.x) << ' ' << format_double(w.y) << " 0\n";
    file.close();
}

StepCsvWriter::StepCsvWriter(const std::filesystem::path& path) : file_(path) {
    file_.stream() << "step,t,u_min,u_max,undershoot,overshoot,l2,supg,alpha1,alpha2,dt_max,energy_slack\n";
}

void StepCsvWriter::write(const StepRecord& r) {
    auto& out = file_.stream();
    out << r.step;
    for (double v : {r.t, r.u_min, r.u_max, r.undershoot, r.overshoot, r.l2, r.supg, r.alpha1, r.alpha2, r.dt_max,
                     r.energy_slack}) {
        out << ',' << format_double(v);
    }
    out << "\n";
}

void write_line_csv(const std::filesystem::path& path, std::span<const LineSample> samples) {
    OutputFile file(path);
    auto& out = file.stream();
    out << "x,y,u,in_domain\n";
    for (const auto& s : samples) {
        out << format_double(s.x) << ',' << format_double(s.y) << ',' << format_double(s.u) << ','
            << (s.in_domain ? 1 : 0) << "\n";
    }
    file.close();
}

}  // namespace alesupg
