#include "lsr/io.hpp"

#include <cstdio>
#include <fstream>

namespace lsr {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_field_vtk(const ScalarField& field, const std::string& path,
                     const std::string& array_name) {
    std::ofstream out(path);
    if (!out) throw Error("write_field_vtk: cannot write '" + path + "'");
    const Grid& g = field.grid;
    out << "# vtk DataFile Version 3.0\n";
    out << array_name << "\n";
    out << "ASCII\n";
    out << "DATASET STRUCTURED_POINTS\n";
    out << "DIMENSIONS " << g.dims[0] << " " << g.dims[1] << " " << g.dims[2] << "\n";
    out << "ORIGIN " << fmt17(g.origin[0]) << " " << fmt17(g.origin[1]) << " "
        << fmt17(g.origin[2]) << "\n";
    out << "SPACING " << fmt17(g.dx) << " " << fmt17(g.dx) << " " << fmt17(g.dx) << "\n";
    out << "POINT_DATA " << g.num_nodes() << "\n";
    out << "SCALARS " << array_name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : field.values) out << fmt17(v) << "\n";
    if (!out) throw Error("write_field_vtk: write failed for '" + path + "'");
}

void write_metrics_csv(const std::vector<LogRow>& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_metrics_csv: cannot write '" + path + "'");
    out << "run,iter,E2,delta_E,err_cloud,l1_update,l1_error,wall_ms\n";
    for (const LogRow& row : log) {
        out << row.run << "," << row.rec.iter << "," << fmt17(row.rec.e2) << ","
            << fmt17(row.rec.delta_e) << "," << fmt17(row.rec.err_cloud) << ","
            << fmt17(row.rec.l1_update) << ",";
        if (row.rec.l1_error) out << fmt17(*row.rec.l1_error);
        out << "," << fmt17(row.rec.wall_ms) << "\n";
    }
    if (!out) throw Error("write_metrics_csv: write failed for '" + path + "'");
}

}  // namespace lsr
