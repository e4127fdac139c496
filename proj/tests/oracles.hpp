// Independent brute-force oracles for the unit and acceptance tests. These
// deliberately avoid the library's accelerated code paths.
#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lsr/cloud.hpp"
#include "lsr/grid.hpp"

namespace oracle {

inline double brute_min_dist(const lsr::Vec& q, const lsr::PointCloud& cloud,
                             std::int64_t exclude = -1) {
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < cloud.size(); ++i) {
        if (i == exclude) continue;
        best = std::min(best, lsr::norm(cloud.points[static_cast<std::size_t>(i)] - q));
    }
    return best;
}

// O(N^2) mean nearest-neighbour distance over the whole cloud.
inline double brute_mean_nn(const lsr::PointCloud& cloud) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < cloud.size(); ++i)
        sum += brute_min_dist(cloud.points[static_cast<std::size_t>(i)], cloud, i);
    return sum / static_cast<double>(cloud.size());
}

inline lsr::ScalarField field_from(const lsr::Grid& g,
                                   const std::function<double(const lsr::Vec&)>& f) {
    lsr::ScalarField out(g);
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i) out.at(i, j, k) = f(g.node(i, j, k));
    return out;
}

// Linearly interpolated zero crossings on all grid edges, as (edge id, offset
// in [0, dx]) pairs keyed by the low node and axis.
struct EdgeCrossing {
    std::int64_t node;
    int axis;
    double offset;
};

inline std::vector<EdgeCrossing> edge_crossings(const lsr::ScalarField& phi) {
    const lsr::Grid& g = phi.grid;
    std::vector<EdgeCrossing> out;
    for (int k = 0; k < g.dims[2]; ++k)
        for (int j = 0; j < g.dims[1]; ++j)
            for (int i = 0; i < g.dims[0]; ++i)
                for (int ax = 0; ax < g.dim; ++ax) {
                    int nb[3] = {i, j, k};
                    nb[ax] += 1;
                    if (nb[ax] >= g.dims[ax]) continue;
                    const double a = phi.at(i, j, k);
                    const double b = phi.at(nb[0], nb[1], nb[2]);
                    if ((a < 0 && b > 0) || (a > 0 && b < 0))
                        out.push_back({g.index(i, j, k), ax, g.dx * a / (a - b)});
                }
    return out;
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Minimal legacy-VTK structured points reader for round-trip checks.
struct VtkData {
    lsr::Index3 dims{0, 0, 0};
    lsr::Vec origin{0, 0, 0};
    lsr::Vec spacing{0, 0, 0};
    std::vector<double> values;
};

inline VtkData read_vtk(const std::string& path) {
    std::ifstream in(path);
    VtkData vtk;
    std::string tok;
    while (in >> tok) {
        if (tok == "DIMENSIONS")
            in >> vtk.dims[0] >> vtk.dims[1] >> vtk.dims[2];
        else if (tok == "ORIGIN")
            in >> vtk.origin[0] >> vtk.origin[1] >> vtk.origin[2];
        else if (tok == "SPACING")
            in >> vtk.spacing[0] >> vtk.spacing[1] >> vtk.spacing[2];
        else if (tok == "LOOKUP_TABLE") {
            in >> tok;  // table name
            double v;
            while (in >> v) vtk.values.push_back(v);
        }
    }
    return vtk;
}

}  // namespace oracle
