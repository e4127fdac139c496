#include "lsr/cloud.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "lsr/parallel.hpp"

namespace lsr {

namespace {

// Unbiased bounded draw; mt19937_64 keeps the sequence platform-independent.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

PointCloud load_xyz(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    PointCloud cloud;
    cloud.source_id = path;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank_or_comment(line)) continue;
        std::istringstream ls(line);
        double v[4];
        int cols = 0;
        while (cols < 4 && (ls >> v[cols])) ++cols;
        std::string trailing;
        if (ls >> trailing)
            throw ParseError(path + ":" + std::to_string(line_no) + ": trailing token '" +
                             trailing + "'");
        if (cols != 2 && cols != 3)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 2 or 3 columns, got " +
                             std::to_string(cols));
        if (cloud.dim == 0)
            cloud.dim = cols;
        else if (cols != cloud.dim)
            throw ParseError(path + ":" + std::to_string(line_no) + ": inconsistent column count (" +
                             std::to_string(cols) + " vs " + std::to_string(cloud.dim) + ")");
        Vec p{v[0], v[1], cols == 3 ? v[2] : 0.0};
        for (int d = 0; d < cols; ++d)
            if (!std::isfinite(p[d]))
                throw ParseError(path + ":" + std::to_string(line_no) + ": non-finite coordinate");
        cloud.points.push_back(p);
    }
    if (cloud.points.empty()) throw Error("empty cloud: '" + path + "'");
    return cloud;
}

struct PlyProperty {
    std::string name;
    int size = 0;
    bool is_float = false;
    bool is_double = false;
};

int ply_type_size(const std::string& t) {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" ||
        t == "float32")
        return 4;
    if (t == "double" || t == "float64") return 8;
    return 0;
}

PointCloud load_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::string line;
    int line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) throw ParseError(path + ": truncated header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++line_no;
    };

    next_line();
    if (line != "ply") throw ParseError(path + ":1: missing 'ply' magic");

    bool binary = false;
    bool saw_format = false;
    std::int64_t vertex_count = -1;
    std::vector<PlyProperty> vertex_props;
    bool in_vertex_element = false;
    bool vertex_is_first_element = true;

    for (;;) {
        next_line();
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "comment" || tok == "obj_info" || tok.empty()) continue;
        if (tok == "format") {
            std::string kind, version;
            ls >> kind >> version;
            if (kind == "ascii")
                binary = false;
            else if (kind == "binary_little_endian")
                binary = true;
            else
                throw ParseError(path + ":" + std::to_string(line_no) + ": unsupported format '" +
                                 kind + "'");
            saw_format = true;
        } else if (tok == "element") {
            std::string name;
            std::int64_t count = 0;
            ls >> name >> count;
            if (name == "vertex") {
                if (!vertex_is_first_element)
                    throw ParseError(path + ":" + std::to_string(line_no) +
                                     ": vertex element must come first");
                vertex_count = count;
                in_vertex_element = true;
            } else {
                if (vertex_count < 0) vertex_is_first_element = false;
                in_vertex_element = false;
            }
        } else if (tok == "property") {
            if (!in_vertex_element) continue;
            std::string type;
            ls >> type;
            if (type == "list")
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": list property in vertex element unsupported");
            PlyProperty p;
            ls >> p.name;
            p.size = ply_type_size(type);
            if (p.size == 0)
                throw ParseError(path + ":" + std::to_string(line_no) + ": unknown type '" + type +
                                 "'");
            p.is_float = (type == "float" || type == "float32");
            p.is_double = (type == "double" || type == "float64");
            vertex_props.push_back(p);
        } else if (tok == "end_header") {
            break;
        } else {
            throw ParseError(path + ":" + std::to_string(line_no) + ": unexpected token '" + tok +
                             "'");
        }
    }
    if (!saw_format) throw ParseError(path + ": missing format line");
    if (vertex_count < 0) throw ParseError(path + ": no vertex element");
    if (vertex_count == 0) throw Error("empty cloud: '" + path + "'");

    int col[3] = {-1, -1, -1};
    int offset[3] = {0, 0, 0};
    int stride = 0;
    for (int i = 0; i < static_cast<int>(vertex_props.size()); ++i) {
        const auto& p = vertex_props[i];
        int axis = p.name == "x" ? 0 : p.name == "y" ? 1 : p.name == "z" ? 2 : -1;
        if (axis >= 0) {
            if (!p.is_float && !p.is_double)
                throw ParseError(path + ": coordinate property '" + p.name +
                                 "' must be float or double");
            col[axis] = i;
            offset[axis] = stride;
        }
        stride += p.size;
    }
    if (col[0] < 0 || col[1] < 0 || col[2] < 0)
        throw ParseError(path + ": vertex element lacks x/y/z properties");

    PointCloud cloud;
    cloud.dim = 3;
    cloud.source_id = path;
    cloud.points.reserve(static_cast<std::size_t>(vertex_count));

    if (!binary) {
        for (std::int64_t v = 0; v < vertex_count; ++v) {
            next_line();
            std::istringstream ls(line);
            Vec p{0, 0, 0};
            for (int i = 0; i < static_cast<int>(vertex_props.size()); ++i) {
                double value;
                if (!(ls >> value))
                    throw ParseError(path + ":" + std::to_string(line_no) + ": short vertex row");
                for (int a = 0; a < 3; ++a)
                    if (col[a] == i) p[a] = value;
            }
            cloud.points.push_back(p);
        }
    } else {
        std::vector<char> row(static_cast<std::size_t>(stride));
        for (std::int64_t v = 0; v < vertex_count; ++v) {
            if (!in.read(row.data(), stride))
                throw ParseError(path + ": truncated binary vertex data at vertex " +
                                 std::to_string(v));
            Vec p{0, 0, 0};
            for (int a = 0; a < 3; ++a) {
                const auto& prop = vertex_props[static_cast<std::size_t>(col[a])];
                if (prop.is_double) {
                    double value;
                    std::memcpy(&value, row.data() + offset[a], 8);
                    p[a] = value;
                } else {
                    float value;
                    std::memcpy(&value, row.data() + offset[a], 4);
                    p[a] = static_cast<double>(value);
                }
            }
            cloud.points.push_back(p);
        }
    }
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        for (int d = 0; d < 3; ++d)
            if (!std::isfinite(cloud.points[i][d]))
                throw ParseError(path + ": non-finite coordinate at vertex " + std::to_string(i));
    return cloud;
}

Vec rotate_xyz(const Vec& p, double ax, double ay, double az) {
    const double cx = std::cos(ax), sx = std::sin(ax);
    const double cy = std::cos(ay), sy = std::sin(ay);
    const double cz = std::cos(az), sz = std::sin(az);
    Vec a{p[0], cx * p[1] - sx * p[2], sx * p[1] + cx * p[2]};
    Vec b{cy * a[0] + sy * a[2], a[1], -sy * a[0] + cy * a[2]};
    return {cz * b[0] - sz * b[1], sz * b[0] + cz * b[1], b[2]};
}

Vec rotate_xyz_inv(const Vec& p, double ax, double ay, double az) {
    const double cx = std::cos(ax), sx = std::sin(ax);
    const double cy = std::cos(ay), sy = std::sin(ay);
    const double cz = std::cos(az), sz = std::sin(az);
    Vec a{cz * p[0] + sz * p[1], -sz * p[0] + cz * p[1], p[2]};
    Vec b{cy * a[0] - sy * a[2], a[1], sy * a[0] + cy * a[2]};
    return {b[0], cx * b[1] + sx * b[2], -sx * b[1] + cx * b[2]};
}

// Fixed tilt for cube_spheres so no face or edge aligns with the grid.
constexpr double kTiltX = 0.5, kTiltY = 0.4, kTiltZ = 0.3;

struct CubeSpheresGeom {
    double half;        // cube half edge
    double r_mid;       // sphere at an edge midpoint
    double r_corner;    // spheres at the opposite edge's vertices
    Vec c_mid, c_a, c_b;
};

CubeSpheresGeom cube_spheres_geom(const ShapeSpec& spec) {
    CubeSpheresGeom g;
    g.half = spec.size / 2.0;
    const double s = spec.size / 0.8;
    g.r_mid = 0.25 * s;
    g.r_corner = 0.15 * s;
    g.c_mid = {0.0, g.half, g.half};
    g.c_a = {-g.half, -g.half, -g.half};
    g.c_b = {+g.half, -g.half, -g.half};
    return g;
}

double box_sdf(const Vec& p, double hx, double hy, double hz) {
    const double qx = std::abs(p[0]) - hx;
    const double qy = std::abs(p[1]) - hy;
    const double qz = std::abs(p[2]) - hz;
    const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0), oz = std::max(qz, 0.0);
    return std::sqrt(ox * ox + oy * oy + oz * oz) + std::min(std::max({qx, qy, qz}), 0.0);
}

void fibonacci_sphere(std::vector<Vec>& out, int n, double r, const Vec& c) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = golden * i;
        out.push_back({c[0] + r * rho * std::cos(th), c[1] + r * rho * std::sin(th), c[2] + r * z});
    }
}

PointCloud sample_cube_spheres(const ShapeSpec& spec) {
    const CubeSpheresGeom g = cube_spheres_geom(spec);
    const double area_cube = 6.0 * sqr(2.0 * g.half);
    const double area_mid = 4.0 * std::numbers::pi * sqr(g.r_mid);
    const double area_corner = 4.0 * std::numbers::pi * sqr(g.r_corner);
    const double area_total = area_cube + area_mid + 2.0 * area_corner;

    // Oversampled candidate pool, density proportional to component area;
    // points buried inside another component are dropped, then the pool is
    // thinned evenly down to n.
    const int pool_target = std::max(8 * spec.n_points, 512);
    std::vector<Vec> pool;

    const int per_face = std::max(
        2, static_cast<int>(std::lround(std::sqrt(pool_target * area_cube / area_total / 6.0))));
    auto keep_cube = [&](const Vec& p) {
        return norm(p - g.c_mid) > g.r_mid && norm(p - g.c_a) > g.r_corner &&
               norm(p - g.c_b) > g.r_corner;
    };
    for (int axis = 0; axis < 3; ++axis) {
        for (int side = -1; side <= 1; side += 2) {
            for (int i = 0; i < per_face; ++i) {
                for (int j = 0; j < per_face; ++j) {
                    const double u = (-1.0 + 2.0 * (i + 0.5) / per_face) * g.half;
                    const double v = (-1.0 + 2.0 * (j + 0.5) / per_face) * g.half;
                    Vec p{0, 0, 0};
                    p[axis] = side * g.half;
                    p[(axis + 1) % 3] = u;
                    p[(axis + 2) % 3] = v;
                    if (keep_cube(p)) pool.push_back(p);
                }
            }
        }
    }
    auto keep_sphere = [&](const Vec& p) {
        return box_sdf(p, g.half, g.half, g.half) > 0.0;
    };
    std::vector<Vec> cand;
    fibonacci_sphere(cand, static_cast<int>(std::lround(pool_target * area_mid / area_total)),
                     g.r_mid, g.c_mid);
    fibonacci_sphere(cand, static_cast<int>(std::lround(pool_target * area_corner / area_total)),
                     g.r_corner, g.c_a);
    fibonacci_sphere(cand, static_cast<int>(std::lround(pool_target * area_corner / area_total)),
                     g.r_corner, g.c_b);
    for (const Vec& p : cand)
        if (keep_sphere(p)) pool.push_back(p);

    if (static_cast<int>(pool.size()) < spec.n_points)
        throw Error("cube_spheres sampler: candidate pool too small");

    PointCloud cloud;
    cloud.dim = 3;
    cloud.source_id = "shape:cube_spheres";
    const double step = static_cast<double>(pool.size()) / spec.n_points;
    for (int k = 0; k < spec.n_points; ++k) {
        const Vec& p = pool[static_cast<std::size_t>(k * step)];
        cloud.points.push_back(spec.center + rotate_xyz(p, kTiltX, kTiltY, kTiltZ));
    }
    return cloud;
}

}  // namespace

void ShapeSpec::validate() const {
    if (n_points < 4) throw ConfigError("shape: n_points must be >= 4");
    if (!(size > 0.0)) throw ConfigError("shape: size must be positive");
}

PointCloud load_cloud(const std::string& path, CloudFormat format) {
    return format == CloudFormat::Xyz ? load_xyz(path) : load_ply(path);
}

void write_cloud_xyz(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    char buf[96];
    for (const Vec& p : cloud.points) {
        if (cloud.dim == 2)
            std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p[0], p[1]);
        else
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p[0], p[1], p[2]);
        out << buf;
    }
    if (!out) throw Error("write failed for '" + path + "'");
}

void bounding_box(const PointCloud& cloud, Vec& lo, Vec& hi) {
    if (cloud.points.empty()) throw Error("empty cloud");
    lo = hi = cloud.points[0];
    for (const Vec& p : cloud.points)
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
}

SpatialHash::SpatialHash(const PointCloud& cloud) : cloud_(&cloud), dim_(cloud.dim) {
    Vec hi;
    bounding_box(cloud, lo_, hi);
    const Vec span = hi - lo_;
    const double diag = norm(span);
    const double n_axis = std::pow(static_cast<double>(cloud.size()), 1.0 / dim_);
    cell_ = diag > 0.0 ? diag / std::max(1.0, n_axis) : 1.0;
    for (int d = 0; d < 3; ++d)
        bins_[d] = d < dim_ ? 1 + static_cast<int>(span[d] / cell_) : 1;

    const std::int64_t nbins =
        static_cast<std::int64_t>(bins_[0]) * bins_[1] * bins_[2];
    starts_.assign(static_cast<std::size_t>(nbins) + 1, 0);
    entries_.resize(cloud.points.size());

    auto bin_of = [&](const Vec& p) {
        int b[3] = {0, 0, 0};
        for (int d = 0; d < dim_; ++d) {
            b[d] = static_cast<int>((p[d] - lo_[d]) / cell_);
            b[d] = std::clamp(b[d], 0, bins_[d] - 1);
        }
        return bin_index(b[0], b[1], b[2]);
    };
    for (const Vec& p : cloud.points) ++starts_[static_cast<std::size_t>(bin_of(p)) + 1];
    for (std::size_t i = 1; i < starts_.size(); ++i) starts_[i] += starts_[i - 1];
    std::vector<std::int32_t> cursor(starts_.begin(), starts_.end() - 1);
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(cloud.points.size()); ++i)
        entries_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(bin_of(cloud.points[static_cast<std::size_t>(i)]))]++)] = i;
}

double SpatialHash::nearest_distance(const Vec& q, std::int64_t exclude) const {
    int bq[3] = {0, 0, 0};
    int rad_max = 0;
    for (int d = 0; d < dim_; ++d) {
        bq[d] = static_cast<int>(std::floor((q[d] - lo_[d]) / cell_));
        rad_max = std::max(rad_max, std::max(bq[d], bins_[d] - 1 - bq[d]));
    }
    double best2 = std::numeric_limits<double>::infinity();
    for (int rad = 0; rad <= rad_max + 1; ++rad) {
        // Any point in shell `rad` is at least (rad-1) cells away.
        if (rad > 0 && best2 <= sqr((rad - 1) * cell_)) break;
        const int zlo = dim_ == 3 ? bq[2] - rad : 0;
        const int zhi = dim_ == 3 ? bq[2] + rad : 0;
        for (int bz = std::max(0, zlo); bz <= std::min(bins_[2] - 1, zhi); ++bz) {
            for (int by = std::max(0, bq[1] - rad); by <= std::min(bins_[1] - 1, bq[1] + rad); ++by) {
                for (int bx = std::max(0, bq[0] - rad); bx <= std::min(bins_[0] - 1, bq[0] + rad); ++bx) {
                    const int cheb = std::max({std::abs(bx - bq[0]), std::abs(by - bq[1]),
                                               std::abs(bz - bq[2])});
                    if (cheb != rad) continue;
                    const std::int64_t b = bin_index(bx, by, bz);
                    for (std::int32_t e = starts_[static_cast<std::size_t>(b)];
                         e < starts_[static_cast<std::size_t>(b) + 1]; ++e) {
                        const std::int32_t id = entries_[static_cast<std::size_t>(e)];
                        if (id == exclude) continue;
                        const Vec diff = cloud_->points[static_cast<std::size_t>(id)] - q;
                        best2 = std::min(best2, dot(diff, diff));
                    }
                }
            }
        }
    }
    return std::sqrt(best2);
}

double estimate_resolution(const PointCloud& cloud, double sample_fraction, std::uint64_t seed) {
    if (cloud.size() < 2) throw Error("estimate_resolution: need at least 2 points");
    if (!(sample_fraction > 0.0) || sample_fraction > 1.0)
        throw ConfigError("estimate_resolution: sample_fraction must be in (0, 1]");

    const std::int64_t n = cloud.size();
    std::int64_t m = std::llround(sample_fraction * static_cast<double>(n));
    m = std::clamp<std::int64_t>(m, 1, n);

    // Fisher-Yates prefix: first m entries are a uniform sample without replacement.
    std::vector<std::int32_t> idx(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    std::mt19937_64 rng(seed);
    for (std::int64_t i = 0; i < m; ++i) {
        const std::int64_t j = i + static_cast<std::int64_t>(bounded(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }

    const SpatialHash hash(cloud);
    const double total = blocked_sum(m, [&](std::int64_t i) {
        const std::int32_t id = idx[static_cast<std::size_t>(i)];
        return hash.nearest_distance(cloud.points[static_cast<std::size_t>(id)], id);
    });
    return total / static_cast<double>(m);
}

CloudStats compute_stats(const PointCloud& cloud, double sample_fraction, double k_s,
                         std::uint64_t seed) {
    CloudStats st;
    st.k_s = k_s;
    st.sample_seed = seed;
    st.h_s = estimate_resolution(cloud, sample_fraction, seed);
    st.gamma_s = k_s * st.h_s;
    bounding_box(cloud, st.bbox_min, st.bbox_max);
    return st;
}

PointCloud sample_shape(const ShapeSpec& spec, std::uint64_t seed) {
    (void)seed;  // samplers are deterministic lattices
    spec.validate();
    PointCloud cloud;
    switch (spec.kind) {
        case ShapeKind::Circle: {
            cloud.dim = 2;
            cloud.source_id = "shape:circle";
            for (int i = 0; i < spec.n_points; ++i) {
                const double th = 2.0 * std::numbers::pi * i / spec.n_points;
                cloud.points.push_back(
                    {spec.center[0] + spec.size * std::cos(th), spec.center[1] + spec.size * std::sin(th), 0.0});
            }
            return cloud;
        }
        case ShapeKind::Square45: {
            cloud.dim = 2;
            cloud.source_id = "shape:square45";
            const double e = spec.size;
            const double a = e / 2.0;
            const double c45 = std::numbers::sqrt2 / 2.0;
            for (int i = 0; i < spec.n_points; ++i) {
                const double s = 4.0 * e * i / spec.n_points;  // arclength along the perimeter
                const int side = std::min(3, static_cast<int>(s / e));
                const double t = s - side * e;
                double x = 0.0, y = 0.0;
                switch (side) {
                    case 0: x = a; y = -a + t; break;
                    case 1: x = a - t; y = a; break;
                    case 2: x = -a; y = a - t; break;
                    default: x = -a + t; y = -a; break;
                }
                cloud.points.push_back(
                    {spec.center[0] + c45 * x - c45 * y, spec.center[1] + c45 * x + c45 * y, 0.0});
            }
            return cloud;
        }
        case ShapeKind::Sphere: {
            cloud.dim = 3;
            cloud.source_id = "shape:sphere";
            fibonacci_sphere(cloud.points, spec.n_points, spec.size, spec.center);
            return cloud;
        }
        case ShapeKind::CubeSpheres:
            return sample_cube_spheres(spec);
    }
    throw ConfigError("sample_shape: unknown shape kind");
}

double exact_sdf(const ShapeSpec& spec, const Vec& point) {
    switch (spec.kind) {
        case ShapeKind::Circle: {
            const double dx = point[0] - spec.center[0];
            const double dy = point[1] - spec.center[1];
            return std::sqrt(dx * dx + dy * dy) - spec.size;
        }
        case ShapeKind::Sphere:
            return norm(point - spec.center) - spec.size;
        case ShapeKind::Square45: {
            const double c45 = std::numbers::sqrt2 / 2.0;
            const double dx = point[0] - spec.center[0];
            const double dy = point[1] - spec.center[1];
            // into the square's frame (undo the +45 degree rotation)
            const double px = c45 * dx + c45 * dy;
            const double py = -c45 * dx + c45 * dy;
            const double a = spec.size / 2.0;
            const double qx = std::abs(px) - a;
            const double qy = std::abs(py) - a;
            const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0);
            return std::sqrt(ox * ox + oy * oy) + std::min(std::max(qx, qy), 0.0);
        }
        case ShapeKind::CubeSpheres: {
            const CubeSpheresGeom g = cube_spheres_geom(spec);
            const Vec p = rotate_xyz_inv(point - spec.center, kTiltX, kTiltY, kTiltZ);
            double d = box_sdf(p, g.half, g.half, g.half);
            d = std::min(d, norm(p - g.c_mid) - g.r_mid);
            d = std::min(d, norm(p - g.c_a) - g.r_corner);
            d = std::min(d, norm(p - g.c_b) - g.r_corner);
            return d;
        }
    }
    throw ConfigError("exact_sdf: unknown shape kind");
}

}  // namespace lsr
