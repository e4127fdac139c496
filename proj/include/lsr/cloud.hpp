#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lsr/types.hpp"

namespace lsr {

struct PointCloud {
    int dim = 0;  // 2 or 3
    std::vector<Vec> points;
    std::string source_id;

    std::int64_t size() const { return static_cast<std::int64_t>(points.size()); }
};

struct CloudStats {
    double h_s = 0.0;      // estimated cloud resolution
    double gamma_s = 0.0;  // initial-data threshold k_s * h_s
    double k_s = 2.0;
    Vec bbox_min{0, 0, 0};
    Vec bbox_max{0, 0, 0};
    std::uint64_t sample_seed = 0;
};

enum class ShapeKind { Circle, Square45, Sphere, CubeSpheres };

/// Synthetic test shape. `size` is the radius for circle/sphere, the edge
/// length for square45 and the cube edge for cube_spheres (whose attached
/// sphere radii scale with the edge; defaults give radii 0.25 and 0.15).
struct ShapeSpec {
    ShapeKind kind = ShapeKind::Circle;
    double size = 1.0;
    Vec center{0, 0, 0};
    int n_points = 64;

    int dim() const { return (kind == ShapeKind::Circle || kind == ShapeKind::Square45) ? 2 : 3; }
    void validate() const;
};

enum class CloudFormat { Xyz, Ply };

PointCloud load_cloud(const std::string& path, CloudFormat format);
void write_cloud_xyz(const PointCloud& cloud, const std::string& path);

// Mean nearest-neighbour distance over a seeded sample of
// max(1, round(fraction*|S|)) points, neighbours searched in the whole cloud.
double estimate_resolution(const PointCloud& cloud, double sample_fraction, std::uint64_t seed);

CloudStats compute_stats(const PointCloud& cloud, double sample_fraction, double k_s,
                         std::uint64_t seed);

PointCloud sample_shape(const ShapeSpec& spec, std::uint64_t seed);

// Analytic signed distance, negative inside. cube_spheres is the min over
// the component distances (union).
double exact_sdf(const ShapeSpec& spec, const Vec& point);

void bounding_box(const PointCloud& cloud, Vec& lo, Vec& hi);

// Uniform-bin exact nearest-neighbour search. Bin size starts from
// bbox_diagonal / |S|^(1/dim); queries grow the searched shell until no
// closer point can exist.
class SpatialHash {
  public:
    explicit SpatialHash(const PointCloud& cloud);

    // Distance from q to the nearest cloud point, optionally excluding one index.
    double nearest_distance(const Vec& q, std::int64_t exclude = -1) const;

  private:
    const PointCloud* cloud_;
    int dim_;
    Vec lo_{0, 0, 0};
    double cell_ = 1.0;
    Index3 bins_{1, 1, 1};
    std::vector<std::int32_t> starts_;   // CSR layout over bins
    std::vector<std::int32_t> entries_;  // point ids grouped by bin

    std::int64_t bin_index(int bx, int by, int bz) const {
        return (static_cast<std::int64_t>(bz) * bins_[1] + by) * bins_[0] + bx;
    }
};

}  // namespace lsr
