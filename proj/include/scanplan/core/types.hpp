#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scanplan/core/error.hpp"

namespace scanplan {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Raw point set. Coordinates are millimeters throughout the library.
struct PointCloud {
  std::vector<Vec3> points;
  std::string source;  ///< file path or generator tag, informational only

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

/// Indexed triangle mesh (input geometry for surface sampling).
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  double triangle_area(std::size_t t) const {
    const auto& tri = triangles[t];
    const Vec3 e1 = vertices[tri[1]] - vertices[tri[0]];
    const Vec3 e2 = vertices[tri[2]] - vertices[tri[0]];
    return 0.5 * e1.cross(e2).norm();
  }

  double total_area() const {
    double area = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) area += triangle_area(t);
    return area;
  }

  /// Throws InvalidInput when a triangle references a vertex out of range.
  void validate() const {
    const int n = static_cast<int>(vertices.size());
    for (const auto& tri : triangles)
      for (int v : tri)
        if (v < 0 || v >= n) throw InvalidInput("mesh triangle index out of range");
  }
};

/// Per-point status bits for FeatureCloud.
enum PointFlag : std::uint8_t {
  kFlagNone = 0,
  kFlagDegenerateNormal = 1,       ///< neighborhood had no well-defined normal
  kFlagLowConfidenceCurvature = 2  ///< quadric fit was rank deficient
};

/// Point cloud with estimated per-point surface features.
///
/// Normals are unit length and oriented outward (toward the sensor side).
/// gaussian_curvature is 1/mm^2, mean_curvature is 1/mm with the convention
/// that a surface convex toward its outward normal has positive mean
/// curvature. Points flagged kFlagDegenerateNormal carry a zero normal and
/// are excluded from segmentation.
struct FeatureCloud {
  std::vector<Vec3> positions;
  std::vector<Vec3> normals;
  std::vector<double> gaussian_curvature;
  std::vector<double> mean_curvature;
  std::vector<std::uint8_t> flags;
  std::string source;

  static FeatureCloud from_points(const PointCloud& cloud) {
    FeatureCloud fc;
    fc.positions = cloud.points;
    fc.normals.assign(cloud.points.size(), Vec3::Zero());
    fc.gaussian_curvature.assign(cloud.points.size(), 0.0);
    fc.mean_curvature.assign(cloud.points.size(), 0.0);
    fc.flags.assign(cloud.points.size(), kFlagNone);
    fc.source = cloud.source;
    return fc;
  }

  std::size_t size() const noexcept { return positions.size(); }
  bool empty() const noexcept { return positions.empty(); }

  bool valid(std::size_t i) const { return (flags[i] & kFlagDegenerateNormal) == 0; }

  /// Curvature feature c_i = [K, H].
  Vec2 curvature_feature(std::size_t i) const {
    return Vec2(gaussian_curvature[i], mean_curvature[i]);
  }

  /// Indices of points with a well-defined normal.
  std::vector<int> valid_indices() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i)
      if (valid(i)) out.push_back(static_cast<int>(i));
    return out;
  }
};

}  // namespace scanplan
