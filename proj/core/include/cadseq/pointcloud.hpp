#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cadseq/vec.hpp"

namespace cadseq {

// A sampled point set with optional unit normals and the RNG seed that
// produced it.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;  // empty, or same size as points
  std::uint64_t seed = 0;
  std::string source_id;

  bool has_normals() const { return !normals.empty(); }
  std::size_t size() const { return points.size(); }
};

struct Box3 {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};

  void expand(const Vec3& p);
  bool empty() const { return lo.x > hi.x; }
  Vec3 extent() const { return hi - lo; }
  double diagonal() const;
  double volume() const;
};

Box3 bounding_box(const PointCloud& cloud);
Vec3 centroid(const PointCloud& cloud);

// PLY with float32 x y z [nx ny nz] properties. `comments` lines are embedded
// verbatim in the header (used for run-config metadata).
void write_ply(std::ostream& out, const PointCloud& cloud, bool binary,
               const std::vector<std::string>& comments = {});
PointCloud read_ply(std::istream& in);

// Plain text "x y z [nx ny nz]" with 9 significant digits, one point per line.
void write_xyz(std::ostream& out, const PointCloud& cloud);
PointCloud read_xyz(std::istream& in);

// Reads by extension: .ply or .xyz. Throws FormatError otherwise.
PointCloud read_pointcloud_file(const std::string& path);
void write_pointcloud_file(const std::string& path, const PointCloud& cloud,
                           bool binary_ply = false,
                           const std::vector<std::string>& comments = {});

}  // namespace cadseq
