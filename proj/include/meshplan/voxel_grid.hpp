#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "meshplan/geometry.hpp"
#include "meshplan/mesh.hpp"

namespace meshplan {

/// Dense voxelization of the padded mesh AABB. Every voxel stores the id of
/// the face whose centroid is nearest to the voxel center (ties broken by
/// lowest face id), giving constant-time nearest-face queries during
/// rollouts. Immutable after build; safe for unlimited concurrent readers.
class VoxelGrid {
 public:
  static constexpr std::size_t kDefaultMaxVoxels = 50'000'000;

  /// Precomputes the nearest face for every voxel of the padded AABB.
  /// voxel_size > 0 and padding >= 0 are in meters. Throws CapacityError
  /// when the voxel count would exceed max_voxels.
  static VoxelGrid build(const TriangleMesh& mesh, double voxel_size, double padding,
                         std::size_t max_voxels = kDefaultMaxVoxels);

  const Vec3& origin() const { return origin_; }
  double voxel_size() const { return voxel_size_; }
  const std::array<int, 3>& dims() const { return dims_; }
  std::size_t voxel_count() const { return table_.size(); }

  bool contains(const Vec3& p) const { return try_voxel_coords(p).has_value(); }

  /// Integer voxel coordinates of a point: floor((p - origin) / voxel_size)
  /// per axis. Throws OutOfBoundsError outside the covered box.
  std::array<int, 3> voxel_coords(const Vec3& p) const;
  std::optional<std::array<int, 3>> try_voxel_coords(const Vec3& p) const;

  /// Face stored for a point's voxel. O(1). Throws OutOfBoundsError outside
  /// coverage; callers that treat that as leaving the terrain use the
  /// try_ variant instead.
  Face nearest_face(const TriangleMesh& mesh, const Vec3& p) const;
  std::optional<Face> try_nearest_face(const TriangleMesh& mesh, const Vec3& p) const;

  int face_id_at(const std::array<int, 3>& c) const {
    return table_[linear_index(c[0], c[1], c[2])];
  }

 private:
  std::size_t linear_index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) *
                                                  static_cast<std::size_t>(k));
  }

  Vec3 origin_ = Vec3::Zero();
  double voxel_size_ = 1.0;
  std::array<int, 3> dims_ = {0, 0, 0};
  std::vector<std::int32_t> table_;
};

/// 2x the mean face edge length; keeps several faces from collapsing into
/// one voxel on typical meshes while bounding memory.
double default_voxel_size(const TriangleMesh& mesh);

struct VoxelGridOptions {
  double voxel_size = 0.0;  // <= 0: 2x mean edge length
  double padding = -1.0;    // < 0: 2 voxels
  std::size_t max_voxels = VoxelGrid::kDefaultMaxVoxels;
};

/// Resolves auto defaults and builds the index.
VoxelGrid build_index(const TriangleMesh& mesh, const VoxelGridOptions& opts = {});

}  // namespace meshplan
