#include "meshplan/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "meshplan/errors.hpp"

namespace meshplan {
namespace {

// CSR buckets of face centroids over the same grid as the voxel table.
struct CentroidBuckets {
  std::vector<std::int32_t> offsets;  // size = cells + 1
  std::vector<std::int32_t> ids;      // face ids, ascending within a bucket
};

}  // namespace

double default_voxel_size(const TriangleMesh& mesh) { return 2.0 * mesh.mean_edge_length(); }

VoxelGrid VoxelGrid::build(const TriangleMesh& mesh, double voxel_size, double padding,
                           std::size_t max_voxels) {
  if (mesh.empty()) throw EmptyMeshError("cannot index an empty mesh");
  if (voxel_size <= 0.0) throw std::invalid_argument("voxel_size must be positive");
  if (padding < 0.0) throw std::invalid_argument("padding must be non-negative");

  VoxelGrid grid;
  grid.voxel_size_ = voxel_size;
  grid.origin_ = mesh.aabb_min() - Vec3::Constant(padding);

  const Vec3 extent = mesh.aabb_max() + Vec3::Constant(padding) - grid.origin_;
  std::size_t total = 1;
  for (int axis = 0; axis < 3; ++axis) {
    const int n = std::max(1, static_cast<int>(std::ceil(extent[axis] / voxel_size)));
    grid.dims_[axis] = n;
    total *= static_cast<std::size_t>(n);
  }
  if (total > max_voxels) {
    throw CapacityError("voxel grid would need " + std::to_string(total) + " voxels (budget " +
                        std::to_string(max_voxels) + "); increase voxel_size");
  }

  const auto& centroids = mesh.face_centroids();
  const int nf = static_cast<int>(centroids.size());
  const auto [dx, dy, dz] = grid.dims_;

  const auto cell_of = [&](const Vec3& p) {
    std::array<int, 3> c{};
    for (int axis = 0; axis < 3; ++axis) {
      const int i = static_cast<int>(std::floor((p[axis] - grid.origin_[axis]) / voxel_size));
      c[axis] = std::clamp(i, 0, grid.dims_[axis] - 1);
    }
    return c;
  };

  // Bucket centroids (CSR); filling in face-id order keeps buckets sorted,
  // which makes the lowest-id tie-break fall out of the scan order.
  CentroidBuckets buckets;
  buckets.offsets.assign(total + 1, 0);
  std::vector<std::int32_t> cell_idx(nf);
  for (int f = 0; f < nf; ++f) {
    const auto c = cell_of(centroids[f]);
    cell_idx[f] = static_cast<std::int32_t>(grid.linear_index(c[0], c[1], c[2]));
    ++buckets.offsets[cell_idx[f] + 1];
  }
  for (std::size_t i = 1; i <= total; ++i) buckets.offsets[i] += buckets.offsets[i - 1];
  buckets.ids.resize(nf);
  std::vector<std::int32_t> cursor(buckets.offsets.begin(), buckets.offsets.end() - 1);
  for (int f = 0; f < nf; ++f) buckets.ids[cursor[cell_idx[f]]++] = f;

  grid.table_.assign(total, -1);

  const int max_ring =
      std::max({dx, dy, dz});  // expanding-shell search never needs to go farther

  for (int k = 0; k < dz; ++k) {
    for (int j = 0; j < dy; ++j) {
      for (int i = 0; i < dx; ++i) {
        const Vec3 center = grid.origin_ + Vec3(i + 0.5, j + 0.5, k + 0.5) * voxel_size;

        int best_id = -1;
        double best_d2 = 0.0;

        const auto scan_cell = [&](int ci, int cj, int ck) {
          const std::size_t cell = grid.linear_index(ci, cj, ck);
          const std::int32_t lo = buckets.offsets[cell];
          const std::int32_t hi = buckets.offsets[cell + 1];
          for (std::int32_t s = lo; s < hi; ++s) {
            const std::int32_t f = buckets.ids[s];
            const double d2 = (centroids[f] - center).squaredNorm();
            if (best_id < 0 || d2 < best_d2 || (d2 == best_d2 && f < best_id)) {
              best_id = f;
              best_d2 = d2;
            }
          }
        };

        for (int r = 0; r <= max_ring; ++r) {
          // Cells at Chebyshev distance exactly r.
          const int ilo = std::max(0, i - r), ihi = std::min(dx - 1, i + r);
          const int jlo = std::max(0, j - r), jhi = std::min(dy - 1, j + r);
          const int klo = std::max(0, k - r), khi = std::min(dz - 1, k + r);
          for (int ck = klo; ck <= khi; ++ck) {
            for (int cj = jlo; cj <= jhi; ++cj) {
              for (int ci = ilo; ci <= ihi; ++ci) {
                const int cheb =
                    std::max({std::abs(ci - i), std::abs(cj - j), std::abs(ck - k)});
                if (cheb == r) scan_cell(ci, cj, ck);
              }
            }
          }
          if (best_id >= 0) {
            // A cell at ring r+1 is at least (r + 0.5) * voxel_size away from
            // this voxel center; once that exceeds the best distance no
            // farther ring can win or tie.
            const double bound = (static_cast<double>(r) + 0.5) * voxel_size;
            if (bound * bound > best_d2) break;
          }
        }

        grid.table_[grid.linear_index(i, j, k)] = best_id;
      }
    }
  }

  return grid;
}

std::optional<std::array<int, 3>> VoxelGrid::try_voxel_coords(const Vec3& p) const {
  std::array<int, 3> c{};
  for (int axis = 0; axis < 3; ++axis) {
    const double f = std::floor((p[axis] - origin_[axis]) / voxel_size_);
    if (f < 0.0 || f >= static_cast<double>(dims_[axis])) return std::nullopt;
    c[axis] = static_cast<int>(f);
  }
  return c;
}

std::array<int, 3> VoxelGrid::voxel_coords(const Vec3& p) const {
  auto c = try_voxel_coords(p);
  if (!c) {
    throw OutOfBoundsError("point (" + std::to_string(p.x()) + ", " + std::to_string(p.y()) +
                           ", " + std::to_string(p.z()) + ") outside voxel coverage");
  }
  return *c;
}

std::optional<Face> VoxelGrid::try_nearest_face(const TriangleMesh& mesh, const Vec3& p) const {
  const auto c = try_voxel_coords(p);
  if (!c) return std::nullopt;
  return mesh.face(face_id_at(*c));
}

Face VoxelGrid::nearest_face(const TriangleMesh& mesh, const Vec3& p) const {
  return mesh.face(face_id_at(voxel_coords(p)));
}

VoxelGrid build_index(const TriangleMesh& mesh, const VoxelGridOptions& opts) {
  double size = opts.voxel_size;
  if (size <= 0.0) size = default_voxel_size(mesh);
  if (size <= 0.0) throw std::invalid_argument("cannot derive a voxel size for this mesh");
  const double padding = opts.padding < 0.0 ? 2.0 * size : opts.padding;
  return VoxelGrid::build(mesh, size, padding, opts.max_voxels);
}

}  // namespace meshplan
