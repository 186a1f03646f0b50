#pragma once

#include "meshplan/mesh.hpp"
#include "meshplan/voxel_grid.hpp"

namespace meshplan {

/// Terrain mesh plus its spatial index; shared read-only by all planners.
struct World {
  TriangleMesh mesh;
  VoxelGrid grid;
};

inline World make_world(TriangleMesh mesh, const VoxelGridOptions& opts = {}) {
  VoxelGrid grid = build_index(mesh, opts);
  return World{std::move(mesh), std::move(grid)};
}

}  // namespace meshplan
