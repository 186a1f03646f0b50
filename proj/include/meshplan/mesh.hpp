#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "meshplan/geometry.hpp"

namespace meshplan {

/// One triangular face with its precomputed plane data.
/// The plane equation is normal . p + plane_offset = 0.
struct Face {
  int id = -1;
  Vec3 normal = Vec3::UnitZ();
  Vec3 centroid = Vec3::Zero();
  double plane_offset = 0.0;
};

struct FaceData {
  std::vector<Vec3> normals;
  std::vector<Vec3> centroids;
  std::vector<double> plane_offsets;
};

/// Per-face normals, centroids and plane offsets.
///
/// Normals are unit length and canonically oriented upward: n_z > 0, with the
/// tie for vertical faces (n_z == 0) broken by n_y > 0, then n_x > 0.
/// Throws DegenerateFaceError for zero-area faces.
FaceData compute_face_data(const std::vector<Vec3>& vertices,
                           const std::vector<std::array<int, 3>>& faces);

/// Immutable triangular terrain mesh. Construction validates face indices,
/// rejects degenerate faces and precomputes per-face geometry; after that the
/// mesh is safe for unlimited concurrent readers.
class TriangleMesh {
 public:
  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  const std::vector<Vec3>& face_normals() const { return face_data_.normals; }
  const std::vector<Vec3>& face_centroids() const { return face_data_.centroids; }
  const std::vector<double>& plane_offsets() const { return face_data_.plane_offsets; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  bool empty() const { return faces_.empty(); }

  Face face(int id) const {
    return Face{id, face_data_.normals[id], face_data_.centroids[id],
                face_data_.plane_offsets[id]};
  }

  const Vec3& aabb_min() const { return aabb_min_; }
  const Vec3& aabb_max() const { return aabb_max_; }

  /// Mean triangle edge length; drives the default voxel size.
  double mean_edge_length() const { return mean_edge_length_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> faces_;
  FaceData face_data_;
  Vec3 aabb_min_ = Vec3::Zero();
  Vec3 aabb_max_ = Vec3::Zero();
  double mean_edge_length_ = 0.0;
};

enum class PlyFormat { ascii, binary_little_endian };

/// Loads a PLY mesh (ASCII or binary little-endian, float or double vertex
/// properties, triangular faces only). Zero-area faces are dropped.
///
/// Throws ParseError on malformed headers, FormatError on non-triangular
/// faces or bad indices, EmptyMeshError when no faces remain.
TriangleMesh load_ply(const std::filesystem::path& path);

/// Writes a mesh as PLY. ASCII mode prints coordinates with 9 significant
/// digits; binary mode is bit exact. Throws EmptyMeshError for empty meshes
/// and IoError when the file cannot be written.
void save_ply(const TriangleMesh& mesh, const std::filesystem::path& path,
              PlyFormat format = PlyFormat::ascii);

/// Deterministic procedural terrain: a heightfield over an nx x ny vertex
/// grid displaced by multi-octave value noise. Same arguments produce a
/// bit-identical mesh. nx, ny >= 2; amplitude >= 0; 2*(nx-1)*(ny-1) faces.
TriangleMesh generate_terrain(std::uint64_t seed, int nx, int ny, double cell_size,
                              double amplitude, int octaves);

}  // namespace meshplan
