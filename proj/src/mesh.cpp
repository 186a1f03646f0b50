#include "meshplan/mesh.hpp"

#include <string>

#include "meshplan/errors.hpp"

namespace meshplan {

FaceData compute_face_data(const std::vector<Vec3>& vertices,
                           const std::vector<std::array<int, 3>>& faces) {
  FaceData out;
  out.normals.reserve(faces.size());
  out.centroids.reserve(faces.size());
  out.plane_offsets.reserve(faces.size());

  for (std::size_t i = 0; i < faces.size(); ++i) {
    const auto& f = faces[i];
    const Vec3& a = vertices[f[0]];
    const Vec3& b = vertices[f[1]];
    const Vec3& c = vertices[f[2]];

    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    Vec3 n = e1.cross(e2);
    const double len = n.norm();
    if (len <= 1e-12 * e1.norm() * e2.norm() || len == 0.0) {
      throw DegenerateFaceError(static_cast<int>(i),
                                "zero-area face " + std::to_string(i));
    }
    n /= len;

    // Canonical upward orientation: n_z > 0; vertical faces tie-break by
    // n_y > 0, then n_x > 0.
    if (n.z() < 0.0) {
      n = -n;
    } else if (n.z() == 0.0) {
      if (n.y() < 0.0) {
        n = -n;
      } else if (n.y() == 0.0 && n.x() < 0.0) {
        n = -n;
      }
    }

    const Vec3 centroid = (a + b + c) / 3.0;
    out.normals.push_back(n);
    out.centroids.push_back(centroid);
    out.plane_offsets.push_back(-n.dot(centroid));
  }
  return out;
}

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const int v = faces_[i][k];
      if (v < 0 || v >= nv) {
        throw FormatError("face " + std::to_string(i) + " references vertex " +
                          std::to_string(v) + " out of range");
      }
    }
  }

  face_data_ = compute_face_data(vertices_, faces_);

  if (!vertices_.empty()) {
    aabb_min_ = aabb_max_ = vertices_[0];
    for (const Vec3& v : vertices_) {
      aabb_min_ = aabb_min_.cwiseMin(v);
      aabb_max_ = aabb_max_.cwiseMax(v);
    }
  }

  if (!faces_.empty()) {
    double total = 0.0;
    for (const auto& f : faces_) {
      const Vec3& a = vertices_[f[0]];
      const Vec3& b = vertices_[f[1]];
      const Vec3& c = vertices_[f[2]];
      total += (b - a).norm() + (c - b).norm() + (a - c).norm();
    }
    mean_edge_length_ = total / (3.0 * static_cast<double>(faces_.size()));
  }
}

}  // namespace meshplan
