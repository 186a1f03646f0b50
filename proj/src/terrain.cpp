#include <cmath>
#include <stdexcept>

#include "meshplan/mesh.hpp"
#include "meshplan/rng.hpp"

namespace meshplan {
namespace {

// Hashed lattice value in [-1, 1); integer-only hashing keeps the field
// bit-identical for a given seed on any platform.
double lattice_value(std::uint64_t seed, int octave, std::int64_t ix, std::int64_t iy) {
  const std::uint64_t h =
      derive_seed(seed, {0x7465727261696eull, static_cast<std::uint64_t>(octave),
                         static_cast<std::uint64_t>(ix), static_cast<std::uint64_t>(iy)});
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double value_noise(std::uint64_t seed, int octave, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const double tx = fade(x - fx);
  const double ty = fade(y - fy);

  const double v00 = lattice_value(seed, octave, ix, iy);
  const double v10 = lattice_value(seed, octave, ix + 1, iy);
  const double v01 = lattice_value(seed, octave, ix, iy + 1);
  const double v11 = lattice_value(seed, octave, ix + 1, iy + 1);

  const double a = v00 + (v10 - v00) * tx;
  const double b = v01 + (v11 - v01) * tx;
  return a + (b - a) * ty;
}

double fbm(std::uint64_t seed, double x, double y, int octaves) {
  double sum = 0.0;
  double amp = 1.0;
  double norm = 0.0;
  double freq = 1.0;
  for (int o = 0; o < octaves; ++o) {
    sum += amp * value_noise(seed, o, x * freq, y * freq);
    norm += amp;
    amp *= 0.5;
    freq *= 2.0;
  }
  return sum / norm;
}

// Base noise wavelength in grid cells.
constexpr double kBasePeriodCells = 8.0;

}  // namespace

TriangleMesh generate_terrain(std::uint64_t seed, int nx, int ny, double cell_size,
                              double amplitude, int octaves) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("terrain grid must be at least 2x2");
  if (cell_size <= 0.0) throw std::invalid_argument("cell_size must be positive");
  if (amplitude < 0.0) throw std::invalid_argument("amplitude must be non-negative");
  if (octaves < 1) throw std::invalid_argument("octaves must be at least 1");

  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double z = amplitude == 0.0
                           ? 0.0
                           : amplitude * fbm(seed, i / kBasePeriodCells, j / kBasePeriodCells,
                                             octaves);
      vertices.emplace_back(i * cell_size, j * cell_size, z);
    }
  }

  std::vector<std::array<int, 3>> faces;
  faces.reserve(2u * static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny - 1));
  const auto vid = [nx](int i, int j) { return j * nx + i; };
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const int v00 = vid(i, j);
      const int v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1);
      const int v11 = vid(i + 1, j + 1);
      faces.push_back({v00, v10, v11});
      faces.push_back({v00, v11, v01});
    }
  }

  return TriangleMesh(std::move(vertices), std::move(faces));
}

}  // namespace meshplan
