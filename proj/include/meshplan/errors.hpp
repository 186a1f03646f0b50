#pragma once

#include <stdexcept>
#include <string>

namespace meshplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mesh and file I/O
struct ParseError : Error { using Error::Error; };
struct FormatError : Error { using Error::Error; };
struct EmptyMeshError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

struct DegenerateFaceError : Error {
  DegenerateFaceError(int face, const std::string& what) : Error(what), face_id(face) {}
  int face_id;
};

// Spatial index
struct CapacityError : Error { using Error::Error; };
struct OutOfBoundsError : Error { using Error::Error; };

// Metrics
struct MetricError : Error { using Error::Error; };

// CLI
struct UsageError : Error { using Error::Error; };

}  // namespace meshplan
