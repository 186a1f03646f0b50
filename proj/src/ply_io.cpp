#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "meshplan/errors.hpp"
#include "meshplan/mesh.hpp"

namespace meshplan {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY reader assumes a little-endian host");

enum class ScalarType { i8, u8, i16, u16, i32, u32, f32, f64 };

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::i8:
    case ScalarType::u8: return 1;
    case ScalarType::i16:
    case ScalarType::u16: return 2;
    case ScalarType::i32:
    case ScalarType::u32:
    case ScalarType::f32: return 4;
    case ScalarType::f64: return 8;
  }
  return 0;
}

std::optional<ScalarType> parse_scalar_type(const std::string& s) {
  if (s == "char" || s == "int8") return ScalarType::i8;
  if (s == "uchar" || s == "uint8") return ScalarType::u8;
  if (s == "short" || s == "int16") return ScalarType::i16;
  if (s == "ushort" || s == "uint16") return ScalarType::u16;
  if (s == "int" || s == "int32") return ScalarType::i32;
  if (s == "uint" || s == "uint32") return ScalarType::u32;
  if (s == "float" || s == "float32") return ScalarType::f32;
  if (s == "double" || s == "float64") return ScalarType::f64;
  return std::nullopt;
}

struct Property {
  std::string name;
  bool is_list = false;
  ScalarType count_type = ScalarType::u8;
  ScalarType value_type = ScalarType::f32;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  bool binary = false;
  std::vector<Element> elements;
};

Header parse_header(std::istream& in) {
  Header h;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty PLY file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") throw ParseError("missing 'ply' magic");

  bool have_format = false;
  bool done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw.empty() || kw == "comment" || kw == "obj_info") continue;
    if (kw == "format") {
      std::string fmt, version;
      ls >> fmt >> version;
      if (fmt == "ascii") h.binary = false;
      else if (fmt == "binary_little_endian") h.binary = true;
      else throw ParseError("unsupported PLY format '" + fmt + "'");
      have_format = true;
    } else if (kw == "element") {
      Element e;
      long long n = -1;
      ls >> e.name >> n;
      if (e.name.empty() || n < 0) throw ParseError("malformed element line: " + line);
      e.count = static_cast<std::size_t>(n);
      h.elements.push_back(std::move(e));
    } else if (kw == "property") {
      if (h.elements.empty()) throw ParseError("property before any element");
      Property p;
      std::string t1;
      ls >> t1;
      if (t1 == "list") {
        std::string ct, vt;
        ls >> ct >> vt >> p.name;
        auto c = parse_scalar_type(ct);
        auto v = parse_scalar_type(vt);
        if (!c || !v || p.name.empty()) throw ParseError("malformed list property: " + line);
        p.is_list = true;
        p.count_type = *c;
        p.value_type = *v;
      } else {
        auto v = parse_scalar_type(t1);
        ls >> p.name;
        if (!v || p.name.empty()) throw ParseError("malformed property: " + line);
        p.value_type = *v;
      }
      h.elements.back().properties.push_back(std::move(p));
    } else if (kw == "end_header") {
      done = true;
      break;
    } else {
      throw ParseError("unknown header keyword '" + kw + "'");
    }
  }
  if (!done) throw ParseError("missing end_header");
  if (!have_format) throw ParseError("missing format line");
  return h;
}

// Cursor over the data section, ASCII (token stream) or binary (byte buffer).
class DataReader {
 public:
  DataReader(bool binary, std::istream& in) : binary_(binary), in_(in) {}

  double read_scalar(ScalarType t) {
    if (!binary_) {
      double v = 0.0;
      if (!(in_ >> v)) throw ParseError("unexpected end of ASCII data");
      return v;
    }
    unsigned char buf[8];
    const std::size_t n = scalar_size(t);
    if (!in_.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n))) {
      throw ParseError("unexpected end of binary data");
    }
    switch (t) {
      case ScalarType::i8: { std::int8_t x; std::memcpy(&x, buf, 1); return x; }
      case ScalarType::u8: { std::uint8_t x; std::memcpy(&x, buf, 1); return x; }
      case ScalarType::i16: { std::int16_t x; std::memcpy(&x, buf, 2); return x; }
      case ScalarType::u16: { std::uint16_t x; std::memcpy(&x, buf, 2); return x; }
      case ScalarType::i32: { std::int32_t x; std::memcpy(&x, buf, 4); return x; }
      case ScalarType::u32: { std::uint32_t x; std::memcpy(&x, buf, 4); return static_cast<double>(x); }
      case ScalarType::f32: { float x; std::memcpy(&x, buf, 4); return x; }
      case ScalarType::f64: { double x; std::memcpy(&x, buf, 8); return x; }
    }
    return 0.0;
  }

  long long read_integer(ScalarType t) {
    const double v = read_scalar(t);
    return static_cast<long long>(v);
  }

 private:
  bool binary_;
  std::istream& in_;
};

}  // namespace

TriangleMesh load_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");

  const Header header = parse_header(in);
  DataReader reader(header.binary, in);

  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  for (const Element& elem : header.elements) {
    if (elem.name == "vertex") {
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t p = 0; p < elem.properties.size(); ++p) {
        const Property& prop = elem.properties[p];
        if (prop.is_list) continue;
        if (prop.name == "x") ix = static_cast<int>(p);
        if (prop.name == "y") iy = static_cast<int>(p);
        if (prop.name == "z") iz = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0) throw ParseError("vertex element lacks x/y/z properties");

      vertices.reserve(elem.count);
      for (std::size_t i = 0; i < elem.count; ++i) {
        Vec3 v = Vec3::Zero();
        for (std::size_t p = 0; p < elem.properties.size(); ++p) {
          const Property& prop = elem.properties[p];
          if (prop.is_list) {
            const long long n = reader.read_integer(prop.count_type);
            for (long long k = 0; k < n; ++k) reader.read_scalar(prop.value_type);
            continue;
          }
          const double x = reader.read_scalar(prop.value_type);
          if (static_cast<int>(p) == ix) v.x() = x;
          if (static_cast<int>(p) == iy) v.y() = x;
          if (static_cast<int>(p) == iz) v.z() = x;
        }
        vertices.push_back(v);
      }
    } else if (elem.name == "face") {
      // The index list is the property named vertex_indices/vertex_index,
      // or the first list property if neither name is present.
      int list_idx = -1;
      for (std::size_t p = 0; p < elem.properties.size(); ++p) {
        const Property& prop = elem.properties[p];
        if (!prop.is_list) continue;
        if (prop.name == "vertex_indices" || prop.name == "vertex_index") {
          list_idx = static_cast<int>(p);
          break;
        }
        if (list_idx < 0) list_idx = static_cast<int>(p);
      }
      if (list_idx < 0) throw ParseError("face element lacks an index list property");

      faces.reserve(elem.count);
      for (std::size_t i = 0; i < elem.count; ++i) {
        for (std::size_t p = 0; p < elem.properties.size(); ++p) {
          const Property& prop = elem.properties[p];
          if (!prop.is_list) {
            reader.read_scalar(prop.value_type);
            continue;
          }
          const long long n = reader.read_integer(prop.count_type);
          if (static_cast<int>(p) == list_idx) {
            if (n != 3) {
              throw FormatError("face " + std::to_string(i) + " has " + std::to_string(n) +
                                " vertices; only triangles are supported");
            }
            std::array<int, 3> f{};
            for (int k = 0; k < 3; ++k) f[k] = static_cast<int>(reader.read_integer(prop.value_type));
            faces.push_back(f);
          } else {
            for (long long k = 0; k < n; ++k) reader.read_scalar(prop.value_type);
          }
        }
      }
    } else {
      // Unknown element: consume it property by property.
      for (std::size_t i = 0; i < elem.count; ++i) {
        for (const Property& prop : elem.properties) {
          if (prop.is_list) {
            const long long n = reader.read_integer(prop.count_type);
            for (long long k = 0; k < n; ++k) reader.read_scalar(prop.value_type);
          } else {
            reader.read_scalar(prop.value_type);
          }
        }
      }
    }
  }

  if (faces.empty()) throw EmptyMeshError("mesh '" + path.string() + "' has no faces");

  // Validate indices, then drop zero-area faces before construction.
  const int nv = static_cast<int>(vertices.size());
  std::vector<std::array<int, 3>> kept;
  kept.reserve(faces.size());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const auto& f = faces[i];
    for (int k = 0; k < 3; ++k) {
      if (f[k] < 0 || f[k] >= nv) {
        throw FormatError("face " + std::to_string(i) + " references vertex " +
                          std::to_string(f[k]) + " out of range");
      }
    }
    const Vec3 e1 = vertices[f[1]] - vertices[f[0]];
    const Vec3 e2 = vertices[f[2]] - vertices[f[0]];
    const double len = e1.cross(e2).norm();
    if (len <= 1e-12 * e1.norm() * e2.norm() || len == 0.0) continue;
    kept.push_back(f);
  }
  if (kept.empty()) throw EmptyMeshError("mesh '" + path.string() + "' has no non-degenerate faces");

  return TriangleMesh(std::move(vertices), std::move(kept));
}

void save_ply(const TriangleMesh& mesh, const std::filesystem::path& path, PlyFormat format) {
  if (mesh.empty()) throw EmptyMeshError("refusing to write an empty mesh");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");

  const bool binary = format == PlyFormat::binary_little_endian;
  out << "ply\n"
      << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n")
      << "element vertex " << mesh.vertex_count() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "element face " << mesh.face_count() << "\n"
      << "property list uchar int vertex_indices\n"
      << "end_header\n";

  if (binary) {
    for (const Vec3& v : mesh.vertices()) {
      const double xyz[3] = {v.x(), v.y(), v.z()};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    for (const auto& f : mesh.faces()) {
      const unsigned char n = 3;
      const std::int32_t idx[3] = {f[0], f[1], f[2]};
      out.write(reinterpret_cast<const char*>(&n), 1);
      out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
  } else {
    char buf[96];
    for (const Vec3& v : mesh.vertices()) {
      std::snprintf(buf, sizeof(buf), "%.9g %.9g %.9g\n", v.x(), v.y(), v.z());
      out << buf;
    }
    for (const auto& f : mesh.faces()) {
      out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    }
  }

  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace meshplan
