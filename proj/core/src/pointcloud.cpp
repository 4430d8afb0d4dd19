#include "cadseq/pointcloud.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cadseq/errors.hpp"

namespace cadseq {

void Box3::expand(const Vec3& p) {
  lo.x = std::min(lo.x, p.x);
  lo.y = std::min(lo.y, p.y);
  lo.z = std::min(lo.z, p.z);
  hi.x = std::max(hi.x, p.x);
  hi.y = std::max(hi.y, p.y);
  hi.z = std::max(hi.z, p.z);
}

double Box3::diagonal() const { return empty() ? 0.0 : norm(hi - lo); }

double Box3::volume() const {
  if (empty()) return 0.0;
  const Vec3 e = extent();
  return e.x * e.y * e.z;
}

Box3 bounding_box(const PointCloud& cloud) {
  Box3 box;
  for (const Vec3& p : cloud.points) box.expand(p);
  return box;
}

Vec3 centroid(const PointCloud& cloud) {
  Vec3 c;
  for (const Vec3& p : cloud.points) c = c + p;
  const double n = cloud.points.empty() ? 1.0 : static_cast<double>(cloud.points.size());
  return c * (1.0 / n);
}

namespace {

void write_float_le(std::ostream& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  const char bytes[4] = {
      static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
      static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
  out.write(bytes, 4);
}

float read_float_le(const unsigned char* b) {
  const std::uint32_t u = static_cast<std::uint32_t>(b[0]) |
                          (static_cast<std::uint32_t>(b[1]) << 8) |
                          (static_cast<std::uint32_t>(b[2]) << 16) |
                          (static_cast<std::uint32_t>(b[3]) << 24);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void write_ply(std::ostream& out, const PointCloud& cloud, bool binary,
               const std::vector<std::string>& comments) {
  const bool with_normals = cloud.has_normals();
  out << "ply\n";
  out << (binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n");
  for (const std::string& c : comments) out << "comment " << c << "\n";
  out << "element vertex " << cloud.points.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (with_normals) {
    out << "property float nx\nproperty float ny\nproperty float nz\n";
  }
  out << "end_header\n";

  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3& p = cloud.points[i];
    if (binary) {
      write_float_le(out, static_cast<float>(p.x));
      write_float_le(out, static_cast<float>(p.y));
      write_float_le(out, static_cast<float>(p.z));
      if (with_normals) {
        const Vec3& n = cloud.normals[i];
        write_float_le(out, static_cast<float>(n.x));
        write_float_le(out, static_cast<float>(n.y));
        write_float_le(out, static_cast<float>(n.z));
      }
    } else {
      out << format_g9(p.x) << ' ' << format_g9(p.y) << ' ' << format_g9(p.z);
      if (with_normals) {
        const Vec3& n = cloud.normals[i];
        out << ' ' << format_g9(n.x) << ' ' << format_g9(n.y) << ' ' << format_g9(n.z);
      }
      out << '\n';
    }
  }
}

PointCloud read_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "ply") {
    throw FormatError("not a PLY file");
  }
  bool binary = false;
  std::size_t vertex_count = 0;
  std::vector<std::string> properties;
  bool in_vertex_element = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "binary_little_endian") {
        binary = true;
      } else if (fmt != "ascii") {
        throw FormatError("unsupported PLY format '" + fmt + "'");
      }
    } else if (tok == "element") {
      std::string name;
      ls >> name >> vertex_count;
      in_vertex_element = (name == "vertex");
      if (!in_vertex_element && vertex_count > 0 && !properties.empty()) {
        throw FormatError("unsupported PLY element '" + name + "'");
      }
    } else if (tok == "property" && in_vertex_element) {
      std::string type, name;
      ls >> type >> name;
      if (type != "float" && type != "double") {
        throw FormatError("unsupported PLY property type '" + type + "'");
      }
      properties.push_back(name);
    } else if (tok == "end_header") {
      break;
    }
  }

  auto index_of = [&](const char* name) -> int {
    const auto it = std::find(properties.begin(), properties.end(), name);
    return it == properties.end() ? -1 : static_cast<int>(it - properties.begin());
  };
  const int ix = index_of("x"), iy = index_of("y"), iz = index_of("z");
  const int inx = index_of("nx"), iny = index_of("ny"), inz = index_of("nz");
  if (ix < 0 || iy < 0 || iz < 0) {
    throw FormatError("PLY vertex element lacks x/y/z properties");
  }
  const bool with_normals = inx >= 0 && iny >= 0 && inz >= 0;

  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  std::vector<double> values(properties.size());
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (binary) {
      std::vector<unsigned char> buf(properties.size() * 4);
      if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
        throw FormatError("truncated PLY payload");
      }
      for (std::size_t p = 0; p < properties.size(); ++p) {
        values[p] = read_float_le(buf.data() + p * 4);
      }
    } else {
      if (!std::getline(in, line)) throw FormatError("truncated PLY payload");
      std::istringstream ls(line);
      for (std::size_t p = 0; p < properties.size(); ++p) {
        if (!(ls >> values[p])) throw FormatError("malformed PLY vertex line");
      }
    }
    cloud.points.push_back({values[ix], values[iy], values[iz]});
    if (with_normals) {
      cloud.normals.push_back({values[inx], values[iny], values[inz]});
    }
  }
  return cloud;
}

void write_xyz(std::ostream& out, const PointCloud& cloud) {
  const bool with_normals = cloud.has_normals();
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3& p = cloud.points[i];
    out << format_g9(p.x) << ' ' << format_g9(p.y) << ' ' << format_g9(p.z);
    if (with_normals) {
      const Vec3& n = cloud.normals[i];
      out << ' ' << format_g9(n.x) << ' ' << format_g9(n.y) << ' ' << format_g9(n.z);
    }
    out << '\n';
  }
}

PointCloud read_xyz(std::istream& in) {
  PointCloud cloud;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double x, y, z;
    if (!(ls >> x >> y >> z)) {
      throw FormatError("malformed XYZ line: '" + line + "'");
    }
    cloud.points.push_back({x, y, z});
    double nx, ny, nz;
    if (ls >> nx >> ny >> nz) {
      cloud.normals.push_back({nx, ny, nz});
    }
  }
  if (!cloud.normals.empty() && cloud.normals.size() != cloud.points.size()) {
    throw FormatError("XYZ file mixes lines with and without normals");
  }
  return cloud;
}

PointCloud read_pointcloud_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".ply") {
    return read_ply(in);
  }
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".xyz") {
    return read_xyz(in);
  }
  throw FormatError("unknown point-cloud extension for '" + path + "'");
}

void write_pointcloud_file(const std::string& path, const PointCloud& cloud,
                           bool binary_ply, const std::vector<std::string>& comments) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path + "'");
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".xyz") {
    write_xyz(out, cloud);
  } else {
    write_ply(out, cloud, binary_ply, comments);
  }
}

}  // namespace cadseq
