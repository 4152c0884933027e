#include "mcflab/mesh_io.hpp"

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mcflab {

namespace {

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(c));
  return ext;
}

// next non-comment token ('#' comments to end of line)
bool next_token(std::istream& in, std::string& tok) {
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return true;
  }
  return false;
}

TriangleMesh read_off(std::istream& in, const std::string& path) {
  std::string tok;
  if (!next_token(in, tok) || tok != "OFF")
    throw Error(path + ": missing OFF header");
  long nv = 0, nf = 0, ne = 0;
  if (!(in >> nv >> nf >> ne)) throw Error(path + ": malformed OFF counts");
  TriangleMesh mesh;
  mesh.V.resize(nv, 3);
  for (long i = 0; i < nv; ++i) {
    double x, y, z;
    if (!(in >> x >> y >> z))
      throw Error(path + ": truncated vertex list at vertex " +
                  std::to_string(i));
    mesh.V.row(i) << x, y, z;
  }
  mesh.F.resize(nf, 3);
  for (long f = 0; f < nf; ++f) {
    int arity;
    if (!(in >> arity)) throw Error(path + ": truncated face list");
    if (arity != 3)
      throw Error(path + ": face " + std::to_string(f) +
                  " is not a triangle (arity " + std::to_string(arity) + ")");
    for (int e = 0; e < 3; ++e) {
      int idx;
      if (!(in >> idx)) throw Error(path + ": truncated face list");
      mesh.F(f, e) = idx;
    }
  }
  return mesh;
}

int parse_obj_index(const std::string& field, long nv, const std::string& path) {
  // "v", "v/vt", "v//vn", "v/vt/vn" forms; only the vertex index is used
  const auto slash = field.find('/');
  const std::string head = slash == std::string::npos ? field : field.substr(0, slash);
  long idx = std::strtol(head.c_str(), nullptr, 10);
  if (idx < 0) idx = nv + idx + 1;  // negative indices are relative
  if (idx < 1 || idx > nv)
    throw Error(path + ": face index " + head + " out of range");
  return static_cast<int>(idx - 1);
}

TriangleMesh read_obj(std::istream& in, const std::string& path) {
  std::vector<std::array<double, 3>> verts;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      std::array<double, 3> p{};
      if (!(ls >> p[0] >> p[1] >> p[2]))
        throw Error(path + ": malformed vertex line: " + line);
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<std::string> fields;
      std::string fld;
      while (ls >> fld) fields.push_back(fld);
      if (fields.size() != 3)
        throw Error(path + ": only triangular faces are supported: " + line);
      std::array<int, 3> tri{};
      for (int e = 0; e < 3; ++e)
        tri[e] = parse_obj_index(fields[e], static_cast<long>(verts.size()),
                                 path);
      faces.push_back(tri);
    }
    // vn/vt/usemtl/etc.: ignored, geometry is recomputed downstream
  }
  TriangleMesh mesh;
  mesh.V.resize(static_cast<long>(verts.size()), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    mesh.V.row(static_cast<long>(i)) << verts[i][0], verts[i][1], verts[i][2];
  mesh.F.resize(static_cast<long>(faces.size()), 3);
  for (size_t f = 0; f < faces.size(); ++f)
    mesh.F.row(static_cast<long>(f)) << faces[f][0], faces[f][1], faces[f][2];
  return mesh;
}

}  // namespace

TriangleMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file: " + path);
  const std::string ext = lower_ext(path);
  TriangleMesh mesh;
  if (ext == "off")
    mesh = read_off(in, path);
  else if (ext == "obj")
    mesh = read_obj(in, path);
  else
    throw Error("unknown mesh extension ." + ext + " for " + path);
  mesh.validate();
  return mesh;
}

void write_mesh(const TriangleMesh& mesh, const std::string& path,
                int precision) {
  const std::string ext = lower_ext(path);
  if (ext != "off" && ext != "obj")
    throw Error("unknown mesh extension ." + ext + " for " + path);
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  char buf[96];
  if (ext == "off") {
    out << "OFF\n" << mesh.n_vertices() << " " << mesh.n_faces() << " 0\n";
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.*g %.*g %.*g\n", precision,
                    mesh.V(i, 0), precision, mesh.V(i, 1), precision,
                    mesh.V(i, 2));
      out << buf;
    }
    for (int f = 0; f < mesh.n_faces(); ++f)
      out << "3 " << mesh.F(f, 0) << " " << mesh.F(f, 1) << " " << mesh.F(f, 2)
          << "\n";
  } else {
    for (int i = 0; i < mesh.n_vertices(); ++i) {
      std::snprintf(buf, sizeof(buf), "v %.*g %.*g %.*g\n", precision,
                    mesh.V(i, 0), precision, mesh.V(i, 1), precision,
                    mesh.V(i, 2));
      out << buf;
    }
    for (int f = 0; f < mesh.n_faces(); ++f)
      out << "f " << mesh.F(f, 0) + 1 << " " << mesh.F(f, 1) + 1 << " "
          << mesh.F(f, 2) + 1 << "\n";
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace mcflab
