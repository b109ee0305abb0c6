#include "meshrepair/obj_io.h"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace meshrepair {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

// Resolves a 1-based (possibly negative) OBJ index against the current table
// size. Returns a 0-based index.
int resolve_index(long idx, size_t count, const std::string& path, int line, const char* what) {
  long r = idx > 0 ? idx - 1 : (long)count + idx;
  if (idx == 0 || r < 0 || r >= (long)count)
    fail(path, line, std::string(what) + " index " + std::to_string(idx) + " out of range");
  return (int)r;
}

struct Corner {
  int v = -1;
  int vt = -1;
};

Corner parse_corner(const std::string& tok, size_t nv, size_t nvt, const std::string& path, int line) {
  Corner c;
  size_t s1 = tok.find('/');
  try {
    if (s1 == std::string::npos) {
      c.v = resolve_index(std::stol(tok), nv, path, line, "vertex");
      return c;
    }
    c.v = resolve_index(std::stol(tok.substr(0, s1)), nv, path, line, "vertex");
    size_t s2 = tok.find('/', s1 + 1);
    std::string tpart = s2 == std::string::npos ? tok.substr(s1 + 1) : tok.substr(s1 + 1, s2 - s1 - 1);
    if (!tpart.empty()) c.vt = resolve_index(std::stol(tpart), nvt, path, line, "texture");
    // normal index (after the second slash) is parsed and discarded
  } catch (const std::invalid_argument&) {
    fail(path, line, "malformed face corner '" + tok + "'");
  } catch (const std::out_of_range&) {
    fail(path, line, "malformed face corner '" + tok + "'");
  }
  return c;
}

}  // namespace

IndexedMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  IndexedMesh m;
  bool any_uv_corner = false;
  bool any_material = false;
  int current_material = -1;
  std::map<std::string, int> material_ids;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key) || key[0] == '#') continue;

    if (key == "v") {
      Vec3 p;
      if (!(ss >> p[0] >> p[1] >> p[2])) fail(path, lineno, "vertex needs three coordinates");
      m.vertices.push_back(p);
    } else if (key == "vt") {
      Vec2 t;
      if (!(ss >> t[0] >> t[1])) fail(path, lineno, "texture coordinate needs two values");
      m.uvs.push_back(t);
    } else if (key == "f") {
      std::vector<Corner> corners;
      std::string tok;
      while (ss >> tok) corners.push_back(parse_corner(tok, m.vertices.size(), m.uvs.size(), path, lineno));
      if (corners.size() < 3) fail(path, lineno, "face needs at least three corners");
      // fan triangulation; uv corners follow the fan
      for (size_t i = 1; i + 1 < corners.size(); i++) {
        m.faces.push_back({corners[0].v, corners[i].v, corners[i + 1].v});
        m.face_uvs.push_back({corners[0].vt, corners[i].vt, corners[i + 1].vt});
        if (corners[0].vt >= 0 || corners[i].vt >= 0 || corners[i + 1].vt >= 0) any_uv_corner = true;
        m.face_material.push_back(current_material);
      }
    } else if (key == "usemtl") {
      std::string name;
      ss >> name;
      if (name.empty()) fail(path, lineno, "usemtl needs a material name");
      auto it = material_ids.find(name);
      if (it == material_ids.end()) {
        it = material_ids.emplace(name, (int)m.materials.size()).first;
        m.materials.push_back(name);
      }
      current_material = it->second;
      any_material = true;
    }
    // vn, g, o, s, mtllib and anything unknown are skipped
  }

  if (!any_uv_corner) {
    m.face_uvs.clear();
    m.uvs.clear();
  }
  if (!any_material) {
    m.face_material.clear();
    m.materials.clear();
  }
  return m;
}

void save_mesh(const std::string& path, const IndexedMesh& mesh) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error(path + ": cannot open file for writing");

  for (const auto& v : mesh.vertices) std::fprintf(f, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
  for (const auto& t : mesh.uvs) std::fprintf(f, "vt %.17g %.17g\n", t[0], t[1]);

  int current_material = -1;
  for (size_t i = 0; i < mesh.faces.size(); i++) {
    int mat = mesh.material_of((int)i);
    if (mat >= 0 && mat != current_material) {
      std::fprintf(f, "usemtl %s\n", mesh.materials[mat].c_str());
      current_material = mat;
    }
    const auto& t = mesh.faces[i];
    bool with_uv = false;
    if (mesh.has_uvs()) {
      const auto& u = mesh.face_uvs[i];
      with_uv = u[0] >= 0 && u[1] >= 0 && u[2] >= 0;
      if (with_uv)
        std::fprintf(f, "f %d/%d %d/%d %d/%d\n", t[0] + 1, u[0] + 1, t[1] + 1, u[1] + 1, t[2] + 1,
                     u[2] + 1);
    }
    if (!with_uv) std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
  }
  std::fclose(f);
}

NormalizeResult normalize(IndexedMesh& mesh) {
  NormalizeResult res;
  std::set<std::array<int, 3>> seen;
  IndexedMesh out;
  out.vertices = mesh.vertices;
  out.uvs = mesh.uvs;
  out.materials = mesh.materials;

  for (size_t i = 0; i < mesh.faces.size(); i++) {
    const auto& t = mesh.faces[i];
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      res.removed_degenerate++;
      continue;
    }
    std::array<int, 3> key = t;
    std::sort(key.begin(), key.end());
    if (!seen.insert(key).second) {
      res.removed_duplicates++;
      continue;
    }
    out.faces.push_back(t);
    if (mesh.has_uvs()) out.face_uvs.push_back(mesh.face_uvs[i]);
    if (mesh.has_materials()) out.face_material.push_back(mesh.face_material[i]);
  }
  if (!mesh.has_uvs()) out.face_uvs.clear();
  if (!mesh.has_materials()) out.face_material.clear();
  mesh = std::move(out);
  return res;
}

}  // namespace meshrepair
