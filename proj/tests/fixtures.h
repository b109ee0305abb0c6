#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "meshrepair/mesh.h"

namespace meshrepair::fixtures {

inline void flip_face(IndexedMesh& m, int f) {
  std::swap(m.faces[f][1], m.faces[f][2]);
  if (m.has_uvs()) std::swap(m.face_uvs[f][1], m.face_uvs[f][2]);
}

inline void flip_all(IndexedMesh& m) {
  for (int f = 0; f < (int)m.faces.size(); ++f) flip_face(m, f);
}

// Concatenates b onto a (vertex/uv/material indices shifted).
inline IndexedMesh merge(IndexedMesh a, const IndexedMesh& b) {
  int vo = (int)a.vertices.size();
  int uo = (int)a.uvs.size();
  int mo = (int)a.materials.size();
  bool uvs = a.has_uvs() || b.has_uvs();
  bool mats = a.has_materials() || b.has_materials();
  if (uvs && !a.has_uvs()) a.face_uvs.assign(a.faces.size(), {-1, -1, -1});
  if (mats && !a.has_materials()) a.face_material.assign(a.faces.size(), -1);
  a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
  a.uvs.insert(a.uvs.end(), b.uvs.begin(), b.uvs.end());
  a.materials.insert(a.materials.end(), b.materials.begin(), b.materials.end());
  for (int f = 0; f < (int)b.faces.size(); ++f) {
    const auto& t = b.faces[f];
    a.faces.push_back({t[0] + vo, t[1] + vo, t[2] + vo});
    if (uvs) {
      std::array<int, 3> fu{-1, -1, -1};
      if (b.has_uvs())
        for (int k = 0; k < 3; ++k) fu[k] = b.face_uvs[f][k] < 0 ? -1 : b.face_uvs[f][k] + uo;
      a.face_uvs.push_back(fu);
    }
    if (mats) a.face_material.push_back(b.material_of(f) < 0 ? -1 : b.material_of(f) + mo);
  }
  return a;
}

// Axis-aligned cube [lo,hi]^3, 12 outward-wound triangles.
inline IndexedMesh make_cube(double lo = 0.0, double hi = 1.0) {
  IndexedMesh m;
  m.vertices = {{lo, lo, lo}, {hi, lo, lo}, {hi, hi, lo}, {lo, hi, lo},
                {lo, lo, hi}, {hi, lo, hi}, {hi, hi, hi}, {lo, hi, hi}};
  m.faces = {{0, 2, 1}, {0, 3, 2},   // z = lo
             {4, 5, 6}, {4, 6, 7},   // z = hi
             {0, 1, 5}, {0, 5, 4},   // y = lo
             {2, 3, 7}, {2, 7, 6},   // y = hi
             {0, 4, 7}, {0, 7, 3},   // x = lo
             {1, 2, 6}, {1, 6, 5}};  // x = hi
  return m;
}

// Cube with every square face split at its center into 4 triangles.
inline IndexedMesh make_split_cube(double lo = 0.0, double hi = 1.0) {
  IndexedMesh cube = make_cube(lo, hi);
  IndexedMesh m;
  m.vertices = cube.vertices;
  for (int q = 0; q < 6; ++q) {
    const auto& t0 = cube.faces[2 * q];
    const auto& t1 = cube.faces[2 * q + 1];
    // The pair shares the quad diagonal. Rebuild the quad cycle, keeping t0's
    // winding, by routing t0's shared edge through t1's private vertex.
    int p1 = -1;
    for (int v : t1)
      if (v != t0[0] && v != t0[1] && v != t0[2]) p1 = v;
    std::array<int, 4> quad{};
    for (int k = 0; k < 3; ++k) {
      int u = t0[k], w = t0[(k + 1) % 3];
      bool u_in = u == t1[0] || u == t1[1] || u == t1[2];
      bool w_in = w == t1[0] || w == t1[1] || w == t1[2];
      if (u_in && w_in) quad = {u, p1, w, t0[(k + 2) % 3]};
    }
    Vec3 center{0, 0, 0};
    for (int v : quad) center = center + cube.vertices[v];
    center = 0.25 * center;
    int cv = (int)m.vertices.size();
    m.vertices.push_back(center);
    for (int k = 0; k < 4; ++k) m.faces.push_back({quad[k], quad[(k + 1) % 4], cv});
  }
  return m;
}

// Unit-ish square in the z=0 plane as two triangles, optional uvs.
inline IndexedMesh make_quad(bool textured = false) {
  IndexedMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.faces = {{0, 1, 2}, {0, 2, 3}};
  if (textured) {
    m.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    m.face_uvs = {{0, 1, 2}, {0, 2, 3}};
    m.materials = {"checker"};
    m.face_material = {0, 0};
  }
  return m;
}

// Two textured unit quads side by side with a uv seam at x=1: both map to the
// full [0,1]^2 uv square, so the shared edge carries u=1 on the left and u=0
// on the right.
inline IndexedMesh make_seam_plane() {
  IndexedMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}, {1, 1, 0}, {2, 1, 0}};
  m.faces = {{0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4}};
  m.uvs = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  m.face_uvs = {{0, 1, 2}, {0, 2, 3}, {0, 1, 2}, {0, 2, 3}};
  m.materials = {"left", "right"};
  m.face_material = {0, 0, 1, 1};
  return m;
}

// Open fan disk of radius 1 in the z=0 plane, normals +z.
inline IndexedMesh make_disk(int n = 12) {
  IndexedMesh m;
  m.vertices.push_back({0, 0, 0});
  for (int i = 0; i < n; ++i) {
    double a = 2 * M_PI * i / n;
    m.vertices.push_back({std::cos(a), std::sin(a), 0});
  }
  for (int i = 0; i < n; ++i) m.faces.push_back({0, 1 + i, 1 + (i + 1) % n});
  return m;
}

// Moebius band: n segments, half width w, half twist. Non-orientable.
inline IndexedMesh make_mobius(int n = 12, double w = 0.3) {
  IndexedMesh m;
  for (int i = 0; i < n; ++i) {
    double u = 2 * M_PI * i / n;
    for (double v : {-w, w}) {
      double r = 1 + v * std::cos(u / 2);
      m.vertices.push_back({r * std::cos(u), r * std::sin(u), v * std::sin(u / 2)});
    }
  }
  for (int i = 0; i < n; ++i) {
    int t0 = 2 * i, b0 = 2 * i + 1;
    int t1 = 2 * ((i + 1) % n), b1 = t1 + 1;
    if (i + 1 == n) std::swap(t1, b1);  // the half twist
    m.faces.push_back({t0, b0, b1});
    m.faces.push_back({t0, b1, t1});
  }
  return m;
}

// Latitude-longitude unit sphere; rows latitude bands, cols meridians. Faces
// whose vertices all lie within hole_deg of the north pole are removed.
// Winding is forced outward per face.
inline IndexedMesh make_sphere(int rows, int cols, double hole_deg = 0) {
  IndexedMesh m;
  m.vertices.push_back({0, 0, 1});
  for (int r = 1; r < rows; ++r) {
    double th = M_PI * r / rows;
    for (int c = 0; c < cols; ++c) {
      double ph = 2 * M_PI * c / cols;
      m.vertices.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                            std::cos(th)});
    }
  }
  m.vertices.push_back({0, 0, -1});
  int south = (int)m.vertices.size() - 1;
  auto ring = [&](int r, int c) { return 1 + (r - 1) * cols + (c % cols); };
  for (int c = 0; c < cols; ++c) m.faces.push_back({0, ring(1, c), ring(1, c + 1)});
  for (int r = 1; r < rows - 1; ++r)
    for (int c = 0; c < cols; ++c) {
      int a = ring(r, c), b = ring(r, c + 1), d = ring(r + 1, c), e = ring(r + 1, c + 1);
      m.faces.push_back({a, d, e});
      m.faces.push_back({a, e, b});
    }
  for (int c = 0; c < cols; ++c) m.faces.push_back({south, ring(rows - 1, c + 1), ring(rows - 1, c)});

  for (auto& f : m.faces) {
    const Vec3 &a = m.vertices[f[0]], &b = m.vertices[f[1]], &c = m.vertices[f[2]];
    Vec3 n = cross(b - a, c - a);
    if (dot(n, a + b + c) < 0) std::swap(f[1], f[2]);
  }

  if (hole_deg > 0) {
    double limit = hole_deg * M_PI / 180 + 1e-9;
    std::vector<std::array<int, 3>> kept;
    for (const auto& f : m.faces) {
      bool inside = true;
      for (int v : f) inside = inside && std::acos(std::clamp(m.vertices[v][2], -1.0, 1.0)) <= limit;
      if (!inside) kept.push_back(f);
    }
    m.faces = std::move(kept);
  }
  return m;
}

// Two closed tetrahedra sharing exactly one vertex (index 0), both wound
// outward.
inline IndexedMesh make_bowtie() {
  IndexedMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0},  {0, 0, 1},
                {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
  m.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3},
             {0, 4, 5}, {0, 6, 4}, {0, 5, 6}, {4, 6, 5}};
  return m;
}

// Closed "staircase" of two axis-aligned boxes of different heights joined at
// x=1; the shared wall creates T-junction geometry across z=0.5.
inline IndexedMesh make_staircase() {
  IndexedMesh m;
  // Box A: [0,1]x[0,1]x[0,1]; box B: [1,2]x[0,1]x[0,0.5]. Surface of the
  // union, triangulated by hand; the x=1 wall exists only above z=0.5.
  m.vertices = {
      {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},          // 0-3 A bottom
      {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},          // 4-7 A top
      {2, 0, 0}, {2, 1, 0},                                // 8-9 B bottom far
      {1, 0, 0.5}, {2, 0, 0.5}, {2, 1, 0.5}, {1, 1, 0.5},  // 10-13 B top ring
  };
  auto quad = [&](int a, int b, int c, int d) {
    m.faces.push_back({a, b, c});
    m.faces.push_back({a, c, d});
  };
  quad(0, 3, 2, 1);      // floor under A (z=0, normal -z)
  quad(1, 2, 9, 8);      // floor under B
  quad(4, 5, 6, 7);      // A roof (z=1)
  quad(10, 11, 12, 13);  // B roof (z=0.5)
  quad(0, 1, 5, 4);      // A front y=0, full height (T-junction at vertex 10)
  quad(1, 8, 11, 10);    // B front y=0
  quad(2, 3, 7, 6);      // A back y=1, full height (T-junction at vertex 13)
  quad(9, 2, 13, 12);    // B back y=1
  quad(0, 4, 7, 3);      // west x=0
  quad(8, 9, 12, 11);    // east x=2
  quad(10, 13, 6, 5);    // A's east side exposed above B's roof (+x)
  return m;
}

// Cube plus one duplicated face built from fresh vertices at the same
// positions (survives index-based deduplication).
inline IndexedMesh make_duplicate_face_cube() {
  IndexedMesh m = make_cube();
  int v = (int)m.vertices.size();
  m.vertices.push_back(m.vertices[0]);
  m.vertices.push_back(m.vertices[2]);
  m.vertices.push_back(m.vertices[1]);
  m.faces.push_back({v, v + 1, v + 2});
  return m;
}

// Cube plus a fin: one extra triangle hanging off an existing edge, making it
// three-incident.
inline IndexedMesh make_fin_cube() {
  IndexedMesh m = make_cube();
  int v = (int)m.vertices.size();
  m.vertices.push_back({1.6, 0.5, -0.6});
  m.faces.push_back({1, 2, v});
  return m;
}

inline IndexedMesh make_defective_cube() {
  IndexedMesh m = make_cube();
  m.faces.erase(m.faces.begin());  // delete one bottom triangle
  flip_face(m, 2);
  flip_face(m, 6);
  flip_face(m, 9);
  return m;
}

inline IndexedMesh make_inward_cube() {
  IndexedMesh m = make_cube();
  flip_all(m);
  return m;
}

inline IndexedMesh make_interpenetrating() {
  return merge(make_cube(0, 1), make_cube(0.5, 1.5));
}

inline IndexedMesh make_nested_flipped() {
  IndexedMesh inner = make_cube(1, 2);
  flip_all(inner);
  return merge(make_cube(0, 3), inner);
}

inline IndexedMesh make_two_components() { return merge(make_cube(0, 1), make_cube(3, 4)); }

}  // namespace meshrepair::fixtures
