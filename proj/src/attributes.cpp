#include "meshrepair/attributes.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <vector>

namespace meshrepair {

bool exact_uv_at(const IndexedMesh& source, int f, const ExactPoint& p,
                 std::array<Rational, 2>& uv) {
  int u0 = source.corner_uv(f, 0), u1 = source.corner_uv(f, 1), u2 = source.corner_uv(f, 2);
  if (u0 < 0 || u1 < 0 || u2 < 0) return false;
  const auto& tri = source.faces[f];
  auto w = barycentric_coords(p, ExactPoint::from_vec3(source.vertices[tri[0]]),
                              ExactPoint::from_vec3(source.vertices[tri[1]]),
                              ExactPoint::from_vec3(source.vertices[tri[2]]));
  for (int k = 0; k < 2; ++k)
    uv[k] = w[0] * Rational(source.uvs[u0][k]) + w[1] * Rational(source.uvs[u1][k]) +
            w[2] * Rational(source.uvs[u2][k]);
  return true;
}

namespace {

// Source faces bucketed by supporting plane, ascending id. A point is located
// hint-first (the face's own chart wins on its boundary, so values never leak
// across uv seams), then lowest containing id among the given candidates, then
// lowest containing id in the hint's whole plane bucket.
struct PlaneBuckets {
  std::map<ExactPlane, std::vector<int>> buckets;
  std::vector<ExactPoint> verts;

  explicit PlaneBuckets(const IndexedMesh& source) {
    verts.reserve(source.vertices.size());
    for (const Vec3& v : source.vertices) verts.push_back(ExactPoint::from_vec3(v));
    for (int f = 0; f < (int)source.faces.size(); ++f) {
      const auto& t = source.faces[f];
      ExactPlane pl = plane_from_points(verts[t[0]], verts[t[1]], verts[t[2]]);
      if (pl.a == 0 && pl.b == 0 && pl.c == 0) continue;  // degenerate
      buckets[pl.canonical_unoriented()].push_back(f);
    }
  }

  bool contains(const IndexedMesh& source, int f, const ExactPoint& p) const {
    const auto& s = source.faces[f];
    ExactPlane pl = plane_from_points(verts[s[0]], verts[s[1]], verts[s[2]]);
    if (pl.a == 0 && pl.b == 0 && pl.c == 0) return false;
    return point_in_triangle(p, verts[s[0]], verts[s[1]], verts[s[2]]) !=
           TrianglePosition::Outside;
  }

  int locate(const IndexedMesh& source, int hint, const std::vector<int>* candidates,
             const ExactPoint& p) const {
    if (contains(source, hint, p)) return hint;
    if (candidates) {
      for (int f : *candidates)
        if (contains(source, f, p)) return f;
      return -1;
    }
    const auto& t = source.faces[hint];
    ExactPlane pl = plane_from_points(verts[t[0]], verts[t[1]], verts[t[2]]);
    if (pl.a == 0 && pl.b == 0 && pl.c == 0) return -1;
    auto it = buckets.find(pl.canonical_unoriented());
    if (it == buckets.end()) return -1;
    for (int f : it->second)
      if (contains(source, f, p)) return f;
    return -1;
  }
};

int push_uv(IndexedMesh& mesh, std::map<Vec2, int>& ids, const Vec2& uv) {
  auto [it, fresh] = ids.try_emplace(uv, (int)mesh.uvs.size());
  if (fresh) mesh.uvs.push_back(uv);
  return it->second;
}

}  // namespace

void recover_attributes(InterfaceMesh& interface, const IndexedMesh& source) {
  IndexedMesh& mesh = interface.mesh;
  int nf = (int)mesh.faces.size();
  int nv = (int)mesh.vertices.size();
  bool want_uvs = source.has_uvs();
  bool want_materials = source.has_materials();
  if (!want_uvs && !want_materials) return;

  PlaneBuckets buckets(source);

  if (want_uvs) {
    mesh.uvs.clear();
    mesh.face_uvs.assign(nf, {-1, -1, -1});
  }
  if (want_materials) {
    mesh.materials = source.materials;
    mesh.face_material.assign(nf, -1);
  }

  // Inherited faces: locate the exact barycenter to pick the representative
  // (material, updated face_source), then each corner independently for its
  // uv. Faces produced by group retriangulation restrict the search to the
  // group's attribute-continuous candidates. A corner that escapes every
  // candidate (facet sliver past an open source boundary) falls back to the
  // representative's affine uv map extended past the triangle.
  std::map<Vec2, int> uv_ids;
  for (int f = 0; f < nf; ++f) {
    int hint = interface.face_source[f];
    if (hint < 0) continue;
    const std::vector<int>* cands = nullptr;
    int g = f < (int)interface.face_group.size() ? interface.face_group[f] : -1;
    if (g >= 0 && g < (int)interface.group_sources.size() &&
        !interface.group_sources[g].empty())
      cands = &interface.group_sources[g];
    const auto& tri = mesh.faces[f];
    ExactPoint bc = interface.exact[tri[0]] + interface.exact[tri[1]] + interface.exact[tri[2]];
    Rational third(1, 3);
    bc.x *= third, bc.y *= third, bc.z *= third;
    int rep = buckets.locate(source, hint, cands, bc);
    if (rep < 0) rep = hint;
    interface.face_source[f] = rep;
    if (want_materials) mesh.face_material[f] = source.material_of(rep);
    if (!want_uvs) continue;
    for (int k = 0; k < 3; ++k) {
      int sf = buckets.locate(source, hint, cands, interface.exact[tri[k]]);
      if (sf < 0) sf = rep;
      std::array<Rational, 2> uv;
      if (!exact_uv_at(source, sf, interface.exact[tri[k]], uv)) continue;
      mesh.face_uvs[f][k] = push_uv(mesh, uv_ids, {uv[0].get_d(), uv[1].get_d()});
    }
  }

  // Extra faces inherit uvs through vertices: a vertex touched by attributed
  // corners averages their distinct values; the rest flood outward, each
  // round averaging assigned edge neighbours (ascending vertex id) until no
  // vertex changes. Unreachable vertices keep (0,0).
  if (want_uvs) {
    std::vector<std::vector<Vec2>> pool(nv);
    for (int f = 0; f < nf; ++f)
      for (int k = 0; k < 3; ++k) {
        int u = mesh.corner_uv(f, k);
        if (u < 0) continue;
        auto& vals = pool[mesh.faces[f][k]];
        if (std::find(vals.begin(), vals.end(), mesh.uvs[u]) == vals.end())
          vals.push_back(mesh.uvs[u]);
      }
    std::vector<Vec2> vuv(nv, {0.0, 0.0});
    std::vector<char> assigned(nv, 0);
    for (int v = 0; v < nv; ++v) {
      if (pool[v].empty()) continue;
      Vec2 s{0, 0};
      for (const Vec2& q : pool[v]) s = {s[0] + q[0], s[1] + q[1]};
      vuv[v] = {s[0] / pool[v].size(), s[1] / pool[v].size()};
      assigned[v] = 1;
    }

    std::vector<std::set<int>> nbr(nv);
    std::vector<char> needed(nv, 0);
    for (int f = 0; f < nf; ++f) {
      const auto& tri = mesh.faces[f];
      for (int k = 0; k < 3; ++k) {
        nbr[tri[k]].insert(tri[(k + 1) % 3]);
        nbr[tri[k]].insert(tri[(k + 2) % 3]);
        if (interface.face_source[f] < 0) needed[tri[k]] = 1;
      }
    }
    for (bool grew = true; grew;) {
      grew = false;
      for (int v = 0; v < nv; ++v) {
        if (assigned[v] || !needed[v]) continue;
        Vec2 s{0, 0};
        int cnt = 0;
        for (int u : nbr[v])
          if (assigned[u]) s = {s[0] + vuv[u][0], s[1] + vuv[u][1]}, ++cnt;
        if (!cnt) continue;
        vuv[v] = {s[0] / cnt, s[1] / cnt};
        assigned[v] = 1;
        grew = true;
      }
    }

    int orphans = 0;
    for (int f = 0; f < nf; ++f) {
      if (interface.face_source[f] >= 0) continue;
      for (int k = 0; k < 3; ++k) {
        int v = mesh.faces[f][k];
        if (!assigned[v]) ++orphans;
        mesh.face_uvs[f][k] = push_uv(mesh, uv_ids, vuv[v]);
      }
    }
    if (orphans)
      std::fprintf(stderr, "recover_attributes: %d corners unreachable by uv flood fill\n",
                   orphans);
  }

  // Extra faces take the majority material of attributed edge neighbours,
  // ties to the lowest id, cascading in ascending face id until stable.
  if (want_materials) {
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (int f = 0; f < nf; ++f)
      for (int k = 0; k < 3; ++k) {
        int a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
        edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
      }
    std::vector<std::vector<int>> adj(nf);
    for (const auto& [e, fs] : edge_faces)
      for (int a : fs)
        for (int b : fs)
          if (a != b) adj[a].push_back(b);

    for (bool grew = true; grew;) {
      grew = false;
      for (int f = 0; f < nf; ++f) {
        if (interface.face_source[f] >= 0 || mesh.face_material[f] >= 0) continue;
        std::map<int, int> votes;
        for (int g : adj[f])
          if (mesh.face_material[g] >= 0) ++votes[mesh.face_material[g]];
        if (votes.empty()) continue;
        int best = -1, n = 0;
        for (const auto& [m, c] : votes)
          if (c > n) best = m, n = c;
        mesh.face_material[f] = best;
        grew = true;
      }
    }
  }
}

}  // namespace meshrepair
