#include "meshrepair/topology.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "meshrepair/exact.h"

namespace meshrepair {

EdgeAdjacency build_adjacency(const IndexedMesh& mesh) {
  EdgeAdjacency adj;
  for (int f = 0; f < (int)mesh.faces.size(); f++) {
    const auto& t = mesh.faces[f];
    for (int i = 0; i < 3; i++) {
      int u = t[i], v = t[(i + 1) % 3];
      std::uint64_t k = EdgeAdjacency::key(u, v);
      auto it = adj.index.find(k);
      if (it == adj.index.end()) {
        it = adj.index.emplace(k, (int)adj.edges.size()).first;
        adj.edges.push_back({std::min(u, v), std::max(u, v), {}});
      }
      adj.edges[it->second].incidences.push_back({f, u < v});
    }
  }
  return adj;
}

std::vector<Patch> group_patches(const IndexedMesh& mesh, bool forbid_nonmanifold) {
  EdgeAdjacency adj = build_adjacency(mesh);

  auto crossable = [&](const Edge& e) {
    if (forbid_nonmanifold && e.incidences.size() > 2) return false;
    return e.manifold();
  };

  int nf = (int)mesh.faces.size();
  std::vector<int> patch_of(nf, -1);
  std::vector<Patch> patches;
  for (int seed = 0; seed < nf; seed++) {
    if (patch_of[seed] >= 0) continue;
    Patch p;
    std::vector<int> stack = {seed};
    patch_of[seed] = (int)patches.size();
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      p.faces.push_back(f);
      const auto& t = mesh.faces[f];
      for (int i = 0; i < 3; i++) {
        const Edge* e = adj.find(t[i], t[(i + 1) % 3]);
        if (e->incidences.size() > 2) p.contains_nonmanifold_boundary = true;
        if (!crossable(*e)) continue;
        for (const auto& inc : e->incidences) {
          if (inc.face != f && patch_of[inc.face] < 0) {
            patch_of[inc.face] = (int)patches.size();
            stack.push_back(inc.face);
          }
        }
      }
    }
    std::sort(p.faces.begin(), p.faces.end());
    patches.push_back(std::move(p));
  }
  return patches;
}

bool is_watertight(const IndexedMesh& mesh) {
  EdgeAdjacency adj = build_adjacency(mesh);
  for (const auto& e : adj.edges) {
    size_t n = e.incidences.size();
    if (n < 2 || n % 2 != 0) return false;
    size_t fwd = 0;
    for (const auto& inc : e.incidences) fwd += inc.forward ? 1 : 0;
    if (fwd * 2 != n) return false;
  }
  return true;
}

namespace {

// Faces around vertex v, connected across shared <=2-incidence edges at v.
// Returns the number of connected components (0 when v is unreferenced).
int umbrella_components(const IndexedMesh& mesh, const EdgeAdjacency& adj,
                        const std::vector<std::vector<int>>& vertex_faces, int v) {
  const auto& faces = vertex_faces[v];
  if (faces.empty()) return 0;
  std::unordered_map<int, int> local;  // face id -> local index
  for (int i = 0; i < (int)faces.size(); i++) local[faces[i]] = i;
  std::vector<int> comp(faces.size(), -1);
  int ncomp = 0;
  for (int i = 0; i < (int)faces.size(); i++) {
    if (comp[i] >= 0) continue;
    std::vector<int> stack = {i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      int li = stack.back();
      stack.pop_back();
      const auto& t = mesh.faces[faces[li]];
      for (int c = 0; c < 3; c++) {
        int u = t[c], w = t[(c + 1) % 3];
        if (u != v && w != v) continue;
        const Edge* e = adj.find(u, w);
        if (e->incidences.size() > 2) continue;
        for (const auto& inc : e->incidences) {
          auto it = local.find(inc.face);
          if (it != local.end() && comp[it->second] < 0) {
            comp[it->second] = ncomp;
            stack.push_back(it->second);
          }
        }
      }
    }
    ncomp++;
  }
  return ncomp;
}

}  // namespace

bool is_manifold(const IndexedMesh& mesh) {
  EdgeAdjacency adj = build_adjacency(mesh);
  for (const auto& e : adj.edges)
    if (e.incidences.size() > 2) return false;

  std::vector<std::vector<int>> vertex_faces(mesh.vertices.size());
  for (int f = 0; f < (int)mesh.faces.size(); f++)
    for (int c = 0; c < 3; c++) vertex_faces[mesh.faces[f][c]].push_back(f);

  for (int v = 0; v < (int)mesh.vertices.size(); v++)
    if (umbrella_components(mesh, adj, vertex_faces, v) != 1) return false;
  return true;
}

namespace {

// One incidence of a non-manifold edge with its angular position around the
// edge axis (angle of the face's opposite vertex, measured in a fixed frame).
struct Wing {
  double angle;
  int face;
  bool forward;
  int slot;  // index into Edge::incidences
};

// Direction from a to b with the scale divided out exactly before rounding,
// so it stays meaningful for separations far below double resolution.
Vec3 exact_dir(const ExactPoint& a, const ExactPoint& b) {
  Rational dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  Rational m = abs(dx);
  if (Rational ay = abs(dy); ay > m) m = ay;
  if (Rational az = abs(dz); az > m) m = az;
  if (m == 0) return {0, 0, 0};
  return {Rational(dx / m).get_d(), Rational(dy / m).get_d(), Rational(dz / m).get_d()};
}

// Pairs the 2k incidences of an edge into k two-sided sheets. Faces whose
// interior sector opens toward increasing angle (traversal against the axis)
// are matched with the next incidence around the circle.
std::vector<std::pair<int, int>> pair_edge_incidences(const IndexedMesh& mesh, const Edge& e,
                                                      const std::vector<ExactPoint>* exact) {
  const auto& inc = e.incidences;
  if (inc.size() == 2) return {{0, 1}};

  auto dir_from_a = [&](int v) {
    if (exact) return exact_dir((*exact)[e.a], (*exact)[v]);
    return mesh.vertices[v] - mesh.vertices[e.a];
  };
  Vec3 axis = normalized(dir_from_a(e.b));
  // reference direction: opposite vertex of the first incidence
  auto opposite_vertex = [&](int f) {
    for (int c = 0; c < 3; c++) {
      int v = mesh.faces[f][c];
      if (v != e.a && v != e.b) return v;
    }
    return -1;
  };
  auto perp = [&](int v) {
    Vec3 d = dir_from_a(v);
    return d - axis * dot(d, axis);
  };
  Vec3 u0 = normalized(perp(opposite_vertex(inc[0].face)));
  if (norm(u0) == 0.0) u0 = std::abs(axis[0]) < 0.9 ? normalized(cross(axis, Vec3{1, 0, 0}))
                                                    : normalized(cross(axis, Vec3{0, 1, 0}));
  Vec3 v0 = cross(axis, u0);

  std::vector<Wing> wings;
  for (int i = 0; i < (int)inc.size(); i++) {
    Vec3 d = perp(opposite_vertex(inc[i].face));
    double ang = std::atan2(dot(d, v0), dot(d, u0));
    if (ang < 0) ang += 2 * M_PI;
    wings.push_back({ang, inc[i].face, inc[i].forward, i});
  }
  std::sort(wings.begin(), wings.end(), [](const Wing& a, const Wing& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    return a.face < b.face;
  });

  // A face traversing b->a (forward == false when a<b ... the stored flag is
  // relative to (a,b)) has its back side toward increasing angle, so its
  // sheet closes at the next wing. Walk the circle matching such wings with
  // their successors; fall back to sequential pairing if orientations are
  // degenerate (coincident or unbalanced sheets).
  int n = (int)wings.size();
  std::vector<bool> used(n, false);
  std::vector<std::pair<int, int>> pairs;
  for (int round = 0; round < n && (int)pairs.size() * 2 < n; round++) {
    bool progress = false;
    for (int i = 0; i < n; i++) {
      if (used[i] || wings[i].forward) continue;
      for (int step = 1; step < n; step++) {
        int j = (i + step) % n;
        if (used[j]) continue;
        if (wings[j].forward) {
          used[i] = used[j] = true;
          pairs.push_back({wings[i].slot, wings[j].slot});
          progress = true;
        }
        break;  // nearest unused wing decides either way
      }
    }
    if (!progress) break;
  }
  // leftovers (same-direction sheets): pair sequentially
  std::vector<int> rest;
  for (int i = 0; i < n; i++)
    if (!used[i]) rest.push_back(wings[i].slot);
  for (size_t i = 0; i + 1 < rest.size(); i += 2) pairs.push_back({rest[i], rest[i + 1]});
  return pairs;
}

}  // namespace

IndexedMesh split_nonmanifold(const IndexedMesh& mesh, std::vector<int>* vertex_origin,
                              const std::vector<ExactPoint>* exact_points) {
  EdgeAdjacency adj = build_adjacency(mesh);
  for (const auto& e : adj.edges)
    if (e.incidences.size() % 2 != 0)
      throw std::runtime_error("split_nonmanifold: odd edge incidence count");

  // Pair incidences of every edge; faces are glued only through pairs.
  // pair_id[edge][slot] identifies the sheet an incidence belongs to.
  std::vector<std::vector<int>> sheet(adj.edges.size());
  for (size_t ei = 0; ei < adj.edges.size(); ei++) {
    const Edge& e = adj.edges[ei];
    sheet[ei].assign(e.incidences.size(), -1);
    auto pairs = pair_edge_incidences(mesh, e, exact_points);
    for (int p = 0; p < (int)pairs.size(); p++) {
      sheet[ei][pairs[p].first] = p;
      sheet[ei][pairs[p].second] = p;
    }
  }

  std::vector<std::vector<int>> vertex_faces(mesh.vertices.size());
  for (int f = 0; f < (int)mesh.faces.size(); f++)
    for (int c = 0; c < 3; c++) vertex_faces[mesh.faces[f][c]].push_back(f);

  IndexedMesh out = mesh;
  out.vertices.clear();
  std::vector<int> origin;

  // For every vertex, group its faces into umbrellas connected through paired
  // edge incidences; each umbrella gets its own vertex copy.
  std::vector<std::array<int, 3>> new_faces = mesh.faces;
  for (int v = 0; v < (int)mesh.vertices.size(); v++) {
    auto& faces = vertex_faces[v];
    if (faces.empty()) continue;  // unreferenced vertices are dropped
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    std::unordered_map<int, int> local;
    for (int i = 0; i < (int)faces.size(); i++) local[faces[i]] = i;
    std::vector<int> comp(faces.size(), -1);
    int ncomp = 0;
    for (int i = 0; i < (int)faces.size(); i++) {
      if (comp[i] >= 0) continue;
      std::vector<int> stack = {i};
      comp[i] = ncomp;
      while (!stack.empty()) {
        int li = stack.back();
        stack.pop_back();
        int f = faces[li];
        const auto& t = mesh.faces[f];
        for (int c = 0; c < 3; c++) {
          int uu = t[c], ww = t[(c + 1) % 3];
          if (uu != v && ww != v) continue;
          int ei = adj.index.at(EdgeAdjacency::key(uu, ww));
          const Edge& e = adj.edges[ei];
          // find this face's slot(s) and its paired partner(s)
          for (int s = 0; s < (int)e.incidences.size(); s++) {
            if (e.incidences[s].face != f) continue;
            int sh = sheet[ei][s];
            for (int s2 = 0; s2 < (int)e.incidences.size(); s2++) {
              if (s2 == s || sheet[ei][s2] != sh) continue;
              auto it = local.find(e.incidences[s2].face);
              if (it != local.end() && comp[it->second] < 0) {
                comp[it->second] = ncomp;
                stack.push_back(it->second);
              }
            }
          }
        }
      }
      ncomp++;
    }
    // one output vertex per umbrella
    std::vector<int> comp_vertex(ncomp);
    for (int cidx = 0; cidx < ncomp; cidx++) {
      comp_vertex[cidx] = (int)out.vertices.size();
      out.vertices.push_back(mesh.vertices[v]);
      origin.push_back(v);
    }
    for (int i = 0; i < (int)faces.size(); i++) {
      int f = faces[i];
      for (int c = 0; c < 3; c++)
        if (mesh.faces[f][c] == v) new_faces[f][c] = comp_vertex[comp[i]];
    }
  }
  out.faces = new_faces;
  if (vertex_origin) *vertex_origin = std::move(origin);
  return out;
}

IndexedMesh split_nonmanifold(const IndexedMesh& mesh) { return split_nonmanifold(mesh, nullptr); }

}  // namespace meshrepair
