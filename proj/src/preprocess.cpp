#include "meshrepair/preprocess.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "meshrepair/topology.h"

namespace meshrepair {

IndexedMesh reorient(const IndexedMesh& mesh, const FaceMeasures& measures,
                     const RepairConfig& config, int* flipped_patches) {
  std::vector<Patch> patches = group_patches(mesh, true);
  IndexedMesh out = mesh;
  int flipped = 0;

  for (const auto& patch : patches) {
    double weighted = 0, total = 0;
    for (int f : patch.faces) {
      if (measures.visibility[f] > config.visibility_threshold) {
        double a = face_area(mesh, f);
        weighted += a * measures.orientation[f];
        total += a;
      }
    }
    double phi = total > 0 ? weighted / total : 0.0;
    if (phi < 0) {
      flipped++;
      for (int f : patch.faces) {
        std::swap(out.faces[f][1], out.faces[f][2]);
        if (out.has_uvs()) std::swap(out.face_uvs[f][1], out.face_uvs[f][2]);
      }
    }
  }
  if (flipped_patches) *flipped_patches = flipped;
  return out;
}

IndexedMesh offset_open_surfaces(const IndexedMesh& mesh, const FaceMeasures& measures,
                                 const RepairConfig& config, OffsetRecord& record) {
  FaceFlags flags = classify_faces(measures, config);
  double d = config.offset_frac * bbox_diag(mesh);

  IndexedMesh out = mesh;
  record = OffsetRecord{};
  record.first_generated_face = (int)mesh.faces.size();
  record.first_generated_vertex = (int)mesh.vertices.size();

  // adjacency restricted to open faces
  std::map<std::pair<int, int>, std::vector<std::pair<int, bool>>> edge_map;
  std::vector<int> open_faces;
  for (int f = 0; f < (int)mesh.faces.size(); f++) {
    if (!flags.open[f]) continue;
    open_faces.push_back(f);
    const auto& t = mesh.faces[f];
    for (int i = 0; i < 3; i++) {
      int u = t[i], v = t[(i + 1) % 3];
      auto key = std::minmax(u, v);
      edge_map[{key.first, key.second}].push_back({f, u < v});
    }
  }
  if (open_faces.empty()) return out;

  auto edge_interior = [&](int u, int v) {
    auto key = std::minmax(u, v);
    const auto& inc = edge_map.at({key.first, key.second});
    return inc.size() == 2 && inc[0].second != inc[1].second;
  };

  // flood-fill open faces into patches across interior (manifold, opposite)
  // edges
  std::unordered_map<int, int> patch_of;
  std::vector<std::vector<int>> patches;
  for (int seed : open_faces) {
    if (patch_of.count(seed)) continue;
    std::vector<int> members, stack = {seed};
    patch_of[seed] = (int)patches.size();
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      members.push_back(f);
      const auto& t = mesh.faces[f];
      for (int i = 0; i < 3; i++) {
        int u = t[i], v = t[(i + 1) % 3];
        if (!edge_interior(u, v)) continue;
        auto key = std::minmax(u, v);
        for (const auto& [g, fwd] : edge_map.at({key.first, key.second})) {
          if (!patch_of.count(g)) {
            patch_of[g] = (int)patches.size();
            stack.push_back(g);
          }
        }
      }
    }
    std::sort(members.begin(), members.end());
    patches.push_back(std::move(members));
  }

  auto corner_uv_of = [&](int f, int c) { return mesh.has_uvs() ? mesh.face_uvs[f][c] : -1; };

  auto add_face = [&](std::array<int, 3> tri, std::array<int, 3> uv, int material, int origin) {
    out.faces.push_back(tri);
    if (out.has_uvs() || !out.face_uvs.empty()) out.face_uvs.push_back(uv);
    if (!out.face_material.empty()) out.face_material.push_back(material);
    record.origin.push_back(origin);
  };

  auto add_vertex = [&](int src, const Vec3& disp) {
    int id = (int)out.vertices.size();
    out.vertices.push_back(mesh.vertices[src] + disp);
    record.vertex_origin.push_back(src);
    record.displacement.push_back(disp);
    return id;
  };

  for (const auto& members : patches) {
    // a patch is non-orientable when some edge is traversed twice in the same
    // direction by its own faces (flood fill came around a flipped loop)
    std::map<std::pair<int, int>, std::vector<std::pair<int, bool>>> pedges;
    for (int f : members) {
      const auto& t = mesh.faces[f];
      for (int i = 0; i < 3; i++) {
        int u = t[i], v = t[(i + 1) % 3];
        auto key = std::minmax(u, v);
        pedges[{key.first, key.second}].push_back({f, u < v});
      }
    }
    bool orientable = true;
    for (const auto& [e, inc] : pedges) {
      if (inc.size() == 2 && inc[0].second == inc[1].second) orientable = false;
      if (inc.size() > 2) orientable = false;
    }

    // vertex normals (area-weighted) over patch faces
    std::map<int, Vec3> vnormal;
    for (int f : members) {
      Vec3 nr = face_normal_raw(mesh, f);  // length = 2*area
      for (int c = 0; c < 3; c++) {
        Vec3& acc = vnormal[mesh.faces[f][c]];
        acc = acc + nr;
      }
    }
    if (orientable) {
      for (const auto& [v, n] : vnormal)
        if (n[0] == 0 && n[1] == 0 && n[2] == 0) orientable = false;  // degenerate fan
    }

    if (orientable) {
      // shared offset copies + boundary walls
      std::map<int, int> copy_of;
      for (const auto& [v, n] : vnormal) {
        Vec3 disp = normalized(n) * -d;
        copy_of[v] = add_vertex(v, disp);
      }
      for (int f : members) {
        const auto& t = mesh.faces[f];
        add_face({copy_of[t[0]], copy_of[t[2]], copy_of[t[1]]},
                 {corner_uv_of(f, 0), corner_uv_of(f, 2), corner_uv_of(f, 1)},
                 mesh.material_of(f), f);
      }
      for (int f : members) {
        const auto& t = mesh.faces[f];
        for (int i = 0; i < 3; i++) {
          int a = t[i], b = t[(i + 1) % 3];
          if (edge_interior(a, b)) continue;  // wall only along the open boundary
          int ac = copy_of[a], bc = copy_of[b];
          int ua = corner_uv_of(f, i), ub = corner_uv_of(f, (i + 1) % 3);
          add_face({b, a, ac}, {ub, ua, ua}, mesh.material_of(f), f);
          add_face({b, ac, bc}, {ub, ua, ub}, mesh.material_of(f), f);
        }
      }
    } else {
      // per-face prisms: every face gets its own displaced copy and 3 walls
      for (int f : members) {
        const auto& t = mesh.faces[f];
        Vec3 disp = normalized(face_normal_raw(mesh, f)) * -d;
        if (disp[0] == 0 && disp[1] == 0 && disp[2] == 0) continue;  // zero-area face
        int c0 = add_vertex(t[0], disp), c1 = add_vertex(t[1], disp), c2 = add_vertex(t[2], disp);
        std::array<int, 3> cp = {c0, c1, c2};
        add_face({c0, c2, c1}, {corner_uv_of(f, 0), corner_uv_of(f, 2), corner_uv_of(f, 1)},
                 mesh.material_of(f), f);
        for (int i = 0; i < 3; i++) {
          int a = t[i], b = t[(i + 1) % 3];
          int ac = cp[i], bc = cp[(i + 1) % 3];
          int ua = corner_uv_of(f, i), ub = corner_uv_of(f, (i + 1) % 3);
          add_face({b, a, ac}, {ub, ua, ua}, mesh.material_of(f), f);
          add_face({b, ac, bc}, {ub, ua, ub}, mesh.material_of(f), f);
        }
      }
    }
  }
  return out;
}

}  // namespace meshrepair
