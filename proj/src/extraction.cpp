#include "meshrepair/extraction.h"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace meshrepair {

namespace {

// Triangulates a convex loop (which may contain straight corners from edge
// splitting) into positive-area triangles covering every loop edge exactly
// once: repeatedly clip the first strictly convex corner whose removal keeps
// the remainder non-degenerate.
std::vector<std::array<int, 3>> triangulate_convex_loop(const std::vector<ExactPoint>& points,
                                                        const std::vector<int>& loop) {
  std::vector<int> ring = loop;
  std::vector<std::array<int, 3>> tris;
  ExactPoint w{0, 0, 0};
  for (int i = 0; i < (int)ring.size(); ++i)
    w = w + cross(points[ring[i]], points[ring[(i + 1) % ring.size()]]);
  if (sgn(w.x) == 0 && sgn(w.y) == 0 && sgn(w.z) == 0)
    throw std::invalid_argument("triangulate_convex_loop: zero-area loop");

  auto corner_sign = [&](const std::vector<int>& r, int i) {
    int n = (int)r.size();
    const ExactPoint& a = points[r[(i + n - 1) % n]];
    const ExactPoint& b = points[r[i]];
    const ExactPoint& c = points[r[(i + 1) % n]];
    return sgn(dot(cross(b - a, c - b), w));
  };
  auto has_area = [&](const std::vector<int>& r, int skip) {
    ExactPoint s{0, 0, 0};
    std::vector<int> rest;
    for (int i = 0; i < (int)r.size(); ++i)
      if (i != skip) rest.push_back(r[i]);
    for (int i = 0; i < (int)rest.size(); ++i)
      s = s + cross(points[rest[i]], points[rest[(i + 1) % rest.size()]]);
    return sgn(s.x) != 0 || sgn(s.y) != 0 || sgn(s.z) != 0;
  };

  while (ring.size() > 3) {
    int n = (int)ring.size();
    int pick = -1;
    for (int i = 0; i < n && pick < 0; ++i)
      if (corner_sign(ring, i) > 0 && has_area(ring, i)) pick = i;
    assert(pick >= 0 && "convex loop without a clippable corner");
    tris.push_back({ring[(pick + n - 1) % n], ring[pick], ring[(pick + 1) % n]});
    ring.erase(ring.begin() + pick);
  }
  assert(corner_sign(ring, 0) > 0 && "degenerate final triangle");
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

}  // namespace

FacetMeasures trace_facet_measures(const CellComplex& complex, const RepairConfig& config) {
  IndexedMesh soup;
  soup.vertices.reserve(complex.points.size());
  for (const auto& p : complex.points) soup.vertices.push_back(p.to_vec3());
  std::vector<int> tri_facet;
  for (int i = 0; i < (int)complex.facets.size(); ++i) {
    const Facet& fc = complex.facets[i];
    if (!fc.alive) continue;
    // The enlarged-box boundary is ambient, not geometry: tracing it would
    // wall in every ray and mark the whole complex invisible.
    if (fc.cell_pos == CellComplex::kOuterCell || fc.cell_neg == CellComplex::kOuterCell)
      continue;
    for (const auto& t : triangulate_convex_loop(complex.points, fc.loop)) {
      soup.faces.push_back(t);
      tri_facet.push_back(i);
    }
  }

  SamplePlan plan = plan_samples(soup, config);
  FaceMeasures per_tri = trace_measures(soup, plan, config);

  FacetMeasures out;
  out.visibility.assign(complex.facets.size(), 0.0);
  out.orientation.assign(complex.facets.size(), 0.0);
  std::vector<long long> net(complex.facets.size(), 0), tot(complex.facets.size(), 0);
  for (int t = 0; t < (int)tri_facet.size(); ++t) {
    int f = tri_facet[t];
    out.visibility[f] = std::max(out.visibility[f], per_tri.visibility[t]);
    for (const auto& counts : per_tri.sample_counts[t]) {
      net[f] += counts[0] - counts[1];
      tot[f] += counts[0] + counts[1];
    }
  }
  for (int f = 0; f < (int)complex.facets.size(); ++f)
    if (tot[f] > 0) out.orientation[f] = (double)net[f] / (double)tot[f];
  return out;
}

namespace {

struct FacetEdgeRef {
  int facet;
  bool forward;
};

std::map<std::pair<int, int>, std::vector<FacetEdgeRef>> facet_edge_map(const CellComplex& cx) {
  std::map<std::pair<int, int>, std::vector<FacetEdgeRef>> edges;
  for (int i = 0; i < (int)cx.facets.size(); ++i) {
    const Facet& fc = cx.facets[i];
    if (!fc.alive) continue;
    int n = (int)fc.loop.size();
    for (int k = 0; k < n; ++k) {
      int a = fc.loop[k], b = fc.loop[(k + 1) % n];
      edges[{std::min(a, b), std::max(a, b)}].push_back({i, a < b});
    }
  }
  return edges;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // smaller id wins: deterministic roots
  }
};

}  // namespace

int reorient_facets(CellComplex& complex, FacetMeasures& measures, const RepairConfig& config) {
  int nf = (int)complex.facets.size();
  auto edges = facet_edge_map(complex);

  // Patches: flood fill across edges with exactly two opposite incidences.
  std::vector<int> patch(nf, -1);
  int n_patches = 0;
  for (int seed = 0; seed < nf; ++seed) {
    if (!complex.facets[seed].alive || patch[seed] >= 0) continue;
    int id = n_patches++;
    std::vector<int> stack{seed};
    patch[seed] = id;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      const auto& loop = complex.facets[f].loop;
      int n = (int)loop.size();
      for (int k = 0; k < n; ++k) {
        int a = loop[k], b = loop[(k + 1) % n];
        const auto& inc = edges.at({std::min(a, b), std::max(a, b)});
        if (inc.size() != 2 || inc[0].forward == inc[1].forward) continue;
        int g = inc[0].facet == f ? inc[1].facet : inc[0].facet;
        if (patch[g] < 0) {
          patch[g] = id;
          stack.push_back(g);
        }
      }
    }
  }

  // Merge exactly co-planar, consistently wound patches across over-shared
  // edges when the union keeps every edge at <= 2 in-union incidences.
  DisjointSet ds(n_patches);
  std::vector<std::map<std::pair<int, int>, int>> group_edges(n_patches);
  for (const auto& [e, inc] : edges)
    for (const auto& r : inc) group_edges[patch[r.facet]][e] += 1;

  auto canon = [&](int f) { return complex.facets[f].plane.canonical(); };
  for (const auto& [e, inc] : edges) {
    if (inc.size() <= 2) continue;
    for (int i = 0; i < (int)inc.size(); ++i)
      for (int j = i + 1; j < (int)inc.size(); ++j) {
        int pa = ds.find(patch[inc[i].facet]), pb = ds.find(patch[inc[j].facet]);
        if (pa == pb) continue;
        if (inc[i].forward == inc[j].forward) continue;
        if (!(canon(inc[i].facet) == canon(inc[j].facet))) continue;
        if (pa > pb) std::swap(pa, pb);
        auto& ea = group_edges[pa];
        auto& eb = group_edges[pb];
        bool ok = true;
        for (const auto& [k, cnt] : eb) {
          auto it = ea.find(k);
          if (it != ea.end() && it->second + cnt > 2) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        for (const auto& [k, cnt] : eb) ea[k] += cnt;
        eb.clear();
        ds.unite(pa, pb);
      }
  }

  // Flip decision per merged group: area-weighted mean orientation over
  // visible facets.
  std::map<int, double> score;
  for (int f = 0; f < nf; ++f) {
    if (!complex.facets[f].alive) continue;
    if (!(measures.visibility[f] > config.visibility_threshold)) continue;
    score[ds.find(patch[f])] += complex.facet_area(f) * measures.orientation[f];
  }
  std::set<int> flip;
  for (const auto& [g, s] : score)
    if (s < 0) flip.insert(g);
  for (int f = 0; f < nf; ++f) {
    if (!complex.facets[f].alive || !flip.count(ds.find(patch[f]))) continue;
    Facet& fc = complex.facets[f];
    std::reverse(fc.loop.begin(), fc.loop.end());
    fc.plane = fc.plane.flipped();
    std::swap(fc.cell_pos, fc.cell_neg);
    measures.orientation[f] = -measures.orientation[f];
  }
  return (int)flip.size();
}

std::vector<FacetClass> classify_facets(const CellComplex& complex, const FacetMeasures& measures,
                                        const RepairConfig& config) {
  std::vector<FacetClass> out(complex.facets.size(), FacetClass::Extra);
  for (int f = 0; f < (int)complex.facets.size(); ++f) {
    const Facet& fc = complex.facets[f];
    if (!fc.alive || fc.source < 0) continue;
    out[f] = measures.visibility[f] > config.visibility_threshold ? FacetClass::Visible
                                                                  : FacetClass::Invisible;
  }
  return out;
}

CutProblem build_cut(const CellComplex& complex, const std::vector<FacetClass>& classes) {
  CutProblem p;
  p.n_cells = (int)complex.cells.size();
  p.data.assign(p.n_cells, {0.0, 0.0});
  for (int f = 0; f < (int)complex.facets.size(); ++f) {
    const Facet& fc = complex.facets[f];
    if (!fc.alive) continue;
    double area = complex.facet_area(f);
    if (classes[f] == FacetClass::Visible) {
      // Normal points into cell_pos: the visible side faces cell_pos, so
      // cell_pos looks exterior and cell_neg interior.
      if (fc.cell_pos != CellComplex::kOuterCell) p.data[fc.cell_pos][0] += area;
      if (fc.cell_neg != CellComplex::kOuterCell) p.data[fc.cell_neg][1] += area;
    } else if (classes[f] == FacetClass::Extra) {
      int a = fc.cell_neg, b = fc.cell_pos;
      if (a == CellComplex::kOuterCell) std::swap(a, b);
      assert(a != CellComplex::kOuterCell);
      p.edges.push_back({a, b == CellComplex::kOuterCell ? CutProblem::kOuterNode : b, area});
    }
  }
  return p;
}

InterfaceMesh extract_interface(const CellComplex& complex, const Labeling& labels) {
  auto interior = [&](int cell) {
    return cell == CellComplex::kOuterCell ? false : (bool)labels.interior[cell];
  };

  std::vector<int> picked;
  for (int f = 0; f < (int)complex.facets.size(); ++f) {
    const Facet& fc = complex.facets[f];
    if (fc.alive && interior(fc.cell_pos) != interior(fc.cell_neg)) picked.push_back(f);
  }

  // Points used by the interface, with a conservative double bounding box for
  // the edge-splitting prefilter.
  std::vector<int> used;
  for (int f : picked)
    for (int pid : complex.facets[f].loop) used.push_back(pid);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<Vec3> approx(used.size());
  for (int i = 0; i < (int)used.size(); ++i) approx[i] = complex.points[used[i]].to_vec3();

  // Split every interface edge at used points lying strictly inside it, so
  // abutting facets subdivided by different planes still match edge for edge.
  std::map<std::pair<int, int>, std::vector<int>> inserted;
  auto insertions = [&](int a, int b) -> const std::vector<int>& {
    std::pair<int, int> key{std::min(a, b), std::max(a, b)};
    auto it = inserted.find(key);
    if (it != inserted.end()) return it->second;
    const ExactPoint& pa = complex.points[key.first];
    const ExactPoint& pb = complex.points[key.second];
    Vec3 da = pa.to_vec3(), db = pb.to_vec3();
    Vec3 lo, hi;
    for (int k = 0; k < 3; ++k) {
      double pad = 1e-9 * (std::abs(da[k]) + std::abs(db[k]) + 1.0);
      lo[k] = std::min(da[k], db[k]) - pad;
      hi[k] = std::max(da[k], db[k]) + pad;
    }
    std::vector<int> mid;
    for (int i = 0; i < (int)used.size(); ++i) {
      int pid = used[i];
      if (pid == key.first || pid == key.second) continue;
      const Vec3& v = approx[i];
      if (v[0] < lo[0] || v[0] > hi[0] || v[1] < lo[1] || v[1] > hi[1] || v[2] < lo[2] ||
          v[2] > hi[2])
        continue;
      if (strictly_between(pa, pb, complex.points[pid])) mid.push_back(pid);
    }
    ExactPoint u = pb - pa;
    std::sort(mid.begin(), mid.end(), [&](int x, int y) {
      return dot(complex.points[x] - pa, u) < dot(complex.points[y] - pa, u);
    });
    return inserted.emplace(key, std::move(mid)).first->second;
  };

  InterfaceMesh out;
  std::map<int, int> vertex_of;
  auto emit_vertex = [&](int pid) {
    auto it = vertex_of.find(pid);
    if (it != vertex_of.end()) return it->second;
    int id = (int)out.mesh.vertices.size();
    out.mesh.vertices.push_back(complex.points[pid].to_vec3());
    out.exact.push_back(complex.points[pid]);
    vertex_of.emplace(pid, id);
    return id;
  };

  for (int f : picked) {
    const Facet& fc = complex.facets[f];
    std::vector<int> loop;
    int n = (int)fc.loop.size();
    for (int k = 0; k < n; ++k) {
      int a = fc.loop[k], b = fc.loop[(k + 1) % n];
      loop.push_back(a);
      const auto& mid = insertions(a, b);
      if (a < b)
        loop.insert(loop.end(), mid.begin(), mid.end());
      else
        loop.insert(loop.end(), mid.rbegin(), mid.rend());
    }
    // Stored loops wind counter-clockwise seen from cell_pos; faces must look
    // from interior to exterior.
    if (interior(fc.cell_pos)) std::reverse(loop.begin(), loop.end());
    for (const auto& t : triangulate_convex_loop(complex.points, loop)) {
      out.mesh.faces.push_back({emit_vertex(t[0]), emit_vertex(t[1]), emit_vertex(t[2])});
      out.face_source.push_back(fc.source);
      out.face_group.push_back(-1);
    }
  }
  return out;
}

}  // namespace meshrepair
