#include "meshrepair/partition.h"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace meshrepair {

int CellComplex::add_point(const ExactPoint& p) {
  auto it = point_ids_.find(p);
  if (it != point_ids_.end()) return it->second;
  int id = (int)points.size();
  points.push_back(p);
  point_ids_.emplace(p, id);
  return id;
}

ExactPoint CellComplex::facet_barycenter(int f) const {
  const auto& loop = facets[f].loop;
  ExactPoint s{0, 0, 0};
  for (int pid : loop) s = s + points[pid];
  Rational inv_n(1, (unsigned long)loop.size());
  return ExactPoint{s.x * inv_n, s.y * inv_n, s.z * inv_n};
}

ExactPoint CellComplex::facet_area_vector(int f) const {
  const auto& loop = facets[f].loop;
  ExactPoint w{0, 0, 0};
  int n = (int)loop.size();
  for (int i = 0; i < n; ++i) {
    const ExactPoint& a = points[loop[i]];
    const ExactPoint& b = points[loop[(i + 1) % n]];
    w = w + cross(a, b);
  }
  return w;
}

double CellComplex::facet_area(int f) const {
  ExactPoint w = facet_area_vector(f);
  double x = w.x.get_d(), y = w.y.get_d(), z = w.z.get_d();
  return 0.5 * std::sqrt(x * x + y * y + z * z);
}

Rational CellComplex::cell_volume(int c) const {
  Rational v = 0;
  for (int fid : cells[c].facets) {
    const Facet& fc = facets[fid];
    const auto& loop = fc.loop;
    // The plane normal points toward cell_pos, so the stored loop is outward
    // for cell_neg and inward for cell_pos.
    int s = fc.cell_neg == c ? +1 : -1;
    for (int i = 1; i + 1 < (int)loop.size(); ++i) {
      Rational t = dot(points[loop[0]], cross(points[loop[i]], points[loop[i + 1]]));
      if (s > 0)
        v += t;
      else
        v -= t;
    }
  }
  return v / 6;
}

void CellComplex::compact() {
  std::vector<int> fmap(facets.size(), -1), cmap(cells.size(), -1);
  std::vector<Facet> nf;
  std::vector<Cell> nc;
  for (int i = 0; i < (int)cells.size(); ++i)
    if (cells[i].alive) {
      cmap[i] = (int)nc.size();
      nc.push_back(std::move(cells[i]));
    }
  for (int i = 0; i < (int)facets.size(); ++i)
    if (facets[i].alive) {
      fmap[i] = (int)nf.size();
      nf.push_back(std::move(facets[i]));
    }
  for (auto& fc : nf) {
    if (fc.cell_pos != kOuterCell) fc.cell_pos = cmap[fc.cell_pos];
    if (fc.cell_neg != kOuterCell) fc.cell_neg = cmap[fc.cell_neg];
    assert(fc.cell_pos != -1 && fc.cell_neg != -1);
  }
  for (auto& cl : nc)
    for (int& fid : cl.facets) {
      fid = fmap[fid];
      assert(fid != -1);
    }
  facets = std::move(nf);
  cells = std::move(nc);
}

namespace {

struct Splitter {
  ExactPlane plane;
  std::vector<int> restrict_pts;  // point ids: 3 = triangle, 2 = segment
  std::array<double, 6> bbox;
};

std::array<double, 6> points_bbox(const CellComplex& cx, const std::vector<int>& pts) {
  std::array<double, 6> b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                          std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
                          std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (int pid : pts) {
    Vec3 v = cx.points[pid].to_vec3();
    for (int k = 0; k < 3; ++k) {
      b[k] = std::min(b[k], v[k]);
      b[3 + k] = std::max(b[3 + k], v[k]);
    }
  }
  for (int k = 0; k < 3; ++k) {
    double pad = 1e-9 * (std::abs(b[k]) + std::abs(b[3 + k]) + 1.0);
    b[k] -= pad;
    b[3 + k] += pad;
  }
  return b;
}

bool bbox_overlap(const std::array<double, 6>& a, const std::array<double, 6>& b) {
  for (int k = 0; k < 3; ++k)
    if (a[3 + k] < b[k] || b[3 + k] < a[k]) return false;
  return true;
}

std::vector<int> cell_point_ids(const CellComplex& cx, int c) {
  std::vector<int> out;
  for (int fid : cx.cells[c].facets)
    for (int pid : cx.facets[fid].loop) out.push_back(pid);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool cell_straddles(const CellComplex& cx, int c, const ExactPlane& h) {
  bool pos = false, neg = false;
  for (int pid : cell_point_ids(cx, c)) {
    int s = h.side(cx.points[pid]);
    pos = pos || s > 0;
    neg = neg || s < 0;
    if (pos && neg) return true;
  }
  return false;
}

// Inward-oriented plane of facet fid for cell c (interior on the >= 0 side).
ExactPlane inward_plane(const CellComplex& cx, int fid, int c) {
  const Facet& fc = cx.facets[fid];
  return fc.cell_pos == c ? fc.plane : fc.plane.flipped();
}

// Clips poly (convex) to side(p) >= 0 of h.
std::vector<ExactPoint> clip_halfspace(const std::vector<ExactPoint>& poly, const ExactPlane& h) {
  std::vector<ExactPoint> out;
  int n = (int)poly.size();
  if (n == 0) return out;
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = h.side(poly[i]);
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    if (s[i] >= 0) out.push_back(poly[i]);
    if ((s[i] > 0 && s[j] < 0) || (s[i] < 0 && s[j] > 0))
      out.push_back(intersect_segment_plane(poly[i], poly[j], h));
  }
  // drop duplicate consecutive points
  std::vector<ExactPoint> ded;
  for (const auto& p : out)
    if (ded.empty() || !(ded.back() == p)) ded.push_back(p);
  while (ded.size() > 1 && ded.front() == ded.back()) ded.pop_back();
  return ded;
}

bool polygon_has_area(const std::vector<ExactPoint>& poly) {
  if (poly.size() < 3) return false;
  ExactPoint w{0, 0, 0};
  int n = (int)poly.size();
  for (int i = 0; i < n; ++i) w = w + cross(poly[i], poly[(i + 1) % n]);
  return sgn(w.x) != 0 || sgn(w.y) != 0 || sgn(w.z) != 0;
}

bool triangle_intersects_cell(const CellComplex& cx, int c, const std::vector<int>& tri) {
  std::vector<ExactPoint> poly = {cx.points[tri[0]], cx.points[tri[1]], cx.points[tri[2]]};
  for (int fid : cx.cells[c].facets) {
    poly = clip_halfspace(poly, inward_plane(cx, fid, c));
    if (poly.size() < 3) return false;
  }
  return polygon_has_area(poly);
}

bool segment_intersects_cell(const CellComplex& cx, int c, const ExactPoint& a, const ExactPoint& b) {
  Rational t0 = 0, t1 = 1;
  for (int fid : cx.cells[c].facets) {
    ExactPlane h = inward_plane(cx, fid, c);
    Rational sa = h.value(a), sb = h.value(b);
    int ga = sgn(sa), gb = sgn(sb);
    if (ga < 0 && gb < 0) return false;
    if (sa == sb) {
      if (ga < 0) return false;
      continue;
    }
    Rational tc = sa / (sa - sb);
    if (sb < sa) {
      if (tc < t1) t1 = tc;
    } else {
      if (tc > t0) t0 = tc;
    }
    if (!(t0 < t1)) return false;
  }
  return t0 < t1;
}

void split_cell(CellComplex& cx, std::vector<std::array<double, 6>>& cell_bbox, int c,
                const ExactPlane& h) {
  std::unordered_map<int, int> side;
  auto sign_of = [&](int pid) {
    auto it = side.find(pid);
    if (it != side.end()) return it->second;
    int s = h.side(cx.points[pid]);
    side.emplace(pid, s);
    return s;
  };

  std::vector<int> old = std::move(cx.cells[c].facets);
  cx.cells[c].facets.clear();
  cx.cells[c].alive = false;
  int cneg = (int)cx.cells.size();
  cx.cells.push_back(Cell{});
  int cpos = (int)cx.cells.size();
  cx.cells.push_back(Cell{});

  for (int fid : old) {
    Facet fc = cx.facets[fid];  // copy: facet vector may grow below
    int n = (int)fc.loop.size();
    int npos = 0, nneg = 0;
    for (int pid : fc.loop) {
      int s = sign_of(pid);
      npos += s > 0;
      nneg += s < 0;
    }
    assert(npos + nneg > 0 && "facet degenerated onto the splitting plane");
    if (npos == 0 || nneg == 0) {
      int child = npos > 0 ? cpos : cneg;
      Facet& live = cx.facets[fid];
      if (live.cell_pos == c)
        live.cell_pos = child;
      else {
        assert(live.cell_neg == c);
        live.cell_neg = child;
      }
      cx.cells[child].facets.push_back(fid);
      continue;
    }

    std::vector<int> plus, minus;
    for (int i = 0; i < n; ++i) {
      int a = fc.loop[i], b = fc.loop[(i + 1) % n];
      int sa = sign_of(a), sb = sign_of(b);
      if (sa >= 0) plus.push_back(a);
      if (sa <= 0) minus.push_back(a);
      if ((sa > 0 && sb < 0) || (sa < 0 && sb > 0)) {
        ExactPoint x = intersect_segment_plane(cx.points[a], cx.points[b], h);
        int xid = cx.add_point(x);
        side[xid] = 0;
        plus.push_back(xid);
        minus.push_back(xid);
      }
    }
    assert(plus.size() >= 3 && minus.size() >= 3);

    Facet fp, fn;
    fp.plane = fc.plane;
    fn.plane = fc.plane;
    fp.loop = std::move(plus);
    fn.loop = std::move(minus);
    fp.source = fn.source = fc.source;
    fp.cell_pos = fc.cell_pos == c ? cpos : fc.cell_pos;
    fp.cell_neg = fc.cell_neg == c ? cpos : fc.cell_neg;
    fn.cell_pos = fc.cell_pos == c ? cneg : fc.cell_pos;
    fn.cell_neg = fc.cell_neg == c ? cneg : fc.cell_neg;
    int fpid = (int)cx.facets.size();
    cx.facets.push_back(std::move(fp));
    int fnid = (int)cx.facets.size();
    cx.facets.push_back(std::move(fn));
    cx.facets[fid].alive = false;
    cx.cells[cpos].facets.push_back(fpid);
    cx.cells[cneg].facets.push_back(fnid);

    int d = fc.cell_pos == c ? fc.cell_neg : fc.cell_pos;
    assert(d != c);
    if (d != CellComplex::kOuterCell) {
      auto& dl = cx.cells[d].facets;
      auto it = std::find(dl.begin(), dl.end(), fid);
      assert(it != dl.end());
      *it = fnid;
      dl.push_back(fpid);
    }
  }

  // Section edges: consecutive on-plane loop points of the positive children.
  std::map<int, std::array<int, 2>> nbr;
  auto add_nbr = [&](int a, int b) {
    auto [it, fresh] = nbr.emplace(a, std::array<int, 2>{b, -1});
    if (!fresh) {
      assert(it->second[1] == -1 && "section edge fan: non-manifold section boundary");
      it->second[1] = b;
    }
  };
  int n_sedges = 0;
  for (int fid : cx.cells[cpos].facets) {
    const auto& loop = cx.facets[fid].loop;
    int n = (int)loop.size();
    for (int i = 0; i < n; ++i) {
      int a = loop[i], b = loop[(i + 1) % n];
      if (sign_of(a) == 0 && sign_of(b) == 0) {
        add_nbr(a, b);
        add_nbr(b, a);
        ++n_sedges;
      }
    }
  }
  assert(n_sedges >= 3 && "split produced no closed section polygon");

  std::vector<int> sloop;
  int start = nbr.begin()->first;
  int prev = -1, cur = start;
  do {
    sloop.push_back(cur);
    const auto& nn = nbr.at(cur);
    assert(nn[1] != -1 && "section polygon vertex of degree one");
    int nxt = nn[0] == prev ? nn[1] : nn[1] == prev ? nn[0] : std::min(nn[0], nn[1]);
    prev = cur;
    cur = nxt;
  } while (cur != start);
  assert(sloop.size() == nbr.size() && "section polygon is not a single loop");

  ExactPoint w{0, 0, 0};
  for (int i = 0; i < (int)sloop.size(); ++i)
    w = w + cross(cx.points[sloop[i]], cx.points[sloop[(i + 1) % sloop.size()]]);
  Rational o = w.x * h.a + w.y * h.b + w.z * h.c;
  assert(sgn(o) != 0);
  if (sgn(o) < 0) std::reverse(sloop.begin(), sloop.end());

  Facet sec;
  sec.plane = h;
  sec.loop = std::move(sloop);
  sec.cell_pos = cpos;
  sec.cell_neg = cneg;
  int sid = (int)cx.facets.size();
  cx.facets.push_back(std::move(sec));
  cx.cells[cpos].facets.push_back(sid);
  cx.cells[cneg].facets.push_back(sid);

  cell_bbox.resize(cx.cells.size());
  cell_bbox[cneg] = points_bbox(cx, cell_point_ids(cx, cneg));
  cell_bbox[cpos] = points_bbox(cx, cell_point_ids(cx, cpos));
}

bool uv_matches(const IndexedMesh& mesh, int f, int g, int v) {
  auto corner_of = [&](int face) {
    for (int k = 0; k < 3; ++k)
      if (mesh.faces[face][k] == v) return k;
    return -1;
  };
  int kf = corner_of(f), kg = corner_of(g);
  assert(kf >= 0 && kg >= 0);
  int uf = mesh.face_uvs.empty() ? -1 : mesh.face_uvs[f][kf];
  int ug = mesh.face_uvs.empty() ? -1 : mesh.face_uvs[g][kg];
  if ((uf < 0) != (ug < 0)) return false;
  if (uf < 0) return true;
  return mesh.uvs[uf] == mesh.uvs[ug];
}

bool attributes_discontinuous(const IndexedMesh& mesh, int f, int g, int u, int v) {
  if (mesh.material_of(f) != mesh.material_of(g)) return true;
  return !uv_matches(mesh, f, g, u) || !uv_matches(mesh, f, g, v);
}

}  // namespace

CellComplex build_partition(const IndexedMesh& mesh, int* degenerate_faces) {
  if (mesh.vertices.empty() || mesh.faces.empty())
    throw std::invalid_argument("build_partition: empty mesh");

  CellComplex cx;
  std::vector<int> vpt(mesh.vertices.size());
  for (int i = 0; i < (int)mesh.vertices.size(); ++i)
    vpt[i] = cx.add_point(ExactPoint::from_vec3(mesh.vertices[i]));

  int n_faces = (int)mesh.faces.size();
  std::vector<ExactPlane> face_plane(n_faces);
  std::vector<char> face_ok(n_faces, 0);
  int n_degen = 0;
  for (int f = 0; f < n_faces; ++f) {
    const auto& fv = mesh.faces[f];
    ExactPlane p = plane_from_points(cx.points[vpt[fv[0]]], cx.points[vpt[fv[1]]], cx.points[vpt[fv[2]]]);
    if (sgn(p.a) == 0 && sgn(p.b) == 0 && sgn(p.c) == 0) {
      ++n_degen;
      continue;
    }
    face_plane[f] = p.canonical();
    face_ok[f] = 1;
  }
  if (degenerate_faces) *degenerate_faces = n_degen;
  if (n_degen) std::fprintf(stderr, "partition: skipping %d zero-area faces\n", n_degen);

  // Enlarged bounding box seed: one cell, six outward facets.
  Vec3 lo, hi;
  mesh_bbox(mesh, lo, hi);
  Vec3 ext = hi - lo;
  double diag = bbox_diag(mesh);
  if (diag <= 0) throw std::invalid_argument("build_partition: degenerate point mesh");
  for (int k = 0; k < 3; ++k) {
    double pad = 0.05 * (ext[k] > 0 ? ext[k] : diag);
    lo[k] -= pad;
    hi[k] += pad;
  }
  int pid[8];
  for (int m = 0; m < 8; ++m) {
    Vec3 q{m & 1 ? hi[0] : lo[0], m & 2 ? hi[1] : lo[1], m & 4 ? hi[2] : lo[2]};
    pid[m] = cx.add_point(ExactPoint::from_vec3(q));
  }
  struct Wall {
    std::array<int, 4> corners;
    ExactPlane plane;
  };
  const Wall walls[6] = {
      {{1, 3, 7, 5}, ExactPlane{1, 0, 0, Rational(-hi[0])}},
      {{0, 4, 6, 2}, ExactPlane{-1, 0, 0, Rational(lo[0])}},
      {{2, 6, 7, 3}, ExactPlane{0, 1, 0, Rational(-hi[1])}},
      {{0, 1, 5, 4}, ExactPlane{0, -1, 0, Rational(lo[1])}},
      {{4, 5, 7, 6}, ExactPlane{0, 0, 1, Rational(-hi[2])}},
      {{0, 2, 3, 1}, ExactPlane{0, 0, -1, Rational(lo[2])}},
  };
  cx.cells.push_back(Cell{});
  for (const Wall& w : walls) {
    Facet fc;
    fc.plane = w.plane;
    for (int m : w.corners) fc.loop.push_back(pid[m]);
    fc.cell_pos = CellComplex::kOuterCell;
    fc.cell_neg = 0;
    cx.cells[0].facets.push_back((int)cx.facets.size());
    cx.facets.push_back(std::move(fc));
  }
  std::vector<std::array<double, 6>> cell_bbox(1);
  cell_bbox[0] = points_bbox(cx, cell_point_ids(cx, 0));

  // Splitting planes: face planes in descending area order, then one plane
  // through every attribute-discontinuity edge of a co-planar face pair.
  std::vector<int> order;
  for (int f = 0; f < n_faces; ++f)
    if (face_ok[f]) order.push_back(f);
  std::vector<double> area(n_faces, 0.0);
  for (int f : order) area[f] = face_area(mesh, f);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (area[a] != area[b]) return area[a] > area[b];
    return a < b;
  });

  std::vector<Splitter> splits;
  splits.reserve(order.size());
  for (int f : order) {
    Splitter s;
    s.plane = face_plane[f];
    s.restrict_pts = {vpt[mesh.faces[f][0]], vpt[mesh.faces[f][1]], vpt[mesh.faces[f][2]]};
    s.bbox = points_bbox(cx, s.restrict_pts);
    splits.push_back(std::move(s));
  }

  if (mesh.has_uvs() || mesh.has_materials()) {
    std::map<std::pair<int, int>, std::vector<int>> edge_faces;
    for (int f = 0; f < n_faces; ++f) {
      if (!face_ok[f]) continue;
      for (int k = 0; k < 3; ++k) {
        int a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
        edge_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
      }
    }
    for (const auto& [edge, fl] : edge_faces) {
      bool need = false;
      for (int i = 0; i < (int)fl.size() && !need; ++i)
        for (int j = i + 1; j < (int)fl.size() && !need; ++j) {
          if (!(face_plane[fl[i]].canonical_unoriented() == face_plane[fl[j]].canonical_unoriented()))
            continue;
          if (attributes_discontinuous(mesh, fl[i], fl[j], edge.first, edge.second)) need = true;
        }
      if (!need) continue;
      const ExactPoint& pu = cx.points[vpt[edge.first]];
      const ExactPoint& pv = cx.points[vpt[edge.second]];
      ExactPoint en = face_plane[fl[0]].normal();
      ExactPoint np = cross(pv - pu, en);
      if (sgn(np.x) == 0 && sgn(np.y) == 0 && sgn(np.z) == 0) continue;
      Splitter s;
      s.plane = ExactPlane{np.x, np.y, np.z, -dot(np, pu)}.canonical();
      s.restrict_pts = {vpt[edge.first], vpt[edge.second]};
      s.bbox = points_bbox(cx, s.restrict_pts);
      splits.push_back(std::move(s));
    }
  }

  for (const Splitter& sp : splits) {
    int n_cells = (int)cx.cells.size();
    for (int c = 0; c < n_cells; ++c) {
      if (!cx.cells[c].alive) continue;
      if (!bbox_overlap(cell_bbox[c], sp.bbox)) continue;
      if (!cell_straddles(cx, c, sp.plane)) continue;
      if (sp.restrict_pts.size() == 3) {
        if (!triangle_intersects_cell(cx, c, sp.restrict_pts)) continue;
      } else {
        if (!segment_intersects_cell(cx, c, cx.points[sp.restrict_pts[0]], cx.points[sp.restrict_pts[1]]))
          continue;
      }
      split_cell(cx, cell_bbox, c, sp.plane);
    }
  }

  cx.compact();
  return cx;
}

void map_facets(CellComplex& complex, const IndexedMesh& source) {
  std::vector<int> vpt(source.vertices.size());
  for (int i = 0; i < (int)source.vertices.size(); ++i)
    vpt[i] = complex.add_point(ExactPoint::from_vec3(source.vertices[i]));

  std::map<ExactPlane, std::vector<int>> buckets;
  for (int f = 0; f < (int)source.faces.size(); ++f) {
    const auto& fv = source.faces[f];
    ExactPlane p = plane_from_points(complex.points[vpt[fv[0]]], complex.points[vpt[fv[1]]],
                                     complex.points[vpt[fv[2]]]);
    if (sgn(p.a) == 0 && sgn(p.b) == 0 && sgn(p.c) == 0) continue;
    buckets[p.canonical_unoriented()].push_back(f);
  }

  for (int i = 0; i < (int)complex.facets.size(); ++i) {
    Facet& fc = complex.facets[i];
    fc.source = -1;
    auto it = buckets.find(fc.plane.canonical_unoriented());
    if (it == buckets.end()) continue;
    ExactPoint bc = complex.facet_barycenter(i);
    for (int f : it->second) {
      const auto& fv = source.faces[f];
      if (point_in_triangle(bc, complex.points[vpt[fv[0]]], complex.points[vpt[fv[1]]],
                            complex.points[vpt[fv[2]]]) != TrianglePosition::Outside) {
        fc.source = f;
        break;
      }
    }
  }
}

void dump_partition_csv(const std::string& path, const CellComplex& complex) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) return;
  std::fprintf(fp, "# cells=%zu facets=%zu points=%zu\n", complex.cells.size(),
               complex.facets.size(), complex.points.size());
  std::fprintf(fp, "facet,source,cell_pos,cell_neg,area\n");
  for (int i = 0; i < (int)complex.facets.size(); ++i) {
    const Facet& fc = complex.facets[i];
    std::fprintf(fp, "%d,%d,%d,%d,%.17g\n", i, fc.source, fc.cell_pos, fc.cell_neg,
                 complex.facet_area(i));
  }
  std::fclose(fp);
}

}  // namespace meshrepair
