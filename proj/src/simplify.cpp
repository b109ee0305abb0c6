#include "meshrepair/simplify.h"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <set>

#include "meshrepair/attributes.h"

namespace meshrepair {

namespace {

using P2 = std::array<Rational, 2>;

// Orientation-preserving projection onto the two non-dominant axes of the
// plane normal: counter-clockwise in 2D matches counter-clockwise around the
// normal.
struct Projector {
  int i = 0, j = 1;

  static Projector make(const ExactPlane& pl) {
    const Rational* n[3] = {&pl.a, &pl.b, &pl.c};
    int k = 0;
    Rational m = abs(pl.a);
    if (abs(pl.b) > m) {
      m = abs(pl.b);
      k = 1;
    }
    if (abs(pl.c) > m) k = 2;
    Projector pr{(k + 1) % 3, (k + 2) % 3};
    if (*n[k] < 0) std::swap(pr.i, pr.j);
    return pr;
  }
  P2 operator()(const ExactPoint& p) const { return {p[i], p[j]}; }
};

Rational cross2(const P2& a, const P2& b, const P2& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

Rational dot2(const P2& a, const P2& b) { return a[0] * b[0] + a[1] * b[1]; }

P2 sub2(const P2& a, const P2& b) { return {a[0] - b[0], a[1] - b[1]}; }

// 1 = strictly inside CCW triangle, 0 = on its boundary, -1 = outside.
int point_in_tri2(const P2& p, const P2& a, const P2& b, const P2& c) {
  int s1 = sgn(cross2(a, b, p)), s2 = sgn(cross2(b, c, p)), s3 = sgn(cross2(c, a, p));
  if (s1 < 0 || s2 < 0 || s3 < 0) return -1;
  if (s1 > 0 && s2 > 0 && s3 > 0) return 1;
  return 0;
}

bool proper_cross2(const P2& a, const P2& b, const P2& c, const P2& d) {
  int d1 = sgn(cross2(a, b, c)), d2 = sgn(cross2(a, b, d));
  int d3 = sgn(cross2(c, d, a)), d4 = sgn(cross2(c, d, b));
  return d1 * d2 < 0 && d3 * d4 < 0;
}

bool on_open_segment2(const P2& a, const P2& b, const P2& p) {
  if (sgn(cross2(a, b, p)) != 0) return false;
  P2 u = sub2(b, a), v = sub2(p, a);
  Rational t = dot2(u, v);
  return t > 0 && t < dot2(u, u);
}

// Attribute continuity of two mapped source faces along an interface edge.
bool attributes_continuous(const IndexedMesh& source, int f, int g, const ExactPoint& pa,
                           const ExactPoint& pb) {
  if (f == g) return true;
  if (f < 0 || g < 0) return f < 0 && g < 0;
  if (source.material_of(f) != source.material_of(g)) return false;
  for (const ExactPoint* p : {&pa, &pb}) {
    std::array<Rational, 2> uf, ug;
    bool hf = exact_uv_at(source, f, *p, uf);
    bool hg = exact_uv_at(source, g, *p, ug);
    if (hf != hg) return false;
    if (hf && !(uf[0] == ug[0] && uf[1] == ug[1])) return false;
  }
  return true;
}

// Clockwise-from-reference ordering of 2D directions, for picking the next
// boundary edge at branch vertices: rank 0 = strictly clockwise side, then
// directly opposite, then counter-clockwise side, then straight ahead.
struct CwComparator {
  P2 r;
  int rank(const P2& c) const {
    int cr = sgn(cross2({0, 0}, r, c));
    if (cr < 0) return 0;
    if (cr > 0) return 2;
    return sgn(dot2(r, c)) < 0 ? 1 : 3;
  }
  bool less(const P2& c1, const P2& c2) const {
    int r1 = rank(c1), r2 = rank(c2);
    if (r1 != r2) return r1 < r2;
    if (r1 == 1 || r1 == 3) return false;  // same direction class: tie
    return sgn(cross2({0, 0}, c1, c2)) < 0;
  }
};

}  // namespace

BoundaryGraph detect_boundaries(const InterfaceMesh& interface, const IndexedMesh& source) {
  const IndexedMesh& mesh = interface.mesh;
  int nf = (int)mesh.faces.size();

  std::vector<ExactPlane> plane(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& fv = mesh.faces[f];
    plane[f] = plane_from_points(interface.exact[fv[0]], interface.exact[fv[1]],
                                 interface.exact[fv[2]])
                   .canonical();
  }

  struct Inc {
    int face;
    bool forward;
  };
  std::map<std::pair<int, int>, std::vector<Inc>> edges;
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) {
      int a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
      edges[{std::min(a, b), std::max(a, b)}].push_back({f, a < b});
    }

  std::map<std::pair<int, int>, char> crossable;
  for (const auto& [e, inc] : edges) {
    bool ok = inc.size() == 2 && inc[0].forward != inc[1].forward &&
              plane[inc[0].face] == plane[inc[1].face] &&
              attributes_continuous(source, interface.face_source[inc[0].face],
                                    interface.face_source[inc[1].face], interface.exact[e.first],
                                    interface.exact[e.second]);
    crossable[e] = ok;
  }

  BoundaryGraph bg;
  bg.face_group.assign(nf, -1);
  bg.vertex_on_boundary.assign(mesh.vertices.size(), 0);
  for (int seed = 0; seed < nf; ++seed) {
    if (bg.face_group[seed] >= 0) continue;
    int gid = (int)bg.groups.size();
    bg.groups.emplace_back();
    BoundaryGraph::Group& group = bg.groups.back();
    group.plane = plane[seed];
    std::vector<int> stack{seed};
    bg.face_group[seed] = gid;
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      group.faces.push_back(f);
      for (int k = 0; k < 3; ++k) {
        int a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
        std::pair<int, int> key{std::min(a, b), std::max(a, b)};
        if (!crossable.at(key)) continue;
        const auto& inc = edges.at(key);
        int g = inc[0].face == f ? inc[1].face : inc[0].face;
        if (bg.face_group[g] < 0) {
          bg.face_group[g] = gid;
          stack.push_back(g);
        }
      }
    }
    std::sort(group.faces.begin(), group.faces.end());
    std::set<int> src;
    for (int f : group.faces)
      if (interface.face_source[f] >= 0) src.insert(interface.face_source[f]);
    group.sources.assign(src.begin(), src.end());
  }

  // Boundary loops per group: follow directed non-crossable edges, resolving
  // branch vertices by the clockwise-next rule in the group plane.
  for (int gid = 0; gid < (int)bg.groups.size(); ++gid) {
    BoundaryGraph::Group& group = bg.groups[gid];
    Projector pr = Projector::make(group.plane);

    struct DirEdge {
      int from, to;
      bool used = false;
    };
    std::vector<DirEdge> dir;
    for (int f : group.faces)
      for (int k = 0; k < 3; ++k) {
        int a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
        if (!crossable.at({std::min(a, b), std::max(a, b)})) dir.push_back({a, b});
      }
    std::sort(dir.begin(), dir.end(),
              [](const DirEdge& x, const DirEdge& y) { return std::tie(x.from, x.to) < std::tie(y.from, y.to); });
    std::map<int, std::vector<int>> out_edges;  // vertex -> dir indices
    for (int i = 0; i < (int)dir.size(); ++i) out_edges[dir[i].from].push_back(i);

    std::map<int, P2> p2;
    auto proj = [&](int v) -> const P2& {
      auto it = p2.find(v);
      if (it == p2.end()) it = p2.emplace(v, pr(interface.exact[v])).first;
      return it->second;
    };

    for (int e0 = 0; e0 < (int)dir.size(); ++e0) {
      if (dir[e0].used) continue;
      std::vector<int> loop;
      int cur = e0;
      int guard = 0;
      while (true) {
        dir[cur].used = true;
        loop.push_back(dir[cur].from);
        bg.vertex_on_boundary[dir[cur].from] = 1;
        int v = dir[cur].to;
        if (v == dir[e0].from) break;  // would continue with e0: loop closed
        CwComparator cmp{sub2(proj(dir[cur].from), proj(v))};  // reference = -incoming
        int best = -1;
        for (int cand : out_edges.at(v)) {
          if (dir[cand].used) continue;
          if (best < 0 || cmp.less(sub2(proj(dir[cand].to), proj(v)),
                                   sub2(proj(dir[best].to), proj(v))))
            best = cand;
        }
        assert(best >= 0 && "boundary walk ran out of outgoing edges");
        cur = best;
        assert(++guard <= (int)dir.size());
      }
      group.loops.push_back(std::move(loop));
    }
    group.original_loops = group.loops;
  }
  return bg;
}

int collapse_redundant(BoundaryGraph& graph, const InterfaceMesh& interface,
                       const std::vector<std::uint8_t>* pinned) {
  int nv = (int)interface.exact.size();
  std::vector<std::uint8_t> removable(nv, 0);
  std::vector<std::set<int>> nbrs(nv);
  for (const auto& g : graph.groups)
    for (const auto& loop : g.loops) {
      int n = (int)loop.size();
      for (int k = 0; k < n; ++k) {
        nbrs[loop[k]].insert(loop[(k + 1) % n]);
        nbrs[loop[k]].insert(loop[(k + n - 1) % n]);
      }
    }
  for (int v = 0; v < nv; ++v)
    removable[v] = graph.vertex_on_boundary[v] && nbrs[v].size() == 2 &&
                   !(pinned && (*pinned)[v]);
  for (const auto& g : graph.groups)
    for (const auto& loop : g.loops) {
      int n = (int)loop.size();
      for (int k = 0; k < n; ++k) {
        int v = loop[k];
        if (!removable[v]) continue;
        const ExactPoint& prev = interface.exact[loop[(k + n - 1) % n]];
        const ExactPoint& next = interface.exact[loop[(k + 1) % n]];
        if (!strictly_between(prev, next, interface.exact[v])) removable[v] = 0;
      }
    }

  int removed = 0;
  for (int v = 0; v < nv; ++v)
    if (removable[v]) {
      ++removed;
      graph.vertex_on_boundary[v] = 0;
    }
  if (removed == 0) return 0;
  for (auto& g : graph.groups)
    for (auto& loop : g.loops) {
      std::vector<int> kept;
      for (int v : loop)
        if (!removable[v]) kept.push_back(v);
      assert(kept.size() >= 3 && "boundary loop collapsed away");
      loop = std::move(kept);
    }
  return removed;
}

namespace {

struct EarChecker {
  const InterfaceMesh& im;
  const BoundaryGraph& bg;
  double l_ext;
  std::vector<std::array<double, 6>> face_bbox;  // per interface face

  EarChecker(const InterfaceMesh& im_, const BoundaryGraph& bg_, double l_ext_)
      : im(im_), bg(bg_), l_ext(l_ext_) {
    face_bbox.resize(im.mesh.faces.size());
    for (int f = 0; f < (int)im.mesh.faces.size(); ++f) {
      auto& b = face_bbox[f];
      b = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
           std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
           std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
      for (int c : im.mesh.faces[f]) {
        const Vec3& v = im.mesh.vertices[c];
        for (int k = 0; k < 3; ++k) {
          b[k] = std::min(b[k], v[k]);
          b[3 + k] = std::max(b[3 + k], v[k]);
        }
      }
    }
  }

  // True when interface face f intersects the open ear triangle ABC lying on
  // plane pl (projected by pr).
  bool face_blocks(int f, const ExactPoint& A, const ExactPoint& B, const ExactPoint& C,
                   const ExactPlane& pl, const Projector& pr) const {
    const auto& fv = im.mesh.faces[f];
    const ExactPoint& p0 = im.exact[fv[0]];
    const ExactPoint& p1 = im.exact[fv[1]];
    const ExactPoint& p2 = im.exact[fv[2]];
    P2 a = pr(A), b = pr(B), c = pr(C);

    ExactPlane op = plane_from_points(p0, p1, p2);
    if (sgn(op.a) == 0 && sgn(op.b) == 0 && sgn(op.c) == 0) return false;  // degenerate face
    if (op.canonical_unoriented() == pl.canonical_unoriented()) {
      // Coplanar: block on positive-area overlap.
      std::vector<P2> poly{pr(p0), pr(p1), pr(p2)};
      if (sgn(cross2(poly[0], poly[1], poly[2])) < 0) std::swap(poly[1], poly[2]);
      const P2* tri[3] = {&a, &b, &c};
      for (int e = 0; e < 3 && poly.size() >= 3; ++e) {
        const P2& ea = *tri[e];
        const P2& eb = *tri[(e + 1) % 3];
        std::vector<P2> next;
        int n = (int)poly.size();
        for (int i = 0; i < n; ++i) {
          const P2& pcur = poly[i];
          const P2& pnxt = poly[(i + 1) % n];
          Rational scur = cross2(ea, eb, pcur), snxt = cross2(ea, eb, pnxt);
          if (sgn(scur) >= 0) next.push_back(pcur);
          if (sgn(scur) * sgn(snxt) < 0) {
            Rational t = scur / (scur - snxt);
            next.push_back({pcur[0] + t * (pnxt[0] - pcur[0]), pcur[1] + t * (pnxt[1] - pcur[1])});
          }
        }
        poly = std::move(next);
      }
      if (poly.size() < 3) return false;
      Rational area = 0;
      for (int i = 1; i + 1 < (int)poly.size(); ++i) area += cross2(poly[0], poly[i], poly[i + 1]);
      return sgn(area) != 0;
    }

    // Crossing plane: clip the face's section segment to the ear.
    const ExactPoint* pts[3] = {&p0, &p1, &p2};
    Rational val[3];
    int sd[3];
    for (int k = 0; k < 3; ++k) {
      val[k] = pl.value(*pts[k]);
      sd[k] = sgn(val[k]);
    }
    std::vector<P2> section;
    auto push_unique = [&](const P2& q) {
      for (const auto& s : section)
        if (s[0] == q[0] && s[1] == q[1]) return;
      section.push_back(q);
    };
    for (int k = 0; k < 3; ++k) {
      if (sd[k] == 0) push_unique(pr(*pts[k]));
      int k2 = (k + 1) % 3;
      if (sd[k] * sd[k2] < 0) {
        Rational t = val[k] / (val[k] - val[k2]);
        ExactPoint x{pts[k]->x + t * (pts[k2]->x - pts[k]->x),
                     pts[k]->y + t * (pts[k2]->y - pts[k]->y),
                     pts[k]->z + t * (pts[k2]->z - pts[k]->z)};
        push_unique(pr(x));
      }
    }
    if (section.empty()) return false;
    if (section.size() == 1) return point_in_tri2(section[0], a, b, c) > 0;
    assert(section.size() == 2);
    // Clip [q0,q1] to the closed ear; block when the middle of what remains
    // is strictly inside.
    const P2 &q0 = section[0], &q1 = section[1];
    Rational t0 = 0, t1 = 1;
    const P2* tri[3] = {&a, &b, &c};
    for (int e = 0; e < 3; ++e) {
      const P2& ea = *tri[e];
      const P2& eb = *tri[(e + 1) % 3];
      Rational s0 = cross2(ea, eb, q0), s1v = cross2(ea, eb, q1);
      if (sgn(s0) < 0 && sgn(s1v) < 0) return false;
      if (s0 == s1v) {
        if (sgn(s0) < 0) return false;
        continue;
      }
      Rational tc = s0 / (s0 - s1v);
      if (s1v < s0) {
        if (tc < t1) t1 = tc;
      } else {
        if (tc > t0) t0 = tc;
      }
      if (t0 > t1) return false;
    }
    Rational tm = (t0 + t1) / 2;
    P2 mid{q0[0] + tm * (q1[0] - q0[0]), q0[1] + tm * (q1[1] - q0[1])};
    return point_in_tri2(mid, a, b, c) > 0;
  }

  bool blocked(int group, const ExactPoint& A, const ExactPoint& B, const ExactPoint& C,
               const ExactPlane& pl, const Projector& pr) const {
    std::array<double, 6> eb{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
                             std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
                             std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const ExactPoint* p : {&A, &B, &C}) {
      Vec3 v = p->to_vec3();
      for (int k = 0; k < 3; ++k) {
        eb[k] = std::min(eb[k], v[k] - l_ext);
        eb[3 + k] = std::max(eb[3 + k], v[k] + l_ext);
      }
    }
    for (int f = 0; f < (int)im.mesh.faces.size(); ++f) {
      if (bg.face_group[f] == group) continue;
      const auto& fb = face_bbox[f];
      bool overlap = true;
      for (int k = 0; k < 3 && overlap; ++k)
        if (eb[3 + k] < fb[k] || fb[3 + k] < eb[k]) overlap = false;
      if (!overlap) continue;
      if (face_blocks(f, A, B, C, pl, pr)) return true;
    }
    return false;
  }
};

// Single group retriangulation. Returns false when no valid bridge or ear
// sequence exists.
bool triangulate_group(const InterfaceMesh& im, const BoundaryGraph& bg, int gid,
                       const EarChecker& checker, std::vector<std::array<int, 3>>* tris) {
  const BoundaryGraph::Group& group = bg.groups[gid];
  Projector pr = Projector::make(group.plane);
  std::map<int, P2> p2;
  auto proj = [&](int v) -> const P2& {
    auto it = p2.find(v);
    if (it == p2.end()) it = p2.emplace(v, pr(im.exact[v])).first;
    return it->second;
  };

  // Classify loops by signed area.
  std::vector<int> outer_idx;
  std::vector<int> hole_idx;
  for (int li = 0; li < (int)group.loops.size(); ++li) {
    const auto& loop = group.loops[li];
    Rational area = 0;
    for (int k = 0; k < (int)loop.size(); ++k)
      area += cross2({0, 0}, proj(loop[k]), proj(loop[(k + 1) % loop.size()]));
    int s = sgn(area);
    assert(s != 0 && "zero-area boundary loop");
    (s > 0 ? outer_idx : hole_idx).push_back(li);
  }
  if (outer_idx.size() != 1) return false;  // unexpected region topology
  std::vector<int> ring = group.loops[outer_idx[0]];

  // Constrained segments: every boundary edge of the group (T-junction-free
  // by construction). Bridges must not cross them nor pass through vertices.
  std::vector<std::pair<int, int>> constrained;
  for (const auto& loop : group.loops)
    for (int k = 0; k < (int)loop.size(); ++k)
      constrained.push_back({loop[k], loop[(k + 1) % loop.size()]});
  std::set<int> all_verts;
  for (const auto& loop : group.loops) all_verts.insert(loop.begin(), loop.end());

  auto segment_ok = [&](int va, int vb) {
    const P2 &a = proj(va), &b = proj(vb);
    for (const auto& [ca, cb] : constrained) {
      if (proper_cross2(a, b, proj(ca), proj(cb))) return false;
    }
    for (int v : all_verts) {
      if (v == va || v == vb) continue;
      if (on_open_segment2(a, b, proj(v))) return false;
    }
    return true;
  };

  // Bridge each hole into the ring, nearest valid vertex pair first.
  std::vector<int> pending = hole_idx;
  std::sort(pending.begin(), pending.end());
  for (int li : pending) {
    const auto& hole = group.loops[li];
    struct Cand {
      Rational d2;
      int h, r;  // hole index, ring position
    };
    std::vector<Cand> cands;
    for (int h = 0; h < (int)hole.size(); ++h)
      for (int r = 0; r < (int)ring.size(); ++r) {
        P2 d = sub2(proj(hole[h]), proj(ring[r]));
        cands.push_back({dot2(d, d), h, r});
      }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
      if (x.d2 != y.d2) return x.d2 < y.d2;
      return std::tie(x.h, x.r) < std::tie(y.h, y.r);
    });
    bool done = false;
    for (const Cand& cand : cands) {
      int hv = hole[cand.h], rv = ring[cand.r];
      if (hv == rv) continue;  // loops touching at a pinch vertex: no bridge needed there
      if (!segment_ok(hv, rv)) continue;
      std::vector<int> merged(ring.begin(), ring.begin() + cand.r + 1);
      for (int k = 0; k <= (int)hole.size(); ++k) merged.push_back(hole[(cand.h + k) % hole.size()]);
      merged.insert(merged.end(), ring.begin() + cand.r, ring.end());
      ring = std::move(merged);
      constrained.push_back({hv, rv});  // bridges are constraints for later holes
      done = true;
      break;
    }
    if (!done) return false;
  }

  // Ear clipping, smallest interior angle first.
  auto angle_less = [&](const P2& u1, const P2& v1, const P2& u2, const P2& v2) {
    // compare angle(u1,v1) < angle(u2,v2), both in (0, pi)
    Rational d1 = dot2(u1, v1), d2 = dot2(u2, v2);
    int s1 = sgn(d1), s2 = sgn(d2);
    if (s1 >= 0 && s2 < 0) return true;
    if (s1 < 0 && s2 >= 0) return false;
    Rational lhs = d1 * d1 * dot2(u2, u2) * dot2(v2, v2);
    Rational rhs = d2 * d2 * dot2(u1, u1) * dot2(v1, v1);
    return s1 >= 0 ? lhs > rhs : lhs < rhs;
  };

  while (ring.size() > 3) {
    int n = (int)ring.size();
    int best = -1;
    P2 bu{}, bv{};
    for (int k = 0; k < n; ++k) {
      const P2 &a = proj(ring[(k + n - 1) % n]), &b = proj(ring[k]), &c = proj(ring[(k + 1) % n]);
      if (sgn(cross2(a, b, c)) <= 0) continue;
      bool ok = true;
      // No ring vertex inside the candidate or on its boundary (other than
      // its own corners).
      for (int m = 0; m < n && ok; ++m) {
        if (m == k || m == (k + n - 1) % n || m == (k + 1) % n) continue;
        const P2& q = proj(ring[m]);
        if ((q == a) || (q == b) || (q == c)) continue;  // duplicated bridge vertices
        if (point_in_tri2(q, a, b, c) >= 0) ok = false;
      }
      // Diagonal must not cross any constrained segment.
      for (int ci = 0; ci < (int)constrained.size() && ok; ++ci)
        if (proper_cross2(a, c, proj(constrained[ci].first), proj(constrained[ci].second)))
          ok = false;
      if (ok && checker.blocked(gid, im.exact[ring[(k + n - 1) % n]], im.exact[ring[k]],
                                im.exact[ring[(k + 1) % n]], group.plane, pr))
        ok = false;
      if (!ok) continue;
      P2 u = sub2(a, b), v = sub2(c, b);
      if (best < 0 || angle_less(u, v, bu, bv)) {
        best = k;
        bu = u;
        bv = v;
      }
    }
    if (best < 0) return false;
    int n2 = (int)ring.size();
    tris->push_back({ring[(best + n2 - 1) % n2], ring[best], ring[(best + 1) % n2]});
    ring.erase(ring.begin() + best);
  }
  if (sgn(cross2(proj(ring[0]), proj(ring[1]), proj(ring[2]))) <= 0) return false;
  tris->push_back({ring[0], ring[1], ring[2]});
  return true;
}

}  // namespace

InterfaceMesh retriangulate(const InterfaceMesh& interface, const BoundaryGraph& graph,
                            const RepairConfig& config, double diag,
                            std::vector<int>* fell_back) {
  InterfaceMesh out;
  out.group_sources.resize(graph.groups.size());
  for (int g = 0; g < (int)graph.groups.size(); ++g)
    out.group_sources[g] = graph.groups[g].sources;

  EarChecker checker(interface, graph, config.l_extended_frac * diag);
  std::vector<std::array<int, 3>> tris;
  for (int g = 0; g < (int)graph.groups.size(); ++g) {
    const auto& group = graph.groups[g];
    tris.clear();
    bool ok = triangulate_group(interface, graph, g, checker, &tris);
    if (ok) {
      for (const auto& t : tris) {
        out.mesh.faces.push_back(t);
        out.face_source.push_back(group.sources.empty() ? -1 : group.sources[0]);
        out.face_group.push_back(g);
      }
    } else {
      if (fell_back) fell_back->push_back(g);
      for (int f : group.faces) {
        out.mesh.faces.push_back(interface.mesh.faces[f]);
        out.face_source.push_back(interface.face_source[f]);
        out.face_group.push_back(g);
      }
    }
  }

  // Compact vertices to the referenced subset.
  std::vector<int> remap(interface.exact.size(), -1);
  for (auto& f : out.mesh.faces)
    for (int& v : f) {
      if (remap[v] < 0) {
        remap[v] = (int)out.mesh.vertices.size();
        out.mesh.vertices.push_back(interface.mesh.vertices[v]);
        out.exact.push_back(interface.exact[v]);
      }
      v = remap[v];
    }
  return out;
}

InterfaceMesh simplify_interface(const InterfaceMesh& interface, const IndexedMesh& source,
                                 const RepairConfig& config, double diag,
                                 int* removed_vertices) {
  std::vector<std::uint8_t> pinned(interface.exact.size(), 0);
  for (int attempt = 0; attempt < (int)interface.exact.size() + 2; ++attempt) {
    BoundaryGraph bg = detect_boundaries(interface, source);
    int removed = collapse_redundant(bg, interface, &pinned);
    std::vector<int> fell_back;
    InterfaceMesh out = retriangulate(interface, bg, config, diag, &fell_back);

    // A fallen-back group keeps its original faces; if collapse had removed
    // vertices on its boundary the neighbours would no longer match edge for
    // edge. Pin those vertices and redo.
    bool retry = false;
    for (int g : fell_back)
      for (const auto& loop : bg.groups[g].original_loops)
        for (int v : loop)
          if (!pinned[v] && !bg.vertex_on_boundary[v]) {
            // vertex was collapsed away somewhere but this group still uses it
            pinned[v] = 1;
            retry = true;
          }
    if (!retry) {
      if (removed_vertices) *removed_vertices = removed;
      return out;
    }
  }
  if (removed_vertices) *removed_vertices = 0;
  return interface;  // defensive: pinning failed to converge
}

}  // namespace meshrepair
