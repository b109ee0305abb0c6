#include "meshrepair/bvh.h"

#include <algorithm>
#include <cmath>

namespace meshrepair {

double ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c) {
  constexpr double kBaryEps = 1e-12;
  const double inf = std::numeric_limits<double>::infinity();
  Vec3 e1 = b - a, e2 = c - a;
  Vec3 p = cross(d, e2);
  double det = dot(e1, p);
  if (std::abs(det) < 1e-300) return inf;  // parallel / degenerate
  double inv = 1.0 / det;
  Vec3 s = o - a;
  double u = dot(s, p) * inv;
  if (u < -kBaryEps || u > 1 + kBaryEps) return inf;
  Vec3 q = cross(s, e1);
  double v = dot(d, q) * inv;
  if (v < -kBaryEps || u + v > 1 + kBaryEps) return inf;
  double t = dot(e2, q) * inv;
  return t >= 0 ? t : inf;
}

namespace {

inline void grow(Vec3& lo, Vec3& hi, const Vec3& p) {
  for (int k = 0; k < 3; k++) {
    lo[k] = std::min(lo[k], p[k]);
    hi[k] = std::max(hi[k], p[k]);
  }
}

inline bool slab_hit(const Vec3& lo, const Vec3& hi, const Vec3& o, const Vec3& inv_d,
                     double tmax) {
  double t0 = 0, t1 = tmax;
  for (int k = 0; k < 3; k++) {
    double ta = (lo[k] - o[k]) * inv_d[k];
    double tb = (hi[k] - o[k]) * inv_d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t0 <= t1;
}

double point_aabb_sq(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  double d2 = 0;
  for (int k = 0; k < 3; k++) {
    double d = std::max({lo[k] - p[k], 0.0, p[k] - hi[k]});
    d2 += d * d;
  }
  return d2;
}

// Squared distance from point to triangle (Ericson, Real-Time Collision
// Detection flavor).
double point_triangle_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return dot(ap, ap);
  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return dot(bp, bp);
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    double v = d1 / (d1 - d3);
    Vec3 q = a + ab * v - p;
    return dot(q, q);
  }
  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return dot(cp, cp);
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    double w = d2 / (d2 - d6);
    Vec3 q = a + ac * w - p;
    return dot(q, q);
  }
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && d4 - d3 >= 0 && d5 - d6 >= 0) {
    double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    Vec3 q = b + (c - b) * w - p;
    return dot(q, q);
  }
  double denom = va + vb + vc;
  if (denom == 0) return dot(ap, ap);  // degenerate triangle
  double v = vb / denom, w = vc / denom;
  Vec3 q = a + ab * v + ac * w - p;
  return dot(q, q);
}

}  // namespace

Bvh::Bvh(const IndexedMesh& mesh) : mesh_(&mesh) {
  int n = (int)mesh.faces.size();
  order_.resize(n);
  std::vector<Vec3> centroids(n);
  for (int i = 0; i < n; i++) {
    order_[i] = i;
    const auto& t = mesh.faces[i];
    centroids[i] = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) * (1.0 / 3);
  }
  if (n > 0) root_ = build(0, n, centroids);
}

int Bvh::build(int begin, int end, std::vector<Vec3>& centroids) {
  Node node;
  node.lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
             std::numeric_limits<double>::max()};
  node.hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
             std::numeric_limits<double>::lowest()};
  for (int i = begin; i < end; i++) {
    const auto& t = mesh_->faces[order_[i]];
    for (int c = 0; c < 3; c++) grow(node.lo, node.hi, mesh_->vertices[t[c]]);
  }
  if (end - begin <= 4) {
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return (int)nodes_.size() - 1;
  }
  // split on the longest centroid-extent axis at the median
  Vec3 clo = centroids[order_[begin]], chi = clo;
  for (int i = begin; i < end; i++) {
    grow(clo, chi, centroids[order_[i]]);
  }
  Vec3 ext = chi - clo;
  int axis = ext[0] >= ext[1] && ext[0] >= ext[2] ? 0 : ext[1] >= ext[2] ? 1 : 2;
  int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int x, int y) {
                     if (centroids[x][axis] != centroids[y][axis])
                       return centroids[x][axis] < centroids[y][axis];
                     return x < y;
                   });
  int self = (int)nodes_.size();
  nodes_.push_back(node);
  int l = build(begin, mid, centroids);
  int r = build(mid, end, centroids);
  nodes_[self].left = l;
  nodes_[self].right = r;
  return self;
}

RayHit Bvh::intersect(const Vec3& origin, const Vec3& dir, int skip_tri, double tmin) const {
  RayHit best;
  if (root_ < 0) return best;
  Vec3 inv_d;
  for (int k = 0; k < 3; k++) inv_d[k] = dir[k] != 0 ? 1.0 / dir[k] : std::numeric_limits<double>::infinity();

  int stack[64];
  int sp = 0;
  stack[sp++] = root_;
  while (sp > 0) {
    const Node& node = nodes_[stack[--sp]];
    if (!slab_hit(node.lo, node.hi, origin, inv_d, best.t)) continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; i++) {
        int tri = order_[i];
        if (tri == skip_tri) continue;
        const auto& t = mesh_->faces[tri];
        double th = ray_triangle(origin, dir, mesh_->vertices[t[0]], mesh_->vertices[t[1]],
                                 mesh_->vertices[t[2]]);
        if (th > tmin && th < best.t) {
          best.t = th;
          best.tri = tri;
        } else if (th > tmin && th == best.t && best.tri >= 0 && tri < best.tri) {
          best.tri = tri;  // deterministic tie-break on exactly equal t
        }
      }
    } else {
      stack[sp++] = node.left;
      stack[sp++] = node.right;
    }
  }
  return best;
}

double Bvh::closest_point_sq(const Vec3& p) const {
  if (root_ < 0) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  int stack[64];
  int sp = 0;
  stack[sp++] = root_;
  while (sp > 0) {
    const Node& node = nodes_[stack[--sp]];
    if (point_aabb_sq(p, node.lo, node.hi) >= best) continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; i++) {
        const auto& t = mesh_->faces[order_[i]];
        best = std::min(best, point_triangle_sq(p, mesh_->vertices[t[0]], mesh_->vertices[t[1]],
                                                mesh_->vertices[t[2]]));
      }
    } else {
      stack[sp++] = node.left;
      stack[sp++] = node.right;
    }
  }
  return best;
}

}  // namespace meshrepair
