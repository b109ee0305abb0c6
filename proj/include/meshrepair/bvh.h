#pragma once

#include <limits>
#include <vector>

#include "meshrepair/mesh.h"

namespace meshrepair {

struct RayHit {
  double t = std::numeric_limits<double>::infinity();
  int tri = -1;
  bool valid() const { return tri >= 0; }
};

// Axis-aligned BVH over mesh triangles. Median split on the longest centroid
// axis; fully deterministic. Intersection is double-sided (no culling) with a
// small relative barycentric tolerance so shared-edge hits are never missed
// (erring toward "blocked", which the measures need).
class Bvh {
 public:
  explicit Bvh(const IndexedMesh& mesh);

  // Nearest intersection with t > tmin, optionally ignoring one triangle.
  RayHit intersect(const Vec3& origin, const Vec3& dir, int skip_tri = -1,
                   double tmin = 0.0) const;

  // Squared distance from p to the closest point on any triangle.
  double closest_point_sq(const Vec3& p) const;

  const IndexedMesh& mesh() const { return *mesh_; }

 private:
  struct Node {
    Vec3 lo, hi;
    int left = -1, right = -1;  // internal children
    int begin = 0, end = 0;     // leaf triangle range in order_
  };

  int build(int begin, int end, std::vector<Vec3>& centroids);

  const IndexedMesh* mesh_;
  std::vector<Node> nodes_;
  std::vector<int> order_;
  int root_ = -1;
};

// Double-sided Moller-Trumbore; returns t (>= 0) or infinity on miss.
double ray_triangle(const Vec3& o, const Vec3& d, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace meshrepair
