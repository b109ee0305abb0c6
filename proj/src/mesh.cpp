#include "meshrepair/mesh.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meshrepair {

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  if (n == 0.0) return {0, 0, 0};
  return a * (1.0 / n);
}

Vec3 face_normal_raw(const IndexedMesh& m, int f) {
  const auto& t = m.faces[f];
  return cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
}

double face_area(const IndexedMesh& m, int f) { return 0.5 * norm(face_normal_raw(m, f)); }

double total_area(const IndexedMesh& m) {
  double s = 0;
  for (int f = 0; f < (int)m.faces.size(); f++) s += face_area(m, f);
  return s;
}

double signed_volume(const IndexedMesh& m) {
  double v = 0;
  for (const auto& t : m.faces) {
    const Vec3& a = m.vertices[t[0]];
    const Vec3& b = m.vertices[t[1]];
    const Vec3& c = m.vertices[t[2]];
    v += dot(a, cross(b, c)) / 6.0;
  }
  return v;
}

void mesh_bbox(const IndexedMesh& m, Vec3& lo, Vec3& hi) {
  lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
        std::numeric_limits<double>::max()};
  hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
        std::numeric_limits<double>::lowest()};
  for (const auto& v : m.vertices)
    for (int k = 0; k < 3; k++) {
      lo[k] = std::min(lo[k], v[k]);
      hi[k] = std::max(hi[k], v[k]);
    }
  if (m.vertices.empty()) lo = hi = {0, 0, 0};
}

double bbox_diag(const IndexedMesh& m) {
  Vec3 lo, hi;
  mesh_bbox(m, lo, hi);
  return norm(hi - lo);
}

}  // namespace meshrepair
