#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace meshrepair {

using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline Vec3 operator*(double s, const Vec3& a) { return a * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a);
Vec3 normalized(const Vec3& a);  // zero vector stays zero

// Triangle mesh with optional per-corner texture coordinates and per-face
// materials, mirroring the OBJ subset the loader understands.
struct IndexedMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  // Texture coordinates: uv table plus one index triple per face (all -1 when
  // a face carries no uvs). Empty face_uvs means the mesh has no uvs at all.
  std::vector<Vec2> uvs;
  std::vector<std::array<int, 3>> face_uvs;

  // Material table plus one id per face (-1 = no material). Empty
  // face_material means no usemtl statements were present.
  std::vector<std::string> materials;
  std::vector<int> face_material;

  bool has_uvs() const { return !face_uvs.empty(); }
  bool has_materials() const { return !face_material.empty(); }
  int corner_uv(int face, int corner) const {
    return face_uvs.empty() ? -1 : face_uvs[face][corner];
  }
  int material_of(int face) const {
    return face_material.empty() ? -1 : face_material[face];
  }

  bool operator==(const IndexedMesh& o) const {
    return vertices == o.vertices && faces == o.faces && uvs == o.uvs &&
           face_uvs == o.face_uvs && materials == o.materials && face_material == o.face_material;
  }
};

Vec3 face_normal_raw(const IndexedMesh& m, int f);  // cross product, length = 2*area
double face_area(const IndexedMesh& m, int f);
double total_area(const IndexedMesh& m);
double signed_volume(const IndexedMesh& m);  // sum of tet volumes against the origin
void mesh_bbox(const IndexedMesh& m, Vec3& lo, Vec3& hi);
double bbox_diag(const IndexedMesh& m);

// Pipeline parameters. Lengths are expressed as fractions of the input
// bounding-box diagonal D so configs transfer between models.
struct RepairConfig {
  std::uint64_t seed = 0;
  // Ray budget: faces share n_total samples proportionally to area, at least
  // n_min samples per face, n_dirs rays per sample side, each ray allowed
  // max_bounces diffuse bounces before it counts as blocked.
  std::int64_t n_total = 200000;
  int n_min = 5;
  int n_dirs = 5;
  int max_bounces = 10;
  double offset_frac = 1.0 / 20000.0;      // open-surface offset distance / D
  double l_extended_frac = 1.0 / 1000.0;   // intersection-check search radius / D
  double visibility_threshold = 0.5;       // strict > comparisons
  double openness_threshold = 0.5;
  int threads = 1;                          // must not change results
  bool skip_simplify = false;
  bool retrace_after_reorient = true;      // re-trace measures on the reoriented mesh
  std::string dump_debug_dir;              // empty = no debug dumps
};

}  // namespace meshrepair
