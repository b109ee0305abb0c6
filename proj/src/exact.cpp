#include "meshrepair/exact.h"

#include <stdexcept>

namespace meshrepair {

ExactPoint operator-(const ExactPoint& a, const ExactPoint& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

ExactPoint operator+(const ExactPoint& a, const ExactPoint& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

ExactPoint cross(const ExactPoint& a, const ExactPoint& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Rational dot(const ExactPoint& a, const ExactPoint& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

Rational ExactPlane::value(const ExactPoint& p) const {
  return a * p.x + b * p.y + c * p.z + d;
}

int ExactPlane::side(const ExactPoint& p) const { return sgn(value(p)); }

ExactPlane ExactPlane::canonical() const {
  Rational lead = a != 0 ? a : b != 0 ? b : c;
  if (lead == 0) return *this;  // degenerate, leave as-is
  Rational s = abs(lead);
  return {a / s, b / s, c / s, d / s};
}

ExactPlane ExactPlane::canonical_unoriented() const {
  ExactPlane p = canonical();
  Rational lead = p.a != 0 ? p.a : p.b != 0 ? p.b : p.c;
  if (lead < 0) return p.flipped();
  return p;
}

int orient3d(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, const ExactPoint& d) {
  ExactPoint u = b - a, v = c - a, w = d - a;
  Rational det = dot(cross(u, v), w);
  return sgn(det);
}

ExactPlane plane_from_points(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c) {
  ExactPoint n = cross(b - a, c - a);
  return {n.x, n.y, n.z, -dot(n, a)};
}

ExactPoint intersect_segment_plane(const ExactPoint& p, const ExactPoint& q, const ExactPlane& h) {
  Rational hp = h.a * p.x + h.b * p.y + h.c * p.z + h.d;
  Rational hq = h.a * q.x + h.b * q.y + h.c * q.z + h.d;
  if (sgn(hp) == sgn(hq))
    throw std::invalid_argument("intersect_segment_plane: segment does not cross the plane");
  if (hp == hq) throw std::invalid_argument("intersect_segment_plane: segment parallel to plane");
  Rational t = hp / (hp - hq);
  return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y), p.z + t * (q.z - p.z)};
}

TrianglePosition point_in_triangle(const ExactPoint& p, const ExactPoint& a, const ExactPoint& b,
                                   const ExactPoint& c) {
  ExactPoint n = cross(b - a, c - a);
  if (n.x == 0 && n.y == 0 && n.z == 0)
    throw std::invalid_argument("point_in_triangle: degenerate triangle");
  if (sgn(dot(n, p - a)) != 0) return TrianglePosition::Outside;  // off-plane

  int s1 = sgn(dot(cross(b - a, p - a), n));
  int s2 = sgn(dot(cross(c - b, p - b), n));
  int s3 = sgn(dot(cross(a - c, p - c), n));
  if (s1 < 0 || s2 < 0 || s3 < 0) return TrianglePosition::Outside;
  if (s1 > 0 && s2 > 0 && s3 > 0) return TrianglePosition::Inside;
  return TrianglePosition::Boundary;
}

bool strictly_between(const ExactPoint& a, const ExactPoint& b, const ExactPoint& p) {
  ExactPoint u = b - a, v = p - a;
  ExactPoint c = cross(u, v);
  if (c.x != 0 || c.y != 0 || c.z != 0) return false;
  Rational t = dot(v, u);  // p projected onto ab, scaled by |ab|^2
  return t > 0 && t < dot(u, u);
}

std::array<Rational, 3> barycentric_coords(const ExactPoint& p, const ExactPoint& a,
                                           const ExactPoint& b, const ExactPoint& c) {
  ExactPoint n = cross(b - a, c - a);
  Rational nn = dot(n, n);
  if (nn == 0) throw std::invalid_argument("barycentric_coords: degenerate triangle");
  Rational wa = dot(cross(c - b, p - b), n) / nn;
  Rational wb = dot(cross(a - c, p - c), n) / nn;
  Rational wc = Rational(1) - wa - wb;
  return {wa, wb, wc};
}

}  // namespace meshrepair
