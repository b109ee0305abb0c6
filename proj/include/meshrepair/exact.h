#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <string>

#include "meshrepair/mesh.h"

namespace meshrepair {

// Arbitrary-precision rational scalar. Doubles lift exactly (they are dyadic),
// so every construction downstream of float input is a faithful function of
// the input bits.
using Rational = mpq_class;

struct ExactPoint {
  Rational x, y, z;

  ExactPoint() = default;
  ExactPoint(Rational xx, Rational yy, Rational zz)
      : x(std::move(xx)), y(std::move(yy)), z(std::move(zz)) {}
  static ExactPoint from_vec3(const Vec3& v) { return {Rational(v[0]), Rational(v[1]), Rational(v[2])}; }
  Vec3 to_vec3() const { return {x.get_d(), y.get_d(), z.get_d()}; }

  const Rational& operator[](int k) const { return k == 0 ? x : k == 1 ? y : z; }
  Rational& operator[](int k) { return k == 0 ? x : k == 1 ? y : z; }

  bool operator==(const ExactPoint& o) const { return x == o.x && y == o.y && z == o.z; }
  bool operator<(const ExactPoint& o) const {
    if (int c = cmp(x, o.x)) return c < 0;
    if (int c = cmp(y, o.y)) return c < 0;
    return cmp(z, o.z) < 0;
  }
};

ExactPoint operator-(const ExactPoint& a, const ExactPoint& b);
ExactPoint operator+(const ExactPoint& a, const ExactPoint& b);
ExactPoint cross(const ExactPoint& a, const ExactPoint& b);
Rational dot(const ExactPoint& a, const ExactPoint& b);

// Oriented plane a x + b y + c z + d = 0; (a,b,c) is the normal.
struct ExactPlane {
  Rational a, b, c, d;

  Rational value(const ExactPoint& p) const;  // a px + b py + c pz + d
  int side(const ExactPoint& p) const;        // its sign
  ExactPoint normal() const { return {a, b, c}; }
  ExactPlane flipped() const { return {-a, -b, -c, -d}; }

  // Scales coefficients so the first nonzero of (a,b,c) is +-1 (orientation
  // kept); two planes are geometrically equal with equal orientation iff their
  // canonical forms are equal.
  ExactPlane canonical() const;
  // Same but orientation-insensitive (leading coefficient forced to +1).
  ExactPlane canonical_unoriented() const;

  bool operator==(const ExactPlane& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  bool operator<(const ExactPlane& o) const {
    if (int s = cmp(a, o.a)) return s < 0;
    if (int s = cmp(b, o.b)) return s < 0;
    if (int s = cmp(c, o.c)) return s < 0;
    return cmp(d, o.d) < 0;
  }
};

// Exact sign of det(b-a, c-a, d-a): + when d is on the positive side of the
// oriented plane through a,b,c.
int orient3d(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c, const ExactPoint& d);

// Plane through three points, normal (b-a) x (c-a). Degenerate (collinear)
// inputs yield a zero normal; callers must check.
ExactPlane plane_from_points(const ExactPoint& a, const ExactPoint& b, const ExactPoint& c);

// Intersection of segment pq with plane h. Requires side(p) != side(q) with
// at most one endpoint on the plane; throws std::invalid_argument otherwise.
ExactPoint intersect_segment_plane(const ExactPoint& p, const ExactPoint& q, const ExactPlane& h);

enum class TrianglePosition { Outside, Boundary, Inside };

// Exact point-vs-triangle classification; off-plane points are Outside.
// Throws std::invalid_argument on degenerate triangles.
TrianglePosition point_in_triangle(const ExactPoint& p, const ExactPoint& a, const ExactPoint& b,
                                   const ExactPoint& c);

// True when p lies strictly between a and b on the segment's line.
bool strictly_between(const ExactPoint& a, const ExactPoint& b, const ExactPoint& p);

// Barycentric coordinates of p in triangle (a,b,c); p must lie exactly on the
// triangle's plane. The three weights sum to 1.
std::array<Rational, 3> barycentric_coords(const ExactPoint& p, const ExactPoint& a,
                                           const ExactPoint& b, const ExactPoint& c);

}  // namespace meshrepair
