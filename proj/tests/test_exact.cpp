#include <stdexcept>

#include "doctest.h"
#include "meshrepair/exact.h"

using namespace meshrepair;

namespace {
ExactPoint P(double x, double y, double z) { return ExactPoint::from_vec3({x, y, z}); }
}  // namespace

TEST_CASE("orient3d signs match the tetrahedron orientation") {
  ExactPoint a = P(0, 0, 0), b = P(1, 0, 0), c = P(0, 1, 0);
  CHECK(orient3d(a, b, c, P(0, 0, 1)) > 0);
  CHECK(orient3d(a, b, c, P(0, 0, -1)) < 0);
  CHECK(orient3d(a, b, c, P(0.3, 0.3, 0)) == 0);
  // 1e-17 is far below double-epsilon noise around 1 but exactly representable.
  CHECK(orient3d(a, b, c, P(0.5, 0.5, 1e-17)) > 0);
}

TEST_CASE("plane construction, evaluation, canonical forms") {
  ExactPlane h = plane_from_points(P(0, 0, 1), P(1, 0, 1), P(0, 1, 1));  // z = 1
  CHECK(h.side(P(0.2, 0.4, 2)) > 0);
  CHECK(h.side(P(0.2, 0.4, 0)) < 0);
  CHECK(h.side(P(0.2, 0.4, 1)) == 0);
  CHECK(h.value(P(0, 0, 3)) == Rational(2) * h.c);

  ExactPlane doubled{h.a * 2, h.b * 2, h.c * 2, h.d * 2};
  CHECK(doubled.canonical() == h.canonical());
  CHECK(h.flipped().canonical() != h.canonical());
  CHECK(h.flipped().canonical_unoriented() == h.canonical_unoriented());

  ExactPlane degenerate = plane_from_points(P(0, 0, 0), P(1, 1, 1), P(2, 2, 2));
  CHECK(degenerate.normal() == ExactPoint(0, 0, 0));
}

TEST_CASE("segment-plane intersection is exact") {
  ExactPlane h = plane_from_points(P(0.5, 0, 0), P(0.5, 1, 0), P(0.5, 0, 1));  // x = 1/2
  ExactPoint m = intersect_segment_plane(P(0, 0.25, 0.125), P(1, 0.75, 0.625), h);
  CHECK(m == P(0.5, 0.5, 0.375));
  CHECK(h.side(m) == 0);
  CHECK_THROWS_AS(intersect_segment_plane(P(0.6, 0, 0), P(0.7, 0, 0), h), std::invalid_argument);
}

TEST_CASE("point-in-triangle classification") {
  ExactPoint a = P(0, 0, 0), b = P(4, 0, 0), c = P(0, 4, 0);
  CHECK(point_in_triangle(P(1, 1, 0), a, b, c) == TrianglePosition::Inside);
  CHECK(point_in_triangle(P(2, 0, 0), a, b, c) == TrianglePosition::Boundary);
  CHECK(point_in_triangle(a, a, b, c) == TrianglePosition::Boundary);
  CHECK(point_in_triangle(P(3, 3, 0), a, b, c) == TrianglePosition::Outside);
  CHECK(point_in_triangle(P(1, 1, 1), a, b, c) == TrianglePosition::Outside);  // off plane
  CHECK_THROWS_AS(point_in_triangle(a, a, a, c), std::invalid_argument);
}

TEST_CASE("strictly_between is strict at the endpoints") {
  CHECK(strictly_between(P(0, 0, 0), P(2, 2, 2), P(1, 1, 1)));
  CHECK_FALSE(strictly_between(P(0, 0, 0), P(2, 2, 2), P(0, 0, 0)));
  CHECK_FALSE(strictly_between(P(0, 0, 0), P(2, 2, 2), P(3, 3, 3)));
  CHECK_FALSE(strictly_between(P(0, 0, 0), P(2, 2, 2), P(1, 1, 1.0000000001)));
}

TEST_CASE("barycentric coordinates are exact and affine") {
  ExactPoint a = P(0, 0, 0), b = P(1, 0, 0), c = P(0, 1, 0);
  auto w = barycentric_coords(P(0.25, 0.25, 0), a, b, c);
  CHECK(w[0] == Rational(1, 2));
  CHECK(w[1] == Rational(1, 4));
  CHECK(w[2] == Rational(1, 4));

  auto at_vertex = barycentric_coords(b, a, b, c);
  CHECK(at_vertex[0] == 0);
  CHECK(at_vertex[1] == 1);
  CHECK(at_vertex[2] == 0);

  // Affine extension outside the triangle still sums to one.
  auto outside = barycentric_coords(P(2, 2, 0), a, b, c);
  CHECK(outside[0] + outside[1] + outside[2] == 1);
  CHECK(outside[0] < 0);
}

TEST_CASE("plane value lifts doubles without rounding") {
  // 0.1 is not 1/10 in binary; the lifted rational must match the double bit
  // pattern, not the decimal literal.
  ExactPoint p = P(0.1, 0, 0);
  CHECK(p.x == Rational(0.1));
  CHECK(p.x != Rational(1, 10));
}
