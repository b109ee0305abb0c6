#include <cmath>

#include "doctest.h"
#include "fixtures.h"
#include "meshrepair/measures.h"

using namespace meshrepair;
namespace fx = fixtures;

namespace {
RepairConfig small_config() {
  RepairConfig c;
  c.n_total = 2000;
  return c;
}
}  // namespace

TEST_CASE("sample counts follow the area-proportional formula") {
  IndexedMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 1}, {0, 2, 1}, {-2, -2, 1}};
  m.faces = {{0, 1, 2}, {3, 4, 5}};  // areas 1/2 and 6 (total 13/2)

  RepairConfig c;
  c.n_total = 10;
  c.n_min = 5;
  SamplePlan plan = plan_samples(m, c);
  // ceil(10 * (1/13)) = 1 -> clamped to 5; ceil(10 * 12/13) = 10.
  CHECK(plan.counts[0] == 5);
  CHECK(plan.counts[1] == 10);

  c.n_total = 1200;
  IndexedMesh cube = fx::make_cube();
  plan = plan_samples(cube, c);
  for (int f = 0; f < 12; ++f) CHECK(plan.counts[f] == 100);  // equal areas
}

TEST_CASE("samples are strictly interior to their faces") {
  SamplePlan plan = plan_samples(fx::make_cube(), small_config());
  for (const auto& face : plan.barycentric)
    for (const auto& b : face) {
      CHECK(b[0] > 0);
      CHECK(b[1] > 0);
      CHECK(b[2] > 0);
      CHECK(b[0] + b[1] + b[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero-area meshes are rejected") {
  IndexedMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  m.faces = {{0, 1, 2}};
  CHECK_THROWS_AS(plan_samples(m, small_config()), std::invalid_argument);
}

TEST_CASE("an isolated quad is fully visible, balanced, and open") {
  IndexedMesh quad = fx::make_quad();
  RepairConfig c = small_config();
  SamplePlan plan = plan_samples(quad, c);
  FaceMeasures m = trace_measures(quad, plan, c);
  for (int f = 0; f < 2; ++f) {
    CHECK(m.visibility[f] == 1.0);
    CHECK(m.orientation[f] == 0.0);  // exactly as many escapes on both sides
    CHECK(m.openness[f] == 1.0);
  }
  FaceFlags flags = classify_faces(m, c);
  CHECK(flags.visible[0] == 1);
  CHECK(flags.open[0] == 1);
}

TEST_CASE("closed cube: outward faces score +1 orientation, zero openness") {
  IndexedMesh cube = fx::make_cube();
  RepairConfig c = small_config();
  FaceMeasures m = trace_measures(cube, plan_samples(cube, c), c);
  for (int f = 0; f < 12; ++f) {
    CHECK(m.visibility[f] == 1.0);
    CHECK(m.orientation[f] == 1.0);  // no interior ray ever escapes a convex closure
    CHECK(m.openness[f] == 0.0);
  }
  FaceFlags flags = classify_faces(m, c);
  CHECK(flags.visible[3] == 1);
  CHECK(flags.open[3] == 0);
}

TEST_CASE("inward cube: orientation is exactly -1 on every face") {
  IndexedMesh cube = fx::make_inward_cube();
  RepairConfig c = small_config();
  FaceMeasures m = trace_measures(cube, plan_samples(cube, c), c);
  for (int f = 0; f < 12; ++f) CHECK(m.orientation[f] == -1.0);
}

TEST_CASE("measures are winding-symmetric bit for bit") {
  IndexedMesh quad = fx::make_quad();
  IndexedMesh flipped = quad;
  fx::flip_all(flipped);

  RepairConfig c = small_config();
  FaceMeasures a = trace_measures(quad, plan_samples(quad, c), c);
  FaceMeasures b = trace_measures(flipped, plan_samples(flipped, c), c);
  for (int f = 0; f < 2; ++f) {
    CHECK(a.visibility[f] == b.visibility[f]);
    CHECK(a.orientation[f] == -b.orientation[f]);
    CHECK(a.openness[f] == b.openness[f]);
    REQUIRE(a.sample_counts[f].size() == b.sample_counts[f].size());
    for (size_t s = 0; s < a.sample_counts[f].size(); ++s) {
      CHECK(a.sample_counts[f][s][0] == b.sample_counts[f][s][1]);
      CHECK(a.sample_counts[f][s][1] == b.sample_counts[f][s][0]);
    }
  }

  // Same on a partially flipped closed mesh, where occlusion is nontrivial.
  IndexedMesh cube = fx::make_cube();
  IndexedMesh cube_flipped = cube;
  fx::flip_face(cube_flipped, 7);
  FaceMeasures ca = trace_measures(cube, plan_samples(cube, c), c);
  FaceMeasures cb = trace_measures(cube_flipped, plan_samples(cube_flipped, c), c);
  CHECK(ca.visibility[7] == cb.visibility[7]);
  CHECK(ca.orientation[7] == -cb.orientation[7]);
  CHECK(ca.openness[7] == cb.openness[7]);
  CHECK(ca.orientation[3] == cb.orientation[3]);  // untouched face, same trace
}

TEST_CASE("tracing is deterministic and thread-count independent") {
  IndexedMesh mesh = fx::make_defective_cube();
  RepairConfig c1 = small_config();
  RepairConfig c4 = c1;
  c4.threads = 4;

  FaceMeasures a = trace_measures(mesh, plan_samples(mesh, c1), c1);
  FaceMeasures b = trace_measures(mesh, plan_samples(mesh, c4), c4);
  CHECK(a.visibility == b.visibility);
  CHECK(a.orientation == b.orientation);
  CHECK(a.openness == b.openness);
  CHECK(a.sample_counts == b.sample_counts);

  RepairConfig seeded = c1;
  seeded.seed = 1234;
  FaceMeasures d = trace_measures(mesh, plan_samples(mesh, seeded), seeded);
  bool any_diff = d.sample_counts != a.sample_counts;
  CHECK(any_diff);  // different seed, different rays
}
