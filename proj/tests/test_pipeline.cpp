#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.h"
#include "json.hpp"
#include "meshrepair/mesh.h"
#include "meshrepair/pipeline.h"
#include "meshrepair/topology.h"

using namespace meshrepair;
namespace fx = meshrepair::fixtures;

namespace {

RepairConfig fast_config(int n_total = 2000) {
  RepairConfig cfg;
  cfg.n_total = n_total;
  return cfg;
}

std::vector<std::string> stage_names(const RepairReport& r) {
  std::vector<std::string> names;
  for (const auto& [name, ms] : r.stage_ms) names.push_back(name);
  return names;
}

const std::vector<std::string> kStages = {
    "normalize",       "measures", "reorient", "measures_retrace",  "offset",
    "partition",       "facet_measures",       "reorient_facets",   "cut",
    "extract",         "simplify", "split_nonmanifold", "recover_attributes", "verify"};

}  // namespace

TEST_CASE("report json carries exactly the documented keys in order") {
  RepairReport r;
  r.input_faces = 7;
  r.output_faces = 12;
  r.watertight = true;
  r.manifold = false;
  r.hausdorff = 0.25;
  r.flipped_patches = 2;
  r.offset_faces = 3;
  r.extra_faces = 4;
  r.stage_ms = {{"normalize", 1.5}, {"measures", 2.5}};

  auto j = nlohmann::ordered_json::parse(report_json(r));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want = {"input_faces",     "output_faces", "watertight",
                                         "manifold",        "hausdorff",    "flipped_patches",
                                         "offset_faces",    "extra_faces",  "stage_ms"};
  CHECK(keys == want);

  CHECK(j["input_faces"] == 7);
  CHECK(j["output_faces"] == 12);
  CHECK(j["watertight"] == true);
  CHECK(j["manifold"] == false);
  CHECK(j["hausdorff"] == doctest::Approx(0.25));
  CHECK(j["flipped_patches"] == 2);
  CHECK(j["offset_faces"] == 3);
  CHECK(j["extra_faces"] == 4);

  std::vector<std::string> stages;
  for (auto it = j["stage_ms"].begin(); it != j["stage_ms"].end(); ++it)
    stages.push_back(it.key());
  CHECK(stages == std::vector<std::string>{"normalize", "measures"});
}

TEST_CASE("hausdorff distance of a mesh to itself is zero") {
  IndexedMesh cube = fx::make_cube();
  CHECK(hausdorff_distance(cube, cube, 4000) <= 1e-12);
}

TEST_CASE("hausdorff distance between nested cubes peaks at the corners") {
  IndexedMesh inner = fx::make_cube(0, 1);
  IndexedMesh outer = fx::make_cube(-0.05, 1.05);
  // The farthest points are the outer corners, at 0.05*sqrt(3) from the inner
  // corner; every corner is a vertex sample, so the estimate is exact.
  double want = 0.05 * std::sqrt(3.0);
  CHECK(hausdorff_distance(inner, outer, 4000) == doctest::Approx(want).epsilon(1e-12));
  CHECK(hausdorff_distance(outer, inner, 4000) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("hausdorff distance rejects empty meshes") {
  IndexedMesh empty;
  IndexedMesh cube = fx::make_cube();
  CHECK_THROWS_AS(hausdorff_distance(empty, cube), std::invalid_argument);
  CHECK_THROWS_AS(hausdorff_distance(cube, empty), std::invalid_argument);
}

TEST_CASE("repair rejects an empty mesh") {
  IndexedMesh empty;
  RepairReport report;
  CHECK_THROWS_AS(repair(empty, fast_config(), report), std::invalid_argument);
}

TEST_CASE("a perfect cube passes through unchanged") {
  IndexedMesh cube = fx::make_cube();
  RepairReport report;
  IndexedMesh out = repair(cube, fast_config(), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  CHECK(out.faces.size() == 12);
  CHECK(out.vertices.size() == 8);
  CHECK(signed_volume(out) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(report.input_faces == 12);
  CHECK(report.output_faces == 12);
  CHECK(report.watertight);
  CHECK(report.manifold);
  CHECK(report.hausdorff <= 1e-9);
  CHECK(report.flipped_patches == 0);
  CHECK(report.offset_faces == 0);
  CHECK(report.extra_faces == 0);
  CHECK(stage_names(report) == kStages);
}

TEST_CASE("a cube missing half its top closes into a thin shell") {
  IndexedMesh broken = fx::make_defective_cube();
  RepairConfig cfg = fast_config();
  RepairReport report;
  IndexedMesh out = repair(broken, cfg, report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  // The hole spans half a cube side, so bounced rays from the interior escape
  // freely: every face measures open and the whole surface is thickened into
  // a shell (hole walls included): 11 faces + 11 offset copies + 2*3 rim
  // walls.
  CHECK(out.faces.size() == 28);
  double vol = signed_volume(out);
  CHECK(vol > 0.0);
  CHECK(vol < 1e-3);

  CHECK(report.input_faces == 11);
  CHECK(report.watertight);
  CHECK(report.manifold);
  // The three flipped faces share edges consistently, forming one patch.
  CHECK(report.flipped_patches == 1);
  CHECK(report.offset_faces == 17);
  CHECK(report.extra_faces == 0);
  // The output hugs the input at offset distance.
  double d = cfg.offset_frac * bbox_diag(broken);
  CHECK(report.hausdorff > 0.0);
  CHECK(report.hausdorff <= d + 1e-12);
}

TEST_CASE("an inward-wound cube is flipped back") {
  IndexedMesh inward = fx::make_inward_cube();
  RepairReport report;
  IndexedMesh out = repair(inward, fast_config(), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  CHECK(out.faces.size() == 12);
  CHECK(signed_volume(out) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.flipped_patches == 1);
  CHECK(report.hausdorff <= 1e-9);
}

TEST_CASE("a dangling fin thickens into a sliver wedge on the cube") {
  IndexedMesh finned = fx::make_fin_cube();
  RepairConfig cfg = fast_config();
  RepairReport report;
  IndexedMesh out = repair(finned, cfg, report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  // The fin is visible from both sides, so it is kept and extruded into a
  // closed prism: its translated copy plus two wall triangles per rim edge.
  CHECK(out.faces.size() == 12 + 8);
  CHECK(report.offset_faces == 7);
  CHECK(report.extra_faces == 0);
  // The prism is a translate-by-d extrusion, so it adds exactly area*d.
  double d = cfg.offset_frac * bbox_diag(finned);
  double fin_area = 0.3 * std::sqrt(2.0);
  CHECK(signed_volume(out) == doctest::Approx(1.0 + fin_area * d).epsilon(1e-9));
  CHECK(report.hausdorff > 0.0);
  CHECK(report.hausdorff <= d + 1e-12);
}

TEST_CASE("a duplicated face leaves no trace") {
  IndexedMesh dup = fx::make_duplicate_face_cube();
  RepairReport report;
  IndexedMesh out = repair(dup, fast_config(), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  CHECK(out.faces.size() == 12);
  CHECK(signed_volume(out) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interpenetrating cubes fuse, keeping the buried overlap as a void") {
  IndexedMesh pair = fx::make_interpenetrating();
  RepairReport report;
  IndexedMesh out = repair(pair, fast_config(), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  // The overlap block [0.5,1]^3 is sealed away from every ray, so no visual
  // evidence ever claims it: it defaults to exterior and its walls (pieces of
  // the input faces) are re-emitted around a void. Volume = 2 - 2 * 0.125.
  CHECK(signed_volume(out) == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(report.extra_faces == 0);
  // Every output face lies on an input face.
  CHECK(report.hausdorff <= 1e-9);
}

TEST_CASE("disjoint components are both kept") {
  IndexedMesh scene = fx::make_two_components();
  RepairReport report;
  IndexedMesh out = repair(scene, fast_config(), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  CHECK(out.faces.size() == 24);
  CHECK(signed_volume(out) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(report.hausdorff <= 1e-9);
}

TEST_CASE("a sealed inverted shell keeps its void") {
  IndexedMesh nested = fx::make_nested_flipped();
  RepairReport report;
  IndexedMesh out = repair(nested, fast_config(), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  // The inner shell is invisible, so no evidence ever claims its inside:
  // the void persists and the inner boundary is re-emitted.
  CHECK(signed_volume(out) == doctest::Approx(27.0 - 1.0).epsilon(1e-9));
}

TEST_CASE("an open textured sheet becomes a thin slab with the seam preserved") {
  IndexedMesh sheet = fx::make_seam_plane();
  RepairConfig cfg = fast_config();
  RepairReport report;
  IndexedMesh out = repair(sheet, cfg, report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  double d = cfg.offset_frac * bbox_diag(sheet);
  CHECK(signed_volume(out) == doctest::Approx(2.0 * d).epsilon(1e-6));
  CHECK(report.hausdorff > 0.0);
  CHECK(report.hausdorff <= d + 1e-9);

  // Slab: 4 top + 4 bottom (uv seam at x=1 splits both), 4 + 4 long walls
  // (the rim vertex at x=1 stays on the boundary), 2 + 2 end walls. Copies
  // and walls are all real faces of the offset mesh, so they count as
  // offset-inherited, not extra.
  CHECK(out.faces.size() == 20);
  CHECK(report.offset_faces == 16);
  CHECK(report.extra_faces == 0);

  REQUIRE(out.has_materials());
  REQUIRE(out.has_uvs());
  for (size_t f = 0; f < out.faces.size(); ++f) {
    int mat = out.face_material[f];
    CHECK(mat >= 0);
    CHECK(mat <= 1);
  }
  // Inherited faces stay on their own side of the seam, and their uvs use
  // their own chart: u == 1 approaching the seam from the left, u == 0 from
  // the right.
  int checked_left = 0, checked_right = 0;
  for (size_t f = 0; f < out.faces.size(); ++f) {
    bool top = true;
    for (int k = 0; k < 3; ++k) top = top && out.vertices[out.faces[f][k]][2] == 0.0;
    if (!top) continue;
    int mat = out.face_material[f];
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = out.vertices[out.faces[f][k]];
      if (mat == 0) CHECK(p[0] <= 1.0 + 1e-12);
      if (mat == 1) CHECK(p[0] >= 1.0 - 1e-12);
      if (p[0] == 1.0) {
        REQUIRE(out.face_uvs[f][k] >= 0);
        double u = out.uvs[out.face_uvs[f][k]][0];
        if (mat == 0) {
          CHECK(u == 1.0);
          ++checked_left;
        } else {
          CHECK(u == 0.0);
          ++checked_right;
        }
      }
    }
  }
  CHECK(checked_left >= 2);
  CHECK(checked_right >= 2);
}

TEST_CASE("marked hole loops are reopened after sealing") {
  IndexedMesh quad = fx::make_quad();
  RepairConfig cfg = fast_config();
  RepairReport report;
  IndexedMesh out = repair(quad, cfg, report, {{0, 1, 2, 3}});

  // The sealed slab was watertight; deleting the closing walls that touch the
  // marked rim reopens it.
  CHECK(report.watertight);
  CHECK(report.manifold);
  CHECK(!is_watertight(out));
  CHECK(stage_names(report).back() == "preserve_holes");

  // What survives is the two z = 0 sheets: the original plane and the offset
  // skin below it (its corners sit d away from the rim, beyond the snap
  // tolerance).
  CHECK(out.faces.size() == 4);
  CHECK(report.output_faces == 4);
  double d = cfg.offset_frac * bbox_diag(quad);
  for (const Vec3& p : out.vertices) {
    bool on_sheet = p[2] == 0.0 || std::abs(p[2] + d) <= 1e-15;
    CHECK(on_sheet);
  }
}

TEST_CASE("a moebius band thickens into a closed manifold shell") {
  IndexedMesh band = fx::make_mobius(8, 0.25);
  RepairReport report;
  IndexedMesh out = repair(band, fast_config(1500), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  CHECK(signed_volume(out) > 0.0);
  CHECK(report.offset_faces > 0);
}

TEST_CASE("two tetrahedra sharing a vertex come out manifold") {
  IndexedMesh bowtie = fx::make_bowtie();
  RepairReport report;
  IndexedMesh out = repair(bowtie, fast_config(), report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  CHECK(out.faces.size() == 8);
  CHECK(signed_volume(out) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(report.hausdorff <= 1e-9);
}

TEST_CASE("skipping simplification still yields a closed mesh") {
  IndexedMesh cube = fx::make_split_cube();
  RepairConfig cfg = fast_config();
  cfg.skip_simplify = true;
  RepairReport report;
  IndexedMesh out = repair(cube, cfg, report);

  CHECK(is_watertight(out));
  CHECK(is_manifold(out));
  // The fans are coplanar with their squares, so each side is one partition
  // facet, re-triangulated into two faces even without simplification.
  CHECK(out.faces.size() == 12);
  CHECK(report.offset_faces == 0);
  CHECK(signed_volume(out) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("repair is deterministic across runs and thread counts") {
  IndexedMesh broken = fx::make_defective_cube();

  RepairConfig cfg = fast_config();
  RepairReport r1, r2, r4;
  IndexedMesh a = repair(broken, cfg, r1);
  IndexedMesh b = repair(broken, cfg, r2);
  cfg.threads = 4;
  IndexedMesh c = repair(broken, cfg, r4);

  auto same = [](const IndexedMesh& x, const IndexedMesh& y) {
    CHECK(x.vertices == y.vertices);
    CHECK(x.faces == y.faces);
    CHECK(x.uvs == y.uvs);
    CHECK(x.face_uvs == y.face_uvs);
    CHECK(x.materials == y.materials);
    CHECK(x.face_material == y.face_material);
  };
  same(a, b);
  same(a, c);

  auto same_report = [](const RepairReport& x, const RepairReport& y) {
    CHECK(x.input_faces == y.input_faces);
    CHECK(x.output_faces == y.output_faces);
    CHECK(x.watertight == y.watertight);
    CHECK(x.manifold == y.manifold);
    CHECK(x.hausdorff == y.hausdorff);
    CHECK(x.flipped_patches == y.flipped_patches);
    CHECK(x.offset_faces == y.offset_faces);
    CHECK(x.extra_faces == y.extra_faces);
  };
  same_report(r1, r2);
  same_report(r1, r4);
  CHECK(stage_names(r1) == stage_names(r2));
  CHECK(stage_names(r1) == stage_names(r4));
}
