#include "meshrepair/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "meshrepair/attributes.h"
#include "meshrepair/bvh.h"
#include "meshrepair/extraction.h"
#include "meshrepair/obj_io.h"
#include "meshrepair/partition.h"
#include "meshrepair/preprocess.h"
#include "meshrepair/simplify.h"
#include "meshrepair/topology.h"

namespace meshrepair {

std::string report_json(const RepairReport& r) {
  nlohmann::ordered_json j;
  j["input_faces"] = r.input_faces;
  j["output_faces"] = r.output_faces;
  j["watertight"] = r.watertight;
  j["manifold"] = r.manifold;
  j["hausdorff"] = r.hausdorff;
  j["flipped_patches"] = r.flipped_patches;
  j["offset_faces"] = r.offset_faces;
  j["extra_faces"] = r.extra_faces;
  nlohmann::ordered_json stages;
  for (const auto& [name, ms] : r.stage_ms) stages[name] = ms;
  j["stage_ms"] = std::move(stages);
  return j.dump(2);
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_double(std::uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }

// Vertices plus enough area-uniform surface points to reach `samples`.
std::vector<Vec3> sample_points(const IndexedMesh& m, int samples) {
  std::vector<Vec3> pts = m.vertices;
  std::vector<double> cum(m.faces.size());
  double total = 0;
  for (size_t f = 0; f < m.faces.size(); ++f) cum[f] = total += face_area(m, (int)f);
  int extra = samples - (int)pts.size();
  if (total <= 0) return pts;
  for (int i = 0; i < extra; ++i) {
    std::uint64_t s = (std::uint64_t)i * 3 + 1;
    double r = unit_double(mix64(s)) * total;
    int f = (int)(std::lower_bound(cum.begin(), cum.end(), r) - cum.begin());
    if (f >= (int)m.faces.size()) f = (int)m.faces.size() - 1;
    double su = std::sqrt(unit_double(mix64(s + 1)));
    double v = unit_double(mix64(s + 2));
    double wa = 1 - su, wb = su * (1 - v), wc = su * v;
    const auto& t = m.faces[f];
    pts.push_back(wa * m.vertices[t[0]] + wb * m.vertices[t[1]] + wc * m.vertices[t[2]]);
  }
  return pts;
}

double one_sided(const std::vector<Vec3>& pts, const Bvh& target) {
  double worst = 0;
  for (const Vec3& p : pts) worst = std::max(worst, target.closest_point_sq(p));
  return std::sqrt(worst);
}

}  // namespace

double hausdorff_distance(const IndexedMesh& a, const IndexedMesh& b, int samples) {
  if (a.faces.empty() || b.faces.empty())
    throw std::invalid_argument("hausdorff_distance: empty mesh");
  Bvh ba(a), bb(b);
  return std::max(one_sided(sample_points(a, samples), bb),
                  one_sided(sample_points(b, samples), ba));
}

namespace {

// Distance from point p to segment ab.
double point_segment_dist(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 d = b - a;
  double l2 = dot(d, d);
  double t = l2 > 0 ? std::clamp(dot(p - a, d) / l2, 0.0, 1.0) : 0.0;
  Vec3 q = a + t * d;
  return std::sqrt(dot(p - q, p - q));
}

void dump_facet_measures_csv(const std::string& path, const FacetMeasures& fm) {
  std::ofstream out(path);
  out << "facet,visibility,orientation\n";
  for (size_t i = 0; i < fm.visibility.size(); ++i)
    out << i << ',' << fm.visibility[i] << ',' << fm.orientation[i] << '\n';
}

}  // namespace

IndexedMesh repair(const IndexedMesh& input, const RepairConfig& config, RepairReport& report,
                   const std::vector<std::vector<int>>& preserve_loops) {
  if (input.faces.empty()) throw std::invalid_argument("repair: empty mesh");
  report = RepairReport{};
  report.input_faces = (int)input.faces.size();

  namespace fs = std::filesystem;
  bool debug = !config.dump_debug_dir.empty();
  if (debug) fs::create_directories(config.dump_debug_dir);
  auto dbg = [&](const std::string& name) { return config.dump_debug_dir + "/" + name; };

  auto clock = [] { return std::chrono::steady_clock::now(); };
  auto t = clock();
  auto stage = [&](const char* name) {
    auto now = clock();
    report.stage_ms.emplace_back(name, std::chrono::duration<double, std::milli>(now - t).count());
    t = now;
  };

  IndexedMesh work = input;
  normalize(work);
  double diag = bbox_diag(work);
  stage("normalize");

  SamplePlan plan = plan_samples(work, config);
  FaceMeasures measures = trace_measures(work, plan, config);
  stage("measures");

  IndexedMesh before = work;
  work = reorient(work, measures, config, &report.flipped_patches);
  stage("reorient");

  if (config.retrace_after_reorient) {
    plan = plan_samples(work, config);
    measures = trace_measures(work, plan, config);
  } else {
    // Measures are winding-symmetric (sample positions and ray streams are
    // keyed by geometry, not corner order), so a flip just negates the
    // orientation measure.
    for (size_t f = 0; f < work.faces.size(); ++f) {
      if (work.faces[f] == before.faces[f]) continue;
      measures.orientation[f] = -measures.orientation[f];
      for (auto& c : measures.sample_counts[f]) std::swap(c[0], c[1]);
    }
  }
  if (debug) dump_measures_csv(dbg("measures.csv"), measures);
  stage("measures_retrace");

  OffsetRecord record;
  work = offset_open_surfaces(work, measures, config, record);
  if (debug) save_mesh(dbg("offset.obj"), work);
  stage("offset");

  CellComplex complex = build_partition(work);
  map_facets(complex, work);
  if (debug) dump_partition_csv(dbg("partition.csv"), complex);
  stage("partition");

  FacetMeasures facet_measures = trace_facet_measures(complex, config);
  stage("facet_measures");

  reorient_facets(complex, facet_measures, config);
  if (debug) dump_facet_measures_csv(dbg("facet_measures.csv"), facet_measures);
  stage("reorient_facets");

  std::vector<FacetClass> classes = classify_facets(complex, facet_measures, config);
  CutProblem problem = build_cut(complex, classes);
  Labeling labels = solve_cut(problem);
  if (debug) dump_cut_csv(dbg("cells.csv"), dbg("edges.csv"), problem, labels);
  stage("cut");

  InterfaceMesh interface = extract_interface(complex, labels);
  if (debug) save_mesh(dbg("interface.obj"), interface.mesh);
  stage("extract");

  if (!config.skip_simplify) interface = simplify_interface(interface, work, config, diag);
  stage("simplify");

  std::vector<int> vertex_origin;
  IndexedMesh split = split_nonmanifold(interface.mesh, &vertex_origin, &interface.exact);
  InterfaceMesh final_interface;
  final_interface.mesh = std::move(split);
  final_interface.exact.reserve(vertex_origin.size());
  for (int v : vertex_origin) final_interface.exact.push_back(interface.exact[v]);
  final_interface.face_source = interface.face_source;
  final_interface.face_group = interface.face_group;
  final_interface.group_sources = interface.group_sources;
  stage("split_nonmanifold");

  recover_attributes(final_interface, work);
  stage("recover_attributes");

  IndexedMesh out = std::move(final_interface.mesh);
  report.output_faces = (int)out.faces.size();
  report.watertight = is_watertight(out);
  report.manifold = is_manifold(out);
  for (int f = 0; f < (int)out.faces.size(); ++f) {
    int src = final_interface.face_source[f];
    if (src < 0)
      ++report.extra_faces;
    else if (!record.empty() && src >= record.first_generated_face)
      ++report.offset_faces;
  }
  report.hausdorff = out.faces.empty() ? -1.0 : hausdorff_distance(input, out);
  stage("verify");

  // Hole preservation: drop closing faces (extra or offset-inherited) that
  // touch a user-marked input boundary loop. The repaired mesh was
  // watertight; the deletion re-opens exactly the marked holes.
  if (!preserve_loops.empty()) {
    double tol = 1e-9 * diag;
    auto near_loop = [&](const Vec3& p) {
      for (const auto& loop : preserve_loops)
        for (size_t i = 0; i < loop.size(); ++i) {
          const Vec3& a = input.vertices[loop[i]];
          const Vec3& b = input.vertices[loop[(i + 1) % loop.size()]];
          if (point_segment_dist(p, a, b) <= tol) return true;
        }
      return false;
    };
    std::vector<char> drop(out.faces.size(), 0);
    for (int f = 0; f < (int)out.faces.size(); ++f) {
      int src = final_interface.face_source[f];
      bool closing = src < 0 || (!record.empty() && src >= record.first_generated_face);
      if (!closing) continue;
      for (int k = 0; k < 3 && !drop[f]; ++k)
        if (near_loop(out.vertices[out.faces[f][k]])) drop[f] = 1;
    }
    IndexedMesh kept;
    kept.uvs = out.uvs;
    kept.materials = out.materials;
    std::vector<int> vmap(out.vertices.size(), -1);
    for (int f = 0; f < (int)out.faces.size(); ++f) {
      if (drop[f]) continue;
      std::array<int, 3> tri;
      for (int k = 0; k < 3; ++k) {
        int v = out.faces[f][k];
        if (vmap[v] < 0) {
          vmap[v] = (int)kept.vertices.size();
          kept.vertices.push_back(out.vertices[v]);
        }
        tri[k] = vmap[v];
      }
      kept.faces.push_back(tri);
      if (out.has_uvs()) kept.face_uvs.push_back(out.face_uvs[f]);
      if (out.has_materials()) kept.face_material.push_back(out.face_material[f]);
    }
    out = std::move(kept);
    report.output_faces = (int)out.faces.size();
    stage("preserve_holes");
  }

  return out;
}

}  // namespace meshrepair
