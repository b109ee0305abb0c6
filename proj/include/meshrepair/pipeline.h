#pragma once

#include <string>
#include <utility>
#include <vector>

#include "meshrepair/mesh.h"

namespace meshrepair {

struct RepairReport {
  int input_faces = 0;
  int output_faces = 0;
  bool watertight = false;   // of the repaired mesh, before any hole re-opening
  bool manifold = false;
  double hausdorff = 0.0;    // sampled symmetric distance input vs output
  int flipped_patches = 0;   // input patches flipped by reorientation
  int offset_faces = 0;      // output faces inherited from offset-shell faces
  int extra_faces = 0;       // output faces not inherited from any face
  std::vector<std::pair<std::string, double>> stage_ms;  // per stage, pipeline order
};

// JSON object with exactly the keys input_faces, output_faces, watertight,
// manifold, hausdorff, flipped_patches, offset_faces, extra_faces, stage_ms.
std::string report_json(const RepairReport& report);

// Symmetric sampled Hausdorff distance: both meshes are sampled at their
// vertices plus area-uniform surface points (fixed internal seed, so the
// estimate is deterministic) and measured against the other's triangles.
// Throws std::invalid_argument when either mesh has no faces.
double hausdorff_distance(const IndexedMesh& a, const IndexedMesh& b, int samples = 20000);

// Full repair: normalize, trace visual measures, reorient patches, re-trace,
// offset open surfaces into shells, build the exact plane partition, trace
// facet measures, reorient facets, classify, solve the interior/exterior
// cut, extract the interface, simplify it, split non-manifold elements and
// recover attributes. preserve_loops (input-mesh vertex loops) re-opens the
// matching holes afterwards by deleting the closing faces.
IndexedMesh repair(const IndexedMesh& input, const RepairConfig& config, RepairReport& report,
                   const std::vector<std::vector<int>>& preserve_loops = {});

}  // namespace meshrepair
