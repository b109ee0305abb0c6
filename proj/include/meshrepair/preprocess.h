#pragma once

#include <vector>

#include "meshrepair/measures.h"
#include "meshrepair/mesh.h"

namespace meshrepair {

// Bookkeeping for faces/vertices added by offsetting, consumed by attribute
// recovery and the report.
struct OffsetRecord {
  int first_generated_face = 0;    // output faces >= this came from offsetting
  int first_generated_vertex = 0;  // likewise for vertices
  std::vector<int> origin;         // per generated face: originating input face
  std::vector<int> vertex_origin;  // per generated vertex: source vertex
  std::vector<Vec3> displacement;  // per generated vertex: applied displacement

  bool empty() const { return origin.empty(); }
  // Resolves any face of the offset-stage mesh to an input face id.
  int origin_of(int face) const {
    return face < first_generated_face ? face : origin[face - first_generated_face];
  }
};

// Flips every patch whose area-weighted mean orientation measure over visible
// faces is negative. Geometry and attributes are untouched apart from winding.
// flipped_patches (optional) receives the number of flipped patches.
IndexedMesh reorient(const IndexedMesh& mesh, const FaceMeasures& measures,
                     const RepairConfig& config, int* flipped_patches = nullptr);

// Extrudes every connected patch of open faces into a closed thin shell:
// reversed offset copies at distance d_offset along the negative vertex
// normal plus side walls along the patch boundary. Non-orientable patches
// fall back to per-face prisms (per-face offset copies), which keeps every
// shell combinatorially watertight.
IndexedMesh offset_open_surfaces(const IndexedMesh& mesh, const FaceMeasures& measures,
                                 const RepairConfig& config, OffsetRecord& record);

}  // namespace meshrepair
