#pragma once

#include <string>

#include "meshrepair/mesh.h"

namespace meshrepair {

// Wavefront OBJ subset: v, vt, f (with optional /vt or /vt/vn suffixes,
// normals ignored), usemtl, # comments. Quads and larger convex polygons are
// fan-triangulated on load. Indices may be negative (relative). Malformed
// lines and out-of-range indices raise std::runtime_error("path:line: ...").
IndexedMesh load_mesh(const std::string& path);

// Writes the same subset back. Coordinates are printed with %.17g so doubles
// round-trip exactly. usemtl is emitted whenever the face material changes.
void save_mesh(const std::string& path, const IndexedMesh& mesh);

struct NormalizeResult {
  int removed_degenerate = 0;  // faces with a repeated vertex index
  int removed_duplicates = 0;  // faces with the same vertex set as an earlier face
};

// Drops degenerate faces and exact duplicates (same vertex index set, any
// rotation or winding; the first occurrence wins). Vertices are untouched.
NormalizeResult normalize(IndexedMesh& mesh);

}  // namespace meshrepair
