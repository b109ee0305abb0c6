#pragma once

#include <array>

#include "meshrepair/extraction.h"

namespace meshrepair {

// Exact uv of source face f at p, which must lie on the face's plane:
// barycentric interpolation of the corner uvs. Returns false when the face
// carries no texture coordinates.
bool exact_uv_at(const IndexedMesh& source, int f, const ExactPoint& p,
                 std::array<Rational, 2>& uv);

// Fills in uvs and materials on an interface mesh. Each face and corner is
// located on the face's own source first (so chart values never leak across
// uv seams), then on the group's candidate source faces, then on any
// same-plane source face (lowest containing id wins); located corners
// interpolate uvs exactly. Extra faces then inherit per-corner uvs by
// averaging the values attributed faces hold at the shared vertex (cascading
// in ascending face id) and take the majority material of their attributed
// edge neighbours.
void recover_attributes(InterfaceMesh& interface, const IndexedMesh& source);

}  // namespace meshrepair
