#pragma once

#include <vector>

#include "meshrepair/graph_cut.h"
#include "meshrepair/measures.h"
#include "meshrepair/partition.h"

namespace meshrepair {

// Visual measures per facet. All alive facets are triangulated into one soup
// and traced together, so facets occlude each other exactly as the final
// surface would.
struct FacetMeasures {
  std::vector<double> visibility;
  std::vector<double> orientation;
};

FacetMeasures trace_facet_measures(const CellComplex& complex, const RepairConfig& config);

// Flips every facet patch whose area-weighted mean orientation over visible
// facets is negative (flip = reverse loop, flip plane, swap cells). Patches
// grow across edges with exactly two opposite-direction incidences; exactly
// co-planar consistently wound patches merge first when the merged patch has
// no over-shared edge. Returns the number of flipped patches.
int reorient_facets(CellComplex& complex, FacetMeasures& measures, const RepairConfig& config);

enum class FacetClass : std::uint8_t { Visible, Invisible, Extra };

// Visible/invisible = mapped to a source face and seen/unseen by rays;
// extra = not mapped to any source face.
std::vector<FacetClass> classify_facets(const CellComplex& complex, const FacetMeasures& measures,
                                        const RepairConfig& config);

// Data terms: a visible facet charges the cell its normal points into for
// being interior and the other cell for being exterior. Smoothness: one edge
// per extra facet, weighted by area. Invisible facets are free.
CutProblem build_cut(const CellComplex& complex, const std::vector<FacetClass>& classes);

// Triangulated surface between interior and exterior cells.
struct InterfaceMesh {
  IndexedMesh mesh;
  std::vector<ExactPoint> exact;  // exact position per vertex
  std::vector<int> face_source;   // source face per triangle, -1 = extra
  std::vector<int> face_group;    // simplification group per triangle, -1 = none
  std::vector<std::vector<int>> group_sources;  // candidate source faces per group
};

// Emits every facet whose cells got different labels, wound interior to
// exterior. Points lying strictly inside a neighbouring facet's edge are
// inserted into that edge so the result is combinatorially watertight; loops
// triangulate by clipping strictly convex corners (skipping the straight
// corners such insertions create).
InterfaceMesh extract_interface(const CellComplex& complex, const Labeling& labels);

}  // namespace meshrepair
