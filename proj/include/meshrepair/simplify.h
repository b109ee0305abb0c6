#pragma once

#include <cstdint>
#include <vector>

#include "meshrepair/extraction.h"

namespace meshrepair {

// Planar face groups of an interface mesh and their boundary loops. Groups
// grow across edges with exactly two opposite-direction incidences whose
// faces lie on the same exact oriented plane with continuous attributes
// (same material, equal uv values along the edge, via the mapped source
// faces). Loops follow face winding: outer loops run counter-clockwise
// around the group plane normal, holes clockwise.
struct BoundaryGraph {
  struct Group {
    ExactPlane plane;                      // canonical, oriented with the faces
    std::vector<int> faces;                // interface face ids
    std::vector<int> sources;              // candidate source faces (sorted; empty = extra)
    std::vector<std::vector<int>> loops;   // current loops (collapse edits these)
    std::vector<std::vector<int>> original_loops;
  };
  std::vector<Group> groups;
  std::vector<int> face_group;             // per interface face
  std::vector<std::uint8_t> vertex_on_boundary;
};

BoundaryGraph detect_boundaries(const InterfaceMesh& interface, const IndexedMesh& source);

// Removes boundary vertices that are exactly collinear with their neighbours
// in every loop occurrence and carry exactly two distinct boundary edges.
// Removal never moves geometry. pinned vertices (when non-null) are kept.
// Returns the number of removed vertices.
int collapse_redundant(BoundaryGraph& graph, const InterfaceMesh& interface,
                       const std::vector<std::uint8_t>* pinned = nullptr);

// Re-triangulates every group from its loops: holes are bridged into the
// outer loop, then ears are clipped smallest-interior-angle-first among the
// strictly convex corners that pass three checks (triangle inside the region,
// no constrained boundary segment crossed, no exact intersection with other
// groups' faces within an l_extended neighbourhood). Groups without a valid
// ear sequence keep their original faces and are reported in fell_back.
// diag is the input-mesh bounding box diagonal (scales l_extended).
InterfaceMesh retriangulate(const InterfaceMesh& interface, const BoundaryGraph& graph,
                            const RepairConfig& config, double diag,
                            std::vector<int>* fell_back = nullptr);

// detect -> collapse -> retriangulate, re-pinning and retrying when a
// fallen-back group had collapsed boundary vertices (their removal would
// leave T-junctions against the group's original faces).
InterfaceMesh simplify_interface(const InterfaceMesh& interface, const IndexedMesh& source,
                                 const RepairConfig& config, double diag,
                                 int* removed_vertices = nullptr);

}  // namespace meshrepair
