#pragma once

#include <unordered_map>
#include <vector>

#include "meshrepair/mesh.h"

namespace meshrepair {

struct ExactPoint;

struct EdgeIncidence {
  int face;
  bool forward;  // true when the face traverses the edge from the smaller to the larger vertex id
};

struct Edge {
  int a, b;  // a < b
  std::vector<EdgeIncidence> incidences;
  bool manifold() const {
    return incidences.size() == 2 && incidences[0].forward != incidences[1].forward;
  }
};

// Undirected edge incidence map. Edges are stored in first-seen order so
// iteration is deterministic.
struct EdgeAdjacency {
  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, int> index;  // key(a,b) -> edge id

  static std::uint64_t key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t)(std::uint32_t)a << 32 | (std::uint32_t)b;
  }
  const Edge* find(int a, int b) const {
    auto it = index.find(key(a, b));
    return it == index.end() ? nullptr : &edges[it->second];
  }
};

struct Patch {
  std::vector<int> faces;
  bool contains_nonmanifold_boundary = false;  // some patch edge has >2 incidences
};

EdgeAdjacency build_adjacency(const IndexedMesh& mesh);

// Flood-fills faces into consistently oriented patches. Growth crosses an
// edge only when it has exactly two incidences with opposite traversal; with
// forbid_nonmanifold the walk additionally refuses edges carrying more than
// two incidences (the two conditions coincide, the flag is kept for callers
// that want the intent spelled out).
std::vector<Patch> group_patches(const IndexedMesh& mesh, bool forbid_nonmanifold);

// Combinatorially closed: every edge has an even incidence count >= 2 with
// equally many traversals in each direction.
bool is_watertight(const IndexedMesh& mesh);

// Every edge has <= 2 incidences, every vertex's faces form one fan, and no
// vertex is unreferenced.
bool is_manifold(const IndexedMesh& mesh);

// Splits non-manifold edges (pairing incidences by angular sector around the
// edge axis) and non-manifold vertices (one copy per umbrella). Geometry is
// unchanged: only vertex duplication and re-indexing; unreferenced vertices
// are dropped. Requires every edge to have an even incidence count.
// vertex_origin (when non-null) receives, per output vertex, the input vertex
// it was copied from. exact_points (when non-null, one per vertex) supplies
// the coordinates used for the angular sort; this keeps the pairing sound
// where double rounding collapses short edges.
IndexedMesh split_nonmanifold(const IndexedMesh& mesh, std::vector<int>* vertex_origin,
                              const std::vector<ExactPoint>* exact_points = nullptr);
IndexedMesh split_nonmanifold(const IndexedMesh& mesh);

}  // namespace meshrepair
