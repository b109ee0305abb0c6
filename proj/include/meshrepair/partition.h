#pragma once

#include <map>
#include <string>
#include <vector>

#include "meshrepair/exact.h"
#include "meshrepair/mesh.h"

namespace meshrepair {

// Convex planar polygon bounding one or two cells. The plane normal points
// toward cell_pos; the loop is counter-clockwise seen from that side.
struct Facet {
  ExactPlane plane;
  std::vector<int> loop;  // point ids
  int cell_pos = -1;      // kOuterCell for the ambient outside
  int cell_neg = -1;
  int source = -1;        // mapped source face, -1 = extra
  bool alive = true;
};

struct Cell {
  std::vector<int> facets;
  bool alive = true;
};

// BSP-style convex cell complex over an enlarged bounding box.
struct CellComplex {
  static constexpr int kOuterCell = -1;

  std::vector<ExactPoint> points;
  std::vector<Facet> facets;
  std::vector<Cell> cells;

  int add_point(const ExactPoint& p);

  ExactPoint facet_barycenter(int f) const;  // vertex average (interior, loops are convex)
  ExactPoint facet_area_vector(int f) const;  // Newell vector, |.| = 2*area, along plane normal
  double facet_area(int f) const;
  Rational cell_volume(int c) const;

  // Side of facet fi the cell ci lies on: +1 when ci == cell_pos.
  int cell_side(int fi, int ci) const { return facets[fi].cell_pos == ci ? +1 : -1; }

  // Drops dead facets/cells and remaps indices (points are kept).
  void compact();

 private:
  std::map<ExactPoint, int> point_ids_;
};

// Splits an enlarged (5% per side) bounding box by the supporting plane of
// every mesh face (descending area order), each restricted to the cells the
// face actually intersects, then by one extra plane through every edge shared
// by co-planar faces with discontinuous attributes (different material or
// mismatched uv values at a shared corner). Zero-area faces contribute no
// plane. degenerate_faces (optional) receives their count.
CellComplex build_partition(const IndexedMesh& mesh, int* degenerate_faces = nullptr);

// Assigns Facet::source: the lowest-id source face whose supporting plane
// contains the facet and whose closed triangle contains the facet barycenter.
void map_facets(CellComplex& complex, const IndexedMesh& source);

// Debug dump: one `facet_id,source,area` row per facet plus a cell count
// header comment.
void dump_partition_csv(const std::string& path, const CellComplex& complex);

}  // namespace meshrepair
