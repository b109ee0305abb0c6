#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace meshrepair {

// Binary interior/exterior labeling problem over partition cells. Each cell
// pays data[c][0] when labeled interior and data[c][1] when exterior; each
// edge pays its weight when its endpoints disagree. The ambient outside
// (kOuterNode) is clamped to exterior.
struct CutProblem {
  static constexpr int kOuterNode = -1;

  struct Edge {
    int a, b;  // cell ids; b may be kOuterNode
    double w;
  };

  int n_cells = 0;
  std::vector<std::array<double, 2>> data;  // per cell: {interior cost, exterior cost}
  std::vector<Edge> edges;
};

struct Labeling {
  std::vector<std::uint8_t> interior;  // per cell
};

// Objective value of a candidate labeling.
double cut_energy(const CutProblem& problem, const Labeling& labeling);

// Globally optimal labeling by max-flow/min-cut. Deterministic; cells that
// could go either way at the optimum label exterior.
Labeling solve_cut(const CutProblem& problem);

void dump_cut_csv(const std::string& cells_path, const std::string& edges_path,
                  const CutProblem& problem, const Labeling& labeling);

}  // namespace meshrepair
