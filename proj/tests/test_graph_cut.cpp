#include <cstdint>
#include <vector>

#include "doctest.h"
#include "meshrepair/graph_cut.h"

using namespace meshrepair;

namespace {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Exhaustive optimum over all 2^n labelings.
double brute_force(const CutProblem& p, Labeling* best_out = nullptr) {
  int n = p.n_cells;
  double best = 0;
  Labeling best_lab;
  bool first = true;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    Labeling lab;
    lab.interior.resize(n);
    for (int c = 0; c < n; ++c) lab.interior[c] = (mask >> c) & 1;
    double e = cut_energy(p, lab);
    if (first || e < best - 1e-12) {
      best = e;
      best_lab = lab;
      first = false;
    }
  }
  if (best_out) *best_out = best_lab;
  return best;
}

}  // namespace

TEST_CASE("single cell picks the cheaper side") {
  CutProblem p;
  p.n_cells = 1;
  p.data = {{3.0, 5.0}};
  Labeling lab = solve_cut(p);
  CHECK(lab.interior[0] == 1);
  CHECK(cut_energy(p, lab) == doctest::Approx(3.0));

  p.data = {{5.0, 3.0}};
  lab = solve_cut(p);
  CHECK(lab.interior[0] == 0);
  CHECK(cut_energy(p, lab) == doctest::Approx(3.0));
}

TEST_CASE("an edge to the outside pulls a tied cell exterior") {
  CutProblem p;
  p.n_cells = 1;
  p.data = {{2.0, 2.0}};
  p.edges.push_back({0, CutProblem::kOuterNode, 10.0});
  Labeling lab = solve_cut(p);
  // Interior would pay the boundary edge on top of the data term.
  CHECK(lab.interior[0] == 0);
  CHECK(cut_energy(p, lab) == doctest::Approx(2.0));
}

TEST_CASE("smoothness outweighs a weak data preference") {
  CutProblem p;
  p.n_cells = 2;
  p.data = {{0.0, 10.0}, {1.0, 0.0}};  // cell 0 wants interior, cell 1 mildly exterior
  p.edges.push_back({0, 1, 5.0});
  Labeling lab = solve_cut(p);
  CHECK(lab.interior[0] == 1);
  CHECK(lab.interior[1] == 1);  // cheaper to drag cell 1 along than to cut the edge
  CHECK(cut_energy(p, lab) == doctest::Approx(1.0));

  p.edges[0].w = 0.5;  // now cutting is cheap
  lab = solve_cut(p);
  CHECK(lab.interior[0] == 1);
  CHECK(lab.interior[1] == 0);
  CHECK(cut_energy(p, lab) == doctest::Approx(0.5));
}

TEST_CASE("ties label exterior") {
  CutProblem p;
  p.n_cells = 2;
  p.data = {{1.0, 1.0}, {1.0, 1.0}};
  p.edges.push_back({0, 1, 0.0});
  Labeling lab = solve_cut(p);
  CHECK(lab.interior[0] == 0);
  CHECK(lab.interior[1] == 0);
}

TEST_CASE("energy of hand labelings") {
  CutProblem p;
  p.n_cells = 3;
  p.data = {{1.0, 4.0}, {2.0, 2.0}, {9.0, 1.0}};
  p.edges = {{0, 1, 3.0}, {1, 2, 1.5}, {2, CutProblem::kOuterNode, 7.0}};
  Labeling all_ext{{0, 0, 0}};
  CHECK(cut_energy(p, all_ext) == doctest::Approx(4 + 2 + 1));
  Labeling all_int{{1, 1, 1}};
  CHECK(cut_energy(p, all_int) == doctest::Approx(1 + 2 + 9 + 7));
  Labeling split{{1, 1, 0}};
  CHECK(cut_energy(p, split) == doctest::Approx(1 + 2 + 1 + 1.5));
}

TEST_CASE("matches exhaustive search on random problems") {
  for (int trial = 0; trial < 300; ++trial) {
    uint64_t s = 1000 + trial;
    int n = 1 + (int)(mix64(s) % 12);
    CutProblem p;
    p.n_cells = n;
    for (int c = 0; c < n; ++c) {
      double di = (double)(mix64(s * 31 + c * 2 + 1) % 20);
      double de = (double)(mix64(s * 31 + c * 2 + 2) % 20);
      p.data.push_back({di, de});
    }
    int m = (int)(mix64(s * 77 + 5) % (2 * n + 1));
    for (int e = 0; e < m; ++e) {
      int a = (int)(mix64(s * 101 + e * 3) % n);
      int b = (int)(mix64(s * 101 + e * 3 + 1) % (n + 1)) - 1;  // may hit outside
      if (b == a) b = CutProblem::kOuterNode;
      double w = (double)(mix64(s * 101 + e * 3 + 2) % 15);
      p.edges.push_back({a, b == -1 ? CutProblem::kOuterNode : b, w});
    }
    Labeling lab = solve_cut(p);
    double got = cut_energy(p, lab);
    double want = brute_force(p);
    CHECK(got == doctest::Approx(want));  // integer weights: exact optimum
  }
}

TEST_CASE("parallel chains stay consistent") {
  // Two chains from a strongly-interior seed to the outside; the min cut
  // must sever each chain at its weakest link.
  CutProblem p;
  p.n_cells = 5;
  p.data.assign(5, {0.0, 0.0});
  p.data[0] = {0.0, 100.0};  // seed
  p.edges = {{0, 1, 8.0}, {1, 2, 2.0}, {2, CutProblem::kOuterNode, 9.0},
             {0, 3, 6.0},  {3, 4, 7.0}, {4, CutProblem::kOuterNode, 3.0}};
  Labeling lab = solve_cut(p);
  CHECK(lab.interior[0] == 1);
  CHECK(cut_energy(p, lab) == doctest::Approx(2.0 + 3.0));
  CHECK(lab.interior[1] == 1);
  CHECK(lab.interior[2] == 0);
  CHECK(lab.interior[3] == 1);
  CHECK(lab.interior[4] == 1);
}
