#include "meshrepair/graph_cut.h"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <limits>
#include <queue>

namespace meshrepair {

double cut_energy(const CutProblem& problem, const Labeling& labeling) {
  double e = 0;
  for (int c = 0; c < problem.n_cells; ++c)
    e += labeling.interior[c] ? problem.data[c][0] : problem.data[c][1];
  for (const auto& edge : problem.edges) {
    bool la = labeling.interior[edge.a];
    bool lb = edge.b == CutProblem::kOuterNode ? false : (bool)labeling.interior[edge.b];
    if (la != lb) e += edge.w;
  }
  return e;
}

namespace {

// Dinic max-flow. Terminates for arbitrary nonnegative capacities: every
// phase strictly increases the source-sink level distance.
struct Dinic {
  struct Arc {
    int to;
    double cap;
    int rev;
  };
  std::vector<std::vector<Arc>> g;
  std::vector<int> level, iter;

  explicit Dinic(int n) : g(n), level(n), iter(n) {}

  void add_edge(int a, int b, double cab, double cba) {
    g[a].push_back({b, cab, (int)g[b].size()});
    g[b].push_back({a, cba, (int)g[a].size() - 1});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Arc& a : g[v])
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[v] + 1;
          q.push(a.to);
        }
    }
    return level[t] >= 0;
  }

  double dfs(int v, int t, double f) {
    if (v == t) return f;
    for (int& i = iter[v]; i < (int)g[v].size(); ++i) {
      Arc& a = g[v][i];
      if (a.cap <= 0 || level[a.to] != level[v] + 1) continue;
      double d = dfs(a.to, t, std::min(f, a.cap));
      if (d > 0) {
        a.cap -= d;
        g[a.to][a.rev].cap += d;
        return d;
      }
    }
    return 0;
  }

  void max_flow(int s, int t) {
    const double inf = std::numeric_limits<double>::infinity();
    while (bfs(s, t)) {
      std::fill(iter.begin(), iter.end(), 0);
      while (dfs(s, t, inf) > 0) {
      }
    }
  }
};

}  // namespace

Labeling solve_cut(const CutProblem& problem) {
  int n = problem.n_cells;
  int outer = n, s = n + 1, t = n + 2;
  Dinic dinic(n + 3);
  for (int c = 0; c < n; ++c) {
    if (problem.data[c][1] > 0) dinic.add_edge(s, c, problem.data[c][1], 0);
    if (problem.data[c][0] > 0) dinic.add_edge(c, t, problem.data[c][0], 0);
  }
  dinic.add_edge(outer, t, std::numeric_limits<double>::infinity(), 0);
  for (const auto& edge : problem.edges) {
    assert(edge.a >= 0 && edge.a < n);
    int b = edge.b == CutProblem::kOuterNode ? outer : edge.b;
    if (edge.w > 0) dinic.add_edge(edge.a, b, edge.w, edge.w);
  }
  dinic.max_flow(s, t);

  // Interior = source side of the residual graph. Cells unreachable either
  // way (no data, saturated edges) land exterior, as does the outside: the
  // infinite outer->sink arc guarantees the outside is never source-reachable.
  Labeling out;
  out.interior.assign(n, 0);
  std::vector<char> seen(n + 3, 0);
  std::queue<int> q;
  seen[s] = 1;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const auto& a : dinic.g[v])
      if (a.cap > 0 && !seen[a.to]) {
        seen[a.to] = 1;
        q.push(a.to);
      }
  }
  assert(!seen[outer] && !seen[t]);
  for (int c = 0; c < n; ++c) out.interior[c] = seen[c];
  return out;
}

void dump_cut_csv(const std::string& cells_path, const std::string& edges_path,
                  const CutProblem& problem, const Labeling& labeling) {
  if (std::FILE* fp = std::fopen(cells_path.c_str(), "w")) {
    std::fprintf(fp, "cell,label,interior_cost,exterior_cost\n");
    for (int c = 0; c < problem.n_cells; ++c)
      std::fprintf(fp, "%d,%c,%.17g,%.17g\n", c, labeling.interior[c] ? 'I' : 'E',
                   problem.data[c][0], problem.data[c][1]);
    std::fclose(fp);
  }
  if (std::FILE* fp = std::fopen(edges_path.c_str(), "w")) {
    std::fprintf(fp, "a,b,weight\n");
    for (const auto& e : problem.edges) std::fprintf(fp, "%d,%d,%.17g\n", e.a, e.b, e.w);
    std::fclose(fp);
  }
}

}  // namespace meshrepair
