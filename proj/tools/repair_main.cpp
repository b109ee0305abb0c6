#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "meshrepair/mesh.h"
#include "meshrepair/obj_io.h"
#include "meshrepair/pipeline.h"

namespace {

// One loop per line, whitespace-separated input vertex indices.
std::vector<std::vector<int>> load_loops(const std::string& path, int n_vertices) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<std::vector<int>> loops;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<int> loop;
    int v;
    while (ss >> v) {
      if (v < 0 || v >= n_vertices)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": vertex out of range");
      loop.push_back(v);
    }
    if (loop.size() >= 2) loops.push_back(std::move(loop));
  }
  return loops;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Repairs a triangle mesh into a watertight 2-manifold surface"};

  std::string in_path, out_path, loops_path, report_path;
  meshrepair::RepairConfig config;

  app.add_option("input", in_path, "input OBJ")->required();
  app.add_option("-o,--output", out_path, "output OBJ")->required();
  app.add_option("--seed", config.seed, "RNG seed");
  app.add_option("--n-total", config.n_total, "total surface samples");
  app.add_option("--n-min", config.n_min, "minimum samples per face");
  app.add_option("--n-dirs", config.n_dirs, "rays per sample side");
  app.add_option("--max-bounces", config.max_bounces, "ray bounce budget");
  app.add_option("--offset", config.offset_frac, "shell offset / bbox diagonal");
  app.add_option("--l-extended", config.l_extended_frac,
                 "intersection search radius / bbox diagonal");
  app.add_option("--preserve-holes", loops_path, "file of boundary loops to re-open");
  app.add_flag("--skip-simplify", config.skip_simplify, "keep the raw interface mesh");
  app.add_option("--report", report_path, "write a JSON report here");
  app.add_option("--threads", config.threads, "worker threads (results are unaffected)");
  app.add_option("--dump-debug", config.dump_debug_dir, "directory for stage dumps");

  CLI11_PARSE(app, argc, argv);

  try {
    meshrepair::IndexedMesh input = meshrepair::load_mesh(in_path);
    std::vector<std::vector<int>> loops;
    if (!loops_path.empty()) loops = load_loops(loops_path, (int)input.vertices.size());

    meshrepair::RepairReport report;
    meshrepair::IndexedMesh output = meshrepair::repair(input, config, report, loops);
    meshrepair::save_mesh(out_path, output);

    std::string json = meshrepair::report_json(report);
    if (!report_path.empty()) {
      std::ofstream rf(report_path);
      rf << json << '\n';
    }
    std::fprintf(stderr, "%s\n", json.c_str());
    return report.watertight && report.manifold ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
