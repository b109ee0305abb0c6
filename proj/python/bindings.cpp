#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "meshrepair/mesh.h"
#include "meshrepair/obj_io.h"
#include "meshrepair/pipeline.h"
#include "meshrepair/topology.h"

namespace py = pybind11;
using namespace meshrepair;

PYBIND11_MODULE(_meshrepair, m) {
  m.doc() = "Visual-guided repair of triangle meshes into watertight 2-manifold surfaces";

  py::class_<IndexedMesh>(m, "Mesh")
      .def(py::init<>())
      .def_readwrite("vertices", &IndexedMesh::vertices)
      .def_readwrite("faces", &IndexedMesh::faces)
      .def_readwrite("uvs", &IndexedMesh::uvs)
      .def_readwrite("face_uvs", &IndexedMesh::face_uvs)
      .def_readwrite("materials", &IndexedMesh::materials)
      .def_readwrite("face_material", &IndexedMesh::face_material)
      .def("__eq__", [](const IndexedMesh& a, const IndexedMesh& b) { return a == b; })
      .def("__repr__", [](const IndexedMesh& mesh) {
        return "<Mesh " + std::to_string(mesh.vertices.size()) + " vertices, " +
               std::to_string(mesh.faces.size()) + " faces>";
      });

  py::class_<RepairConfig>(m, "Config")
      .def(py::init<>())
      .def_readwrite("seed", &RepairConfig::seed)
      .def_readwrite("n_total", &RepairConfig::n_total)
      .def_readwrite("n_min", &RepairConfig::n_min)
      .def_readwrite("n_dirs", &RepairConfig::n_dirs)
      .def_readwrite("max_bounces", &RepairConfig::max_bounces)
      .def_readwrite("offset_frac", &RepairConfig::offset_frac)
      .def_readwrite("l_extended_frac", &RepairConfig::l_extended_frac)
      .def_readwrite("visibility_threshold", &RepairConfig::visibility_threshold)
      .def_readwrite("openness_threshold", &RepairConfig::openness_threshold)
      .def_readwrite("threads", &RepairConfig::threads)
      .def_readwrite("skip_simplify", &RepairConfig::skip_simplify)
      .def_readwrite("retrace_after_reorient", &RepairConfig::retrace_after_reorient);

  m.def("load_mesh", &load_mesh, py::arg("path"));
  m.def("save_mesh", &save_mesh, py::arg("path"), py::arg("mesh"));
  m.def("is_watertight", &is_watertight, py::arg("mesh"));
  m.def("is_manifold", &is_manifold, py::arg("mesh"));
  m.def("hausdorff_distance", &hausdorff_distance, py::arg("a"), py::arg("b"),
        py::arg("samples") = 20000);
  m.def(
      "repair",
      [](const IndexedMesh& input, const RepairConfig& config,
         const std::vector<std::vector<int>>& preserve_loops) {
        RepairReport report;
        IndexedMesh out = repair(input, config, report, preserve_loops);
        py::dict rep;
        rep["input_faces"] = report.input_faces;
        rep["output_faces"] = report.output_faces;
        rep["watertight"] = report.watertight;
        rep["manifold"] = report.manifold;
        rep["hausdorff"] = report.hausdorff;
        rep["flipped_patches"] = report.flipped_patches;
        rep["offset_faces"] = report.offset_faces;
        rep["extra_faces"] = report.extra_faces;
        py::dict stages;
        for (const auto& [name, ms] : report.stage_ms) stages[py::str(name)] = ms;
        rep["stage_ms"] = stages;
        return py::make_tuple(out, rep);
      },
      py::arg("mesh"), py::arg("config") = RepairConfig{},
      py::arg("preserve_loops") = std::vector<std::vector<int>>{},
      "Repair a mesh; returns (repaired_mesh, report_dict)");
}
