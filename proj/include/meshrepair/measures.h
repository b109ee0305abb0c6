#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "meshrepair/mesh.h"

namespace meshrepair {

// Per-face surface sample positions. Sample counts follow
//   N_s(f) = max(ceil(A(f)/A(M) * n_total), n_min)
// and the points are area-uniform within each face, strictly interior.
struct SamplePlan {
  std::vector<int> counts;                                  // N_s per face
  std::vector<std::vector<std::array<double, 3>>> barycentric;  // per face, per sample
  std::vector<std::vector<std::uint64_t>> stream;           // RNG stream key per sample
};

// Visibility / orientation / openness per face, plus the raw per-sample valid
// ray counts (N+, N-) they were derived from.
struct FaceMeasures {
  std::vector<double> visibility;   // max over samples of max(N+,N-)/N_d
  std::vector<double> orientation;  // sum(N+ - N-) / sum(N+ + N-), 0 when unseen
  std::vector<double> openness;     // max over visible samples, 0 when none
  std::vector<std::vector<std::array<int, 2>>> sample_counts;  // [face][sample] = {N+, N-}
};

struct FaceFlags {
  std::vector<std::uint8_t> visible;
  std::vector<std::uint8_t> open;
};

struct RepairConfig;

// Throws std::invalid_argument when the mesh has zero total area.
SamplePlan plan_samples(const IndexedMesh& mesh, const RepairConfig& config);

// Shoots n_dirs rays per sample from each side of the face; a ray is valid
// when it escapes all geometry within max_bounces diffuse reflections.
// Deterministic for a fixed seed regardless of config.threads.
FaceMeasures trace_measures(const IndexedMesh& mesh, const SamplePlan& plan,
                            const RepairConfig& config);

FaceFlags classify_faces(const FaceMeasures& measures, const RepairConfig& config);

// Debug dump: one `face_id,visibility,orientation,openness` row per face.
void dump_measures_csv(const std::string& path, const FaceMeasures& measures);

}  // namespace meshrepair
