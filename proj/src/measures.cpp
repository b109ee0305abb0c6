#include "meshrepair/measures.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "meshrepair/bvh.h"
#include "meshrepair/rng.h"

namespace meshrepair {

namespace {

// Stream-purpose tags keeping position, direction, and bounce draws disjoint.
constexpr std::uint64_t kPlanStream = 0x51;
constexpr std::uint64_t kDirStream = 0x52;
constexpr std::uint64_t kBounceStream = 0x53;

// Corners sorted by vertex id. Sampling in this order makes sample positions
// and RNG side keys invariant under winding flips, which the orientation
// symmetry property requires exactly.
std::array<int, 3> canonical_corners(const std::array<int, 3>& t) {
  std::array<int, 3> c = t;
  std::sort(c.begin(), c.end());
  return c;
}

// True when the first nonzero component of v is positive; identifies the
// winding-independent "reference" side of a face's supporting plane.
bool lex_positive(const Vec3& v) {
  for (int k = 0; k < 3; k++) {
    if (v[k] > 0) return true;
    if (v[k] < 0) return false;
  }
  return true;  // zero normal; caller skips these faces anyway
}

// Branchless orthonormal basis (Frisvad / Duff et al.) — deterministic.
void make_frame(const Vec3& w, Vec3& t1, Vec3& t2) {
  double s = std::copysign(1.0, w[2]);
  double a = -1.0 / (s + w[2]);
  double b = w[0] * w[1] * a;
  t1 = {1.0 + s * w[0] * w[0] * a, s * b, -s * w[0]};
  t2 = {b, s + w[1] * w[1] * a, -w[1]};
}

Vec3 hemisphere_dir(const Vec3& axis, double u1, double u2) {
  Vec3 t1, t2;
  make_frame(axis, t1, t2);
  double z = u1;  // area-uniform on the hemisphere
  double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  double phi = 2.0 * M_PI * u2;
  return t1 * (r * std::cos(phi)) + t2 * (r * std::sin(phi)) + axis * z;
}

}  // namespace

SamplePlan plan_samples(const IndexedMesh& mesh, const RepairConfig& config) {
  double total = total_area(mesh);
  if (!(total > 0)) throw std::invalid_argument("plan_samples: mesh has zero total area");

  int nf = (int)mesh.faces.size();
  SamplePlan plan;
  plan.counts.resize(nf);
  plan.barycentric.resize(nf);
  plan.stream.resize(nf);

  for (int f = 0; f < nf; f++) {
    double frac = face_area(mesh, f) / total;
    long long ns = (long long)std::ceil(frac * (double)config.n_total);
    ns = std::max(ns, (long long)config.n_min);
    plan.counts[f] = (int)ns;

    auto canon = canonical_corners(mesh.faces[f]);
    // positions are stored in face-corner order but drawn in canonical order
    std::array<int, 3> perm;  // perm[i] = index of face corner i in canon
    for (int i = 0; i < 3; i++)
      for (int j = 0; j < 3; j++)
        if (mesh.faces[f][i] == canon[j]) perm[i] = j;

    plan.barycentric[f].resize(ns);
    plan.stream[f].resize(ns);
    std::uint64_t fkey = rng::step(rng::step(config.seed, kPlanStream), (std::uint64_t)f);
    for (long long s = 0; s < ns; s++) {
      std::uint64_t skey = rng::step(fkey, (std::uint64_t)s);
      plan.stream[f][s] = skey;
      double u1 = rng::uniform01(rng::step(skey, 1));
      double u2 = rng::uniform01(rng::step(skey, 2));
      double su = std::sqrt(u1);
      // canonical-order weights, all strictly positive
      std::array<double, 3> wc = {1.0 - su, su * (1.0 - u2), su * u2};
      plan.barycentric[f][s] = {wc[perm[0]], wc[perm[1]], wc[perm[2]]};
    }
  }
  return plan;
}

FaceMeasures trace_measures(const IndexedMesh& mesh, const SamplePlan& plan,
                            const RepairConfig& config) {
  int nf = (int)mesh.faces.size();
  FaceMeasures out;
  out.visibility.assign(nf, 0.0);
  out.orientation.assign(nf, 0.0);
  out.openness.assign(nf, 0.0);
  out.sample_counts.resize(nf);

  Bvh bvh(mesh);
  double diag = bbox_diag(mesh);
  double eps = diag > 0 ? 1e-9 * diag : 1e-15;
  int n_dirs = config.n_dirs;

  auto trace_one = [&](const Vec3& start, Vec3 dir, int src_tri, std::uint64_t ray_key) {
    Vec3 o = start + dir * eps;
    int skip = src_tri;
    for (int b = 0; b <= config.max_bounces; b++) {
      RayHit hit = bvh.intersect(o, dir, skip);
      if (!hit.valid()) return true;  // escaped
      if (b == config.max_bounces) return false;
      Vec3 q = o + dir * hit.t;
      Vec3 n = normalized(face_normal_raw(mesh, hit.tri));
      Vec3 axis = dot(n, dir) < 0 ? n : n * -1.0;  // arrival side
      std::uint64_t bkey = rng::step(ray_key, 0x100 + (std::uint64_t)b);
      dir = hemisphere_dir(axis, rng::uniform01(rng::step(bkey, 1)),
                           rng::uniform01(rng::step(bkey, 2)));
      o = q + dir * eps;
      skip = hit.tri;
    }
    return false;
  };

  auto process_face = [&](int f) {
    int ns = plan.counts[f];
    out.sample_counts[f].assign(ns, {0, 0});
    Vec3 nraw = face_normal_raw(mesh, f);
    Vec3 n = normalized(nraw);
    if (n[0] == 0 && n[1] == 0 && n[2] == 0) return;  // degenerate: zero counts

    auto canon = canonical_corners(mesh.faces[f]);
    const Vec3& A = mesh.vertices[canon[0]];
    const Vec3& B = mesh.vertices[canon[1]];
    const Vec3& C = mesh.vertices[canon[2]];
    std::array<int, 3> perm;
    for (int i = 0; i < 3; i++)
      for (int j = 0; j < 3; j++)
        if (mesh.faces[f][i] == canon[j]) perm[i] = j;

    // canonical id of the + side: 0 when the face normal is the reference
    // direction of its plane, so flipped windings swap stream keys exactly
    int plus_canon = lex_positive(nraw) ? 0 : 1;

    std::uint64_t fdir = rng::step(rng::step(config.seed, kDirStream), (std::uint64_t)f);
    std::uint64_t fbounce = rng::step(rng::step(config.seed, kBounceStream), (std::uint64_t)f);

    for (int s = 0; s < ns; s++) {
      const auto& bc = plan.barycentric[f][s];
      std::array<double, 3> wc;  // canonical-order weights
      for (int i = 0; i < 3; i++) wc[perm[i]] = bc[i];
      Vec3 p = A * wc[0] + B * wc[1] + C * wc[2];

      for (int side = 0; side < 2; side++) {  // 0 = +(front per winding), 1 = -
        Vec3 axis = side == 0 ? n : n * -1.0;
        int canon_side = side == 0 ? plus_canon : 1 - plus_canon;
        std::uint64_t skey_dir = rng::step(rng::step(fdir, (std::uint64_t)s), (std::uint64_t)canon_side);
        std::uint64_t skey_bounce =
            rng::step(rng::step(fbounce, (std::uint64_t)s), (std::uint64_t)canon_side);
        int valid = 0;
        for (int d = 0; d < n_dirs; d++) {
          std::uint64_t dkey = rng::step(skey_dir, (std::uint64_t)d);
          Vec3 dir = hemisphere_dir(axis, rng::uniform01(rng::step(dkey, 1)),
                                    rng::uniform01(rng::step(dkey, 2)));
          if (trace_one(p, dir, f, rng::step(skey_bounce, (std::uint64_t)d))) valid++;
        }
        out.sample_counts[f][s][side] = valid;
      }
    }

    // Eq. 2-4 aggregation from the per-sample counts
    double vis = 0;
    long long sum_plus = 0, sum_minus = 0;
    double open = 0;
    for (const auto& c : out.sample_counts[f]) {
      vis = std::max(vis, (double)std::max(c[0], c[1]) / n_dirs);
      sum_plus += c[0];
      sum_minus += c[1];
      if (c[0] + c[1] > 0) {
        int lo = std::min(c[0], c[1]), hi = std::max(c[0], c[1]);
        double v = ((double)lo / hi) * ((double)(c[0] + c[1]) / (2.0 * n_dirs));
        open = std::max(open, v);
      }
    }
    out.visibility[f] = vis;
    out.orientation[f] =
        sum_plus + sum_minus > 0 ? (double)(sum_plus - sum_minus) / (double)(sum_plus + sum_minus) : 0.0;
    out.openness[f] = open;
  };

  int nthreads = std::max(1, config.threads);
  if (nthreads == 1 || nf < 2) {
    for (int f = 0; f < nf; f++) process_face(f);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < nthreads; t++)
      pool.emplace_back([&]() {
        for (int f = next.fetch_add(1); f < nf; f = next.fetch_add(1)) process_face(f);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

FaceFlags classify_faces(const FaceMeasures& measures, const RepairConfig& config) {
  size_t nf = measures.visibility.size();
  FaceFlags flags;
  flags.visible.resize(nf);
  flags.open.resize(nf);
  for (size_t f = 0; f < nf; f++) {
    flags.visible[f] = measures.visibility[f] > config.visibility_threshold ? 1 : 0;
    flags.open[f] = measures.openness[f] > config.openness_threshold ? 1 : 0;
  }
  return flags;
}

void dump_measures_csv(const std::string& path, const FaceMeasures& measures) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) return;
  std::fprintf(f, "face_id,visibility,orientation,openness\n");
  for (size_t i = 0; i < measures.visibility.size(); i++)
    std::fprintf(f, "%zu,%.17g,%.17g,%.17g\n", i, measures.visibility[i], measures.orientation[i],
                 measures.openness[i]);
  std::fclose(f);
}

}  // namespace meshrepair
