// Timing comparison of the serial and OpenMP batch drivers on a realistic
// workload: generate, decorate, and shadow independent pseudo-orbits. The
// checksum must match between the two runs; the wall-clock ratio depends on
// the host's core count.

#include <chrono>
#include <cstdio>
#include <vector>

#include "centershadow/batch.hpp"
#include "centershadow/shadowing.hpp"

using namespace cshadow;

namespace {

constexpr int kTrials = 40;
constexpr int kLength = 400;

double run(const ModelSystem& m, bool parallel, double* seconds) {
  std::vector<double> sums(kTrials, 0.0);
  auto t0 = std::chrono::steady_clock::now();
  run_batch(kTrials, parallel, [&](int i) {
    PseudoOrbit po =
        make_pseudo_orbit(m, 1000 + std::uint64_t(i), kLength, 2e-4, 0.01);
    ShadowTrace t = shadow(m, auto_decorate(m, po), 0.01);
    sums[i] = t.shadow.base.x + t.shadow.base.y + t.bound;
  });
  auto t1 = std::chrono::steady_clock::now();
  *seconds = std::chrono::duration<double>(t1 - t0).count();
  double total = 0;
  for (double s : sums) total += s;
  return total;
}

} // namespace

int main() {
  ModelSystem m = make_model(ModelKind::Pillowcase, Mat2{2, 1, 1, 1});
  double ts = 0, tp = 0;
  double serial = run(m, false, &ts);
  double parallel = run(m, true, &tp);
  bool match = serial == parallel;
  std::printf("threads   %d\n", batch_threads());
  std::printf("serial    %.3fs  checksum %.17g\n", ts, serial);
  std::printf("parallel  %.3fs  checksum %.17g\n", tp, parallel);
  std::printf("speedup   %.2fx  checksums %s\n", ts / tp,
              match ? "match" : "DIFFER");
  return match ? 0 : 1;
}
