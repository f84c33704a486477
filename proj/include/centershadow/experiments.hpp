#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "centershadow/shadowing.hpp"

namespace cshadow {

// Outcome of a probe. The witness holds enough data to recheck the claim
// offline; reverify() does exactly that from the serialized form.
struct Verdict {
  std::string name;
  bool passed = false;
  std::string parameters; // JSON object text
  std::string witness;    // JSON object text
};

std::string verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const std::string& text);
// Recomputes the probe's assertions from the witness payload alone.
bool reverify(const std::string& verdict_json);

// Point of the 3-manifold: torus base plus circle fiber.
struct M3Point {
  T2Point base;
  double fiber = 0.0;
};

// Trivial model: sampled pairs separate past mu within the predicted number
// of steps, and pairs built below the horizon threshold stay mu-close while
// obeying the per-component bound C mu lambda_s^horizon.
// Pillowcase: delegates to homoclinic_pair and reports its counterexample.
Verdict expansivity_probe(const ModelSystem& m, int trials, int horizon,
                          std::uint64_t seed, bool parallel = true);

// Pillowcase only. Finds a rational periodic leaf W near the origin's
// singular leaf and the distinct leaf W1 on its unstable set whose backward
// side is caught by the folded stable set; checks the pair stays eps-close
// over [-horizon, horizon]. Err::WrongModel; Err::NoPeriodicLeafFound when
// no admissible denominator <= 64 exists for this eps.
Verdict homoclinic_pair(const ModelSystem& m, double eps = 0.05,
                        int horizon = 50);

// Pillowcase only. Builds the two block-decorated bi-infinite orbits over a
// fixed singular-adjacent block profile, one per sign sequence, shadows
// both, and checks: boundary distances die off toward the window edges, the
// plain-pair distance has a positive floor on disagreement blocks, and the
// folded-pair distance has one on agreement blocks. Sequences are +-1
// valued, equal length, each time direction containing both a match and a
// mismatch (Err::MalformedSequence otherwise).
Verdict asymptotic_non_stable(const ModelSystem& m,
                              const std::vector<int>& mu_seq,
                              const std::vector<int>& nu_seq,
                              double eta = 0.05);

// Counts center leaves hit twice by a stable arc through a random point.
// Expected count <= 1 at every sampled arc (the doubled arc included);
// arcs through singular base points are the measure-zero exception, pinned
// separately by stable_arc_hits.
Verdict intersection_count(const ModelSystem& m, int trials, double stable_arc,
                           std::uint64_t seed, bool parallel = true);

// Number of parameters t in [-arc_len/2, arc_len/2] where base + t e_s lands
// on the leaf (either representative).
int stable_arc_hits(const ModelSystem& m, T2Point base, double arc_len,
                    const CenterLeaf& leaf, double tol = 1e-9);

// Fiber-aware expansivity: eta-close pseudo-orbit pairs in the 3-manifold
// whose base offset is purely stable yield a plaque intersection point z_i
// that never leaves the base orbit of x_i (|c_u| stays below 1e-10).
Verdict plaque_expansivity_probe(const ModelSystem& m, int trials, double eta,
                                 int horizon, std::uint64_t seed,
                                 bool parallel = true);

// Two facts about the stable line through a point: no near-closure up to
// arc length 2^10 mu (minimum transverse clearance recorded per doubling),
// and exact lambda-rate growth of plaque diameters under iteration.
Verdict cs_growth_probe(const ModelSystem& m, T2Point start, int steps = 16);

// Random leaves sit within delta of a periodic leaf: snap the base to the
// /64 lattice, compute the exact leaf period there, re-encode the cycle as
// an epsilon = 0 decorated orbit and confirm shadow_periodic returns the
// lattice leaf itself.
Verdict periodic_density_probe(const ModelSystem& m, int trials, double delta,
                               std::uint64_t seed, bool parallel = true);

} // namespace cshadow
