#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "centershadow/leaf_space.hpp"

namespace cshadow {

// Leaf sequence with a certified step error: every consecutive pair
// satisfies modified_leaf_distance(map(W_i), W_{i+1}) <= epsilon. The
// constructor helper validates; epsilon = 0 means a true orbit.
struct PseudoOrbit {
  std::vector<CenterLeaf> leaves;
  double epsilon = 0.0;
};

PseudoOrbit pseudo_orbit_from(const ModelSystem& m,
                              std::vector<CenterLeaf> leaves, double epsilon);

// Random walk: step the leaf map, pick a uniformly random representative of
// the image, kick it by a uniform disk jump of radius jump_scale. Seeded and
// reproducible across platforms. Err::BudgetExceeded when jump_scale is not
// inside the epsilon budget for eta.
PseudoOrbit make_pseudo_orbit(const ModelSystem& m, std::uint64_t seed,
                              int length, double jump_scale,
                              double eta = 0.01);

// One sign per step, read relative to the running chain of representatives.
// decorations[0] anchors the initial lift (+1 canonical, -1 its negative);
// decorations[i] with i > 0 keeps the lift of leaves[i] nearest the stepped
// previous representative (+1) or switches to its mirror (-1). On the
// trivial model and over singular leaves the flag is inert.
struct DecoratedPseudoOrbit {
  PseudoOrbit base;
  std::vector<LiftDecoration> decorations;
};

DecoratedPseudoOrbit decorate(const ModelSystem& m, PseudoOrbit po,
                              std::vector<LiftDecoration> decorations);

// The no-switch decoration: +1 everywhere, with the given anchor sign for
// leaves[0]. Every chain inside the delta0 tube accepts it.
DecoratedPseudoOrbit auto_decorate(const ModelSystem& m, const PseudoOrbit& po,
                                   int initial_sign = 1);

struct ShadowTrace {
  CenterLeaf shadow;                    // leaf at time 0
  LeafLift shadow_lift;                 // representative in the chain's sheet
  std::vector<T2Point> track;           // corrected lift at every time
  std::vector<double> per_step_distance; // modified metric vs W_i, every i
  std::vector<double> corrections;      // |c_u| applied entering step i
  double bound = 0.0;          // 2 C eps_dec / (1 - alpha^N)
  double eps_decorated = 0.0;  // max realized lift-level step jump
  bool cap_hit = false;        // some per-step comparison hit the delta0/2 cap
};

// Constructive one-sided shadowing along the decorated chain. Corrections
// are applied in the unstable direction only, so the shadow lies in the
// unstable set of W_0's chosen representative.
// Err::BudgetExceeded when the orbit's epsilon is not within budget for eta;
// Err::DecorationMismatch when a selected representative is delta0-far from
// the stepped chain.
ShadowTrace shadow(const ModelSystem& m, const DecoratedPseudoOrbit& dpo,
                   double eta = 0.01);

// Closed-form check value: the same shadow leaf from the raw decorated chain
// by one geometric pullback sum, no correction machinery. Terms below 1e-16
// of the leading one are dropped.
CenterLeaf shadow_oracle(const ModelSystem& m, const DecoratedPseudoOrbit& dpo);

// Window version: leaves cover times [-(n-1)/2, (n-1)/2], n odd. The shadow
// is pinned by both tails (stable component from the past, unstable from the
// future); trace entries line up with the window.
ShadowTrace shadow_bi_infinite(const ModelSystem& m,
                               const DecoratedPseudoOrbit& dpo,
                               double eta = 0.01);

struct PeriodicShadow {
  CenterLeaf leaf;
  bool exact = false;    // verified on an integer lattice
  long long den = 0;     // lattice denominator when exact
  double residual = 0.0; // worst per-step closure defect of the float path
};

// Shadow of a periodic decorated orbit, itself periodic with the same
// period. Verification is exact when the result snaps to a rational point;
// otherwise the closed orbit is certified through its per-step residuals.
// Err::NotPeriodic when the input does not repeat or the result fails to
// close up.
PeriodicShadow shadow_periodic(const ModelSystem& m,
                               const DecoratedPseudoOrbit& dpo, int period);

// ---- serialization ----

std::string orbit_to_text(const ModelSystem& m,
                          const DecoratedPseudoOrbit& dpo);
DecoratedPseudoOrbit orbit_from_text(const std::string& text,
                                     ModelSystem* model_out);
std::string trace_to_csv(const ShadowTrace& t);

} // namespace cshadow
