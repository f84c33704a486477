#pragma once

#include <string>
#include <vector>

#include "centershadow/splitting.hpp"

namespace cshadow {

enum class ModelKind {
  TrivialHolonomy, // T^3 = T^2 x S^1, every leaf a plain circle fiber
  Pillowcase,      // quotient by (r,s,t) -> (-r,-s,t+1/2); leaves are
                   // unordered pairs {x, -x}, four of them singular
};

struct ModelSystem {
  ModelKind kind = ModelKind::TrivialHolonomy;
  Mat2 A;
  double theta = 0.0; // fiber rotation of the skew product
  Splitting S;
  Constants K;
};

ModelSystem make_model(ModelKind kind, const Mat2& A, double theta = 0.0);
ModelSystem make_model(ModelKind kind, const Mat2& A, double theta,
                       const Constants& K);

// A center leaf, stored by its canonical base point: the representative
// itself for the trivial model, the lexicographic min of {x, -x} for the
// pillowcase.
struct CenterLeaf {
  T2Point base;
};

// One choice of base-point representative for a leaf.
struct LeafLift {
  T2Point rep;
};

// Which representative a lift picked: +1 the canonical one, -1 its
// negation. Inert for the trivial model and for singular leaves.
struct LiftDecoration {
  int sign = 1;
};

T2Point canonical_rep(const ModelSystem& m, T2Point p);
CenterLeaf make_leaf(const ModelSystem& m, T2Point rep);
CenterLeaf project(const ModelSystem& m, const LeafLift& l);
LeafLift lift_with_sign(const ModelSystem& m, const CenterLeaf& L, int sign);

std::vector<LeafLift> lifts_of(const ModelSystem& m, const CenterLeaf& L);
bool is_singular(const ModelSystem& m, const CenterLeaf& L);
int holonomy_order(const ModelSystem& m, const CenterLeaf& L);
std::vector<CenterLeaf> singular_leaves(const ModelSystem& m); // Err::WrongModel

// Leaf image under the induced map (A acting on base points), power steps.
CenterLeaf quotient_map(const ModelSystem& m, const CenterLeaf& L,
                        long long power = 1);

// Hausdorff distance between leaves: plain torus distance for the trivial
// model, min over the representative pair for the pillowcase.
double leaf_distance(const ModelSystem& m, const CenterLeaf& a,
                     const CenterLeaf& b);

// Two-branch comparison metric: capped at delta0/2 as soon as the leaves are
// delta1-far, the raw lift distance (still capped) below that.
double modified_leaf_distance(const ModelSystem& m, const CenterLeaf& a,
                              const CenterLeaf& b);

bool leaf_equal(const ModelSystem& m, const CenterLeaf& a, const CenterLeaf& b,
                double tol = 1e-12);

// Representative of L2 nearest to reference.rep, with the sign that names
// it. Ties prefer +1. Err::TooFar when the leaves are delta0-far.
std::pair<LeafLift, LiftDecoration> matched_lift(const ModelSystem& m,
                                                 const LeafLift& reference,
                                                 const CenterLeaf& L2);

std::string leaf_to_string(const CenterLeaf& L);
CenterLeaf leaf_from_string(const ModelSystem& m, const std::string& s);

const char* model_name(ModelKind k);
ModelKind model_from_name(const std::string& s); // Err::BadInput

} // namespace cshadow
