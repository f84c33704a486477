#include "centershadow/leaf_space.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace cshadow {

ModelSystem make_model(ModelKind kind, const Mat2& A, double theta) {
  ModelSystem m;
  m.kind = kind;
  m.A = A;
  m.theta = theta;
  m.S = eigen_split(A);
  m.K = derive_constants(m.S);
  return m;
}

ModelSystem make_model(ModelKind kind, const Mat2& A, double theta,
                       const Constants& K) {
  ModelSystem m;
  m.kind = kind;
  m.A = A;
  m.theta = theta;
  m.S = eigen_split(A);
  m.K = K;
  validate_constants(m.S, m.K);
  return m;
}

T2Point canonical_rep(const ModelSystem& m, T2Point p) {
  T2Point c = canonical(p);
  if (m.kind == ModelKind::TrivialHolonomy) return c;
  T2Point n = negate(c);
  if (n.x < c.x || (n.x == c.x && n.y < c.y)) return n;
  return c;
}

CenterLeaf make_leaf(const ModelSystem& m, T2Point rep) {
  return {canonical_rep(m, rep)};
}

CenterLeaf project(const ModelSystem& m, const LeafLift& l) {
  return make_leaf(m, l.rep);
}

LeafLift lift_with_sign(const ModelSystem& m, const CenterLeaf& L, int sign) {
  if (m.kind == ModelKind::TrivialHolonomy || sign >= 0) return {L.base};
  return {negate(L.base)};
}

bool is_singular(const ModelSystem& m, const CenterLeaf& L) {
  if (m.kind != ModelKind::Pillowcase) return false;
  return torus_distance(L.base, negate(L.base)) <= 1e-12;
}

int holonomy_order(const ModelSystem& m, const CenterLeaf& L) {
  return is_singular(m, L) ? 2 : 1;
}

std::vector<LeafLift> lifts_of(const ModelSystem& m, const CenterLeaf& L) {
  if (m.kind == ModelKind::TrivialHolonomy || is_singular(m, L))
    return {{L.base}};
  return {{L.base}, {negate(L.base)}};
}

std::vector<CenterLeaf> singular_leaves(const ModelSystem& m) {
  if (m.kind != ModelKind::Pillowcase)
    throw Error(Err::WrongModel, "only the pillowcase has singular leaves");
  return {{{0.0, 0.0}}, {{0.5, 0.0}}, {{0.0, 0.5}}, {{0.5, 0.5}}};
}

CenterLeaf quotient_map(const ModelSystem& m, const CenterLeaf& L,
                        long long power) {
  return make_leaf(m, apply(m.A, L.base, power));
}

double leaf_distance(const ModelSystem& m, const CenterLeaf& a,
                     const CenterLeaf& b) {
  double d = torus_distance(a.base, b.base);
  if (m.kind == ModelKind::Pillowcase)
    d = std::min(d, torus_distance(a.base, negate(b.base)));
  return d;
}

double modified_leaf_distance(const ModelSystem& m, const CenterLeaf& a,
                              const CenterLeaf& b) {
  double cap = m.K.delta0 / 2.0;
  double d = leaf_distance(m, a, b);
  if (d >= m.K.delta1) return cap;
  return std::min(cap, d);
}

bool leaf_equal(const ModelSystem& m, const CenterLeaf& a, const CenterLeaf& b,
                double tol) {
  return leaf_distance(m, a, b) <= tol;
}

std::pair<LeafLift, LiftDecoration> matched_lift(const ModelSystem& m,
                                                 const LeafLift& reference,
                                                 const CenterLeaf& L2) {
  if (leaf_distance(m, project(m, reference), L2) >= m.K.delta0)
    throw Error(Err::TooFar, "leaves are delta0-far, no matched lift");
  LeafLift best = {L2.base};
  int best_sign = 1;
  double best_d = torus_distance(reference.rep, L2.base);
  if (m.kind == ModelKind::Pillowcase && !is_singular(m, L2)) {
    T2Point other = negate(L2.base);
    double d = torus_distance(reference.rep, other);
    if (d < best_d) {
      best = {other};
      best_sign = -1;
      best_d = d;
    }
  }
  return {best, {best_sign}};
}

std::string leaf_to_string(const CenterLeaf& L) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f,%.12f", L.base.x, L.base.y);
  return buf;
}

CenterLeaf leaf_from_string(const ModelSystem& m, const std::string& s) {
  double x = 0, y = 0;
  if (std::sscanf(s.c_str(), "%lf,%lf", &x, &y) != 2)
    throw Error(Err::BadInput, "leaf literal must be 'x,y'");
  return make_leaf(m, {x, y});
}

const char* model_name(ModelKind k) {
  return k == ModelKind::TrivialHolonomy ? "trivial" : "pillowcase";
}

ModelKind model_from_name(const std::string& s) {
  if (s == "trivial") return ModelKind::TrivialHolonomy;
  if (s == "pillowcase") return ModelKind::Pillowcase;
  throw Error(Err::BadInput, "unknown model '" + s + "'");
}

} // namespace cshadow
