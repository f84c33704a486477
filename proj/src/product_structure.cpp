#include "centershadow/product_structure.hpp"

#include <cmath>

namespace cshadow {

ProductPoint local_product(const ModelSystem& m, const LeafLift& p,
                           const LeafLift& q) {
  T2Vector v = shortest_displacement(p.rep, q.rep);
  if (norm(v) >= m.K.mu / m.S.C)
    throw Error(Err::TooFar, "lifts outside the local product box");
  SplitCoords c = split_coords(m.S, v);
  return {translate(p.rep, c.c_u * m.S.e_u), std::abs(c.c_u), std::abs(c.c_s)};
}

namespace {
SplitCoords projection_coords(const ModelSystem& m, const LeafLift& a,
                              const LeafLift& b) {
  if (leaf_distance(m, project(m, a), project(m, b)) >= m.K.mu)
    throw Error(Err::TooFar, "leaves are mu-far, projection undefined");
  return split_coords(m.S, shortest_displacement(a.rep, b.rep));
}
} // namespace

double unstable_projection_distance(const ModelSystem& m, const LeafLift& a,
                                    const LeafLift& b) {
  return std::abs(projection_coords(m, a, b).c_u);
}

double stable_projection_distance(const ModelSystem& m, const LeafLift& a,
                                  const LeafLift& b) {
  return std::abs(projection_coords(m, a, b).c_s);
}

} // namespace cshadow
