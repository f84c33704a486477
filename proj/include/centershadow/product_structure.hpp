#pragma once

#include "centershadow/leaf_space.hpp"

namespace cshadow {

// Intersection of the local unstable plaque through p with the local
// stable-plus-center set through q, in lift coordinates.
struct ProductPoint {
  T2Point point;      // p.rep + c_u * e_u
  double u_component; // |c_u| of the displacement p.rep -> q.rep
  double s_component; // |c_s| of the same displacement
};

// Err::TooFar when the lift displacement reaches mu / C.
ProductPoint local_product(const ModelSystem& m, const LeafLift& p,
                           const LeafLift& q);

// |c_u| (resp. |c_s|) of the shortest lift displacement. Precondition on the
// leaf distance (< mu) enforced with Err::TooFar.
double unstable_projection_distance(const ModelSystem& m, const LeafLift& a,
                                    const LeafLift& b);
double stable_projection_distance(const ModelSystem& m, const LeafLift& a,
                                  const LeafLift& b);

} // namespace cshadow
