#pragma once

#include "centershadow/torus.hpp"

namespace cshadow {

// Eigen data of a hyperbolic unimodular matrix. lambda_u/lambda_s are the
// moduli (lambda_u > 1, lambda_u * lambda_s = 1); eigen_sign carries the
// common sign of the eigenvalues (negative trace flips both). e_u and e_s
// are unit vectors oriented with dx >= 0 (dy > 0 when dx == 0).
struct Splitting {
  Mat2 A;
  double lambda_u = 0, lambda_s = 0;
  int eigen_sign = 1;
  T2Vector e_u, e_s;
  double alpha = 0;       // contraction rate, = lambda_s
  double beta = 0;        // expansion rate, = lambda_u
  double lambda_norm = 0; // operator norm of A
  double C = 0;           // 1 / sin(angle between e_s and e_u)
};

Splitting eigen_split(const Mat2& A); // Err::NotUnimodular, Err::NotHyperbolic

struct SplitCoords {
  double c_s = 0;
  double c_u = 0;
};

// v = c_s * e_s + c_u * e_u, solved exactly from the 2x2 system.
SplitCoords split_coords(const Splitting& S, T2Vector v);
T2Vector from_split(const Splitting& S, SplitCoords c);

// Scale constants. N is the smallest power with 2 C alpha^N < 1.
struct Constants {
  double mu = 0.02;
  double delta0 = 0.125;
  double delta1 = 0.015625;
  int N = 1;
};

Constants derive_constants(const Splitting& S, double mu = 0.02,
                           double delta0 = 0.125, double delta1 = 0.015625);
// Throws Err::BadInput naming the violated relation.
void validate_constants(const Splitting& S, const Constants& K);

// Largest admissible pseudo-orbit epsilon for tracking quality eta:
// min((1 - alpha^N) * eta / (2C), delta0).
double epsilon_budget(const Splitting& S, const Constants& K, double eta);

} // namespace cshadow
