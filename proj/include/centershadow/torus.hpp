#pragma once

#include <cstdint>
#include "centershadow/errors.hpp"

namespace cshadow {

// Point on the unit 2-torus. Coordinates are kept in [0,1) by construction;
// use canonical() after any arithmetic that may leave the box.
struct T2Point {
  double x = 0.0;
  double y = 0.0;
};

struct T2Vector {
  double dx = 0.0;
  double dy = 0.0;
};

double wrap01(double v);
T2Point canonical(T2Point p);
T2Point translate(T2Point p, T2Vector v);
T2Point negate(T2Point p);

double norm(T2Vector v);
T2Vector operator+(T2Vector a, T2Vector b);
T2Vector operator-(T2Vector a, T2Vector b);
T2Vector operator*(double s, T2Vector v);
double cross(T2Vector a, T2Vector b);
double dot(T2Vector a, T2Vector b);

// Minimal-norm representative of (to - from) mod Z^2. Ties (e.g. opposite
// points) resolve to the lexicographically smallest (dx, dy), so antipodal
// displacements come out as (-0.5, -0.5).
T2Vector shortest_displacement(T2Point from, T2Point to);
double torus_distance(T2Point a, T2Point b);

// Integer 2x2 matrix acting on the torus. det must be +1 and |trace| > 2
// for the dynamics here; validation lives in eigen_split and make_model.
struct Mat2 {
  long long a = 2, b = 1;
  long long c = 1, d = 1;
};

bool operator==(const Mat2& l, const Mat2& r);
long long trace(const Mat2& m);
long long det(const Mat2& m);
bool is_unimodular(const Mat2& m);
bool is_hyperbolic(const Mat2& m);
Mat2 inverse(const Mat2& m);              // exact; requires det == 1
Mat2 mat_mul(const Mat2& l, const Mat2& r); // throws Err::Overflow past 2^62
Mat2 mat_pow(const Mat2& m, long long n);   // n may be negative

T2Vector apply_vec(const Mat2& m, T2Vector v);
// A^power * p mod 1. The matrix power is exact integer arithmetic; the
// reduction happens once, after.
T2Point apply(const Mat2& m, T2Point p, long long power = 1);

// ---- exact rational points ----
// num_x/den, num_y/den with 0 <= num < den. Lattice orbits never touch
// floating point, so periodicity checks are exact.
struct LatticePoint {
  long long num_x = 0;
  long long num_y = 0;
  long long den = 1;
};

LatticePoint to_lattice(T2Point p, long long den); // nearest lattice point
T2Point from_lattice(const LatticePoint& q);
bool lattice_matches(T2Point p, long long den, double tol, LatticePoint* out);
LatticePoint lattice_apply(const Mat2& m, const LatticePoint& q);
LatticePoint lattice_negate(const LatticePoint& q);
bool lattice_equal(const LatticePoint& a, const LatticePoint& b);
// Steps until the orbit returns to q (exact). 0 if no return within cap.
long long lattice_period(const Mat2& m, const LatticePoint& q, long long cap);

// Smallest q <= max_den with |v - p/q| < tol for some integer p, via
// continued fractions. 0 if none.
long long rational_denominator(double v, long long max_den, double tol);

} // namespace cshadow
