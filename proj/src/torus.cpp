#include "centershadow/torus.hpp"

#include <cmath>
#include <limits>

namespace cshadow {

const char* err_name(Err e) {
  switch (e) {
    case Err::NotHyperbolic: return "NotHyperbolic";
    case Err::NotUnimodular: return "NotUnimodular";
    case Err::TooFar: return "TooFar";
    case Err::WrongModel: return "WrongModel";
    case Err::BudgetExceeded: return "BudgetExceeded";
    case Err::DecorationMismatch: return "DecorationMismatch";
    case Err::NotPeriodic: return "NotPeriodic";
    case Err::NoPeriodicLeafFound: return "NoPeriodicLeafFound";
    case Err::MalformedSequence: return "MalformedSequence";
    case Err::Overflow: return "Overflow";
    case Err::BadInput: return "BadInput";
  }
  return "Unknown";
}

double wrap01(double v) {
  double r = v - std::floor(v);
  if (r >= 1.0) r -= 1.0; // v just below an integer can round up to 1.0
  if (r < 0.0) r += 1.0;
  if (r == 0.0) return 0.0;
  // Snap to a reflection-stable representative: 1-(1-r) is idempotent in
  // float arithmetic, so negate(negate(p)) == p holds exactly for every
  // point produced here. Sheet choices then invert without residue.
  double t = 1.0 - r;
  if (t >= 1.0) return 0.0; // r below one ulp collapses to the seam
  return 1.0 - t;
}

T2Point canonical(T2Point p) { return {wrap01(p.x), wrap01(p.y)}; }

T2Point translate(T2Point p, T2Vector v) {
  return {wrap01(p.x + v.dx), wrap01(p.y + v.dy)};
}

T2Point negate(T2Point p) { return {wrap01(-p.x), wrap01(-p.y)}; }

double norm(T2Vector v) { return std::hypot(v.dx, v.dy); }

T2Vector operator+(T2Vector a, T2Vector b) { return {a.dx + b.dx, a.dy + b.dy}; }
T2Vector operator-(T2Vector a, T2Vector b) { return {a.dx - b.dx, a.dy - b.dy}; }
T2Vector operator*(double s, T2Vector v) { return {s * v.dx, s * v.dy}; }
double cross(T2Vector a, T2Vector b) { return a.dx * b.dy - a.dy * b.dx; }
double dot(T2Vector a, T2Vector b) { return a.dx * b.dx + a.dy * b.dy; }

T2Vector shortest_displacement(T2Point from, T2Point to) {
  double rx = wrap01(to.x - from.x);
  double ry = wrap01(to.y - from.y);
  // rx in [0,1), so the two per-axis candidates rx-1 and rx cover both ways
  // around. Norm ties resolve to the lexicographically smaller vector.
  double best = std::numeric_limits<double>::infinity();
  T2Vector out{};
  for (double cx : {rx - 1.0, rx}) {
    for (double cy : {ry - 1.0, ry}) {
      double n2 = cx * cx + cy * cy;
      if (n2 < best ||
          (n2 == best && (cx < out.dx || (cx == out.dx && cy < out.dy)))) {
        best = n2;
        out = {cx, cy};
      }
    }
  }
  return out;
}

double torus_distance(T2Point a, T2Point b) {
  return norm(shortest_displacement(a, b));
}

// ---- integer matrices ----

bool operator==(const Mat2& l, const Mat2& r) {
  return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
}

long long trace(const Mat2& m) { return m.a + m.d; }

long long det(const Mat2& m) {
  __int128 d = (__int128)m.a * m.d - (__int128)m.b * m.c;
  if (d > std::numeric_limits<long long>::max() ||
      d < std::numeric_limits<long long>::min())
    throw Error(Err::Overflow, "determinant out of range");
  return (long long)d;
}

bool is_unimodular(const Mat2& m) { return det(m) == 1; }

bool is_hyperbolic(const Mat2& m) {
  long long t = trace(m);
  return t > 2 || t < -2;
}

Mat2 inverse(const Mat2& m) {
  if (det(m) != 1) throw Error(Err::NotUnimodular, "inverse needs det 1");
  return {m.d, -m.b, -m.c, m.a};
}

namespace {
constexpr long long kEntryCap = 1LL << 62;

long long checked(__int128 v, const char* what) {
  if (v > kEntryCap || v < -kEntryCap) throw Error(Err::Overflow, what);
  return (long long)v;
}
} // namespace

Mat2 mat_mul(const Mat2& l, const Mat2& r) {
  const char* w = "matrix product entry too large";
  return {checked((__int128)l.a * r.a + (__int128)l.b * r.c, w),
          checked((__int128)l.a * r.b + (__int128)l.b * r.d, w),
          checked((__int128)l.c * r.a + (__int128)l.d * r.c, w),
          checked((__int128)l.c * r.b + (__int128)l.d * r.d, w)};
}

Mat2 mat_pow(const Mat2& m, long long n) {
  if (n < 0) return mat_pow(inverse(m), -n);
  Mat2 acc{1, 0, 0, 1};
  Mat2 base = m;
  while (n > 0) {
    if (n & 1) acc = mat_mul(acc, base);
    n >>= 1;
    if (n > 0) base = mat_mul(base, base);
  }
  return acc;
}

T2Vector apply_vec(const Mat2& m, T2Vector v) {
  return {double(m.a) * v.dx + double(m.b) * v.dy,
          double(m.c) * v.dx + double(m.d) * v.dy};
}

T2Point apply(const Mat2& m, T2Point p, long long power) {
  Mat2 M = (power == 1) ? m : mat_pow(m, power);
  // Entries past 2^52 no longer convert to double exactly; reduction mod 1
  // would be meaningless noise. Exact long-range orbits go through the
  // lattice functions instead.
  constexpr long long floatCap = 1LL << 52;
  for (long long e : {M.a, M.b, M.c, M.d})
    if (e > floatCap || e < -floatCap)
      throw Error(Err::Overflow, "matrix power too large for float apply");
  return {wrap01(double(M.a) * p.x + double(M.b) * p.y),
          wrap01(double(M.c) * p.x + double(M.d) * p.y)};
}

// ---- lattice ----

namespace {
long long mod_nonneg(long long v, long long den) {
  long long r = v % den;
  return r < 0 ? r + den : r;
}
} // namespace

LatticePoint to_lattice(T2Point p, long long den) {
  return {mod_nonneg(llround(p.x * double(den)), den),
          mod_nonneg(llround(p.y * double(den)), den), den};
}

T2Point from_lattice(const LatticePoint& q) {
  return {double(q.num_x) / double(q.den), double(q.num_y) / double(q.den)};
}

bool lattice_matches(T2Point p, long long den, double tol, LatticePoint* out) {
  LatticePoint q = to_lattice(p, den);
  T2Point back = from_lattice(q);
  if (torus_distance(p, back) > tol) return false;
  if (out) *out = q;
  return true;
}

LatticePoint lattice_apply(const Mat2& m, const LatticePoint& q) {
  __int128 nx = (__int128)m.a * q.num_x + (__int128)m.b * q.num_y;
  __int128 ny = (__int128)m.c * q.num_x + (__int128)m.d * q.num_y;
  long long rx = (long long)(nx % q.den);
  long long ry = (long long)(ny % q.den);
  return {mod_nonneg(rx, q.den), mod_nonneg(ry, q.den), q.den};
}

LatticePoint lattice_negate(const LatticePoint& q) {
  return {mod_nonneg(-q.num_x, q.den), mod_nonneg(-q.num_y, q.den), q.den};
}

bool lattice_equal(const LatticePoint& a, const LatticePoint& b) {
  return a.den == b.den && a.num_x == b.num_x && a.num_y == b.num_y;
}

long long lattice_period(const Mat2& m, const LatticePoint& q, long long cap) {
  LatticePoint cur = q;
  for (long long i = 1; i <= cap; ++i) {
    cur = lattice_apply(m, cur);
    if (lattice_equal(cur, q)) return i;
  }
  return 0;
}

long long rational_denominator(double v, long long max_den, double tol) {
  // Continued fraction convergents; the first one inside tol has the
  // smallest admissible denominator.
  double x = v;
  long long p0 = 1, q0 = 0, p1 = (long long)std::floor(x), q1 = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    if (q1 > max_den) return 0;
    if (std::abs(v - double(p1) / double(q1)) < tol) return q1;
    if (frac < 1e-18) return 0;
    x = 1.0 / frac;
    long long a = (long long)std::floor(x);
    frac = x - std::floor(x);
    long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
  }
  return 0;
}

} // namespace cshadow
