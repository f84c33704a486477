#include "centershadow/splitting.hpp"

#include <cmath>

namespace cshadow {

namespace {

// Kernel vector of (A - lambda I), taken from whichever row is numerically
// fatter, normalized and oriented dx >= 0 (dy > 0 at dx == 0).
T2Vector eigenvector(const Mat2& A, double lambda) {
  double r1x = double(A.b), r1y = lambda - double(A.a);
  double r2x = lambda - double(A.d), r2y = double(A.c);
  double vx, vy;
  if (std::abs(r1x) + std::abs(r1y) >= std::abs(r2x) + std::abs(r2y)) {
    vx = r1x; vy = r1y;
  } else {
    vx = r2x; vy = r2y;
  }
  double n = std::hypot(vx, vy);
  vx /= n; vy /= n;
  if (vx < 0 || (vx == 0 && vy < 0)) { vx = -vx; vy = -vy; }
  return {vx, vy};
}

} // namespace

Splitting eigen_split(const Mat2& A) {
  if (det(A) != 1)
    throw Error(Err::NotUnimodular, "matrix determinant is not 1");
  long long tr = trace(A);
  if (tr <= 2 && tr >= -2)
    throw Error(Err::NotHyperbolic, "matrix trace within [-2, 2]");
  if (tr > (1LL << 30) || tr < -(1LL << 30))
    throw Error(Err::Overflow, "trace too large for eigen data");

  double disc = std::sqrt(double(tr * tr - 4));
  double lu_signed = (tr > 0) ? (double(tr) + disc) / 2.0
                              : (double(tr) - disc) / 2.0;
  // ls = 1/lu keeps lambda_u * lambda_s == 1 to the last bit; the direct
  // (tr -+ disc)/2 form cancels badly for large traces.
  double ls_signed = 1.0 / lu_signed;

  Splitting S;
  S.A = A;
  S.eigen_sign = tr > 0 ? 1 : -1;
  S.lambda_u = std::abs(lu_signed);
  S.lambda_s = std::abs(ls_signed);
  S.alpha = S.lambda_s;
  S.beta = S.lambda_u;
  S.e_u = eigenvector(A, lu_signed);
  S.e_s = eigenvector(A, ls_signed);
  S.C = 1.0 / std::abs(cross(S.e_u, S.e_s));

  double T = double(A.a) * A.a + double(A.b) * A.b + double(A.c) * A.c +
             double(A.d) * A.d;
  S.lambda_norm = std::sqrt((T + std::sqrt(T * T - 4.0)) / 2.0);

  for (auto [v, lam] : {std::pair{S.e_u, lu_signed}, {S.e_s, ls_signed}}) {
    T2Vector img = apply_vec(A, v);
    T2Vector res = img - lam * v;
    if (norm(res) > 1e-9)
      throw Error(Err::BadInput, "eigenvector residual out of tolerance");
  }
  return S;
}

SplitCoords split_coords(const Splitting& S, T2Vector v) {
  double den = cross(S.e_s, S.e_u);
  return {cross(v, S.e_u) / den, cross(S.e_s, v) / den};
}

T2Vector from_split(const Splitting& S, SplitCoords c) {
  return c.c_s * S.e_s + c.c_u * S.e_u;
}

Constants derive_constants(const Splitting& S, double mu, double delta0,
                           double delta1) {
  Constants K;
  K.mu = mu;
  K.delta0 = delta0;
  K.delta1 = delta1;
  double pw = S.alpha;
  int N = 1;
  while (2.0 * S.C * pw >= 1.0) {
    pw *= S.alpha;
    if (++N > 64)
      throw Error(Err::BadInput, "no admissible contraction power below 64");
  }
  K.N = N;
  validate_constants(S, K);
  return K;
}

void validate_constants(const Splitting& S, const Constants& K) {
  auto fail = [](const char* what) { throw Error(Err::BadInput, what); };
  if (!(K.mu > 0)) fail("mu must be positive");
  if (!(K.delta0 > 0)) fail("delta0 must be positive");
  if (!(K.delta1 > 0)) fail("delta1 must be positive");
  if (!(K.mu <= K.delta0)) fail("mu must not exceed delta0");
  if (!(K.delta1 < K.delta0 / 4.0)) fail("delta1 must stay below delta0/4");
  if (K.N < 1) fail("contraction power must be at least 1");
  if (!(2.0 * S.C * std::pow(S.alpha, K.N) < 1.0))
    fail("2 C alpha^N must be below 1");
}

double epsilon_budget(const Splitting& S, const Constants& K, double eta) {
  if (!(eta > 0)) throw Error(Err::BadInput, "eta must be positive");
  double aN = std::pow(S.alpha, K.N);
  return std::min((1.0 - aN) * eta / (2.0 * S.C), K.delta0);
}

} // namespace cshadow
