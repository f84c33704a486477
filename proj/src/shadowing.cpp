#include "centershadow/shadowing.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "centershadow/rng.hpp"

namespace cshadow {

namespace {

// The engine steps by A^N, the power under which one correction round
// contracts (2 C alpha^N < 1). lam/als carry the eigenvalue signs so all
// pullback algebra stays exact for negative-trace matrices.
struct Step {
  Mat2 B;
  double lam;    // signed unstable eigenvalue of B
  double als;    // signed stable eigenvalue of B
  double alphaN; // |als|
};

Step engine_step(const ModelSystem& m) {
  int N = m.K.N;
  double sgn = (m.S.eigen_sign < 0 && (N % 2)) ? -1.0 : 1.0;
  return {mat_pow(m.A, N), sgn * std::pow(m.S.lambda_u, N),
          sgn * std::pow(m.S.lambda_s, N), std::pow(m.S.lambda_s, N)};
}

// Image of a decorated representative. Applying B to the canonical base and
// flipping afterwards matches the float path of quotient_map exactly, so a
// kick-free orbit yields bitwise-zero chain jumps.
T2Point step_rep(const Step& st, const CenterLeaf& L, int sign) {
  T2Point img = apply(st.B, L.base);
  return sign > 0 ? img : negate(img);
}

// Decoration flags are read relative to the running chain. The flag at
// index 0 anchors the initial lift (+1 the canonical representative, -1 its
// negative); every later flag picks between the two lifts of that leaf as
// seen from the image of the previous representative, +1 the nearer one and
// -1 the mirror one. Resolving the flags into absolute signs first keeps
// the float path of step_rep intact, so a kick-free orbit still produces
// bitwise-zero chain jumps. Flags are inert on the trivial model and over
// singular leaves, where the leaf has a single lift.
std::vector<int> resolve_signs(const ModelSystem& m, const Step& st,
                               const DecoratedPseudoOrbit& dpo) {
  const auto& L = dpo.base.leaves;
  std::vector<int> s(L.size(), 1);
  if (m.kind != ModelKind::Pillowcase) return s;
  s[0] = dpo.decorations[0].sign;
  for (size_t i = 1; i < L.size(); ++i) {
    if (is_singular(m, L[i])) continue;
    T2Point img = step_rep(st, L[i - 1], s[i - 1]);
    int near = torus_distance(img, negate(L[i].base)) <
                       torus_distance(img, L[i].base)
                   ? -1
                   : 1;
    s[i] = dpo.decorations[i].sign > 0 ? near : -near;
  }
  return s;
}

std::vector<T2Point> chain_reps(const ModelSystem& m,
                                const std::vector<CenterLeaf>& leaves,
                                const std::vector<int>& s) {
  std::vector<T2Point> w(leaves.size());
  for (size_t i = 0; i < w.size(); ++i)
    w[i] = lift_with_sign(m, leaves[i], s[i]).rep;
  return w;
}

void check_budget(const ModelSystem& m, double epsilon, double eta) {
  double budget = epsilon_budget(m.S, m.K, eta);
  if (!(epsilon < budget)) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "epsilon %.6g not below the budget %.6g for eta %.6g",
                  epsilon, budget, eta);
    throw Error(Err::BudgetExceeded, buf);
  }
}

void check_sizes(const DecoratedPseudoOrbit& dpo) {
  if (dpo.base.leaves.empty()) throw Error(Err::BadInput, "empty orbit");
  if (dpo.decorations.size() != dpo.base.leaves.size())
    throw Error(Err::BadInput, "decoration count must match leaf count");
}

[[noreturn]] void mismatch(size_t step, const char* what) {
  char buf[112];
  std::snprintf(buf, sizeof buf, "step %zu: %s", step, what);
  throw Error(Err::DecorationMismatch, buf);
}

} // namespace

PseudoOrbit pseudo_orbit_from(const ModelSystem& m,
                              std::vector<CenterLeaf> leaves, double epsilon) {
  if (leaves.empty()) throw Error(Err::BadInput, "empty orbit");
  if (epsilon < 0) throw Error(Err::BadInput, "negative epsilon");
  for (size_t i = 0; i + 1 < leaves.size(); ++i) {
    CenterLeaf img = quotient_map(m, leaves[i], m.K.N);
    double d = modified_leaf_distance(m, img, leaves[i + 1]);
    if (d > epsilon + 1e-11) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "step %zu jump %.6g exceeds epsilon %.6g",
                    i, d, epsilon);
      throw Error(Err::BadInput, buf);
    }
  }
  return {std::move(leaves), epsilon};
}

PseudoOrbit make_pseudo_orbit(const ModelSystem& m, std::uint64_t seed,
                              int length, double jump_scale, double eta) {
  if (length < 1) throw Error(Err::BadInput, "length must be positive");
  if (jump_scale < 0) throw Error(Err::BadInput, "negative jump scale");
  check_budget(m, jump_scale, eta);

  Rng rng(seed);
  std::vector<CenterLeaf> leaves;
  leaves.reserve(length);
  leaves.push_back(make_leaf(m, rng.point()));
  double realized = 0.0;
  for (int i = 1; i < length; ++i) {
    CenterLeaf img = quotient_map(m, leaves.back(), m.K.N);
    auto reps = lifts_of(m, img);
    T2Point pick = reps[rng.below(reps.size())].rep;
    leaves.push_back(make_leaf(m, translate(pick, rng.disk(jump_scale))));
    realized =
        std::max(realized, modified_leaf_distance(m, img, leaves.back()));
  }
  return {std::move(leaves), realized};
}

DecoratedPseudoOrbit decorate(const ModelSystem& m, PseudoOrbit po,
                              std::vector<LiftDecoration> decorations) {
  (void)m;
  if (decorations.size() != po.leaves.size())
    throw Error(Err::BadInput, "decoration count must match leaf count");
  for (const auto& d : decorations)
    if (d.sign != 1 && d.sign != -1)
      throw Error(Err::BadInput, "decoration signs must be +1 or -1");
  return {std::move(po), std::move(decorations)};
}

DecoratedPseudoOrbit auto_decorate(const ModelSystem& m, const PseudoOrbit& po,
                                   int initial_sign) {
  (void)m;
  std::vector<LiftDecoration> dec(po.leaves.size(), LiftDecoration{1});
  if (!dec.empty()) dec[0].sign = initial_sign < 0 ? -1 : 1;
  return {po, dec};
}

ShadowTrace shadow(const ModelSystem& m, const DecoratedPseudoOrbit& dpo,
                   double eta) {
  check_sizes(dpo);
  check_budget(m, dpo.base.epsilon, eta);
  Step st = engine_step(m);
  const size_t n = dpo.base.leaves.size();
  std::vector<int> s = resolve_signs(m, st, dpo);
  std::vector<T2Point> w = chain_reps(m, dpo.base.leaves, s);

  // The corrected chain is carried as a displacement from the decorated
  // representative; it stays in the stable direction and never re-enters
  // the wrap arithmetic, so a true orbit keeps every quantity zero up to
  // rounding of the wrap at fold crossings, and exactly zero without them.
  std::vector<T2Vector> drift(n, T2Vector{});
  std::vector<double> off(n, 0.0); // time-j unstable offset of the shadow
  ShadowTrace t;
  t.corrections.assign(n, 0.0);

  double eps_dec = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) {
    T2Point img = step_rep(st, dpo.base.leaves[i], s[i]);
    T2Vector rvec = shortest_displacement(img, w[i + 1]);
    if (norm(rvec) >= m.K.delta0)
      mismatch(i + 1, "representative is delta0-far from the stepped chain");
    eps_dec = std::max(eps_dec, norm(rvec));

    T2Vector dvec =
        shortest_displacement(translate(img, apply_vec(st.B, drift[i])),
                              w[i + 1]);
    double dn = norm(dvec);
    if (dn >= m.K.delta0) mismatch(i + 1, "corrected chain left delta0 tube");
    // One correction per step keeps the drift below twice the worst raw
    // jump; losing this tube means the contraction argument is broken.
    if (dn > 2.0 * eps_dec + 1e-12)
      throw std::logic_error("shadowing induction lost the 2-epsilon tube");

    SplitCoords sc = split_coords(m.S, dvec);
    t.corrections[i + 1] = std::abs(sc.c_u);
    drift[i + 1] = (-sc.c_s) * m.S.e_s;

    // Pull the new correction back to every earlier time. Factors below
    // 1e-18 cannot move a double at these scales.
    double fac = 1.0 / st.lam;
    for (size_t j = i + 1; j-- > 0;) {
      off[j] += fac * sc.c_u;
      fac /= st.lam;
      if (std::abs(fac) < 1e-18) break;
    }
  }

  t.eps_decorated = eps_dec;
  t.bound = eps_dec > 0
                ? 2.0 * m.S.C * eps_dec / (1.0 - st.alphaN)
                : 0.0;
  t.shadow_lift = {translate(w[0], off[0] * m.S.e_u)};
  t.shadow = make_leaf(m, t.shadow_lift.rep);

  t.per_step_distance.resize(n);
  t.track.resize(n);
  double cap = m.K.delta0 / 2.0;
  for (size_t j = 0; j < n; ++j) {
    T2Point y = translate(w[j], drift[j] + off[j] * m.S.e_u);
    t.track[j] = y;
    t.per_step_distance[j] =
        modified_leaf_distance(m, make_leaf(m, y), dpo.base.leaves[j]);
    if (t.per_step_distance[j] >= cap - 1e-15) t.cap_hit = true;
  }
  return t;
}

CenterLeaf shadow_oracle(const ModelSystem& m,
                         const DecoratedPseudoOrbit& dpo) {
  check_sizes(dpo);
  Step st = engine_step(m);
  std::vector<int> s = resolve_signs(m, st, dpo);
  std::vector<T2Point> w = chain_reps(m, dpo.base.leaves, s);
  double acc = 0.0, pull = 1.0;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    pull /= st.lam;
    if (std::abs(pull) < 1e-16) break;
    T2Vector rvec = shortest_displacement(
        step_rep(st, dpo.base.leaves[i], s[i]), w[i + 1]);
    acc += pull * split_coords(m.S, rvec).c_u;
  }
  return make_leaf(m, translate(w[0], acc * m.S.e_u));
}

ShadowTrace shadow_bi_infinite(const ModelSystem& m,
                               const DecoratedPseudoOrbit& dpo, double eta) {
  check_sizes(dpo);
  const size_t n = dpo.base.leaves.size();
  if (n < 3 || n % 2 == 0)
    throw Error(Err::BadInput, "window length must be odd and at least 3");
  check_budget(m, dpo.base.epsilon, eta);
  Step st = engine_step(m);
  std::vector<int> s = resolve_signs(m, st, dpo);
  std::vector<T2Point> w = chain_reps(m, dpo.base.leaves, s);

  std::vector<double> cs(n - 1), cu(n - 1);
  double eps_dec = 0.0;
  for (size_t k = 0; k + 1 < n; ++k) {
    T2Vector rvec = shortest_displacement(step_rep(st, dpo.base.leaves[k], s[k]),
                                          w[k + 1]);
    if (norm(rvec) >= m.K.delta0)
      mismatch(k + 1, "representative is delta0-far from the stepped chain");
    eps_dec = std::max(eps_dec, norm(rvec));
    SplitCoords sc = split_coords(m.S, rvec);
    cs[k] = sc.c_s;
    cu[k] = sc.c_u;
  }

  // Stable deviation integrates the past, unstable the future; each
  // recursion runs in its contracting direction only.
  std::vector<double> sig(n, 0.0), ups(n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) sig[k + 1] = st.als * sig[k] - cs[k];
  for (size_t k = n - 1; k-- > 0;) ups[k] = (ups[k + 1] + cu[k]) / st.lam;

  ShadowTrace t;
  t.eps_decorated = eps_dec;
  t.bound = eps_dec > 0 ? 2.0 * m.S.C * eps_dec / (1.0 - st.alphaN) : 0.0;
  t.corrections.assign(n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) t.corrections[k + 1] = std::abs(cu[k]);

  t.per_step_distance.resize(n);
  t.track.resize(n);
  double cap = m.K.delta0 / 2.0;
  size_t origin = (n - 1) / 2;
  for (size_t k = 0; k < n; ++k) {
    T2Point y = translate(w[k], sig[k] * m.S.e_s + ups[k] * m.S.e_u);
    t.track[k] = y;
    if (k == origin) t.shadow_lift = {y};
    t.per_step_distance[k] =
        modified_leaf_distance(m, make_leaf(m, y), dpo.base.leaves[k]);
    if (t.per_step_distance[k] >= cap - 1e-15) t.cap_hit = true;
  }
  t.shadow = make_leaf(m, t.shadow_lift.rep);
  return t;
}

PeriodicShadow shadow_periodic(const ModelSystem& m,
                               const DecoratedPseudoOrbit& dpo, int period) {
  check_sizes(dpo);
  if (period < 1) throw Error(Err::BadInput, "period must be positive");
  const size_t n = dpo.base.leaves.size();
  const size_t p = size_t(period);
  if (n < p)
    throw Error(Err::NotPeriodic, "window shorter than the stated period");
  for (size_t i = 0; i + p < n; ++i) {
    if (!leaf_equal(m, dpo.base.leaves[i], dpo.base.leaves[i + p]) ||
        dpo.decorations[i].sign != dpo.decorations[i + p].sign)
      throw Error(Err::NotPeriodic, "orbit does not repeat with this period");
  }
  Step st = engine_step(m);
  std::vector<int> s = resolve_signs(m, st, dpo);
  std::vector<T2Point> w = chain_reps(m, dpo.base.leaves, s);

  std::vector<double> cs(p), cu(p);
  double eps_dec = 0.0;
  for (size_t k = 0; k < p; ++k) {
    T2Vector rvec = shortest_displacement(
        step_rep(st, dpo.base.leaves[k], s[k]), w[(k + 1) % p]);
    if (norm(rvec) >= m.K.delta0)
      mismatch(k + 1, "periodic chain jump is delta0-far");
    eps_dec = std::max(eps_dec, norm(rvec));
    SplitCoords sc = split_coords(m.S, rvec);
    cs[k] = sc.c_s;
    cu[k] = sc.c_u;
  }

  // Closed geometric forms for the unique period-p deviation.
  double lam_mp = std::pow(std::abs(st.lam), -double(p));
  if (st.lam < 0 && (p % 2)) lam_mp = -lam_mp;
  double als_p = std::pow(std::abs(st.als), double(p));
  if (st.als < 0 && (p % 2)) als_p = -als_p;

  double up = 0.0, pull = 1.0;
  for (size_t k = 0; k < p; ++k) {
    pull /= st.lam;
    up += pull * cu[k];
    if (std::abs(pull) < 1e-18) break;
  }
  double ups0 = up / (1.0 - lam_mp);

  double sp = 0.0, fw = 1.0;
  for (size_t k = p; k-- > 0;) {
    sp += fw * cs[k];
    fw *= st.als;
    if (std::abs(fw) < 1e-18) break;
  }
  double sig0 = -sp / (1.0 - als_p);

  std::vector<double> sig(p + 1), ups(p + 1);
  sig[0] = sig0;
  for (size_t k = 0; k < p; ++k) sig[k + 1] = st.als * sig[k] - cs[k];
  ups[p] = ups0;
  for (size_t k = p; k-- > 0;) ups[k] = (ups[k + 1] + cu[k]) / st.lam;

  std::vector<T2Point> y(p);
  for (size_t k = 0; k < p; ++k)
    y[k] = translate(w[k], sig[k] * m.S.e_s + ups[k] * m.S.e_u);

  PeriodicShadow out;
  out.leaf = make_leaf(m, y[0]);

  // Exact certification first: when y0 snaps to a rational point, the whole
  // orbit can be walked on its lattice with integer arithmetic.
  long long qx = rational_denominator(y[0].x, 10'000'000, 1e-9);
  long long qy = rational_denominator(y[0].y, 10'000'000, 1e-9);
  if (qx > 0 && qy > 0) {
    long long den = qx / std::gcd(qx, qy) * qy;
    LatticePoint start;
    if (den <= 10'000'000 && lattice_matches(y[0], den, 1e-9, &start)) {
      LatticePoint cur = start;
      for (size_t k = 0; k < p * size_t(m.K.N); ++k)
        cur = lattice_apply(m.A, cur);
      bool closes = lattice_equal(cur, start) ||
                    (m.kind == ModelKind::Pillowcase &&
                     lattice_equal(cur, lattice_negate(start)));
      if (closes) {
        out.leaf = make_leaf(m, from_lattice(start));
        out.exact = true;
        out.den = den;
        out.residual = 0.0;
        return out;
      }
    }
  }

  // Float certification: every single engine step of the candidate orbit
  // must close up; shadowing the residual chain pins a true periodic leaf
  // within 2 C rho / (1 - alpha^N) of the returned one.
  double rho = 0.0;
  for (size_t k = 0; k < p; ++k) {
    T2Point img = apply(st.B, y[k]);
    rho = std::max(rho, torus_distance(img, y[(k + 1) % p]));
  }
  out.residual = rho;
  double cert = 2.0 * m.S.C * rho / (1.0 - st.alphaN);
  if (cert >= 1e-10) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "periodic closure certificate %.3g not below 1e-10", cert);
    throw Error(Err::NotPeriodic, buf);
  }
  return out;
}

// ---- serialization ----

std::string orbit_to_text(const ModelSystem& m,
                          const DecoratedPseudoOrbit& dpo) {
  std::ostringstream os;
  char buf[128];
  os << "model " << model_name(m.kind) << "\n";
  os << "matrix " << m.A.a << " " << m.A.b << " " << m.A.c << " " << m.A.d
     << "\n";
  std::snprintf(buf, sizeof buf, "theta %.17g\n", m.theta);
  os << buf;
  std::snprintf(buf, sizeof buf, "epsilon %.17g\n", dpo.base.epsilon);
  os << buf;
  for (size_t i = 0; i < dpo.base.leaves.size(); ++i) {
    os << leaf_to_string(dpo.base.leaves[i]) << " "
       << (dpo.decorations[i].sign > 0 ? '+' : '-') << "\n";
  }
  return os.str();
}

DecoratedPseudoOrbit orbit_from_text(const std::string& text,
                                     ModelSystem* model_out) {
  std::istringstream is(text);
  std::string line;
  ModelKind kind = ModelKind::Pillowcase;
  Mat2 A;
  double theta = 0.0, epsilon = 0.0;
  bool saw_model = false, saw_matrix = false, saw_eps = false;
  std::vector<CenterLeaf> leaves;
  std::vector<LiftDecoration> decs;

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "model") {
      std::string name;
      ls >> name;
      kind = model_from_name(name);
      saw_model = true;
    } else if (head == "matrix") {
      if (!(ls >> A.a >> A.b >> A.c >> A.d))
        throw Error(Err::BadInput, "matrix line needs four integers");
      saw_matrix = true;
    } else if (head == "theta") {
      ls >> theta;
    } else if (head == "epsilon") {
      if (!(ls >> epsilon))
        throw Error(Err::BadInput, "epsilon line needs a value");
      saw_eps = true;
    } else {
      double x = 0, y = 0;
      char comma = 0, sign = 0;
      std::istringstream ps(line);
      if (!(ps >> x >> comma >> y >> sign) || comma != ',' ||
          (sign != '+' && sign != '-'))
        throw Error(Err::BadInput, "orbit line must be 'x,y +|-'");
      leaves.push_back({{x, y}});
      decs.push_back({sign == '+' ? 1 : -1});
    }
  }
  if (!saw_model || !saw_matrix || !saw_eps)
    throw Error(Err::BadInput, "orbit text missing model, matrix or epsilon");
  ModelSystem m = make_model(kind, A, theta);
  for (auto& L : leaves) L = make_leaf(m, L.base);
  if (model_out) *model_out = m;
  return decorate(m, pseudo_orbit_from(m, std::move(leaves), epsilon),
                  std::move(decs));
}

std::string trace_to_csv(const ShadowTrace& t) {
  std::ostringstream os;
  os << "step,dist,correction,bound\n";
  char buf[128];
  for (size_t i = 0; i < t.per_step_distance.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g\n", i,
                  t.per_step_distance[i], t.corrections[i], t.bound);
    os << buf;
  }
  return os.str();
}

} // namespace cshadow
