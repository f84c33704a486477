#include "centershadow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "centershadow/batch.hpp"
#include "centershadow/product_structure.hpp"
#include "centershadow/rng.hpp"

namespace cshadow {

using nlohmann::json;

namespace {

// Reals are emitted as decimal strings so verdict files are byte-stable
// golden artifacts; integers stay native.
std::string dstr(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double dnum(const json& v) {
  if (v.is_string()) return std::stod(v.get<std::string>());
  return v.get<double>();
}

json pointj(T2Point p) { return json{{"x", dstr(p.x)}, {"y", dstr(p.y)}}; }

T2Point pointv(const json& j) {
  return {dnum(j.at("x")), dnum(j.at("y"))};
}

json base_params(const ModelSystem& m) {
  json p;
  p["model"] = model_name(m.kind);
  p["matrix"] = {m.A.a, m.A.b, m.A.c, m.A.d};
  p["theta"] = dstr(m.theta);
  p["mu"] = dstr(m.K.mu);
  p["delta0"] = dstr(m.K.delta0);
  p["delta1"] = dstr(m.K.delta1);
  return p;
}

ModelSystem model_of(const json& p) {
  const auto& mj = p.at("matrix");
  Mat2 A{mj.at(0).get<long long>(), mj.at(1).get<long long>(),
         mj.at(2).get<long long>(), mj.at(3).get<long long>()};
  Splitting S = eigen_split(A);
  Constants K = derive_constants(S, dnum(p.at("mu")), dnum(p.at("delta0")),
                                 dnum(p.at("delta1")));
  return make_model(model_from_name(p.at("model").get<std::string>()), A,
                    dnum(p.at("theta")), K);
}

Verdict pack(const std::string& name, bool passed, const json& params,
             const json& witness) {
  return {name, passed, params.dump(), witness.dump()};
}

// Distinct per-trial streams; trials stay independent of execution order.
std::uint64_t mix_seed(std::uint64_t s, std::uint64_t i) {
  std::uint64_t z = s + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.range(std::log(lo), std::log(hi)));
}

double circle_dist(double a, double b) {
  double d = wrap01(a - b);
  return std::min(d, 1.0 - d);
}

bool same_point(T2Point a, T2Point b) { return a.x == b.x && a.y == b.y; }

} // namespace

// ---- verdict plumbing ----

std::string verdict_to_json(const Verdict& v) {
  json j;
  j["name"] = v.name;
  j["passed"] = v.passed;
  j["parameters"] = json::parse(v.parameters.empty() ? "{}" : v.parameters);
  j["witness"] = json::parse(v.witness.empty() ? "{}" : v.witness);
  return j.dump(2) + "\n";
}

Verdict verdict_from_json(const std::string& text) {
  json j = json::parse(text);
  Verdict v;
  v.name = j.at("name").get<std::string>();
  v.passed = j.at("passed").get<bool>();
  v.parameters = j.at("parameters").dump();
  v.witness = j.at("witness").dump();
  return v;
}

// ---- expansivity ----

namespace {

Verdict expansivity_trivial(const ModelSystem& m, int trials, int horizon,
                            std::uint64_t seed, bool parallel) {
  const Splitting& S = m.S;
  const double mu = m.K.mu;
  const double lam_sig = S.eigen_sign * S.lambda_u;
  const double als_sig = S.eigen_sign * S.lambda_s;
  const double loglam = std::log(S.lambda_u);
  // Crossing a float-rounded mu on the exact predicted step must count.
  const double sep_line = mu * (1.0 - 1e-9);

  struct SepRow {
    double cu = 0, cs = 0, d0 = 0;
    int n_pred = 0, n_sep = -1;
    bool ok = false;
  };
  std::vector<SepRow> sep(trials);
  run_batch(trials, parallel, [&](int i) {
    Rng rng(mix_seed(seed, i));
    SepRow r;
    r.cu = (rng.unit() < 0.5 ? -1 : 1) * log_uniform(rng, 1e-6, 0.3 * mu);
    r.cs = (rng.unit() < 0.5 ? -1 : 1) * log_uniform(rng, 1e-6, 0.3 * mu);
    // The unstable coordinate alone drives separation; its coefficient is
    // bounded below by distance / C, giving the step prediction.
    r.d0 = std::abs(r.cu) / S.C;
    r.n_pred =
        r.d0 >= mu ? 0 : int(std::ceil(std::log(mu / r.d0) / loglam));
    double cu_k = r.cu, cs_k = r.cs;
    for (int k = 0; k <= r.n_pred + 4; ++k) {
      if (norm(cs_k * S.e_s + cu_k * S.e_u) >= sep_line) {
        r.n_sep = k;
        break;
      }
      cu_k *= lam_sig;
      cs_k *= als_sig;
    }
    r.ok = r.n_sep >= 0 && r.n_sep <= r.n_pred;
    sep[i] = r;
  });

  // Converse direction: a pair kept mu-close across the whole window must
  // be componentwise tiny, hence 2 C mu alpha^h close as leaves.
  const double comp_cap = S.C * mu * std::pow(S.alpha, horizon);
  struct StayRow {
    double cu = 0, cs = 0, stay_max = 0, dist = 0;
    bool ok = false;
  };
  std::vector<StayRow> stay(trials + 1);
  run_batch(trials + 1, parallel, [&](int i) {
    StayRow r;
    if (i > 0) { // row 0 keeps the same-leaf pair, distance zero forever
      Rng rng(mix_seed(seed ^ 0x5ca1ab1eULL, i));
      double scale = 0.45 * mu * std::pow(S.alpha, horizon);
      r.cu = rng.range(-scale, scale);
      r.cs = rng.range(-scale, scale);
    }
    double cu_k = r.cu, cs_k = r.cs;
    for (int k = 0; k <= horizon; ++k) { // forward leg
      r.stay_max = std::max(r.stay_max, norm(cs_k * S.e_s + cu_k * S.e_u));
      cu_k *= lam_sig;
      cs_k *= als_sig;
    }
    cu_k = r.cu;
    cs_k = r.cs;
    for (int k = 0; k <= horizon; ++k) { // backward leg
      r.stay_max = std::max(r.stay_max, norm(cs_k * S.e_s + cu_k * S.e_u));
      cu_k /= lam_sig;
      cs_k /= als_sig;
    }
    r.dist = norm(r.cs * S.e_s + r.cu * S.e_u);
    r.ok = r.stay_max <= mu * (1.0 + 1e-12) &&
           std::abs(r.cu) <= comp_cap * (1.0 + 1e-9) &&
           std::abs(r.cs) <= comp_cap * (1.0 + 1e-9) &&
           r.dist <= 2.0 * comp_cap * (1.0 + 1e-9);
    stay[i] = r;
  });

  bool passed = true;
  json sep_rows = json::array(), stay_rows = json::array();
  for (const auto& r : sep) {
    passed = passed && r.ok;
    sep_rows.push_back(json{{"cu", dstr(r.cu)},
                            {"cs", dstr(r.cs)},
                            {"d0", dstr(r.d0)},
                            {"n_pred", r.n_pred},
                            {"n_sep", r.n_sep},
                            {"ok", r.ok}});
  }
  for (const auto& r : stay) {
    passed = passed && r.ok;
    stay_rows.push_back(json{{"cu", dstr(r.cu)},
                             {"cs", dstr(r.cs)},
                             {"stay_max", dstr(r.stay_max)},
                             {"leaf_dist", dstr(r.dist)},
                             {"ok", r.ok}});
  }

  json P = base_params(m);
  P["trials"] = trials;
  P["horizon"] = horizon;
  P["seed"] = seed;
  json W;
  W["separation"] = std::move(sep_rows);
  W["component_cap"] = dstr(comp_cap);
  W["close_pairs"] = std::move(stay_rows);
  return pack("expansivity", passed, P, W);
}

} // namespace

Verdict expansivity_probe(const ModelSystem& m, int trials, int horizon,
                          std::uint64_t seed, bool parallel) {
  if (trials < 1 || horizon < 1)
    throw Error(Err::BadInput, "trials and horizon must be positive");
  if (m.kind == ModelKind::TrivialHolonomy)
    return expansivity_trivial(m, trials, horizon, seed, parallel);

  // The quotient is not expansive; the verdict carries the certified
  // counterexample pair instead of a separation table.
  Verdict inner = homoclinic_pair(m, 0.05, horizon);
  json P = base_params(m);
  P["trials"] = trials;
  P["horizon"] = horizon;
  P["seed"] = seed;
  json W;
  W["non_expansive_pair"] = json::parse(verdict_to_json(inner));
  return pack("expansivity", inner.passed, P, W);
}

// ---- homoclinic pair ----

Verdict homoclinic_pair(const ModelSystem& m, double eps, int horizon) {
  if (m.kind != ModelKind::Pillowcase)
    throw Error(Err::WrongModel, "homoclinic pairs need the folded quotient");
  if (!(eps > 0) || !(eps < m.K.delta0))
    throw Error(Err::BadInput, "eps must lie in (0, delta0)");
  if (horizon < 1) throw Error(Err::BadInput, "horizon must be positive");

  const Splitting& S = m.S;
  const double max_norm = 0.495 * eps / S.C;

  // Smallest-denominator rational point near the origin whose reflection
  // displacement has usable components in both eigendirections.
  LatticePoint X;
  bool found = false;
  for (long long cap : {64LL, 128LL, 256LL}) {
    for (long long den = 2; den <= cap && !found; ++den) {
      LatticePoint best;
      double best_norm = 0;
      for (long long nx = 0; nx < den; ++nx) {
        for (long long ny = 0; ny < den; ++ny) {
          if (nx == 0 && ny == 0) continue;
          if (std::gcd(std::gcd(nx, ny), den) != 1) continue; // seen earlier
          LatticePoint q{nx, ny, den};
          if (lattice_equal(q, lattice_negate(q))) continue; // singular seed
          T2Point p = from_lattice(q);
          double nrm = torus_distance(p, {0, 0});
          if (nrm > max_norm) continue;
          SplitCoords sc = split_coords(S, shortest_displacement(p, negate(p)));
          if (std::abs(sc.c_s) < 1e-6 || std::abs(sc.c_u) < 1e-6) continue;
          if (std::abs(sc.c_s) > 0.99 * eps || std::abs(sc.c_u) > 0.99 * eps)
            continue;
          if (!found || nrm < best_norm) {
            best = q;
            best_norm = nrm;
            found = true;
          }
        }
      }
      if (found) X = best;
    }
    if (found) break;
  }
  if (!found)
    throw Error(Err::NoPeriodicLeafFound,
                "no admissible rational seed up to denominator 256; the "
                "search radius grows with eps");

  const T2Point x = from_lattice(X);
  const T2Vector refl = shortest_displacement(x, negate(x));
  const SplitCoords sc = split_coords(S, refl);
  const T2Point y = translate(negate(x), (-sc.c_s) * S.e_s);
  const CenterLeaf W = make_leaf(m, x);
  const CenterLeaf W1 = make_leaf(m, y);

  // Exact period of the base point, then an engine-certified closure of the
  // zero-epsilon cycle.
  long long p = lattice_period(m.A, X, 1000000);
  bool period_ok = p > 0;
  bool cycle_exact = false;
  if (period_ok) {
    long long chain = p / std::gcd(p, (long long)m.K.N);
    std::vector<CenterLeaf> cyc;
    LatticePoint cur = X;
    for (long long k = 0; k <= chain; ++k) {
      cyc.push_back(make_leaf(m, from_lattice(cur)));
      for (int s = 0; s < m.K.N; ++s) cur = lattice_apply(m.A, cur);
    }
    PeriodicShadow ps = shadow_periodic(
        m, auto_decorate(m, pseudo_orbit_from(m, std::move(cyc), 0.0)),
        int(chain));
    cycle_exact = ps.exact && leaf_equal(m, ps.leaf, W);
  }

  const double lam_sig = S.eigen_sign * S.lambda_u;
  const double als_sig = S.eigen_sign * S.lambda_s;
  json table = json::array();
  double max_d = 0;

  LatticePoint Xf = X;
  double s_coef = -sc.c_s; // y sits at this stable offset from -x
  for (int n = 0; n <= horizon; ++n) {
    T2Point pn = from_lattice(Xf);
    T2Point yn = translate(negate(pn), s_coef * S.e_s);
    double d = leaf_distance(m, make_leaf(m, yn), make_leaf(m, pn));
    max_d = std::max(max_d, d);
    table.push_back(json{{"n", n}, {"d", dstr(d)}});
    Xf = lattice_apply(m.A, Xf);
    s_coef *= als_sig;
  }
  Mat2 Ai = inverse(m.A);
  LatticePoint Xb = X;
  double u_coef = sc.c_u; // y sits at this unstable offset from x
  for (int n = 1; n <= horizon; ++n) {
    Xb = lattice_apply(Ai, Xb);
    u_coef /= lam_sig;
    T2Point pn = from_lattice(Xb);
    T2Point yn = translate(pn, u_coef * S.e_u);
    double d = leaf_distance(m, make_leaf(m, yn), make_leaf(m, pn));
    max_d = std::max(max_d, d);
    table.push_back(json{{"n", -n}, {"d", dstr(d)}});
  }

  // The closed forms must agree with direct iteration while the float orbit
  // is still trustworthy.
  double cross_err = 0;
  {
    T2Point yf = y, xf = x;
    for (int n = 0; n <= std::min(horizon, 12); ++n) {
      double d = leaf_distance(m, make_leaf(m, yf), make_leaf(m, xf));
      cross_err = std::max(cross_err, std::abs(d - dnum(table[n].at("d"))));
      yf = apply(m.A, yf);
      xf = apply(m.A, xf);
    }
    T2Point yb = y, xb = x;
    for (int n = 1; n <= std::min(horizon, 12); ++n) {
      yb = apply(Ai, yb);
      xb = apply(Ai, xb);
      double d = leaf_distance(m, make_leaf(m, yb), make_leaf(m, xb));
      cross_err =
          std::max(cross_err, std::abs(d - dnum(table[horizon + n].at("d"))));
    }
  }

  double gap = leaf_distance(m, W, W1);
  double sing_d = 0.7;
  for (const auto& sl : singular_leaves(m))
    sing_d = std::min(sing_d, leaf_distance(m, W, sl));

  bool passed = period_ok && cycle_exact && max_d <= eps && gap > 1e-9 &&
                sing_d <= eps && cross_err <= 1e-9;

  json P = base_params(m);
  P["eps"] = dstr(eps);
  P["horizon"] = horizon;
  json Wit;
  Wit["seed_point"] = json{{"num_x", X.num_x}, {"num_y", X.num_y},
                           {"den", X.den}};
  Wit["period"] = p;
  Wit["cycle_exact"] = cycle_exact;
  Wit["c_s"] = dstr(sc.c_s);
  Wit["c_u"] = dstr(sc.c_u);
  Wit["leaf_w"] = pointj(W.base);
  Wit["leaf_w1"] = pointj(W1.base);
  Wit["pair_gap"] = dstr(gap);
  Wit["singular_distance"] = dstr(sing_d);
  Wit["max_distance"] = dstr(max_d);
  Wit["crosscheck_error"] = dstr(cross_err);
  Wit["distances"] = std::move(table);
  return pack("homoclinic", passed, P, Wit);
}

// ---- asymptotic but not stable-related ----

namespace {

int profile_height(int m, int B) {
  static const int prof[5] = {3, 5, 6, 8, 11};
  return prof[std::min({m, B - 1 - m, 4})];
}

} // namespace

Verdict asymptotic_non_stable(const ModelSystem& m,
                              const std::vector<int>& mu_seq,
                              const std::vector<int>& nu_seq, double eta) {
  if (m.kind != ModelKind::Pillowcase)
    throw Error(Err::WrongModel, "sheet sequences need the folded quotient");
  const int B = int(mu_seq.size());
  if (nu_seq.size() != mu_seq.size() || B < 4)
    throw Error(Err::MalformedSequence,
                "need two equal-length sign sequences of at least 4 blocks");
  for (int s : mu_seq)
    if (s != 1 && s != -1)
      throw Error(Err::MalformedSequence, "sequence entries must be +1 or -1");
  for (int s : nu_seq)
    if (s != 1 && s != -1)
      throw Error(Err::MalformedSequence, "sequence entries must be +1 or -1");
  // Both halves of the window need a matching block and a mismatched one,
  // otherwise one time direction carries no information.
  for (int half = 0; half < 2; ++half) {
    bool agree = false, differ = false;
    int lo = half == 0 ? 0 : B / 2;
    int hi = half == 0 ? (B + 1) / 2 : B;
    for (int k = lo; k < hi; ++k)
      (mu_seq[k] == nu_seq[k] ? agree : differ) = true;
    if (!agree || !differ)
      throw Error(Err::MalformedSequence,
                  "each half must contain a match and a mismatch");
  }

  const Splitting& S = m.S;
  const long long q = 256;
  const Mat2 Bm = mat_pow(m.A, m.K.N);
  const double lam_sig = std::pow(S.lambda_u, m.K.N) *
                         (S.eigen_sign < 0 && m.K.N % 2 ? -1.0 : 1.0);
  const double als_sig = std::pow(S.lambda_s, m.K.N) *
                         (S.eigen_sign < 0 && m.K.N % 2 ? -1.0 : 1.0);
  const double alphaN = std::pow(S.lambda_s, m.K.N);

  // Exact cycles of the block base points, concatenated; all arithmetic on
  // the /256 lattice stays in dyadic floats, so in-block steps are exact.
  std::vector<long long> heights(B), periods(B), starts(B + 1, 0);
  std::vector<std::vector<LatticePoint>> cycles(B);
  for (int b = 0; b < B; ++b) {
    heights[b] = profile_height(b, B);
    LatticePoint p0{heights[b], 0, q};
    long long T = lattice_period(Bm, p0, 1000000);
    if (T <= 0) throw Error(Err::BadInput, "block period exceeded the cap");
    periods[b] = T;
    cycles[b].reserve(T);
    LatticePoint cur = p0;
    for (long long k = 0; k < T; ++k) {
      cycles[b].push_back(cur);
      cur = lattice_apply(Bm, cur);
    }
    starts[b + 1] = starts[b] + T;
  }
  long long n = starts[B];
  int pad = (n % 2 == 0) ? 1 : 0; // two-sided windows are odd-length
  n += pad;

  std::vector<LatticePoint> lat(n);
  std::vector<int> block_of(n);
  for (int b = 0; b < B; ++b)
    for (long long k = 0; k < periods[b]; ++k) {
      lat[starts[b] + k] = cycles[b][k];
      block_of[starts[b] + k] = b;
    }
  if (pad) {
    lat[n - 1] = cycles[B - 1][0];
    block_of[n - 1] = B - 1;
  }

  std::vector<CenterLeaf> leaves(n);
  std::vector<int> base_sign(n); // +1 when the orbit point is the canonical rep
  for (long long t = 0; t < n; ++t) {
    T2Point o = from_lattice(lat[t]);
    leaves[t] = make_leaf(m, o);
    base_sign[t] = same_point(leaves[t].base, o) ? 1 : -1;
  }
  double eps_leaf = 0;
  for (long long t = 0; t + 1 < n; ++t)
    eps_leaf = std::max(eps_leaf, modified_leaf_distance(
                                      m, quotient_map(m, leaves[t], m.K.N),
                                      leaves[t + 1]));

  PseudoOrbit po = pseudo_orbit_from(m, leaves, eps_leaf);

  // Relative decorations realizing the chosen geometric sheet per block:
  // the anchor flag selects block 0's sheet, and a -1 at a block start
  // switches sheets exactly when consecutive blocks disagree. Inside a
  // block the stepped chain already continues its own sheet.
  auto decorate_by = [&](const std::vector<int>& seq) {
    std::vector<LiftDecoration> d(n);
    d[0].sign = seq[block_of[0]] * base_sign[0];
    for (long long t = 1; t < n; ++t)
      d[t].sign = seq[block_of[t]] * seq[block_of[t - 1]];
    return decorate(m, po, std::move(d));
  };
  DecoratedPseudoOrbit dmu = decorate_by(mu_seq);
  DecoratedPseudoOrbit dnu = decorate_by(nu_seq);

  ShadowTrace tmu = shadow_bi_infinite(m, dmu, eta);
  ShadowTrace tnu = shadow_bi_infinite(m, dnu, eta);

  // Independent pass: raw jumps, then the two contracting recursions, kept
  // apart from the engine so the origin lift can be cross-checked.
  struct Side {
    std::vector<T2Point> w, y;
    std::vector<double> jump;
    double eps_dec = 0;
  };
  auto resolve = [&](const DecoratedPseudoOrbit& dpo) {
    Side sd;
    sd.w.resize(n);
    sd.y.resize(n);
    sd.jump.assign(n, 0.0);
    sd.w[0] =
        lift_with_sign(m, dpo.base.leaves[0], dpo.decorations[0].sign).rep;
    for (long long t = 1; t < n; ++t) {
      T2Point img = apply(Bm, sd.w[t - 1]);
      T2Point plus = dpo.base.leaves[t].base;
      T2Point minus = negate(plus);
      bool minus_near = torus_distance(img, minus) < torus_distance(img, plus);
      T2Point near = minus_near ? minus : plus;
      T2Point far = minus_near ? plus : minus;
      sd.w[t] = dpo.decorations[t].sign > 0 ? near : far;
    }
    std::vector<double> cs(n - 1), cu(n - 1);
    for (long long t = 0; t + 1 < n; ++t) {
      T2Point img = apply(Bm, sd.w[t]);
      T2Vector r = shortest_displacement(img, sd.w[t + 1]);
      sd.jump[t + 1] = norm(r);
      sd.eps_dec = std::max(sd.eps_dec, norm(r));
      SplitCoords c = split_coords(S, r);
      cs[t] = c.c_s;
      cu[t] = c.c_u;
    }
    std::vector<double> sig(n, 0.0), ups(n, 0.0);
    for (long long t = 0; t + 1 < n; ++t) sig[t + 1] = als_sig * sig[t] - cs[t];
    for (long long t = n - 1; t-- > 0;) ups[t] = (ups[t + 1] + cu[t]) / lam_sig;
    for (long long t = 0; t < n; ++t)
      sd.y[t] = translate(sd.w[t], sig[t] * S.e_s + ups[t] * S.e_u);
    return sd;
  };
  Side smu = resolve(dmu);
  Side snu = resolve(dnu);

  const long long origin = (n - 1) / 2;
  double origin_err =
      std::max(torus_distance(smu.y[origin], tmu.shadow_lift.rep),
               torus_distance(snu.y[origin], tnu.shadow_lift.rep));

  // Boundary jump sizes feeding the decay envelope.
  std::vector<double> jmax(B, 0.0);
  for (int b = 1; b < B; ++b)
    jmax[b] = std::max(smu.jump[starts[b]], snu.jump[starts[b]]);

  double envelope_margin = -1.0; // max of quot - envelope, want <= ~0
  double edge_max = 0.0;
  std::vector<double> floor1(B, 1e9), floor2(B, 1e9), quot_max(B, 0.0);
  const long long edge0 = periods[0] / 2;
  const long long edge1 = n - 1 - periods[B - 1] / 2;
  for (long long t = 0; t < n; ++t) {
    double term1 = torus_distance(smu.y[t], snu.y[t]);
    double term2 = torus_distance(smu.y[t], negate(snu.y[t]));
    double quot = std::min(term1, term2);
    double env = 0;
    for (int b = 1; b < B; ++b)
      env += std::pow(alphaN, double(std::llabs(t - starts[b]))) * jmax[b];
    env *= 2.0 * S.C;
    envelope_margin = std::max(envelope_margin, quot - env);
    if (t < edge0 || t > edge1) edge_max = std::max(edge_max, quot);
    int b = block_of[t];
    floor1[b] = std::min(floor1[b], term1);
    floor2[b] = std::min(floor2[b], term2);
    quot_max[b] = std::max(quot_max[b], quot);
  }

  bool floors_ok = true;
  json blocks = json::array();
  for (int b = 0; b < B; ++b) {
    bool agree = mu_seq[b] == nu_seq[b];
    double fl = agree ? floor2[b] : floor1[b];
    if (fl <= 1e-3) floors_ok = false;
    blocks.push_back(json{{"block", b},
                          {"height_num", heights[b]},
                          {"period", periods[b]},
                          {"start", starts[b]},
                          {"agree", agree},
                          {"lift_floor", dstr(floor1[b])},
                          {"folded_floor", dstr(floor2[b])},
                          {"quot_max", dstr(quot_max[b])}});
  }

  json qb = json::array();
  for (int b = 1; b < B; ++b) {
    long long t = starts[b];
    qb.push_back(json{
        {"t", t},
        {"quot", dstr(std::min(torus_distance(smu.y[t], snu.y[t]),
                               torus_distance(smu.y[t], negate(snu.y[t]))))},
        {"jump_max", dstr(jmax[b])}});
  }

  bool passed = floors_ok && envelope_margin <= 1e-12 && edge_max <= 1e-9 &&
                origin_err <= 1e-10;

  json P = base_params(m);
  P["mu_seq"] = mu_seq;
  P["nu_seq"] = nu_seq;
  P["eta"] = dstr(eta);
  json Wit;
  Wit["den"] = q;
  Wit["length"] = n;
  Wit["epsilon_leaf"] = dstr(eps_leaf);
  Wit["eps_dec"] = json{{"mu", dstr(smu.eps_dec)}, {"nu", dstr(snu.eps_dec)}};
  Wit["blocks"] = std::move(blocks);
  Wit["boundaries"] = std::move(qb);
  Wit["envelope_margin"] = dstr(envelope_margin);
  Wit["edge_max"] = dstr(edge_max);
  Wit["origin_crosscheck"] = dstr(origin_err);
  return pack("asymptotic", passed, P, Wit);
}

// ---- stable-arc intersections ----

int stable_arc_hits(const ModelSystem& m, T2Point base, double arc_len,
                    const CenterLeaf& leaf, double tol) {
  if (!(arc_len > 0)) throw Error(Err::BadInput, "arc length must be positive");
  const T2Vector es = m.S.e_s;
  const double half = arc_len / 2;
  const bool dx_major = std::abs(es.dx) >= std::abs(es.dy);
  const double major = dx_major ? es.dx : es.dy;

  std::vector<double> ts;
  for (const auto& lift : lifts_of(m, leaf)) {
    double ox = lift.rep.x - base.x;
    double oy = lift.rep.y - base.y;
    double omaj = dx_major ? ox : oy;
    long long lo = llround(-omaj - half * std::abs(major)) - 2;
    long long hi = llround(-omaj + half * std::abs(major)) + 2;
    for (long long mm = lo; mm <= hi; ++mm) {
      double t = (omaj + double(mm)) / major;
      double minor_t = dx_major ? t * es.dy - oy : t * es.dx - ox;
      long long nn0 = llround(minor_t);
      for (long long nn = nn0 - 1; nn <= nn0 + 1; ++nn) {
        T2Vector u = dx_major
                         ? T2Vector{ox + double(mm), oy + double(nn)}
                         : T2Vector{ox + double(nn), oy + double(mm)};
        double tt = dot(u, es);
        double rho = std::abs(cross(u, es));
        if (rho <= tol * std::max(1.0, std::abs(tt)) &&
            std::abs(tt) <= half + tol)
          ts.push_back(tt);
      }
    }
  }
  std::sort(ts.begin(), ts.end());
  int count = 0;
  for (size_t i = 0; i < ts.size(); ++i)
    if (i == 0 || ts[i] - ts[i - 1] > 1e-7) ++count;
  return count;
}

Verdict intersection_count(const ModelSystem& m, int trials, double stable_arc,
                           std::uint64_t seed, bool parallel) {
  if (trials < 1) throw Error(Err::BadInput, "trials must be positive");
  if (!(stable_arc >= m.K.mu))
    throw Error(Err::BadInput, "stable_arc must be at least mu");
  const int kmax = std::max(0, int(std::floor(std::log2(stable_arc / m.K.mu) +
                                              1e-9)));

  struct Row {
    T2Point base;
    double t0 = 0, arc = 0;
    int on1 = 0, on2 = 0, off1 = 0, off2 = 0;
    T2Point off_leaf;
    bool ok = false;
  };
  std::vector<Row> rows(trials);
  run_batch(trials, parallel, [&](int i) {
    Rng rng(mix_seed(seed, i));
    Row r;
    r.base = rng.point();
    r.arc = m.K.mu * std::pow(2.0, double(i % (kmax + 1)));
    r.t0 = rng.range(-0.45, 0.45) * r.arc;
    CenterLeaf on = make_leaf(m, translate(r.base, r.t0 * m.S.e_s));
    CenterLeaf off = make_leaf(m, rng.point());
    r.off_leaf = off.base;
    r.on1 = stable_arc_hits(m, r.base, r.arc, on);
    r.on2 = stable_arc_hits(m, r.base, 2 * r.arc, on);
    r.off1 = stable_arc_hits(m, r.base, r.arc, off);
    r.off2 = stable_arc_hits(m, r.base, 2 * r.arc, off);
    r.ok = r.on1 == 1 && r.on2 == 1 && r.off1 <= 1 && r.off2 <= 1;
    rows[i] = r;
  });

  bool passed = true;
  int max_count = 0;
  json jrows = json::array();
  for (const auto& r : rows) {
    passed = passed && r.ok;
    max_count = std::max({max_count, r.on1, r.on2, r.off1, r.off2});
    jrows.push_back(json{{"base", pointj(r.base)},
                         {"t0", dstr(r.t0)},
                         {"arc", dstr(r.arc)},
                         {"on_arc", json{r.on1, r.on2}},
                         {"off_leaf", pointj(r.off_leaf)},
                         {"off_arc", json{r.off1, r.off2}},
                         {"ok", r.ok}});
  }
  json P = base_params(m);
  P["trials"] = trials;
  P["stable_arc"] = dstr(stable_arc);
  P["seed"] = seed;
  json W;
  W["max_count"] = max_count;
  W["rows"] = std::move(jrows);
  return pack("intersection", passed, P, W);
}

// ---- plaque expansivity ----

Verdict plaque_expansivity_probe(const ModelSystem& m, int trials, double eta,
                                 int horizon, std::uint64_t seed,
                                 bool parallel) {
  if (trials < 1 || horizon < 1)
    throw Error(Err::BadInput, "trials and horizon must be positive");
  if (!(eta > 0) || eta > m.K.mu)
    throw Error(Err::BadInput, "eta must lie in (0, mu]");
  const Splitting& S = m.S;
  const double als_sig = S.eigen_sign * S.lambda_s;

  struct Row {
    double max_cu = 0, max_pair = 0, max_zjump = 0;
    bool ok = false;
  };
  std::vector<Row> rows(trials);
  run_batch(trials, parallel, [&](int i) {
    Rng rng(mix_seed(seed, i));
    Row r;
    T2Point x = rng.point();
    double fx = rng.unit();
    double s = rng.range(-0.5, 0.5) * eta;     // stable offset of the partner
    double foff = rng.range(-0.5, 0.5) * eta;  // fiber offset, constant
    T2Point z_prev{};
    bool have_prev = false;
    for (int k = 0; k <= horizon; ++k) {
      T2Point y = translate(x, s * S.e_s);
      double fy = wrap01(fx + foff);
      r.max_pair = std::max(
          r.max_pair, std::max(torus_distance(x, y), circle_dist(fx, fy)));
      ProductPoint z = local_product(m, LeafLift{x}, LeafLift{y});
      r.max_cu = std::max(r.max_cu, z.u_component);
      if (have_prev)
        r.max_zjump = std::max(
            r.max_zjump, torus_distance(apply(m.A, z_prev), z.point));
      z_prev = z.point;
      have_prev = true;
      // Step both pseudo-orbits: shared base kick, plaque-respecting fiber
      // kick, and a stable-direction kick for the partner only.
      T2Vector kick = rng.disk(0.3 * eta);
      x = translate(apply(m.A, x), kick);
      fx = wrap01(fx + m.theta + rng.range(-0.3, 0.3) * eta);
      s = als_sig * s + rng.range(-0.3, 0.3) * eta;
    }
    r.ok = r.max_cu <= 1e-10 && r.max_pair <= eta &&
           r.max_zjump <= eta * (1.0 + 1e-6);
    rows[i] = r;
  });

  bool passed = true;
  double worst_cu = 0, worst_pair = 0, worst_zjump = 0;
  json jrows = json::array();
  for (const auto& r : rows) {
    passed = passed && r.ok;
    worst_cu = std::max(worst_cu, r.max_cu);
    worst_pair = std::max(worst_pair, r.max_pair);
    worst_zjump = std::max(worst_zjump, r.max_zjump);
    jrows.push_back(json{{"max_cu", dstr(r.max_cu)},
                         {"max_pair", dstr(r.max_pair)},
                         {"max_zjump", dstr(r.max_zjump)},
                         {"ok", r.ok}});
  }
  json P = base_params(m);
  P["trials"] = trials;
  P["eta"] = dstr(eta);
  P["horizon"] = horizon;
  P["seed"] = seed;
  json W;
  W["worst_cu"] = dstr(worst_cu);
  W["worst_pair_distance"] = dstr(worst_pair);
  W["worst_projected_jump"] = dstr(worst_zjump);
  W["rows"] = std::move(jrows);
  return pack("plaque", passed, P, W);
}

// ---- center-stable growth ----

Verdict cs_growth_probe(const ModelSystem& m, T2Point start, int steps) {
  if (steps < 1 || steps > 60)
    throw Error(Err::BadInput, "steps must lie in [1, 60]");
  const Splitting& S = m.S;
  const double mu = m.K.mu;
  const T2Vector es = S.e_s;
  const bool dx_major = std::abs(es.dx) >= std::abs(es.dy);
  const double major = dx_major ? es.dx : es.dy;

  // Transverse clearance of the stable ray of length L from its own integer
  // translates; closure of the cs-leaf would need a near-zero value. The
  // result does not depend on the anchor point, which is recorded only.
  auto clearance = [&](double L) {
    double best = 1e9;
    long long span = llround(L * std::abs(major)) + 2;
    for (long long mm = -span; mm <= span; ++mm) {
      double t = double(mm) / major;
      double minor_t = dx_major ? t * es.dy : t * es.dx;
      long long nn0 = llround(minor_t);
      for (long long nn = nn0 - 1; nn <= nn0 + 1; ++nn) {
        if (mm == 0 && nn == 0) continue;
        T2Vector u = dx_major ? T2Vector{double(mm), double(nn)}
                              : T2Vector{double(nn), double(mm)};
        double tt = dot(u, es);
        if (tt <= 1e-12 || tt > L + 1e-9) continue;
        best = std::min(best, std::abs(cross(u, es)));
      }
    }
    return best;
  };

  json clear_rows = json::array();
  bool no_closure = true;
  for (int k = 0; k <= 10; ++k) {
    double L = mu * std::pow(2.0, double(k));
    double c = clearance(L);
    if (c <= 1e-9) no_closure = false;
    clear_rows.push_back(json{{"arc", dstr(L)}, {"clearance", dstr(c)}});
  }

  // Exact-rate plaque growth: unstable diameters gain a lambda factor per
  // step, stable ones lose it, and backward iteration grows the stable line
  // monotonically without bound. The forward stable iterate is measured by
  // its component across the unstable direction, not by its norm: rounding
  // seeds a tiny unstable admixture that the iteration amplifies by
  // lambda^2 per step, swamping the norm near k = 14 while leaving the
  // cross component untouched.
  json growth_rows = json::array();
  double rel_err = 0;
  Mat2 Ai = inverse(m.A);
  T2Vector vu = mu * S.e_u, vs = mu * S.e_s, vb = mu * S.e_s;
  const double sin_us = std::abs(cross(S.e_u, S.e_s));
  double expect = mu;
  double prev_back = 0;
  bool monotone = true;
  for (int k = 1; k <= steps; ++k) {
    vu = apply_vec(m.A, vu);
    vs = apply_vec(m.A, vs);
    vb = apply_vec(Ai, vb);
    expect *= S.lambda_u;
    double shrink = mu * std::pow(S.lambda_s, double(k));
    double stable_part = std::abs(cross(S.e_u, vs)) / sin_us;
    rel_err = std::max(rel_err, std::abs(norm(vu) - expect) / expect);
    rel_err = std::max(rel_err, std::abs(norm(vb) - expect) / expect);
    rel_err = std::max(rel_err, std::abs(stable_part - shrink) / shrink);
    if (norm(vb) <= prev_back) monotone = false;
    prev_back = norm(vb);
    growth_rows.push_back(json{{"n", k},
                               {"unstable", dstr(norm(vu))},
                               {"stable", dstr(stable_part)},
                               {"backward_stable", dstr(norm(vb))}});
  }

  bool passed = no_closure && monotone && rel_err <= 1e-10;
  json P = base_params(m);
  P["start"] = pointj(start);
  P["steps"] = steps;
  json W;
  W["clearances"] = std::move(clear_rows);
  W["growth"] = std::move(growth_rows);
  W["rate_rel_err"] = dstr(rel_err);
  W["backward_monotone"] = monotone;
  return pack("growth", passed, P, W);
}

// ---- periodic leaf density ----

Verdict periodic_density_probe(const ModelSystem& m, int trials, double delta,
                               std::uint64_t seed, bool parallel) {
  if (trials < 1) throw Error(Err::BadInput, "trials must be positive");
  if (!(delta > 0)) throw Error(Err::BadInput, "delta must be positive");

  struct Row {
    T2Point sample;
    LatticePoint snap;
    long long period = 0;
    double dist = 0;
    bool exact = false, ok = false;
  };
  std::vector<Row> rows(trials);
  run_batch(trials, parallel, [&](int i) {
    Rng rng(mix_seed(seed, i));
    Row r;
    r.sample = rng.point();
    CenterLeaf W = make_leaf(m, r.sample);
    r.snap = to_lattice(W.base, 64);
    CenterLeaf P = make_leaf(m, from_lattice(r.snap));
    r.period = lattice_period(m.A, r.snap, 100000);
    if (r.period > 0) {
      long long chain = r.period / std::gcd(r.period, (long long)m.K.N);
      std::vector<CenterLeaf> cyc;
      LatticePoint cur = r.snap;
      for (long long k = 0; k <= chain; ++k) {
        cyc.push_back(make_leaf(m, from_lattice(cur)));
        for (int s = 0; s < m.K.N; ++s) cur = lattice_apply(m.A, cur);
      }
      PeriodicShadow ps = shadow_periodic(
          m, auto_decorate(m, pseudo_orbit_from(m, std::move(cyc), 0.0)),
          int(chain));
      r.exact = ps.exact && leaf_equal(m, ps.leaf, P, 1e-15);
      r.dist = leaf_distance(m, W, ps.leaf);
      r.ok = r.exact && ps.den <= 64 && r.dist < delta;
    }
    rows[i] = r;
  });

  bool passed = true;
  long long max_period = 0;
  double max_dist = 0;
  json jrows = json::array();
  for (const auto& r : rows) {
    passed = passed && r.ok;
    max_period = std::max(max_period, r.period);
    max_dist = std::max(max_dist, r.dist);
    jrows.push_back(json{{"sample", pointj(r.sample)},
                         {"snap", json{{"num_x", r.snap.num_x},
                                       {"num_y", r.snap.num_y},
                                       {"den", r.snap.den}}},
                         {"period", r.period},
                         {"distance", dstr(r.dist)},
                         {"exact", r.exact},
                         {"ok", r.ok}});
  }
  json P = base_params(m);
  P["trials"] = trials;
  P["delta"] = dstr(delta);
  P["seed"] = seed;
  json W;
  W["max_period"] = max_period;
  W["max_distance"] = dstr(max_dist);
  W["rows"] = std::move(jrows);
  return pack("periodic-density", passed, P, W);
}

// ---- re-verification ----

namespace {

Verdict rerun(const std::string& name, const json& P) {
  ModelSystem m = model_of(P);
  if (name == "expansivity")
    return expansivity_probe(m, P.at("trials"), P.at("horizon"),
                             P.at("seed").get<std::uint64_t>(), false);
  if (name == "homoclinic")
    return homoclinic_pair(m, dnum(P.at("eps")), P.at("horizon"));
  if (name == "asymptotic")
    return asymptotic_non_stable(m, P.at("mu_seq").get<std::vector<int>>(),
                                 P.at("nu_seq").get<std::vector<int>>(),
                                 dnum(P.at("eta")));
  if (name == "intersection")
    return intersection_count(m, P.at("trials"), dnum(P.at("stable_arc")),
                              P.at("seed").get<std::uint64_t>(), false);
  if (name == "plaque")
    return plaque_expansivity_probe(m, P.at("trials"), dnum(P.at("eta")),
                                    P.at("horizon"),
                                    P.at("seed").get<std::uint64_t>(), false);
  if (name == "growth")
    return cs_growth_probe(m, pointv(P.at("start")), P.at("steps"));
  if (name == "periodic-density")
    return periodic_density_probe(m, P.at("trials"), dnum(P.at("delta")),
                                  P.at("seed").get<std::uint64_t>(), false);
  throw Error(Err::BadInput, "unknown verdict name: " + name);
}

} // namespace

bool reverify(const std::string& verdict_json) {
  Verdict v = verdict_from_json(verdict_json);
  Verdict fresh = rerun(v.name, json::parse(v.parameters));
  return v.passed && fresh.passed &&
         json::parse(fresh.witness) == json::parse(v.witness);
}

} // namespace cshadow
