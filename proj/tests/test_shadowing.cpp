#include <doctest.h>

#include <cmath>
#include <vector>

#include <centershadow/errors.hpp>
#include <centershadow/shadowing.hpp>

using namespace cshadow;

namespace {

ModelSystem pillow() {
  return make_model(ModelKind::Pillowcase, {2, 1, 1, 1}, 0.25);
}

ModelSystem torus3() {
  return make_model(ModelKind::TrivialHolonomy, {2, 1, 1, 1}, 0.25);
}

template <class F>
Err thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  FAIL("expected an Error");
  return Err::BadInput;
}

std::vector<CenterLeaf> true_orbit(const ModelSystem& m, T2Point p, int n) {
  std::vector<CenterLeaf> out;
  out.reserve(size_t(n));
  T2Point cur = canonical(p);
  for (int i = 0; i < n; ++i) {
    out.push_back(make_leaf(m, cur));
    cur = apply(m.A, cur);
  }
  return out;
}

// Orbit of x0 with one unstable kick of size `jump` entering step k. The
// kicked point continues as a true orbit, so the shadow has a closed form.
std::vector<CenterLeaf> kicked_orbit(const ModelSystem& m, T2Point x0, int n,
                                     int k, const T2Vector& kick) {
  std::vector<CenterLeaf> out;
  T2Point cur = canonical(x0);
  for (int i = 0; i < n; ++i) {
    if (i == k) cur = translate(cur, kick);
    out.push_back(make_leaf(m, cur));
    cur = apply(m.A, cur);
  }
  return out;
}

} // namespace

TEST_CASE("single unstable kick has a closed-form shadow") {
  ModelSystem m = torus3();
  const double j = 0.002;
  auto leaves = kicked_orbit(m, {0.2, 0.1}, 5, 3, j * m.S.e_u);
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, j));
  ShadowTrace t = shadow(m, dpo);

  // Pullback j / lambda^3 applied at time zero.
  CHECK(std::abs(t.shadow_lift.rep.x - 0.20009481028961426) <= 1e-13);
  CHECK(std::abs(t.shadow_lift.rep.y - 0.10005859598146484) <= 1e-13);

  REQUIRE(t.per_step_distance.size() == 5);
  CHECK(std::abs(t.per_step_distance[0] - 0.00011145618000168242) <= 1e-13);
  CHECK(std::abs(t.per_step_distance[1] - 0.00029179606750063094) <= 1e-13);
  CHECK(std::abs(t.per_step_distance[2] - 0.00076393202250021029) <= 1e-13);
  CHECK(t.per_step_distance[3] <= 1e-15);
  CHECK(t.per_step_distance[4] <= 1e-15);

  CHECK(t.corrections[0] == 0.0);
  CHECK(t.corrections[1] <= 1e-15);
  CHECK(t.corrections[2] <= 1e-15);
  CHECK(std::abs(t.corrections[3] - j) <= 1e-12);
  CHECK(t.corrections[4] <= 1e-15);

  CHECK(t.eps_decorated == doctest::Approx(j).epsilon(1e-12));
  CHECK(std::abs(t.bound - 0.0064721359549995789) <= 1e-14);
  CHECK(!t.cap_hit);

  CenterLeaf check = shadow_oracle(m, dpo);
  CHECK(leaf_distance(m, t.shadow, check) <= 1e-13);
}

TEST_CASE("the same kick gives the same numbers on the quotient") {
  ModelSystem m = pillow();
  const double j = 0.002;
  auto leaves = kicked_orbit(m, {0.2, 0.1}, 5, 3, j * m.S.e_u);
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, j));

  // The orbit crosses a fold between steps 3 and 4; the no-switch flags
  // stay +1 and the resolved representative follows the mirrored sheet.
  CHECK(dpo.decorations[3].sign == 1);
  CHECK(dpo.decorations[4].sign == 1);

  ShadowTrace t = shadow(m, dpo);
  CHECK(std::abs(t.shadow.base.x - 0.20009481028961426) <= 1e-13);
  CHECK(std::abs(t.shadow.base.y - 0.10005859598146484) <= 1e-13);
  CHECK(std::abs(t.per_step_distance[1] - 0.00029179606750063094) <= 1e-13);
  CHECK(t.per_step_distance[4] <= 1e-15);
  CHECK(std::abs(t.bound - 0.0064721359549995789) <= 1e-14);
  CHECK(leaf_distance(m, t.shadow, shadow_oracle(m, dpo)) <= 1e-13);
}

TEST_CASE("a true orbit shadows itself with every quantity exactly zero") {
  for (ModelSystem m : {torus3(), pillow()}) {
    auto leaves = true_orbit(m, {0.123456789, 0.987654321}, 40);
    auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, 0.0));
    ShadowTrace t = shadow(m, dpo);

    CHECK(t.eps_decorated == 0.0);
    CHECK(t.bound == 0.0);
    for (double d : t.per_step_distance) CHECK(d == 0.0);
    for (double c : t.corrections) CHECK(c == 0.0);
    CHECK(t.shadow_lift.rep.x == leaves[0].base.x);
    CHECK(t.shadow_lift.rep.y == leaves[0].base.y);
    CHECK(!t.cap_hit);
  }
}

TEST_CASE("shadow rejects an orbit outside the epsilon budget") {
  ModelSystem m = pillow();
  CHECK(thrown_code([&] { make_pseudo_orbit(m, 1, 10, 0.5); }) ==
        Err::BudgetExceeded);

  // 0.004 validates as a pseudo-orbit but exceeds the eta = 0.01 budget.
  T2Point w0 = {0.37, 0.21};
  std::vector<CenterLeaf> leaves = {
      make_leaf(m, w0),
      make_leaf(m, translate(apply(m.A, w0), 0.004 * m.S.e_u))};
  PseudoOrbit po = pseudo_orbit_from(m, leaves, 0.004);
  auto dpo = auto_decorate(m, po);
  CHECK(thrown_code([&] { shadow(m, dpo, 0.01); }) == Err::BudgetExceeded);
  CHECK(thrown_code([&] { shadow_bi_infinite(m, dpo, 0.01); }) ==
        Err::BadInput); // window of two is rejected before the budget
  ShadowTrace t = shadow(m, dpo, 0.05);
  CHECK(t.eps_decorated == doctest::Approx(0.004).epsilon(1e-12));
}

TEST_CASE("a representative far from the stepped chain is a mismatch") {
  // Switching sheets away from the fold asks for a representative whose
  // mirror is not delta0-close to the stepped chain.
  ModelSystem m = pillow();
  auto po = pseudo_orbit_from(m, true_orbit(m, {0.3, 0.4}, 3), 0.0);
  auto dpo = decorate(m, po, {{1}, {-1}, {1}});
  CHECK(thrown_code([&] { shadow(m, dpo); }) == Err::DecorationMismatch);

  // On the trivial model every leaf has a single representative, so flags
  // cannot create a mismatch.
  ModelSystem t3 = torus3();
  auto po3 = pseudo_orbit_from(t3, true_orbit(t3, {0.3, 0.4}, 3), 0.0);
  ShadowTrace tr = shadow(t3, decorate(t3, po3, {{1}, {-1}, {1}}));
  CHECK(tr.eps_decorated == 0.0);
}

TEST_CASE("decorations are validated before shadowing") {
  ModelSystem m = pillow();
  auto po = pseudo_orbit_from(m, true_orbit(m, {0.3, 0.4}, 3), 0.0);
  CHECK(thrown_code([&] { decorate(m, po, {{1}, {1}}); }) == Err::BadInput);
  CHECK(thrown_code([&] { decorate(m, po, {{1}, {0}, {1}}); }) ==
        Err::BadInput);
  CHECK(thrown_code([&] {
          pseudo_orbit_from(m, true_orbit(m, {0.1, 0.6}, 2), -1.0);
        }) == Err::BadInput);

  // Declared epsilon must cover the realized jumps.
  std::vector<CenterLeaf> leaves = {
      make_leaf(m, {0.3, 0.4}),
      make_leaf(m, translate(apply(m.A, {0.3, 0.4}), 0.01 * m.S.e_u))};
  CHECK(thrown_code([&] { pseudo_orbit_from(m, leaves, 0.0); }) ==
        Err::BadInput);
}

TEST_CASE("random pseudo-orbits stay inside the certified bound") {
  ModelSystem m = pillow();
  for (std::uint64_t seed : {2u, 3u, 5u, 8u, 13u}) {
    PseudoOrbit po = make_pseudo_orbit(m, seed, 80, 2e-4, 0.01);
    auto dpo = auto_decorate(m, po);
    ShadowTrace t = shadow(m, dpo, 0.01);

    CHECK(t.eps_decorated <= 2e-4 * (1.0 + 1e-12));
    for (double d : t.per_step_distance) CHECK(d <= t.bound + 1e-15);
    CHECK(!t.cap_hit);
    CHECK(leaf_distance(m, t.shadow, shadow_oracle(m, dpo)) <= 1e-12);

    ShadowTrace again = shadow(m, dpo, 0.01);
    CHECK(again.shadow_lift.rep.x == t.shadow_lift.rep.x);
    CHECK(again.shadow_lift.rep.y == t.shadow_lift.rep.y);
  }

  PseudoOrbit a = make_pseudo_orbit(m, 77, 25, 1e-4);
  PseudoOrbit b = make_pseudo_orbit(m, 77, 25, 1e-4);
  REQUIRE(a.leaves.size() == b.leaves.size());
  for (size_t i = 0; i < a.leaves.size(); ++i) {
    CHECK(a.leaves[i].base.x == b.leaves[i].base.x);
    CHECK(a.leaves[i].base.y == b.leaves[i].base.y);
  }
}

TEST_CASE("per-block sheet switches give lift-distinct, quotient-close shadows") {
  ModelSystem m = pillow();
  const long long q = 256;

  // Two exact periodic cycles of nearby lattice points, run as one chain.
  // The only nonzero jumps sit at the seams, where the chain re-enters a
  // small neighborhood of the singular fixed point and both sheets of the
  // next block are admissible. One switch flag per seam therefore selects
  // a genuine branch: 2 blocks give 4 decorated chains over the same
  // quotient pseudo-orbit.
  const std::vector<long long> heights = {3, 2};
  std::vector<LatticePoint> lat;
  std::vector<size_t> block_of;
  std::vector<size_t> seam; // first index of each block
  for (size_t b = 0; b < heights.size(); ++b) {
    LatticePoint p0{heights[b], 0, q};
    long long T = lattice_period(m.A, p0, 100000);
    REQUIRE(T > 0);
    seam.push_back(lat.size());
    LatticePoint cur = p0;
    for (long long k = 0; k < T; ++k) {
      lat.push_back(cur);
      block_of.push_back(b);
      cur = lattice_apply(m.A, cur);
    }
  }
  if (lat.size() % 2 == 0) { // keep the window odd for the two-sided engine
    lat.push_back(lat[seam.back()]);
    block_of.push_back(heights.size() - 1);
  }
  const size_t n = lat.size();

  std::vector<CenterLeaf> leaves(n);
  std::vector<int> base_sign(n);
  for (size_t t = 0; t < n; ++t) {
    T2Point o = from_lattice(lat[t]);
    leaves[t] = make_leaf(m, o);
    base_sign[t] = torus_distance(leaves[t].base, o) <= 1e-15 ? 1 : -1;
  }
  double eps = 0.0;
  for (size_t t = 0; t + 1 < n; ++t)
    eps = std::max(eps, modified_leaf_distance(m,
                                               quotient_map(m, leaves[t],
                                                            m.K.N),
                                               leaves[t + 1]));
  REQUIRE(eps > 0.0);
  REQUIRE(eps < m.K.delta1); // seams stay in the metric's linear regime
  PseudoOrbit po = pseudo_orbit_from(m, leaves, eps);

  // Sheet sigma[b] per block: anchor flag picks block 0's sheet, a seam
  // flag of -1 switches exactly when consecutive blocks disagree.
  auto decorate_by = [&](std::vector<int> sigma) {
    std::vector<LiftDecoration> d(n);
    d[0].sign = sigma[0] * base_sign[0];
    for (size_t t = 1; t < n; ++t)
      d[t].sign = sigma[block_of[t]] * sigma[block_of[t - 1]];
    return decorate(m, po, d);
  };

  const double eta = 0.05; // seam jumps on flipped sheets need the room
  std::vector<ShadowTrace> tr;
  for (int s0 : {1, -1})
    for (int s1 : {1, -1}) {
      ShadowTrace t = shadow_bi_infinite(m, decorate_by({s0, s1}), eta);
      for (double d : t.per_step_distance) CHECK(d <= t.bound + 1e-15);
      tr.push_back(std::move(t));
    }

  // Identical decorations reproduce the identical track.
  ShadowTrace again = shadow_bi_infinite(m, decorate_by({1, -1}), eta);
  REQUIRE(again.track.size() == tr[1].track.size());
  for (size_t t = 0; t < n; ++t) {
    CHECK(again.track[t].x == tr[1].track[t].x);
    CHECK(again.track[t].y == tr[1].track[t].y);
  }

  // Flipping every block mirrors the whole track and lands on the same
  // quotient leaf: the decorated chains are distinct, their projections
  // are not.
  for (size_t t = 0; t < n; ++t)
    CHECK(torus_distance(tr[0].track[t], negate(tr[3].track[t])) <= 1e-12);
  CHECK(leaf_distance(m, tr[0].shadow, tr[3].shadow) <= 1e-12);

  // Any two patterns part ways on the blocks where they disagree: the
  // tracks separate by the sheet diameter there, far beyond the chain's
  // epsilon. Projected to the quotient they never leave the sum of the
  // two certified tubes around the common chain.
  const size_t origin = (n - 1) / 2;
  for (size_t i = 0; i < tr.size(); ++i)
    for (size_t k = i + 1; k < tr.size(); ++k) {
      double sup = 0.0, supq = 0.0;
      for (size_t t = 0; t < n; ++t) {
        sup = std::max(sup, torus_distance(tr[i].track[t], tr[k].track[t]));
        supq = std::max(supq, leaf_distance(m, make_leaf(m, tr[i].track[t]),
                                            make_leaf(m, tr[k].track[t])));
      }
      CHECK(sup > 0.25);
      CHECK(sup > 10.0 * eps);
      CHECK(supq <= tr[i].bound + tr[k].bound + 1e-12);
    }

  // The two-sided pinning contracts a disagreement away from its blocks:
  // patterns differing only in block 1 are still nearly equal, as lifts,
  // at the origin inside block 0.
  REQUIRE(block_of[origin] == 0);
  CHECK(torus_distance(tr[0].track[origin], tr[1].track[origin]) <= 3e-3);

  // Away from the singular set the mirror sheet leaves the delta0 tube, so
  // a switch there is rejected rather than silently absorbed.
  size_t far_t = 0;
  for (size_t t = 1; t < n; ++t)
    if (torus_distance(leaves[t].base, negate(leaves[t].base)) > 0.3) {
      far_t = t;
      break;
    }
  REQUIRE(far_t > 0);
  std::vector<LiftDecoration> bad(n, LiftDecoration{1});
  bad[far_t].sign = -1;
  CHECK(thrown_code([&] {
          shadow_bi_infinite(m, decorate(m, po, bad), eta);
        }) == Err::DecorationMismatch);
}

TEST_CASE("bi-infinite window pins the future unstable kick") {
  ModelSystem m = torus3();
  const double j = 0.0015;
  auto leaves = kicked_orbit(m, {0.2, 0.1}, 9, 6, j * m.S.e_u);
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, j));
  ShadowTrace t = shadow_bi_infinite(m, dpo);

  // Kick enters index 6, origin is 4: offset j / lambda^2 along e_u.
  T2Point expect =
      translate(leaves[4].base, 0.00021884705062547317 * m.S.e_u);
  CHECK(std::abs(t.shadow_lift.rep.x - expect.x) <= 1e-13);
  CHECK(std::abs(t.shadow_lift.rep.y - expect.y) <= 1e-13);
  CHECK(t.per_step_distance[4] <= t.bound + 1e-15);
}

TEST_CASE("bi-infinite window pins the past stable kick") {
  ModelSystem m = torus3();
  const double j = 0.0012;
  auto leaves = kicked_orbit(m, {0.2, 0.1}, 9, 2, j * m.S.e_s);
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, j));
  ShadowTrace t = shadow_bi_infinite(m, dpo);

  // Kick enters index 2, origin is 4: offset -j alpha^2 along e_s.
  T2Point expect =
      translate(leaves[4].base, -0.00017507764050037853 * m.S.e_s);
  CHECK(std::abs(t.shadow_lift.rep.x - expect.x) <= 1e-13);
  CHECK(std::abs(t.shadow_lift.rep.y - expect.y) <= 1e-13);
}

TEST_CASE("bi-infinite shadow of a true orbit is the orbit") {
  ModelSystem m = pillow();
  auto dpo = auto_decorate(
      m, pseudo_orbit_from(m, true_orbit(m, {0.271828, 0.141421}, 41), 0.0));
  ShadowTrace t = shadow_bi_infinite(m, dpo);
  // This orbit crosses the fold, where negating before and after the linear
  // step are distinct float expressions, so the jumps vanish only to one
  // rounding of the wrap rather than bitwise.
  CHECK(t.eps_decorated <= 1e-15);
  for (double d : t.per_step_distance) CHECK(d <= 1e-15);
  CHECK(leaf_distance(m, t.shadow, dpo.base.leaves[20]) <= 1e-15);
}

TEST_CASE("bi-infinite window must be odd and long enough") {
  ModelSystem m = pillow();
  auto mk = [&](int n) {
    return auto_decorate(
        m, pseudo_orbit_from(m, true_orbit(m, {0.3, 0.7}, n), 0.0));
  };
  CHECK(thrown_code([&] { shadow_bi_infinite(m, mk(8)); }) == Err::BadInput);
  CHECK(thrown_code([&] { shadow_bi_infinite(m, mk(1)); }) == Err::BadInput);
}

TEST_CASE("growing the window sharpens the bi-infinite shadow") {
  ModelSystem m = pillow();
  PseudoOrbit po = make_pseudo_orbit(m, 21, 13, 1e-4, 0.01);
  auto full = auto_decorate(m, po);
  ShadowTrace t13 = shadow_bi_infinite(m, full);

  auto window = [&](size_t lo, size_t hi) {
    std::vector<CenterLeaf> part(po.leaves.begin() + long(lo),
                                 po.leaves.begin() + long(hi));
    return auto_decorate(m, pseudo_orbit_from(m, part, po.epsilon));
  };
  ShadowTrace t9 = shadow_bi_infinite(m, window(2, 11));
  ShadowTrace t5 = shadow_bi_infinite(m, window(4, 9));

  double a = m.S.alpha;
  double tail9 = t13.bound * std::pow(a, 4) / (1.0 - a);
  double tail5 = t13.bound * std::pow(a, 2) / (1.0 - a);
  CHECK(leaf_distance(m, t9.shadow, t13.shadow) <= tail9 + 1e-15);
  CHECK(leaf_distance(m, t5.shadow, t13.shadow) <= tail5 + 1e-15);
}

TEST_CASE("the singular three-cycle is its own periodic shadow") {
  ModelSystem m = pillow();
  std::vector<LatticePoint> cyc = {{1, 0, 2}, {0, 1, 2}, {1, 1, 2}, {1, 0, 2}};
  std::vector<CenterLeaf> leaves;
  for (const auto& q : cyc) leaves.push_back(make_leaf(m, from_lattice(q)));
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, 0.0));

  PeriodicShadow ps = shadow_periodic(m, dpo, 3);
  CHECK(ps.exact);
  CHECK(ps.den == 2);
  CHECK(ps.residual == 0.0);
  CHECK(leaf_equal(m, ps.leaf, leaves[0]));
}

TEST_CASE("a period-one chain near the origin snaps to the fixed point") {
  ModelSystem m = pillow();
  CenterLeaf L = make_leaf(m, {0.02, 0.015});
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, {L, L}, 0.0625));
  PeriodicShadow ps = shadow_periodic(m, dpo, 1);
  CHECK(ps.exact);
  CHECK(ps.den == 1);
  CHECK(leaf_equal(m, ps.leaf, make_leaf(m, {0.0, 0.0})));
}

TEST_CASE("a jittered lattice cycle snaps back to its rational orbit") {
  ModelSystem m = pillow();
  LatticePoint start = {1, 0, 5};
  CHECK(lattice_period(m.A, start, 1000) == 10);

  std::vector<CenterLeaf> leaves;
  LatticePoint cur = start;
  for (int t = 0; t <= 10; ++t) {
    double jit = (t % 2 ? -1.0 : 1.0) * 1e-11;
    leaves.push_back(make_leaf(m, translate(from_lattice(cur), jit * m.S.e_u)));
    cur = lattice_apply(m.A, cur);
  }
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, 5e-11));

  PeriodicShadow ps = shadow_periodic(m, dpo, 10);
  CHECK(ps.exact);
  CHECK(ps.den == 5);
  CHECK(ps.residual == 0.0);
  CHECK(leaf_equal(m, ps.leaf, make_leaf(m, from_lattice(start))));
}

TEST_CASE("a fold-crossing cycle closes exactly over its full period") {
  // A^25 acts as -I mod 25, so the leaf orbit of (13/25, 0) folds onto
  // itself after 25 steps and the representative orbit closes after 50.
  ModelSystem m = pillow();
  LatticePoint start = {13, 0, 25};
  CHECK(lattice_period(m.A, start, 1000) == 50);

  std::vector<CenterLeaf> leaves;
  LatticePoint cur = start;
  for (int t = 0; t < 50; ++t) {
    leaves.push_back(make_leaf(m, from_lattice(cur)));
    cur = lattice_apply(m.A, cur);
  }
  auto dpo = auto_decorate(m, pseudo_orbit_from(m, leaves, 0.0));
  PeriodicShadow ps = shadow_periodic(m, dpo, 50);
  CHECK(ps.exact);
  CHECK(ps.den == 25);
  CHECK(leaf_equal(m, ps.leaf, leaves[0]));

  // Stopping at the fold leaves a genuine sheet jump in the chain; the
  // periodic shadow then certifies through float residuals instead.
  std::vector<CenterLeaf> half(leaves.begin(), leaves.begin() + 25);
  auto dpo25 = auto_decorate(m, pseudo_orbit_from(m, half, 0.0));
  PeriodicShadow fold = shadow_periodic(m, dpo25, 25);
  CHECK(!fold.exact);
  CHECK(fold.den == 0);
  CHECK(fold.residual <= 1e-12);
  CHECK(leaf_distance(m, fold.leaf, leaves[0]) <= 0.05);
}

TEST_CASE("non-repeating input is not periodic") {
  ModelSystem m = pillow();
  auto two = pseudo_orbit_from(m, true_orbit(m, {0.31, 0.17}, 2), 0.0);
  auto d2 = auto_decorate(m, two);
  CHECK(thrown_code([&] { shadow_periodic(m, d2, 1); }) == Err::NotPeriodic);

  auto three = auto_decorate(
      m, pseudo_orbit_from(m, true_orbit(m, {0.31, 0.17}, 3), 0.0));
  CHECK(thrown_code([&] { shadow_periodic(m, three, 5); }) ==
        Err::NotPeriodic);
  CHECK(thrown_code([&] { shadow_periodic(m, three, 0); }) == Err::BadInput);
}

TEST_CASE("orbit text round-trips through the parser") {
  ModelSystem m = pillow();
  auto dpo = auto_decorate(m, make_pseudo_orbit(m, 99, 12, 1e-4, 0.01));
  std::string text = orbit_to_text(m, dpo);

  ModelSystem m2;
  DecoratedPseudoOrbit rt = orbit_from_text(text, &m2);
  CHECK(m2.kind == ModelKind::Pillowcase);
  CHECK(m2.A.a == 2);
  CHECK(m2.theta == m.theta);
  CHECK(rt.base.epsilon == dpo.base.epsilon);
  REQUIRE(rt.base.leaves.size() == dpo.base.leaves.size());
  for (size_t i = 0; i < rt.base.leaves.size(); ++i) {
    CHECK(std::abs(rt.base.leaves[i].base.x - dpo.base.leaves[i].base.x) <=
          5e-13);
    CHECK(rt.decorations[i].sign == dpo.decorations[i].sign);
  }

  // The text is the leaf chain to twelve decimals; the shadow moves less
  // than the worst rounding amplified by one pullback sum.
  ShadowTrace a = shadow(m, dpo), b = shadow(m2, rt);
  CHECK(leaf_distance(m, a.shadow, b.shadow) <= 1e-11);
}

TEST_CASE("malformed orbit text is rejected") {
  ModelSystem m = pillow();
  auto dpo = auto_decorate(m, make_pseudo_orbit(m, 4, 6, 1e-4, 0.01));
  std::string good = orbit_to_text(m, dpo);

  CHECK(thrown_code([&] { orbit_from_text("model pillowcase\n", nullptr); }) ==
        Err::BadInput);
  CHECK(thrown_code([&] {
          orbit_from_text("model nosuch\nmatrix 2 1 1 1\nepsilon 0\n",
                          nullptr);
        }) == Err::BadInput);
  CHECK(thrown_code([&] {
          orbit_from_text("model pillowcase\nmatrix 2 1\nepsilon 0\n",
                          nullptr);
        }) == Err::BadInput);
  std::string bad = good + "0.5,0.5 *\n";
  CHECK(thrown_code([&] { orbit_from_text(bad, nullptr); }) == Err::BadInput);
}
