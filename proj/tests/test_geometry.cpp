#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "plg/error.hpp"
#include "plg/geometry.hpp"

using plg::Bits;
using plg::Errc;
using plg::Error;
using plg::GeoMorphism;
using plg::Geometry;

namespace {

Geometry discrete(int n) { return Geometry(n, {}); }

Geometry single_line(int n) {
  std::vector<int> pts(n);
  std::iota(pts.begin(), pts.end(), 0);
  return Geometry(n, {pts});
}

// Independent oracle: subspaces by scanning every subset for closedness.
std::vector<Bits> brute_subspaces(const Geometry& g) {
  const int n = g.n_points();
  REQUIRE(n <= 16);
  std::vector<Bits> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Bits s(n);
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) s.set(i);
    bool closed = true;
    for (int a = 0; a < n && closed; ++a)
      for (int b = a + 1; b < n && closed; ++b)
        if (s.test(a) && s.test(b) && !g.line_set(a, b).is_subset_of(s)) closed = false;
    if (closed) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const Bits& a, const Bits& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a.lex_less(b);
  });
  return out;
}

GeoMorphism make_morphism(const Geometry& src, const Geometry& dst,
                          const std::vector<int>& map) {
  GeoMorphism m;
  m.source = src;
  m.target = dst;
  m.kernel = Bits(src.n_points());
  for (int x = 0; x < src.n_points(); ++x)
    if (map[x] < 0) m.kernel.set(x);
  m.map = map;
  return m;
}

}  // namespace

TEST_CASE("construction rejects malformed line tables") {
  CHECK_NOTHROW(Geometry(7, {{0, 1, 2}, {3, 4, 5}}));
  // The classic encoding of a G2 violation: one pair on two lines.
  CHECK_THROWS_AS(Geometry(4, {{0, 1, 2}, {3, 1, 2}}), Error);
  CHECK_THROWS_AS(Geometry(4, {{0, 1}}), Error);        // short line
  CHECK_THROWS_AS(Geometry(4, {{0, 1, 1}}), Error);     // repeated point
  CHECK_THROWS_AS(Geometry(3, {{0, 1, 3}}), Error);     // out of range
  CHECK_THROWS_AS(Geometry(5, {{0, 1, 2}, {2, 1, 0}}), Error);  // duplicate line
  try {
    Geometry(4, {{0, 1, 2}, {3, 1, 2}});
    FAIL("expected invalid_input");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
}

TEST_CASE("axioms hold on generated geometries") {
  for (const Geometry& g : {plg::from_vector_space(2, 3), plg::from_vector_space(3, 3),
                            discrete(3), discrete(0), single_line(4)}) {
    auto rep = plg::check_axioms(g);
    CHECK(rep.g1);
    CHECK(rep.g2);
    CHECK(rep.g3);
    CHECK(rep.symmetric);
    CHECK(rep.ok());
  }
}

TEST_CASE("axiom G3 fails for two bare-crossing lines") {
  // Two lines through point 0 and nothing else: the cross pairs have no
  // common point, so the cross-axiom has no witness q.
  Geometry g(5, {{0, 1, 2}, {0, 3, 4}});
  auto rep = plg::check_axioms(g);
  CHECK(rep.g1);
  CHECK(rep.g2);
  CHECK(!rep.g3);
  CHECK(rep.witness == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("line operation") {
  Geometry fano = plg::from_vector_space(2, 3);
  CHECK(plg::line(fano, 3, 3) == Bits::of(7, {3}));
  Bits l01 = plg::line(fano, 0, 1);
  CHECK(l01.count() == 3);
  CHECK(l01.test(0));
  CHECK(l01.test(1));
  // Same line regardless of the defining pair.
  int third = -1;
  for (int x : l01.to_vector())
    if (x != 0 && x != 1) third = x;
  CHECK(plg::line(fano, third, 0) == l01);

  Geometry d3 = discrete(3);
  CHECK(plg::line(d3, 0, 1) == Bits::of(3, {0, 1}));
  CHECK_THROWS_AS(plg::line(d3, 0, 3), Error);
}

TEST_CASE("line membership exchange property") {
  // b in a*b, and c in a*b with c != a forces b in a*c.
  auto cop = plg::coproduct({plg::from_vector_space(2, 3), single_line(4)});
  for (const Geometry& g : {plg::from_vector_space(2, 3), plg::from_vector_space(3, 3),
                            cop.geom}) {
    const int n = g.n_points();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Bits ab = g.line_set(a, b);
        CHECK(ab.test(b));
        for (int c : ab.to_vector())
          if (c != a) CHECK(g.line_set(a, c).test(b));
      }
  }
}

TEST_CASE("closure basics and closure-operator laws") {
  Geometry fano = plg::from_vector_space(2, 3);
  CHECK(plg::closure(fano, Bits(7)) == Bits(7));
  CHECK(plg::closure(fano, std::vector<int>{4}) == Bits::of(7, {4}));
  for (int a = 0; a < 7; ++a)
    for (int b = 0; b < 7; ++b)
      CHECK(plg::closure(fano, {a, b}) == fano.line_set(a, b));

  // Three non-collinear points span the plane.
  bool found = false;
  for (int a = 0; a < 7 && !found; ++a)
    for (int b = a + 1; b < 7 && !found; ++b)
      for (int c = b + 1; c < 7 && !found; ++c)
        if (!fano.collinear(a, b, c)) {
          CHECK(plg::closure(fano, {a, b, c}).count() == 7);
          found = true;
        }
  CHECK(found);

  // Monotone, inflationary, idempotent on random subsets.
  std::mt19937 rng(515);
  Geometry pg23 = plg::from_vector_space(3, 3);
  for (int t = 0; t < 50; ++t) {
    Bits s(pg23.n_points()), w(pg23.n_points());
    for (int i = 0; i < pg23.n_points(); ++i) {
      if (rng() % 4 == 0) s.set(i);
      if (rng() % 4 == 0) w.set(i);
    }
    Bits super = s | w;
    Bits cs = plg::closure(pg23, s);
    CHECK(s.is_subset_of(cs));
    CHECK(plg::closure(pg23, cs) == cs);
    CHECK(cs.is_subset_of(plg::closure(pg23, super)));
  }
}

TEST_CASE("all_subspaces agrees with subset scan") {
  for (const Geometry& g : {plg::from_vector_space(2, 3), discrete(3),
                            plg::from_vector_space(3, 3), plg::from_vector_space(2, 4),
                            discrete(0)}) {
    auto fast = plg::all_subspaces(g);
    auto slow = brute_subspaces(g);
    CHECK(fast == slow);
  }
}

TEST_CASE("subspace counts and the enumeration cap") {
  CHECK(plg::all_subspaces(plg::from_vector_space(2, 3)).size() == 16);
  CHECK(plg::all_subspaces(discrete(3)).size() == 8);
  CHECK(plg::all_subspaces(plg::from_vector_space(2, 4)).size() == 67);
  CHECK_THROWS_AS(plg::all_subspaces(plg::from_vector_space(2, 4), 50), Error);
  try {
    plg::all_subspaces(plg::from_vector_space(2, 4), 50);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cap_exceeded);
  }
}

TEST_CASE("projective spaces over GF(p)") {
  Geometry fano = plg::from_vector_space(2, 3);
  CHECK(fano.n_points() == 7);
  CHECK(fano.line_count() == 7);

  Geometry pg23 = plg::from_vector_space(3, 3);
  CHECK(pg23.n_points() == 13);
  CHECK(pg23.line_count() == 13);
  for (const auto& ln : pg23.lines()) CHECK(ln.size() == 4);

  Geometry pt = plg::from_vector_space(2, 1);
  CHECK(pt.n_points() == 1);
  CHECK(pt.line_count() == 0);

  // (p^d - 1) / (p - 1) points, lines of p + 1 points.
  struct { std::int64_t p; int d; } cases[] = {{2, 4}, {3, 2}, {5, 3}};
  for (auto [p, d] : cases) {
    Geometry g = plg::from_vector_space(p, d);
    std::int64_t expect = 0, pow = 1;
    for (int i = 0; i < d; ++i) { expect += pow; pow *= p; }
    CHECK(g.n_points() == expect);
    for (const auto& ln : g.lines()) CHECK(static_cast<std::int64_t>(ln.size()) == p + 1);
  }

  CHECK_THROWS_AS(plg::from_vector_space(4, 2), Error);
  CHECK_THROWS_AS(plg::from_vector_space(3, 0), Error);

  auto reps = plg::projective_points(3, 3);
  REQUIRE(reps.size() == 13);
  for (const auto& v : reps) {
    int first = 0;
    while (first < 3 && v[first] == 0) ++first;
    REQUIRE(first < 3);
    CHECK(v[first] == 1);
  }
}

TEST_CASE("coproducts") {
  Geometry fano = plg::from_vector_space(2, 3);
  auto one = plg::coproduct({fano});
  CHECK(one.geom == fano);

  auto two = plg::coproduct({fano, fano});
  CHECK(two.geom.n_points() == 14);
  CHECK(two.geom.line_count() == 14);
  CHECK(!plg::is_irreducible(two.geom));
  CHECK(plg::check_axioms(two.geom).ok());
  for (const auto& inj : two.injections) CHECK(plg::check_morphism(inj));
  // Cross pairs are bare.
  CHECK(two.geom.line_set(0, 7) == Bits::of(14, {0, 7}));

  auto pts = plg::coproduct({discrete(1), discrete(1), discrete(1)});
  CHECK(pts.geom == discrete(3));
}

TEST_CASE("irreducible components") {
  Geometry fano = plg::from_vector_space(2, 3);
  auto c1 = plg::irreducible_components(fano);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].size() == 7);

  auto c2 = plg::irreducible_components(discrete(3));
  CHECK(c2.size() == 3);

  auto cop = plg::coproduct({fano, single_line(4)});
  auto c3 = plg::irreducible_components(cop.geom);
  REQUIRE(c3.size() == 2);
  CHECK(c3[0].size() == 7);
  CHECK(c3[1].size() == 4);

  // Classes partition the points and their coproduct rebuilds the input.
  std::vector<Geometry> parts;
  std::vector<int> glue;
  for (const auto& cls : c3) {
    parts.push_back(plg::component_geometry(cop.geom, cls));
    for (int x : cls) glue.push_back(x);
  }
  auto rebuilt = plg::coproduct(parts);
  GeoMorphism iso = make_morphism(rebuilt.geom, cop.geom, glue);
  CHECK(plg::is_isomorphism(iso));
}

TEST_CASE("irreducibility") {
  CHECK(plg::is_irreducible(plg::from_vector_space(2, 3)));
  CHECK(!plg::is_irreducible(discrete(2)));
  CHECK(plg::is_irreducible(discrete(0)));
  CHECK(plg::is_irreducible(single_line(5)));
  // Agreement with the component count.
  CHECK(plg::irreducible_components(single_line(5)).size() == 1);
  CHECK(plg::irreducible_components(discrete(2)).size() == 2);
}

TEST_CASE("dimension") {
  CHECK(plg::dimension(plg::from_vector_space(2, 3)) == 2);
  CHECK(plg::dimension(plg::from_vector_space(2, 4)) == 3);
  CHECK(plg::dimension(discrete(1)) == 0);
  CHECK(plg::dimension(discrete(0)) == -1);
  CHECK(plg::dimension(single_line(4)) == 1);
  CHECK(plg::dimension(discrete(4)) == 3);
}

TEST_CASE("desargues holds in projective spaces") {
  CHECK(plg::desargues_holds(plg::from_vector_space(3, 3)).holds);
  CHECK(plg::desargues_holds(plg::from_vector_space(2, 4)).holds);
  CHECK_THROWS_AS(plg::desargues_holds(discrete(3)), Error);     // reducible
  CHECK_THROWS_AS(plg::desargues_holds(single_line(4)), Error);  // dimension 1
  try {
    plg::desargues_holds(single_line(4));
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }
}

TEST_CASE("projective law on subspace pairs") {
  for (const Geometry& g : {plg::from_vector_space(2, 3), discrete(3),
                            plg::from_vector_space(3, 3)}) {
    auto subs = plg::all_subspaces(g);
    for (const auto& s : subs)
      for (const auto& t : subs) {
        if (s.none() || t.none()) continue;
        Bits join = plg::closure(g, s | t);
        Bits cover(g.n_points());
        for (int a : s.to_vector())
          for (int b : t.to_vector()) cover |= g.line_set(a, b);
        CHECK(join == cover);
      }
  }
}

TEST_CASE("morphism validity") {
  Geometry fano = plg::from_vector_space(2, 3);
  CHECK(plg::check_morphism(plg::identity_morphism(fano)));

  // Collapsing a line onto two points, non-injectively: invalid.
  std::vector<int> collapse(7, 0);
  const auto& ln = fano.lines()[0];
  collapse[ln[0]] = 0;
  collapse[ln[1]] = 0;
  collapse[ln[2]] = 1;
  CHECK(!plg::check_morphism(make_morphism(fano, fano, collapse)));

  // Constant maps are morphisms.
  CHECK(plg::check_morphism(make_morphism(fano, discrete(3), std::vector<int>(7, 2))));

  // Kernel = one point, identity elsewhere: the preimage of a line not
  // through that point is a point set that fails to be closed.
  std::vector<int> punct(7);
  std::iota(punct.begin(), punct.end(), 0);
  punct[6] = -1;
  CHECK(!plg::check_morphism(make_morphism(fano, fano, punct)));

  // Everything in the kernel: the empty partial map is a morphism.
  CHECK(plg::check_morphism(make_morphism(fano, fano, std::vector<int>(7, -1))));

  // Structurally broken records are rejected rather than judged.
  GeoMorphism bad = plg::identity_morphism(fano);
  bad.map[3] = 9;
  CHECK_THROWS_AS(plg::check_morphism(bad), Error);
}

TEST_CASE("component of the image") {
  Geometry fano = plg::from_vector_space(2, 3);
  CHECK(plg::component_of_image(plg::identity_morphism(fano)) == 0);

  auto cop = plg::coproduct({plg::from_vector_space(3, 3), fano});
  CHECK(plg::component_of_image(cop.injections[0]) == 0);
  CHECK(plg::component_of_image(cop.injections[1]) == 1);

  CHECK(plg::component_of_image(make_morphism(fano, discrete(3), std::vector<int>(7, 2))) == 2);

  auto inj0 = plg::coproduct({discrete(2), fano}).injections[0];
  CHECK_THROWS_AS(plg::component_of_image(inj0), Error);  // reducible source
}

TEST_CASE("isomorphisms") {
  Geometry fano = plg::from_vector_space(2, 3);
  CHECK(plg::is_isomorphism(plg::identity_morphism(fano)));

  // A linear collineation: permute points by an invertible matrix over
  // GF(2), acting on the canonical representatives.
  auto reps = plg::projective_points(2, 3);
  int mat[3][3] = {{0, 1, 0}, {0, 0, 1}, {1, 0, 1}};  // invertible over GF(2)
  auto apply = [&](const std::vector<int>& v) {
    std::vector<int> w(3, 0);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) w[i] = (w[i] + mat[i][j] * v[j]) % 2;
    return w;
  };
  std::vector<int> sigma(7);
  for (int x = 0; x < 7; ++x) {
    auto w = apply(reps[x]);
    int y = -1;
    for (int k = 0; k < 7; ++k)
      if (reps[k] == w) y = k;
    REQUIRE(y >= 0);
    sigma[x] = y;
  }
  CHECK(plg::is_isomorphism(make_morphism(fano, fano, sigma)));

  // Bijections that forget the lines are not isomorphisms.
  std::vector<int> ident(7);
  std::iota(ident.begin(), ident.end(), 0);
  CHECK(!plg::is_isomorphism(make_morphism(fano, discrete(7), ident)));

  // Relabeling by an arbitrary permutation, with the target rebuilt to
  // match, is an isomorphism.
  std::mt19937 rng(77);
  std::vector<int> perm(7);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<int>> relabeled;
  for (const auto& l0 : fano.lines()) {
    std::vector<int> l1;
    for (int x : l0) l1.push_back(perm[x]);
    relabeled.push_back(l1);
  }
  Geometry shuffled(7, relabeled);
  CHECK(plg::is_isomorphism(make_morphism(fano, shuffled, perm)));
}

TEST_CASE("pullbacks of subspaces along valid morphisms are subspaces") {
  Geometry fano = plg::from_vector_space(2, 3);
  auto cop = plg::coproduct({fano, plg::from_vector_space(3, 3)});
  const GeoMorphism& inj = cop.injections[0];
  for (const auto& t : plg::all_subspaces(inj.target)) {
    Bits pre = inj.kernel;
    for (int x = 0; x < inj.source.n_points(); ++x)
      if (inj.map[x] >= 0 && t.test(inj.map[x])) pre.set(x);
    CHECK(plg::closure(inj.source, pre) == pre);
  }
}
