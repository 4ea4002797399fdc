#include <algorithm>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "doctest.h"
#include "plg/error.hpp"
#include "plg/geometry.hpp"
#include "plg/lattice.hpp"

using plg::Bits;
using plg::Errc;
using plg::Error;
using plg::FiniteLattice;
using plg::GeoMorphism;
using plg::Geometry;
using plg::LatMorphism;
using plg::SubspaceLattice;

namespace {

FiniteLattice chain_lat(int k) {
  std::vector<std::pair<int, int>> ps;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) ps.push_back({i, j});
  return FiniteLattice::from_order(k, ps);
}

// Element ids are subset masks of {0,...,k-1}.
FiniteLattice boolean_lat(int k) {
  const int n = 1 << k;
  std::vector<std::pair<int, int>> ps;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && (x & y) == x) ps.push_back({x, y});
  return FiniteLattice::from_order(n, ps);
}

// 0 < a < b < 1 and 0 < b' < a' < 1, the two chains incomparable.
// Ids: 0, a=1, b=2, b'=3, a'=4, top=5.
FiniteLattice benzene_lat() {
  return FiniteLattice::from_order(
      6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5},
          {1, 2}, {1, 5}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
}

// Diamond: three incomparable atoms a=1, b=2, c=3 between bounds.
FiniteLattice m3_lat() {
  return FiniteLattice::from_order(
      5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}});
}

// Pentagon: 0 < x=1 < z=2 < top=4 and 0 < y=3 < top=4.
FiniteLattice n5_lat() {
  return FiniteLattice::from_order(
      5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 4}, {2, 4}, {3, 4}});
}

// Atoms a=1, b=2, c=3 with a,b < m=4 < top=5 and c < top only:
// atomistic but neither modular nor satisfying the covering law.
FiniteLattice hexagon_lat() {
  return FiniteLattice::from_order(
      6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5},
          {1, 4}, {2, 4}, {1, 5}, {2, 5}, {3, 5}, {4, 5}});
}

// Flat lattice of the affine plane on 4 points (every pair is a line):
// atomistic with the covering law but without the intersection property.
FiniteLattice ag22_lat() {
  std::vector<std::uint32_t> flats = {0x0, 0x1, 0x2, 0x4, 0x8,
                                      0x3, 0x5, 0x9, 0x6, 0xA, 0xC, 0xF};
  std::vector<std::pair<int, int>> ps;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j)
      if (i != j && (flats[i] & flats[j]) == flats[i]) ps.push_back({i, j});
  return FiniteLattice::from_order(12, ps);
}

// Independent oracle: covering from the order relation alone.
bool brute_cover(const FiniteLattice& l, int x, int y) {
  if (x == y || !l.leq(x, y)) return false;
  for (int z = 0; z < l.n; ++z)
    if (z != x && z != y && l.leq(x, z) && l.leq(z, y)) return false;
  return true;
}

// Longest chain from bottom to top, counted in steps.
int height(const FiniteLattice& l) {
  std::vector<int> idx(l.n), h(l.n, 0);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return l.down[a].count() < l.down[b].count(); });
  for (int y : idx)
    for (int x = 0; x < l.n; ++x)
      if (x != y && l.leq(x, y)) h[y] = std::max(h[y], h[x] + 1);
  return h[l.top];
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

void check_lattice_axioms(const FiniteLattice& l) {
  for (int x = 0; x < l.n; ++x)
    for (int y = 0; y < l.n; ++y) {
      CHECK(l.meet(x, y) == l.meet(y, x));
      CHECK(l.join(x, y) == l.join(y, x));
      CHECK(l.meet(x, l.join(x, y)) == x);
      CHECK(l.join(x, l.meet(x, y)) == x);
      CHECK(l.leq(x, y) == (l.meet(x, y) == x));
      CHECK(l.leq(x, y) == (l.join(x, y) == y));
    }
  REQUIRE(l.n <= 16);  // keep the triple scan small
  for (int x = 0; x < l.n; ++x)
    for (int y = 0; y < l.n; ++y)
      for (int z = 0; z < l.n; ++z) {
        CHECK(l.meet(l.meet(x, y), z) == l.meet(x, l.meet(y, z)));
        CHECK(l.join(l.join(x, y), z) == l.join(x, l.join(y, z)));
      }
}

}  // namespace

TEST_CASE("two-element chain and the one-element lattice") {
  FiniteLattice c2 = chain_lat(2);
  CHECK(c2.n == 2);
  CHECK(c2.bottom == 0);
  CHECK(c2.top == 1);
  CHECK(c2.atoms == std::vector<int>{1});
  CHECK(c2.leq(0, 1));
  CHECK_FALSE(c2.leq(1, 0));
  CHECK(c2.meet(0, 1) == 0);
  CHECK(c2.join(0, 1) == 1);

  FiniteLattice one = chain_lat(1);
  CHECK(one.bottom == 0);
  CHECK(one.top == 0);
  CHECK(one.atoms.empty());
}

TEST_CASE("from_order rejects malformed input") {
  CHECK_THROWS_AS(FiniteLattice::from_order(0, {}), Error);
  CHECK_THROWS_AS(FiniteLattice::from_order(2, {{0, 2}}), Error);  // out of range
  CHECK_THROWS_AS(FiniteLattice::from_order(2, {{0, 1}, {1, 0}}), Error);  // antisymmetry
  try {
    FiniteLattice::from_order(3, {{0, 1}, {1, 2}});  // closure not listed
    FAIL("expected transitivity rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
    CHECK(std::string(e.what()).find("transitive") != std::string::npos);
  }
  CHECK_THROWS_AS(FiniteLattice::from_order(2, {}), Error);  // no bottom
  // Two incomparable joins for {1,2}: bounds plus 1,2 < 3,4 < 5.
  CHECK_THROWS_AS(
      FiniteLattice::from_order(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5},
                                    {1, 3}, {1, 4}, {1, 5}, {2, 3}, {2, 4},
                                    {2, 5}, {3, 5}, {4, 5}}),
      Error);
}

TEST_CASE("boolean cube predicates are all positive") {
  FiniteLattice b3 = boolean_lat(3);
  CHECK(b3.n == 8);
  CHECK(b3.atoms == std::vector<int>{1, 2, 4});
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) {
      CHECK(b3.meet(x, y) == (x & y));
      CHECK(b3.join(x, y) == (x | y));
    }
  plg::LatPredicates p = plg::predicates(b3);
  CHECK(p.atomistic.holds);
  CHECK(p.modular.holds);
  CHECK(p.upper_semimodular.holds);
  CHECK(p.lower_semimodular.holds);
  CHECK(p.covering_law.holds);
  CHECK(p.intersection_property.holds);
  CHECK(p.atoms_compact.holds);
  CHECK(p.complete);
  CHECK(p.continuous);
  CHECK(p.projective());
  CHECK_FALSE(p.note.empty());
}

TEST_CASE("benzene predicates fail with pinned witnesses") {
  plg::LatPredicates p = plg::predicates(benzene_lat());
  CHECK_FALSE(p.atomistic.holds);
  CHECK(p.atomistic.witness == std::vector<int>{2});
  CHECK_FALSE(p.modular.holds);
  CHECK(p.modular.witness == std::vector<int>{1, 3, 2});
  CHECK_FALSE(p.upper_semimodular.holds);
  CHECK(p.upper_semimodular.witness == std::vector<int>{1, 3});
  CHECK_FALSE(p.lower_semimodular.holds);
  CHECK(p.lower_semimodular.witness == std::vector<int>{2, 4});
  CHECK_FALSE(p.covering_law.holds);
  CHECK(p.covering_law.witness == std::vector<int>{1, 3});
  // Both atoms sit under the join of the other with anything nontrivial.
  CHECK(p.intersection_property.holds);
  CHECK_FALSE(p.projective());
}

TEST_CASE("pentagon, hexagon and affine-plane flags") {
  plg::LatPredicates n5 = plg::predicates(n5_lat());
  CHECK_FALSE(n5.atomistic.holds);
  CHECK_FALSE(n5.modular.holds);
  CHECK(n5.modular.witness == std::vector<int>{1, 3, 2});

  plg::LatPredicates hx = plg::predicates(hexagon_lat());
  CHECK(hx.atomistic.holds);
  CHECK_FALSE(hx.modular.holds);
  CHECK(hx.modular.witness == std::vector<int>{1, 3, 4});
  CHECK_FALSE(hx.upper_semimodular.holds);
  CHECK_FALSE(hx.lower_semimodular.holds);
  CHECK_FALSE(hx.covering_law.holds);
  CHECK(hx.covering_law.witness == std::vector<int>{3, 1});
  CHECK_FALSE(hx.intersection_property.holds);
  CHECK(hx.intersection_property.witness == std::vector<int>{1, 2, 3});

  plg::LatPredicates ag = plg::predicates(ag22_lat());
  CHECK(ag.atomistic.holds);
  CHECK(ag.covering_law.holds);
  CHECK(ag.upper_semimodular.holds);
  CHECK_FALSE(ag.lower_semimodular.holds);
  CHECK_FALSE(ag.modular.holds);
  CHECK(ag.modular.witness == std::vector<int>{1, 8, 7});
  CHECK_FALSE(ag.intersection_property.holds);
  CHECK(ag.intersection_property.witness == std::vector<int>{1, 2, 10});
}

TEST_CASE("predicate implications hold across sample lattices") {
  std::vector<FiniteLattice> sample;
  sample.push_back(chain_lat(2));
  sample.push_back(chain_lat(4));
  sample.push_back(boolean_lat(3));
  sample.push_back(m3_lat());
  sample.push_back(benzene_lat());
  sample.push_back(n5_lat());
  sample.push_back(hexagon_lat());
  sample.push_back(ag22_lat());
  sample.push_back(plg::from_geometry(plg::from_vector_space(2, 3)).lat);
  sample.push_back(plg::from_geometry(plg::from_vector_space(3, 3)).lat);
  for (const FiniteLattice& l : sample) {
    plg::LatPredicates p = plg::predicates(l);
    if (p.modular.holds) {
      CHECK(p.upper_semimodular.holds);
      CHECK(p.lower_semimodular.holds);
    }
    if (p.atomistic.holds)
      CHECK(p.covering_law.holds == p.upper_semimodular.holds);
    if (p.lower_semimodular.holds && p.covering_law.holds)
      CHECK(p.intersection_property.holds);
    if (p.atomistic.holds)
      CHECK(p.modular.holds == p.intersection_property.holds);
  }
}

TEST_CASE("subspace lattice of the Fano plane") {
  Geometry fano = plg::from_vector_space(2, 3);
  SubspaceLattice sl = plg::from_geometry(fano);
  const FiniteLattice& l = sl.lat;
  REQUIRE(l.n == 16);
  CHECK(height(l) == 3);
  CHECK(l.bottom == 0);
  CHECK(l.top == 15);
  CHECK(sl.subspaces[l.bottom].none());
  CHECK(sl.subspaces[l.top].count() == 7);
  REQUIRE(l.atoms.size() == 7);
  for (int i = 0; i < 7; ++i)
    CHECK(sl.subspaces[l.atoms[i]] == Bits::of(7, {i}));

  // Tables against direct set computations.
  for (int x = 0; x < l.n; ++x)
    for (int y = 0; y < l.n; ++y) {
      CHECK(sl.subspaces[l.meet(x, y)] == (sl.subspaces[x] & sl.subspaces[y]));
      CHECK(sl.subspaces[l.join(x, y)] ==
            plg::closure(fano, sl.subspaces[x] | sl.subspaces[y]));
      CHECK(l.leq(x, y) == sl.subspaces[x].is_subset_of(sl.subspaces[y]));
    }

  plg::LatPredicates p = plg::predicates(l);
  CHECK(p.projective());
  CHECK(p.covering_law.holds);
  CHECK(p.intersection_property.holds);

  // Modularity against the closure identity, independently of the tables.
  for (int x = 0; x < l.n; ++x)
    for (int z = 0; z < l.n; ++z) {
      if (!sl.subspaces[x].is_subset_of(sl.subspaces[z])) continue;
      for (int y = 0; y < l.n; ++y) {
        Bits lhs = plg::closure(fano, sl.subspaces[x] | (sl.subspaces[y] & sl.subspaces[z]));
        Bits rhs = plg::closure(fano, sl.subspaces[x] | sl.subspaces[y]) & sl.subspaces[z];
        CHECK(lhs == rhs);
      }
    }
}

TEST_CASE("subspace lattices of small geometries") {
  SubspaceLattice pt = plg::from_geometry(Geometry(1, {}));
  CHECK(pt.lat.n == 2);
  CHECK(height(pt.lat) == 1);

  SubspaceLattice d3 = plg::from_geometry(Geometry(3, {}));
  CHECK(d3.lat.n == 8);
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    Bits s(3);
    for (int i = 0; i < 3; ++i)
      if (mask >> i & 1) s.set(i);
    CHECK(d3.index_of(s) >= 0);
  }
  CHECK(plg::predicates(d3.lat).projective());

  std::vector<int> pts = {0, 1, 2, 3};
  SubspaceLattice ln = plg::from_geometry(Geometry(4, {pts}));
  CHECK(ln.lat.n == 6);
  CHECK(ln.lat.atoms.size() == 4);
  CHECK(height(ln.lat) == 2);
  CHECK(plg::predicates(ln.lat).projective());

  SubspaceLattice pg23 = plg::from_geometry(plg::from_vector_space(3, 3));
  CHECK(pg23.lat.n == 28);
  CHECK(height(pg23.lat) == 3);
  CHECK(plg::predicates(pg23.lat).projective());
}

TEST_CASE("from_geometry preconditions and caps") {
  CHECK_THROWS_AS(plg::from_geometry(Geometry(5, {{0, 1, 2}, {0, 3, 4}})), Error);
  try {
    plg::from_geometry(plg::from_vector_space(2, 3), 10);
    FAIL("expected cap rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cap_exceeded);
  }
}

TEST_CASE("cover computation matches the order-only definition") {
  for (const FiniteLattice& l :
       {benzene_lat(), boolean_lat(3), hexagon_lat(), ag22_lat(),
        plg::from_geometry(plg::from_vector_space(2, 3)).lat}) {
    std::vector<Bits> cov = plg::upper_covers(l);
    for (int x = 0; x < l.n; ++x)
      for (int y = 0; y < l.n; ++y)
        CHECK(cov[x].test(y) == brute_cover(l, x, y));
    // Atoms are exactly the covers of bottom.
    for (int x = 0; x < l.n; ++x)
      CHECK(l.is_atom(x) == brute_cover(l, l.bottom, x));
  }
}

TEST_CASE("meet and join satisfy the lattice axioms") {
  for (const FiniteLattice& l :
       {benzene_lat(), boolean_lat(3), ag22_lat(),
        plg::from_geometry(plg::from_vector_space(2, 3)).lat})
    check_lattice_axioms(l);
}

TEST_CASE("atoms_geometry on passing lattices") {
  Geometry fano = plg::from_vector_space(2, 3);
  CHECK(plg::atoms_geometry(plg::from_geometry(fano).lat) == fano);
  CHECK(plg::atoms_geometry(boolean_lat(3)) == Geometry(3, {}));
  CHECK(plg::atoms_geometry(chain_lat(2)) == Geometry(1, {}));
  CHECK(plg::atoms_geometry(chain_lat(1)) == Geometry(0, {}));
  CHECK(plg::atoms_geometry(m3_lat()) == Geometry(3, {{0, 1, 2}}));

  Geometry line4 = Geometry(4, {{0, 1, 2, 3}});
  CHECK(plg::atoms_geometry(plg::from_geometry(line4).lat) == line4);
}

TEST_CASE("atoms_geometry names the failed predicate") {
  auto expect_gate = [](const FiniteLattice& l, const std::string& word) {
    try {
      plg::atoms_geometry(l);
      FAIL("expected precondition failure");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::precondition);
      CHECK(std::string(e.what()).find(word) != std::string::npos);
    }
  };
  expect_gate(benzene_lat(), "atomistic");
  expect_gate(hexagon_lat(), "covering");
  expect_gate(ag22_lat(), "intersection");
}

TEST_CASE("alpha round trip verifies on standard geometries") {
  for (const Geometry& g :
       {plg::from_vector_space(2, 3), plg::from_vector_space(3, 3),
        Geometry(4, {}), Geometry(5, {{0, 1, 2, 3, 4}}), Geometry(0, {})}) {
    plg::AlphaResult r = plg::alpha_iso(g);
    CHECK(r.verified);
    CHECK(r.morphism.target.n_points() == g.n_points());
  }
  // Canonical ordering makes the atom map the identity.
  plg::AlphaResult f = plg::alpha_iso(plg::from_vector_space(2, 3));
  std::vector<int> iota(7);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(f.morphism.map == iota);
}

TEST_CASE("beta round trip verifies and gates on modularity") {
  FiniteLattice fano_lat = plg::from_geometry(plg::from_vector_space(2, 3)).lat;
  plg::BetaResult r = plg::beta_iso(fano_lat);
  CHECK(r.verified);
  std::vector<int> iota(16);
  std::iota(iota.begin(), iota.end(), 0);
  CHECK(r.morphism.map == iota);

  CHECK(plg::beta_iso(boolean_lat(3)).verified);
  CHECK(plg::beta_iso(m3_lat()).verified);
  CHECK(plg::beta_iso(chain_lat(2)).verified);

  for (const FiniteLattice& l : {benzene_lat(), n5_lat(), hexagon_lat(), ag22_lat()}) {
    try {
      plg::beta_iso(l);
      FAIL("expected precondition failure");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::precondition);
    }
  }
}

TEST_CASE("lattice coproducts") {
  FiniteLattice fano_lat = plg::from_geometry(plg::from_vector_space(2, 3)).lat;

  plg::LatCoproductResult one = plg::lattice_coproduct({fano_lat});
  CHECK(one.lat.n == fano_lat.n);
  for (int x = 0; x < fano_lat.n; ++x)
    for (int y = 0; y < fano_lat.n; ++y) {
      CHECK(one.lat.meet(x, y) == fano_lat.meet(x, y));
      CHECK(one.lat.join(x, y) == fano_lat.join(x, y));
    }

  plg::LatCoproductResult sq = plg::lattice_coproduct({chain_lat(2), chain_lat(2)});
  CHECK(sq.lat.n == 4);
  CHECK(sq.lat.atoms.size() == 2);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      CHECK(sq.lat.meet(x, y) == (x & y));  // strides make ids subset masks
      CHECK(sq.lat.join(x, y) == (x | y));
    }

  plg::LatCoproductResult fc = plg::lattice_coproduct({fano_lat, chain_lat(2)});
  CHECK(fc.lat.n == 32);
  for (const LatMorphism& inj : fc.injections) CHECK(plg::check_lat_morphism(inj));
  CHECK(fc.lat.atoms.size() == 8);

  CHECK_THROWS_AS(plg::lattice_coproduct({}), Error);
  try {
    plg::lattice_coproduct({fano_lat, fano_lat}, 100);
    FAIL("expected cap rejection");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cap_exceeded);
  }
}

TEST_CASE("geometry coproduct and lattice coproduct agree") {
  Geometry fano = plg::from_vector_space(2, 3);
  Geometry line3 = Geometry(3, {{0, 1, 2}});
  plg::CoproductResult cop = plg::coproduct({fano, line3});
  SubspaceLattice s1 = plg::from_geometry(fano);
  SubspaceLattice s2 = plg::from_geometry(line3);
  SubspaceLattice sboth = plg::from_geometry(cop.geom);
  plg::LatCoproductResult prod = plg::lattice_coproduct({s1.lat, s2.lat});
  REQUIRE(prod.lat.n == sboth.lat.n);

  // Pair (i, j) corresponds to the union of the two component subspaces.
  std::vector<int> to_geo(prod.lat.n);
  for (int e = 0; e < prod.lat.n; ++e) {
    int i = e / prod.strides[0], j = e % prod.strides[0];
    Bits u(cop.geom.n_points());
    for (int p = 0; p < fano.n_points(); ++p)
      if (s1.subspaces[i].test(p)) u.set(p);
    for (int p = 0; p < line3.n_points(); ++p)
      if (s2.subspaces[j].test(p)) u.set(cop.offsets[1] + p);
    to_geo[e] = sboth.index_of(u);
    REQUIRE(to_geo[e] >= 0);
  }
  std::vector<bool> hit(prod.lat.n, false);
  for (int e : to_geo) {
    CHECK_FALSE(hit[e]);
    hit[e] = true;
  }
  for (int x = 0; x < prod.lat.n; ++x)
    for (int y = 0; y < prod.lat.n; ++y) {
      CHECK(prod.lat.leq(x, y) == sboth.lat.leq(to_geo[x], to_geo[y]));
      CHECK(to_geo[prod.lat.meet(x, y)] == sboth.lat.meet(to_geo[x], to_geo[y]));
      CHECK(to_geo[prod.lat.join(x, y)] == sboth.lat.join(to_geo[x], to_geo[y]));
    }
}

TEST_CASE("centers") {
  FiniteLattice fano_lat = plg::from_geometry(plg::from_vector_space(2, 3)).lat;
  CHECK(plg::center(fano_lat) == std::vector<int>{0, 15});
  CHECK(plg::center(benzene_lat()) == std::vector<int>{0, 5});
  CHECK(plg::center(m3_lat()) == std::vector<int>{0, 4});

  std::vector<int> all8(8);
  std::iota(all8.begin(), all8.end(), 0);
  CHECK(plg::center(boolean_lat(3)) == all8);

  plg::LatCoproductResult two = plg::lattice_coproduct({fano_lat, fano_lat});
  std::vector<int> c = plg::center(two.lat);
  CHECK(c == std::vector<int>{0, 15, 240, 255});  // (0,0), (0,1), (1,0), (1,1)

  // The center is a Boolean sublattice.
  for (const FiniteLattice* l :
       {&fano_lat, &two.lat}) {
    std::vector<int> ctr = plg::center(*l);
    auto in = [&](int x) { return std::find(ctr.begin(), ctr.end(), x) != ctr.end(); };
    CHECK(in(l->bottom));
    CHECK(in(l->top));
    for (int x : ctr) {
      bool complemented = false;
      for (int y : ctr) {
        CHECK(in(l->meet(x, y)));
        CHECK(in(l->join(x, y)));
        if (l->meet(x, y) == l->bottom && l->join(x, y) == l->top) complemented = true;
      }
      CHECK(complemented);
    }
    for (int x : ctr)
      for (int y : ctr)
        for (int z : ctr)
          CHECK(l->meet(x, l->join(y, z)) == l->join(l->meet(x, y), l->meet(x, z)));
  }
}

TEST_CASE("subspace image maps") {
  Geometry fano = plg::from_vector_space(2, 3);
  SubspaceLattice s1 = plg::from_geometry(fano);
  std::vector<int> iota7(7);
  std::iota(iota7.begin(), iota7.end(), 0);

  LatMorphism idm = plg::map_L(plg::identity_morphism(fano));
  std::vector<int> iota16(16);
  std::iota(iota16.begin(), iota16.end(), 0);
  CHECK(idm.map == iota16);

  // Coproduct injection: each subspace lands on its shifted copy.
  plg::CoproductResult cop = plg::coproduct({fano, fano});
  SubspaceLattice s2 = plg::from_geometry(cop.geom);
  LatMorphism fl = plg::map_L(cop.injections[0]);
  for (int s = 0; s < s1.lat.n; ++s) {
    Bits shifted(cop.geom.n_points());
    for (int p = 0; p < 7; ++p)
      if (s1.subspaces[s].test(p)) shifted.set(p);
    CHECK(s2.subspaces[fl.map[s]] == shifted);
  }

  // Constant morphism: every nonempty subspace lands on the atom.
  GeoMorphism cst = make_morphism(fano, fano, {3, 3, 3, 3, 3, 3, 3});
  REQUIRE(plg::check_morphism(cst));
  LatMorphism fc = plg::map_L(cst);
  int atom3 = s1.index_of(Bits::of(7, {3}));
  for (int s = 0; s < s1.lat.n; ++s)
    CHECK(fc.map[s] == (s == 0 ? 0 : atom3));

  // Kernel morphism onto a point: subspaces inside the kernel collapse.
  Geometry point(1, {});
  std::vector<int> to_pt(7, 0);
  Bits ker = fano.line_mask(0);
  for (int p = ker.next(0); p >= 0; p = ker.next(p + 1)) to_pt[p] = -1;
  GeoMorphism km = make_morphism(fano, point, to_pt);
  REQUIRE(plg::check_morphism(km));
  LatMorphism fk = plg::map_L(km);
  for (int s = 0; s < s1.lat.n; ++s)
    CHECK(fk.map[s] == (s1.subspaces[s].is_subset_of(ker) ? 0 : 1));
}

TEST_CASE("right adjoint of an injection image map restricts subspaces") {
  Geometry fano = plg::from_vector_space(2, 3);
  plg::CoproductResult cop = plg::coproduct({fano, fano});
  LatMorphism f = plg::map_L(cop.injections[0]);
  std::vector<int> g = plg::right_adjoint(f);

  SubspaceLattice s1 = plg::from_geometry(fano);
  SubspaceLattice s2 = plg::from_geometry(cop.geom);
  for (int t = 0; t < s2.lat.n; ++t) {
    Bits restr(7);
    for (int p = 0; p < 7; ++p)
      if (s2.subspaces[t].test(p)) restr.set(p);
    CHECK(g[t] == s1.index_of(restr));
  }
  // Unit and counit of the adjunction.
  for (int x = 0; x < f.source.n; ++x) CHECK(f.source.leq(x, g[f.map[x]]));
  for (int y = 0; y < f.target.n; ++y) CHECK(f.target.leq(f.map[g[y]], y));
}

TEST_CASE("atom maps from lattice morphisms") {
  FiniteLattice fano_lat = plg::from_geometry(plg::from_vector_space(2, 3)).lat;
  LatMorphism idf;
  idf.source = fano_lat;
  idf.target = fano_lat;
  idf.map.resize(16);
  std::iota(idf.map.begin(), idf.map.end(), 0);
  REQUIRE(plg::check_lat_morphism(idf));
  GeoMorphism g = plg::map_G(idf);
  std::vector<int> iota7(7);
  std::iota(iota7.begin(), iota7.end(), 0);
  CHECK(g.map == iota7);
  CHECK(g.kernel.none());

  // Projection of the cube onto a square: one atom falls into the kernel.
  LatMorphism proj;
  proj.source = boolean_lat(3);
  proj.target = boolean_lat(2);
  for (int x = 0; x < 8; ++x) proj.map.push_back(x & 3);
  REQUIRE(plg::check_lat_morphism(proj));
  GeoMorphism gp = plg::map_G(proj);
  CHECK(gp.map == std::vector<int>{0, 1, -1});
  CHECK(gp.kernel == Bits::of(3, {2}));

  // The beta map induces the identity on atoms.
  GeoMorphism gb = plg::map_G(plg::beta_iso(fano_lat).morphism);
  CHECK(gb.map == iota7);

  // Sending an atom to a non-atom is rejected.
  LatMorphism bad;
  bad.source = chain_lat(2);
  bad.target = boolean_lat(2);
  bad.map = {0, 3};
  try {
    plg::map_G(bad);
    FAIL("expected precondition failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }
}

TEST_CASE("right adjoint basics") {
  FiniteLattice b3 = boolean_lat(3);
  LatMorphism idm;
  idm.source = b3;
  idm.target = b3;
  idm.map.resize(8);
  std::iota(idm.map.begin(), idm.map.end(), 0);
  std::vector<int> g = plg::right_adjoint(idm);
  CHECK(g == idm.map);

  // Meet with a constant in a Boolean cube: adjoint joins the complement.
  LatMorphism mc;
  mc.source = b3;
  mc.target = b3;
  for (int x = 0; x < 8; ++x) mc.map.push_back(x & 3);
  std::vector<int> adj = plg::right_adjoint(mc);
  for (int y = 0; y < 8; ++y) CHECK(adj[y] == (y | 4));

  // Meet with an atom of the diamond is not join-preserving.
  LatMorphism nm;
  nm.source = m3_lat();
  nm.target = m3_lat();
  for (int x = 0; x < 5; ++x) nm.map.push_back(x == 1 || x == 4 ? 1 : 0);
  try {
    plg::right_adjoint(nm);
    FAIL("expected precondition failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
    CHECK(std::string(e.what()).find("(2,3)") != std::string::npos);
  }
}
