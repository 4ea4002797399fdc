#include "plg/lattice.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>

#include "plg/error.hpp"
#include "plg/parallel.hpp"

namespace plg {

namespace {

constexpr int kTableLimit = 65535;  // uint16 meet/join tables

std::string pair_str(int a, int b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

// Fills meet/join tables.  `sorted_by_size` marks the canonical subspace
// ordering (index order refines the size order), where the least common
// upper bound is simply the first common element of the up rows; the
// generic path searches for the unique dominating bound and rejects
// non-lattices.
void build_tables(FiniteLattice& l, bool sorted_by_size) {
  const int n = l.n;
  l.meet_t.assign(static_cast<std::size_t>(n) * n, 0);
  l.join_t.assign(static_cast<std::size_t>(n) * n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      int mt, jn;
      if (sorted_by_size) {
        mt = l.down[x].last_common(l.down[y]);
        jn = l.up[x].first_common(l.up[y]);
      } else {
        Bits common = l.down[x] & l.down[y];
        mt = -1;
        for (int c = common.next(0); c >= 0; c = common.next(c + 1))
          if (common.is_subset_of(l.down[c])) {
            if (mt >= 0) fail(Errc::invalid_input, "order has two meets for " + pair_str(x, y));
            mt = c;
          }
        Bits upper = l.up[x] & l.up[y];
        jn = -1;
        for (int c = upper.next(0); c >= 0; c = upper.next(c + 1))
          if (upper.is_subset_of(l.up[c])) {
            if (jn >= 0) fail(Errc::invalid_input, "order has two joins for " + pair_str(x, y));
            jn = c;
          }
      }
      if (mt < 0) fail(Errc::invalid_input, "not a lattice: no meet for " + pair_str(x, y));
      if (jn < 0) fail(Errc::invalid_input, "not a lattice: no join for " + pair_str(x, y));
      l.meet_t[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(mt);
      l.meet_t[static_cast<std::size_t>(y) * n + x] = static_cast<std::uint16_t>(mt);
      l.join_t[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(jn);
      l.join_t[static_cast<std::size_t>(y) * n + x] = static_cast<std::uint16_t>(jn);
    }
}

void find_bounds_and_atoms(FiniteLattice& l) {
  l.bottom = l.top = -1;
  for (int x = 0; x < l.n; ++x) {
    if (l.up[x].count() == l.n) {
      if (l.bottom >= 0) fail(Errc::invalid_input, "order has two bottoms");
      l.bottom = x;
    }
    if (l.down[x].count() == l.n) {
      if (l.top >= 0) fail(Errc::invalid_input, "order has two tops");
      l.top = x;
    }
  }
  if (l.bottom < 0) fail(Errc::invalid_input, "order has no bottom");
  if (l.top < 0) fail(Errc::invalid_input, "order has no top");
  l.atoms.clear();
  for (int x = 0; x < l.n; ++x)
    if (l.is_atom(x)) l.atoms.push_back(x);
}

}  // namespace

FiniteLattice FiniteLattice::from_order(int n, const std::vector<std::pair<int, int>>& leq_pairs) {
  if (n < 1) fail(Errc::invalid_input, "lattice: need at least one element");
  if (n > kTableLimit) fail(Errc::cap_exceeded, "lattice: too many elements");
  FiniteLattice l;
  l.n = n;
  l.up.assign(n, Bits(n));
  l.down.assign(n, Bits(n));
  for (auto [x, y] : leq_pairs) {
    if (x < 0 || x >= n || y < 0 || y >= n)
      fail(Errc::invalid_input, "lattice: element out of range in pair " + pair_str(x, y));
    l.up[x].set(y);
    l.down[y].set(x);
  }
  for (int x = 0; x < n; ++x) {
    l.up[x].set(x);
    l.down[x].set(x);
  }
  for (int x = 0; x < n; ++x)
    for (int y = l.up[x].next(0); y >= 0; y = l.up[x].next(y + 1)) {
      if (y != x && l.up[y].test(x))
        fail(Errc::invalid_input, "order not antisymmetric at " + pair_str(x, y));
      if (!l.up[y].is_subset_of(l.up[x])) {
        Bits missing = l.up[y];
        missing.subtract(l.up[x]);
        fail(Errc::invalid_input, "order not transitive: " + pair_str(x, y) + " <= " +
                                      std::to_string(missing.next(0)) + " missing");
      }
    }
  find_bounds_and_atoms(l);
  build_tables(l, /*sorted_by_size=*/false);
  return l;
}

std::vector<Bits> upper_covers(const FiniteLattice& l) {
  std::vector<Bits> cov(l.n, Bits(l.n));
  for (int x = 0; x < l.n; ++x)
    for (int y = l.up[x].next(0); y >= 0; y = l.up[x].next(y + 1)) {
      if (y == x) continue;
      if ((l.down[y] & l.up[x]).count() == 2) cov[x].set(y);
    }
  return cov;
}

SubspaceLattice from_geometry(const Geometry& g, std::int64_t cap) {
  GeoAxiomReport rep = check_axioms(g);
  if (!rep.ok())
    fail(Errc::precondition, "from_geometry: axioms fail (" + rep.detail + ")");

  SubspaceLattice sl;
  sl.geom = g;
  sl.subspaces = all_subspaces(g, cap);
  const int n = static_cast<int>(sl.subspaces.size());
  if (n > kTableLimit) fail(Errc::cap_exceeded, "from_geometry: lattice too large");
  for (int i = 0; i < n; ++i) sl.index.emplace(sl.subspaces[i], i);

  FiniteLattice& l = sl.lat;
  l.n = n;
  l.up.assign(n, Bits(n));
  l.down.assign(n, Bits(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (sl.subspaces[x].is_subset_of(sl.subspaces[y])) {
        l.up[x].set(y);
        l.down[y].set(x);
      }
  find_bounds_and_atoms(l);
  build_tables(l, /*sorted_by_size=*/true);

  // Canonical ordering facts this module relies on elsewhere.
  assert(l.bottom == 0);
  assert(l.top == n - 1 || g.n_points() == 0);
  assert(static_cast<int>(l.atoms.size()) == g.n_points());
  return sl;
}

namespace {

PredFlag check_atomistic(const FiniteLattice& l) {
  PredFlag f;
  for (int x = 0; x < l.n; ++x) {
    int j = l.bottom;
    for (int a : l.atoms)
      if (l.leq(a, x)) j = l.join(j, a);
    if (j != x) {
      f.holds = false;
      f.witness = {x};
      return f;
    }
  }
  return f;
}

PredFlag check_modular(const FiniteLattice& l) {
  // x <= z  =>  x v (y ^ z) == (x v y) ^ z, scanned in (x, y, z) order.
  // Chunked over x; each chunk keeps its first witness, and the lowest
  // chunk with a witness wins, which makes the result deterministic
  // regardless of worker count.
  const int n = l.n;
  std::vector<PredFlag> parts;
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  std::mutex mu;
  parallel_chunks(n, [&](std::int64_t lo, std::int64_t hi) {
    PredFlag mine;
    for (std::int64_t x = lo; x < hi && mine.holds; ++x)
      for (int y = 0; y < n && mine.holds; ++y) {
        const std::uint16_t* mrow = &l.meet_t[static_cast<std::size_t>(y) * n];
        for (int z = l.up[x].next(0); z >= 0; z = l.up[x].next(z + 1)) {
          int lhs = l.join(static_cast<int>(x), mrow[z]);
          int rhs = l.meet(l.join(static_cast<int>(x), y), z);
          if (lhs != rhs) {
            mine.holds = false;
            mine.witness = {static_cast<int>(x), y, z};
            break;
          }
        }
      }
    std::lock_guard<std::mutex> lk(mu);
    ranges.emplace_back(lo, hi);
    parts.push_back(std::move(mine));
  });
  // Pick the failing chunk with the smallest range start.
  PredFlag out;
  std::int64_t best = -1;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (!parts[i].holds && (best < 0 || ranges[i].first < best)) {
      best = ranges[i].first;
      out = parts[i];
    }
  return out;
}

PredFlag check_upper_semimodular(const FiniteLattice& l, const std::vector<Bits>& cov) {
  PredFlag f;
  for (int u = 0; u < l.n; ++u)
    for (int v = 0; v < l.n; ++v)
      if (cov[l.meet(u, v)].test(v) && !cov[u].test(l.join(u, v))) {
        f.holds = false;
        f.witness = {u, v};
        return f;
      }
  return f;
}

PredFlag check_lower_semimodular(const FiniteLattice& l, const std::vector<Bits>& cov) {
  PredFlag f;
  for (int u = 0; u < l.n; ++u)
    for (int v = 0; v < l.n; ++v)
      if (cov[u].test(l.join(u, v)) && !cov[l.meet(u, v)].test(v)) {
        f.holds = false;
        f.witness = {u, v};
        return f;
      }
  return f;
}

PredFlag check_covering_law(const FiniteLattice& l, const std::vector<Bits>& cov) {
  PredFlag f;
  for (int a : l.atoms)
    for (int x = 0; x < l.n; ++x)
      if (l.meet(a, x) == l.bottom && !cov[x].test(l.join(a, x))) {
        f.holds = false;
        f.witness = {a, x};
        return f;
      }
  return f;
}

PredFlag check_intersection_property(const FiniteLattice& l) {
  PredFlag f;
  for (int p : l.atoms)
    for (int q : l.atoms) {
      if (p == q) continue;
      int pq = l.join(p, q);
      for (int x = 0; x < l.n; ++x)
        if (l.leq(p, l.join(q, x)) && l.meet(pq, x) == l.bottom) {
          f.holds = false;
          f.witness = {p, q, x};
          return f;
        }
    }
  return f;
}

}  // namespace

LatPredicates predicates(const FiniteLattice& l) {
  LatPredicates r;
  std::vector<Bits> cov = upper_covers(l);
  r.atomistic = check_atomistic(l);
  r.modular = check_modular(l);
  r.upper_semimodular = check_upper_semimodular(l, cov);
  r.lower_semimodular = check_lower_semimodular(l, cov);
  r.covering_law = check_covering_law(l, cov);
  r.intersection_property = check_intersection_property(l);
  r.note = "complete, continuous and compact atoms hold automatically in a "
           "finite lattice (every subset has a join; a directed set contains "
           "its supremum)";
  return r;
}

Geometry atoms_geometry(const FiniteLattice& l) {
  if (!check_atomistic(l).holds)
    fail(Errc::precondition, "atoms_geometry: lattice is not atomistic");
  std::vector<Bits> cov = upper_covers(l);
  if (!check_covering_law(l, cov).holds)
    fail(Errc::precondition, "atoms_geometry: covering law fails");
  if (!check_intersection_property(l).holds)
    fail(Errc::precondition, "atoms_geometry: intersection property fails");

  const int na = static_cast<int>(l.atoms.size());
  std::vector<int> pos(l.n, -1);
  for (int i = 0; i < na; ++i) pos[l.atoms[i]] = i;

  // A line is the atom set under the join of two distinct atoms; collect
  // one copy per join element and keep the ones with at least 3 points.
  std::vector<std::vector<int>> lines;
  std::vector<bool> seen(l.n, false);
  for (int i = 0; i < na; ++i)
    for (int j = i + 1; j < na; ++j) {
      int e = l.join(l.atoms[i], l.atoms[j]);
      if (seen[e]) continue;
      seen[e] = true;
      std::vector<int> ln;
      for (int k = 0; k < na; ++k)
        if (l.leq(l.atoms[k], e)) ln.push_back(k);
      if (ln.size() >= 3) lines.push_back(std::move(ln));
    }
  Geometry g(na, std::move(lines), Provenance::generated);
  GeoAxiomReport rep = check_axioms(g);
  if (!rep.ok()) fail(Errc::internal, "atoms_geometry: result violates axioms: " + rep.detail);
  return g;
}

AlphaResult alpha_iso(const Geometry& g, std::int64_t cap) {
  AlphaResult res;
  SubspaceLattice sl = from_geometry(g, cap);
  Geometry ag = atoms_geometry(sl.lat);

  res.morphism.source = g;
  res.morphism.target = ag;
  res.morphism.kernel = Bits(g.n_points());
  res.morphism.map.resize(g.n_points());
  for (int a = 0; a < g.n_points(); ++a) {
    int eid = sl.index_of(Bits::of(g.n_points(), {a}));
    if (eid < 0) fail(Errc::internal, "alpha_iso: singleton subspace missing");
    auto it = std::lower_bound(sl.lat.atoms.begin(), sl.lat.atoms.end(), eid);
    if (it == sl.lat.atoms.end() || *it != eid)
      fail(Errc::internal, "alpha_iso: singleton is not an atom");
    res.morphism.map[a] = static_cast<int>(it - sl.lat.atoms.begin());
  }
  res.verified = is_isomorphism(res.morphism);
  return res;
}

BetaResult beta_iso(const FiniteLattice& l) {
  if (!check_modular(l).holds)
    fail(Errc::precondition, "beta_iso: lattice is not modular");
  Geometry ag = atoms_geometry(l);  // gates the other three predicates
  SubspaceLattice sl = from_geometry(ag);

  BetaResult res;
  res.morphism.source = l;
  res.morphism.target = sl.lat;
  res.morphism.map.resize(l.n);
  for (int x = 0; x < l.n; ++x) {
    Bits s(ag.n_points());
    for (std::size_t i = 0; i < l.atoms.size(); ++i)
      if (l.leq(l.atoms[i], x)) s.set(static_cast<int>(i));
    int e = sl.index_of(s);
    if (e < 0) {  // atom set of x is not a subspace: not an isomorphism
      res.verified = false;
      return res;
    }
    res.morphism.map[x] = e;
  }

  // Order isomorphism: bijective, preserving and reflecting.
  res.verified = true;
  if (sl.lat.n != l.n) res.verified = false;
  std::vector<bool> hit(sl.lat.n, false);
  for (int x = 0; x < l.n && res.verified; ++x) {
    int y = res.morphism.map[x];
    if (hit[y]) res.verified = false;
    hit[y] = true;
  }
  for (int x = 0; x < l.n && res.verified; ++x)
    for (int y = 0; y < l.n && res.verified; ++y)
      if (l.leq(x, y) != sl.lat.leq(res.morphism.map[x], res.morphism.map[y]))
        res.verified = false;
  return res;
}

LatCoproductResult lattice_coproduct(const std::vector<FiniteLattice>& ls, std::int64_t cap) {
  if (ls.empty()) fail(Errc::invalid_input, "lattice_coproduct: empty factor list");
  LatCoproductResult res;
  std::int64_t total = 1;
  for (const auto& f : ls) {
    total *= f.n;
    if (total > cap) fail(Errc::cap_exceeded, "lattice_coproduct: product size exceeds cap");
  }
  if (total > kTableLimit) fail(Errc::cap_exceeded, "lattice_coproduct: product too large");
  const int k = static_cast<int>(ls.size());
  const int n = static_cast<int>(total);

  res.strides.assign(k, 1);
  for (int i = k - 2; i >= 0; --i) res.strides[i] = res.strides[i + 1] * ls[i + 1].n;

  auto digit = [&](int e, int i) { return e / res.strides[i] % ls[i].n; };

  FiniteLattice& l = res.lat;
  l.n = n;
  l.up.assign(n, Bits(n));
  l.down.assign(n, Bits(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      bool le = true;
      for (int i = 0; i < k && le; ++i)
        if (!ls[i].leq(digit(x, i), digit(y, i))) le = false;
      if (le) {
        l.up[x].set(y);
        l.down[y].set(x);
      }
    }
  l.meet_t.assign(static_cast<std::size_t>(n) * n, 0);
  l.join_t.assign(static_cast<std::size_t>(n) * n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int mt = 0, jn = 0;
      for (int i = 0; i < k; ++i) {
        mt += ls[i].meet(digit(x, i), digit(y, i)) * res.strides[i];
        jn += ls[i].join(digit(x, i), digit(y, i)) * res.strides[i];
      }
      l.meet_t[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(mt);
      l.join_t[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(jn);
    }
  find_bounds_and_atoms(l);

  for (int i = 0; i < k; ++i) {
    LatMorphism inj;
    inj.source = ls[i];
    inj.target = l;
    inj.map.resize(ls[i].n);
    for (int x = 0; x < ls[i].n; ++x) {
      int e = 0;
      for (int j = 0; j < k; ++j)
        e += (j == i ? x : ls[j].bottom) * res.strides[j];
      inj.map[x] = e;
    }
    res.injections.push_back(std::move(inj));
  }
  return res;
}

std::vector<int> center(const FiniteLattice& l) {
  std::vector<int> out;
  const int n = l.n;
  for (int z = 0; z < n; ++z) {
    bool central = false;
    for (int zc = 0; zc < n && !central; ++zc) {
      if (l.meet(z, zc) != l.bottom || l.join(z, zc) != l.top) continue;
      // Cheap necessary condition first: x = (x^z) v (x^z').
      bool ok = true;
      for (int x = 0; x < n && ok; ++x)
        if (l.join(l.meet(x, z), l.meet(x, zc)) != x) ok = false;
      if (!ok) continue;
      // Full check: x |-> (x^z, x^z') is a bijection onto [0,z] x [0,z']
      // preserving and reflecting order.
      if (static_cast<std::int64_t>(l.down[z].count()) * l.down[zc].count() != n) continue;
      std::vector<int> uz(n), uc(n);
      for (int x = 0; x < n; ++x) {
        uz[x] = l.meet(x, z);
        uc[x] = l.meet(x, zc);
      }
      std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);
      ok = true;
      for (int x = 0; x < n && ok; ++x) {
        std::size_t key = static_cast<std::size_t>(uz[x]) * n + uc[x];
        if (seen[key]) ok = false;
        seen[key] = true;
      }
      for (int x = 0; x < n && ok; ++x)
        for (int y = 0; y < n && ok; ++y)
          if (l.leq(x, y) != (l.leq(uz[x], uz[y]) && l.leq(uc[x], uc[y]))) ok = false;
      central = ok;
    }
    if (central) out.push_back(z);
  }
  return out;
}

Bits pullback_points(const GeoMorphism& m, const Bits& target_set) {
  Bits pre = m.kernel;
  for (int x = 0; x < m.source.n_points(); ++x)
    if (m.map[x] >= 0 && target_set.test(m.map[x])) pre.set(x);
  return pre;
}

LatMorphism map_L(const GeoMorphism& m, std::int64_t cap) {
  SubspaceLattice s1 = from_geometry(m.source, cap);
  SubspaceLattice s2 = from_geometry(m.target, cap);

  std::vector<Bits> gstar;
  gstar.reserve(s2.lat.n);
  for (const auto& t : s2.subspaces) gstar.push_back(pullback_points(m, t));

  LatMorphism f;
  f.map.resize(s1.lat.n);
  for (int s = 0; s < s1.lat.n; ++s) {
    Bits acc(m.target.n_points());
    acc.set_all();
    for (int t = 0; t < s2.lat.n; ++t)
      if (s1.subspaces[s].is_subset_of(gstar[t])) acc &= s2.subspaces[t];
    int e = s2.index_of(acc);
    if (e < 0) fail(Errc::internal, "map_L: intersection of subspaces missing from lattice");
    f.map[s] = e;
  }
  f.source = std::move(s1.lat);
  f.target = std::move(s2.lat);
  if (!check_lat_morphism(f))
    fail(Errc::internal, "map_L: result is not a lattice morphism");
  return f;
}

GeoMorphism map_G(const LatMorphism& f) {
  GeoMorphism g;
  g.source = atoms_geometry(f.source);
  g.target = atoms_geometry(f.target);
  const auto& a1 = f.source.atoms;
  const auto& a2 = f.target.atoms;
  g.kernel = Bits(static_cast<int>(a1.size()));
  g.map.assign(a1.size(), -1);
  for (std::size_t i = 0; i < a1.size(); ++i) {
    int e = f.map[a1[i]];
    if (e == f.target.bottom) {
      g.kernel.set(static_cast<int>(i));
      continue;
    }
    auto it = std::lower_bound(a2.begin(), a2.end(), e);
    if (it == a2.end() || *it != e)
      fail(Errc::precondition, "map_G: morphism sends an atom to a non-atom");
    g.map[i] = static_cast<int>(it - a2.begin());
  }
  if (!check_morphism(g))
    fail(Errc::precondition, "map_G: input does not induce a geometry morphism");
  return g;
}

bool check_lat_morphism(const LatMorphism& f) {
  if (static_cast<int>(f.map.size()) != f.source.n) return false;
  for (int x : f.map)
    if (x < 0 || x >= f.target.n) return false;
  if (f.map[f.source.bottom] != f.target.bottom) return false;
  for (int x = 0; x < f.source.n; ++x)
    for (int y = x + 1; y < f.source.n; ++y)
      if (f.map[f.source.join(x, y)] != f.target.join(f.map[x], f.map[y])) return false;
  for (int a : f.source.atoms) {
    int e = f.map[a];
    if (e != f.target.bottom && !f.target.is_atom(e)) return false;
  }
  return true;
}

std::vector<int> right_adjoint(const LatMorphism& f) {
  const FiniteLattice& s = f.source;
  const FiniteLattice& t = f.target;
  if (static_cast<int>(f.map.size()) != s.n)
    fail(Errc::invalid_input, "right_adjoint: malformed map");
  if (f.map[s.bottom] != t.bottom)
    fail(Errc::precondition, "right_adjoint: map does not preserve the empty join");
  for (int x = 0; x < s.n; ++x)
    for (int y = x + 1; y < s.n; ++y)
      if (f.map[s.join(x, y)] != t.join(f.map[x], f.map[y]))
        fail(Errc::precondition, "right_adjoint: not join-preserving at " + pair_str(x, y));

  std::vector<int> g(t.n);
  for (int y = 0; y < t.n; ++y) {
    int acc = s.bottom;
    for (int x = 0; x < s.n; ++x)
      if (t.leq(f.map[x], y)) acc = s.join(acc, x);
    g[y] = acc;
  }
  for (int x = 0; x < s.n; ++x)
    for (int y = 0; y < t.n; ++y)
      if (t.leq(f.map[x], y) != s.leq(x, g[y]))
        fail(Errc::internal, "right_adjoint: adjunction law fails at " + pair_str(x, y));
  return g;
}

}  // namespace plg
