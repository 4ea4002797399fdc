#include "plg/ortho.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>

#include "plg/error.hpp"
#include "plg/parallel.hpp"

namespace plg {

namespace {

std::string pair_str(int a, int b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

std::string set_str(const Bits& s) {
  std::string out = "{";
  for (int i = s.next(0); i >= 0; i = s.next(i + 1)) {
    if (out.size() > 1) out += ",";
    out += std::to_string(i);
  }
  return out + "}";
}

// Pointwise orthogonal set, no subspace verification.  The intersection
// over an empty index set is the full point set.
Bits raw_perp(const OrthoGeometry& og, const Bits& s) {
  Bits p(og.n_points());
  p.set_all();
  for (int a = s.next(0); a >= 0; a = s.next(a + 1)) p &= og.perp_row(a);
  return p;
}

Bits raw_biperp(const OrthoGeometry& og, const Bits& s) {
  return raw_perp(og, raw_perp(og, s));
}

const char* first_failed_axiom(const OrthoAxiomReport& r) {
  if (!r.o1.holds) return "O1";
  if (!r.o2.holds) return "O2";
  if (!r.o3.holds) return "O3";
  if (!r.o4.holds) return "O4";
  return "O5";
}

void require_verified(const OrthoGeometry& og, std::int64_t cap, const char* caller) {
  OrthoAxiomReport rep = check_ortho_axioms(og, cap);
  if (!rep.ok())
    fail(Errc::precondition, std::string(caller) + ": orthogonality axioms fail (" +
                                 first_failed_axiom(rep) + ")");
}

void validate_perp_map(const FiniteLattice& l, const std::vector<int>& perp,
                       const char* caller) {
  if (static_cast<int>(perp.size()) != l.n)
    fail(Errc::invalid_input, std::string(caller) + ": perp map has wrong size");
  for (int x : perp)
    if (x < 0 || x >= l.n)
      fail(Errc::invalid_input, std::string(caller) + ": perp map out of range");
}

// The five closure properties of an ortho lattice; violations are internal
// because every construction in this module derives the perp map from a
// structure where they are theorems.
void verify_h_axioms(const FiniteLattice& l, const std::vector<int>& perp,
                     const char* caller) {
  const int n = l.n;
  auto pp = [&](int x) { return perp[perp[x]]; };
  for (int x = 0; x < n; ++x)
    if (!l.leq(x, pp(x)))
      fail(Errc::internal, std::string(caller) + ": x <= x'' fails at " + std::to_string(x));
  for (int x = 0; x < n; ++x)
    for (int y = l.up[x].next(0); y >= 0; y = l.up[x].next(y + 1))
      if (!l.leq(perp[y], perp[x]))
        fail(Errc::internal, std::string(caller) + ": perp is not antitone at " + pair_str(x, y));
  for (int x = 0; x < n; ++x)
    if (l.meet(x, perp[x]) != l.bottom)
      fail(Errc::internal, std::string(caller) + ": x ^ x' != 0 at " + std::to_string(x));
  for (int x = 0; x < n; ++x) {
    if (pp(x) != x) continue;
    for (int a : l.atoms) {
      int j = l.join(a, x);
      if (pp(j) != j)
        fail(Errc::internal,
             std::string(caller) + ": atom join leaves the closed elements at " + pair_str(a, x));
    }
    if (l.join(x, perp[x]) != l.top)
      fail(Errc::internal, std::string(caller) + ": x v x' != 1 at closed " + std::to_string(x));
  }
}

// Involution + complement laws + antitonicity, reported with the first
// offending element tuple.
PredFlag orthocomplement_flag(const FiniteLattice& l, const std::vector<int>& perp) {
  for (int x = 0; x < l.n; ++x)
    if (perp[perp[x]] != x) return {false, {x}};
  for (int x = 0; x < l.n; ++x)
    if (l.meet(x, perp[x]) != l.bottom || l.join(x, perp[x]) != l.top) return {false, {x}};
  for (int x = 0; x < l.n; ++x)
    for (int y = l.up[x].next(0); y >= 0; y = l.up[x].next(y + 1))
      if (!l.leq(perp[y], perp[x])) return {false, {x, y}};
  return {};
}

const char* first_failed_prop(const PropSystemReport& r) {
  if (!r.orthocomplementation.holds) return "orthocomplementation";
  if (!r.orthomodular.holds) return "orthomodular law";
  if (!r.atomistic.holds) return "atomistic";
  return "covering law";
}

std::vector<int> minimal_nonbottom(const FiniteLattice& l, const std::vector<int>& elems) {
  std::vector<int> out;
  for (int z : elems) {
    if (z == l.bottom) continue;
    bool minimal = true;
    for (int w : elems)
      if (w != l.bottom && w != z && l.leq(w, z)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(z);
  }
  return out;
}

}  // namespace

OrthoGeometry::OrthoGeometry(Geometry g, const std::vector<std::pair<int, int>>& pairs)
    : geom_(std::move(g)) {
  rows_.assign(geom_.n_points(), Bits(geom_.n_points()));
  for (auto [a, b] : pairs) {
    geom_.check_point(a);
    geom_.check_point(b);
    if (a == b)
      fail(Errc::invalid_input, "orthogonality must be irreflexive, got " + pair_str(a, b));
    rows_[a].set(b);
    rows_[b].set(a);
  }
}

bool OrthoGeometry::perp(int a, int b) const {
  geom_.check_point(a);
  geom_.check_point(b);
  return rows_[a].test(b);
}

const Bits& OrthoGeometry::perp_row(int a) const {
  geom_.check_point(a);
  return rows_[a];
}

std::vector<std::pair<int, int>> OrthoGeometry::ortho_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < geom_.n_points(); ++a)
    for (int b = rows_[a].next(a + 1); b >= 0; b = rows_[a].next(b + 1))
      out.emplace_back(a, b);
  return out;
}

bool OrthoGeometry::operator==(const OrthoGeometry& o) const {
  return geom_ == o.geom_ && rows_ == o.rows_;
}

OrthoAxiomReport check_ortho_axioms(const OrthoGeometry& og, std::int64_t cap) {
  if (og.report_) return *og.report_;
  GeoAxiomReport ga = check_axioms(og.geom());
  if (!ga.ok())
    fail(Errc::precondition, "check_ortho_axioms: geometry axioms fail (" + ga.detail + ")");
  const Geometry& g = og.geom();
  const int n = g.n_points();
  OrthoAxiomReport r;

  // O1/O2 are structural for relations built through the constructor; scan
  // anyway so the report never relies on how the object was produced.
  for (int a = 0; a < n && r.o1.holds; ++a)
    if (og.perp_row(a).test(a)) r.o1 = {false, {a}};
  for (int a = 0; a < n && r.o2.holds; ++a)
    for (int b = a + 1; b < n; ++b)
      if (og.perp_row(a).test(b) != og.perp_row(b).test(a)) {
        r.o2 = {false, {a, b}};
        break;
      }

  // O3: each point-perp is closed under lines.
  for (int p = 0; p < n && r.o3.holds; ++p) {
    const Bits& row = og.perp_row(p);
    for (int a = row.next(0); a >= 0 && r.o3.holds; a = row.next(a + 1))
      for (int b = row.next(a + 1); b >= 0; b = row.next(b + 1)) {
        Bits ls = g.line_set(a, b);
        if (!ls.is_subset_of(row)) {
          Bits missing = ls;
          missing.subtract(row);
          r.o3 = {false, {a, b, missing.next(0), p}};
          break;
        }
      }
  }

  // O4: the line through two distinct points meets the perp of each end.
  for (int a = 0; a < n && r.o4.holds; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      if (!g.line_set(a, b).intersects(og.perp_row(a))) {
        r.o4 = {false, {a, b}};
        break;
      }
    }

  // O5 over every subspace, counting the closed ones.  A closed subspace
  // must split the geometry; a subspace that splits must be closed, so a
  // non-closed splitter is flagged too.
  Bits all = g.all_points();
  int n_closed = 0, n_subs = 0;
  for (const Bits& s : all_subspaces(g, cap)) {
    ++n_subs;
    Bits p = raw_perp(og, s);
    bool closed = raw_perp(og, p) == s;
    if (closed) ++n_closed;
    if (!r.o5.holds) continue;
    bool splits = closure(g, s | p) == all;
    if (closed && !splits) {
      r.o5 = {false, s.to_vector()};
      r.detail = "closed subspace " + set_str(s) + " does not split the geometry";
    } else if (!closed && splits) {
      r.o5 = {false, s.to_vector()};
      r.detail = "non-closed subspace " + set_str(s) + " splits the geometry";
    }
  }
  if (r.o5.holds)
    r.detail = std::to_string(n_closed) + " of " + std::to_string(n_subs) + " subspaces closed";

  // Cross-validation: O6 strengthens O4 by an arbitrary reference point,
  // O7 forbids isolated points, separation distinguishes distinct points.
  for (int a = 0; a < n && r.o6.holds; ++a)
    for (int b = 0; b < n && r.o6.holds; ++b) {
      if (a == b) continue;
      Bits ls = g.line_set(a, b);
      for (int p = 0; p < n; ++p)
        if (!ls.intersects(og.perp_row(p))) {
          r.o6 = {false, {a, b, p}};
          break;
        }
    }
  for (int a = 0; a < n && r.o7.holds; ++a)
    if (og.perp_row(a).none()) r.o7 = {false, {a}};
  for (int a = 0; a < n && r.state_space.holds; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      Bits q = og.perp_row(a);
      q.subtract(og.perp_row(b));
      // q perp a but not perp b; note a itself never qualifies as q.
      if (q.none()) {
        r.state_space = {false, {a, b}};
        break;
      }
    }

  og.report_ = std::make_shared<const OrthoAxiomReport>(r);
  return r;
}

Bits perp_subspace(const OrthoGeometry& og, const Bits& s) {
  if (s.capacity() != og.n_points())
    fail(Errc::invalid_input, "perp_subspace: point-set capacity mismatch");
  Bits p = raw_perp(og, s);
  if (closure(og.geom(), p) != p)
    fail(Errc::precondition, "perp_subspace: orthogonal set " + set_str(p) +
                                 " is not a subspace (the relation violates O3)");
  return p;
}

OrthoLattice to_ortho_lattice(const OrthoGeometry& og, std::int64_t cap) {
  require_verified(og, cap, "to_ortho_lattice");
  SubspaceLattice sl = from_geometry(og.geom(), cap);
  std::vector<int> perp(sl.lat.n);
  for (int x = 0; x < sl.lat.n; ++x) {
    int t = sl.index_of(raw_perp(og, sl.subspaces[x]));
    if (t < 0)
      fail(Errc::internal, "to_ortho_lattice: perp of element " + std::to_string(x) +
                               " is not a subspace");
    perp[x] = t;
  }
  verify_h_axioms(sl.lat, perp, "to_ortho_lattice");
  return {std::move(sl.lat), std::move(perp)};
}

ClosedElements closed_elements(const OrthoLattice& ol) {
  const FiniteLattice& parent = ol.lat;
  validate_perp_map(parent, ol.perp, "closed_elements");
  ClosedElements out;
  out.from_parent.assign(parent.n, -1);
  for (int x = 0; x < parent.n; ++x)
    if (ol.perp[ol.perp[x]] == x) {
      out.from_parent[x] = static_cast<int>(out.to_parent.size());
      out.to_parent.push_back(x);
    }
  const int nc = static_cast<int>(out.to_parent.size());

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j)
      if (parent.leq(out.to_parent[i], out.to_parent[j])) pairs.emplace_back(i, j);
  FiniteLattice lat = FiniteLattice::from_order(nc, pairs);

  // Meets must be inherited; joins must be the biorthogonal of the plain
  // join, which in the finite case is the plain join itself.
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      int pm = parent.meet(out.to_parent[i], out.to_parent[j]);
      if (out.from_parent[pm] < 0 || lat.meet(i, j) != out.from_parent[pm])
        fail(Errc::internal, "closed_elements: meet not inherited at " + pair_str(i, j));
      int pj = parent.join(out.to_parent[i], out.to_parent[j]);
      int bj = ol.perp[ol.perp[pj]];
      if (out.from_parent[bj] < 0 || lat.join(i, j) != out.from_parent[bj])
        fail(Errc::internal,
             "closed_elements: join is not the biorthogonal of the plain join at " + pair_str(i, j));
      if (bj != pj)
        fail(Errc::internal, "closed_elements: plain join of closed elements is not closed at " +
                                 pair_str(i, j) + " (impossible at finite rank)");
    }

  std::vector<int> perp(nc);
  for (int i = 0; i < nc; ++i) {
    int p = out.from_parent[ol.perp[out.to_parent[i]]];
    if (p < 0)
      fail(Errc::internal, "closed_elements: perp of closed element " + std::to_string(i) +
                               " is not closed");
    perp[i] = p;
  }
  out.sys = {std::move(lat), std::move(perp)};

  PropSystemReport rep = check_prop_system(out.sys);
  if (!rep.ok())
    fail(Errc::internal,
         std::string("closed_elements: closed elements are not a propositional system (") +
             first_failed_prop(rep) + " fails)");
  return out;
}

PropSystemReport check_prop_system(const PropSystem& c) {
  const FiniteLattice& l = c.lat;
  validate_perp_map(l, c.perp, "check_prop_system");
  PropSystemReport r;
  r.orthocomplementation = orthocomplement_flag(l, c.perp);
  for (int x = 0; x < l.n && r.orthomodular.holds; ++x)
    for (int y = l.up[x].next(0); y >= 0; y = l.up[x].next(y + 1))
      if (l.join(x, l.meet(c.perp[x], y)) != y) {
        r.orthomodular = {false, {x, y}};
        break;
      }
  LatPredicates p = predicates(l);
  r.atomistic = p.atomistic;
  r.covering_law = p.covering_law;
  r.note = "completeness holds automatically in a finite lattice";
  return r;
}

OrthoGeometry atoms_hilbert_geometry(const PropSystem& c) {
  PropSystemReport rep = check_prop_system(c);
  if (!rep.ok())
    fail(Errc::precondition, std::string("atoms_hilbert_geometry: not a propositional system (") +
                                 first_failed_prop(rep) + " fails)");
  Geometry g = atoms_geometry(c.lat);
  const std::vector<int>& at = c.lat.atoms;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(at.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(at.size()); ++j)
      if (c.lat.leq(at[i], c.perp[at[j]])) pairs.emplace_back(i, j);
  OrthoGeometry out(std::move(g), pairs);
  if (!check_ortho_axioms(out).ok())
    fail(Errc::internal, "atoms_hilbert_geometry: atoms do not satisfy the orthogonality axioms");
  return out;
}

TripleReport triple_round_trip(const OrthoGeometry& og, std::int64_t cap) {
  TripleReport t;
  OrthoLattice ol = to_ortho_lattice(og, cap);
  ClosedElements ce = closed_elements(ol);
  OrthoGeometry ag = atoms_hilbert_geometry(ce.sys);
  SubspaceLattice sl = from_geometry(og.geom(), cap);
  const int n = og.n_points();
  if (ag.n_points() != n) {
    t.detail = "round trip changed the point count";
    return t;
  }
  GeoMorphism m{og.geom(), ag.geom(), Bits(n), std::vector<int>(n, -1)};
  const std::vector<int>& at = ce.sys.lat.atoms;
  for (int a = 0; a < n; ++a) {
    Bits s(n);
    s.set(a);
    int parent = sl.index_of(s);
    int se = parent >= 0 ? ce.from_parent[parent] : -1;
    auto it = se >= 0 ? std::lower_bound(at.begin(), at.end(), se) : at.end();
    if (it == at.end() || *it != se) {
      t.detail = "singleton " + std::to_string(a) + " is not a closed atom";
      return t;
    }
    m.map[a] = static_cast<int>(it - at.begin());
  }
  t.order_ok = is_isomorphism(m);
  if (!t.order_ok) {
    t.detail = "point map is not an isomorphism";
    return t;
  }
  t.ortho_ok = true;
  for (int a = 0; a < n && t.ortho_ok; ++a)
    for (int b = a + 1; b < n; ++b)
      if (og.perp(a, b) != ag.perp(m.map[a], m.map[b])) {
        t.ortho_ok = false;
        t.detail = "orthogonality differs at " + pair_str(a, b);
        break;
      }
  return t;
}

TripleReport triple_round_trip(const OrthoLattice& ol, std::int64_t cap) {
  TripleReport t;
  ClosedElements ce = closed_elements(ol);
  OrthoGeometry ag = atoms_hilbert_geometry(ce.sys);
  SubspaceLattice sl2 = from_geometry(ag.geom(), cap);
  const int n = ol.lat.n;
  if (sl2.lat.n != n) {
    t.detail = "round trip changed the element count";
    return t;
  }
  const std::vector<int>& sat = ce.sys.lat.atoms;
  const int np = ag.n_points();
  std::vector<int> pa(np);  // geometry point -> parent lattice atom
  for (int i = 0; i < np; ++i) pa[i] = ce.to_parent[sat[i]];
  std::vector<int> lam(n, -1);
  for (int x = 0; x < n; ++x) {
    Bits s(np);
    for (int i = 0; i < np; ++i)
      if (ol.lat.leq(pa[i], x)) s.set(i);
    lam[x] = sl2.index_of(s);
    if (lam[x] < 0) {
      t.detail = "atom set of element " + std::to_string(x) + " is not a subspace";
      return t;
    }
  }
  std::vector<char> seen(n, 0);
  bool bijective = true;
  for (int x = 0; x < n; ++x) {
    if (seen[lam[x]]) bijective = false;
    seen[lam[x]] = 1;
  }
  t.order_ok = bijective;
  for (int x = 0; x < n && t.order_ok; ++x)
    for (int y = 0; y < n; ++y)
      if (ol.lat.leq(x, y) != sl2.lat.leq(lam[x], lam[y])) {
        t.order_ok = false;
        break;
      }
  if (!t.order_ok) {
    t.detail = "element map is not an order isomorphism";
    return t;
  }
  t.ortho_ok = true;
  for (int x = 0; x < n && t.ortho_ok; ++x) {
    int tp = sl2.index_of(perp_subspace(ag, sl2.subspaces[lam[x]]));
    if (lam[ol.perp[x]] != tp) {
      t.ortho_ok = false;
      t.detail = "perp differs at element " + std::to_string(x);
    }
  }
  return t;
}

TripleReport triple_round_trip(const PropSystem& c, std::int64_t cap) {
  TripleReport t;
  OrthoGeometry ag = atoms_hilbert_geometry(c);
  OrthoLattice ol2 = to_ortho_lattice(ag, cap);
  ClosedElements ce2 = closed_elements(ol2);
  SubspaceLattice sl2 = from_geometry(ag.geom(), cap);
  const int n = c.lat.n;
  if (ce2.sys.lat.n != n) {
    t.detail = "round trip changed the element count";
    return t;
  }
  const int np = ag.n_points();
  std::vector<int> mu(n, -1);
  for (int x = 0; x < n; ++x) {
    Bits s(np);
    for (int i = 0; i < np; ++i)
      if (c.lat.leq(c.lat.atoms[i], x)) s.set(i);
    int parent = sl2.index_of(s);
    mu[x] = parent >= 0 ? ce2.from_parent[parent] : -1;
    if (mu[x] < 0) {
      t.detail = "atom set of element " + std::to_string(x) + " is not a closed subspace";
      return t;
    }
  }
  std::vector<char> seen(n, 0);
  bool bijective = true;
  for (int x = 0; x < n; ++x) {
    if (seen[mu[x]]) bijective = false;
    seen[mu[x]] = 1;
  }
  t.order_ok = bijective;
  for (int x = 0; x < n && t.order_ok; ++x)
    for (int y = 0; y < n; ++y)
      if (c.lat.leq(x, y) != ce2.sys.lat.leq(mu[x], mu[y])) {
        t.order_ok = false;
        break;
      }
  if (!t.order_ok) {
    t.detail = "element map is not an order isomorphism";
    return t;
  }
  t.ortho_ok = true;
  for (int x = 0; x < n && t.ortho_ok; ++x)
    if (mu[c.perp[x]] != ce2.sys.perp[mu[x]]) {
      t.ortho_ok = false;
      t.detail = "perp differs at element " + std::to_string(x);
    }
  return t;
}

OrthoMorphReport check_ortho_morphism(const GeoMorphism& m, const OrthoGeometry& src,
                                      const OrthoGeometry& dst, std::int64_t cap) {
  if (m.source != src.geom() || m.target != dst.geom())
    fail(Errc::invalid_input, "check_ortho_morphism: endpoints do not match the ortho structures");
  if (!check_morphism(m, cap))
    fail(Errc::precondition, "check_ortho_morphism: underlying morphism is not valid");
  OrthoMorphReport r;
  for (const Bits& f : all_subspaces(dst.geom(), cap)) {
    if (raw_biperp(dst, f) != f) continue;  // only closed subspaces constrain
    Bits pb = pullback_points(m, f);
    if (raw_biperp(src, pb) != pb) {
      r.continuous = {false, f.to_vector()};
      break;
    }
  }
  const int n = src.n_points();
  for (int a = 0; a < n && r.ortho.holds; ++a) {
    if (!m.defined(a)) continue;
    for (int b = a + 1; b < n; ++b) {
      if (!m.defined(b)) continue;
      if (src.perp(a, b) && !dst.perp(m.map[a], m.map[b])) {
        r.ortho = {false, {a, b}};
        break;
      }
    }
  }
  return r;
}

OrthoMorphReport check_ortho_morphism(const LatMorphism& f, const OrthoLattice& src,
                                      const OrthoLattice& dst) {
  if (f.source.n != src.lat.n || f.target.n != dst.lat.n)
    fail(Errc::invalid_input, "check_ortho_morphism: endpoints do not match the ortho lattices");
  validate_perp_map(src.lat, src.perp, "check_ortho_morphism");
  validate_perp_map(dst.lat, dst.perp, "check_ortho_morphism");
  if (!check_lat_morphism(f))
    fail(Errc::precondition, "check_ortho_morphism: underlying morphism is not valid");
  OrthoMorphReport r;
  auto pp_d = [&](int y) { return dst.perp[dst.perp[y]]; };
  for (int x = 0; x < src.lat.n; ++x) {
    int xb = src.perp[src.perp[x]];
    if (!dst.lat.leq(f.map[xb], pp_d(f.map[x]))) {
      r.continuous = {false, {x}};
      break;
    }
  }
  for (int x = 0; x < src.lat.n; ++x)
    if (!dst.lat.leq(f.map[src.perp[x]], dst.perp[f.map[x]])) {
      r.ortho = {false, {x}};
      break;
    }
  if (r.continuous.holds) {
    // Induced map on closed elements: x |-> f(x)''.
    ClosedElements c1 = closed_elements(src);
    ClosedElements c2 = closed_elements(dst);
    LatMorphism cf{c1.sys.lat, c2.sys.lat, std::vector<int>(c1.sys.lat.n, -1)};
    bool ok = true;
    for (int i = 0; i < c1.sys.lat.n && ok; ++i) {
      int img = c2.from_parent[pp_d(f.map[c1.to_parent[i]])];
      if (img < 0)
        ok = false;
      else
        cf.map[i] = img;
    }
    r.closed_map_ok = ok && check_lat_morphism(cf);
  }
  return r;
}

OrthoCoproduct ortho_coproduct(const std::vector<OrthoGeometry>& ogs) {
  if (ogs.empty()) fail(Errc::invalid_input, "ortho_coproduct: need at least one factor");
  std::vector<Geometry> gs;
  gs.reserve(ogs.size());
  for (std::size_t k = 0; k < ogs.size(); ++k) {
    require_verified(ogs[k], 100000, "ortho_coproduct");
    gs.push_back(ogs[k].geom());
  }
  CoproductResult cop = coproduct(gs);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t k = 0; k < ogs.size(); ++k)
    for (auto [a, b] : ogs[k].ortho_pairs())
      pairs.emplace_back(cop.offsets[k] + a, cop.offsets[k] + b);
  for (std::size_t k = 0; k < ogs.size(); ++k)
    for (std::size_t l = k + 1; l < ogs.size(); ++l)
      for (int a = 0; a < ogs[k].n_points(); ++a)
        for (int b = 0; b < ogs[l].n_points(); ++b)
          pairs.emplace_back(cop.offsets[k] + a, cop.offsets[l] + b);
  OrthoGeometry out(std::move(cop.geom), pairs);
  if (!check_ortho_axioms(out).ok())
    fail(Errc::internal, "ortho_coproduct: result fails the orthogonality axioms");
  return {std::move(out), std::move(cop.offsets), std::move(cop.injections)};
}

OrthoLattice ortho_lattice_coproduct(const std::vector<OrthoLattice>& ls, std::int64_t cap) {
  if (ls.empty()) fail(Errc::invalid_input, "ortho_lattice_coproduct: need at least one factor");
  std::vector<FiniteLattice> lats;
  lats.reserve(ls.size());
  for (const OrthoLattice& ol : ls) {
    validate_perp_map(ol.lat, ol.perp, "ortho_lattice_coproduct");
    lats.push_back(ol.lat);
  }
  LatCoproductResult lc = lattice_coproduct(lats, cap);
  const int k = static_cast<int>(ls.size());
  std::vector<int> perp(lc.lat.n);
  for (int e = 0; e < lc.lat.n; ++e) {
    int rem = e, img = 0;
    for (int i = 0; i < k; ++i) {
      int d = rem / lc.strides[i];
      rem %= lc.strides[i];
      img += ls[i].perp[d] * lc.strides[i];
    }
    perp[e] = img;
  }
  verify_h_axioms(lc.lat, perp, "ortho_lattice_coproduct");
  return {std::move(lc.lat), std::move(perp)};
}

PropSystem prop_coproduct(const std::vector<PropSystem>& cs, std::int64_t cap) {
  if (cs.empty()) fail(Errc::invalid_input, "prop_coproduct: need at least one factor");
  std::vector<OrthoLattice> ols;
  ols.reserve(cs.size());
  for (const PropSystem& c : cs) ols.push_back({c.lat, c.perp});
  OrthoLattice prod = ortho_lattice_coproduct(ols, cap);
  PropSystem out{std::move(prod.lat), std::move(prod.perp)};
  PropSystemReport rep = check_prop_system(out);
  if (!rep.ok())
    fail(Errc::internal, std::string("prop_coproduct: result is not a propositional system (") +
                             first_failed_prop(rep) + " fails)");
  return out;
}

ComponentsReport hilbert_components(const OrthoGeometry& og, std::int64_t cap) {
  require_verified(og, cap, "hilbert_components");
  std::vector<std::vector<int>> comps = irreducible_components(og.geom());
  const int n = og.n_points();
  ComponentsReport out;
  out.count = static_cast<int>(comps.size());
  out.cls.assign(n, -1);
  Bits all = og.geom().all_points();
  for (int k = 0; k < out.count; ++k) {
    Bits s(n);
    for (int p : comps[k]) {
      out.cls[p] = k;
      s.set(p);
    }
    Bits rest = all;
    rest.subtract(s);
    if (raw_perp(og, s) != rest)
      fail(Errc::internal, "hilbert_components: perp of component " + std::to_string(k) +
                               " is not the union of the other components");
    if (raw_biperp(og, s) != s)
      fail(Errc::internal,
           "hilbert_components: component " + std::to_string(k) + " is not closed");
  }
  return out;
}

OrthoGeometry closed_subgeometry(const OrthoGeometry& og, const Bits& s,
                                 std::vector<int>* global_of_local, std::int64_t cap) {
  if (s.capacity() != og.n_points())
    fail(Errc::invalid_input, "closed_subgeometry: point-set capacity mismatch");
  require_verified(og, cap, "closed_subgeometry");
  if (raw_biperp(og, s) != s)
    fail(Errc::precondition,
         "closed_subgeometry: " + set_str(s) + " is not biorthogonally closed");
  const std::vector<int> pts = s.to_vector();
  std::vector<int> local(og.n_points(), -1);
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) local[pts[i]] = i;
  std::vector<std::vector<int>> lines;
  for (int li = 0; li < og.geom().line_count(); ++li) {
    if (!og.geom().line_mask(li).is_subset_of(s)) continue;
    std::vector<int> ln;
    for (int p : og.geom().line_points(li)) ln.push_back(local[p]);
    lines.push_back(std::move(ln));
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(pts.size()); ++j)
      if (og.perp(pts[i], pts[j])) pairs.emplace_back(i, j);
  OrthoGeometry out(Geometry(static_cast<int>(pts.size()), std::move(lines)), pairs);
  if (!check_ortho_axioms(out, cap).ok())
    fail(Errc::internal, "closed_subgeometry: induced structure fails the orthogonality axioms");
  // Relative double-perp must agree with the ambient one on every subspace.
  for (const Bits& tl : all_subspaces(out.geom(), cap)) {
    Bits tg(og.n_points());
    for (int i = tl.next(0); i >= 0; i = tl.next(i + 1)) tg.set(pts[i]);
    Bits rel = raw_perp(og, tg);
    rel &= s;
    rel = raw_perp(og, rel);
    rel &= s;
    if (rel != raw_biperp(og, tg))
      fail(Errc::internal, "closed_subgeometry: relative closure of " + set_str(tg) +
                               " differs from the ambient closure");
  }
  if (global_of_local) *global_of_local = pts;
  return out;
}

GeoMorphism projector(const OrthoGeometry& og, const Bits& s, std::int64_t cap) {
  if (s.capacity() != og.n_points())
    fail(Errc::invalid_input, "projector: point-set capacity mismatch");
  require_verified(og, cap, "projector");
  if (raw_biperp(og, s) != s)
    fail(Errc::precondition, "projector: " + set_str(s) + " is not biorthogonally closed");
  const Geometry& g = og.geom();
  const int n = g.n_points();
  Bits p = raw_perp(og, s);
  if (closure(g, s | p) != g.all_points())
    fail(Errc::internal, "projector: " + set_str(s) + " and its perp do not span the geometry");
  GeoMorphism m{g, g, p, std::vector<int>(n, -1)};
  for (int a = 0; a < n; ++a) {
    if (p.test(a)) continue;
    Bits u = p;
    u.set(a);
    Bits img = closure(g, u);
    img &= s;
    if (img.count() != 1)
      fail(Errc::internal, "projector: ({a} v s') n s is not a single point at a = " +
                               std::to_string(a));
    m.map[a] = img.next(0);
  }
  if (!check_morphism(m, cap)) fail(Errc::internal, "projector: result is not a morphism");
  for (int a = 0; a < n; ++a) {
    if (!m.defined(a)) continue;
    if (m.map[m.map[a]] != m.map[a])
      fail(Errc::internal, "projector: not idempotent at " + std::to_string(a));
  }
  for (int a = 0; a < n; ++a) {
    if (!m.defined(a)) continue;
    for (int b = 0; b < n; ++b) {
      if (!m.defined(b)) continue;
      if (og.perp(m.map[a], b) != og.perp(a, m.map[b]))
        fail(Errc::internal, "projector: not self-adjoint at " + pair_str(a, b));
    }
  }
  return m;
}

SasakiResult sasaki(const PropSystem& c, int x) {
  const FiniteLattice& l = c.lat;
  validate_perp_map(l, c.perp, "sasaki");
  if (x < 0 || x >= l.n) fail(Errc::invalid_input, "sasaki: element out of range");
  PredFlag oc = orthocomplement_flag(l, c.perp);
  if (!oc.holds) {
    std::string w;
    for (int v : oc.witness) w += (w.empty() ? "" : ",") + std::to_string(v);
    fail(Errc::precondition, "sasaki: perp is not an orthocomplementation (at " + w + ")");
  }
  SasakiResult r;
  r.phi.resize(l.n);
  r.psi.resize(l.n);
  const int xp = c.perp[x];
  for (int y = 0; y < l.n; ++y) {
    r.phi[y] = l.meet(x, l.join(xp, y));
    r.psi[y] = l.join(xp, l.meet(x, y));
  }
  r.adjunction = true;
  for (int y = 0; y < l.n && r.adjunction; ++y)
    for (int z = 0; z < l.n; ++z)
      if (l.leq(r.phi[y], z) != l.leq(y, r.psi[z])) {
        r.adjunction = false;
        r.witness = {y, z};
        break;
      }
  for (int a : l.atoms)
    if (r.phi[a] != l.bottom && !l.is_atom(r.phi[a])) {
      r.atoms_to_atoms = {false, {a}};
      break;
    }
  return r;
}

SuperselectionResult superselection(const PropSystem& c) {
  PropSystemReport rep = check_prop_system(c);
  if (!rep.ok())
    fail(Errc::precondition, std::string("superselection: not a propositional system (") +
                                 first_failed_prop(rep) + " fails)");
  SuperselectionResult r;
  r.center = center(c.lat);
  r.rules = minimal_nonbottom(c.lat, r.center);
  return r;
}

SuperselectionResult superselection(const OrthoGeometry& og, std::int64_t cap) {
  require_verified(og, cap, "superselection");
  SubspaceLattice sl = from_geometry(og.geom(), cap);
  SuperselectionResult r;
  r.center = center(sl.lat);
  Bits all = og.geom().all_points();
  for (int t = 0; t < sl.lat.n; ++t) {
    Bits comp = all;
    comp.subtract(sl.subspaces[t]);
    bool criterion = comp == raw_perp(og, sl.subspaces[t]);
    bool central = std::binary_search(r.center.begin(), r.center.end(), t);
    if (criterion != central)
      fail(Errc::internal,
           "superselection: set-complement criterion disagrees with the lattice center at "
           "element " +
               std::to_string(t));
  }
  r.rules = minimal_nonbottom(sl.lat, r.center);
  return r;
}

std::int64_t count_hilbert_relations(const Geometry& g) {
  GeoAxiomReport ga = check_axioms(g);
  if (!ga.ok())
    fail(Errc::precondition, "count_hilbert_relations: geometry axioms fail (" + ga.detail + ")");
  const int n = g.n_points();
  if (n > 16) fail(Errc::cap_exceeded, "count_hilbert_relations: more than 16 points");
  std::vector<std::pair<int, int>> pl;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pl.emplace_back(a, b);
  const int np = static_cast<int>(pl.size());
  if (np > 28) fail(Errc::cap_exceeded, "count_hilbert_relations: more than 28 point pairs");

  // Mask tables over all point sets: closure, subspace test, lines.
  const std::uint32_t full = n == 0 ? 0u : ((1u << n) - 1u);
  const std::size_t m_count = std::size_t{1} << n;
  std::vector<std::uint32_t> closure_of(m_count);
  std::vector<char> is_sub(m_count);
  std::vector<std::uint32_t> sub_masks;
  for (std::size_t m = 0; m < m_count; ++m) {
    Bits b(n);
    for (int i = 0; i < n; ++i)
      if (m >> i & 1) b.set(i);
    Bits c = closure(g, b);
    std::uint32_t cm = 0;
    for (int i = 0; i < n; ++i)
      if (c.test(i)) cm |= 1u << i;
    closure_of[m] = cm;
    is_sub[m] = cm == static_cast<std::uint32_t>(m);
    if (is_sub[m]) sub_masks.push_back(static_cast<std::uint32_t>(m));
  }
  std::vector<std::uint32_t> line_of(static_cast<std::size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      Bits ls = g.line_set(a, b);
      std::uint32_t lm = 0;
      for (int i = 0; i < n; ++i)
        if (ls.test(i)) lm |= 1u << i;
      line_of[static_cast<std::size_t>(a) * n + b] = lm;
    }

  // O1/O2 are baked into the pair encoding; O3 = every row a subspace,
  // O4 = every line meets the perp of each end, O5 = closed sets split.
  auto admissible = [&](const std::array<std::uint32_t, 16>& row) {
    for (int p = 0; p < n; ++p)
      if (!is_sub[row[p]]) return false;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        if (!(line_of[static_cast<std::size_t>(a) * n + b] & row[a])) return false;
      }
    for (std::uint32_t sm : sub_masks) {
      std::uint32_t p = full;
      for (std::uint32_t t = sm; t;) {
        int i = std::countr_zero(t);
        t &= t - 1;
        p &= row[i];
      }
      std::uint32_t q = full;
      for (std::uint32_t t = p; t;) {
        int i = std::countr_zero(t);
        t &= t - 1;
        q &= row[i];
      }
      if (q == sm && closure_of[sm | p] != full) return false;
    }
    return true;
  };

  const std::int64_t total = std::int64_t{1} << np;
  std::atomic<std::int64_t> found{0};
  parallel_chunks(total, [&](std::int64_t lo, std::int64_t hi) {
    std::int64_t local = 0;
    std::array<std::uint32_t, 16> row;
    for (std::int64_t rel = lo; rel < hi; ++rel) {
      row.fill(0);
      for (std::uint32_t bits = static_cast<std::uint32_t>(rel); bits;) {
        int k = std::countr_zero(bits);
        bits &= bits - 1;
        row[pl[k].first] |= 1u << pl[k].second;
        row[pl[k].second] |= 1u << pl[k].first;
      }
      if (admissible(row)) ++local;
    }
    found += local;
  });
  return found.load();
}

}  // namespace plg
