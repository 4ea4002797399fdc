#include "plg/coordinatize.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "plg/error.hpp"
#include "plg/field.hpp"

namespace plg {

namespace {

std::string tuple_str(const std::vector<int>& t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ")";
  return os.str();
}

void require_base(const Geometry& g, const char* me) {
  if (!is_irreducible(g))
    fail(Errc::precondition, std::string(me) + ": geometry must be irreducible");
  if (dimension(g) < 2)
    fail(Errc::precondition, std::string(me) + ": dimension must be >= 2");
}

void require_hyperplane(const Geometry& g, const Bits& h, const char* me) {
  const int n = g.n_points();
  if (h.capacity() != n)
    fail(Errc::invalid_input, std::string(me) + ": hyperplane capacity mismatch");
  if (closure(g, h) != h)
    fail(Errc::precondition, std::string(me) + ": the axis is not a subspace");
  if (h.count() == n)
    fail(Errc::precondition, std::string(me) + ": the axis is the whole geometry");
  for (int x = 0; x < n; ++x) {
    if (h.test(x)) continue;
    Bits t = h;
    t.set(x);
    if (closure(g, t).count() != n)
      fail(Errc::precondition, std::string(me) + ": the axis is not a coatom (point " +
                                   std::to_string(x) + " does not complete it)");
  }
}

// The single common point of two point sets, or -1 when the intersection
// is empty or bigger.
int unique_meet(const Bits& a, const Bits& b) {
  const int lo = a.first_common(b);
  return (lo >= 0 && lo == a.last_common(b)) ? lo : -1;
}

// Shape, range, and full axiom sweep for abstract field tables; mul
// commutativity is returned rather than demanded.  `code` picks the error
// class the caller wants for violations.
bool verify_field_tables(const FieldTables& k, Errc code, const char* me) {
  const int q = k.order;
  auto bad = [&](const std::string& what) {
    fail(code, std::string(me) + ": field tables " + what);
  };
  if (q < 2) bad("must have order >= 2");
  if (static_cast<int>(k.add.size()) != q || static_cast<int>(k.mul.size()) != q)
    bad("have the wrong number of rows");
  for (int a = 0; a < q; ++a) {
    if (static_cast<int>(k.add[a].size()) != q || static_cast<int>(k.mul[a].size()) != q)
      bad("have a ragged row");
    for (int b = 0; b < q; ++b)
      if (k.add[a][b] < 0 || k.add[a][b] >= q || k.mul[a][b] < 0 || k.mul[a][b] >= q)
        bad("contain an out-of-range id");
  }
  for (int a = 0; a < q; ++a) {
    if (k.add[0][a] != a || k.add[a][0] != a) bad("violate the additive identity at " + std::to_string(a));
    if (k.mul[1][a] != a || k.mul[a][1] != a) bad("violate the multiplicative identity at " + std::to_string(a));
    if (k.mul[0][a] != 0 || k.mul[a][0] != 0) bad("let zero fail to annihilate at " + std::to_string(a));
  }
  for (int a = 0; a < q; ++a) {
    bool inv = false;
    for (int b = 0; b < q; ++b) inv = inv || k.add[a][b] == 0;
    if (!inv) bad("miss an additive inverse for " + std::to_string(a));
    if (a != 0) {
      inv = false;
      for (int b = 1; b < q; ++b) inv = inv || k.mul[a][b] == 1;
      if (!inv) bad("miss a multiplicative inverse for " + std::to_string(a));
    }
  }
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (k.add[a][b] != k.add[b][a])
        bad("have non-commutative addition at " + tuple_str({a, b}));
      for (int c = 0; c < q; ++c) {
        if (k.add[k.add[a][b]][c] != k.add[a][k.add[b][c]])
          bad("have non-associative addition at " + tuple_str({a, b, c}));
        if (k.mul[k.mul[a][b]][c] != k.mul[a][k.mul[b][c]])
          bad("have non-associative multiplication at " + tuple_str({a, b, c}));
        if (k.mul[a][k.add[b][c]] != k.add[k.mul[a][b]][k.mul[a][c]])
          bad("break left distributivity at " + tuple_str({a, b, c}));
        if (k.mul[k.add[a][b]][c] != k.add[k.mul[a][c]][k.mul[b][c]])
          bad("break right distributivity at " + tuple_str({a, b, c}));
      }
    }
  bool comm = true;
  for (int a = 0; a < q && comm; ++a)
    for (int b = 0; b < q && comm; ++b) comm = k.mul[a][b] == k.mul[b][a];
  return comm;
}

FieldTables tables_of(const CoordModel& m) {
  FieldTables k;
  k.order = m.field_order;
  k.add = m.add_table;
  k.mul = m.mul_table;
  return k;
}

// Left-scales a coordinate vector so its first nonzero entry is 1.
void canonicalize_vec(const FieldTables& k, std::vector<int>& v, const char* me) {
  int f = -1;
  for (std::size_t i = 0; i < v.size() && f < 0; ++i)
    if (v[i] != 0) f = v[i];
  if (f < 0) fail(Errc::internal, std::string(me) + ": zero vector has no coordinate class");
  if (f == 1) return;
  int inv = -1;
  for (int s = 1; s < k.order && inv < 0; ++s)
    if (k.mul[s][f] == 1) inv = s;
  if (inv < 0) fail(Errc::internal, std::string(me) + ": scalar without a left inverse");
  for (int& e : v) e = k.mul[inv][e];
}

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int e : v) {
      h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::vector<Hyperplane> hyperplanes(const Geometry& g) {
  const char* me = "hyperplanes";
  const int n = g.n_points();
  if (n == 0) fail(Errc::precondition, std::string(me) + ": empty geometry");
  if (!is_irreducible(g))
    fail(Errc::precondition, std::string(me) + ": geometry must be irreducible");
  const int d = dimension(g);

  std::unordered_set<Bits, BitsHash> seen;
  std::vector<Hyperplane> out;
  auto emit = [&](const Bits& cl) {
    if (!seen.insert(cl).second) return;
    for (int x = 0; x < n; ++x) {
      if (cl.test(x)) continue;
      Bits t = cl;
      t.set(x);
      if (closure(g, t).count() != n)
        fail(Errc::internal, std::string(me) +
                                 ": closure of an independent set is not a coatom "
                                 "(the geometry axioms must be broken)");
    }
    out.push_back(cl);
  };
  // Closures of independent d-sets; cl is always closed, so a fresh point
  // is independent exactly when it is outside cl.
  std::function<void(const Bits&, int, int)> grow = [&](const Bits& cl, int from, int left) {
    if (left == 0) {
      emit(cl);
      return;
    }
    for (int x = from; x < n; ++x) {
      if (cl.test(x)) continue;
      Bits t = cl;
      t.set(x);
      grow(closure(g, t), x + 1, left - 1);
    }
  };
  grow(Bits(n), 0, d);

  std::sort(out.begin(), out.end(), [](const Bits& a, const Bits& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a.lex_less(b);
  });
  return out;
}

Collineation central_collineation(const Geometry& g, const Hyperplane& h, int c,
                                  int p, int p_prime, int aux) {
  const char* me = "central_collineation";
  g.check_point(c);
  g.check_point(p);
  g.check_point(p_prime);
  require_base(g, me);
  require_hyperplane(g, h, me);
  if (h.test(p) || h.test(p_prime))
    fail(Errc::precondition, std::string(me) + ": p and p' must lie off the axis");
  if (c == p || c == p_prime)
    fail(Errc::precondition, std::string(me) + ": the center must differ from p and p'");
  if (!g.collinear(c, p, p_prime))
    fail(Errc::precondition, std::string(me) + ": c, p, p' must be collinear");

  const int n = g.n_points();
  if (p_prime == p) {
    // Uniqueness forces the identity.
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    return Collineation{std::move(id), h, c};
  }

  std::vector<int> perm(n, -1);
  for (int x : h.to_vector()) perm[x] = x;
  perm[c] = c;
  perm[p] = p_prime;

  const Bits lcp = g.line_set(c, p);

  // alpha(x) = (c*x) ^ (f * base_img) with f = (base*x) ^ h, valid when x
  // is off the axis and off c*base.
  auto step = [&](int base, int base_img, int x) -> int {
    const int f = unique_meet(g.line_set(base, x), h);
    if (f < 0)
      fail(Errc::construction_failure,
           std::string(me) + ": the line " + std::to_string(base) + "*" + std::to_string(x) +
               " does not meet the axis in a single point");
    const int img = unique_meet(g.line_set(c, x), g.line_set(f, base_img));
    if (img < 0)
      fail(Errc::construction_failure,
           std::string(me) + ": lines (c*x) and (f*alpha(p)) do not meet in a single point "
                             "at x=" + std::to_string(x) + " (non-arguesian input?)");
    return img;
  };

  for (int x = 0; x < n; ++x) {
    if (perm[x] >= 0 || lcp.test(x)) continue;
    perm[x] = step(p, p_prime, x);
  }

  // Leftover points sit on c*p; route them through a reference point off
  // that line, whose image the first pass already produced.
  std::vector<int> rest;
  for (int x : lcp.to_vector())
    if (perm[x] < 0) rest.push_back(x);
  if (!rest.empty()) {
    int q = aux;
    if (q >= 0) {
      g.check_point(q);
      if (h.test(q) || lcp.test(q))
        fail(Errc::precondition,
             std::string(me) + ": aux must lie off the axis and off the line c*p");
    } else {
      for (int x = 0; x < n && q < 0; ++x)
        if (!h.test(x) && !lcp.test(x)) q = x;
      if (q < 0)
        fail(Errc::construction_failure,
             std::string(me) + ": no reference point off c*p is available");
    }
    for (int x : rest) perm[x] = step(q, perm[q], x);
  }

  std::vector<int> hits(n, 0);
  for (int x = 0; x < n; ++x) {
    if (perm[x] < 0 || perm[x] >= n)
      fail(Errc::internal, std::string(me) + ": point " + std::to_string(x) + " left unmapped");
    ++hits[perm[x]];
  }
  for (int x = 0; x < n; ++x)
    if (hits[x] != 1)
      fail(Errc::construction_failure,
           std::string(me) + ": the assembled map is not a permutation (non-arguesian input)");

  for (int li = 0; li < g.line_count(); ++li) {
    const auto& ln = g.line_points(li);
    Bits img(n);
    for (int x : ln) img.set(perm[x]);
    const int tgt = g.line_index(perm[ln[0]], perm[ln[1]]);
    if (tgt < 0 || !(g.line_mask(tgt) == img))
      fail(Errc::construction_failure,
           std::string(me) + ": the image of line " + std::to_string(li) +
               " is not a line (non-arguesian input)");
  }
  for (int li : g.lines_through(c)) {
    const Bits& mask = g.line_mask(li);
    Bits img(n);
    for (int x : g.line_points(li)) img.set(perm[x]);
    if (!(img == mask))
      fail(Errc::construction_failure,
           std::string(me) + ": a line through the center is not fixed setwise");
  }

  return Collineation{std::move(perm), h, c};
}

TranslationGroup translation_group(const Geometry& g, const Hyperplane& h, int o) {
  const char* me = "translation_group";
  g.check_point(o);
  require_base(g, me);
  require_hyperplane(g, h, me);
  if (h.test(o))
    fail(Errc::precondition, std::string(me) + ": the origin must lie off the axis");

  const int n = g.n_points();
  TranslationGroup t;
  t.axis = h;
  t.origin = o;
  for (int x = 0; x < n; ++x)
    if (!h.test(x)) t.points.push_back(x);
  const int m = static_cast<int>(t.points.size());
  std::vector<int> vidx(n, -1);
  for (int i = 0; i < m; ++i) vidx[t.points[i]] = i;
  t.zero = vidx[o];

  t.taus.reserve(m);
  for (int i = 0; i < m; ++i) {
    const int p = t.points[i];
    if (p == o) {
      std::vector<int> id(n);
      std::iota(id.begin(), id.end(), 0);
      t.taus.push_back(Collineation{std::move(id), h, std::nullopt});
      continue;
    }
    const int c = unique_meet(g.line_set(o, p), h);
    if (c < 0)
      fail(Errc::construction_failure,
           std::string(me) + ": the line o*" + std::to_string(p) +
               " does not meet the axis in a single point");
    t.taus.push_back(central_collineation(g, h, c, o, p));
  }

  t.add.assign(m, std::vector<int>(m, -1));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const int img = t.taus[i].perm[t.points[j]];
      if (vidx[img] < 0)
        fail(Errc::internal, std::string(me) + ": a translation leaves G minus the axis");
      t.add[i][j] = vidx[img];
    }

  for (int j = 0; j < m; ++j)
    if (t.add[t.zero][j] != j || t.add[j][t.zero] != j)
      fail(Errc::construction_failure, std::string(me) + ": the origin is not a zero");
  for (int i = 0; i < m; ++i) {
    bool inv = false;
    for (int j = 0; j < m; ++j) {
      if (t.add[i][j] != t.add[j][i])
        fail(Errc::construction_failure,
             std::string(me) + ": addition is not commutative at " +
                 tuple_str({t.points[i], t.points[j]}));
      inv = inv || t.add[i][j] == t.zero;
    }
    if (!inv)
      fail(Errc::construction_failure,
           std::string(me) + ": no additive inverse for " + std::to_string(t.points[i]));
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (t.add[t.add[i][j]][k] != t.add[i][t.add[j][k]])
          fail(Errc::construction_failure,
               std::string(me) + ": addition is not associative at " +
                   tuple_str({t.points[i], t.points[j], t.points[k]}));
  return t;
}

HomothetyField homothety_field(const Geometry& g, const TranslationGroup& t) {
  const char* me = "homothety_field";
  const int n = g.n_points();
  const int m = static_cast<int>(t.points.size());
  if (t.axis.capacity() != n || t.origin < 0 || t.origin >= n || m == 0 ||
      static_cast<int>(t.add.size()) != m || static_cast<int>(t.taus.size()) != m ||
      t.zero < 0 || t.zero >= m || t.points[t.zero] != t.origin)
    fail(Errc::invalid_input, std::string(me) + ": malformed translation group");
  const Bits& h = t.axis;
  const int o = t.origin;

  std::vector<int> vidx(n, -1);
  for (int i = 0; i < m; ++i) vidx[t.points[i]] = i;
  auto vadd = [&](int x, int y) { return t.points[t.add[vidx[x]][vidx[y]]]; };

  if (m < 2)
    fail(Errc::precondition, std::string(me) + ": V has a single point, no scalar line");
  int u = -1;
  for (int x : t.points)
    if (x != o && u < 0) u = x;
  const Bits lu = g.line_set(o, u);

  // Scalar ids: 0 is the constant-to-o map, 1 the identity (pinned by u),
  // the rest the remaining points of the scalar line o*u in point order.
  std::vector<int> scale_points{o, u};
  for (int y : lu.to_vector())
    if (!h.test(y) && y != o && y != u) scale_points.push_back(y);
  const int q = static_cast<int>(scale_points.size());

  std::vector<Collineation> homs(q);
  std::vector<std::vector<int>> action(q);
  action[0].assign(n, o);
  for (int s = 1; s < q; ++s) {
    homs[s] = central_collineation(g, h, o, u, scale_points[s]);
    action[s] = homs[s].perm;
  }

  std::vector<int> sid(n, -1);
  for (int s = 0; s < q; ++s) sid[scale_points[s]] = s;

  FieldTables k;
  k.order = q;
  k.add.assign(q, std::vector<int>(q, -1));
  k.mul.assign(q, std::vector<int>(q, -1));

  // Multiplication is composition: the product is pinned by its action on
  // u, then compared with the composite on every point -- this is Baer
  // uniqueness made checkable.
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (a == 0 || b == 0) {
        k.mul[a][b] = 0;
        continue;
      }
      const int s = sid[action[a][action[b][u]]];
      if (s <= 0)
        fail(Errc::construction_failure,
             std::string(me) + ": a composition of homotheties leaves the scalar line");
      for (int x = 0; x < n; ++x)
        if (action[a][action[b][x]] != action[s][x])
          fail(Errc::construction_failure,
               std::string(me) + ": two homotheties agree on u but not everywhere "
                                 "(uniqueness breach)");
      k.mul[a][b] = s;
    }

  // Addition is pointwise on V: (s1+s2)(x) = s1(x) + s2(x); the sum must
  // again be a scalar, verified on all of V.
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      const int w = vadd(action[a][u], action[b][u]);
      const int s = w == o ? 0 : sid[w];
      if (s < 0)
        fail(Errc::construction_failure,
             std::string(me) + ": addition of scalars " + tuple_str({a, b}) +
                 " leaves the scalar line");
      for (int x : t.points)
        if (vadd(action[a][x], action[b][x]) != action[s][x])
          fail(Errc::construction_failure,
               std::string(me) + ": pointwise addition of scalars " + tuple_str({a, b}) +
                   " is not the scalar it hits on u");
      k.add[a][b] = s;
    }

  k.mul_commutative = verify_field_tables(k, Errc::construction_failure, me);

  HomothetyField f;
  f.tables = std::move(k);
  f.unit_point = u;
  f.scale_points = std::move(scale_points);
  f.action = std::move(action);
  f.homotheties = std::move(homs);
  return f;
}

HomothetyField homothety_field(const Geometry& g, const Hyperplane& h, int o) {
  return homothety_field(g, translation_group(g, h, o));
}

CoordModel coordinatize(const Geometry& g, std::uint64_t seed) {
  const char* me = "coordinatize";
  if (!is_irreducible(g))
    fail(Errc::precondition, std::string(me) + ": geometry must be irreducible");
  const int d = dimension(g);
  if (d < 2)
    fail(Errc::precondition,
         std::string(me) + ": dimension " + std::to_string(d) + " is too low (need >= 2)");
  DesarguesReport drep = desargues_holds(g);
  if (!drep.holds)
    fail(Errc::precondition,
         std::string(me) + ": geometry is not arguesian; witness (c,a1,a2,a3,b1,b2,b3)=" +
             tuple_str(drep.config) + " with diagonal points " + tuple_str(drep.diagonals) +
             ", " + drep.detail);

  const int n = g.n_points();
  std::vector<Hyperplane> hs = hyperplanes(g);
  Hyperplane h;
  int o = -1;
  if (seed == 0) {
    h = hs.front();
    for (int x = 0; x < n && o < 0; ++x)
      if (!h.test(x)) o = x;
  } else {
    std::mt19937_64 rng(seed);
    h = hs[rng() % hs.size()];
    std::vector<int> off;
    for (int x = 0; x < n; ++x)
      if (!h.test(x)) off.push_back(x);
    o = off[rng() % off.size()];
  }

  TranslationGroup t = translation_group(g, h, o);
  HomothetyField f = homothety_field(g, t);
  const int q = f.tables.order;
  const int m = static_cast<int>(t.points.size());

  std::vector<int> vidx(n, -1);
  for (int i = 0; i < m; ++i) vidx[t.points[i]] = i;
  auto vadd = [&](int x, int y) { return t.points[t.add[vidx[x]][vidx[y]]]; };
  auto vneg = [&](int x) {
    for (int j = 0; j < m; ++j)
      if (t.add[vidx[x]][j] == t.zero) return t.points[j];
    fail(Errc::internal, std::string(me) + ": missing additive inverse");
  };

  // Greedy basis of V over the scalars; the coordinate tuple of a point
  // lists its coefficients along the basis.
  std::unordered_map<int, std::vector<int>> coord_v;
  coord_v[o] = {};
  std::vector<int> basis;
  while (static_cast<int>(coord_v.size()) < m) {
    int e = -1;
    for (int x : t.points)
      if (!coord_v.count(x) && e < 0) e = x;
    if (e < 0) fail(Errc::internal, std::string(me) + ": span stalled before covering V");
    std::unordered_map<int, std::vector<int>> grown;
    for (const auto& [w, vec] : coord_v)
      for (int s = 0; s < q; ++s) {
        const int pt = vadd(w, f.action[s][e]);
        std::vector<int> tup = vec;
        tup.push_back(s);
        if (!grown.emplace(pt, std::move(tup)).second)
          fail(Errc::internal, std::string(me) + ": scalar span collision -- V is not free");
      }
    coord_v = std::move(grown);
    basis.push_back(e);
  }
  if (static_cast<int>(basis.size()) != d)
    fail(Errc::internal, std::string(me) + ": affine basis size disagrees with the dimension");

  // Vector space axioms that the table constructions do not already pin:
  // scalars distribute over vector addition, and s(-x) = -s(x).
  for (int s = 1; s < q; ++s)
    for (int x : t.points) {
      for (int y : t.points)
        if (f.action[s][vadd(x, y)] != vadd(f.action[s][x], f.action[s][y]))
          fail(Errc::internal,
               std::string(me) + ": scalar " + std::to_string(s) +
                   " is not additive on V at " + tuple_str({x, y}));
      if (f.action[s][vneg(x)] != vneg(f.action[s][x]))
        fail(Errc::internal,
             std::string(me) + ": s(-x) != -s(x) at " + tuple_str({s, x}));
    }

  CoordModel model;
  model.field_order = q;
  model.add_table = f.tables.add;
  model.mul_table = f.tables.mul;
  model.vspace_dim = d + 1;
  model.coords.assign(n, {});
  for (int x = 0; x < n; ++x) {
    std::vector<int> vec;
    if (!h.test(x)) {
      vec = coord_v.at(x);
      vec.push_back(1);
    } else {
      // phi(x) = K(y, 0) for any y != x on o*x; all candidates are
      // proportional, the least one keeps the choice canonical.
      const Bits lx = g.line_set(o, x);
      if (unique_meet(lx, h) != x)
        fail(Errc::internal, std::string(me) + ": the line o*x meets the axis off x");
      int y = -1;
      for (int cand : lx.to_vector())
        if (cand != x && cand != o && y < 0) y = cand;
      if (y < 0) fail(Errc::internal, std::string(me) + ": no affine direction for " +
                                          std::to_string(x));
      vec = coord_v.at(y);
      vec.push_back(0);
    }
    canonicalize_vec(f.tables, vec, me);
    model.coords[x] = std::move(vec);
  }

  // The coordinate map must be an isomorphism onto the projective space
  // over the recovered tables.
  Geometry proj = model_geometry(model);
  std::vector<std::vector<int>> reps = model_points(model);
  std::unordered_map<std::vector<int>, int, VecHash> rep_idx;
  for (std::size_t i = 0; i < reps.size(); ++i) rep_idx.emplace(reps[i], static_cast<int>(i));
  if (proj.n_points() != n || proj.line_count() != g.line_count())
    fail(Errc::internal, std::string(me) + ": model size disagrees with the geometry");
  std::vector<int> phi(n, -1);
  std::vector<int> hit(n, 0);
  for (int x = 0; x < n; ++x) {
    auto it = rep_idx.find(model.coords[x]);
    if (it == rep_idx.end())
      fail(Errc::internal, std::string(me) + ": coordinate vector of " + std::to_string(x) +
                               " is not canonical");
    phi[x] = it->second;
    ++hit[it->second];
  }
  for (int x = 0; x < n; ++x)
    if (hit[x] != 1)
      fail(Errc::internal, std::string(me) + ": coordinates are not a bijection");
  for (int li = 0; li < g.line_count(); ++li) {
    const auto& ln = g.line_points(li);
    Bits img(n);
    for (int x : ln) img.set(phi[x]);
    const int tgt = proj.line_index(phi[ln[0]], phi[ln[1]]);
    if (tgt < 0 || !(proj.line_mask(tgt) == img))
      fail(Errc::internal, std::string(me) + ": line " + std::to_string(li) +
                               " does not map onto a projective line");
  }

  return model;
}

namespace {

// Canonical projective points over verified tables, lexicographic in the
// id order.
std::vector<std::vector<int>> table_reps(const FieldTables& k, int d, const char* me) {
  if (d < 1) fail(Errc::invalid_input, std::string(me) + ": vspace_dim must be >= 1");
  const int q = k.order;
  std::int64_t total = 1;
  for (int i = 0; i < d; ++i) {
    total *= q;
    if (total > (std::int64_t{1} << 22))
      fail(Errc::invalid_input, std::string(me) + ": q^d too large");
  }
  std::vector<std::vector<int>> reps;
  std::vector<int> v(d, 0);
  while (true) {
    int first = -1;
    for (int i = 0; i < d && first < 0; ++i)
      if (v[i] != 0) first = v[i];
    if (first == 1) reps.push_back(v);
    int i = d - 1;
    while (i >= 0 && v[i] == q - 1) v[i--] = 0;
    if (i < 0) break;
    ++v[i];
  }
  return reps;
}

}  // namespace

std::vector<std::vector<int>> model_points(const CoordModel& m) {
  const char* me = "model_points";
  FieldTables k = tables_of(m);
  verify_field_tables(k, Errc::precondition, me);
  return table_reps(k, m.vspace_dim, me);
}

Geometry model_geometry(const CoordModel& m) {
  const char* me = "model_geometry";
  FieldTables k = tables_of(m);
  verify_field_tables(k, Errc::precondition, me);
  const int q = k.order;
  const int d = m.vspace_dim;
  std::vector<std::vector<int>> reps = table_reps(k, d, me);
  const int n = static_cast<int>(reps.size());
  if (n > 4096) fail(Errc::invalid_input, std::string(me) + ": too many points");

  std::unordered_map<std::vector<int>, int, VecHash> idx;
  for (int i = 0; i < n; ++i) idx.emplace(reps[i], i);

  std::vector<bool> paired(static_cast<std::size_t>(n) * n, false);
  std::vector<std::vector<int>> lines;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (paired[static_cast<std::size_t>(i) * n + j]) continue;
      std::vector<int> ln;
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b) {
          if (a == 0 && b == 0) continue;
          std::vector<int> w(d);
          for (int e = 0; e < d; ++e)
            w[e] = k.add[k.mul[a][reps[i][e]]][k.mul[b][reps[j][e]]];
          canonicalize_vec(k, w, me);
          auto it = idx.find(w);
          if (it == idx.end())
            fail(Errc::internal, std::string(me) + ": span left the canonical point list");
          ln.push_back(it->second);
        }
      std::sort(ln.begin(), ln.end());
      ln.erase(std::unique(ln.begin(), ln.end()), ln.end());
      if (static_cast<int>(ln.size()) != q + 1)
        fail(Errc::internal, std::string(me) + ": a two-point span has " +
                                 std::to_string(ln.size()) + " points instead of q+1");
      for (std::size_t a = 0; a < ln.size(); ++a)
        for (std::size_t b = a + 1; b < ln.size(); ++b) {
          paired[static_cast<std::size_t>(ln[a]) * n + ln[b]] = true;
          paired[static_cast<std::size_t>(ln[b]) * n + ln[a]] = true;
        }
      lines.push_back(std::move(ln));
    }
  return Geometry(n, std::move(lines), Provenance::generated);
}

FieldMatch identify_field(const FieldTables& k) {
  const char* me = "identify_field";
  verify_field_tables(k, Errc::precondition, me);
  const int q = k.order;
  bool prime = q >= 2;
  for (int f = 2; f * f <= q; ++f)
    if (q % f == 0) prime = false;
  if (!prime)
    return {std::nullopt, "order " + std::to_string(q) +
                              " is not prime; only prime fields are identified"};

  std::vector<int> iso(q);
  iso[0] = 0;
  for (int r = 1; r < q; ++r) iso[r] = k.add[iso[r - 1]][1];
  std::vector<int> hit(q, 0);
  for (int r = 0; r < q; ++r) ++hit[iso[r]];
  for (int r = 0; r < q; ++r)
    if (hit[r] != 1)
      fail(Errc::internal, std::string(me) + ": the characteristic map is not a bijection");
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (iso[(a + b) % q] != k.add[iso[a]][iso[b]] ||
          iso[(a * b) % q] != k.mul[iso[a]][iso[b]])
        fail(Errc::internal,
             std::string(me) + ": the characteristic map is not an isomorphism at " +
                 tuple_str({a, b}));
    }
  return {std::move(iso), "isomorphic to GF(" + std::to_string(q) + ")"};
}

FieldMatch identify_field(const CoordModel& m) { return identify_field(tables_of(m)); }

bool is_nondegenerate(const GeoMorphism& m) {
  const int ns = m.source.n_points();
  if (m.kernel.capacity() != ns || static_cast<int>(m.map.size()) != ns)
    fail(Errc::invalid_input, "is_nondegenerate: malformed morphism record");
  Bits img(m.target.n_points());
  for (int x = 0; x < ns; ++x) {
    if (m.kernel.test(x) != (m.map[x] < 0))
      fail(Errc::invalid_input, "is_nondegenerate: kernel flag and map disagree");
    if (m.map[x] >= 0) {
      m.target.check_point(m.map[x]);
      img.set(m.map[x]);
    }
  }
  if (img.count() < 3) return false;
  const int a = img.next(0);
  const int b = img.next(a + 1);
  Bits rest = img;
  rest.subtract(m.target.line_set(a, b));
  return rest.any();
}

namespace {

struct CanonicalSpace {
  std::int64_t p = 0;
  int d = 0;
  std::vector<std::vector<int>> pts;
};

CanonicalSpace decode_space(const Geometry& g, const char* which) {
  const std::string me = std::string("linearize_morphism: ") + which;
  if (g.line_count() == 0)
    fail(Errc::precondition, me + " has no lines; the coordinate field cannot be decoded");
  const std::int64_t p = static_cast<std::int64_t>(g.line_points(0).size()) - 1;
  std::int64_t count = 1, power = p;
  int d = 1;
  while (count < g.n_points() && d < 23) {
    count += power;
    power *= p;
    ++d;
  }
  if (count != g.n_points())
    fail(Errc::precondition, me + " has a point count matching no P(GF(p)^d)");
  try {
    if (!(from_vector_space(p, d) == g)) throw Error(Errc::invalid_input, "mismatch");
  } catch (const Error&) {
    fail(Errc::precondition,
         me + " is not the canonical coordinate geometry of GF(" + std::to_string(p) +
             ")^" + std::to_string(d));
  }
  return {p, d, projective_points(p, d)};
}

}  // namespace

SemilinearRep linearize_morphism(const GeoMorphism& m) {
  const char* me = "linearize_morphism";
  CanonicalSpace src = decode_space(m.source, "source");
  CanonicalSpace dst = decode_space(m.target, "target");
  if (src.p != dst.p)
    fail(Errc::precondition,
         std::string(me) + ": source and target fields differ; no automorphism in scope");
  if (!check_morphism(m))
    fail(Errc::precondition, std::string(me) + ": not a morphism of geometries");

  const int ns = m.source.n_points();
  int first = -1;
  bool two = false;
  for (int x = 0; x < ns && !two; ++x) {
    if (m.map[x] < 0) continue;
    if (first < 0) first = m.map[x];
    else if (m.map[x] != first) two = true;
  }
  if (!two)
    fail(Errc::precondition,
         std::string(me) + ": the image spans fewer than two dimensions, so no matrix is "
                           "determined up to scalar");

  const FieldSpec fp = FieldSpec::prime(src.p);
  const int r = dst.d, cdim = src.d;

  // Homogeneous system in the matrix entries plus one scale factor per
  // defined point: F v(x) - mu_x w(m(x)) = 0, and F v(x) = 0 on the kernel.
  std::vector<int> mu_col(ns, -1);
  int defined = 0;
  for (int x = 0; x < ns; ++x)
    if (m.map[x] >= 0) mu_col[x] = r * cdim + defined++;
  Matrix sys(ns * r, r * cdim + defined, fp);
  for (int x = 0; x < ns; ++x)
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < cdim; ++j)
        sys.at(x * r + i, i * cdim + j) = Scalar::of(fp, src.pts[x][j]);
      if (m.map[x] >= 0)
        sys.at(x * r + i, mu_col[x]) = -Scalar::of(fp, dst.pts[m.map[x]][i]);
    }

  Matrix kb = kernel_basis(sys);
  const int kd = kb.rows();
  if (kd == 0)
    fail(Errc::oracle_inconsistent,
         std::string(me) + ": no nonzero matrix is consistent with the morphism");
  if (kd > 6)
    fail(Errc::oracle_inconsistent,
         std::string(me) + ": the solution space is unexpectedly large (" +
             std::to_string(kd) + " dimensions)");

  // Walk the kernel combinations until one candidate reproduces the
  // morphism on every point.
  std::int64_t total = 1;
  for (int i = 0; i < kd; ++i) total *= src.p;
  for (std::int64_t code = 1; code < total; ++code) {
    Matrix f(r, cdim, fp);
    std::int64_t rem = code;
    bool zero = true;
    for (int row = 0; row < kd; ++row) {
      const Scalar coef = Scalar::of(fp, rem % src.p);
      rem /= src.p;
      if (coef.is_zero()) continue;
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < cdim; ++j)
          f.at(i, j) = f.at(i, j) + coef * kb.at(row, i * cdim + j);
    }
    for (int i = 0; i < r && zero; ++i)
      for (int j = 0; j < cdim && zero; ++j) zero = f.at(i, j).is_zero();
    if (zero) continue;

    bool ok = true;
    for (int x = 0; x < ns && ok; ++x) {
      std::vector<Scalar> w(r, Scalar::zero(fp));
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < cdim; ++j)
          w[i] = w[i] + f.at(i, j) * Scalar::of(fp, src.pts[x][j]);
      if (m.map[x] < 0) {
        for (int i = 0; i < r && ok; ++i) ok = w[i].is_zero();
        continue;
      }
      const std::vector<int>& tw = dst.pts[m.map[x]];
      int fi = -1;
      for (int i = 0; i < r && fi < 0; ++i)
        if (tw[i] != 0) fi = i;
      const Scalar lambda = w[fi];  // tw[fi] == 1 in canonical form
      if (lambda.is_zero()) {
        ok = false;
        continue;
      }
      for (int i = 0; i < r && ok; ++i) ok = w[i] == lambda * Scalar::of(fp, tw[i]);
    }
    if (!ok) continue;

    Scalar lead = Scalar::zero(fp);
    for (int i = 0; i < r && lead.is_zero(); ++i)
      for (int j = 0; j < cdim && lead.is_zero(); ++j)
        if (!f.at(i, j).is_zero()) lead = f.at(i, j);
    return SemilinearRep{f.scaled(lead.inverse()), "identity"};
  }
  fail(Errc::oracle_inconsistent,
       std::string(me) + ": no consistent matrix reproduces the morphism");
}

}  // namespace plg
