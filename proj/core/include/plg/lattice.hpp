#ifndef PLG_LATTICE_HPP
#define PLG_LATTICE_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "plg/bits.hpp"
#include "plg/geometry.hpp"

namespace plg {

// Finite lattice materialized as an order matrix (bit rows) plus dense
// meet/join tables.  Element ids are 0..n-1; tables are uint16, which caps
// the size at 65535 elements -- far beyond anything the subspace
// enumeration cap admits.
struct FiniteLattice {
  int n = 0;
  std::vector<Bits> up;    // up[x] = { y : x <= y }
  std::vector<Bits> down;  // down[x] = { y : y <= x }
  std::vector<std::uint16_t> meet_t, join_t;  // n*n, row-major
  int bottom = -1, top = -1;
  std::vector<int> atoms;  // ascending element ids

  bool leq(int x, int y) const { return up[x].test(y); }
  int meet(int x, int y) const {
    return meet_t[static_cast<std::size_t>(x) * n + y];
  }
  int join(int x, int y) const {
    return join_t[static_cast<std::size_t>(x) * n + y];
  }
  bool is_atom(int x) const { return down[x].count() == 2; }

  // Builds a lattice from an explicit order relation (reflexivity is
  // filled in; transitivity must already hold).  Rejects non-orders and
  // non-lattices as invalid input, with a witness in the message.
  static FiniteLattice from_order(int n, const std::vector<std::pair<int, int>>& leq_pairs);
};

struct LatMorphism {
  FiniteLattice source;
  FiniteLattice target;
  std::vector<int> map;

  int operator()(int x) const { return map[x]; }
};

// Geometry together with its fully indexed subspace lattice.  Element ids
// follow the canonical all_subspaces order (by size, then lexicographic),
// so bottom = 0 is the empty set and atom ids are 1..n_points in point
// order.
struct SubspaceLattice {
  Geometry geom;
  FiniteLattice lat;
  std::vector<Bits> subspaces;  // element id -> point set
  std::unordered_map<Bits, int, BitsHash> index;

  int index_of(const Bits& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  }
};

struct PredFlag {
  bool holds = true;
  std::vector<int> witness;  // element tuple of the first failure
};

struct LatPredicates {
  PredFlag atomistic;
  PredFlag modular;
  PredFlag upper_semimodular;
  PredFlag lower_semimodular;
  PredFlag covering_law;
  PredFlag intersection_property;
  PredFlag atoms_compact;
  bool complete = true;    // automatic for finite lattices
  bool continuous = true;  // automatic for finite lattices
  std::string note;

  bool projective() const {
    return atomistic.holds && modular.holds && complete && continuous;
  }
};

// Upper cover rows: result[x] = { y : x is covered by y }.
std::vector<Bits> upper_covers(const FiniteLattice& l);

SubspaceLattice from_geometry(const Geometry& g, std::int64_t cap = 100000);

LatPredicates predicates(const FiniteLattice& l);

// Geometry on the atoms: point i is l.atoms[i], and a triple of distinct
// atoms is collinear iff each is below the join of the other two.
// Requires atomistic, covering law and intersection property.
Geometry atoms_geometry(const FiniteLattice& l);

struct AlphaResult {
  GeoMorphism morphism;  // g -> atoms_geometry(from_geometry(g))
  bool verified = false;
};
AlphaResult alpha_iso(const Geometry& g, std::int64_t cap = 100000);

struct BetaResult {
  LatMorphism morphism;  // l -> from_geometry(atoms_geometry(l))
  bool verified = false;
};
BetaResult beta_iso(const FiniteLattice& l);

struct LatCoproductResult {
  FiniteLattice lat;
  std::vector<LatMorphism> injections;
  std::vector<int> strides;  // mixed-radix decode of element ids
};
LatCoproductResult lattice_coproduct(const std::vector<FiniteLattice>& ls,
                                     std::int64_t cap = 100000);

// Elements z admitting a complement z' with x |-> (x^z, x^z') an order
// isomorphism onto [0,z] x [0,z'].
std::vector<int> center(const FiniteLattice& l);

// g*(T): kernel plus preimage, as a point set of the source.
Bits pullback_points(const GeoMorphism& m, const Bits& target_set);

// Subspace map S |-> smallest T with S <= g*(T) (left adjoint of g*).
LatMorphism map_L(const GeoMorphism& m, std::int64_t cap = 100000);

// Atom map of a lattice morphism; atoms sent to bottom form the kernel.
GeoMorphism map_G(const LatMorphism& f);

// Morphism validity: bottom to bottom, binary joins preserved, atoms to
// atoms or bottom (finite version of "preserves arbitrary suprema").
bool check_lat_morphism(const LatMorphism& f);

// Right adjoint of a join-preserving map (not necessarily atom-preserving):
// g(y) = max { x : f(x) <= y }.  The adjunction equivalence is re-verified
// exhaustively before returning.
std::vector<int> right_adjoint(const LatMorphism& f);

}  // namespace plg

#endif
