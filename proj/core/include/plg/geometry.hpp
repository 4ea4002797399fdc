#ifndef PLG_GEOMETRY_HPP
#define PLG_GEOMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "plg/bits.hpp"

namespace plg {

// A subspace is just a point set that happens to be closed under lines; we
// do not wrap it, the closure-checking lives in the operations.
using Subspace = Bits;

enum class Provenance { none, generated, parsed };

// Finite projective geometry on points 0..n-1.  Collinearity is stored as
// the table of maximal lines of size >= 3; a triple of distinct points is
// collinear iff it sits inside one stored line, and every triple with a
// repeated point is collinear by convention.  The constructor enforces the
// structural invariants (no short lines, no duplicate lines, and no pair of
// points covered by two different lines) and rejects violations as
// invalid input -- that last condition is what makes the pair -> line
// lookup table well defined.
class Geometry {
 public:
  Geometry() = default;
  Geometry(int n_points, std::vector<std::vector<int>> lines,
           Provenance prov = Provenance::none);

  int n_points() const { return n_; }
  int line_count() const { return static_cast<int>(lines_.size()); }
  const std::vector<std::vector<int>>& lines() const { return lines_; }
  const std::vector<int>& line_points(int li) const { return lines_[li]; }
  Provenance provenance() const { return prov_; }

  // Index of the stored line through two distinct points, or -1 when the
  // pair is bare (its line is just {a,b}).
  int line_index(int a, int b) const { return pair_line_[idx(a, b)]; }
  const Bits& line_mask(int li) const { return line_masks_[li]; }
  const std::vector<int>& lines_through(int p) const { return lines_through_[p]; }

  bool collinear(int a, int b, int c) const;

  // The line a*b as a point set: {a} if a == b, the stored line if there is
  // one, otherwise the bare pair {a,b}.
  Bits line_set(int a, int b) const;

  Bits all_points() const;

  bool operator==(const Geometry& o) const { return n_ == o.n_ && lines_ == o.lines_; }
  bool operator!=(const Geometry& o) const { return !(*this == o); }

  void check_point(int a) const;

 private:
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + b;
  }

  int n_ = 0;
  std::vector<std::vector<int>> lines_;  // each sorted; table sorted lexicographically
  Provenance prov_ = Provenance::none;
  std::vector<std::int32_t> pair_line_;  // n*n -> line index or -1
  std::vector<Bits> line_masks_;
  std::vector<std::vector<int>> lines_through_;
};

struct GeoAxiomReport {
  bool g1 = true;
  bool g2 = true;
  bool g3 = true;
  bool symmetric = true;          // cross-check of the derived relation
  std::vector<int> witness;       // offending tuple of the first failure
  std::string detail;
  bool ok() const { return g1 && g2 && g3 && symmetric; }
};

// Partial map between geometries.  Points in `kernel` are unmapped and have
// map[x] == -1; everything else maps to a target point.
struct GeoMorphism {
  Geometry source;
  Geometry target;
  Bits kernel;            // capacity = source.n_points()
  std::vector<int> map;   // size = source.n_points(), -1 exactly on kernel

  bool defined(int a) const { return !kernel.test(a); }
  int operator()(int a) const { return map[a]; }
};

struct CoproductResult {
  Geometry geom;
  std::vector<int> offsets;             // start index of each factor
  std::vector<GeoMorphism> injections;  // empty-kernel morphisms
};

struct DesarguesReport {
  bool holds = true;
  // On failure: c, a1, a2, a3, b1, b2, b3 of the first violating
  // configuration in enumeration order.
  std::vector<int> config;
  // The diagonal points (a_i*a_k) meet (b_i*b_k) for ik = 12, 13, 23;
  // -1 marks an empty intersection.
  std::vector<int> diagonals;
  std::string detail;
};

GeoAxiomReport check_axioms(const Geometry& g);

Subspace line(const Geometry& g, int a, int b);

Subspace closure(const Geometry& g, const Bits& s);
Subspace closure(const Geometry& g, const std::vector<int>& pts);

// Every subspace, sorted by (size, lexicographic member order).  Throws
// cap_exceeded once more than `cap` distinct subspaces are discovered.
std::vector<Subspace> all_subspaces(const Geometry& g, std::int64_t cap = 100000);

// Projective geometry of GF(p)^d: points are the 1-dimensional subspaces,
// canonically represented by the vector whose first nonzero coordinate is 1,
// in lexicographic order.
Geometry from_vector_space(std::int64_t p, int d);

// The canonical representative vectors behind from_vector_space, in point
// order; entries are residues 0..p-1.
std::vector<std::vector<int>> projective_points(std::int64_t p, int d);

CoproductResult coproduct(const std::vector<Geometry>& gs);

// Classes of the transitive closure of "a ~ b iff card(a*b) != 2", each an
// irreducible subspace; classes ordered by least member.
std::vector<std::vector<int>> irreducible_components(const Geometry& g);

// Geometry induced on one class (lines lying inside it, reindexed by rank).
// If global_of_local is non-null it receives local -> global point ids.
Geometry component_geometry(const Geometry& g, const std::vector<int>& cls,
                            std::vector<int>* global_of_local = nullptr);

bool is_irreducible(const Geometry& g);

// Requires an irreducible geometry of dimension >= 2.  Enumerates all
// Desargues configurations and reports the first one (in a fixed scan
// order) whose diagonal points fail to be collinear; an empty diagonal
// intersection also counts as a violation.
DesarguesReport desargues_holds(const Geometry& g);

// Rank minus one, computed by greedy point adjunction; empty geometry -> -1.
int dimension(const Geometry& g);

// Validity per the substructure-preimage definition: with an empty kernel
// the line criterion is decisive; with a nonempty kernel every target
// subspace T (enumerated up to cap) must pull back to a subspace.
bool check_morphism(const GeoMorphism& m, std::int64_t cap = 100000);

// Component of the target containing the image (requires an irreducible
// source and a nonempty image).
int component_of_image(const GeoMorphism& m);

// Total bijection preserving and reflecting collinearity.
bool is_isomorphism(const GeoMorphism& m);

GeoMorphism identity_morphism(const Geometry& g);

}  // namespace plg

#endif
