#ifndef PLG_COORDINATIZE_HPP
#define PLG_COORDINATIZE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plg/bits.hpp"
#include "plg/geometry.hpp"
#include "plg/matrix.hpp"

namespace plg {

// A hyperplane is a coatom of the subspace lattice: a proper subspace
// whose join with any outside point is the whole geometry.
using Hyperplane = Subspace;

// Self-isomorphism of a geometry.  When axis/center are present, the map
// has been verified to fix the axis pointwise and every line through the
// center setwise.
struct Collineation {
  std::vector<int> perm;
  std::optional<Hyperplane> axis;
  std::optional<int> center;

  int operator()(int a) const { return perm[a]; }
};

// All hyperplanes of an irreducible geometry: closures of the independent
// sets one point short of a basis, deduplicated and sorted by (size,
// lexicographic member order).  Each one is re-verified to be a coatom.
std::vector<Hyperplane> hyperplanes(const Geometry& g);

// The unique collineation with axis h and center c taking p to p_prime
// (Baer existence, assuming Desargues).  Points x off the axis and off
// c*p follow
//     alpha(x) = (c*x) ^ (f * alpha(p)),   f = (p*x) ^ h;
// the remaining points of c*p are routed through an auxiliary reference
// point off that line (aux, chosen canonically when negative -- the result
// must not depend on it).  The assembled map is verified to be a
// collineation fixing h pointwise and every line through c setwise; any
// breakdown reports construction_failure, which on a structurally valid
// geometry signals a Desargues violation.
Collineation central_collineation(const Geometry& g, const Hyperplane& h,
                                  int c, int p, int p_prime, int aux = -1);

// The translations (axis h, center on h) transported onto V = G \ h:
// points lists V increasingly, add is the induced addition table on
// indices with the origin at zero, and taus[i] carries the origin to
// points[i].  The table is verified to be an abelian group.
struct TranslationGroup {
  Hyperplane axis;
  int origin = -1;
  std::vector<int> points;
  int zero = -1;
  std::vector<std::vector<int>> add;
  std::vector<Collineation> taus;
};

TranslationGroup translation_group(const Geometry& g, const Hyperplane& h, int o);

// Field tables over abstract element ids: 0 is the additive identity and
// 1 the multiplicative one.  Commutativity of mul is measured when the
// tables are verified, never assumed.
struct FieldTables {
  int order = 0;
  std::vector<std::vector<int>> add, mul;
  bool mul_commutative = false;
};

// The scalar field of a coordinatization: the homotheties (center o,
// axis h) together with the constant-to-o map as zero.  Multiplication is
// composition, addition is pointwise translation-addition on V; both are
// verified on every point, and the full field axioms are checked
// exhaustively.  action[s] is the total point map of scalar s (action[0]
// sends everything to the origin); homotheties[s] is the collineation
// behind s >= 1, entry 0 stays an empty placeholder.
struct HomothetyField {
  FieldTables tables;
  int unit_point = -1;                 // u: scalar s is pinned by action[s][u]
  std::vector<int> scale_points;       // scale_points[s] = action[s][u]
  std::vector<std::vector<int>> action;
  std::vector<Collineation> homotheties;
};

HomothetyField homothety_field(const Geometry& g, const TranslationGroup& t);
HomothetyField homothety_field(const Geometry& g, const Hyperplane& h, int o);

// Homogeneous coordinates over the recovered field: coords[x] is the
// canonical representative (first nonzero entry = 1) of the coordinate
// class of point x, a vector of vspace_dim abstract field ids.
struct CoordModel {
  int field_order = 0;
  std::vector<std::vector<int>> add_table, mul_table;
  int vspace_dim = 0;
  std::vector<std::vector<int>> coords;
};

// Full coordinatization of an irreducible arguesian geometry of dimension
// >= 2.  With seed 0 the hyperplane at infinity is the first one in
// canonical order and the origin the least point off it; a nonzero seed
// draws both choices pseudo-randomly, which must not change the model up
// to isomorphism.  The coordinate map is verified to be an isomorphism
// onto the projective space over the recovered tables, and the vector
// space axioms (including s(-x) = -s(x)) are checked exhaustively.
CoordModel coordinatize(const Geometry& g, std::uint64_t seed = 0);

// Canonical projective points over the model's tables, in lexicographic
// id order, and the geometry they span (lines = two-point spans).
// coordinatize's coords index into exactly this point list.
std::vector<std::vector<int>> model_points(const CoordModel& m);
Geometry model_geometry(const CoordModel& m);

struct FieldMatch {
  std::optional<std::vector<int>> iso;  // residue r of GF(p) -> abstract id
  std::string note;
};

// Prime-order tables are matched to GF(p) through r -> 1 + ... + 1 (r
// ones), verified to be a field isomorphism.  Non-prime orders come back
// absent with an explanatory note.
FieldMatch identify_field(const FieldTables& k);
FieldMatch identify_field(const CoordModel& m);

// True when the image of m contains three non-collinear points.
bool is_nondegenerate(const GeoMorphism& m);

struct SemilinearRep {
  Matrix matrix;      // over GF(p); rows = target dim, cols = source dim
  std::string sigma;  // field automorphism descriptor; always "identity" here
};

// Recovers the matrix inducing a morphism between canonical coordinate
// geometries (both from_vector_space over the same prime).  The morphism
// must span at least two dimensions -- that is what pins the matrix up to
// a scalar -- and the result is verified on every point and returned with
// its first nonzero entry scaled to 1.
SemilinearRep linearize_morphism(const GeoMorphism& m);

}  // namespace plg

#endif
