#ifndef PLG_IO_HPP
#define PLG_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "plg/geometry.hpp"
#include "plg/lattice.hpp"
#include "plg/matrix.hpp"

namespace plg {

// A parsed geometry file: the incidence structure plus the optional
// orthogonality pairs (present only when the file carried `ortho` lines
// or a JSON "ortho" array).  Pairs are stored sorted with i < j.
struct GeoFile {
  Geometry geom;
  std::vector<std::pair<int, int>> ortho;

  bool has_ortho() const { return !ortho.empty(); }
};

// A parsed lattice file: the order (closed under existing meets/joins)
// plus the optional orthocomplement map (`perp i j` lines; empty when
// absent).  When present the map must be total.
struct LatFile {
  FiniteLattice lat;
  std::vector<int> perp;

  bool has_perp() const { return !perp.empty(); }
};

// Text format:
//   points N
//   line i j k ...     (three or more point indices)
//   ortho i j          (optional, i < j)
// JSON mirror: {"points": N, "lines": [[...]], "ortho": [[i, j], ...]}.
// The parser sniffs the format from the first non-space byte; malformed
// input of either kind raises invalid-input.
GeoFile parse_geometry(const std::string& text);
std::string write_geometry(const GeoFile& f);
std::string write_geometry_json(const GeoFile& f);

// Text format:
//   elements N
//   leq i j            (the full order relation; reflexive pairs optional)
//   perp i j           (optional orthocomplement map, one line per element)
// JSON mirror: {"elements": N, "leq": [[i, j], ...], "perp": [[i, j], ...]}.
// The relation is taken literally (no transitive closure) and must be a
// lattice order.  Serialization lists the non-reflexive pairs sorted.
LatFile parse_lattice(const std::string& text);
std::string write_lattice(const LatFile& f);
std::string write_lattice_json(const LatFile& f);

// Text format:
//   dim N
// followed by N rows of N rationals (`p` or `p/q`).  JSON mirror:
// {"dim": N, "rows": [["1", "-1/2", ...], ...]} with entries as strings.
Matrix parse_gram(const std::string& text);
std::string write_gram(const Matrix& gram);
std::string write_gram_json(const Matrix& gram);

// 64-bit FNV-1a digest of a byte string, rendered as 16 hex digits.
// Used to tie run reports to their exact input.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace plg

#endif  // PLG_IO_HPP
