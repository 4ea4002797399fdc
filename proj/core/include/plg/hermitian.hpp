#ifndef PLG_HERMITIAN_HPP
#define PLG_HERMITIAN_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plg/lattice.hpp"
#include "plg/matrix.hpp"

namespace plg {

// Finite-dimensional rational vector space carrying a symmetric bilinear
// form, given by its Gram matrix.  The identity is the only involution of
// the rationals, so symmetric and Hermitian coincide here.
struct HermitianSpace {
  int dim = 0;
  Matrix gram;
  std::string involution = "identity";
};

// Validates that `gram` is square, rational, and symmetric.
HermitianSpace make_space(Matrix gram);

// A linear subspace, stored as a basis in reduced row echelon form with
// zero rows dropped.  The representation is canonical: two subspaces are
// equal exactly when their stored bases are.
struct LinSubspace {
  Matrix basis;

  int dim() const { return basis.rows(); }
  bool operator==(const LinSubspace& o) const { return basis == o.basis; }
  bool operator!=(const LinSubspace& o) const { return !(*this == o); }
};

// Row span of an arbitrary rational matrix, canonicalized.
LinSubspace span(const Matrix& rows);
LinSubspace zero_subspace(int dim);
LinSubspace full_subspace(int dim);

struct FormAxiomReport {
  bool s1 = false;  // linearity in the first argument (structural for a Gram form)
  bool s2 = false;  // symmetry of the form (structural once the Gram is symmetric)
  bool s3 = false;  // orthomodular splitting; at finite dimension this follows from s4
  bool s4 = false;  // anisotropy, decided by congruence diagonalization
  // A nonzero vector w with <w, w> = 0, when one with rational entries is
  // found.  Sign-indefinite forms without a rational isotropic vector get
  // s4 == false and no witness.
  std::optional<std::vector<Scalar>> isotropic_witness;
  std::string note;

  bool ok() const { return s1 && s2 && s3 && s4; }
};

// Decides the form axioms.  Anisotropy is decided by diagonalizing the
// Gram matrix by congruence and demanding one common sign on the diagonal
// (definiteness); s3 is inferred from s4 and spot-checked on a family of
// sampled subspaces.
FormAxiomReport check_form(const HermitianSpace& h);

// { x | <x, y> = 0 for all y in w }: the kernel of basis(w) * gram.
// Requires an anisotropic form; the complement laws are asserted.
LinSubspace perp(const HermitianSpace& h, const LinSubspace& w);

// Intersection and sum of subspaces (no form involved).
LinSubspace meet(const LinSubspace& a, const LinSubspace& b);
LinSubspace join(const LinSubspace& a, const LinSubspace& b);

// Whether w and its perp decompose the space: w ^ w-perp = 0 and
// w v w-perp = H.
bool direct_sum_with_perp(const HermitianSpace& h, const LinSubspace& w);

struct OrthoSampleReport {
  PredFlag o1;  // no sampled vector is orthogonal to itself
  PredFlag o2;  // orthogonality is symmetric on the sample
  PredFlag o3;  // combinations of vectors orthogonal to p stay orthogonal to p
  PredFlag o4;  // each sampled pair's line carries a vector orthogonal to the first
  std::string note;

  bool ok() const { return o1.holds && o2.holds && o3.holds && o4.holds; }
};

// Checks the Hilbert-geometry orthogonality axioms on a finite list of
// nonzero, pairwise non-proportional vectors.  Witness entries are sample
// indices.  The O4 witness is the Gram-Schmidt projection inside the
// sampled plane.  Biorthogonal closure (O5) is not sampled; it is covered
// by the subspace calculus instead.
OrthoSampleReport induced_ortho_check(const HermitianSpace& h,
                                      const std::vector<std::vector<Scalar>>& points);

// Orthogonality predicate on nonzero rational vectors.  Must be pure and
// projective: proportional inputs get the same answer (spot-checked).
using OrthoOracle =
    std::function<bool(const std::vector<Scalar>&, const std::vector<Scalar>&)>;

struct FormReport {
  Matrix form;                          // first nonzero entry normalized to 1
  std::string involution = "identity";
  Scalar scale;                         // nonzero; assembled form = `form` * scale
};

// Rebuilds a symmetric bilinear form from its orthogonality relation alone.
// For each frame direction y the functional with kernel y-perp is pinned by
// collecting dim-1 oracle-orthogonal directions: basis vectors first, then
// lines e_i + t*e_j with the slope t searched in order of increasing
// height (numerator/denominator bound grows up to `search_height`).  The
// frame columns are scale-aligned through the mixed directions e_0 + e_j,
// and the assembled matrix must come out symmetric and reproduce the
// oracle on a seeded verification grid.
//
// Errors: oracle-inconsistent when no hyperplane fits, the frame cannot be
// aligned, or the grid check disagrees; construction-failure when every
// frame vector is isotropic.
FormReport piron_reconstruct(int dim, const OrthoOracle& oracle,
                             std::uint64_t seed = 0, int search_height = 1024);

// The scalar lambda with f2 = f1 * lambda, when the two symmetric forms
// are proportional; absent means they induce different orthogonality.
std::optional<Scalar> form_uniqueness(const Matrix& f1, const Matrix& f2);

// The scalar lambda with <Mx, My>_2 = <x, y>_1 * lambda for all x, y,
// checked on all basis pairs (enough, by bilinearity).  Requires M
// invertible; lambda == 1 means M is unitary.
std::optional<Scalar> semiunitary_check(const Matrix& m, const HermitianSpace& h1,
                                        const HermitianSpace& h2);

}  // namespace plg

#endif
