#ifndef PLG_CORPUS_HPP
#define PLG_CORPUS_HPP

#include <cstdint>

#include "plg/geometry.hpp"
#include "plg/ortho.hpp"

namespace plg {

// Named generators for the structures the suites and the CLI exercise.
// Every generator is deterministic: the same call yields the same object.

Geometry fano();                     // P(GF(2)^3): 7 points, 7 lines
Geometry pg(int d, std::int64_t p);  // P(GF(p)^{d+1}), projective dimension d
Geometry discrete(int n);            // n points, no lines
Geometry line(int n);                // a single line with n >= 3 points

// MO_n: a single line with 2n points, point 2i orthogonal to point 2i+1.
// The closed subspaces form the modular ortholattice MO_n.
OrthoGeometry mo(int n);

// n isolated points, pairwise orthogonal; the closed subspaces form the
// Boolean algebra 2^n.
OrthoGeometry boolean(int n);

// The six-element "benzene ring" O6: orthocomplemented but not
// orthomodular.  Elements are 0, a = 1, b = 2, b' = 3, a' = 4, 1 = 5 with
// a <= b, b' <= a' and perp x -> 5 - x.
OrthoLattice benzene();

// The Hall plane of order 9: projective completion of the affine plane
// over the order-9 nearfield, which is GF(9) with multiplication twisted
// by the Frobenius for non-square slopes.  91 points and 91 lines of 10
// points each; satisfies (G1)-(G3) but not Desargues.
Geometry hall9();

}  // namespace plg

#endif
