#include "plg/corpus.hpp"

#include <array>
#include <string>
#include <vector>

#include "plg/error.hpp"

namespace plg {

Geometry fano() { return from_vector_space(2, 3); }

Geometry pg(int d, std::int64_t p) {
  if (d < 1) fail(Errc::invalid_input, "pg: projective dimension must be >= 1");
  return from_vector_space(p, d + 1);
}

Geometry discrete(int n) {
  if (n < 0) fail(Errc::invalid_input, "discrete: negative point count");
  return Geometry(n, {}, Provenance::generated);
}

Geometry line(int n) {
  if (n < 3) fail(Errc::invalid_input, "line: a stored line needs at least 3 points");
  std::vector<int> ln(n);
  for (int i = 0; i < n; ++i) ln[i] = i;
  return Geometry(n, {ln}, Provenance::generated);
}

OrthoGeometry mo(int n) {
  if (n < 1) fail(Errc::invalid_input, "mo: need at least one orthogonal pair");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) pairs.emplace_back(2 * i, 2 * i + 1);
  // mo(1) is the bare pair {0,1}: a two-point "line" is not storable, and
  // the line set 0*1 = {0,1} comes out right without it.
  Geometry g = n == 1 ? discrete(2) : line(2 * n);
  return OrthoGeometry(std::move(g), pairs);
}

OrthoGeometry boolean(int n) {
  if (n < 0) fail(Errc::invalid_input, "boolean: negative point count");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return OrthoGeometry(discrete(n), pairs);
}

OrthoLattice benzene() {
  FiniteLattice l = FiniteLattice::from_order(
      6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 2}, {1, 5},
          {2, 5}, {3, 4}, {3, 5}, {4, 5}});
  return OrthoLattice{std::move(l), {5, 4, 3, 2, 1, 0}};
}

namespace {

// GF(9) = GF(3)[t]/(t^2 + 1); the element a + bt has id a + 3b.
int gf9_add(int x, int y) {
  return (x % 3 + y % 3) % 3 + 3 * ((x / 3 + y / 3) % 3);
}

int gf9_mul(int x, int y) {
  const int a = x % 3, b = x / 3, c = y % 3, d = y / 3;
  return (a * c + 2 * b * d) % 3 + 3 * ((a * d + b * c) % 3);
}

}  // namespace

Geometry hall9() {
  std::array<bool, 9> square{};
  for (int x = 0; x < 9; ++x) square[gf9_mul(x, x)] = true;

  // Nearfield product x o m: the field product for square slopes, the
  // Frobenius twist x^3 * m for non-square slopes.  The twist preserves
  // additivity in x, which is what makes the slope through two affine
  // points unique.
  auto circ = [&](int x, int m) {
    return square[m] ? gf9_mul(x, m) : gf9_mul(gf9_mul(x, gf9_mul(x, x)), m);
  };

  // Affine point (x, y) is 9x + y; 81 + m is the point at infinity of the
  // slope-m pencil and 90 the one of the vertical pencil.
  std::vector<std::vector<int>> lines;
  for (int m = 0; m < 9; ++m)
    for (int b = 0; b < 9; ++b) {
      std::vector<int> ln;
      for (int x = 0; x < 9; ++x) ln.push_back(9 * x + gf9_add(circ(x, m), b));
      ln.push_back(81 + m);
      lines.push_back(std::move(ln));
    }
  for (int c = 0; c < 9; ++c) {
    std::vector<int> ln;
    for (int y = 0; y < 9; ++y) ln.push_back(9 * c + y);
    ln.push_back(90);
    lines.push_back(std::move(ln));
  }
  std::vector<int> inf;
  for (int i = 81; i < 91; ++i) inf.push_back(i);
  lines.push_back(std::move(inf));

  return Geometry(91, std::move(lines), Provenance::generated);
}

}  // namespace plg
