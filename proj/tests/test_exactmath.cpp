#include <random>
#include <vector>

#include "doctest.h"
#include "plg/error.hpp"
#include "plg/field.hpp"
#include "plg/matrix.hpp"

using plg::Errc;
using plg::Error;
using plg::FieldSpec;
using plg::Matrix;
using plg::Scalar;

namespace {

Matrix from_int_rows(const FieldSpec& f, const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<Scalar>> s;
  for (const auto& r : rows) {
    std::vector<Scalar> row;
    for (int v : r) row.push_back(Scalar::of(f, v));
    s.push_back(row);
  }
  return Matrix::from_rows(f, s);
}

Scalar random_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-20, 20), den(1, 20);
  return Scalar::rational(num(rng), den(rng));
}

Matrix random_matrix(const FieldSpec& f, int r, int c, std::mt19937& rng) {
  Matrix m(r, c, f);
  std::uniform_int_distribution<int> v(-10, 10);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      m.at(i, j) = f.is_prime() ? Scalar::of(f, v(rng)) : random_rational(rng);
  return m;
}

}  // namespace

TEST_CASE("field spec validation") {
  CHECK(FieldSpec::prime(2).p == 2);
  CHECK(FieldSpec::prime(7919).p == 7919);
  CHECK_THROWS_AS(FieldSpec::prime(4), Error);
  CHECK_THROWS_AS(FieldSpec::prime(1), Error);
  CHECK_THROWS_AS(FieldSpec::prime(-3), Error);
  try {
    FieldSpec::prime(9);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_input);
  }
  CHECK(FieldSpec::rationals().p == 0);
  CHECK(FieldSpec::prime(3) != FieldSpec::prime(5));
}

TEST_CASE("scalar canonical forms") {
  auto f5 = FieldSpec::prime(5);
  CHECK(Scalar::of(f5, 7).residue() == 2);
  CHECK(Scalar::of(f5, -1).residue() == 4);
  CHECK(Scalar::of(f5, 2) + Scalar::of(f5, 4) == Scalar::of(f5, 1));
  CHECK(Scalar::of(f5, 2) * Scalar::of(f5, 3) == Scalar::of(f5, 1));
  CHECK(-Scalar::of(f5, 2) == Scalar::of(f5, 3));

  CHECK(Scalar::rational(2, 4) == Scalar::rational(1, 2));
  CHECK(Scalar::rational(1, -2) == Scalar::rational(-1, 2));
  CHECK(Scalar::rational(3, 4).str() == "3/4");
  CHECK(Scalar::rational(-6, 3).str() == "-2");
  CHECK(Scalar::rational(1, 3).sign() == 1);
  CHECK(Scalar::rational(-1, 3).sign() == -1);
  CHECK(Scalar::rational(0, 3).sign() == 0);
}

TEST_CASE("scalar parsing") {
  auto q = FieldSpec::rationals();
  CHECK(plg::parse_scalar(q, "3/4") == Scalar::rational(3, 4));
  CHECK(plg::parse_scalar(q, "-7") == Scalar::rational(-7, 1));
  CHECK(plg::parse_scalar(q, "6/4") == Scalar::rational(3, 2));
  CHECK_THROWS_AS(plg::parse_scalar(q, "1/0"), Error);
  CHECK_THROWS_AS(plg::parse_scalar(q, "x"), Error);
  CHECK_THROWS_AS(plg::parse_scalar(q, ""), Error);
  auto f3 = FieldSpec::prime(3);
  CHECK(plg::parse_scalar(f3, "5") == Scalar::of(f3, 2));
  CHECK(plg::parse_scalar(f3, "-1") == Scalar::of(f3, 2));
}

TEST_CASE("scalar division guards") {
  auto f7 = FieldSpec::prime(7);
  CHECK(Scalar::of(f7, 3) / Scalar::of(f7, 5) == Scalar::of(f7, 2));  // 3*5^{-1}=3*3=2
  CHECK_THROWS_AS(Scalar::of(f7, 1) / Scalar::zero(f7), Error);
  CHECK_THROWS_AS(Scalar::zero(f7).inverse(), Error);
  CHECK_THROWS_AS(Scalar::rational(0, 1).inverse(), Error);
  // Mixed-field arithmetic is a usage error.
  CHECK_THROWS_AS(Scalar::of(f7, 1) + Scalar::rational(1, 2), Error);
}

TEST_CASE("field axioms on samples") {
  // GF(5): exhaustive.
  auto f5 = FieldSpec::prime(5);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        auto sa = Scalar::of(f5, a), sb = Scalar::of(f5, b), sc = Scalar::of(f5, c);
        CHECK((sa + sb) + sc == sa + (sb + sc));
        CHECK((sa * sb) * sc == sa * (sb * sc));
        CHECK(sa * (sb + sc) == sa * sb + sa * sc);
        if (a != 0) CHECK(sa * sa.inverse() == Scalar::one(f5));
      }
  // Rationals: randomized.
  std::mt19937 rng(991);
  for (int t = 0; t < 200; ++t) {
    Scalar a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::rational(1, 1));
  }
}

TEST_CASE("rref pinned examples") {
  auto f2 = FieldSpec::prime(2);
  auto q = FieldSpec::rationals();

  auto r1 = plg::rref(Matrix::identity(3, f2));
  CHECK(r1.reduced == Matrix::identity(3, f2));
  CHECK(r1.pivot_cols == std::vector<int>{0, 1, 2});

  auto r2 = plg::rref(from_int_rows(f2, {{1, 1}, {1, 1}}));
  CHECK(r2.reduced == from_int_rows(f2, {{1, 1}, {0, 0}}));
  CHECK(r2.pivot_cols == std::vector<int>{0});

  auto r3 = plg::rref(from_int_rows(q, {{2, 4}}));
  CHECK(r3.reduced == from_int_rows(q, {{1, 2}}));
  CHECK(r3.pivot_cols == std::vector<int>{0});
}

TEST_CASE("rref idempotent and rank-nullity on random matrices") {
  std::mt19937 rng(1723);
  for (const auto& f : {FieldSpec::prime(3), FieldSpec::rationals()}) {
    for (int t = 0; t < 40; ++t) {
      int r = 1 + static_cast<int>(rng() % 5), c = 1 + static_cast<int>(rng() % 5);
      Matrix m = random_matrix(f, r, c, rng);
      auto rr = plg::rref(m);
      CHECK(plg::rref(rr.reduced).reduced == rr.reduced);
      Matrix k = plg::kernel_basis(m);
      CHECK(plg::rank(m) + k.rows() == c);
      // Every kernel row really solves m x = 0.
      for (int i = 0; i < k.rows(); ++i) {
        auto prod = plg::mat_vec(m, k.row(i));
        for (const auto& s : prod) CHECK(s.is_zero());
      }
      CHECK(plg::rank(k) == k.rows());  // independent rows
    }
  }
}

TEST_CASE("kernel pinned examples") {
  auto f2 = FieldSpec::prime(2);
  auto q = FieldSpec::rationals();
  CHECK(plg::kernel_basis(Matrix(2, 3, q)).rows() == 3);
  Matrix k = plg::kernel_basis(from_int_rows(f2, {{1, 1}}));
  REQUIRE(k.rows() == 1);
  CHECK(k.at(0, 0) == Scalar::one(f2));
  CHECK(k.at(0, 1) == Scalar::one(f2));
  CHECK(plg::kernel_basis(from_int_rows(q, {{2, 0, 0}, {1, 1, 0}, {0, 3, 3}})).rows() == 0);
}

TEST_CASE("solve pinned examples") {
  auto q = FieldSpec::rationals();
  auto f3 = FieldSpec::prime(3);

  std::vector<Scalar> b{Scalar::rational(5, 2), Scalar::rational(-1, 3)};
  auto x = plg::solve(Matrix::identity(2, q), b);
  REQUIRE(x.has_value());
  CHECK(*x == b);

  auto y = plg::solve(from_int_rows(f3, {{1, 1}}), {Scalar::of(f3, 2)});
  REQUIRE(y.has_value());
  CHECK((*y)[0] + (*y)[1] == Scalar::of(f3, 2));

  auto none = plg::solve(from_int_rows(q, {{1}, {1}}),
                         {Scalar::rational(1, 1), Scalar::rational(2, 1)});
  CHECK(!none.has_value());

  CHECK_THROWS_AS(plg::solve(from_int_rows(q, {{1, 1}}), b), Error);
}

TEST_CASE("solutions verified by substitution on random systems") {
  std::mt19937 rng(4211);
  auto q = FieldSpec::rationals();
  for (int t = 0; t < 60; ++t) {
    int r = 1 + static_cast<int>(rng() % 4), c = 1 + static_cast<int>(rng() % 4);
    Matrix m = random_matrix(q, r, c, rng);
    // Consistent by construction: b = m * x0.
    std::vector<Scalar> x0;
    for (int j = 0; j < c; ++j) x0.push_back(random_rational(rng));
    auto b = plg::mat_vec(m, x0);
    auto x = plg::solve(m, b);
    REQUIRE(x.has_value());
    CHECK(plg::mat_vec(m, *x) == b);
  }
}

TEST_CASE("matrix inverse") {
  auto q = FieldSpec::rationals();
  Matrix m = from_int_rows(q, {{2, 1, 0}, {1, 1, 0}, {3, 0, 1}});
  auto inv = plg::inverse(m);
  REQUIRE(inv.has_value());
  CHECK(m * *inv == Matrix::identity(3, q));
  CHECK(*inv * m == Matrix::identity(3, q));
  CHECK(!plg::inverse(from_int_rows(q, {{1, 2}, {2, 4}})).has_value());
}
