#include <doctest.h>

#include <random>
#include <set>

#include "htlrc/errors.hpp"
#include "htlrc/galois.hpp"

using namespace htlrc;

namespace {

// Shift-and-add product without any reduction tables, written independently
// of the library's reference path.
Element schoolbook(Element a, Element b, unsigned w, std::uint32_t poly) {
  std::uint32_t acc = 0;
  std::uint32_t x = a;
  for (unsigned i = 0; i < w; ++i) {
    if (b >> i & 1) acc ^= x;
    x <<= 1;
    if (x >> w & 1) x ^= poly;
  }
  return static_cast<Element>(acc);
}

}  // namespace

TEST_CASE("gf32 basic products") {
  const Field f = Field::gf32();
  for (Element a = 0; a < 32; ++a) CHECK(f.mul(a, 1) == a);
  CHECK(f.mul(2, 2) == 4);
  CHECK(f.mul(2, 16) == 9);
  CHECK(clmul_reduce(2, 16, 5, 0b101001) == 9);
}

TEST_CASE("table multiply matches carry-less reference on every pair") {
  for (const Field& f : {Field::gf32(), Field::gf256()}) {
    for (std::uint32_t a = 0; a < f.size(); ++a)
      for (std::uint32_t b = 0; b < f.size(); ++b) {
        const auto ea = static_cast<Element>(a), eb = static_cast<Element>(b);
        REQUIRE(f.mul(ea, eb) == clmul_reduce(ea, eb, f.w(), f.poly()));
        REQUIRE(f.mul(ea, eb) == schoolbook(ea, eb, f.w(), f.poly()));
      }
  }
}

TEST_CASE("gf65536 spot products against reference") {
  const Field f = Field::gf65536();
  std::mt19937 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const auto a = static_cast<Element>(rng()), b = static_cast<Element>(rng());
    REQUIRE(f.mul(a, b) == schoolbook(a, b, 16, 0x1100B));
  }
}

TEST_CASE("inverse") {
  const Field f = Field::gf32();
  CHECK(f.inv(1) == 1);
  for (Element a = 1; a < 32; ++a) CHECK(f.mul(a, f.inv(a)) == 1);

  Element found = 0;
  for (Element v = 1; v < 32; ++v)
    if (clmul_reduce(2, v, 5, 0b101001) == 1) found = v;
  CHECK(found != 0);
  CHECK(f.inv(2) == found);

  CHECK_THROWS_AS(f.inv(0), Error);
  CHECK_THROWS_AS(f.div(3, 0), Error);
}

TEST_CASE("field axioms on gf32") {
  const Field f = Field::gf32();
  for (Element a = 0; a < 32; ++a) {
    CHECK(Field::add(a, a) == 0);
    for (Element b = 0; b < 32; ++b) {
      CHECK(f.mul(a, b) == f.mul(b, a));
      for (Element c = 0; c < 32; ++c)
        REQUIRE(f.mul(a, Field::add(b, c)) == Field::add(f.mul(a, b), f.mul(a, c)));
    }
  }
}

TEST_CASE("multiplicative group of gf32 is cyclic of order 31") {
  const Field f = Field::gf32();
  std::set<Element> seen;
  Element x = 1;
  for (int i = 0; i < 31; ++i) {
    seen.insert(x);
    x = f.mul(x, f.generator());
  }
  CHECK(x == 1);
  CHECK(seen.size() == 31);
  CHECK(f.pow(f.generator(), 31) == 1);
}

TEST_CASE("field construction rejects bad polynomials") {
  CHECK_THROWS_AS(Field(5, 0b100001), Error);   // x^5+1 = (x+1)(...)
  CHECK_THROWS_AS(Field(5, 0b1001), Error);     // wrong degree
  CHECK_THROWS_AS(Field(17, 0x20009), Error);   // too wide
  CHECK(is_irreducible(0b101001, 5));
  CHECK(is_irreducible(0x11D, 8));
  CHECK_FALSE(is_irreducible(0b110, 2));
}

TEST_CASE("solve") {
  const Field f = Field::gf32();
  SUBCASE("identity") {
    std::vector<Element> b{3, 1, 4, 1, 5, 9};
    auto x = solve(f, Matrix::identity(6), b);
    REQUIRE(x);
    CHECK(*x == b);
  }
  SUBCASE("singular") {
    Matrix a(3, 3);
    a.data = {1, 2, 3, 1, 2, 3, 4, 5, 6};
    CHECK_FALSE(solve(f, a, {1, 2, 3}).has_value());
    CHECK(rank(f, a) == 2);
  }
  SUBCASE("random 6x6 multiply-back") {
    std::mt19937 rng(11);
    int solved = 0;
    for (int trial = 0; trial < 50; ++trial) {
      Matrix a(6, 6);
      for (auto& e : a.data) e = static_cast<Element>(rng() % 32);
      std::vector<Element> b(6);
      for (auto& e : b) e = static_cast<Element>(rng() % 32);
      auto x = solve(f, a, b);
      if (!x) {
        CHECK(rank(f, a) < 6);
        continue;
      }
      ++solved;
      CHECK(multiply(f, a, *x) == b);
      auto inv = invert(f, a);
      REQUIRE(inv);
      CHECK(multiply(f, a, *inv) == Matrix::identity(6));
    }
    CHECK(solved > 30);
  }
}
