#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fab/degree_growth.hpp"
#include "fab/map_core.hpp"
#include "fab/picard.hpp"

using namespace fab;

static Params prm21() { return Params(Rat(-2), Rat(1)); }

TEST_CASE("homogeneous triple matches the affine map") {
  Params p = prm21();
  HomTriple f = f_homogeneous(p);
  CHECK(f.deg == 3);
  // z-component is a unit multiple of xyz
  CHECK(f.c[2].xy_degree() == 2);
  CHECK(f.c[2].at(1, 1) != 0);
  // evaluate at [2:3:1] and compare with the affine formulas
  auto img = [&](const Rat& x, const Rat& y) {
    mpq_class X = poly_eval(f.c[0], x, y, Rat(1));
    mpq_class Y = poly_eval(f.c[1], x, y, Rat(1));
    mpq_class Z = poly_eval(f.c[2], x, y, Rat(1));
    return std::make_pair(Rat(X / Z), Rat(Y / Z));
  };
  for (auto [x, y] : {std::make_pair(Rat(2), Rat(3)), {Rat(-5, 7), Rat(9, 4)},
                      {Rat(1, 3), Rat(-8)}}) {
    auto r = apply_f(ChartPoint::affine(x, y), p, Direction::Forward);
    REQUIRE(r.point.has_value());
    REQUIRE(r.point->is_affine());
    auto [X, Y] = img(x, y);
    CHECK(X == r.point->x.rat());
    CHECK(Y == r.point->y.rat());
  }
}

TEST_CASE("polynomial gcd unit tests") {
  // (x+y)(x-z) vs (x+y)(y+2z): gcd x+y
  HomPoly a(1), b(1), c(1);
  a.at(1, 0) = 1;
  a.at(0, 1) = 1;  // x + y
  b.at(1, 0) = 1;
  b.at(0, 0) = -1;  // x - z
  c.at(0, 1) = 1;
  c.at(0, 0) = 2;  // y + 2z
  HomPoly ab = poly_mul(a, b), ac = poly_mul(a, c);
  HomPoly g = poly_gcd(ab, ac);
  CHECK(g.deg == 1);
  auto q = poly_divexact(ab, g);
  REQUIRE(q.has_value());
  CHECK(poly_divexact(ac, g).has_value());
  // coprime inputs
  HomPoly g2 = poly_gcd(b, c);
  CHECK(g2.deg == 0);
  // repeated factor: a^2 b vs a^2 c -> gcd degree 2
  HomPoly a2b = poly_mul(poly_mul(a, a), b);
  HomPoly a2c = poly_mul(poly_mul(a, a), c);
  HomPoly g3 = poly_gcd(a2b, a2c);
  CHECK(g3.deg == 2);
  CHECK(poly_divexact(a2b, g3).has_value());
  // big-coefficient sanity: scale one input
  HomPoly ab2 = ab;
  mpz_class big("123456789012345678901234567890");
  for (auto& cc : ab2.a) cc *= big;
  HomPoly g4 = poly_gcd(ab2, ac);
  CHECK(g4.deg == 1);
}

TEST_CASE("generic degree sequence 1,3,7,16,35,76 matches prediction") {
  Params p = prm21();
  DegreeReport rep = degree_sequence(p, 6, 6);
  REQUIRE(rep.degrees.size() == 7);
  std::vector<long> want = {1, 3, 7, 16, 35, 76, 164};
  for (int n = 0; n <= 6; ++n) CHECK(rep.degrees[n] == want[n]);
  CHECK(!rep.truncated);
  std::vector<long> pred = predicted_degrees(6);
  REQUIRE(pred.size() == 7);
  for (int n = 0; n <= 6; ++n) CHECK(pred[n] == rep.degrees[n]);
  // submultiplicativity and eventual ratio near rho
  for (int n = 0; n < 6; ++n) CHECK(rep.degrees[n + 1] <= 3 * rep.degrees[n]);
  double rho = dynamical_degree();
  CHECK(std::fabs(double(rep.degrees[6]) / double(rep.degrees[5]) - rho) < 0.05);
}

TEST_CASE("second generic parameter pair agrees with prediction") {
  Params p(Rat(-7, 3), Rat(5, 2));
  REQUIRE(p.generic);
  DegreeReport rep = degree_sequence(p, 5, 5);
  std::vector<long> pred = predicted_degrees(5);
  REQUIRE(rep.degrees.size() == 6);
  for (int n = 0; n <= 5; ++n) CHECK(rep.degrees[n] == pred[n]);
}

TEST_CASE("non-generic parameters drop below the predicted degree") {
  Params p(Rat(-1, 4), Rat(1));
  REQUIRE(!p.generic);
  DropReport r = detect_degree_drop(p, 6);
  CHECK(r.dropped);
  CHECK(r.first_n <= 6);
  CHECK(r.actual < r.predicted);
}
