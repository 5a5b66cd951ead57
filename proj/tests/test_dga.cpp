#include <doctest.h>
#include <eqih/dga.hpp>

using namespace eqih;

TEST_CASE("exterior algebra parity restrictions") {
  CHECK_NOTHROW(exterior_algebra(Ring::rationals(), 3));
  CHECK_NOTHROW(exterior_algebra(Ring::rationals(), 1));
  CHECK_THROWS_AS(exterior_algebra(Ring::rationals(), 2), InvalidParity);
  CHECK_NOTHROW(exterior_algebra(Ring::prime_field(2), 2));
}

TEST_CASE("model algebra validates and has the expected homology") {
  SUBCASE("over Q the differential kills the middle") {
    DgAlgebra a = model_algebra(Ring::rationals());
    GradedComplex c = free_module(a).to_complex();
    CHECK(homology(c, 0).free_rank() == 1);
    CHECK(homology(c, 1).free_rank() == 0);
    CHECK(homology(c, 2).free_rank() == 0);
    CHECK(homology(c, 3).free_rank() == 1);
  }
  SUBCASE("over F2 the differential vanishes") {
    DgAlgebra a = model_algebra(Ring::prime_field(2));
    GradedComplex c = free_module(a).to_complex();
    for (int k = 0; k <= 3; k++) CHECK(homology(c, k).free_rank() == 1);
  }
  SUBCASE("the sign of the skew product is forced by Leibniz") {
    DgAlgebra a = model_algebra(Ring::rationals());
    a.mul[2][1] = Chain{{3, 1}}; // a2 a1 = +a3 breaks d(a2 a2) = 0
    CHECK_THROWS_AS(a.validate(), MathError);
  }
}

TEST_CASE("trivial and free modules validate over all rings") {
  for (const Ring& r : {Ring::rationals(), Ring::prime_field(2), Ring::prime_field(3)}) {
    DgAlgebra lam = exterior_algebra(r, 3);
    CHECK_NOTHROW(trivial_module(lam));
    CHECK_NOTHROW(trivial_module(lam, 2));
    CHECK_NOTHROW(free_module(lam));
  }
}

TEST_CASE("module validation catches broken Leibniz data") {
  DgAlgebra a = model_algebra(Ring::rationals());
  DgModule m = free_module(a);
  m.act[2][1] = Chain{{3, 1}}; // break skewness at the module level
  CHECK_THROWS_AS(m.validate(), MathError);
}

TEST_CASE("cyclic module gradings require even modulus") {
  CHECK_THROWS_AS(Grading::cyclic(7), MathError);
  DgAlgebra lam = exterior_algebra(Ring::rationals(), 3);
  DgModule m = trivial_module(lam);
  m.grading = Grading::cyclic(8);
  CHECK_NOTHROW(m.validate());
}

TEST_CASE("left module built from the algebra acting on itself validates") {
  DgAlgebra a = model_algebra(Ring::rationals());
  LeftDgModule m;
  m.alg = &a;
  m.grading = Grading::window(0, 4);
  m.deg = a.deg;
  m.dif = a.dif;
  m.lact.assign(a.dim(), std::vector<Chain>(a.dim()));
  for (size_t i = 0; i < a.dim(); i++)
    for (size_t x = 0; x < a.dim(); x++) m.lact[i][x] = a.mul[x][i];
  CHECK_NOTHROW(m.validate());
}
