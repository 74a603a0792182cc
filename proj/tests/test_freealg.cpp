#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "jwb/freealg.hpp"

using namespace jwb;
using namespace jwb::freealg;

namespace {

FreePoly P(const std::string& s) { return parse_poly(s); }

FreePoly random_poly(std::mt19937& rng, int max_terms = 4, int max_len = 3,
                     uint32_t max_gen = 3) {
  std::uniform_int_distribution<int> dt(1, max_terms), dl(0, max_len),
      dc(-4, 4), dd(1, 3);
  std::uniform_int_distribution<uint32_t> dg(1, max_gen);
  FreePoly f;
  int t = dt(rng);
  for (int i = 0; i < t; ++i) {
    Word w;
    int len = dl(rng);
    for (int j = 0; j < len; ++j) w.push_back(dg(rng));
    f.add_term(w, Rat(dc(rng), dd(rng)));
  }
  return f;
}

// Random polynomial homogeneous of degree d in `var`, built from other
// generators plus exactly d insertions of var per word.
FreePoly random_homogeneous(std::mt19937& rng, uint32_t var, int d) {
  std::uniform_int_distribution<int> dt(1, 3), dl(0, 2), dc(-3, 3);
  std::uniform_int_distribution<uint32_t> dg(1, 3);
  FreePoly f;
  int t = dt(rng);
  for (int i = 0; i < t; ++i) {
    Word w;
    int len = dl(rng);
    for (int j = 0; j < len; ++j) {
      uint32_t g = dg(rng);
      w.push_back(g == var ? g + 10 : g);  // keep var occurrences controlled
    }
    for (int j = 0; j < d; ++j) {
      std::uniform_int_distribution<size_t> dpos(0, w.size());
      w.insert(w.begin() + dpos(rng), var);
    }
    int c = dc(rng);
    f.add_term(w, c == 0 ? Rat(1) : Rat(c));
  }
  return f;
}

}  // namespace

TEST_CASE("parse basics and canonical form") {
  FreePoly comm12 = P("x1*x2 - x2*x1");
  CHECK(comm12.term_count() == 2);
  CHECK(comm12.coeff({1, 2}) == 1);
  CHECK(comm12.coeff({2, 1}) == -1);
  CHECK(comm12 == lie_bracket(FreePoly::generator(1), FreePoly::generator(2)));

  CHECK(P("jord(x1,x2)") == P("x1*x2 + x2*x1"));

  FreePoly cube = P("x1*x1*x1");
  CHECK(cube.term_count() == 1);
  CHECK(cube.coeff({1, 1, 1}) == 1);

  // Cancellation to canonical zero.
  CHECK(P("x1 - x1").is_zero());
  CHECK(P("1/2*x1 + 1/2*x1 - x1").is_zero());
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(P("x1 +* x2"),
                       doctest::Contains("position"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(P("y1"), doctest::Contains("unknown generator"),
                       std::invalid_argument);
  CHECK_THROWS_AS(P("jord(x1)"), std::invalid_argument);
  CHECK_THROWS_AS(P("x1)"), std::invalid_argument);
  CHECK_THROWS_AS(P("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(P("x0"), std::invalid_argument);
  CHECK_THROWS_AS(P(""), std::invalid_argument);
}

TEST_CASE("free_mul on the worked examples") {
  CHECK(P("(x1 + x2)*x3") == P("x1*x3 + x2*x3"));

  // [x1,x2]^2 expanded by hand:
  FreePoly sq = free_mul(P("comm(x1,x2)"), P("comm(x1,x2)"));
  CHECK(sq ==
        P("x1*x2*x1*x2 - x1*x2*x2*x1 - x2*x1*x1*x2 + x2*x1*x2*x1"));

  // Unit law: 1 * f = f.
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    FreePoly f = random_poly(rng);
    CHECK(free_mul(FreePoly::one(), f) == f);
    CHECK(free_mul(f, FreePoly::one()) == f);
  }
}

TEST_CASE("jordan product") {
  CHECK(jordan_prod(P("x1"), P("x2")) == P("x1*x2 + x2*x1"));
  CHECK(jordan_prod(P("x1"), FreePoly::one()) == P("2*x1"));
  std::mt19937 rng(11);
  for (int i = 0; i < 20; ++i) {
    FreePoly f = random_poly(rng);
    CHECK(jordan_prod(f, f) == Rat(2) * free_mul(f, f));
  }
}

TEST_CASE("lie bracket: alternation, antisymmetry, hand expansion") {
  CHECK(lie_bracket(P("x1"), P("x1")).is_zero());
  CHECK((lie_bracket(P("x1"), P("x2")) + lie_bracket(P("x2"), P("x1")))
            .is_zero());
  // [x1,[x2,x3]] = x1x2x3 - x1x3x2 - x2x3x1 + x3x2x1 (hand expansion).
  CHECK(P("comm(x1,comm(x2,x3))") ==
        P("x1*x2*x3 - x1*x3*x2 - x2*x3*x1 + x3*x2*x1"));
}

TEST_CASE("substitute worked examples") {
  std::map<uint32_t, FreePoly> swap{{1, P("x2")}, {2, P("x1")}};
  CHECK(substitute(P("comm(x1,x2)"), swap) == -P("comm(x1,x2)"));

  std::map<uint32_t, FreePoly> a{{1, P("x1*x2")}, {2, P("x2")}};
  CHECK(substitute(P("jord(x1,x2)"), a) == P("x1*x2*x2 + x2*x1*x2"));

  std::map<uint32_t, FreePoly> id{{1, P("x1")}, {2, P("x2")}, {3, P("x3")}};
  FreePoly lhs = substitute(
      P("jord(jord(x1,x2),x3) - jord(jord(x1,x3),x2)"), id);
  CHECK(lhs == P("comm(x1,comm(x2,x3))"));

  CHECK_THROWS_WITH_AS(substitute(P("x1*x3"), a),
                       doctest::Contains("no image"),
                       std::invalid_argument);
}

TEST_CASE("substitution is an endomorphism (random)") {
  std::mt19937 rng(23);
  for (int i = 0; i < 30; ++i) {
    FreePoly f = random_poly(rng), g = random_poly(rng);
    std::map<uint32_t, FreePoly> images;
    for (uint32_t k = 1; k <= 3; ++k) images[k] = random_poly(rng, 2, 2, 3);
    CHECK(substitute(free_mul(f, g), images) ==
          free_mul(substitute(f, images), substitute(g, images)));
    CHECK(substitute(f + g, images) ==
          substitute(f, images) + substitute(g, images));
  }
}

TEST_CASE("free_mul associativity / distributivity (random)") {
  std::mt19937 rng(31);
  for (int i = 0; i < 30; ++i) {
    FreePoly f = random_poly(rng), g = random_poly(rng), h = random_poly(rng);
    CHECK(free_mul(free_mul(f, g), h) == free_mul(f, free_mul(g, h)));
    CHECK(free_mul(f, g + h) == free_mul(f, g) + free_mul(f, h));
  }
}

TEST_CASE("lie bracket Jacobi identity (random)") {
  std::mt19937 rng(37);
  for (int i = 0; i < 20; ++i) {
    FreePoly f = random_poly(rng), g = random_poly(rng), h = random_poly(rng);
    FreePoly jac = lie_bracket(f, lie_bracket(g, h)) +
                   lie_bracket(g, lie_bracket(h, f)) +
                   lie_bracket(h, lie_bracket(f, g));
    CHECK(jac.is_zero());
  }
}

TEST_CASE("triple-product identity holds symbolically") {
  // (x o y) o z - (x o z) o y = [x,[y,z]] as formal generators.
  FreePoly d = P("jord(jord(x1,x2),x3) - jord(jord(x1,x3),x2) "
                 "- comm(x1,comm(x2,x3))");
  CHECK(is_identically_zero(d));
  CHECK(is_identically_zero(P("jord(x1,x2) - jord(x2,x1)")));
  // The commutator-square bracket is NOT zero in the free algebra.
  CHECK(!is_identically_zero(P("comm(comm(x1,x2)*comm(x1,x2),x3)")));
}

TEST_CASE("partial_linearize: square") {
  FreePoly sq = P("x1*x1");
  FreePoly lin = partial_linearize(sq, 1, {2, 3});
  CHECK(lin == P("x2*x3 + x3*x2"));
}

TEST_CASE("partial_linearize: cube of a bracket, S3 sum") {
  FreePoly y = P("comm(x1,x2)");
  FreePoly cube = free_mul(free_mul(y, y), y);
  FreePoly lin = partial_linearize(cube, 2, {4, 5, 6});

  // Independent oracle: sum over all six permutations of (4,5,6) of
  // [x1,v_s1][x1,v_s2][x1,v_s3], built with products rather than the
  // occurrence-assignment route the implementation takes.
  std::vector<uint32_t> v{4, 5, 6};
  std::sort(v.begin(), v.end());
  FreePoly expected;
  do {
    FreePoly t = FreePoly::one();
    for (uint32_t vi : v)
      t = free_mul(t, lie_bracket(P("x1"), FreePoly::generator(vi)));
    expected += t;
  } while (std::next_permutation(v.begin(), v.end()));
  CHECK(lin == expected);

  // Re-specializing all fresh generators back to x2 gives 3! * cube.
  std::map<uint32_t, FreePoly> back{
      {1, P("x1")}, {4, P("x2")}, {5, P("x2")}, {6, P("x2")}};
  CHECK(substitute(lin, back) == Rat(6) * cube);
}

TEST_CASE("partial_linearize preconditions") {
  CHECK_THROWS_AS(partial_linearize(P("x1 + x1*x1"), 1, {2}),
                  std::invalid_argument);  // not homogeneous in x1
  CHECK_THROWS_AS(partial_linearize(P("x1*x1"), 1, {2}),
                  std::invalid_argument);  // wrong fresh count
  CHECK_THROWS_AS(partial_linearize(P("x1*x1*x2"), 1, {2, 3}),
                  std::invalid_argument);  // fresh collides with occurring gen
  CHECK_THROWS_AS(partial_linearize(P("x1*x1"), 1, {2, 2}),
                  std::invalid_argument);  // repeated fresh
}

TEST_CASE("re-specialization property on random homogeneous inputs") {
  std::mt19937 rng(41);
  for (int i = 0; i < 20; ++i) {
    int d = 2 + (i % 2);
    FreePoly f = random_homogeneous(rng, 1, d);
    std::vector<uint32_t> fresh;
    for (int j = 0; j < d; ++j) fresh.push_back(90 + j);
    FreePoly lin = partial_linearize(f, 1, fresh);
    for (uint32_t fg : fresh) CHECK(degree_in(lin, fg) == 1);
    std::map<uint32_t, FreePoly> back;
    for (uint32_t g : generators_of(lin))
      back[g] = FreePoly::generator(g >= 90 ? 1 : g);
    Rat factorial = 1;
    for (int j = 2; j <= d; ++j) factorial *= j;
    CHECK(substitute(lin, back) == factorial * f);
  }
}

TEST_CASE("print/parse round trip and degree-lex order") {
  CHECK(to_string(P("x2 + x1*x1")) == "x2 + x1*x1");
  CHECK(to_string(P("x1*x2 - x2*x1")) == "x1*x2 - x2*x1");
  CHECK(to_string(P("-x1 + 2/4*x2")) == "-x1 + 1/2*x2");
  CHECK(to_string(FreePoly::zero()) == "0");
  CHECK(to_string(P("3 + x1*x2 - x3")) == "3 - x3 + x1*x2");

  std::mt19937 rng(43);
  for (int i = 0; i < 40; ++i) {
    FreePoly f = random_poly(rng, 5, 4, 4);
    CHECK(parse_poly(to_string(f)) == f);
  }
}

TEST_CASE("tideal generator family for the commutator-square bracket") {
  FreePoly hall = P("comm(comm(x1,x2)*comm(x1,x2),x3)");
  TIdealGenerator gen = make_tideal_generator("hall", hall);
  CHECK(gen.generator == hall);
  CHECK(!gen.multilinear.empty());
  for (size_t idx : gen.multilinear) {
    const FreePoly& m = gen.family[idx];
    for (uint32_t g : generators_of(m)) CHECK(degree_in(m, g) == 1);
  }
  // Hall is multihomogeneous (degrees 2,2,1), so one multilinear member of
  // degree 5 in 5 distinct variables.
  CHECK(gen.multilinear.size() == 1);
  const FreePoly& m = gen.family[gen.multilinear[0]];
  CHECK(m.degree() == 5);
  CHECK(generators_of(m).size() == 5);

  // An already multilinear generator is its own family.
  TIdealGenerator c = make_tideal_generator("comm", P("comm(x1,x2)"));
  CHECK(c.family.size() == 1);
  CHECK(c.multilinear.size() == 1);
  CHECK(c.family[0] == P("comm(x1,x2)"));
}
