#include <doctest.h>

#include "hofa/io.hpp"
#include "hofa/nilgroup.hpp"
#include "hofa/rational.hpp"

#include <nlohmann/json.hpp>

#include <random>

using namespace hofa;

namespace {

Coords<Rat> random_rat_point(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_int_distribution<long> num(-8, 8);
  std::uniform_int_distribution<long> den(1, 5);
  Coords<Rat> g(dim, Rat(0));
  for (Rat& x : g) x = Rat(num(rng), den(rng));
  return g;
}

/// Random Taylor data respecting the filtration: coefficient i is supported
/// on the coordinates of G_i.
std::vector<Coords<Rat>> random_taylor(std::mt19937_64& rng, const FilteredGroup& G) {
  std::uniform_int_distribution<long> num(-8, 8);
  std::uniform_int_distribution<long> den(1, 5);
  std::vector<Coords<Rat>> taylor;
  for (int i = 0; i <= G.step; ++i) {
    Coords<Rat> g(static_cast<std::size_t>(G.dim), Rat(0));
    for (int j = G.blockStart(i); j < G.dim; ++j) {
      g[static_cast<std::size_t>(j)] = Rat(num(rng), den(rng));
    }
    taylor.push_back(std::move(g));
  }
  return taylor;
}

}  // namespace

TEST_SUITE("nilgroup") {

TEST_CASE("built-in groups have the expected shape") {
  FilteredGroup c = circle_group();
  CHECK(c.dim == 1);
  CHECK(c.abelian());
  FilteredGroup t = torus_group(4);
  CHECK(t.dim == 4);
  CHECK(t.abelian());
  FilteredGroup h = heisenberg_group();
  CHECK(h.dim == 3);
  CHECK(h.step == 2);
  CHECK(h.filtrationDims == std::vector<int>{3, 3, 1});
  CHECK_FALSE(h.abelian());
  CHECK(h.weight(0) == 1);
  CHECK(h.weight(2) == 2);
  CHECK(h.blockStart(2) == 2);
}

TEST_CASE("group law is associative with exact coordinates") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e111ULL);
  for (int i = 0; i < 20; ++i) {
    Coords<Rat> a = random_rat_point(rng, 3), b = random_rat_point(rng, 3), c = random_rat_point(rng, 3);
    CHECK(g_mul(G, g_mul(G, a, b), c) == g_mul(G, a, g_mul(G, b, c)));
  }
}

TEST_CASE("inverses cancel exactly") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e112ULL);
  Coords<Rat> id(3, Rat(0));
  for (int i = 0; i < 20; ++i) {
    Coords<Rat> a = random_rat_point(rng, 3);
    CHECK(g_mul(G, a, g_inv(G, a)) == id);
    CHECK(g_mul(G, g_inv(G, a), a) == id);
  }
}

TEST_CASE("integer powers agree with repeated multiplication") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e113ULL);
  Coords<Rat> a = random_rat_point(rng, 3);
  Coords<Rat> acc(3, Rat(0));
  for (long k = 1; k <= 6; ++k) {
    acc = g_mul(G, acc, a);
    CHECK(g_pow(G, a, Rat(k)) == acc);
  }
  CHECK(g_pow(G, a, Rat(-2)) == g_inv(G, g_mul(G, a, a)));
}

TEST_CASE("log and exp invert each other") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e114ULL);
  for (int i = 0; i < 10; ++i) {
    Coords<Rat> a = random_rat_point(rng, 3);
    CHECK(g_exp(G, g_log(G, a)) == a);
    CHECK(g_log(G, g_exp(G, a)) == a);
  }
}

TEST_CASE("reduction lands in the fundamental domain with an integral shift") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e115ULL);
  for (int i = 0; i < 20; ++i) {
    Coords<Rat> a = random_rat_point(rng, 3);
    auto [rep, gamma] = g_reduce(G, a);
    for (const Rat& x : rep) {
      CHECK(x >= 0);
      CHECK(x < 1);
    }
    for (const Rat& x : gamma) CHECK(rat_den(x) == 1);
    CHECK(g_mul(G, a, gamma) == rep);
  }
}

TEST_CASE("quotient distance never exceeds the group distance") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e116ULL);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    Coords<double> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    CHECK(g_dist_quotient(G, a, b) <= g_dist(G, a, b) + 1e-12);
    CHECK(g_dist(G, a, b) == doctest::Approx(g_dist(G, b, a)));
  }
}

TEST_CASE("ball samples stay in the ball") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0xba11aULL);
  for (int i = 0; i < 200; ++i) {
    Coords<double> g = ball_sample(G, 0.25, rng);
    CHECK(ball_contains(G, g, 0.25));
  }
}

TEST_CASE("polynomial sequences follow their Taylor data") {
  FilteredGroup G = heisenberg_group();
  std::vector<Coords<Rat>> taylor{Coords<Rat>(3, Rat(0)), {Rat(1, 2), Rat(1, 3), Rat(0)},
                                  {Rat(0), Rat(0), Rat(1, 5)}};
  PolySeq<Rat> seq = make_poly_seq(G, taylor);
  CHECK(taylor_eval(seq, 0) == taylor[0]);
  CHECK(taylor_eval(seq, 1) == g_mul(G, taylor[0], taylor[1]));
  // g(2) = g0 g1^2 g2 with binomial exponents (1, n, n(n-1)/2).
  Coords<Rat> expect = g_mul(G, g_pow(G, taylor[1], Rat(2)), taylor[2]);
  CHECK(taylor_eval(seq, 2) == expect);
}

TEST_CASE("products of polynomial sequences match pointwise products") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e117ULL);
  for (int i = 0; i < 5; ++i) {
    std::vector<Coords<Rat>> ta = random_taylor(rng, G);
    std::vector<Coords<Rat>> tb = random_taylor(rng, G);
    PolySeq<Rat> a = make_poly_seq(G, ta), b = make_poly_seq(G, tb);
    PolySeq<Rat> ab = poly_product(a, b);
    for (long n = -3; n <= 3; ++n) {
      CHECK(taylor_eval(ab, n) == g_mul(G, taylor_eval(a, n), taylor_eval(b, n)));
    }
  }
}

TEST_CASE("discrete derivatives lower the degree") {
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0x9e118ULL);
  std::vector<Coords<Rat>> taylor = random_taylor(rng, G);
  PolySeq<Rat> seq = make_poly_seq(G, taylor);
  PolySeq<Rat> d1 = discrete_derivative(seq, 1);
  PolySeq<Rat> d3 = discrete_derivative(discrete_derivative(d1, 1), 1);
  // Degree 2 sequence: the third derivative is the identity sequence.
  for (long n = -2; n <= 2; ++n) {
    CHECK(taylor_eval(d3, n) == Coords<Rat>(3, Rat(0)));
  }
}

TEST_CASE("classification separates smooth, rational, and generic data") {
  FilteredGroup G = heisenberg_group();
  std::vector<Coords<Rat>> rational{Coords<Rat>(3, Rat(0)), {Rat(1, 2), Rat(1, 3), Rat(0)}};
  PolySeq<Rat> seqr = make_poly_seq(G, rational);
  // The smallest power of (1/2, 1/3, 0) landing in the lattice is 12: the
  // horizontal part needs lcm(2, 3) and the commutator-driven central
  // coordinate C(q,2)/6 rules out q = 6.
  Classification cr = classify_sequence(seqr, 16.0, 100);
  CHECK(cr.rational);
  REQUIRE(cr.period.has_value());
  // Level-1 coordinates repeat every lcm(2,3) = 6; the central coordinate
  // n(n-1)/12 needs another factor of 2.
  CHECK(*cr.period == 12);

  std::vector<Coords<Rat>> tiny{Coords<Rat>(3, Rat(0)), {Rat(1, 1000), Rat(0), Rat(0)}};
  PolySeq<Rat> seqs = make_poly_seq(G, tiny);
  CHECK(classify_sequence(seqs, 2.0, 100).smooth);
}

TEST_CASE("horizontal characters evaluate exactly on integral points") {
  FilteredGroup G = heisenberg_group();
  auto chars = horizontal_characters(G, 1, 3);
  CHECK_FALSE(chars.empty());
  for (const HorizontalCharacter& chi : chars) {
    CHECK(chi.level == 1);
    CHECK(chi.complexity() >= 1);
    CHECK(chi.complexity() <= 3);
    Coords<Rat> gamma{Rat(2), Rat(-1), Rat(3)};
    Rat v = character_eval_exact(G, chi, gamma);
    CHECK(rat_den(v) == 1);  // characters kill the integer lattice mod 1
  }
}

TEST_CASE("irrationality score distinguishes rational from generic frequencies") {
  FilteredGroup G = circle_group();
  std::vector<Coords<double>> golden{{0.0}, {0.6180339887498949}};
  PolySeq<double> irr = make_poly_seq(G, golden);
  std::vector<Coords<double>> half{{0.0}, {0.5}};
  PolySeq<double> rat = make_poly_seq(G, half);
  CHECK(irrationality_score(irr, 1000, 8) > irrationality_score(rat, 1000, 8));
}

TEST_CASE("group json round trip") {
  FilteredGroup G = heisenberg_group();
  FilteredGroup H = group_from_json(group_to_json(G));
  CHECK(H.dim == G.dim);
  CHECK(H.step == G.step);
  CHECK(H.filtrationDims == G.filtrationDims);
  CHECK(H.structureConstants == G.structureConstants);
}

TEST_CASE("group specs name the built-ins") {
  CHECK(group_from_spec("circle").dim == 1);
  CHECK(group_from_spec("torus(3)").dim == 3);
  CHECK(group_from_spec("heisenberg").step == 2);
  CHECK_THROWS(group_from_spec("octonions"));
}

TEST_CASE("sequence json round trip and validation") {
  FilteredGroup G = heisenberg_group();
  std::vector<Coords<double>> taylor{{0.0, 0.0, 0.0}, {0.25, 0.5, 0.125}};
  PolySeq<double> seq = make_poly_seq(G, taylor);
  PolySeq<double> back = poly_seq_from_json(poly_seq_to_json(seq));
  CHECK(back.group.dim == 3);
  // Taylor data is padded with identity coefficients up to degree step.
  REQUIRE(back.taylor.size() == 3);
  CHECK(back.taylor[1] == taylor[1]);
  CHECK(back.taylor[2] == Coords<double>(3, 0.0));
  nlohmann::json bad{{"group", "heisenberg"}, {"taylor", {{0.0, 0.0}}}};
  CHECK_THROWS_AS(poly_seq_from_json(bad), IOError);
}

TEST_CASE("binomials are exact") {
  CHECK(binom_big(6, 2) == BigInt(15));
  CHECK(binom_big(1, 3) == BigInt(0));
  CHECK(binom_big(-2, 2) == BigInt(3));  // generalized: (-2)(-3)/2
  CHECK(binom_big(40, 20) == BigInt("137846528820"));
}

}  // TEST_SUITE
