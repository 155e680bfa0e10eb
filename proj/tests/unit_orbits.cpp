#include <doctest.h>

#include "hofa/forms.hpp"
#include "hofa/nilgroup.hpp"
#include "hofa/orbits.hpp"

#include <cmath>
#include <random>

using namespace hofa;

namespace {

PolySeq<double> golden_heisenberg_seq() {
  FilteredGroup G = heisenberg_group();
  std::vector<Coords<double>> taylor{{0.0, 0.0, 0.0}, {std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 0.0}};
  return make_poly_seq(G, taylor);
}

LipschitzFunction first_coordinate_character() {
  LipschitzFunction F;
  F.eval = [](const Coords<double>& x) { return e2pi(x[0]); };
  F.lipschitz = 8.0;
  return F;
}

}  // namespace

TEST_SUITE("orbits") {

TEST_CASE("orbit average of the constant function is 1") {
  LipschitzFunction one;
  one.eval = [](const Coords<double>&) { return cd(1.0, 0.0); };
  cd avg = orbit_average(one, golden_heisenberg_seq(), 500);
  CHECK(avg.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(avg.imag() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("irrational orbits average characters to nearly zero") {
  cd avg = orbit_average(first_coordinate_character(), golden_heisenberg_seq(), 4000);
  CHECK(std::abs(avg) < 0.01);
}

TEST_CASE("haar integral of a nonzero character vanishes within error bars") {
  auto [mean, stderr_] = haar_integral_mc(first_coordinate_character(), heisenberg_group(), 40000, 11);
  CHECK(std::abs(mean) < 5.0 * stderr_ + 1e-3);
  CHECK(stderr_ < 0.01);
}

TEST_CASE("haar sampling is translation invariant within error bars") {
  FilteredGroup G = heisenberg_group();
  LipschitzFunction F;
  F.eval = [](const Coords<double>& x) {
    return cd(std::cos(2.0 * std::acos(-1.0) * (x[0] + x[2])), 0.0);
  };
  F.lipschitz = 13.0;
  Coords<double> g{0.37, -0.21, 0.11};
  LipschitzFunction Fg;
  Fg.eval = [&G, g, &F](const Coords<double>& x) { return F.eval(g_mul(G, g, x)); };
  Fg.lipschitz = 13.0;
  auto [a, sa] = haar_integral_mc(F, G, 60000, 5);
  auto [b, sb] = haar_integral_mc(Fg, G, 60000, 6);
  CHECK(std::abs(a - b) <= 3.0 * (sa + sb) + 1e-3);
}

TEST_CASE("lipschitz spot check stays below an honest constant") {
  // The spot check reports the worst measured quotient |F(x) - F(y)| / d(x, y);
  // for e(x0) the true constant is 2 pi, within the declared 8.
  LipschitzFunction F = first_coordinate_character();
  double worst = lipschitz_spot_check(heisenberg_group(), F, 200, 3);
  CHECK(worst <= 2.0 * std::acos(-1.0) + 1e-9);
  CHECK(worst <= F.lipschitz + 1e-9);
  CHECK(worst > 1.0);
}

TEST_CASE("lattice cosets and convex bodies") {
  LatticeCoset coset{{0, 0}, {{2, 0}, {0, 3}}};
  CHECK(lattice_index(coset) == 6);
  CHECK(coset_contains(coset, {2, 3}));
  CHECK_FALSE(coset_contains(coset, {1, 0}));
  ConvexBody box{{0, 0}, {9, 9}, {}};
  CHECK(box.contains({5, 5}));
  CHECK_FALSE(box.contains({10, 0}));
  CHECK(box.volume() == doctest::Approx(81.0));
}

TEST_CASE("orbit tuples live in the factored group") {
  FilteredGroup G = heisenberg_group();
  LinearFormSystem ap3 = ap_system(3);
  LeibmanGroup LG = leibman_group(G, ap3);
  CHECK(LG.dimension == 7);
  std::mt19937_64 rng(0x0b17ULL);
  std::uniform_int_distribution<long> num(-5, 5);
  std::uniform_int_distribution<long> den(1, 4);
  std::uniform_int_distribution<long> arg(-10, 10);
  for (int i = 0; i < 20; ++i) {
    // Coefficient i of the Taylor data must live in G_i, so the degree-2
    // coefficient is restricted to the central coordinate.
    std::vector<Coords<Rat>> taylor(3, Coords<Rat>(3, Rat(0)));
    for (int lvl = 0; lvl < 3; ++lvl) {
      for (int j = G.blockStart(lvl); j < G.dim; ++j) {
        taylor[static_cast<std::size_t>(lvl)][static_cast<std::size_t>(j)] = Rat(num(rng), den(rng));
      }
    }
    PolySeq<Rat> seq = make_poly_seq(G, taylor);
    std::vector<long> nd{arg(rng), arg(rng)};
    auto tuple = leibman_orbit_point(seq, ap3, nd);
    CHECK(leibman_contains(LG, tuple));
    auto parts = leibman_factorize(LG, tuple);
    CHECK(parts.has_value());
  }
}

TEST_CASE("tuples off the orbit group are rejected") {
  FilteredGroup G = heisenberg_group();
  LeibmanGroup LG = leibman_group(G, ap_system(3));
  // A horizontal offset in one slot leaves the level-1 flag subspace
  // span{(1,1,1), (0,1,2)}, so the tuple falls outside the orbit group.
  std::vector<Coords<Rat>> tuple(3, Coords<Rat>(3, Rat(0)));
  tuple[0][0] = Rat(1, 7);
  CHECK_FALSE(leibman_contains(LG, tuple));
  // A central offset is absorbed: the degree-2 flag level is all of Q^3.
  std::vector<Coords<Rat>> central(3, Coords<Rat>(3, Rat(0)));
  central[0][2] = Rat(1, 7);
  CHECK(leibman_contains(LG, central));
}

TEST_CASE("counting residual is small for generic data and large for rational data") {
  LinearFormSystem ap3 = ap_system(3);
  // The character e(2 x0 + 3 x1) has Haar mean zero but is identically 1 on
  // the (1/2, 1/3) orbit, so it separates the two cases.
  auto factor = [](const Coords<double>& x) { return e2pi(2.0 * x[0] + 3.0 * x[1]); };
  std::vector<std::function<cd(const Coords<double>&)>> factors(3, factor);

  CountingReport good = counting_residual(factors, golden_heisenberg_seq(), ap3, 600, {}, {}, 60000, 7);
  CHECK(good.residual <= 0.1);
  CHECK(good.points > 0);
  CHECK(good.haarStderr < 0.05);

  FilteredGroup G = heisenberg_group();
  std::vector<Coords<double>> tayc{{0.0, 0.0, 0.0}, {0.5, 1.0 / 3.0, 0.0}};
  PolySeq<double> seqc = make_poly_seq(G, tayc);
  CountingReport bad = counting_residual(factors, seqc, ap3, 600, {}, {}, 60000, 7);
  CHECK(bad.residual >= 0.2);
}

TEST_CASE("torus orbit n/2 yields the doubling witness with zero smoothness norm") {
  FilteredGroup T = circle_group();
  std::vector<Coords<double>> taylor{{0.0}, {0.5}};
  PolySeq<double> seq = make_poly_seq(T, taylor);
  auto w = equidist_witness(seq, 2000, 0.1, 6);
  REQUIRE(w.has_value());
  CHECK(w->eta.m == std::vector<long>{2});
  CHECK(w->cinfNorm == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w->discrepancy > 0.1);
}

TEST_CASE("golden rotation passes the discrepancy test") {
  FilteredGroup T = circle_group();
  std::vector<Coords<double>> taylor{{0.0}, {0.6180339887498949}};
  PolySeq<double> seq = make_poly_seq(T, taylor);
  CHECK_FALSE(equidist_witness(seq, 10000, 0.1, 10).has_value());
}

TEST_CASE("the identically zero orbit is flagged with a norm-zero witness") {
  FilteredGroup T = circle_group();
  std::vector<Coords<double>> taylor{{0.0}, {0.0}};
  PolySeq<double> seq = make_poly_seq(T, taylor);
  auto w = equidist_witness(seq, 1000, 0.1, 6);
  REQUIRE(w.has_value());
  CHECK(w->eta.complexity() == 1);
  CHECK(w->cinfNorm == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("vertical transform isolates the central frequency") {
  FilteredGroup G = heisenberg_group();
  LipschitzFunction F;
  F.eval = [](const Coords<double>& x) { return e2pi(x[2]); };
  F.lipschitz = 8.0;
  LipschitzFunction hat1 = vertical_fourier(G, F, 1, 64);
  LipschitzFunction hat0 = vertical_fourier(G, F, 0, 64);
  LipschitzFunction hat2 = vertical_fourier(G, F, 2, 64);
  std::mt19937_64 rng(0xfee1ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    Coords<double> x{u(rng), u(rng), u(rng)};
    CHECK(std::abs(hat1.eval(x) - e2pi(x[2])) < 1e-9);
    CHECK(std::abs(hat0.eval(x)) < 1e-9);
    CHECK(std::abs(hat2.eval(x)) < 1e-9);
  }
}

TEST_CASE("functions constant along the fiber keep only the zero frequency") {
  FilteredGroup G = heisenberg_group();
  LipschitzFunction F;
  F.eval = [](const Coords<double>& x) { return cd(0.25 + 0.5 * std::cos(2.0 * std::acos(-1.0) * x[0]), 0.0); };
  F.lipschitz = 8.0;
  LipschitzFunction hat0 = vertical_fourier(G, F, 0, 64);
  LipschitzFunction hat1 = vertical_fourier(G, F, 1, 64);
  std::mt19937_64 rng(0xfee2ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    Coords<double> x{u(rng), u(rng), u(rng)};
    CHECK(std::abs(hat0.eval(x) - F.eval(x)) < 1e-9);
    CHECK(std::abs(hat1.eval(x)) < 1e-9);
  }
}

TEST_CASE("central elements sit in the vertical subgroup") {
  FilteredGroup G = heisenberg_group();
  Coords<double> c = central_element(G, 0.4);
  CHECK(c[0] == doctest::Approx(0.0));
  CHECK(c[1] == doctest::Approx(0.0));
  CHECK(c[2] == doctest::Approx(0.4));
}

}  // TEST_SUITE
