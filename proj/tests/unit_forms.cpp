#include <doctest.h>

#include "hofa/forms.hpp"
#include "hofa/rational.hpp"

#include <random>

using namespace hofa;

TEST_SUITE("forms") {

TEST_CASE("mini-language parse of the 3-term progression") {
  LinearFormSystem psi = parse_forms("n; n+d; n+2*d");
  CHECK(psi.D == 2);
  CHECK(psi.t == 3);
  CHECK(psi.rows == std::vector<std::vector<long>>{{1, 0}, {1, 1}, {1, 2}});
  CHECK(psi.names.size() == 3);
  LinearFormSystem loose = parse_forms("n; n+d; n+2d");
  CHECK(loose.rows == psi.rows);
}

TEST_CASE("variables map to coordinates in order of first appearance") {
  LinearFormSystem psi = parse_forms("x + y; 2x - 3z; y");
  CHECK(psi.D == 3);
  CHECK(psi.rows == std::vector<std::vector<long>>{{1, 1, 0}, {2, 0, -3}, {0, 1, 0}});
}

TEST_CASE("parser rejects malformed systems") {
  CHECK_THROWS_AS(parse_forms("n; n+1"), std::invalid_argument);  // constant term
  CHECK_THROWS_AS(parse_forms("n;; d"), std::invalid_argument);   // empty form
  CHECK_THROWS_AS(parse_forms("0; 0"), std::invalid_argument);    // all zero
}

TEST_CASE("progression and parallelepiped generators") {
  LinearFormSystem ap = ap_system(4);
  CHECK(ap.t == 4);
  CHECK(ap.rows[3] == std::vector<long>{1, 3});
  LinearFormSystem hp = parallelepiped_system(2);
  CHECK(hp.D == 3);
  CHECK(hp.t == 4);
  CHECK(hp.rows == std::vector<std::vector<long>>{{1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}});
}

TEST_CASE("eval_forms applies every row") {
  LinearFormSystem ap = ap_system(3);
  CHECK(eval_forms(ap, {5, 2}) == std::vector<long>{5, 7, 9});
  CHECK_THROWS_AS(eval_forms(ap, {5}), std::invalid_argument);
}

TEST_CASE("pairwise independence detects proportional forms") {
  CHECK(pairwise_independent(ap_system(3)));
  CHECK_FALSE(pairwise_independent(parse_forms("n; 2n; n+d")));
}

TEST_CASE("complexity of the standard systems") {
  CHECK(cs_complexity(ap_system(3)) == 1);
  CHECK(cs_complexity(ap_system(4)) == 2);
  CHECK(cs_complexity(ap_system(5)) == 3);
  CHECK(cs_complexity(parallelepiped_system(2)) == 1);
  CHECK_THROWS_AS(cs_complexity(parse_forms("n; 2n")), std::invalid_argument);
}

TEST_CASE("4-term progression flag: dimensions, degrees, basis") {
  PowerFlag flag = power_flag(ap_system(4), 3);
  CHECK(flag.dims == std::vector<int>{2, 3, 4});
  CHECK(flag.degrees == std::vector<int>{1, 1, 2, 3});
  REQUIRE(flag.basis.rows.size() == 4);
  auto row = [&](std::size_t j) {
    std::vector<long> out;
    for (const BigInt& v : flag.basis.rows[j]) out.push_back(v.convert_to<long>());
    return out;
  };
  CHECK(row(0) == std::vector<long>{0, 1, 2, 3});
  CHECK(row(1) == std::vector<long>{3, 2, 1, 0});
  CHECK(row(2) == std::vector<long>{3, 1, 0, 0});
  CHECK(row(3) == std::vector<long>{1, 0, 0, 0});
}

TEST_CASE("flag membership separates the levels") {
  PowerFlag flag = power_flag(ap_system(4), 3);
  // Psi(1, 0) = (1,1,1,1) lies in the linear level.
  RatVec constant{Rat(1), Rat(1), Rat(1), Rat(1)};
  CHECK(flag_contains(flag, constant, 1));
  // Psi(0, 1)^2 = (0,1,4,9) enters at degree 2 and is not linear.
  RatVec squares{Rat(0), Rat(1), Rat(4), Rat(9)};
  CHECK_FALSE(flag_contains(flag, squares, 1));
  CHECK(flag_contains(flag, squares, 2));
  // Psi(0, 1)^3 = (0,1,8,27) needs the full cubic level.
  RatVec cubes{Rat(0), Rat(1), Rat(8), Rat(27)};
  CHECK_FALSE(flag_contains(flag, cubes, 2));
  CHECK(flag_contains(flag, cubes, 3));
}

TEST_CASE("annihilators of the 4-term progression flag") {
  PowerFlag flag = power_flag(ap_system(4), 3);
  auto lvl1 = flag_annihilator(flag, 1);
  REQUIRE(lvl1.size() == 2);
  auto lvl2 = flag_annihilator(flag, 2);
  REQUIRE(lvl2.size() == 1);
  std::vector<long> alt;
  for (const BigInt& v : lvl2[0]) alt.push_back(v.convert_to<long>());
  bool plus = alt == std::vector<long>{1, -3, 3, -1};
  bool minus = alt == std::vector<long>{-1, 3, -3, 1};
  CHECK((plus || minus));
  CHECK(flag_annihilator(flag, 3).empty());
}

TEST_CASE("depolarisation closure on random samples") {
  LinearFormSystem ap = ap_system(3);
  std::mt19937_64 rng(0xf0a7ULL);
  std::uniform_int_distribution<long> arg(-9, 9);
  std::vector<std::vector<std::vector<long>>> samples;
  for (int i = 0; i < 10; ++i) {
    samples.push_back({{arg(rng), arg(rng)}, {arg(rng), arg(rng)}});
  }
  CHECK(depolarisation_check(ap, 2, samples));
}

TEST_CASE("top power independence gates the statement checks") {
  CHECK(top_power_independence(ap_system(3), 1));
  CHECK_FALSE(top_power_independence(ap_system(4), 1));
  CHECK(top_power_independence(ap_system(4), 2));
}

TEST_CASE("dimension recipe for orbit groups") {
  PowerFlag flag3 = power_flag(ap_system(3), 2);
  // Heisenberg filtration dims (3, 1); levels contribute 3*m1 + 1*(m2 - m1).
  long m1 = flag3.dims[0];
  long m2 = flag3.dims[1];
  CHECK(leibman_dim(flag3, {3, 1}) == 3 * m1 + (m2 - m1));
  PowerFlag flag4 = power_flag(ap_system(4), 2);
  CHECK(leibman_dim(flag4, {3, 1}) == 7);
  CHECK_THROWS_AS(leibman_dim(flag4, {3}), std::invalid_argument);
}

}  // TEST_SUITE
