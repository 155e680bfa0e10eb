#include <doctest.h>

#include "hofa/domain.hpp"
#include "hofa/forms.hpp"
#include "hofa/patterns.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace hofa;

namespace {

/// Indicator of the even residues on the cyclic group Z_N.
SampledFunction cyclic_evens(long N) {
  DomainSpec d{DomainKind::Cyclic, N};
  std::vector<cd> v(d.size());
  for (long n = 0; n < N; ++n) v[static_cast<std::size_t>(n)] = cd(n % 2 == 0 ? 1.0 : 0.0, 0.0);
  return make_sampled(d, std::move(v), 1.0);
}

/// Indicator of the even integers in the interval [1, N].
SampledFunction interval_evens(long N) {
  DomainSpec d{DomainKind::Interval, N};
  std::vector<cd> v(d.size());
  for (long n = 1; n <= N; ++n) v[static_cast<std::size_t>(n - 1)] = cd(n % 2 == 0 ? 1.0 : 0.0, 0.0);
  return make_sampled(d, std::move(v), 1.0);
}

/// Linear phase e(a n / N) on Z_N.
SampledFunction cyclic_phase(long N, long a) {
  DomainSpec d{DomainKind::Cyclic, N};
  std::vector<cd> v(d.size());
  for (long n = 0; n < N; ++n) {
    v[static_cast<std::size_t>(n)] = e2pi(static_cast<double>(a * n) / static_cast<double>(N));
  }
  return make_sampled(d, std::move(v), 1.0);
}

/// The graded test family behind the norm-versus-count tabulation: a cosine
/// bump blended against a quadratic phase with irrational frequency.
std::vector<SampledFunction> blend_family(long N) {
  const double alpha = 0.3819660112501051;
  const double pi = std::acos(-1.0);
  std::vector<SampledFunction> family;
  for (double w : {1.0, 0.8, 0.6, 0.45, 0.3}) {
    DomainSpec d{DomainKind::Cyclic, N};
    std::vector<cd> v(d.size());
    for (long n = 0; n < N; ++n) {
      cd structured(0.5 + 0.5 * std::cos(2.0 * pi * 3.0 * static_cast<double>(n) / static_cast<double>(N)),
                    0.0);
      cd uniform = e2pi(alpha * static_cast<double>(n) * static_cast<double>(n));
      v[static_cast<std::size_t>(n)] = w * structured + (1.0 - w) * uniform;
    }
    family.push_back(make_sampled(d, std::move(v), 1.0));
  }
  return family;
}

}  // namespace

TEST_SUITE("patterns") {

TEST_CASE("progression average of the all-ones function is 1") {
  DomainSpec d{DomainKind::Cyclic, 16};
  std::vector<SampledFunction> fs(3, ones(d));
  cd v = multilinear_average(fs, ap_system(3), cyclic_pattern_domain(16));
  CHECK(std::abs(v - cd(1.0, 0.0)) <= 1e-14);
}

TEST_CASE("even residues carry 3-term progression density 1/4 on Z_16") {
  std::vector<SampledFunction> fs(3, cyclic_evens(16));
  cd v = multilinear_average(fs, ap_system(3), cyclic_pattern_domain(16));
  CHECK(std::abs(v - cd(0.25, 0.0)) <= 1e-14);
}

TEST_CASE("telescoping phases average to exactly 1") {
  // e(n) e(-2(n+d)) e(n+2d) is identically e(0), so the average is 1.
  long N = 32;
  std::vector<SampledFunction> fs{cyclic_phase(N, 1), cyclic_phase(N, -2), cyclic_phase(N, 1)};
  cd v = multilinear_average(fs, ap_system(3), cyclic_pattern_domain(N));
  CHECK(std::abs(v - cd(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("average validation rejects malformed requests") {
  DomainSpec d8{DomainKind::Cyclic, 8};
  std::vector<SampledFunction> two(2, ones(d8));
  CHECK_THROWS_AS(multilinear_average(two, ap_system(3), cyclic_pattern_domain(8)), std::invalid_argument);

  std::vector<SampledFunction> eight(8, ones(d8));
  CHECK_THROWS_AS(multilinear_average(eight, parallelepiped_system(3), cyclic_pattern_domain(8)),
                  std::invalid_argument);

  std::vector<SampledFunction> wrongN(3, ones(d8));
  CHECK_THROWS_AS(multilinear_average(wrongN, ap_system(3), cyclic_pattern_domain(16)),
                  std::invalid_argument);

  PatternDomain withRanges = cyclic_pattern_domain(8);
  withRanges.ranges = {{1, 4}, {1, 4}};
  std::vector<SampledFunction> three(3, ones(d8));
  CHECK_THROWS_AS(multilinear_average(three, ap_system(3), withRanges), std::invalid_argument);

  DomainSpec i8{DomainKind::Interval, 8};
  std::vector<SampledFunction> ithree(3, ones(i8));
  CHECK_THROWS_AS(multilinear_average(ithree, ap_system(3), interval_pattern_domain(8, {{1, 8}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(multilinear_average(ithree, ap_system(3), interval_pattern_domain(8, {{5, 4}, {1, 8}})),
                  std::invalid_argument);

  DomainSpec big{DomainKind::Cyclic, 2000};
  std::vector<SampledFunction> four(4, ones(big));
  CHECK_THROWS_AS(multilinear_average(four, parallelepiped_system(2), cyclic_pattern_domain(2000)),
                  std::invalid_argument);
}

TEST_CASE("per-difference profile of the full interval") {
  auto counts = ap_profile_counts(ones(DomainSpec{DomainKind::Interval, 20}), 3);
  CHECK(counts.size() == 41);
  CHECK(counts.at(0) == 20);
  CHECK(counts.at(3) == 14);
  CHECK(counts.at(-3) == 14);
  CHECK(counts.at(15) == 0);
  auto profile = ap_profile(ones(DomainSpec{DomainKind::Interval, 20}), 3);
  CHECK(profile.at(0) == doctest::Approx(1.0));
  CHECK(profile.at(3) == doctest::Approx(0.7));
}

TEST_CASE("per-difference profile of the even numbers in [1, 100]") {
  auto profile = ap_profile(interval_evens(100), 3);
  CHECK(profile.at(2) == doctest::Approx(0.48));
  CHECK(profile.at(-4) == doctest::Approx(0.46));
  CHECK(profile.at(1) == doctest::Approx(0.0));
}

TEST_CASE("profile mean equals the boxed progression average") {
  long N = 100;
  SampledFunction A = interval_evens(N);
  auto profile = ap_profile(A, 3);
  double mean = 0.0;
  for (const auto& [d, v] : profile) mean += v;
  mean /= static_cast<double>(profile.size());
  std::vector<SampledFunction> fs(3, A);
  cd lambda = multilinear_average(fs, ap_system(3), ap_pattern_domain(N));
  CHECK(lambda.real() == doctest::Approx(mean).epsilon(1e-12));
  CHECK(std::abs(lambda.imag()) <= 1e-14);
}

TEST_CASE("profile validation") {
  DomainSpec i{DomainKind::Interval, 10};
  std::vector<cd> half(10, cd(0.5, 0.0));
  CHECK_THROWS_AS(ap_profile_counts(make_sampled(i, half, 1.0), 3), std::invalid_argument);
  CHECK_THROWS_AS(ap_profile_counts(ones(DomainSpec{DomainKind::Cyclic, 10}), 3), std::invalid_argument);
  CHECK_THROWS_AS(ap_profile_counts(ones(i), 0), std::invalid_argument);
  CHECK_THROWS_AS(ap_profile_counts(ones(i), 6), std::invalid_argument);
}

TEST_CASE("pattern report records the average and the norm bound") {
  std::vector<SampledFunction> fs(3, cyclic_evens(16));
  PatternReport rep = make_pattern_report(fs, ap_system(3), cyclic_pattern_domain(16));
  CHECK(std::abs(rep.value - cd(0.25, 0.0)) <= 1e-14);
  CHECK(rep.gowersK == 2);
  // The even indicator has Fourier mass 1/2 at frequencies 0 and N/2, so the
  // fourth power of its U^2 norm is 2 (1/2)^4 = 1/8.
  CHECK(rep.minGowers == doctest::Approx(std::pow(1.0 / 8.0, 0.25)).epsilon(1e-9));
  CHECK(rep.perDifference.empty());
}

TEST_CASE("pattern report leaves the bound empty for dependent systems") {
  LinearFormSystem psi = parse_forms("n; 2n; n+d");
  std::vector<SampledFunction> fs(3, cyclic_evens(16));
  PatternReport rep = make_pattern_report(fs, psi, cyclic_pattern_domain(16));
  CHECK(rep.gowersK == 0);
  CHECK(rep.minGowers == 0.0);
  CHECK(rep.metadata.find("dependent") != std::string::npos);
}

TEST_CASE("pattern report profile path needs a progression on identical inputs") {
  long N = 40;
  SampledFunction A = interval_evens(N);
  std::vector<SampledFunction> fs(3, A);
  PatternReport rep = make_pattern_report(fs, ap_system(3), ap_pattern_domain(N), true);
  CHECK(rep.perDifference.size() == 81);
  CHECK(rep.perDifference.at(2) == doctest::Approx(18.0 / 40.0));

  std::vector<SampledFunction> mixed{A, A, ones(DomainSpec{DomainKind::Interval, N})};
  CHECK_THROWS_AS(make_pattern_report(mixed, ap_system(3), ap_pattern_domain(N), true),
                  std::invalid_argument);
  LinearFormSystem notAp = parse_forms("n; n+d; n+3d");
  CHECK_THROWS_AS(make_pattern_report(fs, notAp, ap_pattern_domain(N), true), std::invalid_argument);
}

TEST_CASE("von Neumann comparison on the constant function is tight") {
  DomainSpec d{DomainKind::Cyclic, 32};
  std::vector<SampledFunction> fs(3, ones(d));
  GvnReport rep = gvn_check(fs, ap_system(3), cyclic_pattern_domain(32));
  CHECK(rep.apPath);
  CHECK(rep.pass);
  CHECK(rep.s == 1);
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("von Neumann comparison holds for random sign patterns") {
  long N = 64;
  std::mt19937_64 rng(0x67171ULL);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<SampledFunction> fs;
    for (int i = 0; i < 3; ++i) {
      DomainSpec d{DomainKind::Cyclic, N};
      std::vector<cd> v(d.size());
      for (auto& x : v) x = cd((rng() & 1) ? 1.0 : -1.0, 0.0);
      fs.push_back(make_sampled(d, std::move(v), 1.0));
    }
    GvnReport rep = gvn_check(fs, ap_system(3), cyclic_pattern_domain(N));
    CHECK(rep.apPath);
    CHECK(rep.pass);
    CHECK(rep.lhs <= rep.rhs + 1e-6);
  }
}

TEST_CASE("von Neumann comparison rejects unbounded inputs") {
  DomainSpec d{DomainKind::Cyclic, 16};
  std::vector<cd> big(16, cd(2.0, 0.0));
  std::vector<SampledFunction> fs(3, make_sampled(d, big, 2.0));
  CHECK_THROWS_AS(gvn_check(fs, ap_system(3), cyclic_pattern_domain(16)), std::invalid_argument);
}

TEST_CASE("flat-weight twisted average matches the wrapped progression count") {
  long N = 64;
  std::vector<SampledFunction> fs(3, cyclic_evens(N));
  TwistedGvnReport rep = twisted_gvn_check(fs, {0, 1, 2}, [](long) { return cd(1.0, 0.0); }, true);
  // On the cyclic convention d runs over Z_N, so the flat-weight average is
  // exactly the progression density Lambda = 1/4 of the even indicator.
  CHECK(rep.k == 3);
  CHECK(rep.lhs == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(std::pow(1.0 / 8.0, 0.25)).epsilon(1e-9));
  CHECK_FALSE(rep.modulationChecked);
}

TEST_CASE("twisted average of telescoping phases has ratio 1") {
  long N = 48;
  std::vector<SampledFunction> fs{cyclic_phase(N, 1), cyclic_phase(N, -2), cyclic_phase(N, 1)};
  TwistedGvnReport rep = twisted_gvn_check(fs, {0, 1, 2}, [](long) { return cd(1.0, 0.0); }, true);
  CHECK(rep.lhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.rhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("character weights absorb into modulations without moving the norm") {
  long N = 40;
  std::vector<SampledFunction> fs(3, interval_evens(N));
  double theta = 0.3;
  TwistedGvnReport rep = twisted_gvn_check(
      fs, {0, 1, 2}, [theta](long d) { return e2pi(theta * static_cast<double>(d)); }, false, theta);
  CHECK(rep.modulationChecked);
  CHECK(rep.modulationError <= 1e-9);
}

TEST_CASE("twisted average validation") {
  long N = 16;
  std::vector<SampledFunction> fs(3, cyclic_evens(N));
  auto flat = [](long) { return cd(1.0, 0.0); };
  CHECK_THROWS_AS(twisted_gvn_check(fs, {0, 1}, flat, true), std::invalid_argument);
  CHECK_THROWS_AS(twisted_gvn_check(fs, {0, 1, 1}, flat, true), std::invalid_argument);
  std::vector<SampledFunction> five(5, cyclic_evens(N));
  CHECK_THROWS_AS(twisted_gvn_check(five, {0, 1, 2, 3, 4}, flat, true), std::invalid_argument);
  std::vector<SampledFunction> wrong(3, interval_evens(N));
  CHECK_THROWS_AS(twisted_gvn_check(wrong, {0, 1, 2}, flat, true), std::invalid_argument);
}

TEST_CASE("zero-frequency window weight is the normalized plateau") {
  BhkWeight w = bhk_weight_k3({0.0}, 0.1, 200);
  CHECK(w.support == 41);
  CHECK(w.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.sup == doctest::Approx(401.0 / 41.0).epsilon(1e-12));
  CHECK(w.at(0) == doctest::Approx(401.0 / 41.0).epsilon(1e-12));
  CHECK(w.at(21) == 0.0);
  CHECK(w.at(-500) == 0.0);
}

TEST_CASE("window weights that only touch d = 0 are rejected") {
  CHECK_THROWS_AS(bhk_weight_k3({0.6180339887498949}, 0.01, 50), std::runtime_error);
  CHECK_THROWS_AS(bhk_weight_k3({}, 0.1, 50), std::invalid_argument);
  CHECK_THROWS_AS(bhk_weight_k3({0.3}, 0.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(bhk_weight_k3({0.3}, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(torus_tent(0.0), std::invalid_argument);
  CHECK_THROWS_AS(torus_tent(0.7), std::invalid_argument);
}

TEST_CASE("weighted 3-term count beats the density threshold on a Bohr set") {
  BhkReport rep = bhk_verify_synthetic(3, "bohr", 0.05, 5000);
  CHECK(rep.k == 3);
  CHECK(rep.alpha == doctest::Approx(0.2998).epsilon(1e-3));
  CHECK(rep.weightedCount == doctest::Approx(0.24789).epsilon(1e-3));
  CHECK(rep.weightedCount >= rep.threshold);
  CHECK(rep.threshold == doctest::Approx(std::pow(rep.alpha, 3) - 0.05).epsilon(1e-12));
  CHECK(rep.goodFraction == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep.weightMean == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(rep.positivityChecked);
}

TEST_CASE("weighted 4-term count verifies with vertical positivity") {
  BhkReport rep = bhk_verify_synthetic(4, "heisenberg", 0.1, 3000);
  CHECK(rep.k == 4);
  CHECK(rep.weightedCount == doctest::Approx(0.0767453).epsilon(2e-3));
  CHECK(rep.weightedCount >= std::pow(rep.alpha, 4) - 0.1);
  CHECK(rep.positivityChecked);
  CHECK(rep.positivityOk);
  CHECK(rep.positivityMargin >= -1e-9);
}

TEST_CASE("weighted counts for k at least 5 are refused by design") {
  try {
    bhk_verify_synthetic(5, "bohr", 0.05, 1000);
    FAIL("expected a rejection for k = 5");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("Ruzsa") != std::string::npos);
  }
  CHECK_THROWS_AS(bhk_verify_synthetic(2, "bohr", 0.05, 1000), std::invalid_argument);
  CHECK_THROWS_AS(bhk_verify_synthetic(3, "random", 0.05, 1000), std::invalid_argument);
  CHECK_THROWS_AS(bhk_verify_synthetic(4, "bohr", 0.05, 1000), std::invalid_argument);
  CHECK_THROWS_AS(bhk_verify_synthetic(3, "bohr", 0.6, 1000), std::invalid_argument);
  CHECK_THROWS_AS(bhk_verify_synthetic(3, "bohr", 0.05, 5), std::invalid_argument);
}

TEST_CASE("norm-versus-count tabulation ranks a graded family") {
  GwReport rep = gw_statement_check(ap_system(3), 1, blend_family(512));
  CHECK(rep.hypothesis);
  CHECK(rep.skipReason.empty());
  REQUIRE(rep.norms.size() == 5);
  REQUIRE(rep.lambdas.size() == 5);
  CHECK(rep.lambdas[0] == doctest::Approx(0.125).epsilon(1e-9));
  CHECK(rep.norms[0] == doctest::Approx(0.514942).epsilon(1e-4));
  CHECK(rep.norms[4] == doctest::Approx(0.194717).epsilon(1e-4));
  CHECK(rep.lambdas[4] == doctest::Approx(0.003015).epsilon(1e-3));
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(rep.norms[i] < rep.norms[i - 1]);
    CHECK(rep.lambdas[i] < rep.lambdas[i - 1]);
  }
  CHECK(rep.spearman == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.maxRatio == doctest::Approx(0.2427).epsilon(1e-3));
}

TEST_CASE("norm-versus-count tabulation skips when the hypothesis fails") {
  GwReport rep = gw_statement_check(ap_system(4), 1, blend_family(128));
  CHECK_FALSE(rep.hypothesis);
  CHECK_FALSE(rep.skipReason.empty());
}

TEST_CASE("norm-versus-count baseline on the constant function") {
  DomainSpec d{DomainKind::Cyclic, 64};
  std::vector<SampledFunction> family{ones(d)};
  GwReport rep = gw_statement_check(ap_system(3), 1, family);
  CHECK(rep.hypothesis);
  REQUIRE(rep.norms.size() == 1);
  CHECK(rep.norms[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.lambdas[0] == doctest::Approx(1.0).epsilon(1e-9));

  std::vector<SampledFunction> interval{ones(DomainSpec{DomainKind::Interval, 64})};
  CHECK_THROWS_AS(gw_statement_check(ap_system(3), 1, interval), std::invalid_argument);
}

}  // TEST_SUITE
