#include <doctest.h>

#include "hofa/decompose.hpp"
#include "hofa/domain.hpp"
#include "hofa/gowers.hpp"

#include <cmath>
#include <random>

using namespace hofa;

namespace {

/// Bounded real test signal: a clamped cosine plus small reproducible noise.
SampledFunction structured_signal(long N, double noise, std::uint64_t seed) {
  DomainSpec d{DomainKind::Cyclic, N};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> v(d.size());
  for (long n = 0; n < N; ++n) {
    double x = 0.5 + 0.5 * std::cos(2.0 * std::acos(-1.0) * 5.0 * n / static_cast<double>(N));
    x += noise * u(rng);
    v[static_cast<std::size_t>(n)] = cd(std::min(1.0, std::max(0.0, x)), 0.0);
  }
  return make_sampled(d, std::move(v), 1.0);
}

}  // namespace

TEST_SUITE("decompose") {

TEST_CASE("fourier oracle recovers a pure frequency") {
  DomainSpec d{DomainKind::Cyclic, 128};
  std::vector<cd> v(d.size());
  for (long n = 0; n < d.N; ++n) v[static_cast<std::size_t>(n)] = e2pi(9.0 * n / 128.0);
  auto hit = fourier_oracle_s1(make_sampled(d, v, 1.0), 0.5);
  REQUIRE(hit.has_value());
  CHECK(hit->frequency == 9);
  CHECK(hit->claimedCorrelation <= 1.0 + 1e-12);
  CHECK(hit->claimedCorrelation >= 0.25);
}

TEST_CASE("fourier oracle returns nothing for the zero function") {
  DomainSpec d{DomainKind::Cyclic, 64};
  SampledFunction z = make_sampled(d, std::vector<cd>(64, cd(0.0, 0.0)), 1.0);
  CHECK_FALSE(fourier_oracle_s1(z, 0.2).has_value());
}

TEST_CASE("quadratic oracle finds a quadratic phase") {
  DomainSpec d{DomainKind::Cyclic, 128};
  std::vector<cd> v(d.size());
  for (long n = 0; n < d.N; ++n) {
    v[static_cast<std::size_t>(n)] = e2pi((3.0 * n * n + 2.0 * n) / 32.0);
  }
  QuadraticOracleS2 oracle(32);
  CHECK(oracle.degree() == 2);
  auto hit = oracle.find(make_sampled(d, v, 1.0), 0.5);
  REQUIRE(hit.has_value());
  // The claim is the conservative guaranteed floor, not the measurement.
  CHECK(hit->claimedCorrelation == doctest::Approx(oracle.correlationBound(0.5)));
  // The returned phase itself matches the input exactly.
  cd corr(0.0, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) corr += v[i] * std::conj(hit->values[i]);
  corr /= static_cast<double>(d.N);
  CHECK(std::abs(corr) >= 0.999);
  CHECK(hit->description.find("n^2") != std::string::npos);
}

TEST_CASE("growth schedules dominate the identity and parse from specs") {
  for (const GrowthFunction& g :
       {growth_linear(), growth_exponential(), growth_tower(), growth_from_spec("linear:12"),
        growth_from_spec("exp"), growth_from_spec("tower:100")}) {
    for (double M : {1.0, 2.0, 8.0}) {
      CHECK(g.grow(M) >= M);
    }
    CHECK(g.grow(4.0) >= g.grow(2.0));
  }
  CHECK_THROWS_AS(growth_from_spec("cubic"), std::invalid_argument);
  CHECK_THROWS_AS(growth_from_spec("exp:fast"), std::invalid_argument);
}

TEST_CASE("conditional expectation averages within cells and is idempotent") {
  long N = 16;
  SampledFunction f = structured_signal(N, 0.2, 0xdec0ULL);
  Factor B = trivial_factor(N);
  // Split even and odd points into two cells.
  for (long n = 0; n < N; ++n) B.cellOf[static_cast<std::size_t>(n)] = static_cast<int>(n % 2);
  B.numCells = 2;
  SampledFunction Ef = conditional_expectation(f, B);
  SampledFunction EEf = conditional_expectation(Ef, B);
  for (std::size_t i = 0; i < Ef.values.size(); ++i) {
    CHECK(std::abs(Ef.values[i] - EEf.values[i]) < 1e-14);
  }
  cd evenMean{0.0, 0.0};
  for (long n = 0; n < N; n += 2) evenMean += f.values[static_cast<std::size_t>(n)];
  evenMean /= 8.0;
  CHECK(std::abs(Ef.values[0] - evenMean) < 1e-14);
}

TEST_CASE("energy increments equal the squared distance between projections") {
  long N = 256;
  SampledFunction f = structured_signal(N, 0.3, 0xdec1ULL);
  Factor B0 = trivial_factor(N);
  FourierOracleS1 oracle;
  WeakRegResult w = weak_regularize(f, 1, 0.2, oracle, &B0);
  const Factor& B1 = w.factor;
  double gap = energy(f, B1) - energy(f, B0);
  CHECK(gap >= -1e-12);
  SampledFunction e1 = conditional_expectation(f, B1);
  SampledFunction e0 = conditional_expectation(f, B0);
  double dist2 = 0.0;
  for (std::size_t i = 0; i < e1.values.size(); ++i) dist2 += std::norm(e1.values[i] - e0.values[i]);
  dist2 /= static_cast<double>(N);
  CHECK(gap == doctest::Approx(dist2).epsilon(1e-9));
}

TEST_CASE("weak regularization drives the uniformity norm below the target") {
  long N = 256;
  SampledFunction f = structured_signal(N, 0.0, 0xdec2ULL);
  FourierOracleS1 oracle;
  WeakRegResult w = weak_regularize(f, 1, 0.25, oracle);
  CHECK_FALSE(w.capped);
  CHECK(w.residual <= 0.25 + 1e-9);
  for (const IncrementInfo& inc : w.log) {
    CHECK(inc.correlation >= inc.claimed - 1e-9);
    CHECK(inc.measuredIncrement >= inc.certifiedIncrement - 1e-9);
    CHECK(inc.certifiedIncrement >= 0.0);
  }
}

TEST_CASE("regularization certificates hold on a structured signal") {
  long N = 512;
  SampledFunction f = structured_signal(N, 0.05, 0xdec3ULL);
  double eps = 0.15;
  DecompositionResult r = regularize(f, 1, eps, growth_exponential(2.0), FourierOracleS1{});
  CHECK_FALSE(r.budgetOverflow);
  CHECK(r.additivityError <= 1e-12);
  CHECK(r.nilIn01);
  CHECK(r.nilPlusSmlIn01);
  CHECK(r.l2Sml <= r.smlBudget + 1e-9);
  CHECK(r.ukUnf <= r.unfBudget + 1e-9);
  CHECK(r.roundsUsed <= static_cast<int>(std::ceil(4.0 / (eps * eps))));
  REQUIRE_FALSE(r.rounds.empty());
  for (std::size_t i = 1; i < r.rounds.size(); ++i) {
    CHECK(r.rounds[i].energyAfter + 1e-12 >= r.rounds[i - 1].energyAfter);
  }
}

TEST_CASE("decomposition reconstructs the input exactly") {
  long N = 128;
  SampledFunction f = structured_signal(N, 0.1, 0xdec4ULL);
  DecompositionResult r = regularize(f, 1, 0.2, growth_linear(8.0), FourierOracleS1{});
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    cd sum = r.fNil.values[i] + r.fSml.values[i] + r.fUnf.values[i];
    CHECK(std::abs(sum - f.values[i]) <= 1e-12);
  }
}

TEST_CASE("a tiny complexity cap reports overflow instead of lying") {
  long N = 256;
  SampledFunction f = structured_signal(N, 0.3, 0xdec5ULL);
  RegularizeOptions opts;
  opts.complexityCap = 1;
  DecompositionResult r = regularize(f, 1, 0.05, growth_exponential(4.0), FourierOracleS1{}, opts);
  CHECK(r.budgetOverflow);
}

TEST_CASE("input validation") {
  DomainSpec d{DomainKind::Cyclic, 32};
  std::vector<cd> complexVals(32, cd(0.5, 0.5));
  CHECK_THROWS_AS(regularize(make_sampled(d, complexVals, 1.0), 1, 0.1, growth_linear(), FourierOracleS1{}),
                  std::invalid_argument);
  SampledFunction ok = structured_signal(32, 0.0, 1);
  CHECK_THROWS_AS(regularize(ok, 1, 0.0, growth_linear(), FourierOracleS1{}), std::invalid_argument);
}

}  // TEST_SUITE
