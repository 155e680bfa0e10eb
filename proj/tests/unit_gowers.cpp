#include <doctest.h>

#include "hofa/domain.hpp"
#include "hofa/gowers.hpp"

#include <cmath>
#include <random>

using namespace hofa;

namespace {

SampledFunction random_unit(const DomainSpec& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 1.0);
  std::vector<cd> v(d.size());
  for (cd& x : v) x = e2pi(phase(rng));
  return make_sampled(d, std::move(v), 1.0);
}

}  // namespace

TEST_SUITE("gowers") {

TEST_CASE("quadratic Gauss phase has U^2 norm N^{-1/4}") {
  for (long N : {101L, 257L}) {
    DomainSpec d{DomainKind::Cyclic, N};
    std::vector<cd> v(d.size());
    for (long n = 0; n < N; ++n) {
      v[static_cast<std::size_t>(n)] = e2pi(static_cast<double>(n) * static_cast<double>(n) / N);
    }
    GowersResult r = gowers_norm(make_sampled(d, v, 1.0), 2);
    CHECK(std::abs(r.norm - std::pow(static_cast<double>(N), -0.25)) < 1e-9);
  }
}

TEST_CASE("linear phase is perfectly non-uniform at k = 2") {
  DomainSpec d{DomainKind::Cyclic, 64};
  std::vector<cd> v(d.size());
  for (long n = 0; n < 64; ++n) v[static_cast<std::size_t>(n)] = e2pi(static_cast<double>(n) / 64.0);
  GowersResult r = gowers_norm(make_sampled(d, v, 1.0), 2);
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fft U^2 matches the definition on random data") {
  std::mt19937_64 rng(0x60e1ULL);
  DomainSpec d{DomainKind::Cyclic, 128};
  for (int trial = 0; trial < 5; ++trial) {
    SampledFunction f = random_unit(d, rng);
    GowersResult fft = u2_fft(f);
    GowersResult direct = gowers_norm(f, 2);
    CHECK(std::abs(fft.norm - direct.norm) < 1e-9);
  }
}

TEST_CASE("norms are monotone in k") {
  std::mt19937_64 rng(0x60e2ULL);
  DomainSpec d{DomainKind::Cyclic, 48};
  for (int trial = 0; trial < 3; ++trial) {
    SampledFunction f = random_unit(d, rng);
    double u2 = gowers_norm(f, 2).norm;
    double u3 = gowers_norm(f, 3).norm;
    CHECK(u2 <= u3 + 1e-9);
  }
}

TEST_CASE("modulating by a linear phase leaves U^k invariant") {
  std::mt19937_64 rng(0x60e3ULL);
  DomainSpec d{DomainKind::Cyclic, 50};
  SampledFunction f = random_unit(d, rng);
  SampledFunction g = f;
  for (long n = 0; n < d.N; ++n) {
    g.values[static_cast<std::size_t>(n)] *= e2pi(0.3 * static_cast<double>(n));
  }
  for (int k : {2, 3}) {
    CHECK(std::abs(gowers_norm(f, k).norm - gowers_norm(g, k).norm) < 1e-9);
  }
}

TEST_CASE("integer polynomial phases of degree s have U^{s+1} norm 1") {
  DomainSpec d{DomainKind::Cyclic, 32};
  std::vector<cd> v(d.size());
  for (long n = 0; n < d.N; ++n) {
    double p = (3.0 * n * n + 5.0 * n) / 32.0;
    v[static_cast<std::size_t>(n)] = e2pi(p);
  }
  GowersResult r = gowers_norm(make_sampled(d, v, 1.0), 3);
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("interval norms do not depend on the embedding modulus") {
  std::mt19937_64 rng(0x60e4ULL);
  DomainSpec iv{DomainKind::Interval, 40};
  SampledFunction f = random_unit(iv, rng);
  for (int k : {2, 3}) {
    GowersOptions a, b;
    a.ntilde = (1L << k) * 40;
    b.ntilde = (1L << k) * 40 + 7;
    CHECK(std::abs(gowers_norm(f, k, a).norm - gowers_norm(f, k, b).norm) < 1e-9);
  }
}

TEST_CASE("constant functions return their modulus exactly") {
  for (DomainKind kind : {DomainKind::Cyclic, DomainKind::Interval}) {
    DomainSpec d{kind, 37};
    SampledFunction f = make_sampled(d, std::vector<cd>(37, cd(0.73, 0.0)), 1.0);
    for (int k : {1, 2, 3}) {
      CHECK(gowers_norm(f, k).norm == 0.73);
    }
  }
}

TEST_CASE("deterministic mode reproduces the default result") {
  std::mt19937_64 rng(0x60e5ULL);
  DomainSpec d{DomainKind::Cyclic, 64};
  SampledFunction f = random_unit(d, rng);
  GowersOptions det;
  det.deterministic = true;
  double a = gowers_norm(f, 3, det).norm;
  double b = gowers_norm(f, 3, det).norm;
  CHECK(a == b);
}

TEST_CASE("argument validation") {
  SampledFunction f = ones(DomainSpec{DomainKind::Cyclic, 8});
  CHECK_THROWS_AS(gowers_norm(f, 0), std::invalid_argument);
  CHECK_THROWS_AS(gowers_norm(f, 5), std::invalid_argument);
  GowersOptions allow;
  allow.allow_large_k = true;
  CHECK_NOTHROW(gowers_norm(f, 5, allow));
  CHECK_THROWS_AS(mult_derivative(ones(DomainSpec{DomainKind::Interval, 8}), 1), std::invalid_argument);
  CHECK_THROWS_AS(u2_fft(ones(DomainSpec{DomainKind::Interval, 8})), std::invalid_argument);
}

TEST_CASE("second multiplicative derivative of a linear phase is constant") {
  DomainSpec d{DomainKind::Cyclic, 16};
  std::vector<cd> v(d.size());
  for (long n = 0; n < d.N; ++n) v[static_cast<std::size_t>(n)] = e2pi(3.0 * n / 16.0);
  SampledFunction f = make_sampled(d, v, 1.0);
  SampledFunction d1 = mult_derivative(f, 5);
  SampledFunction d2 = mult_derivative(d1, 3);
  for (cd x : d2.values) {
    CHECK(x.real() == doctest::Approx(d2.values[0].real()).epsilon(1e-12));
    CHECK(x.imag() == doctest::Approx(d2.values[0].imag()).epsilon(1e-12));
  }
}

}  // TEST_SUITE
