#include <doctest.h>

#include "hofa/domain.hpp"
#include "hofa/expr.hpp"
#include "hofa/io.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>

using namespace hofa;

TEST_SUITE("funcspace") {

TEST_CASE("domain point maps are 0-based cyclic and 1-based interval") {
  DomainSpec c{DomainKind::Cyclic, 5};
  DomainSpec iv{DomainKind::Interval, 5};
  CHECK(c.point(0) == 0);
  CHECK(c.point(4) == 4);
  CHECK(iv.point(0) == 1);
  CHECK(iv.point(4) == 5);
  CHECK(c.size() == 5);
}

TEST_CASE("inner product and norms on a hand example") {
  DomainSpec d{DomainKind::Cyclic, 2};
  SampledFunction f = make_sampled(d, {cd(1.0, 0.0), cd(0.0, 1.0)});
  SampledFunction g = make_sampled(d, {cd(1.0, 0.0), cd(0.0, -1.0)});
  // E_n f(n) conj(g(n)) = (1 + i*conj(-i))/2 = (1 - 1)/2 = 0.
  CHECK(std::abs(inner(f, g)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(l2_norm(f) == doctest::Approx(1.0));
  CHECK(linf_norm(f) == doctest::Approx(1.0));
  CHECK(measured_bound(f) == doctest::Approx(1.0));
}

TEST_CASE("ones is the constant 1 with bound 1") {
  SampledFunction u = ones(DomainSpec{DomainKind::Interval, 7});
  CHECK(u.values.size() == 7);
  for (cd v : u.values) CHECK(v == cd(1.0, 0.0));
  CHECK(u.bound == doctest::Approx(1.0));
}

TEST_CASE("embed_to_cyclic preserves values and pads with zeros") {
  DomainSpec iv{DomainKind::Interval, 5};
  std::vector<cd> vals{{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}};
  SampledFunction f = make_sampled(iv, vals, 5.0);
  SampledFunction e = embed_to_cyclic(f, 2, 0);
  REQUIRE(e.domain.kind == DomainKind::Cyclic);
  CHECK(e.domain.N == 4 * 5);
  long nonzero = 0;
  for (cd v : e.values) nonzero += (v != cd(0.0, 0.0));
  CHECK(nonzero == 5);
  std::vector<double> re;
  for (cd v : e.values) {
    if (v != cd(0.0, 0.0)) re.push_back(v.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(re == std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("embed_to_cyclic rejects an undersized modulus") {
  SampledFunction f = ones(DomainSpec{DomainKind::Interval, 8});
  CHECK_THROWS_AS(embed_to_cyclic(f, 2, 31), std::invalid_argument);
  CHECK_NOTHROW(embed_to_cyclic(f, 2, 32));
}

TEST_CASE("expression e(1/2*n) on Z_2 gives the sign character") {
  SampledFunction f = eval_expr(parse_expr("e(1/2*n)"), DomainSpec{DomainKind::Cyclic, 2});
  CHECK(f.values[0].real() == doctest::Approx(1.0));
  CHECK(f.values[1].real() == doctest::Approx(-1.0));
  CHECK(std::abs(f.values[1].imag()) < 1e-15);
}

TEST_CASE("parity indicator on Z_4") {
  SampledFunction f = eval_expr(parse_expr("indicator(n mod 2 == 0)"), DomainSpec{DomainKind::Cyclic, 4});
  CHECK(f.values[0] == cd(1.0, 0.0));
  CHECK(f.values[1] == cd(0.0, 0.0));
  CHECK(f.values[2] == cd(1.0, 0.0));
  CHECK(f.values[3] == cd(0.0, 0.0));
}

TEST_CASE("clamp01 keeps mixtures inside the unit interval") {
  SampledFunction f =
      eval_expr(parse_expr("clamp01(1/2 + e(1/8*n))"), DomainSpec{DomainKind::Cyclic, 8});
  for (cd v : f.values) {
    CHECK(v.imag() == 0.0);
    CHECK(v.real() >= 0.0);
    CHECK(v.real() <= 1.0);
  }
}

TEST_CASE("random terms are reproducible from the seed") {
  DomainSpec d{DomainKind::Interval, 64};
  SampledFunction a = eval_expr(parse_expr("random(pm1, 42)"), d);
  SampledFunction b = eval_expr(parse_expr("random(pm1, 42)"), d);
  SampledFunction c = eval_expr(parse_expr("random(pm1, 43)"), d);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  for (cd v : a.values) CHECK(std::abs(std::abs(v.real()) - 1.0) < 1e-15);
}

TEST_CASE("printer output reparses to the same tree") {
  for (const char* text : {"e(1/2*n + 1/3*n^2)", "indicator(n mod 3 == 1)",
                           "clamp01(1/2 + 1/4*e(1/7*n))", "indicator(bohr(1/5; 1/10))"}) {
    Expr e = parse_expr(text);
    CHECK(parse_expr(print_expr(e)) == e);
  }
}

TEST_CASE("parse errors carry the offending offset") {
  try {
    parse_expr("e(1/2*n");
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.offset > 0);
  }
  CHECK_THROWS_AS(parse_expr("frobnicate(n)"), ParseError);
}

TEST_CASE("json round trip preserves a function exactly") {
  DomainSpec d{DomainKind::Interval, 6};
  std::vector<cd> vals;
  for (int i = 0; i < 6; ++i) vals.push_back(cd(std::cos(i), std::sin(i)) * 0.9);
  SampledFunction f = make_sampled(d, vals);
  std::string path = (std::filesystem::temp_directory_path() / "hofa_rt.json").string();
  write_function(path, f);
  SampledFunction g = read_function(path);
  CHECK(g.domain.kind == f.domain.kind);
  CHECK(g.domain.N == f.domain.N);
  CHECK(g.values == f.values);
  std::remove(path.c_str());
}

TEST_CASE("csv round trip preserves a function exactly") {
  DomainSpec d{DomainKind::Cyclic, 4};
  SampledFunction f = make_sampled(d, {cd(0.5, 0.25), cd(-1, 0), cd(0, 1), cd(0.125, -0.75)});
  std::string path = (std::filesystem::temp_directory_path() / "hofa_rt.csv").string();
  write_function(path, f);
  SampledFunction g = read_function(path);
  CHECK(g.domain.kind == DomainKind::Cyclic);
  CHECK(g.values == f.values);
  std::remove(path.c_str());
}

TEST_CASE("missing and malformed files raise io errors") {
  CHECK_THROWS_AS(read_function("/nonexistent/path/f.json"), IOError);
  std::string path = (std::filesystem::temp_directory_path() / "hofa_bad.json").string();
  spit_file(path, "{not json");
  CHECK_THROWS_AS(read_function(path), IOError);
  std::remove(path.c_str());
}

}  // TEST_SUITE
