#include "hofa/selftest.hpp"

#include "hofa/decompose.hpp"
#include "hofa/forms.hpp"
#include "hofa/gowers.hpp"
#include "hofa/nilgroup.hpp"
#include "hofa/orbits.hpp"
#include "hofa/patterns.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace hofa {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

SampledFunction random_unit(const DomainSpec& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cd> v(d.size());
  for (auto& x : v) x = e2pi(u(rng)) * u(rng);
  return make_sampled(d, v);
}

// Direct 2^2-fold average E_{n,h1,h2} f(n) conj(f(n+h1)) conj(f(n+h2))
// f(n+h1+h2) on Z_N, the independent oracle against the spectral identity.
double u2_power_direct(const SampledFunction& f) {
  const long N = f.domain.N;
  cd acc = 0.0;
  for (long n = 0; n < N; ++n) {
    for (long h1 = 0; h1 < N; ++h1) {
      cd a = f.values[static_cast<std::size_t>(n)] *
             std::conj(f.values[static_cast<std::size_t>((n + h1) % N)]);
      for (long h2 = 0; h2 < N; ++h2) {
        acc += a * std::conj(f.values[static_cast<std::size_t>((n + h2) % N)]) *
               f.values[static_cast<std::size_t>((n + h1 + h2) % N)];
      }
    }
  }
  return (acc / static_cast<double>(N * N * N)).real();
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

SelfTestResult c1_gowers_identity() {
  SelfTestResult r;
  r.name = "gowers-identity";
  r.claim = "100 random 1-bounded f on Cyclic(128): |u2_fft^4 - direct quadruple sum| <= 1e-9, < 2 s";
  Timer t;
  DomainSpec d{DomainKind::Cyclic, 128};
  std::mt19937_64 rng(0xc1c1ULL);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    SampledFunction f = random_unit(d, rng);
    double direct = u2_power_direct(f);
    double fft = u2_fft(f).power;
    worst = std::max(worst, std::abs(direct - fft));
  }
  r.seconds = t.seconds();
  r.pass = worst <= 1e-9 && r.seconds < 2.0;
  std::ostringstream os;
  os << "worst |direct - fft| = " << worst << ", " << r.seconds << " s";
  r.detail = os.str();
  return r;
}

SelfTestResult c2_gauss_sum() {
  SelfTestResult r;
  r.name = "gauss-sum";
  r.claim = "U^2(e(n^2/N)) = N^{-1/4} within 1e-9 for N in {101, 257}";
  Timer t;
  double worst = 0.0;
  for (long N : {101L, 257L}) {
    DomainSpec d{DomainKind::Cyclic, N};
    std::vector<cd> v(d.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double n = static_cast<double>(d.point(i));
      v[i] = e2pi(n * n / static_cast<double>(N));
    }
    double norm = gowers_norm(make_sampled(d, v), 2).norm;
    worst = std::max(worst, std::abs(norm - std::pow(static_cast<double>(N), -0.25)));
  }
  r.seconds = t.seconds();
  r.pass = worst <= 1e-9;
  std::ostringstream os;
  os << "worst |U^2 - N^{-1/4}| = " << worst;
  r.detail = os.str();
  return r;
}

SelfTestResult c3_interval_normalization() {
  SelfTestResult r;
  r.name = "interval-normalization";
  r.claim = "U^k[N] identical within 1e-9 for Ntilde in {2^k N, 2^k N + 7}, k <= 3, 20 random f; constant exact";
  Timer t;
  DomainSpec d{DomainKind::Interval, 64};
  std::mt19937_64 rng(0xc3c3ULL);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    SampledFunction f = random_unit(d, rng);
    for (int k = 1; k <= 3; ++k) {
      GowersOptions a, b;
      a.ntilde = (1L << k) * d.N;
      b.ntilde = (1L << k) * d.N + 7;
      double na = gowers_norm(f, k, a).norm;
      double nb = gowers_norm(f, k, b).norm;
      worst = std::max(worst, std::abs(na - nb));
    }
  }
  bool constantExact = true;
  std::vector<cd> cv(d.size(), cd(0.73, 0.0));
  SampledFunction cf = make_sampled(d, cv);
  for (int k = 1; k <= 3; ++k) {
    constantExact = constantExact && gowers_norm(cf, k).norm == 0.73;
  }
  r.seconds = t.seconds();
  r.pass = worst <= 1e-9 && constantExact;
  std::ostringstream os;
  os << "worst Ntilde spread = " << worst << ", constant exact = " << (constantExact ? "yes" : "no");
  r.detail = os.str();
  return r;
}

SelfTestResult c4_complexity_recipe() {
  SelfTestResult r;
  r.name = "complexity-recipe";
  r.claim = "cs_complexity(k-AP) = k-2 for k = 3,4,5; parallelepiped k = 2 system = 1";
  Timer t;
  bool ok = true;
  std::ostringstream os;
  for (int k : {3, 4, 5}) {
    int s = cs_complexity(ap_system(k));
    ok = ok && s == k - 2;
    os << "AP" << k << "=" << s << " ";
  }
  int sp = cs_complexity(parallelepiped_system(2));
  ok = ok && sp == 1;
  os << "HP2=" << sp;
  r.seconds = t.seconds();
  r.pass = ok;
  r.detail = os.str();
  return r;
}

SelfTestResult c5_flag_leibman() {
  SelfTestResult r;
  r.name = "flag-leibman";
  r.claim = "4-AP flag dims (2,3,4); central alternating constraint (1,-3,3,-1) integral on 100 random "
            "Heisenberg orbit tuples (exact); leibman_dim(Heisenberg, 4-AP) = 7";
  Timer t;
  LinearFormSystem ap4 = ap_system(4);
  PowerFlag flag = power_flag(ap4, 3);
  bool dimsOk = flag.dims == std::vector<int>{2, 3, 4};

  // The degree-2 subspace has dimension 3, and its annihilator is spanned by
  // the alternating vector; the top level is all of Q^4 with no annihilator.
  auto ann = flag_annihilator(flag, 2);
  bool annOk = ann.size() == 1;
  if (annOk) {
    std::vector<BigInt> want{1, -3, 3, -1};
    bool plus = true, minus = true;
    for (std::size_t i = 0; i < 4; ++i) {
      plus = plus && ann[0][i] == want[i];
      minus = minus && ann[0][i] == -want[i];
    }
    annOk = plus || minus;
  }

  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0xc5c5ULL);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  std::uniform_int_distribution<long> arg(-20, 20);
  bool tuplesOk = true;
  int central = G.blockStart(2);
  for (int i = 0; i < 100 && tuplesOk; ++i) {
    std::vector<Coords<Rat>> taylor(3, Coords<Rat>(3, Rat(0)));
    for (int lev = 0; lev <= 2; ++lev) {
      for (int j = lev == 2 ? central : 0; j < 3; ++j) {
        taylor[static_cast<std::size_t>(lev)][static_cast<std::size_t>(j)] = Rat(num(rng), den(rng));
      }
    }
    auto seq = make_poly_seq(G, taylor);
    std::vector<long> nd{arg(rng), arg(rng)};
    auto tuple = leibman_orbit_point(seq, ap4, nd);
    // x0 - 3 x1 + 3 x2 - x3 in the central coordinate must be an integer
    // for orbit tuples: it is killed by the degree-2 part of the flag.
    Rat alt = tuple[0][2] - 3 * tuple[1][2] + 3 * tuple[2][2] - tuple[3][2];
    Rat frac = alt - Rat(static_cast<long>(std::floor(alt.convert_to<double>())));
    tuplesOk = denominator(frac) == 1 || numerator(frac) == 0;
  }

  LeibmanGroup LG = leibman_group(G, ap4);
  bool dimOk = LG.dimension == 7;

  r.seconds = t.seconds();
  r.pass = dimsOk && annOk && tuplesOk && dimOk;
  std::ostringstream os;
  os << "dims (" << flag.dims[0] << "," << flag.dims[1] << "," << flag.dims[2] << "), annihilator "
     << (annOk ? "alternating" : "WRONG") << ", tuples " << (tuplesOk ? "integral" : "BROKEN")
     << ", leibman_dim = " << LG.dimension;
  r.detail = os.str();
  return r;
}

SelfTestResult c6_group_law() {
  SelfTestResult r;
  r.name = "sequence-group-law";
  r.claim = "50 random Heisenberg products pass the iterated-derivative filtration test exactly";
  Timer t;
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0xc6c6ULL);
  std::uniform_int_distribution<long> num(-5, 5);
  std::uniform_int_distribution<long> den(1, 3);
  std::uniform_int_distribution<long> harg(-7, 7);
  bool ok = true;
  int central = G.blockStart(2);
  auto random_seq = [&]() {
    std::vector<Coords<Rat>> taylor(3, Coords<Rat>(3, Rat(0)));
    for (int lev = 0; lev <= 2; ++lev) {
      for (int j = lev == 2 ? central : 0; j < 3; ++j) {
        taylor[static_cast<std::size_t>(lev)][static_cast<std::size_t>(j)] = Rat(num(rng), den(rng));
      }
    }
    return make_poly_seq(G, taylor);
  };
  for (int i = 0; i < 50 && ok; ++i) {
    auto p = poly_product(random_seq(), random_seq());
    // First derivative must drop the top coefficient (degree <= 1 in the
    // central block beyond level dims), second must be central, third trivial.
    long h1 = harg(rng), h2 = harg(rng), h3 = harg(rng);
    if (h1 == 0) h1 = 1;
    if (h2 == 0) h2 = 2;
    if (h3 == 0) h3 = 3;
    auto d1 = discrete_derivative(p, h1);
    auto d2 = discrete_derivative(d1, h2);
    auto d3 = discrete_derivative(d2, h3);
    // Degree-2 sequence: second derivative lands in G_(2), third is constant id.
    for (std::size_t lev = 0; lev < d2.taylor.size() && ok; ++lev) {
      for (int j = 0; j < central && ok; ++j) {
        if (lev >= 1) ok = d2.taylor[lev][static_cast<std::size_t>(j)] == Rat(0);
      }
    }
    for (std::size_t lev = 1; lev < d3.taylor.size() && ok; ++lev) {
      for (int j = 0; j < 3 && ok; ++j) {
        ok = d3.taylor[lev][static_cast<std::size_t>(j)] == Rat(0);
      }
    }
  }
  r.seconds = t.seconds();
  r.pass = ok;
  r.detail = ok ? "all 50 products: D^2 central, D^3 constant (exact)" : "filtration violation found";
  return r;
}

SelfTestResult c7_counting_lemma() {
  SelfTestResult r;
  r.name = "counting-lemma";
  r.claim = "Heisenberg (sqrt2-1, sqrt3-1) 3-AP, N = 2000, 1e6 Haar samples: residual <= 0.05; "
            "rational control residual >= 0.2 with witness cinf_norm <= 1";
  Timer t;
  FilteredGroup G = heisenberg_group();
  LinearFormSystem ap3 = ap_system(3);
  // The test character is identically 1 on the half/third-integer control
  // orbit (e(2 * n/2) = e(3 * n/3) = 1) but has mean 0 under Haar measure, so
  // it separates a rational orbit from a genuinely equidistributed one.
  auto factor = [](const Coords<double>& x) { return e2pi(2.0 * x[0] + 3.0 * x[1]); };
  std::vector<std::function<cd(const Coords<double>&)>> factors(3, factor);

  std::vector<Coords<double>> tay{{0.0, 0.0, 0.0}, {std::sqrt(2.0) - 1.0, std::sqrt(3.0) - 1.0, 0.0}};
  auto seq = make_poly_seq(G, tay);
  CountingReport good = counting_residual(factors, seq, ap3, 2000, {}, {}, 1000000, 7);

  std::vector<Coords<double>> tayc{{0.0, 0.0, 0.0}, {0.5, 1.0 / 3.0, 0.0}};
  auto seqc = make_poly_seq(G, tayc);
  CountingReport bad = counting_residual(factors, seqc, ap3, 2000, {}, {}, 200000, 7);
  auto witness = equidist_witness(seqc, 2000, 0.1, 6);

  r.seconds = t.seconds();
  bool witnessOk = witness.has_value() && witness->cinfNorm <= 1.0;
  r.pass = good.residual <= 0.05 && bad.residual >= 0.2 && witnessOk;
  std::ostringstream os;
  os << "irrational residual = " << good.residual << ", control residual = " << bad.residual
     << ", witness " << (witness ? "cinf=" + std::to_string(witness->cinfNorm) : "MISSING");
  r.detail = os.str();
  return r;
}

SelfTestResult c8_gvn() {
  SelfTestResult r;
  r.name = "gvn-constant-1";
  r.claim = "|Lambda_k| <= min_i ||f_i||_{U^{k-1}(Z_N)} + 1e-6 on 200 random tuples, k in {3,4}, N in {32,64}";
  Timer t;
  std::mt19937_64 rng(0xc8c8ULL);
  int failures = 0;
  double worst = 1e300;
  for (int k : {3, 4}) {
    for (long N : {32L, 64L}) {
      DomainSpec d{DomainKind::Cyclic, N};
      for (int i = 0; i < 50; ++i) {
        std::vector<SampledFunction> fs;
        for (int j = 0; j < k; ++j) fs.push_back(random_unit(d, rng));
        GvnReport rep = gvn_check(fs, ap_system(k), cyclic_pattern_domain(N));
        failures += !rep.pass;
        worst = std::min(worst, rep.rhs - rep.lhs);
      }
    }
  }
  r.seconds = t.seconds();
  r.pass = failures == 0;
  std::ostringstream os;
  os << failures << " violations, smallest margin rhs - lhs = " << worst;
  r.detail = os.str();
  return r;
}

SelfTestResult c9_regularize() {
  SelfTestResult r;
  r.name = "regularize";
  r.claim = "f = clamp01(1/2 + 1/2 Re e(alpha n) + 0.05 noise), eps = 0.1, exponential growth: "
            "additivity <= 1e-12, ||f_sml||_2 <= 0.1, ||f_unf||_U2 <= 1/Grow(M), certificates true, "
            "<= ceil(4/eps^2) rounds";
  Timer t;
  const long N = 2048;
  const double alpha = 0.6180339887498949;
  DomainSpec d{DomainKind::Interval, N};
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cd> v(d.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double n = static_cast<double>(d.point(i));
    double x = 0.5 + 0.5 * std::cos(2.0 * kPi * alpha * n) + 0.05 * u(rng);
    v[i] = std::clamp(x, 0.0, 1.0);
  }
  SampledFunction f = make_sampled(d, v);
  FourierOracleS1 oracle;
  auto growth = growth_exponential(2.0);
  DecompositionResult res = regularize(f, 1, 0.1, growth, oracle);
  r.seconds = t.seconds();
  int roundCap = static_cast<int>(std::ceil(4.0 / (0.1 * 0.1)));
  bool ok = res.additivityError <= 1e-12 && res.l2Sml <= 0.1 && res.ukUnf <= res.unfBudget + 1e-12 &&
            res.nilIn01 && res.nilPlusSmlIn01 && res.roundsUsed <= roundCap && !res.budgetOverflow;
  r.pass = ok;
  std::ostringstream os;
  os << "additivity " << res.additivityError << ", ||f_sml||_2 " << res.l2Sml << " <= 0.1, ||f_unf||_U2 "
     << res.ukUnf << " <= " << res.unfBudget << ", certificates " << (res.nilIn01 && res.nilPlusSmlIn01)
     << ", rounds " << res.roundsUsed << "/" << roundCap;
  r.detail = os.str();
  return r;
}

SelfTestResult c10_bhk() {
  SelfTestResult r;
  r.name = "bhk-synthetic";
  r.claim = "k=3 bohr (density ~0.3, N=5000, eps=0.05): count >= 0.3^3 - 0.05 and good fraction >= 0.01; "
            "k=4 heisenberg (N=3000): count >= alpha^4 - 0.1 with pointwise vertical positivity";
  Timer t;
  BhkReport r3 = bhk_verify_synthetic(3, "bohr", 0.05, 5000);
  BhkReport r4 = bhk_verify_synthetic(4, "heisenberg", 0.1, 3000);
  r.seconds = t.seconds();
  bool ok3 = r3.weightedCount >= 0.3 * 0.3 * 0.3 - 0.05 && r3.goodFraction >= 0.01;
  bool ok4 = r4.weightedCount >= std::pow(r4.alpha, 4) - 0.1 && r4.positivityChecked && r4.positivityOk;
  r.pass = ok3 && ok4;
  std::ostringstream os;
  os << "k3: count " << r3.weightedCount << " (alpha " << r3.alpha << "), fraction " << r3.goodFraction
     << "; k4: count " << r4.weightedCount << " (alpha " << r4.alpha << "), positivity margin "
     << r4.positivityMargin;
  r.detail = os.str();
  return r;
}

SelfTestResult c11_ball_normality() {
  SelfTestResult r;
  r.name = "ball-normality";
  r.claim = "0/10^4 containment failures: h in B_{(1-delta) r} implies g h g^{-1} in B_r, r = 0.01, "
            "delta = 0.2, d(g, id) <= 2, Heisenberg";
  Timer t;
  FilteredGroup G = heisenberg_group();
  std::mt19937_64 rng(0xba11ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double rr = 0.01, delta = 0.2, A = 2.0;
  long failures = 0;
  const long probes = 10000;
  for (long i = 0; i < probes; ++i) {
    // Conjugator within distance A of the identity (first-kind box).
    Coords<double> z{A * u(rng), A * u(rng), A * u(rng)};
    Coords<double> g = g_exp(G, z);
    Coords<double> h = g_exp(G, ball_sample(G, (1.0 - delta) * rr, rng));
    Coords<double> conj = g_mul(G, g_mul(G, g, h), g_inv(G, g));
    failures += !ball_contains(G, conj, rr);
  }
  r.seconds = t.seconds();
  r.pass = failures == 0;
  std::ostringstream os;
  os << failures << "/" << probes << " failures";
  r.detail = os.str();
  return r;
}

}  // namespace

std::vector<SelfTestResult> run_selftests() {
  return {
      c1_gowers_identity(), c2_gauss_sum(),  c3_interval_normalization(), c4_complexity_recipe(),
      c5_flag_leibman(),    c6_group_law(),  c7_counting_lemma(),         c8_gvn(),
      c9_regularize(),      c10_bhk(),       c11_ball_normality(),
  };
}

}  // namespace hofa
