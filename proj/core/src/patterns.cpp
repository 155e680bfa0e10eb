#include "hofa/patterns.hpp"

#include "hofa/gowers.hpp"
#include "hofa/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hofa {

namespace {

// Largest enumeration box accepted by multilinear_average.
constexpr std::size_t kMaxBoxVolume = 2'000'000'000;

// Distance from x to the nearest integer.
double torus_dist(double x) {
  double r = x - std::floor(x);
  return std::min(r, 1.0 - r);
}

long positive_mod(long x, long n) {
  long r = x % n;
  return r < 0 ? r + n : r;
}

void validate_inputs(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                     const PatternDomain& dom) {
  if (static_cast<int>(fs.size()) != psi.t) {
    throw std::invalid_argument("multilinear_average: arity mismatch: " + std::to_string(fs.size()) +
                                " functions for " + std::to_string(psi.t) + " forms");
  }
  if (psi.D < 1 || psi.D > 3) throw std::invalid_argument("multilinear_average: D must be 1..3");
  if (dom.N < 1) throw std::invalid_argument("multilinear_average: box modulus must be positive");
  for (const auto& f : fs) {
    if (f.domain.kind != dom.kind || f.domain.N != dom.N) {
      throw std::invalid_argument("multilinear_average: input domain does not match the box");
    }
  }
}

// Inclusive per-variable ranges of the enumeration box.
std::vector<std::pair<long, long>> box_ranges(const LinearFormSystem& psi, const PatternDomain& dom) {
  std::vector<std::pair<long, long>> r;
  if (dom.kind == DomainKind::Cyclic) {
    if (!dom.ranges.empty()) throw std::invalid_argument("cyclic box takes no explicit ranges");
    r.assign(static_cast<std::size_t>(psi.D), {0, dom.N - 1});
  } else if (dom.ranges.empty()) {
    r.assign(static_cast<std::size_t>(psi.D), {1, dom.N});
  } else {
    if (static_cast<int>(dom.ranges.size()) != psi.D) {
      throw std::invalid_argument("interval box needs one range per variable");
    }
    r = dom.ranges;
    for (const auto& [lo, hi] : r) {
      if (lo > hi) throw std::invalid_argument("interval box range is empty");
    }
  }
  return r;
}

std::size_t box_volume(const std::vector<std::pair<long, long>>& ranges) {
  std::size_t total = 1;
  for (const auto& [lo, hi] : ranges) {
    std::size_t len = static_cast<std::size_t>(hi - lo + 1);
    if (total > kMaxBoxVolume / len) {
      throw std::invalid_argument("multilinear_average: enumeration box exceeds " +
                                  std::to_string(kMaxBoxVolume) + " points");
    }
    total *= len;
  }
  return total;
}

// Sum of the form products over box slots [begin, end), slots enumerated in
// row-major order over the ranges.
cd box_partial_sum(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                   const PatternDomain& dom, const std::vector<std::pair<long, long>>& ranges,
                   std::size_t begin, std::size_t end) {
  const int D = psi.D;
  std::vector<std::size_t> lens(static_cast<std::size_t>(D));
  for (int j = 0; j < D; ++j) {
    lens[static_cast<std::size_t>(j)] =
        static_cast<std::size_t>(ranges[static_cast<std::size_t>(j)].second -
                                 ranges[static_cast<std::size_t>(j)].first + 1);
  }
  std::vector<long> n(static_cast<std::size_t>(D));
  cd acc = 0.0;
  for (std::size_t idx = begin; idx < end; ++idx) {
    std::size_t rest = idx;
    for (int j = D - 1; j >= 0; --j) {
      std::size_t len = lens[static_cast<std::size_t>(j)];
      n[static_cast<std::size_t>(j)] = ranges[static_cast<std::size_t>(j)].first +
                                       static_cast<long>(rest % len);
      rest /= len;
    }
    cd term = 1.0;
    for (int i = 0; i < psi.t && term != cd(0.0, 0.0); ++i) {
      long arg = 0;
      for (int j = 0; j < D; ++j) {
        arg += psi.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
               n[static_cast<std::size_t>(j)];
      }
      if (dom.kind == DomainKind::Cyclic) {
        term *= fs[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(positive_mod(arg, dom.N))];
      } else if (arg < 1 || arg > dom.N) {
        term = 0.0;
      } else {
        term *= fs[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(arg - 1)];
      }
    }
    acc += term;
  }
  return acc;
}

void validate_indicator(const SampledFunction& A) {
  for (const cd& v : A.values) {
    bool zero = std::abs(v) <= 1e-9;
    bool one = std::abs(v - cd(1.0, 0.0)) <= 1e-9;
    if (!zero && !one) throw std::invalid_argument("ap_profile: input must be 0/1-valued");
  }
}

bool is_ap_system(const LinearFormSystem& psi) {
  if (psi.D != 2) return false;
  for (int i = 0; i < psi.t; ++i) {
    const auto& row = psi.rows[static_cast<std::size_t>(i)];
    if (row.size() != 2 || row[0] != 1 || row[1] != i) return false;
  }
  return psi.t >= 1;
}

std::map<std::string, double> parse_params(const std::string& text, const std::string& family,
                                           const std::map<std::string, double>& defaults) {
  std::map<std::string, double> out = defaults;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("construction parameter '" + item + "' is not key=value");
    }
    std::string key = item.substr(0, eq);
    if (defaults.find(key) == defaults.end()) {
      throw std::invalid_argument("construction '" + family + "' has no parameter '" + key + "'");
    }
    out[key] = std::stod(item.substr(eq + 1));
  }
  return out;
}

// Raw weighted count E_{n in [N], d in [-N, N]} prod_i 1_A(n + id) mu(d)
// assembled from per-difference counts.
double weighted_count_from_profile(const std::map<long, long>& counts, const BhkWeight& w, long N) {
  double acc = 0.0;
  for (const auto& [d, c] : counts) {
    double m = w.at(d);
    if (m != 0.0) acc += m * static_cast<double>(c);
  }
  return acc / (static_cast<double>(N) * static_cast<double>(2 * N + 1));
}

double good_difference_fraction(const std::map<long, long>& counts, double thresholdCount, long N) {
  long good = 0;
  for (const auto& [d, c] : counts) {
    if (static_cast<double>(c) >= thresholdCount) ++good;
  }
  return static_cast<double>(good) / static_cast<double>(2 * N + 1);
}

// Average ranks with ties sharing the mean rank.
std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    double mean = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean;
    i = j + 1;
  }
  return ranks;
}

double spearman_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::size_t n = xs.size();
  if (n < 2) return 0.0;
  std::vector<double> rx = average_ranks(xs);
  std::vector<double> ry = average_ranks(ys);
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(n);
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

PatternDomain cyclic_pattern_domain(long N) { return PatternDomain{DomainKind::Cyclic, N, {}}; }

PatternDomain interval_pattern_domain(long N, std::vector<std::pair<long, long>> ranges) {
  return PatternDomain{DomainKind::Interval, N, std::move(ranges)};
}

PatternDomain ap_pattern_domain(long N) {
  return interval_pattern_domain(N, {{1, N}, {-N, N}});
}

cd multilinear_average(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                       const PatternDomain& dom) {
  validate_inputs(fs, psi, dom);
  auto ranges = box_ranges(psi, dom);
  std::size_t total = box_volume(ranges);
  std::mutex mu;
  std::map<std::size_t, cd> partials;
  parallel_chunks(total, [&](std::size_t b, std::size_t e) {
    cd part = box_partial_sum(fs, psi, dom, ranges, b, e);
    std::lock_guard<std::mutex> lock(mu);
    partials.emplace(b, part);
  });
  cd acc = 0.0;
  for (const auto& [b, part] : partials) acc += part;
  return acc / static_cast<double>(total);
}

std::map<long, long> ap_profile_counts(const SampledFunction& A, int k) {
  if (k < 1 || k > 5) throw std::invalid_argument("ap_profile: k must be 1..5");
  if (A.domain.kind != DomainKind::Interval) {
    throw std::invalid_argument("ap_profile: input must live on an interval domain");
  }
  validate_indicator(A);
  const long N = A.domain.N;
  std::vector<char> bits(static_cast<std::size_t>(N));
  for (long n = 1; n <= N; ++n) {
    bits[static_cast<std::size_t>(n - 1)] = std::abs(A.values[static_cast<std::size_t>(n - 1)]) > 0.5;
  }
  std::map<long, long> counts;
  for (long d = -N; d <= N; ++d) {
    long lo = 1, hi = N;
    for (int i = 0; i < k; ++i) {
      long shift = static_cast<long>(i) * d;
      lo = std::max(lo, 1 - shift);
      hi = std::min(hi, N - shift);
    }
    long c = 0;
    for (long n = lo; n <= hi; ++n) {
      bool all = true;
      for (int i = 0; i < k && all; ++i) {
        all = bits[static_cast<std::size_t>(n + static_cast<long>(i) * d - 1)] != 0;
      }
      c += all;
    }
    counts[d] = c;
  }
  return counts;
}

std::map<long, double> ap_profile(const SampledFunction& A, int k) {
  std::map<long, double> out;
  const double N = static_cast<double>(A.domain.N);
  for (const auto& [d, c] : ap_profile_counts(A, k)) out[d] = static_cast<double>(c) / N;
  return out;
}

PatternReport make_pattern_report(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                                  const PatternDomain& dom, bool withProfile) {
  PatternReport rep;
  rep.system = psi;
  rep.value = multilinear_average(fs, psi, dom);
  std::ostringstream meta;
  meta << (dom.kind == DomainKind::Cyclic ? "cyclic" : "interval") << " N=" << dom.N;
  if (pairwise_independent(psi)) {
    int s = cs_complexity(psi);
    GowersOptions opts;
    opts.allow_large_k = true;
    double best = 0.0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      double nrm = gowers_norm(fs[i], s + 1, opts).norm;
      if (i == 0 || nrm < best) best = nrm;
    }
    rep.minGowers = best;
    rep.gowersK = s + 1;
    meta << " s=" << s;
  } else {
    meta << " dependent-forms (no uniformity bound)";
  }
  if (withProfile) {
    if (!is_ap_system(psi)) throw std::invalid_argument("profile requires a progression system");
    for (const auto& f : fs) {
      if (f.values != fs[0].values) {
        throw std::invalid_argument("profile requires identical inputs in every slot");
      }
    }
    rep.perDifference = ap_profile(fs[0], psi.t);
  }
  rep.metadata = meta.str();
  return rep;
}

GvnReport gvn_check(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                    const PatternDomain& dom) {
  for (const auto& f : fs) {
    if (linf_norm(f) > 1.0 + 1e-9) throw std::invalid_argument("gvn_check: inputs must be 1-bounded");
  }
  GvnReport rep;
  rep.s = cs_complexity(psi);
  rep.lhs = std::abs(multilinear_average(fs, psi, dom));
  GowersOptions opts;
  opts.allow_large_k = true;
  double best = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    double nrm = gowers_norm(fs[i], rep.s + 1, opts).norm;
    if (i == 0 || nrm < best) best = nrm;
  }
  rep.rhs = best;
  rep.ratio = rep.lhs / std::max(rep.rhs, 1e-300);
  rep.apPath = dom.kind == DomainKind::Cyclic && is_ap_system(psi);
  rep.pass = !rep.apPath || rep.lhs <= rep.rhs + 1e-6;
  return rep;
}

TwistedGvnReport twisted_gvn_check(const std::vector<SampledFunction>& fs, const std::vector<long>& c,
                                   const std::function<cd(long)>& weight, bool cyclic,
                                   std::optional<double> characterTheta) {
  TwistedGvnReport rep;
  rep.k = static_cast<int>(fs.size());
  if (rep.k != 3 && rep.k != 4) throw std::invalid_argument("twisted_gvn_check: need 3 or 4 functions");
  if (static_cast<int>(c.size()) != rep.k) {
    throw std::invalid_argument("twisted_gvn_check: one shift coefficient per function");
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (c[i] == c[j]) throw std::invalid_argument("twisted_gvn_check: shifts must be distinct");
    }
  }
  DomainKind want = cyclic ? DomainKind::Cyclic : DomainKind::Interval;
  const long N = fs[0].domain.N;
  for (const auto& f : fs) {
    if (f.domain.kind != want || f.domain.N != N) {
      throw std::invalid_argument("twisted_gvn_check: inputs must share the expected domain");
    }
  }
  cd acc = 0.0;
  std::size_t terms = 0;
  long dLo = cyclic ? 0 : -N;
  long dHi = cyclic ? N - 1 : N;
  for (long d = dLo; d <= dHi; ++d) {
    cd w = weight(d);
    if (w == cd(0.0, 0.0)) {
      terms += static_cast<std::size_t>(N);
      continue;
    }
    cd inner = 0.0;
    for (long n = cyclic ? 0 : 1; n <= (cyclic ? N - 1 : N); ++n) {
      cd term = 1.0;
      for (int i = 0; i < rep.k && term != cd(0.0, 0.0); ++i) {
        long arg = n + c[static_cast<std::size_t>(i)] * d;
        if (cyclic) {
          term *= fs[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(positive_mod(arg, N))];
        } else if (arg < 1 || arg > N) {
          term = 0.0;
        } else {
          term *= fs[static_cast<std::size_t>(i)].values[static_cast<std::size_t>(arg - 1)];
        }
      }
      inner += term;
      ++terms;
    }
    acc += w * inner;
  }
  rep.lhs = std::abs(acc) / static_cast<double>(terms);
  GowersOptions opts;
  opts.allow_large_k = true;
  double best = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    double nrm = gowers_norm(fs[i], rep.k - 1, opts).norm;
    if (i == 0 || nrm < best) best = nrm;
  }
  rep.rhs = best;
  rep.ratio = rep.lhs / std::max(rep.rhs, 1e-300);
  if (rep.k == 3 && characterTheta && !cyclic) {
    // Absorb e(theta d) into slots 0 and 1: with a = theta / (c1 - c0),
    // a (n + c1 d) - a (n + c0 d) = theta d, so the weight becomes a pair of
    // modulations. The U^2 norm ignores linear phases (the 4-point derivative
    // pattern cancels them pointwise), which is what the check certifies.
    double a = *characterTheta / static_cast<double>(c[1] - c[0]);
    SampledFunction mod = fs[1];
    for (std::size_t i = 0; i < mod.values.size(); ++i) {
      mod.values[i] *= e2pi(a * static_cast<double>(mod.domain.point(i)));
    }
    double before = gowers_norm(fs[1], 2).norm;
    double after = gowers_norm(mod, 2).norm;
    rep.modulationChecked = true;
    rep.modulationError = std::abs(before - after);
  }
  return rep;
}

double BhkWeight::at(long d) const {
  if (d < -N || d > N) return 0.0;
  return mu[static_cast<std::size_t>(d + N)];
}

namespace {

// Shared tail of the weight builders: normalize psi >= 0 on [-N, N] to mean
// exactly 1, recording support, sup, and the re-measured mean.
BhkWeight finalize_weight(std::string kind, long N, double epsPrime, std::vector<double> psi) {
  double total = 0.0;
  long support = 0;
  for (double v : psi) {
    total += v;
    support += v > 0.0;
  }
  if (support <= 1) {
    throw std::runtime_error("bhk_weight: the window weights only d = 0; increase N or epsPrime");
  }
  BhkWeight w;
  w.kind = std::move(kind);
  w.N = N;
  w.epsPrime = epsPrime;
  w.support = support;
  double c = static_cast<double>(2 * N + 1) / total;
  w.mu.resize(psi.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    w.mu[i] = c * psi[i];
    sum += w.mu[i];
    w.sup = std::max(w.sup, w.mu[i]);
  }
  w.mean = sum / static_cast<double>(2 * N + 1);
  return w;
}

}  // namespace

BhkWeight bhk_weight_k3(const std::vector<double>& theta, double epsPrime, long N) {
  if (theta.empty()) throw std::invalid_argument("bhk_weight_k3: need at least one frequency");
  if (epsPrime <= 0.0 || epsPrime > 1.0) throw std::invalid_argument("bhk_weight_k3: epsPrime in (0, 1]");
  if (N < 1) throw std::invalid_argument("bhk_weight_k3: N must be positive");
  long W = static_cast<long>(std::floor(epsPrime * static_cast<double>(N)));
  std::vector<double> psi(static_cast<std::size_t>(2 * N + 1), 0.0);
  for (long d = -W; d <= W; ++d) {
    double dist = 0.0;
    for (double th : theta) dist = std::max(dist, torus_dist(th * static_cast<double>(d)));
    double v = 0.0;
    if (dist <= epsPrime / 2.0) {
      v = 1.0;
    } else if (dist < epsPrime) {
      v = 2.0 * (epsPrime - dist) / epsPrime;
    }
    psi[static_cast<std::size_t>(d + N)] = v;
  }
  return finalize_weight("k3_bohr", N, epsPrime, std::move(psi));
}

std::function<double(const std::vector<double>&)> torus_tent(double radius) {
  if (radius <= 0.0 || radius > 0.5) throw std::invalid_argument("torus_tent: radius in (0, 0.5]");
  return [radius](const std::vector<double>& u) {
    double v = 1.0;
    for (double x : u) v *= std::max(0.0, 1.0 - torus_dist(x) / radius);
    return v;
  };
}

BhkWeight bhk_weight_k4(const FilteredGroup& G, const PolySeq<double>& seq,
                        const std::function<double(const std::vector<double>&)>& phi, double epsPrime,
                        long N) {
  if (epsPrime <= 0.0 || epsPrime > 1.0) throw std::invalid_argument("bhk_weight_k4: epsPrime in (0, 1]");
  if (N < 1) throw std::invalid_argument("bhk_weight_k4: N must be positive");
  if (seq.taylor.size() < 2) throw std::invalid_argument("bhk_weight_k4: sequence needs a degree-1 coefficient");
  int m = G.blockStart(2);
  if (m < 1) throw std::invalid_argument("bhk_weight_k4: group has no weight-1 coordinates");
  std::vector<double> pi(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) pi[static_cast<std::size_t>(j)] = seq.taylor[1][static_cast<std::size_t>(j)];
  long W = static_cast<long>(std::floor(epsPrime * static_cast<double>(N)));
  std::vector<double> psi(static_cast<std::size_t>(2 * N + 1), 0.0);
  std::vector<double> u(static_cast<std::size_t>(m));
  for (long d = -W; d <= W; ++d) {
    for (int j = 0; j < m; ++j) {
      double x = pi[static_cast<std::size_t>(j)] * static_cast<double>(d);
      u[static_cast<std::size_t>(j)] = x - std::floor(x);
    }
    double v = phi(u);
    if (v < -1e-12) throw std::invalid_argument("bhk_weight_k4: cutoff must be nonnegative");
    psi[static_cast<std::size_t>(d + N)] = std::max(0.0, v);
  }
  return finalize_weight("k4_nil", N, epsPrime, std::move(psi));
}

BhkReport bhk_verify_synthetic(int k, const std::string& construction, double eps, long N) {
  if (k >= 5) {
    throw std::invalid_argument(
        "bhk_verify_synthetic: k >= 5 is excluded by design: the corresponding statement is false in "
        "general (Ruzsa-type counterexample), so no construction is attempted");
  }
  if (k != 3 && k != 4) throw std::invalid_argument("bhk_verify_synthetic: k must be 3 or 4");
  if (eps <= 0.0 || eps > 0.5) throw std::invalid_argument("bhk_verify_synthetic: eps in (0, 0.5]");
  if (N < 10) throw std::invalid_argument("bhk_verify_synthetic: N too small");
  auto colon = construction.find(':');
  std::string family = construction.substr(0, colon);
  std::string paramText = colon == std::string::npos ? "" : construction.substr(colon + 1);

  BhkReport rep;
  rep.k = k;
  rep.N = N;
  rep.eps = eps;
  rep.construction = construction;

  DomainSpec dom{DomainKind::Interval, N};
  std::vector<cd> bits(static_cast<std::size_t>(N), cd(0.0, 0.0));
  BhkWeight weight;

  // Golden ratio: the canonical badly-approximable default frequency.
  constexpr double kGolden = 0.6180339887498949;
  FilteredGroup G;
  PolySeq<double> seq{FilteredGroup{}, {}};
  LipschitzFunction F;

  if (k == 3) {
    if (family != "bohr") {
      throw std::invalid_argument("bhk_verify_synthetic: k = 3 supports the 'bohr' construction only");
    }
    auto p = parse_params(paramText, family, {{"alpha", kGolden}, {"delta", 0.15}, {"noise", 0.0}});
    std::mt19937_64 rng(0xb11c5eedULL);
    std::bernoulli_distribution flip(std::clamp(p["noise"], 0.0, 1.0));
    for (long n = 1; n <= N; ++n) {
      bool in = torus_dist(p["alpha"] * static_cast<double>(n)) <= p["delta"];
      if (p["noise"] > 0.0 && flip(rng)) in = !in;
      bits[static_cast<std::size_t>(n - 1)] = in ? 1.0 : 0.0;
    }
    weight = bhk_weight_k3({p["alpha"]}, eps, N);
  } else {
    if (family != "heisenberg") {
      throw std::invalid_argument("bhk_verify_synthetic: k = 4 supports the 'heisenberg' construction only");
    }
    auto p = parse_params(paramText, family,
                          {{"a", std::sqrt(2.0) - 1.0}, {"b", std::sqrt(3.0) - 1.0}, {"level", 0.65}});
    G = heisenberg_group();
    std::vector<Coords<double>> taylor{Coords<double>(3, 0.0), Coords<double>{p["a"], p["b"], 0.0}};
    seq = make_poly_seq(G, taylor);
    F.eval = [](const Coords<double>& x) {
      return cd(0.5 + 0.5 * std::cos(2.0 * std::acos(-1.0) * x[2]), 0.0);
    };
    F.lipschitz = std::acos(-1.0);
    for (long n = 1; n <= N; ++n) {
      Coords<double> x = g_reduce(G, taylor_eval(seq, n)).first;
      bits[static_cast<std::size_t>(n - 1)] = F.eval(x).real() >= p["level"] ? 1.0 : 0.0;
    }
    weight = bhk_weight_k4(G, seq, torus_tent(eps), eps, N);
  }

  SampledFunction A = make_sampled(dom, bits);
  double density = 0.0;
  for (const cd& v : A.values) density += v.real();
  rep.alpha = density / static_cast<double>(N);

  auto counts = ap_profile_counts(A, k);
  rep.weightedCount = weighted_count_from_profile(counts, weight, N);
  rep.threshold = std::pow(rep.alpha, k) - eps;
  rep.goodFraction = good_difference_fraction(counts, rep.threshold * static_cast<double>(N), N);
  rep.weightMean = weight.mean;
  rep.weightSup = weight.sup;
  rep.weightSupport = weight.support;

  if (k == 4) {
    // Positivity of the fiberwise average over central 4-point patterns:
    // sum_xi |Fhat(g0, xi)|^2 |Fhat(g0, 3 xi)|^2 >= |Fhat(g0, 0)|^4, checked
    // at uniformly sampled base points. The xi = 0 term equals the right side
    // and every term is nonnegative, so the margin certifies the expansion.
    const long kXiMax = 8;
    const long kResolution = 64;
    const int kGridPoints = 16;
    std::mt19937_64 rng(0x9a11ce11ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<LipschitzFunction> hat;
    for (long xi = -3 * kXiMax; xi <= 3 * kXiMax; ++xi) {
      hat.push_back(vertical_fourier(G, F, xi, kResolution));
    }
    auto hat_at = [&](long xi, const Coords<double>& x) {
      return hat[static_cast<std::size_t>(xi + 3 * kXiMax)].eval(x);
    };
    rep.positivityChecked = true;
    rep.positivityOk = true;
    rep.positivityMargin = 0.0;
    bool first = true;
    for (int g = 0; g < kGridPoints; ++g) {
      Coords<double> x{unif(rng), unif(rng), unif(rng)};
      double base = std::norm(hat_at(0, x));
      base *= base;
      double total = 0.0;
      for (long xi = -kXiMax; xi <= kXiMax; ++xi) {
        total += std::norm(hat_at(xi, x)) * std::norm(hat_at(3 * xi, x));
      }
      double margin = total - base;
      if (first || margin < rep.positivityMargin) rep.positivityMargin = margin;
      first = false;
      if (margin < -1e-9) rep.positivityOk = false;
    }
  }
  return rep;
}

GwReport gw_statement_check(const LinearFormSystem& psi, int s,
                            const std::vector<SampledFunction>& family) {
  GwReport rep;
  rep.s = s;
  rep.hypothesis = top_power_independence(psi, s);
  if (!rep.hypothesis) {
    rep.skipReason = "top powers psi_i^" + std::to_string(s + 1) +
                     " are linearly dependent; the statement's hypothesis fails, check skipped";
    return rep;
  }
  if (family.empty()) {
    rep.skipReason = "empty function family";
    return rep;
  }
  GowersOptions opts;
  opts.allow_large_k = true;
  for (const auto& f : family) {
    if (f.domain.kind != DomainKind::Cyclic) {
      throw std::invalid_argument("gw_statement_check: family must live on cyclic domains");
    }
    std::vector<SampledFunction> slots(static_cast<std::size_t>(psi.t), f);
    double lam = std::abs(multilinear_average(slots, psi, cyclic_pattern_domain(f.domain.N)));
    double nrm = gowers_norm(f, s + 1, opts).norm;
    rep.lambdas.push_back(lam);
    rep.norms.push_back(nrm);
    if (nrm > 1e-12) rep.maxRatio = std::max(rep.maxRatio, lam / nrm);
  }
  rep.spearman = spearman_correlation(rep.norms, rep.lambdas);
  return rep;
}

}  // namespace hofa
