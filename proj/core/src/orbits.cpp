#include "hofa/orbits.hpp"

#include <algorithm>
#include <cmath>

namespace hofa {

namespace {

long mod_pos(long n, long q) { return ((n % q) + q) % q; }

long det_int(const std::vector<std::vector<long>>& b) {
  std::size_t d = b.size();
  if (d == 1) return b[0][0];
  if (d == 2) return b[0][0] * b[1][1] - b[0][1] * b[1][0];
  if (d == 3) {
    return b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
           b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  }
  throw std::invalid_argument("lattice dimension must be <= 3");
}

/// Columns of the lattice basis matrix: column i is basis[i].
std::vector<std::vector<long>> basis_matrix(const LatticeCoset& coset) {
  std::size_t d = coset.basis.size();
  std::vector<std::vector<long>> m(d, std::vector<long>(d, 0));
  for (std::size_t i = 0; i < d; ++i) {
    if (coset.basis[i].size() != d) throw std::invalid_argument("lattice basis vectors must have dimension D");
    for (std::size_t r = 0; r < d; ++r) m[r][i] = coset.basis[i][r];
  }
  return m;
}

LatticeCoset trivial_coset(int D) {
  LatticeCoset c;
  c.n0.assign(static_cast<std::size_t>(D), 0);
  for (int i = 0; i < D; ++i) {
    std::vector<long> e(static_cast<std::size_t>(D), 0);
    e[static_cast<std::size_t>(i)] = 1;
    c.basis.push_back(std::move(e));
  }
  return c;
}

bool is_trivial(const LatticeCoset& c) {
  for (long v : c.n0)
    if (v != 0) return false;
  for (std::size_t i = 0; i < c.basis.size(); ++i) {
    for (std::size_t r = 0; r < c.basis.size(); ++r) {
      if (c.basis[i][r] != (i == r ? 1 : 0)) return false;
    }
  }
  return true;
}

ConvexBody default_body(int D, long N) {
  ConvexBody b;
  b.lo.assign(static_cast<std::size_t>(D), 1);
  b.hi.assign(static_cast<std::size_t>(D), N);
  return b;
}

struct Welford {
  cd sum = 0.0;
  double sumsq = 0.0;
  long n = 0;

  void add(cd v) {
    sum += v;
    sumsq += std::norm(v);
    ++n;
  }
  cd mean() const { return n > 0 ? sum / static_cast<double>(n) : cd(0.0); }
  double stderr_est() const {
    if (n < 2) return 0.0;
    double var = (sumsq - static_cast<double>(n) * std::norm(mean())) / static_cast<double>(n - 1);
    return std::sqrt(std::max(0.0, var) / static_cast<double>(n));
  }
};

cd eval_lip(const LipschitzFunction& F, const Coords<double>& x) {
  if (!F.eval) throw std::invalid_argument("Lipschitz function has no evaluator");
  return F.eval(x);
}

}  // namespace

double lipschitz_spot_check(const FilteredGroup& G, const LipschitzFunction& F, int pairs, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < pairs; ++t) {
    Coords<double> x(static_cast<std::size_t>(G.dim)), y(static_cast<std::size_t>(G.dim));
    for (double& v : x) v = u(rng);
    for (double& v : y) v = u(rng);
    double d = g_dist_quotient(G, x, y);
    if (d < 1e-12) continue;
    worst = std::max(worst, std::abs(eval_lip(F, x) - eval_lip(F, y)) / d);
  }
  return worst;
}

long lattice_index(const LatticeCoset& coset) {
  long det = det_int(basis_matrix(coset));
  if (det == 0) throw std::invalid_argument("lattice basis is singular");
  return std::labs(det);
}

bool coset_contains(const LatticeCoset& coset, const std::vector<long>& n) {
  std::size_t d = coset.basis.size();
  if (n.size() != d || coset.n0.size() != d) throw std::invalid_argument("coset dimension mismatch");
  auto m = basis_matrix(coset);
  long det = det_int(m);
  if (det == 0) throw std::invalid_argument("lattice basis is singular");
  std::vector<long> rhs(d);
  for (std::size_t r = 0; r < d; ++r) rhs[r] = n[r] - coset.n0[r];
  // Cramer solve; membership iff every coordinate is an integer.
  for (std::size_t i = 0; i < d; ++i) {
    auto mi = m;
    for (std::size_t r = 0; r < d; ++r) mi[r][i] = rhs[r];
    if (det_int(mi) % det != 0) return false;
  }
  return true;
}

bool ConvexBody::contains(const std::vector<long>& n) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (n[i] < lo[i] || n[i] > hi[i]) return false;
  }
  for (const auto& [a, b] : halfplanes) {
    long acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * n[i];
    if (acc > b) return false;
  }
  return true;
}

double ConvexBody::volume() const {
  double box = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) box *= static_cast<double>(hi[i] - lo[i]);
  if (box <= 0.0) throw std::invalid_argument("body has zero volume");
  if (halfplanes.empty()) return box;
  // Deterministic Monte Carlo for the half-plane cuts.
  std::mt19937_64 rng(0xb0d1ull);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const long trials = 200000;
  long inside = 0;
  for (long t = 0; t < trials; ++t) {
    bool ok = true;
    std::vector<double> x(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      x[i] = static_cast<double>(lo[i]) + u(rng) * static_cast<double>(hi[i] - lo[i]);
    }
    for (const auto& [a, b] : halfplanes) {
      double acc = 0;
      for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(a[i]) * x[i];
      if (acc > static_cast<double>(b)) {
        ok = false;
        break;
      }
    }
    if (ok) ++inside;
  }
  return box * static_cast<double>(inside) / static_cast<double>(trials);
}

cd orbit_average_multi(const LipschitzFunction& F, const MultiPolySeqD& seq, long N,
                       const std::optional<LatticeCoset>& coset, const std::optional<ConvexBody>& body) {
  int D = seq.D;
  if (D < 1 || D > 3) throw std::invalid_argument("orbit averages support 1 <= D <= 3");
  if (N < 1) throw std::invalid_argument("N >= 1");
  ConvexBody P = body ? *body : default_body(D, N);
  if (P.lo.size() != static_cast<std::size_t>(D) || P.hi.size() != static_cast<std::size_t>(D)) {
    throw std::invalid_argument("body dimension mismatch");
  }
  for (int i = 0; i < D; ++i) {
    if (P.lo[static_cast<std::size_t>(i)] < -N || P.hi[static_cast<std::size_t>(i)] > N) {
      throw std::invalid_argument("body must lie within [-N, N]^D");
    }
  }
  LatticeCoset L = coset ? *coset : trivial_coset(D);
  bool skip_coset = is_trivial(L);

  std::vector<long> span(static_cast<std::size_t>(D));
  long total = 1;
  for (int i = 0; i < D; ++i) {
    span[static_cast<std::size_t>(i)] = P.hi[static_cast<std::size_t>(i)] - P.lo[static_cast<std::size_t>(i)] + 1;
    total *= span[static_cast<std::size_t>(i)];
  }
  cd sum = 0.0;
  long count = 0;
  std::vector<long> n(static_cast<std::size_t>(D));
  for (long code = 0; code < total; ++code) {
    long rem = code;
    for (int i = 0; i < D; ++i) {
      n[static_cast<std::size_t>(i)] = P.lo[static_cast<std::size_t>(i)] + rem % span[static_cast<std::size_t>(i)];
      rem /= span[static_cast<std::size_t>(i)];
    }
    if (!P.contains(n)) continue;
    if (!skip_coset && !coset_contains(L, n)) continue;
    Coords<double> rep = g_reduce(seq.group, taylor_eval_multi(seq.group, seq.coeffs, n)).first;
    if (F.evalLocal && D == 1) {
      sum += F.evalLocal(rep, mod_pos(n[0], F.q), static_cast<double>(n[0]) / static_cast<double>(N));
    } else {
      sum += eval_lip(F, rep);
    }
    ++count;
  }
  if (count == 0) throw std::invalid_argument("empty intersection of coset and body");
  return sum / static_cast<double>(count);
}

cd orbit_average(const LipschitzFunction& F, const PolySeq<double>& seq, long N,
                 const std::optional<LatticeCoset>& coset, const std::optional<ConvexBody>& body) {
  MultiPolySeqD m;
  m.group = seq.group;
  m.D = 1;
  for (std::size_t i = 0; i < seq.taylor.size(); ++i) {
    m.coeffs.push_back({{static_cast<long>(i)}, seq.taylor[i]});
  }
  return orbit_average_multi(F, m, N, coset, body);
}

std::pair<cd, double> haar_integral_mc(const LipschitzFunction& F, const FilteredGroup& G, long samples,
                                       unsigned long seed) {
  if (samples < 1) throw std::invalid_argument("samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Welford acc;
  Coords<double> x(static_cast<std::size_t>(G.dim));
  for (long t = 0; t < samples; ++t) {
    for (double& v : x) v = u(rng);
    acc.add(eval_lip(F, x));
  }
  return {acc.mean(), acc.stderr_est()};
}

LeibmanGroup leibman_group(const FilteredGroup& G, const LinearFormSystem& psi) {
  if (G.step > 2) throw std::invalid_argument("leibman_group: step > 2 not supported");
  LeibmanGroup LG;
  LG.base = G;
  LG.psi = psi;
  LG.flag = power_flag(psi, G.step);
  std::vector<long> dims;
  for (int i = 1; i <= G.step; ++i) dims.push_back(G.filtrationDims[static_cast<std::size_t>(i)]);
  LG.dimension = leibman_dim(LG.flag, dims);
  return LG;
}

std::optional<std::vector<Coords<Rat>>> leibman_factorize(const LeibmanGroup& LG,
                                                          const std::vector<Coords<Rat>>& tuple) {
  const FilteredGroup& G = LG.base;
  if (tuple.size() != static_cast<std::size_t>(LG.psi.t)) throw std::invalid_argument("tuple arity mismatch");
  std::vector<Coords<Rat>> x = tuple;
  std::vector<Coords<Rat>> slots;
  for (std::size_t j = 0; j < LG.flag.basis.rows.size(); ++j) {
    const IntVec& row = LG.flag.basis.rows[j];
    std::size_t p = LG.flag.basis.pivots[j];
    Rat pivot = Rat(row[p]);
    Coords<Rat> gj = g_pow(G, x[p], Rat(1) / pivot);
    int deg = LG.flag.degrees[j];
    for (int c = 0; c < G.blockStart(deg); ++c) {
      if (gj[static_cast<std::size_t>(c)] != 0) return std::nullopt;
    }
    for (std::size_t c = 0; c < x.size(); ++c) {
      if (row[c] == 0) continue;
      x[c] = g_mul(G, g_pow(G, gj, Rat(-row[c])), x[c]);
    }
    slots.push_back(std::move(gj));
  }
  for (const auto& rem : x) {
    for (const Rat& v : rem) {
      if (v != 0) return std::nullopt;
    }
  }
  return slots;
}

bool leibman_contains(const LeibmanGroup& LG, const std::vector<Coords<Rat>>& tuple) {
  return leibman_factorize(LG, tuple).has_value();
}

namespace {

/// Shared slot-sampling core: draws per-slot block-uniform elements, forms
/// the tuple base * prod_j h_j^{v_jc}, reduces componentwise, and feeds it
/// to the sink.
template <class Sink>
void haar_samples_impl(const LeibmanGroup& LG, const Coords<double>& base, long samples, unsigned long seed,
                       Sink&& sink) {
  if (samples < 1) throw std::invalid_argument("samples >= 1");
  const FilteredGroup& G = LG.base;
  detail::check_coords(G, base);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t m = LG.flag.basis.rows.size();
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < m; ++j) rows.push_back(LG.row_d(j));
  std::vector<Coords<double>> h(m, Coords<double>(static_cast<std::size_t>(G.dim), 0.0));
  std::vector<Coords<double>> tuple(static_cast<std::size_t>(LG.psi.t));
  for (long t = 0; t < samples; ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      int start = G.blockStart(LG.flag.degrees[j]);
      for (int c = 0; c < G.dim; ++c) {
        h[j][static_cast<std::size_t>(c)] = c >= start ? u(rng) : 0.0;
      }
    }
    for (std::size_t c = 0; c < tuple.size(); ++c) {
      Coords<double> acc = base;
      for (std::size_t j = 0; j < m; ++j) {
        double e = rows[j][c];
        if (e == 0.0) continue;
        acc = g_mul(G, acc, g_pow(G, h[j], e));
      }
      tuple[c] = g_reduce(G, acc).first;
    }
    sink(tuple);
  }
}

}  // namespace

std::vector<std::vector<Coords<double>>> leibman_haar_sample(const LeibmanGroup& LG, const Coords<double>& base,
                                                             long samples, unsigned long seed) {
  std::vector<std::vector<Coords<double>>> out;
  out.reserve(static_cast<std::size_t>(samples));
  haar_samples_impl(LG, base, samples, seed, [&](const std::vector<Coords<double>>& t) { out.push_back(t); });
  return out;
}

std::pair<cd, double> leibman_haar_average(const LeibmanGroup& LG, const Coords<double>& base,
                                           const std::function<cd(const std::vector<Coords<double>>&)>& F,
                                           long samples, unsigned long seed) {
  Welford acc;
  haar_samples_impl(LG, base, samples, seed, [&](const std::vector<Coords<double>>& t) { acc.add(F(t)); });
  return {acc.mean(), acc.stderr_est()};
}

CountingReport counting_residual(const std::vector<std::function<cd(const Coords<double>&)>>& factors,
                                 const PolySeq<double>& seq, const LinearFormSystem& psi, long N,
                                 const std::optional<LatticeCoset>& coset, const std::optional<ConvexBody>& body,
                                 long samples, unsigned long seed) {
  if (factors.size() != static_cast<std::size_t>(psi.t)) {
    throw std::invalid_argument("one factor per linear form required");
  }
  int D = psi.D;
  if (D < 1 || D > 3) throw std::invalid_argument("counting supports 1 <= D <= 3");
  ConvexBody P = body ? *body : default_body(D, N);
  for (int i = 0; i < D; ++i) {
    if (P.lo[static_cast<std::size_t>(i)] < -N || P.hi[static_cast<std::size_t>(i)] > N) {
      throw std::invalid_argument("body must lie within [-N, N]^D");
    }
  }
  LatticeCoset L = coset ? *coset : trivial_coset(D);
  bool skip_coset = is_trivial(L);
  long idx = lattice_index(L);

  // Per-form lookup tables of factor(reduced g(a)) over the reachable range.
  std::vector<long> amin(static_cast<std::size_t>(psi.t)), amax(static_cast<std::size_t>(psi.t));
  for (int j = 0; j < psi.t; ++j) {
    long lo = 0, hi = 0;
    for (int i = 0; i < D; ++i) {
      long c = psi.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      lo += c * (c >= 0 ? P.lo[static_cast<std::size_t>(i)] : P.hi[static_cast<std::size_t>(i)]);
      hi += c * (c >= 0 ? P.hi[static_cast<std::size_t>(i)] : P.lo[static_cast<std::size_t>(i)]);
    }
    amin[static_cast<std::size_t>(j)] = lo;
    amax[static_cast<std::size_t>(j)] = hi;
  }
  std::vector<std::vector<cd>> tbl(static_cast<std::size_t>(psi.t));
  for (int j = 0; j < psi.t; ++j) {
    auto& t = tbl[static_cast<std::size_t>(j)];
    t.resize(static_cast<std::size_t>(amax[static_cast<std::size_t>(j)] - amin[static_cast<std::size_t>(j)] + 1));
    for (long a = amin[static_cast<std::size_t>(j)]; a <= amax[static_cast<std::size_t>(j)]; ++a) {
      Coords<double> rep = g_reduce(seq.group, taylor_eval(seq, a)).first;
      t[static_cast<std::size_t>(a - amin[static_cast<std::size_t>(j)])] = factors[static_cast<std::size_t>(j)](rep);
    }
  }

  std::vector<long> span(static_cast<std::size_t>(D));
  long total = 1;
  for (int i = 0; i < D; ++i) {
    span[static_cast<std::size_t>(i)] = P.hi[static_cast<std::size_t>(i)] - P.lo[static_cast<std::size_t>(i)] + 1;
    total *= span[static_cast<std::size_t>(i)];
  }
  cd sum = 0.0;
  long count = 0;
  std::vector<long> n(static_cast<std::size_t>(D));
  for (long code = 0; code < total; ++code) {
    long rem = code;
    for (int i = 0; i < D; ++i) {
      n[static_cast<std::size_t>(i)] = P.lo[static_cast<std::size_t>(i)] + rem % span[static_cast<std::size_t>(i)];
      rem /= span[static_cast<std::size_t>(i)];
    }
    if (!P.contains(n)) continue;
    if (!skip_coset && !coset_contains(L, n)) continue;
    cd prod = 1.0;
    for (int j = 0; j < psi.t; ++j) {
      long a = 0;
      for (int i = 0; i < D; ++i) {
        a += psi.rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] * n[static_cast<std::size_t>(i)];
      }
      prod *= tbl[static_cast<std::size_t>(j)][static_cast<std::size_t>(a - amin[static_cast<std::size_t>(j)])];
    }
    sum += prod;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("empty intersection of coset and body");

  LeibmanGroup LG = leibman_group(seq.group, psi);
  Coords<double> base = g_reduce(seq.group, taylor_eval(seq, 0)).first;
  auto F = [&](const std::vector<Coords<double>>& tuple) {
    cd prod = 1.0;
    for (std::size_t j = 0; j < tuple.size(); ++j) prod *= factors[j](tuple[j]);
    return prod;
  };
  auto [haar, hstderr] = leibman_haar_average(LG, base, F, samples, seed);

  CountingReport rep;
  rep.volume = P.volume();
  rep.latticeIndex = idx;
  rep.points = count;
  rep.empirical = sum * static_cast<double>(idx) / rep.volume;
  rep.haar = haar;
  rep.haarStderr = hstderr;
  rep.residual = std::abs(rep.empirical - haar);
  return rep;
}

namespace {

/// Reduced-coordinate discrepancy family: frequencies 1..3 on each
/// coordinate, plus sums of weight-1 coordinate pairs. All members have Haar
/// mean zero.
std::vector<std::function<double(const Coords<double>&)>> family_phases(const FilteredGroup& G) {
  std::vector<std::function<double(const Coords<double>&)>> fam;
  for (int j = 0; j < G.dim; ++j) {
    for (int k = 1; k <= 3; ++k) {
      fam.push_back([j, k](const Coords<double>& x) { return k * x[static_cast<std::size_t>(j)]; });
    }
  }
  int b2 = G.blockStart(2);
  for (int j = 0; j < b2; ++j) {
    for (int j2 = j + 1; j2 < b2; ++j2) {
      fam.push_back([j, j2](const Coords<double>& x) {
        return x[static_cast<std::size_t>(j)] + x[static_cast<std::size_t>(j2)];
      });
    }
  }
  return fam;
}

}  // namespace

double orbit_discrepancy(const PolySeq<double>& seq, long N) {
  if (N < 1) throw std::invalid_argument("N >= 1");
  const FilteredGroup& G = seq.group;
  auto fam = family_phases(G);
  std::vector<cd> sums(fam.size(), 0.0);
  for (long n = 1; n <= N; ++n) {
    Coords<double> rep = g_reduce(G, taylor_eval(seq, n)).first;
    for (std::size_t i = 0; i < fam.size(); ++i) sums[i] += e2pi(fam[i](rep));
  }
  double worst = 0.0;
  for (const cd& s : sums) worst = std::max(worst, std::abs(s) / static_cast<double>(N));
  return worst;
}

std::optional<EquidistWitness> equidist_witness(const PolySeq<double>& seq, long N, double delta,
                                                long maxComplexity) {
  double disc = orbit_discrepancy(seq, N);
  if (disc <= delta) return std::nullopt;
  const FilteredGroup& G = seq.group;
  std::optional<EquidistWitness> best;
  for (const auto& chi : horizontal_characters(G, 1, maxComplexity)) {
    std::map<std::vector<int>, double> coeffs;
    for (int i = 1; i < static_cast<int>(seq.taylor.size()); ++i) {
      coeffs[{i}] = character_eval(G, chi, seq.taylor[static_cast<std::size_t>(i)]);
    }
    double norm = cinf_norm(coeffs, N);
    if (!best || norm < best->cinfNorm) best = EquidistWitness{chi, norm, disc};
  }
  if (best) {
    // eta and -eta witness equally; report the positive-leading one.
    for (long v : best->eta.m) {
      if (v > 0) break;
      if (v < 0) {
        for (long& w : best->eta.m) w = -w;
        break;
      }
    }
  }
  return best;
}

Coords<double> central_element(const FilteredGroup& G, double c) {
  Coords<double> g(static_cast<std::size_t>(G.dim), 0.0);
  g.back() = c;
  return g;
}

LipschitzFunction vertical_fourier(const FilteredGroup& G, const LipschitzFunction& F, long xi, long resolution) {
  if (G.step != 2) throw std::invalid_argument("vertical Fourier transform needs a step-2 group");
  if (G.filtrationDims[2] != 1) throw std::invalid_argument("vertical torus must be 1-dimensional");
  if (resolution < 2 || (resolution & (resolution - 1)) != 0) {
    throw std::invalid_argument("resolution must be a power of two >= 2");
  }
  auto inner = F;
  LipschitzFunction out;
  out.lipschitz = F.lipschitz;
  out.eval = [G, inner, xi, resolution](const Coords<double>& x) {
    cd acc = 0.0;
    for (long r = 0; r < resolution; ++r) {
      double rho = static_cast<double>(r) / static_cast<double>(resolution);
      Coords<double> y = g_reduce(G, g_mul(G, central_element(G, rho), x)).first;
      acc += std::conj(e2pi(static_cast<double>(xi) * rho)) * inner.eval(y);
    }
    return acc / static_cast<double>(resolution);
  };
  return out;
}

}  // namespace hofa
