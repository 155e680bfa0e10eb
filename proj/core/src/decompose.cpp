#include "hofa/decompose.hpp"

#include "hofa/fft.hpp"
#include "hofa/gowers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace hofa {
namespace {

constexpr double kRealTol = 1e-12;

void require_real(const SampledFunction& f, const char* who) {
  for (const cd& v : f.values)
    if (std::abs(v.imag()) > kRealTol)
      throw std::invalid_argument(std::string(who) + ": a real-valued function is required");
}

void require_match(const SampledFunction& f, const Factor& B, const char* who) {
  validate_factor(B);
  if (B.N != static_cast<long>(f.values.size()) || B.N != f.domain.N)
    throw std::invalid_argument(std::string(who) + ": factor and function sizes differ");
}

struct CellStats {
  std::vector<cd> sum;
  std::vector<long> count;
};

CellStats cell_stats(const SampledFunction& f, const Factor& B) {
  CellStats st;
  st.sum.assign(static_cast<std::size_t>(B.numCells), cd(0.0, 0.0));
  st.count.assign(static_cast<std::size_t>(B.numCells), 0);
  for (long i = 0; i < B.N; ++i) {
    const int c = B.cellOf[static_cast<std::size_t>(i)];
    st.sum[static_cast<std::size_t>(c)] += f.values[static_cast<std::size_t>(i)];
    st.count[static_cast<std::size_t>(c)] += 1;
  }
  return st;
}

double sup_abs(const std::vector<cd>& v) {
  double m = 0.0;
  for (const cd& x : v) m = std::max(m, std::abs(x));
  return m;
}

/// Reduced phase t/q in [0, 1) for integer t, q; exact because |t| < 2^53.
double unit_phase(double t, double q) {
  double r = std::fmod(t, q);
  if (r < 0.0) r += q;
  return r / q;
}

}  // namespace

Factor trivial_factor(long N) {
  if (N <= 0) throw std::invalid_argument("trivial_factor: N >= 1 required");
  Factor B;
  B.N = N;
  B.cellOf.assign(static_cast<std::size_t>(N), 0);
  B.numCells = 1;
  return B;
}

Factor singleton_factor(long N) {
  if (N <= 0 || N > std::numeric_limits<int>::max())
    throw std::invalid_argument("singleton_factor: N out of range");
  Factor B;
  B.N = N;
  B.cellOf.resize(static_cast<std::size_t>(N));
  for (long i = 0; i < N; ++i) B.cellOf[static_cast<std::size_t>(i)] = static_cast<int>(i);
  B.numCells = static_cast<int>(N);
  return B;
}

void validate_factor(const Factor& B) {
  if (B.N <= 0 || B.cellOf.size() != static_cast<std::size_t>(B.N) || B.numCells <= 0)
    throw std::invalid_argument("validate_factor: malformed partition");
  std::vector<char> seen(static_cast<std::size_t>(B.numCells), 0);
  for (int c : B.cellOf) {
    if (c < 0 || c >= B.numCells)
      throw std::invalid_argument("validate_factor: cell index out of range");
    seen[static_cast<std::size_t>(c)] = 1;
  }
  for (char s : seen)
    if (!s) throw std::invalid_argument("validate_factor: empty cell");
  if (B.generatorLevels.size() != B.generators.size())
    throw std::invalid_argument("validate_factor: generator metadata mismatch");
}

SampledFunction conditional_expectation(const SampledFunction& f, const Factor& B) {
  require_match(f, B, "conditional_expectation");
  const CellStats st = cell_stats(f, B);
  std::vector<cd> out(static_cast<std::size_t>(B.N));
  for (long i = 0; i < B.N; ++i) {
    const std::size_t c = static_cast<std::size_t>(B.cellOf[static_cast<std::size_t>(i)]);
    out[static_cast<std::size_t>(i)] = st.sum[c] / static_cast<double>(st.count[c]);
  }
  return make_sampled(f.domain, std::move(out));
}

double energy(const SampledFunction& f, const Factor& B) {
  require_match(f, B, "energy");
  const CellStats st = cell_stats(f, B);
  double e = 0.0;
  for (int c = 0; c < B.numCells; ++c)
    e += std::norm(st.sum[static_cast<std::size_t>(c)]) / static_cast<double>(st.count[static_cast<std::size_t>(c)]);
  return e / static_cast<double>(B.N);
}

int FourierOracleS1::degree() const { return 1; }

double FourierOracleS1::correlationBound(double delta) const { return 0.8 * delta * delta; }

std::optional<StructuredFunction> FourierOracleS1::find(const SampledFunction& f, double delta) const {
  const long N = f.domain.N;
  if (N <= 0 || f.values.size() != f.domain.size())
    throw std::invalid_argument("fourier_oracle_s1: malformed input");
  std::vector<cd> fhat;
  long ntilde = N;
  if (f.domain.kind == DomainKind::Interval) {
    const SampledFunction h = embed_to_cyclic(f, 2);
    ntilde = h.domain.N;
    fhat = fourier_coefficients(h.values);
  } else {
    fhat = fourier_coefficients(f.values);
  }
  long best = 0;
  double bestAbs = -1.0;
  for (long xi = 0; xi < ntilde; ++xi) {
    const double a = std::abs(fhat[static_cast<std::size_t>(xi)]);
    if (a > bestAbs) {
      bestAbs = a;
      best = xi;
    }
  }
  const double scale = static_cast<double>(ntilde) / static_cast<double>(N);
  const double c0 = scale * bestAbs;
  double m2 = 0.0;
  for (const cd& v : f.values) m2 += std::norm(v);
  m2 = std::sqrt(m2 / static_cast<double>(N));
  if (c0 < 1e-15 || m2 < 1e-15) return std::nullopt;
  // Fourth-moment floor: max |fhat|^2 >= ||f||_{U^2}^4 / ||f||_2^2, with the
  // exact window constant ||1_[N]||_{U^2}^4 = (2N^2+1)/(192 N^2) of the
  // fourfold-padded embedding for interval inputs.
  double floorCorr;
  if (f.domain.kind == DomainKind::Interval) {
    const double n2 = static_cast<double>(N) * static_cast<double>(N);
    const double u1sq = std::sqrt((2.0 * n2 + 1.0) / (192.0 * n2));
    floorCorr = std::pow(scale, 1.5) * u1sq * delta * delta / m2;
  } else {
    floorCorr = delta * delta / m2;
  }
  if (c0 + 1e-12 < floorCorr) return std::nullopt;
  StructuredFunction psi;
  psi.values.resize(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < static_cast<std::size_t>(N); ++i) {
    const double p = static_cast<double>(f.domain.point(i));
    psi.values[i] = e2pi(unit_phase(static_cast<double>(best) * p, static_cast<double>(ntilde)));
  }
  psi.claimedCorrelation = std::min(floorCorr, c0);
  psi.complexityTag = 1.0;
  psi.frequency = best;
  psi.modulus = ntilde;
  psi.description = "e(" + std::to_string(best) + " n / " + std::to_string(ntilde) + ")";
  return psi;
}

std::optional<StructuredFunction> fourier_oracle_s1(const SampledFunction& f, double delta) {
  return FourierOracleS1{}.find(f, delta);
}

QuadraticOracleS2::QuadraticOracleS2(long q) : Q(q) {
  if (q < 2 || q > 64) throw std::invalid_argument("QuadraticOracleS2: Q in [2, 64] required");
}

int QuadraticOracleS2::degree() const { return 2; }

double QuadraticOracleS2::correlationBound(double delta) const {
  return delta * delta * delta * delta / 16.0;
}

std::optional<StructuredFunction> QuadraticOracleS2::find(const SampledFunction& f, double delta) const {
  const long N = f.domain.N;
  if (N <= 0 || f.values.size() != f.domain.size())
    throw std::invalid_argument("QuadraticOracleS2: malformed input");
  if (N > 512) throw std::invalid_argument("QuadraticOracleS2: N <= 512 required (exponential search)");
  std::vector<cd> table(static_cast<std::size_t>(Q));
  for (long t = 0; t < Q; ++t)
    table[static_cast<std::size_t>(t)] = e2pi(static_cast<double>(t) / static_cast<double>(Q));
  long bestA = 0, bestB = 0;
  double bestAbs = -1.0;
  cd bestZ(0.0, 0.0);
  for (long a = 0; a < Q; ++a) {
    for (long b = 0; b < Q; ++b) {
      cd z(0.0, 0.0);
      for (std::size_t i = 0; i < static_cast<std::size_t>(N); ++i) {
        const long p = f.domain.point(i);
        const long t = ((a * p % Q) * p + b * p) % Q;
        z += f.values[i] * std::conj(table[static_cast<std::size_t>(t)]);
      }
      z /= static_cast<double>(N);
      if (std::abs(z) > bestAbs) {
        bestAbs = std::abs(z);
        bestA = a;
        bestB = b;
        bestZ = z;
      }
    }
  }
  (void)bestZ;
  const double floorCorr = std::max(correlationBound(delta), 1e-15);
  if (bestAbs < floorCorr) return std::nullopt;
  StructuredFunction psi;
  psi.values.resize(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < static_cast<std::size_t>(N); ++i) {
    const long p = f.domain.point(i);
    const long t = ((bestA * p % Q) * p + bestB * p) % Q;
    psi.values[i] = table[static_cast<std::size_t>(t)];
  }
  psi.claimedCorrelation = std::min(floorCorr, bestAbs);
  psi.complexityTag = 2.0;
  psi.frequency = bestB;
  psi.modulus = Q;
  std::ostringstream os;
  os << "e((" << bestA << " n^2 + " << bestB << " n) / " << Q << ")";
  psi.description = os.str();
  return psi;
}

Factor energy_increment_step(const SampledFunction& f, const Factor& B, int s, double delta,
                             const CorrelationOracle& oracle, std::mt19937_64& rng,
                             IncrementInfo* info) {
  require_match(f, B, "energy_increment_step");
  require_real(f, "energy_increment_step");
  if (s < 1) throw std::invalid_argument("energy_increment_step: s >= 1 required");
  if (oracle.degree() != s)
    throw std::invalid_argument("energy_increment_step: oracle degree does not match s");
  if (!(delta > 0.0)) throw std::invalid_argument("energy_increment_step: delta > 0 required");
  const long N = B.N;
  const SampledFunction Ef = conditional_expectation(f, B);
  std::vector<cd> gv(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = f.values[i] - Ef.values[i];
  const SampledFunction g = make_sampled(f.domain, std::move(gv));

  auto psiOpt = oracle.find(g, delta);
  if (!psiOpt)
    throw std::runtime_error(
        "energy_increment_step: oracle returned none for an input declared nonuniform at delta");
  const StructuredFunction psi = std::move(*psiOpt);
  if (psi.values.size() != static_cast<std::size_t>(N))
    throw std::runtime_error("energy_increment_step: oracle output has the wrong length");
  if (sup_abs(psi.values) > 1.0 + 1e-9)
    throw std::runtime_error("energy_increment_step: oracle output exceeds the unit bound");

  cd z(0.0, 0.0);
  for (std::size_t i = 0; i < static_cast<std::size_t>(N); ++i)
    z += g.values[i] * std::conj(psi.values[i]);
  z /= static_cast<double>(N);
  const double c0 = std::abs(z);
  if (c0 + 1e-12 < psi.claimedCorrelation) {
    std::ostringstream os;
    os << "energy_increment_step: oracle breach, measured correlation " << c0
       << " is below the claimed " << psi.claimedCorrelation;
    throw std::runtime_error(os.str());
  }
  if (c0 < 1e-15)
    throw std::runtime_error("energy_increment_step: oracle correlate is orthogonal to the residual");

  // Rotate so that phi is real, 1-bounded, and <g, phi> = c0 exactly.
  const cd u = z / c0;
  std::vector<double> phi(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = (u * psi.values[i]).real();

  const long L = std::clamp(static_cast<long>(std::ceil(1.0 / delta)), 2L, 1L << 20);
  const double width = 2.0 / static_cast<double>(L);
  const double g2 = l2_norm(g);
  const double Eb = energy(f, B);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (int attempt = 0; attempt < 5; ++attempt) {
    const double off = unif(rng);
    std::vector<int> cellNew(static_cast<std::size_t>(N));
    std::unordered_map<long, int> remap;
    remap.reserve(static_cast<std::size_t>(std::min<long>(N, static_cast<long>(B.numCells) * L)));
    int next = 0;
    for (long i = 0; i < N; ++i) {
      long idx = static_cast<long>(std::floor((phi[static_cast<std::size_t>(i)] + 1.0) / width - off)) + 1;
      idx = std::clamp(idx, 0L, L - 1);
      const long key = static_cast<long>(B.cellOf[static_cast<std::size_t>(i)]) * L + idx;
      auto [it, inserted] = remap.try_emplace(key, next);
      if (inserted) ++next;
      cellNew[static_cast<std::size_t>(i)] = it->second;
    }
    Factor Bn;
    Bn.N = N;
    Bn.cellOf = std::move(cellNew);
    Bn.numCells = next;
    Bn.generators = B.generators;
    Bn.generators.push_back(psi);
    Bn.generatorLevels = B.generatorLevels;
    Bn.generatorLevels.push_back(static_cast<int>(L));

    std::vector<double> lo(static_cast<std::size_t>(next), 2.0);
    std::vector<double> hi(static_cast<std::size_t>(next), -2.0);
    for (long i = 0; i < N; ++i) {
      const std::size_t c = static_cast<std::size_t>(Bn.cellOf[static_cast<std::size_t>(i)]);
      lo[c] = std::min(lo[c], phi[static_cast<std::size_t>(i)]);
      hi[c] = std::max(hi[c], phi[static_cast<std::size_t>(i)]);
    }
    double wmeas = 0.0;
    for (int c = 0; c < next; ++c)
      wmeas = std::max(wmeas, hi[static_cast<std::size_t>(c)] - lo[static_cast<std::size_t>(c)]);

    const double inc = energy(f, Bn) - Eb;
    double cert = std::max(0.0, c0 - g2 * wmeas);
    cert *= cert;
    if (inc + 1e-9 >= cert && inc > 1e-12) {
      if (info) {
        info->correlation = c0;
        info->claimed = psi.claimedCorrelation;
        info->measuredIncrement = inc;
        info->certifiedIncrement = cert;
        info->frequency = psi.frequency;
        info->levels = static_cast<int>(L);
        info->offset = off;
        info->cellsAfter = next;
      }
      return Bn;
    }
  }
  throw std::runtime_error(
      "energy_increment_step: level-set refinement made no energy progress after 5 threshold draws");
}

WeakRegResult weak_regularize(const SampledFunction& f, int s, double eps,
                              const CorrelationOracle& oracle, const Factor* B0,
                              const WeakRegOptions& opts) {
  if (!(eps > 0.0)) throw std::invalid_argument("weak_regularize: eps > 0 required");
  if (s < 1) throw std::invalid_argument("weak_regularize: s >= 1 required");
  if (oracle.degree() != s)
    throw std::invalid_argument("weak_regularize: oracle degree does not match s");
  require_real(f, "weak_regularize");
  const long N = f.domain.N;

  WeakRegResult res;
  res.factor = B0 ? *B0 : trivial_factor(N);
  require_match(f, res.factor, "weak_regularize");

  std::mt19937_64 rng(opts.seed);
  long stepCap = opts.stepCap;
  if (stepCap <= 0) {
    const double c = oracle.correlationBound(eps);
    stepCap = c > 0.0 ? static_cast<long>(std::min(1e9, std::ceil(1.0 / (c * c)))) : 4096;
  }

  GowersOptions go;
  go.allow_large_k = true;
  const auto residual_of = [&](const Factor& B) {
    const SampledFunction Ef = conditional_expectation(f, B);
    std::vector<cd> d(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = f.values[i] - Ef.values[i];
    return gowers_norm(make_sampled(f.domain, std::move(d)), s + 1, go).norm;
  };

  res.residual = residual_of(res.factor);
  while (res.residual > eps) {
    if (opts.complexityCap > 0 && res.factor.numCells >= opts.complexityCap) {
      res.capped = true;
      break;
    }
    if (res.steps >= stepCap)
      throw std::runtime_error("weak_regularize: increment-step budget exhausted before reaching the target");
    IncrementInfo info;
    res.factor = energy_increment_step(f, res.factor, s, eps, oracle, rng, &info);
    res.log.push_back(info);
    ++res.steps;
    res.residual = residual_of(res.factor);
  }
  return res;
}

GrowthFunction growth_linear(double slope) {
  if (!(slope >= 1.0)) throw std::invalid_argument("growth_linear: slope >= 1 required");
  std::ostringstream os;
  os << "linear:" << slope;
  return {os.str(), [slope](double M) { return slope * M; }};
}

GrowthFunction growth_exponential(double base) {
  if (!(base > 1.0)) throw std::invalid_argument("growth_exponential: base > 1 required");
  std::ostringstream os;
  os << "exp:" << base;
  const double logb = std::log(base);
  return {os.str(), [base, logb](double M) {
            const double v = M * logb > 690.0 ? 1e300 : std::pow(base, M);
            return std::max(v, M);
          }};
}

GrowthFunction growth_tower(double cap) {
  if (!(cap >= 2.0)) throw std::invalid_argument("growth_tower: cap >= 2 required");
  std::ostringstream os;
  os << "tower:" << cap;
  return {os.str(), [cap](double M) {
            double t = 2.0;
            const int k = static_cast<int>(std::floor(std::min(M, 64.0)));
            for (int i = 2; i <= k && t < 64.0; ++i) t = std::pow(2.0, t);
            return std::max(std::min(t, cap), M);
          }};
}

GrowthFunction growth_from_spec(const std::string& spec) {
  std::string name = spec;
  double value = -1.0;
  const std::size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    name = spec.substr(0, colon);
    try {
      value = std::stod(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("growth_from_spec: bad numeric suffix in '" + spec + "'");
    }
  }
  if (name == "linear") return growth_linear(value < 0.0 ? 8.0 : value);
  if (name == "exp" || name == "exponential") return growth_exponential(value < 0.0 ? 2.0 : value);
  if (name == "tower") return growth_tower(value < 0.0 ? 1e4 : value);
  throw std::invalid_argument("growth_from_spec: unknown growth spec '" + spec + "'");
}

namespace {

struct TrigFit {
  std::vector<double> values;
  double residual = 0.0;
  long harmonicCount = 0;
};

/// Least-squares fit of E(f|B) on {1} and the pointwise powers psi^j,
/// j = 1..levels, of every generator, via twice-reorthogonalized
/// Gram-Schmidt with rank truncation.
TrigFit project_structured(const SampledFunction& f, const Factor& B, int harmonicsOverride) {
  const long N = B.N;
  const SampledFunction Ef = conditional_expectation(f, B);
  std::vector<double> y(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = Ef.values[i].real();

  std::vector<std::vector<double>> cols;
  cols.emplace_back(static_cast<std::size_t>(N), 1.0);
  long hcount = 0;
  for (std::size_t r = 0; r < B.generators.size(); ++r) {
    const long J = harmonicsOverride > 0 ? harmonicsOverride : B.generatorLevels[r];
    hcount += J;
    std::vector<cd> w(static_cast<std::size_t>(N), cd(1.0, 0.0));
    for (long j = 1; j <= J; ++j) {
      std::vector<double> re(static_cast<std::size_t>(N)), im(static_cast<std::size_t>(N));
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] *= B.generators[r].values[i];
        re[i] = w[i].real();
        im[i] = w[i].imag();
      }
      cols.push_back(std::move(re));
      cols.push_back(std::move(im));
    }
  }

  const auto dot = [N](const std::vector<double>& a, const std::vector<double>& b) {
    double sm = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sm += a[i] * b[i];
    return sm / static_cast<double>(N);
  };

  std::vector<std::vector<double>> q;
  for (std::vector<double>& col : cols) {
    std::vector<double> v = std::move(col);
    for (int pass = 0; pass < 2; ++pass) {
      for (const std::vector<double>& qk : q) {
        const double c = dot(v, qk);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * qk[i];
      }
    }
    const double nv = std::sqrt(dot(v, v));
    if (nv > 1e-9) {
      for (double& x : v) x /= nv;
      q.push_back(std::move(v));
    }
  }

  TrigFit out;
  out.values.assign(static_cast<std::size_t>(N), 0.0);
  for (const std::vector<double>& qk : q) {
    const double c = dot(y, qk);
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += c * qk[i];
  }
  double r2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - out.values[i];
    r2 += d * d;
  }
  out.residual = std::sqrt(r2 / static_cast<double>(N));
  out.harmonicCount = hcount;
  return out;
}

void assemble_result(DecompositionResult& out, const SampledFunction& f, const Factor& Bi,
                     const Factor& Bi1, const TrigFit& fit, double Mi, double delta, double eps,
                     int s) {
  const long N = f.domain.N;
  const SampledFunction Ef1 = conditional_expectation(f, Bi1);
  std::vector<cd> nil(static_cast<std::size_t>(N)), sml(static_cast<std::size_t>(N)),
      unf(static_cast<std::size_t>(N));
  bool nil01 = true, both01 = true;
  double addErr = 0.0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(N); ++i) {
    const double a = std::clamp(fit.values[i], 0.0, 1.0);
    const double efv = std::clamp(Ef1.values[i].real(), 0.0, 1.0);
    double b = efv - a;
    // Nudge by ulps so that a + b lands in [0, 1] under exact comparison.
    while (a + b > 1.0) b = std::nextafter(b, -2.0);
    while (a + b < 0.0) b = std::nextafter(b, 2.0);
    const double c = f.values[i].real() - (a + b);
    nil[i] = a;
    sml[i] = b;
    unf[i] = c;
    nil01 = nil01 && a >= 0.0 && a <= 1.0;
    const double t = a + b;
    both01 = both01 && t >= 0.0 && t <= 1.0;
    addErr = std::max(addErr, std::abs(a + b + c - f.values[i].real()));
  }
  out.fNil = make_sampled(f.domain, std::move(nil));
  out.fSml = make_sampled(f.domain, std::move(sml));
  out.fUnf = make_sampled(f.domain, std::move(unf));
  out.l2Sml = l2_norm(out.fSml);
  GowersOptions go;
  go.allow_large_k = true;
  out.ukUnf = gowers_norm(out.fUnf, s + 1, go).norm;
  out.M = Mi;
  out.factorComplexity = Bi.numCells;
  out.nilComplexity = fit.harmonicCount;
  out.smlBudget = eps;
  out.unfBudget = delta;
  out.nilIn01 = nil01;
  out.nilPlusSmlIn01 = both01;
  out.additivityError = addErr;
}

}  // namespace

DecompositionResult regularize(const SampledFunction& f, int s, double eps,
                               const GrowthFunction& growth, const CorrelationOracle& oracle,
                               const RegularizeOptions& opts) {
  if (s < 1) throw std::invalid_argument("regularize: s >= 1 required");
  if (oracle.degree() != s) throw std::invalid_argument("regularize: oracle degree does not match s");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("regularize: eps in (0, 1] required");
  if (!growth.grow) throw std::invalid_argument("regularize: empty growth function");
  if (f.domain.N <= 0 || f.values.size() != f.domain.size())
    throw std::invalid_argument("regularize: malformed input");
  require_real(f, "regularize");
  const long N = f.domain.N;

  std::vector<cd> snapped(static_cast<std::size_t>(N));
  for (std::size_t i = 0; i < snapped.size(); ++i) {
    const double v = f.values[i].real();
    if (v < -1e-9 || v > 1.0 + 1e-9)
      throw std::invalid_argument("regularize: values in [0, 1] required");
    snapped[i] = std::clamp(v, 0.0, 1.0);
  }
  const SampledFunction fc = make_sampled(f.domain, std::move(snapped));

  const int roundsCap = static_cast<int>(std::ceil(4.0 / (eps * eps)));
  std::mt19937_64 master(opts.seed);
  DecompositionResult out;
  Factor Bi = trivial_factor(N);
  double Mi = 1.0;
  double Ei = energy(fc, Bi);

  for (int i = 0; i < roundsCap; ++i) {
    const double Mi1 = growth.grow(Mi);
    if (!std::isfinite(Mi1) || Mi1 < Mi || Mi1 < 1.0)
      throw std::invalid_argument("regularize: growth must satisfy Grow(M) >= M >= 1");
    const double delta = 1.0 / Mi1;
    WeakRegOptions wo;
    wo.seed = master();
    wo.complexityCap = opts.complexityCap;
    WeakRegResult wr = weak_regularize(fc, s, delta, oracle, &Bi, wo);
    const double Ei1 = energy(fc, wr.factor);

    RoundInfo ri;
    ri.round = i;
    ri.mParam = Mi;
    ri.deltaUsed = delta;
    ri.energyBefore = Ei;
    ri.energyAfter = Ei1;
    ri.gap = std::max(0.0, Ei1 - Ei);
    ri.cellsBefore = Bi.numCells;
    ri.cellsAfter = wr.factor.numCells;
    ri.weakSteps = wr.steps;
    for (const IncrementInfo& ii : wr.log) ri.frequencies.push_back(ii.frequency);
    out.roundsUsed = i + 1;

    const bool gapSmall = ri.gap <= eps * eps / 4.0 + 1e-15;
    const bool last = i == roundsCap - 1;
    if (gapSmall || wr.capped || last) {
      const TrigFit fit = project_structured(fc, Bi, opts.harmonicsPerGenerator);
      ri.projectionResidual = fit.residual;
      const bool ok = gapSmall && !wr.capped && fit.residual <= eps / 2.0 + 1e-12;
      if (ok || wr.capped || last) {
        out.rounds.push_back(ri);
        assemble_result(out, fc, Bi, wr.factor, fit, Mi, delta, eps, s);
        out.budgetOverflow = !ok;
        return out;
      }
    }
    out.rounds.push_back(ri);
    Bi = std::move(wr.factor);
    Ei = Ei1;
    Mi = Mi1;
  }
  throw std::logic_error("regularize: round loop ended without returning");
}

}  // namespace hofa
