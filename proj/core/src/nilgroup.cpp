#include "hofa/nilgroup.hpp"

#include "hofa/io.hpp"

#include <algorithm>
#include <set>

namespace hofa {

namespace {

/// Period search bound for rational orbits: enough multiples of the
/// coordinate denominator lcm to absorb the degree-2 binomial corrections.
constexpr long kMaxPeriodSearch = 1000000;

BigInt denominator_lcm(const PolySeq<Rat>& seq) {
  BigInt L = 1;
  for (const auto& g : seq.taylor) {
    for (const Rat& c : g) L = boost::multiprecision::lcm(L, rat_den(c));
  }
  return L;
}

/// Bracket image vectors on the exact-weight-2 block, one per generator pair
/// appearing in the structure constants. Level-2 characters must annihilate
/// them so that they vanish on [G_(1), G_(1)].
std::vector<std::vector<long>> bracket_image_vectors(const FilteredGroup& G) {
  int begin = G.blockStart(2);
  int width = G.blockStart(3) - begin;
  std::map<std::pair<long, long>, std::vector<long>> by_pair;
  for (const auto& sc : G.structureConstants) {
    auto key = std::make_pair(sc[0], sc[1]);
    auto it = by_pair.find(key);
    if (it == by_pair.end()) it = by_pair.emplace(key, std::vector<long>(static_cast<std::size_t>(width), 0)).first;
    it->second[static_cast<std::size_t>(sc[2] - begin)] += sc[3];
  }
  std::vector<std::vector<long>> out;
  for (auto& [k, v] : by_pair) out.push_back(std::move(v));
  return out;
}

void enumerate_m(int pos, long budget, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if (pos == static_cast<int>(cur.size())) {
    if (budget == 0) out.push_back(cur);
    return;
  }
  for (long v = -budget; v <= budget; ++v) {
    cur[static_cast<std::size_t>(pos)] = v;
    enumerate_m(pos + 1, budget - std::labs(v), cur, out);
  }
  cur[static_cast<std::size_t>(pos)] = 0;
}

}  // namespace

FilteredGroup make_group(int dim, std::vector<int> filtrationDims,
                         std::vector<std::array<long, 4>> structureConstants,
                         std::vector<std::string> labels) {
  if (dim < 1) throw std::invalid_argument("group dim must be >= 1");
  if (filtrationDims.size() < 2) throw std::invalid_argument("filtration needs dims for i = 0..s with s >= 1");
  if (filtrationDims[0] != dim || filtrationDims[1] != dim) {
    throw std::invalid_argument("filtration must start G_(0) = G_(1) = G");
  }
  for (std::size_t i = 1; i < filtrationDims.size(); ++i) {
    if (filtrationDims[i] < 1) throw std::invalid_argument("filtration dims must be positive");
    if (filtrationDims[i] > filtrationDims[i - 1]) throw std::invalid_argument("filtration dims must be nonincreasing");
  }
  FilteredGroup G;
  G.dim = dim;
  G.step = static_cast<int>(filtrationDims.size()) - 1;
  G.filtrationDims = std::move(filtrationDims);
  G.structureConstants = std::move(structureConstants);
  G.labels = std::move(labels);
  if (!G.labels.empty() && G.labels.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("labels must be empty or one per coordinate");
  }
  if (!G.abelian()) {
    if (G.step != 2) throw std::invalid_argument("nonabelian groups are supported exactly at step 2 only");
    std::set<std::array<long, 3>> seen;
    for (const auto& sc : G.structureConstants) {
      long i = sc[0], j = sc[1], k = sc[2], c = sc[3];
      if (i < 0 || j < 0 || k < 0 || i >= dim || j >= dim || k >= dim) {
        throw std::invalid_argument("structure constant index out of range");
      }
      if (i >= j) throw std::invalid_argument("structure constants must be stored with i < j");
      if (G.weight(static_cast<int>(i)) != 1 || G.weight(static_cast<int>(j)) != 1) {
        throw std::invalid_argument("brackets are supported between weight-1 basis vectors only");
      }
      if (G.weight(static_cast<int>(k)) != 2) {
        throw std::invalid_argument("bracket values must land in the degree-2 block");
      }
      if (c == 0) throw std::invalid_argument("zero structure constant");
      if (!seen.insert({i, j, k}).second) throw std::invalid_argument("duplicate structure constant entry");
    }
  }
  return G;
}

FilteredGroup circle_group() { return make_group(1, {1, 1}, {}, {"theta"}); }

FilteredGroup torus_group(int m) {
  if (m < 1) throw std::invalid_argument("torus dimension must be >= 1");
  std::vector<std::string> labels;
  for (int i = 1; i <= m; ++i) labels.push_back("theta" + std::to_string(i));
  return make_group(m, {m, m}, {}, std::move(labels));
}

FilteredGroup heisenberg_group() {
  return make_group(3, {3, 3, 1}, {{{0, 1, 2, 1}}}, {"a", "b", "c"});
}

FilteredGroup group_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("group definition must be a JSON object");
  if (!j.contains("dim") || !j.contains("filtrationDims")) {
    throw std::invalid_argument("group definition needs dim and filtrationDims");
  }
  int dim = j.at("dim").get<int>();
  std::vector<int> fd = j.at("filtrationDims").get<std::vector<int>>();
  std::vector<std::array<long, 4>> sc;
  if (j.contains("structureConstants")) {
    for (const auto& row : j.at("structureConstants")) {
      if (!row.is_array() || row.size() != 4) throw std::invalid_argument("structure constant rows are [i, j, k, c]");
      for (const auto& entry : row) {
        if (!entry.is_number_integer() && !(entry.is_number() && entry.get<double>() == std::floor(entry.get<double>()))) {
          throw std::invalid_argument("structure constants must be integers (the integer points must form a subgroup)");
        }
      }
      sc.push_back({row[0].get<long>() - 1, row[1].get<long>() - 1, row[2].get<long>() - 1, row[3].get<long>()});
    }
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  FilteredGroup G = make_group(dim, std::move(fd), std::move(sc), std::move(labels));
  if (j.contains("step") && j.at("step").get<int>() != G.step) {
    throw std::invalid_argument("declared step does not match filtration length");
  }
  return G;
}

nlohmann::json group_to_json(const FilteredGroup& G) {
  nlohmann::ordered_json j;
  j["dim"] = G.dim;
  j["step"] = G.step;
  j["filtrationDims"] = G.filtrationDims;
  nlohmann::ordered_json sc = nlohmann::ordered_json::array();
  for (const auto& row : G.structureConstants) {
    sc.push_back({row[0] + 1, row[1] + 1, row[2] + 1, row[3]});
  }
  j["structureConstants"] = sc;
  if (!G.labels.empty()) j["labels"] = G.labels;
  return j;
}

FilteredGroup group_from_spec(const std::string& spec) {
  if (spec == "circle") return circle_group();
  if (spec == "heisenberg") return heisenberg_group();
  if (spec.rfind("torus(", 0) == 0 && spec.back() == ')') {
    int m = std::stoi(spec.substr(6, spec.size() - 7));
    return torus_group(m);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(slurp_file(spec));
  } catch (const nlohmann::json::exception& e) {
    throw IOError("cannot parse group file '" + spec + "': " + e.what());
  }
  return group_from_json(j);
}

PolySeq<double> poly_seq_from_json(const nlohmann::json& j) {
  if (!j.contains("group") || !j.contains("taylor")) {
    throw IOError("sequence JSON needs 'group' and 'taylor' fields");
  }
  FilteredGroup G = j["group"].is_string() ? group_from_spec(j["group"].get<std::string>())
                                           : group_from_json(j["group"]);
  std::vector<Coords<double>> taylor;
  for (const auto& row : j["taylor"]) {
    Coords<double> g;
    for (const auto& v : row) g.push_back(v.get<double>());
    if (static_cast<int>(g.size()) != G.dim) {
      throw IOError("sequence coefficient has " + std::to_string(g.size()) + " coordinates, group dim is " +
                    std::to_string(G.dim));
    }
    taylor.push_back(std::move(g));
  }
  try {
    return make_poly_seq(G, taylor);
  } catch (const std::invalid_argument& e) {
    throw IOError(std::string("invalid sequence: ") + e.what());
  }
}

nlohmann::json poly_seq_to_json(const PolySeq<double>& seq) {
  nlohmann::json j;
  j["group"] = group_to_json(seq.group);
  j["taylor"] = nlohmann::json::array();
  for (const auto& g : seq.taylor) j["taylor"].push_back(g);
  return j;
}

BigInt binom_big(long n, int k) {
  if (k < 0) throw std::invalid_argument("binomial: k >= 0");
  BigInt acc = 1;
  for (int t = 0; t < k; ++t) {
    acc *= BigInt(n) - t;
    acc /= t + 1;
  }
  return acc;
}

double g_dist(const FilteredGroup& G, const Coords<double>& a, const Coords<double>& b) {
  Coords<double> z = g_log(G, g_mul(G, g_inv(G, a), b));
  double d = 0.0;
  for (double v : z) d = std::max(d, std::abs(v));
  return d;
}

double g_dist_quotient(const FilteredGroup& G, const Coords<double>& a, const Coords<double>& b) {
  if (G.dim > 10) throw std::invalid_argument("quotient metric enumerates 3^dim translates; dim <= 10 enforced");
  Coords<double> ra = g_reduce(G, a).first;
  Coords<double> rb = g_reduce(G, b).first;
  long total = 1;
  for (int i = 0; i < G.dim; ++i) total *= 3;
  double best = std::numeric_limits<double>::infinity();
  Coords<double> gamma(static_cast<std::size_t>(G.dim));
  for (long code = 0; code < total; ++code) {
    long rem = code;
    for (int i = 0; i < G.dim; ++i) {
      gamma[static_cast<std::size_t>(i)] = static_cast<double>(rem % 3 - 1);
      rem /= 3;
    }
    best = std::min(best, g_dist(G, ra, g_mul(G, rb, gamma)));
  }
  return best;
}

bool ball_contains(const FilteredGroup& G, const Coords<double>& g, double r) {
  if (r <= 0) throw std::invalid_argument("ball radius must be positive");
  Coords<double> z = g_log(G, g);
  for (int j = 0; j < G.dim; ++j) {
    double bound = std::pow(r, G.step + 1 - G.weight(j));
    if (std::abs(z[static_cast<std::size_t>(j)]) > bound) return false;
  }
  return true;
}

Coords<double> ball_sample(const FilteredGroup& G, double r, std::mt19937_64& rng) {
  if (r <= 0) throw std::invalid_argument("ball radius must be positive");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Coords<double> z(static_cast<std::size_t>(G.dim));
  for (int j = 0; j < G.dim; ++j) {
    z[static_cast<std::size_t>(j)] = unit(rng) * std::pow(r, G.step + 1 - G.weight(j));
  }
  return g_exp(G, z);
}

Classification classify_sequence(const PolySeq<Rat>& seq, double A, long N) {
  if (N < 1) throw std::invalid_argument("classify_sequence: N >= 1");
  const FilteredGroup& G = seq.group;
  Classification out;

  PolySeq<double> dseq = to_double_seq(seq);
  Coords<double> id = g_identity<double>(G);
  out.smooth = true;
  Coords<double> prev = taylor_eval(dseq, 1);
  for (long n = 1; n <= N && out.smooth; ++n) {
    Coords<double> here = n == 1 ? prev : taylor_eval(dseq, n);
    if (g_dist(G, here, id) > A) out.smooth = false;
    Coords<double> next = taylor_eval(dseq, n + 1);
    if (g_dist(G, here, next) > A / static_cast<double>(N)) out.smooth = false;
  }

  long qmax = static_cast<long>(std::floor(A));
  out.rational = qmax >= 1;
  for (const auto& g : seq.taylor) {
    if (!out.rational) break;
    bool ok = false;
    for (long q = 1; q <= qmax && !ok; ++q) {
      ok = in_lattice(G, g_pow(G, g, Rat(q)));
    }
    out.rational = ok;
  }

  if (out.rational) {
    BigInt L = denominator_lcm(seq);
    BigInt cap_big = 2 * boost::multiprecision::pow(L, static_cast<unsigned>(G.step + 1));
    long cap = cap_big > kMaxPeriodSearch ? kMaxPeriodSearch : cap_big.convert_to<long>();
    std::vector<Coords<Rat>> at;
    for (int n = 0; n <= G.step; ++n) at.push_back(taylor_eval(seq, n));
    for (long p = 1; p <= cap && !out.period; ++p) {
      bool ok = true;
      // Agreement of the cosets at n = 0..step propagates to all n: the
      // comparison sequence is polynomial with lattice Taylor coefficients.
      for (int n = 0; n <= G.step && ok; ++n) {
        ok = in_lattice(G, g_mul(G, g_inv(G, at[static_cast<std::size_t>(n)]), taylor_eval(seq, n + p)));
      }
      if (ok) out.period = p;
    }
  }
  return out;
}

std::vector<HorizontalCharacter> horizontal_characters(const FilteredGroup& G, int level, long maxComplexity) {
  if (level < 1 || level > G.step) throw std::invalid_argument("character level must satisfy 1 <= i <= step");
  if (maxComplexity < 0) throw std::invalid_argument("maxComplexity must be >= 0");
  int begin = G.blockStart(level);
  int end = G.blockStart(level + 1);
  int width = end - begin;
  std::vector<HorizontalCharacter> out;
  if (width == 0) return out;
  std::vector<std::vector<long>> constraints;
  if (level >= 2) constraints = bracket_image_vectors(G);
  for (long total = 1; total <= maxComplexity; ++total) {
    std::vector<std::vector<long>> ms;
    std::vector<long> cur(static_cast<std::size_t>(width), 0);
    enumerate_m(0, total, cur, ms);
    for (auto& m : ms) {
      bool ok = true;
      for (const auto& v : constraints) {
        long dot = 0;
        for (std::size_t j = 0; j < m.size(); ++j) dot += m[j] * v[j];
        if (dot != 0) {
          ok = false;
          break;
        }
      }
      if (ok) out.push_back(HorizontalCharacter{level, std::move(m)});
    }
  }
  return out;
}

double character_eval(const FilteredGroup& G, const HorizontalCharacter& chi, const Coords<double>& g) {
  detail::check_coords(G, g);
  int begin = G.blockStart(chi.level);
  double acc = 0.0;
  for (std::size_t j = 0; j < chi.m.size(); ++j) acc += static_cast<double>(chi.m[j]) * g[static_cast<std::size_t>(begin) + j];
  return acc;
}

Rat character_eval_exact(const FilteredGroup& G, const HorizontalCharacter& chi, const Coords<Rat>& g) {
  detail::check_coords(G, g);
  int begin = G.blockStart(chi.level);
  Rat acc = 0;
  for (std::size_t j = 0; j < chi.m.size(); ++j) acc += Rat(chi.m[j]) * g[static_cast<std::size_t>(begin) + j];
  return acc;
}

namespace {

template <class S>
int irr_score_impl(const PolySeq<S>& seq, long N, int maxA) {
  if (maxA < 1) throw std::invalid_argument("irrationality_score: maxA >= 1");
  if (N < 1) throw std::invalid_argument("irrationality_score: N >= 1");
  const FilteredGroup& G = seq.group;
  int cap = static_cast<int>(std::min<long>(maxA, N));
  int score = 0;
  for (int A = 1; A <= cap; ++A) {
    bool ok = true;
    for (int i = 1; i <= G.step && ok; ++i) {
      for (const auto& chi : horizontal_characters(G, i, A)) {
        double dist;
        if constexpr (std::is_same_v<S, Rat>) {
          dist = to_double(rat_dist_to_int(character_eval_exact(G, chi, seq.taylor[static_cast<std::size_t>(i)])));
        } else {
          double val = character_eval(G, chi, seq.taylor[static_cast<std::size_t>(i)]);
          dist = std::abs(val - std::round(val));
        }
        if (dist < static_cast<double>(A) / std::pow(static_cast<double>(N), i)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) break;
    score = A;
  }
  return score;
}

}  // namespace

int irrationality_score(const PolySeq<double>& seq, long N, int maxA) { return irr_score_impl(seq, N, maxA); }
int irrationality_score(const PolySeq<Rat>& seq, long N, int maxA) { return irr_score_impl(seq, N, maxA); }

FactorParts factor_coefficient(const FilteredGroup& G, int level, const Coords<double>& g_i,
                               const HorizontalCharacter& chi, long N) {
  detail::check_coords(G, g_i);
  if (chi.level != level) throw std::invalid_argument("character level does not match the coefficient level");
  if (N < 1) throw std::invalid_argument("factor_coefficient: N >= 1");
  if (chi.complexity() == 0) throw std::invalid_argument("decomposition infeasible: trivial character");
  for (int j = 0; j < G.blockStart(level); ++j) {
    if (std::abs(g_i[static_cast<std::size_t>(j)]) > 1e-9) {
      throw std::invalid_argument("coefficient must lie in the level's filtration subgroup");
    }
  }
  int begin = G.blockStart(level);

  double val = character_eval(G, chi, g_i);
  Rat approx = best_rational_approx(Rat(val), BigInt(N));
  double eps = val - to_double(approx);

  long m2 = 0;
  std::vector<BigInt> mbig;
  for (long mj : chi.m) {
    m2 += mj * mj;
    mbig.push_back(BigInt(mj));
  }
  BigInt gcd_m = vec_gcd(mbig);
  std::vector<BigInt> w = bezout_vector(mbig);

  Coords<double> beta = g_identity<double>(G);
  for (std::size_t j = 0; j < chi.m.size(); ++j) {
    beta[static_cast<std::size_t>(begin) + j] = eps * static_cast<double>(chi.m[j]) / static_cast<double>(m2);
  }
  Coords<Rat> gamma = g_identity<Rat>(G);
  Rat scale = approx / Rat(gcd_m);
  for (std::size_t j = 0; j < w.size(); ++j) {
    gamma[static_cast<std::size_t>(begin) + j] = scale * Rat(w[j]);
  }

  Coords<double> gamma_d = to_double_coords(gamma);
  Coords<double> gprime = g_mul(G, g_mul(G, g_inv(G, beta), g_i), g_inv(G, gamma_d));

  BigInt L = 1;
  for (const Rat& c : gamma) L = boost::multiprecision::lcm(L, rat_den(c));
  BigInt cap_big = 2 * L * L;
  long cap = cap_big > kMaxPeriodSearch ? kMaxPeriodSearch : cap_big.convert_to<long>();
  long period = 0;
  for (long qq = 1; qq <= cap && period == 0; ++qq) {
    if (in_lattice(G, g_pow(G, gamma, Rat(qq)))) period = qq;
  }
  if (period == 0) throw std::logic_error("rational part has no lattice period within the search bound");

  FactorParts out;
  out.beta = std::move(beta);
  out.gprime = std::move(gprime);
  out.gamma = std::move(gamma);
  out.gammaPeriod = period;
  out.approx = approx;
  out.epsilon = eps;
  return out;
}

namespace {

template <class S>
double cinf_impl(const std::map<std::vector<int>, S>& coeffs, long N) {
  if (N < 1) throw std::invalid_argument("cinf_norm: N >= 1");
  double sup = 0.0;
  for (const auto& [idx, c] : coeffs) {
    long total = 0;
    for (int v : idx) {
      if (v < 0) throw std::invalid_argument("cinf_norm: multi-index entries must be >= 0");
      total += v;
    }
    if (total == 0) continue;
    double dist;
    if constexpr (std::is_same_v<S, Rat>) {
      dist = to_double(rat_dist_to_int(c));
    } else {
      dist = std::abs(c - std::round(c));
    }
    sup = std::max(sup, std::pow(static_cast<double>(N), static_cast<double>(total)) * dist);
  }
  return sup;
}

}  // namespace

double cinf_norm(const std::map<std::vector<int>, double>& coeffs, long N) { return cinf_impl(coeffs, N); }
double cinf_norm(const std::map<std::vector<int>, Rat>& coeffs, long N) { return cinf_impl(coeffs, N); }

}  // namespace hofa
