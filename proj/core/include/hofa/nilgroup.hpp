#pragma once

#include "hofa/rational.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hofa {

/// Filtered nilpotent group of step <= 2 (or an abelian group with a longer
/// filtration) in Mal'cev coordinates of the second kind:
///   g = exp(t_d X_d) ... exp(t_1 X_1),
/// so the integer-coordinate set is exactly the lattice subgroup. Coordinates
/// are grouped by weight: the first dim - d_2 coordinates span the degree-1
/// block, the rest the degree-2 block (for abelian groups the blocks follow
/// the declared filtration with no bracket terms).
struct FilteredGroup {
  int dim = 1;
  int step = 1;
  /// dim G_(i) for i = 0..step; entries nonincreasing with d_0 = d_1 = dim.
  std::vector<int> filtrationDims;
  /// Bracket data [X_i, X_j] = c X_k stored 0-based as (i, j, k, c) with
  /// i < j, X_i and X_j of weight 1 and X_k of weight 2. Integer c keeps the
  /// integer points a subgroup.
  std::vector<std::array<long, 4>> structureConstants;
  std::vector<std::string> labels;

  /// Weight of the 0-based coordinate j: the largest i with j >= dim - d_i.
  int weight(int j) const {
    int w = 1;
    for (int i = 1; i <= step; ++i) {
      if (j >= dim - filtrationDims[static_cast<std::size_t>(i)]) w = i;
    }
    return w;
  }

  /// First 0-based index of the G_(i) coordinate block (last d_i coords).
  int blockStart(int i) const {
    if (i <= 0) return 0;
    if (i > step) return dim;
    return dim - filtrationDims[static_cast<std::size_t>(i)];
  }

  bool abelian() const { return structureConstants.empty(); }

  friend bool operator==(const FilteredGroup& a, const FilteredGroup& b) {
    return a.dim == b.dim && a.step == b.step && a.filtrationDims == b.filtrationDims &&
           a.structureConstants == b.structureConstants;
  }
};

/// Validates and finalizes a group definition; throws std::invalid_argument
/// with a description of the first violated invariant.
FilteredGroup make_group(int dim, std::vector<int> filtrationDims,
                         std::vector<std::array<long, 4>> structureConstants,
                         std::vector<std::string> labels = {});

/// R/Z with the trivial two-level filtration.
FilteredGroup circle_group();
/// (R/Z)^m, filtration dims (m, m).
FilteredGroup torus_group(int m);
/// 3x3 unipotent upper-triangular group, lower central series filtration
/// (3, 3, 1), bracket [X1, X2] = X3.
FilteredGroup heisenberg_group();

/// JSON round trip; 1-based indices in "structureConstants": [[i,j,k,c],...].
FilteredGroup group_from_json(const nlohmann::json& j);
nlohmann::json group_to_json(const FilteredGroup& G);
/// Parses "circle", "torus(m)", "heisenberg", or a path to a JSON file.
FilteredGroup group_from_spec(const std::string& spec);

template <class S>
struct PolySeq;

/// JSON round trip for a real-coefficient sequence: {"group": <spec string or
/// group object>, "taylor": [[g0 coords], [g1 coords], ...]}; coefficient
/// block support is validated on load.
PolySeq<double> poly_seq_from_json(const nlohmann::json& j);
nlohmann::json poly_seq_to_json(const PolySeq<double>& seq);

template <class S>
using Coords = std::vector<S>;

namespace detail {
inline long scalar_floor(double x) { return static_cast<long>(std::floor(x)); }
inline long scalar_floor(const Rat& x) { return static_cast<long>(rat_floor(x)); }
inline double scalar_to_double(double x) { return x; }
inline double scalar_to_double(const Rat& x) { return to_double(x); }
inline bool scalar_near_zero(double x) { return std::abs(x) <= 1e-9; }
inline bool scalar_near_zero(const Rat& x) { return x == 0; }
template <class S>
S scalar_from_bigint(const BigInt& v) {
  if constexpr (std::is_same_v<S, Rat>) {
    return Rat(v);
  } else {
    return v.template convert_to<double>();
  }
}
}  // namespace detail

template <class S>
Coords<S> g_identity(const FilteredGroup& G) {
  return Coords<S>(static_cast<std::size_t>(G.dim), S(0));
}

namespace detail {
template <class S>
void check_coords(const FilteredGroup& G, const Coords<S>& a) {
  if (a.size() != static_cast<std::size_t>(G.dim)) throw std::invalid_argument("group mismatch: coordinate size");
}

/// Bilinear BCH correction into the degree-2 block:
/// beta(t, u)_k = sum over stored (i, j, k, c) of c * t_i * u_j.
template <class S>
Coords<S> bch_beta(const FilteredGroup& G, const Coords<S>& t, const Coords<S>& u) {
  Coords<S> out(static_cast<std::size_t>(G.dim), S(0));
  for (const auto& sc : G.structureConstants) {
    std::size_t i = static_cast<std::size_t>(sc[0]);
    std::size_t j = static_cast<std::size_t>(sc[1]);
    std::size_t k = static_cast<std::size_t>(sc[2]);
    out[k] += S(sc[3]) * t[i] * u[j];
  }
  return out;
}
}  // namespace detail

/// Exact group law: weight-1 coordinates add; the degree-2 block picks up the
/// bilinear bracket correction.
template <class S>
Coords<S> g_mul(const FilteredGroup& G, const Coords<S>& a, const Coords<S>& b) {
  detail::check_coords(G, a);
  detail::check_coords(G, b);
  Coords<S> beta = detail::bch_beta(G, a, b);
  Coords<S> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k] + beta[k];
  return out;
}

template <class S>
Coords<S> g_inv(const FilteredGroup& G, const Coords<S>& a) {
  detail::check_coords(G, a);
  Coords<S> beta = detail::bch_beta(G, a, a);
  Coords<S> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = -a[k] + beta[k];
  return out;
}

/// g^x = exp(x log g), exact at step <= 2 for any scalar exponent:
/// weight-1 coordinates scale by x, the degree-2 block picks up
/// (x^2 - x)/2 times the bracket square.
template <class S>
Coords<S> g_pow(const FilteredGroup& G, const Coords<S>& a, const S& x) {
  detail::check_coords(G, a);
  Coords<S> beta = detail::bch_beta(G, a, a);
  S corr = (x * x - x) / S(2);
  Coords<S> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = x * a[k] + corr * beta[k];
  return out;
}

/// First-kind (exponential) coordinates of g: log g.
template <class S>
Coords<S> g_log(const FilteredGroup& G, const Coords<S>& a) {
  detail::check_coords(G, a);
  Coords<S> beta = detail::bch_beta(G, a, a);
  Coords<S> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - beta[k] / S(2);
  return out;
}

/// Inverse of g_log: second-kind coordinates of exp(z).
template <class S>
Coords<S> g_exp(const FilteredGroup& G, const Coords<S>& z) {
  detail::check_coords(G, z);
  Coords<S> beta = detail::bch_beta(G, z, z);
  Coords<S> out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k] + beta[k] / S(2);
  return out;
}

/// Canonical right-coset representative: rep = g * gamma with gamma in the
/// integer lattice and every rep coordinate in [0, 1). The sweep clears the
/// weight-1 coordinates by right multiplications, then the central block by
/// integer shifts; the result depends only on the coset g Gamma.
template <class S>
std::pair<Coords<S>, Coords<S>> g_reduce(const FilteredGroup& G, const Coords<S>& a) {
  detail::check_coords(G, a);
  Coords<S> rep = a;
  Coords<S> gamma = g_identity<S>(G);
  int b2 = G.step >= 2 && !G.abelian() ? G.blockStart(2) : G.dim;
  for (int j = 0; j < b2; ++j) {
    long m = detail::scalar_floor(rep[static_cast<std::size_t>(j)]);
    if (m == 0) continue;
    Coords<S> shift = g_identity<S>(G);
    shift[static_cast<std::size_t>(j)] = S(-m);
    rep = g_mul(G, rep, shift);
    gamma = g_mul(G, gamma, shift);
  }
  for (int j = b2; j < G.dim; ++j) {
    long m = detail::scalar_floor(rep[static_cast<std::size_t>(j)]);
    if (m == 0) continue;
    rep[static_cast<std::size_t>(j)] -= S(m);
    gamma[static_cast<std::size_t>(j)] -= S(m);
  }
  return {std::move(rep), std::move(gamma)};
}

/// Membership in the lattice Gamma (integer second-kind coordinates).
inline bool in_lattice(const FilteredGroup& G, const Coords<Rat>& a) {
  detail::check_coords(G, a);
  for (const Rat& c : a) {
    if (!is_integer(c)) return false;
  }
  return true;
}

/// Right-invariant-style metric: max absolute first-kind coordinate of
/// g^{-1} h.
double g_dist(const FilteredGroup& G, const Coords<double>& a, const Coords<double>& b);

/// Metric on G/Gamma: reduce both points and minimize g_dist over the 3^dim
/// lattice translates with coordinates in {-1, 0, 1}. dim <= 10 enforced.
double g_dist_quotient(const FilteredGroup& G, const Coords<double>& a, const Coords<double>& b);

/// Eccentric ball membership: |log(g)_j| <= r^{s+1-w_j} for each coordinate,
/// where w_j is the coordinate weight and s the group step.
bool ball_contains(const FilteredGroup& G, const Coords<double>& g, double r);

/// Uniform sample from the eccentric ball box in first-kind coordinates.
Coords<double> ball_sample(const FilteredGroup& G, double r, std::mt19937_64& rng);

/// Polynomial sequence in Taylor form g(n) = g_0 g_1^C(n,1) ... g_s^C(n,s),
/// with the degree-i coefficient supported on the G_(i) coordinate block.
template <class S>
struct PolySeq {
  FilteredGroup group;
  std::vector<Coords<S>> taylor;

  int degree() const { return static_cast<int>(taylor.size()) - 1; }
};

/// Exact binomial coefficient for integer (possibly negative) n.
BigInt binom_big(long n, int k);

namespace detail {
template <class S>
void check_block_support(const FilteredGroup& G, Coords<S>& g, int level, const char* what) {
  int start = G.blockStart(level);
  for (int j = 0; j < start; ++j) {
    S& v = g[static_cast<std::size_t>(j)];
    if (!scalar_near_zero(v)) throw std::invalid_argument(what);
    v = S(0);
  }
}

template <class S>
Coords<S> eval_prefix(const FilteredGroup& G, const std::vector<Coords<S>>& taylor, std::size_t count, long n) {
  Coords<S> acc = count > 0 ? taylor[0] : g_identity<S>(G);
  for (std::size_t i = 1; i < count; ++i) {
    S c = scalar_from_bigint<S>(binom_big(n, static_cast<int>(i)));
    acc = g_mul(G, acc, g_pow(G, taylor[i], c));
  }
  return acc;
}
}  // namespace detail

/// Builds a sequence after validating block support of each coefficient.
/// Short coefficient lists are padded with the identity up to degree = step.
template <class S>
PolySeq<S> make_poly_seq(const FilteredGroup& G, std::vector<Coords<S>> taylor) {
  if (taylor.empty() || taylor.size() > static_cast<std::size_t>(G.step) + 1) {
    throw std::invalid_argument("poly sequence needs 1..step+1 Taylor coefficients");
  }
  while (taylor.size() < static_cast<std::size_t>(G.step) + 1) taylor.push_back(g_identity<S>(G));
  for (std::size_t i = 0; i < taylor.size(); ++i) {
    detail::check_coords(G, taylor[i]);
    if (i >= 1) detail::check_block_support(G, taylor[i], static_cast<int>(i), "Taylor coefficient outside its filtration block");
  }
  return PolySeq<S>{G, std::move(taylor)};
}

template <class S>
Coords<S> taylor_eval(const PolySeq<S>& seq, long n) {
  return detail::eval_prefix(seq.group, seq.taylor, seq.taylor.size(), n);
}

/// Multi-parameter Taylor product over Z^D: coefficients are (multi-index,
/// element) pairs multiplied in the given order with multi-binomial exponents
/// prod_j C(n_j, i_j).
template <class S>
Coords<S> taylor_eval_multi(const FilteredGroup& G,
                            const std::vector<std::pair<std::vector<long>, Coords<S>>>& coeffs,
                            const std::vector<long>& n) {
  Coords<S> acc = g_identity<S>(G);
  for (const auto& [idx, g] : coeffs) {
    if (idx.size() != n.size()) throw std::invalid_argument("multi-index dimension mismatch");
    BigInt c = 1;
    for (std::size_t j = 0; j < idx.size(); ++j) c *= binom_big(n[j], static_cast<int>(idx[j]));
    acc = g_mul(G, acc, g_pow(G, g, detail::scalar_from_bigint<S>(c)));
  }
  return acc;
}

/// Triangular interpolation: recovers the unique Taylor coefficients of a
/// degree <= step sequence from its values at n = 0..step. Coefficients that
/// leave their filtration block raise "interpolation inconsistency".
template <class S>
PolySeq<S> taylor_interpolate(const FilteredGroup& G, const std::vector<Coords<S>>& values) {
  if (values.size() != static_cast<std::size_t>(G.step) + 1) {
    throw std::invalid_argument("interpolation needs step+1 values at n = 0..step");
  }
  std::vector<Coords<S>> taylor;
  taylor.push_back(values[0]);
  for (int j = 1; j <= G.step; ++j) {
    Coords<S> pred = detail::eval_prefix(G, taylor, taylor.size(), j);
    Coords<S> gj = g_mul(G, g_inv(G, pred), values[static_cast<std::size_t>(j)]);
    detail::check_block_support(G, gj, j, "interpolation inconsistency");
    taylor.push_back(std::move(gj));
  }
  return PolySeq<S>{G, std::move(taylor)};
}

namespace detail {
template <class S>
bool coords_close(const Coords<S>& a, const Coords<S>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    double scale = std::max(1.0, std::max(std::abs(scalar_to_double(a[i])), std::abs(scalar_to_double(b[i]))));
    if constexpr (std::is_same_v<S, Rat>) {
      if (a[i] != b[i]) return false;
      (void)scale;
    } else {
      if (std::abs(a[i] - b[i]) > 1e-9 * scale) return false;
    }
  }
  return true;
}

/// Interpolates from a value oracle and cross-checks the Taylor form at a few
/// points beyond the interpolation nodes.
template <class S, class F>
PolySeq<S> interpolate_verified(const FilteredGroup& G, F&& value_at) {
  std::vector<Coords<S>> values;
  for (int n = 0; n <= G.step; ++n) values.push_back(value_at(static_cast<long>(n)));
  PolySeq<S> out = taylor_interpolate(G, values);
  for (long n = G.step + 1; n <= G.step + 3; ++n) {
    if (!coords_close(taylor_eval(out, n), value_at(n))) {
      throw std::invalid_argument("interpolation inconsistency");
    }
  }
  return out;
}
}  // namespace detail

/// Taylor coefficients of n -> a(n) b(n).
template <class S>
PolySeq<S> poly_product(const PolySeq<S>& a, const PolySeq<S>& b) {
  if (!(a.group == b.group)) throw std::invalid_argument("group mismatch");
  return detail::interpolate_verified<S>(a.group, [&](long n) { return g_mul(a.group, taylor_eval(a, n), taylor_eval(b, n)); });
}

/// Taylor coefficients of the discrete derivative n -> g(n+h) g(n)^{-1}.
template <class S>
PolySeq<S> discrete_derivative(const PolySeq<S>& seq, long h) {
  const FilteredGroup& G = seq.group;
  return detail::interpolate_verified<S>(G, [&](long n) { return g_mul(G, taylor_eval(seq, n + h), g_inv(G, taylor_eval(seq, n))); });
}

/// Taylor coefficients of n -> g(q n + r).
template <class S>
PolySeq<S> scaled_sequence(const PolySeq<S>& seq, long q, long r) {
  if (q < 1) throw std::invalid_argument("scaled_sequence: q >= 1 required");
  const FilteredGroup& G = seq.group;
  return detail::interpolate_verified<S>(G, [&](long n) { return taylor_eval(seq, q * n + r); });
}

struct Classification {
  bool smooth = false;
  bool rational = false;
  std::optional<long> period;
};

/// Smoothness ((A, N)-bounded value and increment), A-rationality of every
/// Taylor coefficient, and for rational sequences the orbit period of
/// n -> g(n) Gamma found by direct detection.
Classification classify_sequence(const PolySeq<Rat>& seq, double A, long N);

/// Level-i character determined by an integer vector on the exact-weight-i
/// coordinate block; evaluates to m . (block coordinates) in R/Z.
struct HorizontalCharacter {
  int level = 1;
  std::vector<long> m;

  long complexity() const {
    long s = 0;
    for (long v : m) s += std::labs(v);
    return s;
  }
};

/// All characters of the given level with 0 < complexity <= maxComplexity
/// that annihilate the bracket image blocks (so they factor through the
/// group structure). Lower-central-series filtrations of a nonabelian group
/// therefore have no level >= 2 characters.
std::vector<HorizontalCharacter> horizontal_characters(const FilteredGroup& G, int level, long maxComplexity);

double character_eval(const FilteredGroup& G, const HorizontalCharacter& chi, const Coords<double>& g);
Rat character_eval_exact(const FilteredGroup& G, const HorizontalCharacter& chi, const Coords<Rat>& g);

/// Largest A <= min(maxA, N) such that every character of complexity <= A at
/// every level i keeps ||xi_i(g_i)||_{R/Z} >= A / N^i; 0 if A = 1 already
/// fails. The passing set is downward closed, so a linear scan suffices.
int irrationality_score(const PolySeq<double>& seq, long N, int maxA);
int irrationality_score(const PolySeq<Rat>& seq, long N, int maxA);

/// Output of factor_coefficient: g_i = beta * gprime * gamma with beta tiny
/// (coordinates epsilon-scaled along m), xi(gprime) = 0, and gamma rational
/// with the reported lattice period.
struct FactorParts {
  Coords<double> beta;
  Coords<double> gprime;
  Coords<Rat> gamma;
  long gammaPeriod = 1;
  Rat approx;      // best rational approximation p/q of xi(g_i)
  double epsilon = 0.0;  // xi(g_i) - p/q
};

FactorParts factor_coefficient(const FilteredGroup& G, int level, const Coords<double>& g_i,
                               const HorizontalCharacter& chi, long N);

/// Smoothness norm of a real polynomial on Z^D written in the binomial basis
/// {C(n, i)}: sup over multi-indices |i| >= 1 of N^{|i|} ||c_i||_{R/Z}.
double cinf_norm(const std::map<std::vector<int>, double>& coeffs, long N);
double cinf_norm(const std::map<std::vector<int>, Rat>& coeffs, long N);

/// Coordinate conversions between exact and floating representations.
inline Coords<double> to_double_coords(const Coords<Rat>& a) {
  Coords<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = to_double(a[i]);
  return out;
}

inline PolySeq<double> to_double_seq(const PolySeq<Rat>& seq) {
  PolySeq<double> out;
  out.group = seq.group;
  for (const auto& g : seq.taylor) out.taylor.push_back(to_double_coords(g));
  return out;
}

}  // namespace hofa
