#pragma once

#include "hofa/domain.hpp"
#include "hofa/forms.hpp"
#include "hofa/nilgroup.hpp"
#include "hofa/orbits.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hofa {

/// Enumeration box for a multilinear pattern average. The cyclic variant
/// averages every variable over Z_N and wraps form values mod N; the interval
/// variant averages over explicit inclusive ranges (default [1, N] for every
/// variable) and treats the functions as zero outside [1, N].
struct PatternDomain {
  DomainKind kind = DomainKind::Cyclic;
  long N = 0;
  /// Interval variant only: one inclusive range per variable; empty means
  /// [1, N] for every variable.
  std::vector<std::pair<long, long>> ranges;
};

PatternDomain cyclic_pattern_domain(long N);
PatternDomain interval_pattern_domain(long N, std::vector<std::pair<long, long>> ranges = {});
/// The box behind k-term progression counts: n in [1, N], d in [-N, N].
PatternDomain ap_pattern_domain(long N);

/// E_n prod_i f_i(psi_i(n)) over the box, by exact enumeration (D <= 3).
/// Arity must match (one function per form) and every function must live on
/// the box's domain kind and modulus.
cd multilinear_average(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                       const PatternDomain& dom);

/// Per-difference progression counts of an indicator A on the interval [N]:
/// raw counts #{n : n + id in [1, N] and A(n + id) = 1 for 0 <= i < k},
/// one entry for each d in [-N, N]. k in 1..5; input must be 0/1-valued.
std::map<long, long> ap_profile_counts(const SampledFunction& A, int k);

/// Normalized profile d -> E_n prod_i 1_A(n + id), the counts above over N.
std::map<long, double> ap_profile(const SampledFunction& A, int k);

/// Summary of one pattern average: the system, its value, an optional
/// per-difference profile, and the uniformity-norm bound data.
struct PatternReport {
  LinearFormSystem system;
  cd value{0.0, 0.0};
  std::map<long, double> perDifference;
  /// min_i U^{s+1} norm over the inputs and the norm index s+1; k = 0 when
  /// the system is not pairwise independent (no uniformity bound applies).
  double minGowers = 0.0;
  int gowersK = 0;
  std::string metadata;
};

/// Computes the average and, for pairwise independent systems, the min
/// U^{s+1} bound at s = cs_complexity(psi). withProfile additionally records
/// the per-difference profile (requires a k-AP system, identical indicator
/// inputs on an interval domain).
PatternReport make_pattern_report(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                                  const PatternDomain& dom, bool withProfile = false);

/// Generalized von Neumann comparison: lhs = |Lambda_psi|, rhs = min_i
/// ||f_i||_{U^{s+1}} at s = cs_complexity(psi).
struct GvnReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  int s = 0;
  /// True when the box is cyclic and psi is the k-term progression system;
  /// on that path the Cauchy-Schwarz argument gives constant 1 and `pass`
  /// asserts lhs <= rhs + 1e-6. Off it, `pass` stays true and only the
  /// ratio is recorded (no constant is claimed).
  bool apPath = false;
  bool pass = true;
};

/// Inputs must be 1-bounded; s is derived from the system.
GvnReport gvn_check(const std::vector<SampledFunction>& fs, const LinearFormSystem& psi,
                    const PatternDomain& dom);

/// Weighted progression average |E_{n in [N], d in [-N, N]} w(d) prod_i
/// f_i(n + c_i d)| against min_i ||f_i||_{U^{k-1}}. The empirical ratio is
/// recorded without asserting a constant.
struct TwistedGvnReport {
  int k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// Set when a character weight e(theta d) was declared: the weight is
  /// absorbed into two modulated functions, and U^2 invariance of the
  /// modulation ||f_1|| = ||f_1 e(a n)|| is verified to 1e-9.
  bool modulationChecked = false;
  double modulationError = 0.0;
};

/// k = fs.size() in {3, 4}; c holds k distinct shift coefficients. The weight
/// is any bounded map on d (nilsequence weights come from orbit evaluations).
/// cyclic = false follows the interval convention with zero extension;
/// cyclic = true wraps all arguments mod N. characterTheta declares
/// w(d) = e(theta d) structure for the k = 3 invariance check.
TwistedGvnReport twisted_gvn_check(const std::vector<SampledFunction>& fs, const std::vector<long>& c,
                                   const std::function<cd(long)>& weight, bool cyclic = false,
                                   std::optional<double> characterTheta = std::nullopt);

/// Nonnegative difference weight mu on [-N, N], normalized so the measured
/// mean E_{d in [-N, N]} mu(d) is exactly 1; the sup and support size are the
/// recorded certificates.
struct BhkWeight {
  std::string kind;
  long N = 0;
  double epsPrime = 0.0;
  /// mu(d) at index d + N, d in [-N, N].
  std::vector<double> mu;
  long support = 0;
  double mean = 0.0;
  double sup = 0.0;

  double at(long d) const;
};

/// Bohr-window weight for 3-term progressions: a Lipschitz tent on the
/// distance max_j ||theta_j d||, equal to 1 when the distance is at most
/// epsPrime/2, vanishing beyond epsPrime, restricted to |d| <= epsPrime * N.
/// Throws when the window holds no difference besides d = 0.
BhkWeight bhk_weight_k3(const std::vector<double>& theta, double epsPrime, long N);

/// Tent cutoff on the torus [0,1)^m: prod_j max(0, 1 - ||u_j|| / radius).
std::function<double(const std::vector<double>&)> torus_tent(double radius);

/// Degree-2 weight mu(d) = c 1_{|d| <= epsPrime N} phi(d * pi(g1)), where
/// pi(g1) is the weight-1 block of the sequence's degree-1 Taylor coefficient
/// and phi a nonnegative cutoff on that torus. Throws when no difference
/// besides d = 0 is weighted.
BhkWeight bhk_weight_k4(const FilteredGroup& G, const PolySeq<double>& seq,
                        const std::function<double(const std::vector<double>&)>& phi, double epsPrime,
                        long N);

/// Outcome of the weighted-count verification on a synthetic set.
struct BhkReport {
  int k = 0;
  long N = 0;
  double eps = 0.0;
  std::string construction;
  /// Measured density of the constructed set.
  double alpha = 0.0;
  /// E_{n in [N], d in [-N, N]} prod_i 1_A(n + id) mu(d).
  double weightedCount = 0.0;
  /// Reference threshold alpha^k - eps.
  double threshold = 0.0;
  /// Fraction of d in [-N, N] whose raw count reaches (alpha^k - eps) N.
  double goodFraction = 0.0;
  double weightMean = 0.0;
  double weightSup = 0.0;
  long weightSupport = 0;
  /// k = 4 only: sum_xi |Fhat(g0, xi)|^2 |Fhat(g0, 3 xi)|^2 >= |Fhat(g0, 0)|^4
  /// at every sampled base point, and the minimal margin observed.
  bool positivityChecked = false;
  bool positivityOk = false;
  double positivityMargin = 0.0;
};

/// Builds a known structured set A on [N], the matching difference weight,
/// and the weighted progression count. Constructions: k = 3 "bohr" with
/// params alpha (frequency), delta (membership radius ||alpha n|| <= delta),
/// noise (flip probability); k = 4 "heisenberg" with params a, b (weight-1
/// frequencies) and level (super-level cutoff). Format
/// "name:key=value,key=value". k outside {3, 4} is rejected; the k >= 5
/// analogue is false in general (Ruzsa-type counterexample), so it is
/// excluded by design rather than attempted.
BhkReport bhk_verify_synthetic(int k, const std::string& construction, double eps, long N);

/// Tabulation of |Lambda| against U^{s+1} norms over a function family.
struct GwReport {
  int s = 0;
  bool hypothesis = false;
  std::string skipReason;
  std::vector<double> norms;
  std::vector<double> lambdas;
  /// Spearman rank correlation between the two columns.
  double spearman = 0.0;
  /// max_i |Lambda_i| / norm_i over entries with a nonzero norm.
  double maxRatio = 0.0;
};

/// Gated on top_power_independence(psi, s): when the hypothesis fails the
/// check is skipped with a reason. Otherwise every family member f is placed
/// in all t slots of the cyclic average and |Lambda| is tabulated against
/// ||f||_{U^{s+1}}.
GwReport gw_statement_check(const LinearFormSystem& psi, int s,
                            const std::vector<SampledFunction>& family);

}  // namespace hofa
