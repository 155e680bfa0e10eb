#pragma once

#include "hofa/domain.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace hofa {

/// Structured correlate produced by a correlation oracle: a 1-bounded test
/// function sampled on the input's domain, together with the correlation it
/// promises against the input and a complexity tag. Fourier-type oracles also
/// record the frequency and modulus of the phase they returned.
struct StructuredFunction {
  std::vector<cd> values;
  /// Lower bound on |<f, psi>| that this correlate promises; checked by the
  /// energy-increment step, which rejects the oracle on a breach.
  double claimedCorrelation = 0.0;
  double complexityTag = 1.0;
  /// Phase frequency and modulus for oracles that return e(freq*n/modulus);
  /// modulus = 0 when the correlate is not of that shape.
  long frequency = 0;
  long modulus = 0;
  std::string description;
};

/// Inverse-correlation oracle for the U^{s+1} norm. Given a 1-bounded f that
/// the caller declares to satisfy ||f||_{U^{s+1}} >= delta, find() returns a
/// 1-bounded structured psi with |<f, psi>| >= psi.claimedCorrelation > 0, or
/// nullopt (allowed only when the declared bound does not actually hold).
struct CorrelationOracle {
  virtual ~CorrelationOracle() = default;
  /// Degree s: inputs are judged in the U^{s+1} norm.
  virtual int degree() const = 0;
  /// A-priori correlation floor c(delta) for inputs with L2 norm at most 1;
  /// 0 when the oracle promises no constructive floor.
  virtual double correlationBound(double delta) const = 0;
  virtual std::optional<StructuredFunction> find(const SampledFunction& f, double delta) const = 0;
};

/// Degree-1 oracle: the largest Fourier coefficient of the (zero-padded)
/// input. The fourth-moment identity gives max |fhat|^2 >= ||f||_{U^2}^4 /
/// ||f||_2^2, so a declared U^2 bound of delta yields a correlation of at
/// least 0.8 * delta^2 for inputs with L2 norm at most 1.
struct FourierOracleS1 final : CorrelationOracle {
  int degree() const override;
  double correlationBound(double delta) const override;
  std::optional<StructuredFunction> find(const SampledFunction& f, double delta) const override;
};

/// Free-function form of FourierOracleS1::find.
std::optional<StructuredFunction> fourier_oracle_s1(const SampledFunction& f, double delta);

/// Demonstration degree-2 oracle: brute force over the quadratic phases
/// e((a n^2 + b n)/Q), 0 <= a, b < Q. Cost grows as Q^2 * N, so inputs are
/// capped at N <= 512 and Q <= 64. Its floor delta^4/16 is a working
/// threshold for desk-scale inputs, not a proved inverse-theorem constant.
struct QuadraticOracleS2 final : CorrelationOracle {
  long Q = 64;
  explicit QuadraticOracleS2(long q = 64);
  int degree() const override;
  double correlationBound(double delta) const override;
  std::optional<StructuredFunction> find(const SampledFunction& f, double delta) const override;
};

/// Partition of the domain samples into nonempty cells, with the structured
/// functions whose level sets generated it. cellOf[i] is the 0-based cell
/// index of sample slot i; generatorLevels[r] is the level-set count used
/// when generators[r] refined the partition.
struct Factor {
  long N = 0;
  std::vector<int> cellOf;
  int numCells = 0;
  std::vector<StructuredFunction> generators;
  std::vector<int> generatorLevels;
  long complexity() const { return numCells; }
};

/// One-cell factor on N samples.
Factor trivial_factor(long N);
/// N singleton cells; conditioning on it reproduces the function.
Factor singleton_factor(long N);
/// Throws std::invalid_argument on malformed partitions: size mismatch,
/// out-of-range cell index, or an empty cell.
void validate_factor(const Factor& B);

/// Cell-mean projection: constant on every cell of B with the mean of f there.
SampledFunction conditional_expectation(const SampledFunction& f, const Factor& B);
/// ||E(f|B)||_{L2}^2 under the uniform measure; nondecreasing in refinement.
double energy(const SampledFunction& f, const Factor& B);

/// Accounting for one energy-increment step, for reports and tests.
struct IncrementInfo {
  /// Measured |<f - E(f|B), psi>|.
  double correlation = 0.0;
  /// The oracle's claimed floor for that correlation.
  double claimed = 0.0;
  /// energy(f, B') - energy(f, B), equal to ||E(f|B') - E(f|B)||_2^2.
  double measuredIncrement = 0.0;
  /// Cauchy-Schwarz floor max(0, correlation - ||g||_2 * cellVariation)^2;
  /// 0 when the level width swamps the correlation.
  double certifiedIncrement = 0.0;
  long frequency = 0;
  int levels = 0;
  double offset = 0.0;
  int cellsAfter = 0;
};

/// Refines B by the level sets of the oracle's correlate for f - E(f|B).
/// The correlate is rotated to a real 1-bounded phi with <g, phi> equal to
/// the measured correlation, then cut into max(2, ceil(1/delta)) level sets
/// at a threshold offset drawn from rng; up to 5 draws are tried until the
/// energy gain clears the certified floor. Throws std::runtime_error when the
/// oracle returns none, breaches its claimed correlation, or no draw makes
/// progress; std::invalid_argument on non-real input or a malformed factor.
Factor energy_increment_step(const SampledFunction& f, const Factor& B, int s, double delta,
                             const CorrelationOracle& oracle, std::mt19937_64& rng,
                             IncrementInfo* info = nullptr);

struct WeakRegOptions {
  std::uint64_t seed = 0x5eedf00dULL;
  /// Stop refining once the cell count exceeds this; 0 = unlimited.
  long complexityCap = 0;
  /// Maximum increment steps; 0 derives ceil(1/c(eps)^2) from the oracle's
  /// floor, falling back to 4096 when no floor is promised.
  int stepCap = 0;
};

struct WeakRegResult {
  Factor factor;
  /// Measured ||f - E(f|factor)||_{U^{s+1}} on return.
  double residual = 0.0;
  int steps = 0;
  /// True when the complexity cap stopped refinement before residual <= eps.
  bool capped = false;
  std::vector<IncrementInfo> log;
};

/// Iterates energy-increment steps until ||f - E(f|B)||_{U^{s+1}} <= eps,
/// starting from B0 (trivial factor when null). Requires real 1-bounded f.
WeakRegResult weak_regularize(const SampledFunction& f, int s, double eps,
                              const CorrelationOracle& oracle, const Factor* B0 = nullptr,
                              const WeakRegOptions& opts = {});

/// Monotone growth schedule; regularize requires grow(M) >= M >= 1.
struct GrowthFunction {
  std::string name;
  std::function<double(double)> grow;
};

/// Grow(M) = slope * M, slope >= 1.
GrowthFunction growth_linear(double slope = 8.0);
/// Grow(M) = base^M, base > 1.
GrowthFunction growth_exponential(double base = 2.0);
/// Grow(M) = min(2^2^...^2 (floor(M) twos), cap); the cap keeps the schedule
/// usable, since the uncapped tower exhausts any complexity budget at once.
GrowthFunction growth_tower(double cap = 1e4);
/// Parses "linear", "exp"/"exponential", "tower", optionally with a
/// ":value" suffix for the slope, base, or cap. Throws std::invalid_argument.
GrowthFunction growth_from_spec(const std::string& spec);

/// Per-round accounting of the regularization loop.
struct RoundInfo {
  int round = 0;
  /// Complexity parameter M_i entering the round.
  double mParam = 1.0;
  /// Uniformity target 1/Grow(M_i) used for the refinement.
  double deltaUsed = 0.0;
  double energyBefore = 0.0;
  double energyAfter = 0.0;
  double gap = 0.0;
  long cellsBefore = 1;
  long cellsAfter = 1;
  int weakSteps = 0;
  std::vector<long> frequencies;
  /// L2 residual of the trigonometric fit when the stopping rule tried one;
  /// -1 when the energy gap kept the round going.
  double projectionResidual = -1.0;
};

struct RegularizeOptions {
  /// Cell-count budget; exceeding it returns a partial result.
  long complexityCap = 10000;
  std::uint64_t seed = 0x5eedf00dULL;
  /// Harmonics fitted per oracle output in the structured part; 0 = that
  /// generator's own level-set count.
  int harmonicsPerGenerator = 0;
};

/// Three-part decomposition f = fNil + fSml + fUnf.
struct DecompositionResult {
  SampledFunction fNil;
  SampledFunction fSml;
  SampledFunction fUnf;
  /// Complexity parameter M of the selected round; fUnf's budget is 1/Grow(M).
  double M = 1.0;
  /// Cells of the selected factor.
  long factorComplexity = 1;
  /// Oracle outputs times harmonic levels in the structured fit.
  long nilComplexity = 0;
  double l2Sml = 0.0;
  double ukUnf = 0.0;
  double smlBudget = 0.0;
  double unfBudget = 0.0;
  /// Certificates: every fNil value lies in [0,1]; every fNil + fSml value
  /// lies in [0,1]. Checked with exact comparisons on the stored values.
  bool nilIn01 = false;
  bool nilPlusSmlIn01 = false;
  /// max_n |fNil + fSml + fUnf - f|.
  double additivityError = 0.0;
  /// True when the complexity budget or the round budget ran out; the fields
  /// then describe the best completed round and the norm budgets may fail.
  bool budgetOverflow = false;
  int roundsUsed = 0;
  std::vector<RoundInfo> rounds;
};

/// Energy-increment regularization: refines factors with uniformity targets
/// 1/Grow(M_i) until consecutive energies differ by at most eps^2/4 and the
/// structured fit of E(f|B_i) has L2 residual at most eps/2, then returns
/// fNil = clamp01(fit), fSml = E(f|B_{i+1}) - fNil, fUnf = f - E(f|B_{i+1}).
/// On success ||fSml||_2 <= eps and ||fUnf||_{U^{s+1}} <= 1/Grow(M). Requires
/// f real with values in [0,1] and runs at most ceil(4/eps^2) rounds.
DecompositionResult regularize(const SampledFunction& f, int s, double eps,
                               const GrowthFunction& growth, const CorrelationOracle& oracle,
                               const RegularizeOptions& opts = {});

}  // namespace hofa
