#pragma once

#include "hofa/domain.hpp"
#include "hofa/forms.hpp"
#include "hofa/nilgroup.hpp"

#include <functional>
#include <optional>

namespace hofa {

/// Function on the nilmanifold, evaluated at reduced second-kind coordinates
/// in [0,1)^dim. `evalLocal`, when set, additionally receives the local
/// factors (n mod q, n/N) of a virtual nilsequence.
struct LipschitzFunction {
  std::function<cd(const Coords<double>&)> eval;
  double lipschitz = 1.0;
  std::function<cd(const Coords<double>&, long, double)> evalLocal;
  long q = 1;
};

/// Spot check of the declared Lipschitz constant on random reduced pairs
/// against the quotient metric; returns the worst ratio observed.
double lipschitz_spot_check(const FilteredGroup& G, const LipschitzFunction& F, int pairs, unsigned long seed);

/// Affine sublattice n0 + Z b_1 + ... + Z b_D of Z^D (full rank required).
struct LatticeCoset {
  std::vector<long> n0;
  std::vector<std::vector<long>> basis;
};

/// Index [Z^D : Lambda] = |det(basis)|.
long lattice_index(const LatticeCoset& coset);
bool coset_contains(const LatticeCoset& coset, const std::vector<long>& n);

/// Axis box [lo, hi] optionally cut by half-planes a.n <= b.
struct ConvexBody {
  std::vector<long> lo, hi;
  std::vector<std::pair<std::vector<long>, long>> halfplanes;

  bool contains(const std::vector<long>& n) const;
  /// Real volume; half-plane cuts are measured by deterministic Monte Carlo.
  double volume() const;
};

/// Average of F over the reduced orbit points g(n) Gamma for n in the
/// intersection of the coset, the body, and [-N, N] (default body [1, N]).
cd orbit_average(const LipschitzFunction& F, const PolySeq<double>& seq, long N,
                 const std::optional<LatticeCoset>& coset = {}, const std::optional<ConvexBody>& body = {});

/// Multi-parameter variant over Z^D, D <= 3; the orbit is given by Taylor
/// coefficients indexed by multi-indices.
struct MultiPolySeqD {
  FilteredGroup group;
  std::vector<std::pair<std::vector<long>, Coords<double>>> coeffs;
  int D = 1;
};

cd orbit_average_multi(const LipschitzFunction& F, const MultiPolySeqD& seq, long N,
                       const std::optional<LatticeCoset>& coset = {}, const std::optional<ConvexBody>& body = {});

/// Monte Carlo Haar integral: uniform second-kind coordinates in [0,1)^dim
/// push Lebesgue measure forward to Haar for triangular nilpotent
/// coordinates. Returns (mean, standard error).
std::pair<cd, double> haar_integral_mc(const LipschitzFunction& F, const FilteredGroup& G, long samples,
                                       unsigned long seed);

/// The group of orbit tuples of polynomial sequences along the form system:
/// every member factors uniquely as prod_j h_j^{v_j} with v_j the j-th flag
/// basis row and h_j in G_(degree of row j).
struct LeibmanGroup {
  FilteredGroup base;
  LinearFormSystem psi;
  PowerFlag flag;
  long dimension = 0;

  /// Flag basis row as doubles, for sampling paths.
  std::vector<double> row_d(std::size_t j) const {
    std::vector<double> out;
    for (const BigInt& v : flag.basis.rows[j]) out.push_back(v.convert_to<double>());
    return out;
  }
};

LeibmanGroup leibman_group(const FilteredGroup& G, const LinearFormSystem& psi);

/// Unique slot factorization of a tuple, or nullopt when the tuple is not a
/// member. Exact arithmetic; the peeling follows the echelon pivots.
std::optional<std::vector<Coords<Rat>>> leibman_factorize(const LeibmanGroup& LG,
                                                          const std::vector<Coords<Rat>>& tuple);
bool leibman_contains(const LeibmanGroup& LG, const std::vector<Coords<Rat>>& tuple);

/// Orbit tuple (g(psi_1(n)), ..., g(psi_t(n))).
template <class S>
std::vector<Coords<S>> leibman_orbit_point(const PolySeq<S>& seq, const LinearFormSystem& psi,
                                           const std::vector<long>& n) {
  std::vector<long> vals = eval_forms(psi, n);
  std::vector<Coords<S>> out;
  out.reserve(vals.size());
  for (long a : vals) out.push_back(taylor_eval(seq, a));
  return out;
}

/// Uniform samples on the coset base^Delta G^Psi / Gamma^Psi: per-slot
/// uniform [0,1) block coordinates, multiplied in slot order, left-translated
/// by base and reduced componentwise.
std::vector<std::vector<Coords<double>>> leibman_haar_sample(const LeibmanGroup& LG, const Coords<double>& base,
                                                             long samples, unsigned long seed);

/// Streaming mean and standard error of F over Haar samples of the coset.
std::pair<cd, double> leibman_haar_average(const LeibmanGroup& LG, const Coords<double>& base,
                                           const std::function<cd(const std::vector<Coords<double>>&)>& F,
                                           long samples, unsigned long seed);

struct CountingReport {
  cd empirical;       // lattice sum normalized by vol(P)/[Z^D:Lambda]
  cd haar;            // Monte Carlo Haar average over the orbit closure coset
  double haarStderr = 0.0;
  double residual = 0.0;
  long points = 0;    // enumerated lattice points
  double volume = 0.0;
  long latticeIndex = 1;
};

/// Both sides of the counting comparison for a product test function
/// F(x_1..x_t) = prod_j factors[j](x_j): the exact enumeration average over
/// the coset-and-body lattice points against the Haar average on the Leibman
/// coset, with the vol(P)/[Z^D:Lambda] normalization.
CountingReport counting_residual(const std::vector<std::function<cd(const Coords<double>&)>>& factors,
                                 const PolySeq<double>& seq, const LinearFormSystem& psi, long N,
                                 const std::optional<LatticeCoset>& coset, const std::optional<ConvexBody>& body,
                                 long samples, unsigned long seed);

struct EquidistWitness {
  HorizontalCharacter eta;
  double cinfNorm = 0.0;
  double discrepancy = 0.0;
};

/// Tests the orbit against a fixed family of reduced-coordinate characters
/// (frequencies 1..3 per coordinate and weight-1 pair sums). When the worst
/// empirical mean exceeds delta, returns the level-1 character of complexity
/// <= maxComplexity whose composed phase polynomial has the smallest
/// smoothness norm at scale N; otherwise nullopt.
std::optional<EquidistWitness> equidist_witness(const PolySeq<double>& seq, long N, double delta,
                                                long maxComplexity);

/// Worst family-member discrepancy used by equidist_witness.
double orbit_discrepancy(const PolySeq<double>& seq, long N);

/// Vertical Fourier coefficient F_hat(x, xi) = avg over the 1-dim central
/// torus of e(-xi rho) F(exp(rho X_last) x), by uniform quadrature at the
/// given power-of-two resolution.
LipschitzFunction vertical_fourier(const FilteredGroup& G, const LipschitzFunction& F, long xi, long resolution);

/// Central element with last coordinate c.
Coords<double> central_element(const FilteredGroup& G, double c);

}  // namespace hofa
