#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace hofa {

using cd = std::complex<double>;

/// e(x) = exp(2*pi*i*x).
cd e2pi(double x);

enum class DomainKind { Cyclic, Interval };

/// Sampling domain: residues 0..N-1 of Z/NZ, or the integer interval 1..N.
struct DomainSpec {
  DomainKind kind = DomainKind::Cyclic;
  long N = 1;

  bool operator==(const DomainSpec&) const = default;
  std::size_t size() const { return static_cast<std::size_t>(N); }
  /// Integer argument at sample slot i: i for cyclic, i+1 for interval.
  long point(std::size_t i) const { return kind == DomainKind::Cyclic ? static_cast<long>(i) : static_cast<long>(i) + 1; }
};

std::string domain_to_string(const DomainSpec& d);
DomainSpec domain_from_string(const std::string& s);

/// Finite sampled function with a declared sup-norm bound. The bound is the
/// measured sup of |values| unless a larger one is declared explicitly.
struct SampledFunction {
  DomainSpec domain;
  std::vector<cd> values;
  double bound = 1.0;
};

/// Validates |values| == domain.size() and sets bound = max(sup|f|, declared).
SampledFunction make_sampled(const DomainSpec& d, std::vector<cd> values, double declared_bound = 0.0);

double measured_bound(const SampledFunction& f);

/// <f, g> = E_n f(n) conj(g(n)), normalized by the domain size.
cd inner(const SampledFunction& f, const SampledFunction& g);

/// (E_n |f(n)|^2)^{1/2}.
double l2_norm(const SampledFunction& f);

double linf_norm(const SampledFunction& f);

/// Constant-one function.
SampledFunction ones(const DomainSpec& d);

/// Zero-padded embedding of an interval function into Z/NtildeZ: slot n holds
/// f(n) for 1 <= n <= N, zero elsewhere. Ntilde defaults to 2^k * N and must
/// not be smaller than that.
SampledFunction embed_to_cyclic(const SampledFunction& f, int k, long Ntilde = 0);

}  // namespace hofa
