#pragma once

#include "hofa/domain.hpp"

namespace hofa {

/// Uniformity-norm result. norm = max(power, 0)^(1/2^k); `clamped` records
/// that a tiny negative power (within 1e-9) was clamped to zero.
struct GowersResult {
  double norm = 0.0;
  double power = 0.0;
  int k = 0;
  DomainSpec domain;
  bool clamped = false;
};

struct GowersOptions {
  /// Embedding modulus for interval norms; 0 = the default 2^k * N.
  long ntilde = 0;
  /// Degrees above this require opt-in: direct evaluation is O(N^k).
  bool allow_large_k = false;
  /// Serial pairwise summation for bit-stable repeated runs.
  bool deterministic = false;
};

/// Multiplicative derivative on a cyclic domain: g(x) = f(x+h) * conj(f(x)).
SampledFunction mult_derivative(const SampledFunction& f, long h);

/// U^k norm. Cyclic domains get the raw 2^k-fold average; interval domains
/// are evaluated through the zero-padded embedding normalized by the
/// embedded constant. k in 1..4 unless allow_large_k is set.
GowersResult gowers_norm(const SampledFunction& f, int k, const GowersOptions& opts = {});

/// U^2 on a cyclic domain through the fourth-moment spectral identity;
/// O(N log N), agrees with gowers_norm(f, 2) to 1e-9.
GowersResult u2_fft(const SampledFunction& f);

}  // namespace hofa
