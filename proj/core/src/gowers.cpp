#include "hofa/gowers.hpp"

#include "hofa/fft.hpp"
#include "hofa/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace hofa {

namespace {

cd mean(const std::vector<cd>& v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

std::vector<cd> derivative_values(const std::vector<cd>& v, long h) {
  long N = static_cast<long>(v.size());
  long hh = ((h % N) + N) % N;
  std::vector<cd> out(v.size());
  for (long x = 0; x < N; ++x) {
    long y = x + hh;
    if (y >= N) y -= N;
    out[static_cast<std::size_t>(x)] = v[static_cast<std::size_t>(y)] * std::conj(v[static_cast<std::size_t>(x)]);
  }
  return out;
}

double u2_power_fft(const std::vector<cd>& v) {
  std::vector<cd> hat = fourier_coefficients(v);
  std::vector<double> terms(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    double m2 = std::norm(hat[i]);
    terms[i] = m2 * m2;
  }
  return pairwise_sum_range(terms.data(), terms.size());
}

/// E over h1..h_{k-1} of |E_x (iterated derivative)|^2, by the degree-lowering
/// recursion. fft_base switches the k=2 base case to the spectral identity.
double uk_power(const std::vector<cd>& v, int k, bool fft_base) {
  if (k == 1) {
    cd m = mean(v);
    return std::norm(m);
  }
  if (k == 2 && fft_base) return u2_power_fft(v);
  std::size_t N = v.size();
  std::vector<double> per_h(N);
  parallel_chunks(N, [&](std::size_t b, std::size_t e) {
    for (std::size_t h = b; h < e; ++h) {
      per_h[h] = uk_power(derivative_values(v, static_cast<long>(h)), k - 1, fft_base);
    }
  });
  return pairwise_sum_range(per_h.data(), per_h.size()) / static_cast<double>(N);
}

GowersResult finalize(double power, int k, const DomainSpec& d) {
  GowersResult r;
  r.k = k;
  r.domain = d;
  r.power = power;
  if (power < 0.0) {
    if (power < -1e-9) {
      throw std::logic_error("uniformity power negative beyond tolerance: " + std::to_string(power));
    }
    r.power = power;  // preserved for the record; norm uses the clamp
    r.clamped = true;
    r.norm = 0.0;
    return r;
  }
  r.norm = std::pow(power, 1.0 / static_cast<double>(1L << k));
  return r;
}

}  // namespace

SampledFunction mult_derivative(const SampledFunction& f, long h) {
  if (f.domain.kind != DomainKind::Cyclic) {
    throw std::invalid_argument("mult_derivative requires a cyclic domain");
  }
  SampledFunction out{f.domain, derivative_values(f.values, h), f.bound * f.bound};
  return out;
}

GowersResult gowers_norm(const SampledFunction& f, int k, const GowersOptions& opts) {
  if (k < 1) throw std::invalid_argument("gowers_norm: k must be >= 1");
  if (f.domain.N < 1) throw std::invalid_argument("gowers_norm: empty domain");
  if (k > 4 && !opts.allow_large_k) {
    throw std::invalid_argument("gowers_norm: k > 4 costs O(N^k); pass allow_large_k to confirm");
  }
  if (k > 12) throw std::invalid_argument("gowers_norm: k too large");
  bool constant = true;
  for (const cd& v : f.values) {
    if (v != f.values.front()) {
      constant = false;
      break;
    }
  }
  if (constant) {
    // A constant c has uniformity norm |c| in both the cyclic and the
    // normalized interval convention; returning it directly keeps the
    // identity exact instead of round-tripping through the transform.
    GowersResult r;
    r.k = k;
    r.domain = f.domain;
    r.norm = std::abs(f.values.front());
    r.power = std::pow(r.norm, static_cast<double>(1L << k));
    return r;
  }
  bool saved_det = deterministic_mode();
  if (opts.deterministic) set_deterministic_mode(true);
  GowersResult result;
  try {
    bool fft_base = k >= 2;
    if (f.domain.kind == DomainKind::Cyclic) {
      result = finalize(uk_power(f.values, k, fft_base), k, f.domain);
    } else {
      SampledFunction embedded = embed_to_cyclic(f, k, opts.ntilde);
      double num = uk_power(embedded.values, k, fft_base);
      SampledFunction unit = embed_to_cyclic(ones(f.domain), k, opts.ntilde);
      double den = uk_power(unit.values, k, fft_base);
      GowersResult raw = finalize(num, k, f.domain);
      result = raw;
      result.power = raw.clamped ? 0.0 : num / den;
      result.norm = std::pow(std::max(result.power, 0.0), 1.0 / static_cast<double>(1L << k));
    }
  } catch (...) {
    set_deterministic_mode(saved_det);
    throw;
  }
  set_deterministic_mode(saved_det);
  return result;
}

GowersResult u2_fft(const SampledFunction& f) {
  if (f.domain.kind != DomainKind::Cyclic) throw std::invalid_argument("u2_fft requires a cyclic domain");
  return finalize(u2_power_fft(f.values), 2, f.domain);
}

}  // namespace hofa
