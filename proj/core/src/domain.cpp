#include "hofa/domain.hpp"

#include "hofa/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hofa {

cd e2pi(double x) {
  double t = 2.0 * std::numbers::pi * x;
  return {std::cos(t), std::sin(t)};
}

std::string domain_to_string(const DomainSpec& d) {
  return (d.kind == DomainKind::Cyclic ? "cyclic:" : "interval:") + std::to_string(d.N);
}

DomainSpec domain_from_string(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("domain must look like cyclic:N or interval:N");
  std::string kind = s.substr(0, colon);
  long N = 0;
  try {
    N = std::stol(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("bad domain size in '" + s + "'");
  }
  if (N < 1) throw std::invalid_argument("domain size must be >= 1");
  if (kind == "cyclic") return {DomainKind::Cyclic, N};
  if (kind == "interval") return {DomainKind::Interval, N};
  throw std::invalid_argument("unknown domain kind '" + kind + "'");
}

SampledFunction make_sampled(const DomainSpec& d, std::vector<cd> values, double declared_bound) {
  if (values.size() != d.size()) {
    throw std::invalid_argument("value count " + std::to_string(values.size()) +
                                " does not match domain size " + std::to_string(d.N));
  }
  SampledFunction f{d, std::move(values), 0.0};
  f.bound = std::max(measured_bound(f), declared_bound);
  return f;
}

double measured_bound(const SampledFunction& f) {
  double m = 0.0;
  for (const cd& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

cd inner(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.domain == g.domain)) throw std::invalid_argument("inner: domain mismatch");
  std::vector<cd> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f.values[i] * std::conj(g.values[i]);
  return pairwise_sum(terms) / static_cast<double>(f.values.size());
}

double l2_norm(const SampledFunction& f) {
  std::vector<double> terms(f.values.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = std::norm(f.values[i]);
  return std::sqrt(std::max(0.0, pairwise_sum_range(terms.data(), terms.size()) / static_cast<double>(terms.size())));
}

double linf_norm(const SampledFunction& f) { return measured_bound(f); }

SampledFunction ones(const DomainSpec& d) {
  return {d, std::vector<cd>(d.size(), cd{1.0, 0.0}), 1.0};
}

SampledFunction embed_to_cyclic(const SampledFunction& f, int k, long Ntilde) {
  if (f.domain.kind != DomainKind::Interval) throw std::invalid_argument("embed_to_cyclic expects an interval function");
  if (k < 1) throw std::invalid_argument("embed_to_cyclic: k must be >= 1");
  if (k > 20) throw std::invalid_argument("embed_to_cyclic: k too large");
  long min_size = f.domain.N << k;
  if (Ntilde == 0) Ntilde = min_size;
  if (Ntilde < min_size) throw std::invalid_argument("embedding modulus must be at least 2^k * N");
  SampledFunction out{{DomainKind::Cyclic, Ntilde}, std::vector<cd>(static_cast<std::size_t>(Ntilde), cd{0.0, 0.0}), f.bound};
  for (long n = 1; n <= f.domain.N; ++n) out.values[static_cast<std::size_t>(n)] = f.values[static_cast<std::size_t>(n - 1)];
  return out;
}

}  // namespace hofa
