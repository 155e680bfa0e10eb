#include "hofa/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace hofa {

namespace {

/// FFTW planner state is not thread-safe; all plan use is serialized here.
/// Plans (with their aligned buffers) are cached per (size, sign).
struct PlanSlot {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
};

std::mutex g_mutex;
std::map<std::pair<std::size_t, int>, PlanSlot> g_plans;

PlanSlot& plan_for(std::size_t n, int sign) {
  auto key = std::make_pair(n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  PlanSlot slot;
  slot.in = fftw_alloc_complex(n);
  slot.out = fftw_alloc_complex(n);
  if (slot.in == nullptr || slot.out == nullptr) throw std::bad_alloc();
  slot.plan = fftw_plan_dft_1d(static_cast<int>(n), slot.in, slot.out,
                               sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  if (slot.plan == nullptr) throw std::runtime_error("fft: plan creation failed");
  return g_plans.emplace(key, slot).first->second;
}

}  // namespace

std::vector<cd> dft(const std::vector<cd>& in, int sign) {
  if (in.empty()) return {};
  if (in.size() > static_cast<std::size_t>(1) << 28) throw std::invalid_argument("fft: size too large");
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanSlot& slot = plan_for(in.size(), sign);
  for (std::size_t i = 0; i < in.size(); ++i) {
    slot.in[i][0] = in[i].real();
    slot.in[i][1] = in[i].imag();
  }
  fftw_execute(slot.plan);
  std::vector<cd> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = cd{slot.out[i][0], slot.out[i][1]};
  return out;
}

std::vector<cd> fourier_coefficients(const std::vector<cd>& values) {
  std::vector<cd> out = dft(values, -1);
  double inv = 1.0 / static_cast<double>(values.size());
  for (cd& v : out) v *= inv;
  return out;
}

}  // namespace hofa
