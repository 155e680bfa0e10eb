#pragma once

#include "hofa/domain.hpp"

#include <vector>

namespace hofa {

/// Unnormalized DFT, any length (prime sizes included).
/// sign = -1: out[k] = sum_x in[x] e(-xk/N); sign = +1: the conjugate kernel.
std::vector<cd> dft(const std::vector<cd>& in, int sign);

/// Normalized Fourier coefficients over Z/NZ: fhat[k] = E_x f(x) e(-xk/N).
std::vector<cd> fourier_coefficients(const std::vector<cd>& values);

}  // namespace hofa
