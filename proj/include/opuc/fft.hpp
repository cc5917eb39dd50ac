#pragma once

#include <functional>
#include <vector>

#include "opuc/common.hpp"

namespace opuc {

/// In-place radix-2 FFT; size must be a power of two.
/// Forward convention: a_k := sum_j a_j exp(-2*pi*i*j*k/M).
void fft_pow2(std::vector<cplx>& a, bool inverse = false);

/// Fourier coefficients c_k = (1/2pi) Int f(theta) exp(-i k theta) dtheta for
/// |k| <= kmax, by the M-point trapezoid rule (exact for band-limited f).
/// Returned vector is indexed c[k + kmax].
std::vector<cplx> fourier_coefficients(const std::function<cplx(double)>& f, int m_pow2, int kmax);

}  // namespace opuc
