#include "opuc/fft.hpp"

#include <cmath>

namespace opuc {

void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw validation_error("fft_pow2: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? two_pi : -two_pi) / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

std::vector<cplx> fourier_coefficients(const std::function<cplx(double)>& f, int m_pow2, int kmax) {
    if (kmax >= m_pow2 / 2) throw validation_error("fourier_coefficients: kmax too large for grid");
    std::vector<cplx> a(static_cast<std::size_t>(m_pow2));
    for (int j = 0; j < m_pow2; ++j) a[static_cast<std::size_t>(j)] = f(two_pi * j / m_pow2);
    fft_pow2(a, false);
    std::vector<cplx> c(static_cast<std::size_t>(2 * kmax + 1));
    for (int k = -kmax; k <= kmax; ++k) {
        int idx = k >= 0 ? k : m_pow2 + k;
        c[static_cast<std::size_t>(k + kmax)] = a[static_cast<std::size_t>(idx)] / static_cast<double>(m_pow2);
    }
    return c;
}

}  // namespace opuc
