#include "opuc/wienerhopf.hpp"

#include <cmath>

#include "opuc/fft.hpp"

namespace opuc {

cplx branch_sqrt(cplx z) {
    double r = std::abs(z);
    if (r == 0.0) return 0.0;
    // Arguments within rounding noise of the positive real axis are treated
    // as on the cut, where the limit from above (positive root) applies.
    if (z.real() > 0.0 && std::abs(z.imag()) <= 1e-13 * z.real()) return std::sqrt(z.real());
    double t = std::atan2(z.imag(), z.real());  // (-pi, pi]
    if (t < 0.0) t += two_pi;                   // (0, 2 pi]
    return std::sqrt(r) * unit_circle(0.5 * t);
}

Symbol geronimus_symbol(double alpha) {
    if (alpha == 0.0)
        throw validation_error("geronimus_symbol: alpha = 0 has no scalar symbol; use the block path");
    if (!(std::abs(alpha) < 1.0)) throw validation_error("geronimus_symbol: need 0 < |alpha| < 1");
    const double a2 = alpha * alpha;
    const double rho = std::sqrt(1.0 - a2);
    return scalar_symbol(
        [a2, rho](std::int64_t k) -> cplx {
            if (k == 1) return rho;
            if (k > 1) return 0.0;
            return -a2 * std::pow(rho, static_cast<double>(-k));
        },
        [rho](double theta) {
            const cplx z = unit_circle(theta);
            return (rho * z - 1.0) / (1.0 - rho / z);
        });
}

WhRoots wh_roots(double rho, cplx omega) {
    if (!(rho > 0.0 && rho <= 1.0)) throw validation_error("wh_roots: rho in (0, 1] required");
    WhRoots r;
    const cplx one_plus = 1.0 + omega;
    r.disc = one_plus * one_plus - 4.0 * omega * rho * rho;
    if (std::abs(r.disc) == 0.0) throw numeric_error("wh_roots: degenerate double root");
    const cplx s = branch_sqrt(r.disc);
    r.plus = (one_plus + s) / (2.0 * rho);
    r.minus = (one_plus - s) / (2.0 * rho);
    return r;
}

namespace {
// P_{-omega}(z) with the rho of the enclosing call.
inline cplx p_minus_omega(double rho, cplx omega, cplx z) {
    return z * z - (1.0 - omega) / rho * z - omega;
}

struct RatioParts {
    WhRoots roots;
    cplx amp_plus;   // P_{-w}(z_+) / (z_- - z_+)
    cplx amp_minus;  // P_{-w}(z_-) / (z_- - z_+)
};

RatioParts ratio_parts(double rho, cplx omega) {
    RatioParts rp;
    rp.roots = wh_roots(rho, omega);
    if (!(std::abs(rp.roots.minus) < 1.0 && std::abs(rp.roots.plus) > 1.0))
        throw numeric_error("symbol_ratio_fourier: outside the |z_-| < 1 < |z_+| regime");
    const cplx diff = rp.roots.minus - rp.roots.plus;
    rp.amp_plus = p_minus_omega(rho, omega, rp.roots.plus) / diff;
    rp.amp_minus = p_minus_omega(rho, omega, rp.roots.minus) / diff;
    return rp;
}
}  // namespace

cplx symbol_ratio_fourier(double rho, cplx omega, std::int64_t k) {
    RatioParts rp = ratio_parts(rho, omega);
    if (k > 1) return rp.amp_plus * std::pow(rp.roots.plus, static_cast<double>(-k - 1));
    if (k < -1) return rp.amp_minus * std::pow(rp.roots.minus, static_cast<double>(-k - 1));
    // middle coefficients by FFT of the evaluator
    const int m = 1 << 12;
    auto ratio = [&](double t) {
        const cplx z = unit_circle(t);
        const cplx pw = z * z - (1.0 + omega) / rho * z + omega;
        return p_minus_omega(rho, omega, z) / pw;
    };
    std::vector<cplx> c = fourier_coefficients(ratio, m, 2);
    return c[static_cast<std::size_t>(k + 2)];
}

double hankel_trace_sigma(double rho, cplx omega, double n, double gamma) {
    RatioParts rp = ratio_parts(rho, omega);
    const double ng = std::pow(n, gamma);
    // k = 1 needs the FFT coefficients
    cplx f1 = symbol_ratio_fourier(rho, omega, 1);
    cplx fm1 = symbol_ratio_fourier(rho, omega, -1);
    double sum = std::norm(f1 + std::conj(fm1));
    // phi_hat_k = amp_plus z_+^{-(k+1)}, phi_hat_{-k} = amp_minus z_-^{k-1}
    cplx phik = rp.amp_plus / (rp.roots.plus * rp.roots.plus * rp.roots.plus);
    cplx phimk = rp.amp_minus * rp.roots.minus;
    for (std::int64_t k = 2;; ++k) {
        double term = static_cast<double>(k) * std::norm(phik + std::conj(phimk));
        sum += term;
        if (term < 1e-16 * sum && k > 8) break;
        if (k > 100000000) throw numeric_error("hankel_trace_sigma: series did not truncate");
        phik /= rp.roots.plus;
        phimk *= rp.roots.minus;
    }
    return sum / (4.0 * ng * ng);
}

double hankel_trace_cross_term(double rho, cplx omega, double n, double gamma) {
    RatioParts rp = ratio_parts(rho, omega);
    const double ng = std::pow(n, gamma);
    cplx f1 = symbol_ratio_fourier(rho, omega, 1);
    cplx fm1 = symbol_ratio_fourier(rho, omega, -1);
    double sum = (f1 * fm1).real();
    cplx ph = rp.amp_plus * rp.amp_minus * rp.roots.minus / std::pow(rp.roots.plus, 3);
    const cplx step = rp.roots.minus / rp.roots.plus;
    for (std::int64_t k = 2;; ++k) {
        double term = static_cast<double>(k) * ph.real();
        sum += term;
        if (std::abs(term) < 1e-16 * std::max(std::abs(sum), 1e-300) && k > 8) break;
        if (k > 100000000) throw numeric_error("hankel_trace_cross_term: series did not truncate");
        ph *= step;
    }
    return sum / (2.0 * ng * ng);
}

double alpha0_block_trace(cplx omega, double n, double gamma) {
    if (!(std::abs(omega) < 1.0)) throw validation_error("alpha0_block_trace: |omega| < 1 required");
    const double ng2 = std::pow(n, 2.0 * gamma);
    const double q = std::norm(omega);
    return 2.0 * q / (ng2 * (1.0 - q) * (1.0 - q));
}

double alpha0_block_trace_direct(cplx omega, double n, double gamma, int kmax) {
    const double ng2 = std::pow(n, 2.0 * gamma);
    const double q = std::norm(omega);
    // Tr sum_j sum_k phi_hat_{k+j} phi_hat_{-k-j}; each block product is
    // |omega|^{2m} I_2, m = k + j.
    double sum = 0.0;
    for (int j = 1; j <= kmax; ++j)
        for (int k = 0; k + j <= kmax; ++k) sum += 2.0 * std::pow(q, static_cast<double>(k + j));
    return sum / ng2;
}

std::vector<Lemma3Row> lemma3_properties(cplx eta, double gamma, double theta0,
                                         const std::vector<double>& ns) {
    if (!(eta.real() > 0.0)) throw validation_error("lemma3_properties: Re eta > 0 required");
    std::vector<Lemma3Row> rows;
    for (double n : ns) {
        const double ng = std::pow(n, gamma);
        const cplx omega = (1.0 - eta / ng) * unit_circle(theta0);
        const double q = std::abs(omega);
        if (!(q < 1.0)) throw validation_error("lemma3_properties: n too small for eta");
        Lemma3Row r;
        r.n = n;
        // ||phi_hat_k||_1 = 2 |omega|^{|k|} / n^gamma
        r.coeff_sum = (2.0 / ng) * (1.0 + 2.0 * q / (1.0 - q));
        r.fitted_decay = -ng * std::log(q);
        // tail sums T(m) = sum_{k>=m} 2 q^k / ng: fit D_2 from T(m2)/T(m1)
        const double m1 = ng, m2 = 4.0 * ng;
        const double t1 = 2.0 * std::pow(q, m1) / ((1.0 - q) * ng);
        const double t2 = 2.0 * std::pow(q, m2) / ((1.0 - q) * ng);
        r.tail_decay = -std::log(t2 / t1) / ((m2 - m1) / ng);
        const double q2 = q * q;
        r.weighted_sq_sum = (8.0 / (ng * ng)) * q2 / ((1.0 - q2) * (1.0 - q2));
        rows.push_back(r);
    }
    return rows;
}

WienerHopfData wiener_hopf_data(double alpha, double theta0, cplx eta, double n, double gamma) {
    if (!(std::abs(alpha) < 1.0) || alpha == 0.0)
        throw validation_error("wiener_hopf_data: need 0 < |alpha| < 1");
    WienerHopfData d;
    d.rho = std::sqrt(1.0 - alpha * alpha);
    d.omega = (1.0 - eta / std::pow(n, gamma)) * unit_circle(theta0);
    d.roots = wh_roots(d.rho, d.omega);
    const double c = std::cos(0.5 * theta0);
    d.a_edge = std::sqrt(std::max(0.0, d.rho * d.rho - c * c));
    d.sigma_estimate = hankel_trace_sigma(d.rho, d.omega, n, gamma);
    return d;
}

}  // namespace opuc
