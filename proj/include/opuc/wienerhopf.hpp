#pragma once

#include <cstdint>
#include <vector>

#include "opuc/common.hpp"
#include "opuc/operators.hpp"

namespace opuc {

/// Square root with branch cut on the positive real line: for z = R e^{i t},
/// t in (0, 2 pi), sqrt(z) = sqrt(R) e^{i t/2}; on the cut the limit from
/// above (positive root) is returned.
cplx branch_sqrt(cplx z);

/// Symbol of T(phi) for the constant-alpha GGT analysis: phi_hat_1 = rho,
/// phi_hat_{-k} = -alpha^2 rho^k for k >= 0; evaluator (rho z - 1)/(1 - rho/z).
Symbol geronimus_symbol(double alpha);

struct WhRoots {
    cplx plus, minus;
    cplx disc;  // (1+omega)^2 - 4 omega rho^2
};

/// Roots of P_omega(z) = z^2 - ((1+omega)/rho) z + omega, labelled by the
/// displayed +/- formula under branch_sqrt (not by modulus).
WhRoots wh_roots(double rho, cplx omega);

/// Fourier coefficient of P_{-omega}/P_omega: closed form for |k| > 1, FFT at
/// 2^12 nodes for k in {-1, 0, 1}. Requires |z_-| < 1 < |z_+|.
cplx symbol_ratio_fourier(double rho, cplx omega, std::int64_t k);

/// Tr H(kappa) H(kappa~) = (1/(4 n^{2 gamma})) sum_k k |phi_hat_k +
/// conj(phi_hat_{-k})|^2, truncated when terms fall below 1e-16 of the sum.
double hankel_trace_sigma(double rho, cplx omega, double n, double gamma);

/// Cross term (1/(2 n^{2 gamma})) sum_k k Re(phi_hat_k phi_hat_{-k}).
double hankel_trace_cross_term(double rho, cplx omega, double n, double gamma);

/// alpha = 0 block-Toeplitz closed form:
/// Tr H(phi^{(n)}) H(phi~^{(n)}) = 2 |omega|^2 / (n^{2 gamma} (1-|omega|^2)^2).
double alpha0_block_trace(cplx omega, double n, double gamma);
/// Same quantity by direct double summation over the block coefficients.
double alpha0_block_trace_direct(cplx omega, double n, double gamma, int kmax);

struct Lemma3Row {
    double n = 0.0;
    double coeff_sum = 0.0;       // sum_k ||phi_hat_k||_1
    double fitted_decay = 0.0;    // d in ||phi_hat_k|| ~ exp(-d |k| / n^gamma)
    double tail_decay = 0.0;      // D_2 in tail bound exp(-D_2 m / n^gamma)
    double weighted_sq_sum = 0.0; // sum_k |k| ||phi_hat_k||_1^2
};

/// Evaluates the four Lemma properties of the alpha = 0 block symbol on an
/// n-grid; weighted_sq_sum approaches 2 / (Re eta)^2.
std::vector<Lemma3Row> lemma3_properties(cplx eta, double gamma, double theta0,
                                         const std::vector<double>& ns);

struct WienerHopfData {
    double rho = 0.0;
    cplx omega;
    WhRoots roots;
    double a_edge = 0.0;  // sqrt(rho^2 - cos^2(theta0/2)), > 0 inside the arc
    double sigma_estimate = 0.0;
};

WienerHopfData wiener_hopf_data(double alpha, double theta0, cplx eta, double n, double gamma);

}  // namespace opuc
