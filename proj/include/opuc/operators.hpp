#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "opuc/linalg.hpp"
#include "opuc/measures.hpp"

namespace opuc {

enum class OperatorKind { ggt, cmv, toeplitz, block_toeplitz, hankel, resolvent, cayley, statistic };

/// Dense N x N truncation tagged with its origin.
struct OperatorTruncation {
    CMatrix data;
    OperatorKind kind = OperatorKind::statistic;
    std::string meta;
    int bandwidth = -1;  // >= 0 when the matrix is banded (half-width)
};

/// Circle symbol: Fourier coefficients (scalar d=1 or 2x2 blocks d=2), with an
/// optional pointwise evaluator.
struct Symbol {
    int d = 1;
    std::function<CMatrix(std::int64_t)> fourier;
    std::function<CMatrix(double)> evaluator;  // may be empty

    cplx coeff(std::int64_t k) const { return fourier(k)(0, 0); }
};

Symbol scalar_symbol(std::function<cplx(std::int64_t)> fourier,
                     std::function<cplx(double)> evaluator = nullptr);
/// Trigonometric polynomial from coefficients c[k + kmax], k in [-kmax, kmax].
Symbol trig_poly_symbol(const std::vector<cplx>& coeffs, std::int64_t kmax);
/// b~(z) = b(1/z): Fourier coefficients reflected.
Symbol reflect_symbol(const Symbol& s);

/// GGT truncation: G_{ij} = -conj(alpha_j) alpha_{i-1} prod_{l=i}^{j-1} rho_l
/// for i <= j (alpha_{-1} = -1), rho_j on the subdiagonal, zero below.
/// With unitary_boundary the final coefficient is pushed to the unit circle
/// (rho_{N-1} = 0), which decouples the chain and makes the N x N block an
/// exactly unitary proxy for the infinite operator -- the form resolvents and
/// Cayley transforms must use, since the plain cut has spectrum collapsing
/// into the disk.
OperatorTruncation ggt_truncation(const VerblunskySequence& seq, int N,
                                  bool unitary_boundary = false);

/// Five-diagonal CMV truncation (LM factorization of Theta blocks).
OperatorTruncation cmv_truncation(const VerblunskySequence& seq, int N,
                                  bool unitary_boundary = false);

OperatorTruncation toeplitz(const Symbol& sym, int N);
OperatorTruncation hankel(const Symbol& sym, int N);
OperatorTruncation block_toeplitz(const Symbol& sym, int N);

/// Cayley transform (A + omega)(A - omega)^{-1} = I + 2 omega (A - omega)^{-1};
/// banded elimination when A is banded. |omega| != 1 expected by callers.
OperatorTruncation cayley(const OperatorTruncation& a, cplx omega);

/// Least-squares fit of log(max |entry| at off-diagonal distance d) over the
/// central band; positive = decay per index.
double fit_offdiag_decay(const CMatrix& a, int* fitted_span = nullptr);

/// Decay rate of (M - z)^{-1} for M in {GGT, CMV}; |z| < 1.
double resolvent_decay_rate(const VerblunskySequence& seq, cplx z, int N, OperatorKind which);

}  // namespace opuc
