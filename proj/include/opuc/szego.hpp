#pragma once

#include <cstdint>
#include <vector>

#include "opuc/common.hpp"
#include "opuc/measures.hpp"

namespace opuc {

struct PolyPair {
    std::int64_t n;
    cplx phi;       // orthonormal phi_n(z)
    cplx phi_star;  // Szego dual phi_n^*(z)
    cplx z;
};

/// Cached alpha/rho prefix of a sequence, for the O(n) coupled recursion.
struct AlphaCache {
    std::vector<cplx> alpha;
    std::vector<double> rho;
    explicit AlphaCache(const VerblunskySequence& seq, std::int64_t n);
};

/// Coupled Szego recursion seeded phi_0 = phi_0^* = 1:
///   rho_k phi_{k+1} = z phi_k - conj(alpha_k) phi_k^*
///   rho_k phi_{k+1}^* = phi_k^* - alpha_k z phi_k
PolyPair eval_polys(const VerblunskySequence& seq, std::int64_t n, cplx z);
PolyPair eval_polys(const AlphaCache& cache, std::int64_t n, cplx z);

/// All orders 0..n-1 at once (phi values only), for kernel sums and samplers.
void eval_polys_all(const AlphaCache& cache, std::int64_t n, cplx z, cplx* phi_out);

struct KernelValue {
    std::int64_t n;
    double theta, phi;
    cplx value;
};

/// Christoffel-Darboux kernel K_n(theta, phi) = sum_{j<n} phi_j(e^{i theta})
/// conj(phi_j(e^{i phi})). Uses the CD formula away from the diagonal and the
/// direct sum within |1 - e^{i(theta-phi)}| <= 1e-6.
cplx cd_kernel(const VerblunskySequence& seq, std::int64_t n, double theta, double phi);
cplx cd_kernel(const AlphaCache& cache, std::int64_t n, double theta, double phi);

/// CMV basis function chi_j on the circle:
/// chi_{2k} = z^{-k} phi_{2k}^*, chi_{2k-1} = z^{-k+1} phi_{2k-1}.
cplx cmv_basis(const VerblunskySequence& seq, std::int64_t j, double theta);

}  // namespace opuc
