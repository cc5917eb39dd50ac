#include "opuc/szego.hpp"

#include <cmath>

namespace opuc {

AlphaCache::AlphaCache(const VerblunskySequence& seq, std::int64_t n) {
    alpha.reserve(static_cast<std::size_t>(n));
    rho.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        alpha.push_back(seq.alpha(k));
        rho.push_back(std::sqrt(std::max(0.0, 1.0 - std::norm(alpha.back()))));
    }
}

PolyPair eval_polys(const AlphaCache& cache, std::int64_t n, cplx z) {
    if (n < 0) throw validation_error("eval_polys: n >= 0 required");
    cplx phi = 1.0, star = 1.0;
    for (std::int64_t k = 0; k < n; ++k) {
        const cplx a = cache.alpha[static_cast<std::size_t>(k)];
        const double inv_rho = 1.0 / cache.rho[static_cast<std::size_t>(k)];
        const cplx zphi = z * phi;
        phi = (zphi - std::conj(a) * star) * inv_rho;
        star = (star - a * zphi) * inv_rho;
    }
    return PolyPair{n, phi, star, z};
}

PolyPair eval_polys(const VerblunskySequence& seq, std::int64_t n, cplx z) {
    AlphaCache cache(seq, n);
    return eval_polys(cache, n, z);
}

void eval_polys_all(const AlphaCache& cache, std::int64_t n, cplx z, cplx* phi_out) {
    cplx phi = 1.0, star = 1.0;
    for (std::int64_t k = 0; k < n; ++k) {
        phi_out[k] = phi;
        const cplx a = cache.alpha[static_cast<std::size_t>(k)];
        const double inv_rho = 1.0 / cache.rho[static_cast<std::size_t>(k)];
        const cplx zphi = z * phi;
        phi = (zphi - std::conj(a) * star) * inv_rho;
        star = (star - a * zphi) * inv_rho;
    }
}

cplx cd_kernel(const AlphaCache& cache, std::int64_t n, double theta, double phi_angle) {
    if (n < 1) throw validation_error("cd_kernel: n >= 1 required");
    const cplx zt = unit_circle(theta), zp = unit_circle(phi_angle);
    const cplx denom = 1.0 - unit_circle(theta - phi_angle);
    if (std::abs(denom) > 1e-6) {
        PolyPair a = eval_polys(cache, n, zt);
        PolyPair b = eval_polys(cache, n, zp);
        return (a.phi_star * std::conj(b.phi_star) - a.phi * std::conj(b.phi)) / denom;
    }
    std::vector<cplx> pa(static_cast<std::size_t>(n)), pb(static_cast<std::size_t>(n));
    eval_polys_all(cache, n, zt, pa.data());
    eval_polys_all(cache, n, zp, pb.data());
    cplx s = 0.0;
    for (std::int64_t j = 0; j < n; ++j)
        s += pa[static_cast<std::size_t>(j)] * std::conj(pb[static_cast<std::size_t>(j)]);
    return s;
}

cplx cd_kernel(const VerblunskySequence& seq, std::int64_t n, double theta, double phi_angle) {
    AlphaCache cache(seq, n);
    return cd_kernel(cache, n, theta, phi_angle);
}

cplx cmv_basis(const VerblunskySequence& seq, std::int64_t j, double theta) {
    if (j < 0) throw validation_error("cmv_basis: j >= 0 required");
    const cplx z = unit_circle(theta);
    PolyPair p = eval_polys(seq, j, z);
    if (j % 2 == 0) {
        std::int64_t k = j / 2;
        return std::exp(cplx(0.0, -static_cast<double>(k) * theta)) * p.phi_star;
    }
    std::int64_t k = (j + 1) / 2;
    return std::exp(cplx(0.0, (1.0 - static_cast<double>(k)) * theta)) * p.phi;
}

}  // namespace opuc
