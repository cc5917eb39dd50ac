#include "opuc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "opuc/parallel.hpp"

namespace opuc {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::block(int i0, int j0, int r, int c) const {
    CMatrix out(r, c);
    for (int i = 0; i < r; ++i)
        std::memcpy(out.row(i), row(i0 + i) + j0, sizeof(cplx) * static_cast<std::size_t>(c));
    return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& b) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += b.a_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& b) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= b.a_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

// Tiled i-k-j product; the inner j loop runs over the interleaved re/im pairs
// so the compiler can vectorize the four independent multiply-add chains.
CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw validation_error("matmul: shape mismatch");
    const int m = a.rows(), k = a.cols(), n = b.cols();
    CMatrix out(m, n);
    const int tile = 64;
    parallel_for_chunks(0, m, tile, [&](std::int64_t i0, std::int64_t i1) {
        for (int kk = 0; kk < k; kk += tile) {
            const int k1 = std::min(k, kk + tile);
            for (int i = static_cast<int>(i0); i < i1; ++i) {
                double* out_i = reinterpret_cast<double*>(out.row(i));
                const cplx* a_i = a.row(i);
                for (int l = kk; l < k1; ++l) {
                    const double sr = a_i[l].real(), si = a_i[l].imag();
                    const double* b_l = reinterpret_cast<const double*>(b.row(l));
                    for (int j = 0; j < 2 * n; j += 2) {
                        const double br = b_l[j], bi = b_l[j + 1];
                        out_i[j] += sr * br - si * bi;
                        out_i[j + 1] += sr * bi + si * br;
                    }
                }
            }
        }
    });
    return out;
}

CMatrix adjoint(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

CMatrix hermitian_part(const CMatrix& a) {
    CMatrix out(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return out;
}

cplx trace(const CMatrix& a) {
    cplx t = 0.0;
    for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a(i, i);
    return t;
}

cplx trace_product(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw validation_error("trace_product: shape mismatch");
    cplx t = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        const cplx* a_i = a.row(i);
        cplx s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a_i[j] * b(j, i);
        t += s;
    }
    return t;
}

double max_abs(const CMatrix& a) {
    double m = 0.0;
    const cplx* p = a.data();
    for (std::size_t i = 0, e = static_cast<std::size_t>(a.rows()) * a.cols(); i < e; ++i)
        m = std::max(m, std::abs(p[i]));
    return m;
}

double frobenius_norm(const CMatrix& a) {
    double s = 0.0;
    const cplx* p = a.data();
    for (std::size_t i = 0, e = static_cast<std::size_t>(a.rows()) * a.cols(); i < e; ++i)
        s += std::norm(p[i]);
    return std::sqrt(s);
}

double one_norm(const CMatrix& a) {
    std::vector<double> col(static_cast<std::size_t>(a.cols()), 0.0);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) col[static_cast<std::size_t>(j)] += std::abs(a(i, j));
    double m = 0.0;
    for (double c : col) m = std::max(m, c);
    return m;
}

double operator_norm(const CMatrix& a, int iterations) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    std::vector<cplx> v(static_cast<std::size_t>(a.cols()));
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = cplx(std::cos(0.7 * static_cast<double>(i) + 0.3), std::sin(1.3 * static_cast<double>(i)));
    std::vector<cplx> av(static_cast<std::size_t>(a.rows()));
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        for (int i = 0; i < a.rows(); ++i) {
            const cplx* a_i = a.row(i);
            cplx s = 0.0;
            for (int j = 0; j < a.cols(); ++j) s += a_i[j] * v[static_cast<std::size_t>(j)];
            av[static_cast<std::size_t>(i)] = s;
        }
        // v := A^H (A v)
        std::fill(v.begin(), v.end(), cplx(0.0));
        for (int i = 0; i < a.rows(); ++i) {
            const cplx* a_i = a.row(i);
            const cplx s = av[static_cast<std::size_t>(i)];
            for (int j = 0; j < a.cols(); ++j) v[static_cast<std::size_t>(j)] += std::conj(a_i[j]) * s;
        }
        double nv = 0.0;
        for (const cplx& x : v) nv += std::norm(x);
        nv = std::sqrt(nv);
        if (nv == 0.0) return 0.0;
        double next = std::sqrt(nv);
        for (auto& x : v) x /= nv;
        if (it > 4 && std::abs(next - lambda) < 1e-12 * std::max(1.0, next)) return next;
        lambda = next;
    }
    return lambda;
}

LuFactors lu_factor(CMatrix a, double pivot_rel_tol) {
    const int n = a.rows();
    if (n != a.cols()) throw validation_error("lu_factor: square matrix required");
    LuFactors f;
    f.scale = max_abs(a);
    f.perm.resize(static_cast<std::size_t>(n));
    f.min_pivot = f.scale;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; p = i; }
        }
        f.perm[static_cast<std::size_t>(k)] = p;
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
        const cplx piv = a(k, k);
        const double apiv = std::abs(piv);
        f.min_pivot = std::min(f.min_pivot, apiv);
        if (apiv <= pivot_rel_tol * f.scale)
            throw numeric_error("lu_factor: singular to tolerance, pivot magnitude " +
                                std::to_string(apiv));
        const cplx inv = 1.0 / piv;
        parallel_for_chunks(k + 1, n, 64, [&](std::int64_t i0, std::int64_t i1) {
            for (int i = static_cast<int>(i0); i < i1; ++i) {
                const cplx l = a(i, k) * inv;
                a(i, k) = l;
                if (l == cplx(0.0, 0.0)) continue;
                cplx* ai = a.row(i);
                const cplx* ak = a.row(k);
                for (int j = k + 1; j < n; ++j) ai[j] -= l * ak[j];
            }
        });
    }
    f.lu = std::move(a);
    return f;
}

void lu_solve_inplace(const LuFactors& f, CMatrix& b) {
    const int n = f.lu.rows();
    if (b.rows() != n) throw validation_error("lu_solve: shape mismatch");
    const int m = b.cols();
    for (int k = 0; k < n; ++k) {
        int p = f.perm[static_cast<std::size_t>(k)];
        if (p != k)
            for (int j = 0; j < m; ++j) std::swap(b(k, j), b(p, j));
    }
    // forward
    for (int i = 1; i < n; ++i) {
        const cplx* l_i = f.lu.row(i);
        cplx* b_i = b.row(i);
        for (int k = 0; k < i; ++k) {
            const cplx l = l_i[k];
            if (l == cplx(0.0, 0.0)) continue;
            const cplx* b_k = b.row(k);
            for (int j = 0; j < m; ++j) b_i[j] -= l * b_k[j];
        }
    }
    // backward
    for (int i = n - 1; i >= 0; --i) {
        const cplx* u_i = f.lu.row(i);
        cplx* b_i = b.row(i);
        for (int k = i + 1; k < n; ++k) {
            const cplx u = u_i[k];
            if (u == cplx(0.0, 0.0)) continue;
            const cplx* b_k = b.row(k);
            for (int j = 0; j < m; ++j) b_i[j] -= u * b_k[j];
        }
        const cplx inv = 1.0 / u_i[i];
        for (int j = 0; j < m; ++j) b_i[j] *= inv;
    }
}

CMatrix lu_inverse(const LuFactors& f) {
    CMatrix b = CMatrix::identity(f.lu.rows());
    lu_solve_inplace(f, b);
    return b;
}

cplx lu_log_det(const LuFactors& f) {
    cplx s = 0.0;
    int swaps = 0;
    const int n = f.lu.rows();
    for (int k = 0; k < n; ++k) {
        s += std::log(f.lu(k, k));
        if (f.perm[static_cast<std::size_t>(k)] != k) ++swaps;
    }
    if (swaps % 2 == 1) s += cplx(0.0, pi);
    return s;
}

// LAPACK gbtrf-style band storage: row index in ab is kl+ku+(i-j), column j.
namespace {
inline cplx& band_at(BandLu& f, int i, int j) {
    return f.ab[static_cast<std::size_t>(f.n) * (f.kl + f.ku + i - j) + j];
}
inline const cplx& band_at(const BandLu& f, int i, int j) {
    return f.ab[static_cast<std::size_t>(f.n) * (f.kl + f.ku + i - j) + j];
}
}  // namespace

BandLu band_lu_factor(const CMatrix& a, int kl, int ku, double pivot_rel_tol) {
    const int n = a.rows();
    if (n != a.cols()) throw validation_error("band_lu_factor: square matrix required");
    BandLu f;
    f.n = n;
    f.kl = kl;
    f.ku = ku + kl;  // fill-in from row swaps widens the upper band
    f.ab.assign(static_cast<std::size_t>(2 * kl + ku + kl + 1) * n, cplx(0.0));
    f.perm.resize(static_cast<std::size_t>(n));
    f.scale = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) {
            band_at(f, i, j) = a(i, j);
            f.scale = std::max(f.scale, std::abs(a(i, j)));
        }
    f.min_pivot = f.scale;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(band_at(f, k, k));
        for (int i = k + 1; i <= std::min(n - 1, k + kl); ++i) {
            double v = std::abs(band_at(f, i, k));
            if (v > best) { best = v; p = i; }
        }
        f.perm[static_cast<std::size_t>(k)] = p;
        const int jmax = std::min(n - 1, k + f.ku);
        if (p != k)
            for (int j = k; j <= jmax; ++j) std::swap(band_at(f, k, j), band_at(f, p, j));
        const cplx piv = band_at(f, k, k);
        const double apiv = std::abs(piv);
        f.min_pivot = std::min(f.min_pivot, apiv);
        if (apiv <= pivot_rel_tol * f.scale)
            throw numeric_error("band_lu_factor: singular to tolerance, pivot magnitude " +
                                std::to_string(apiv));
        const cplx inv = 1.0 / piv;
        for (int i = k + 1; i <= std::min(n - 1, k + kl); ++i) {
            const cplx l = band_at(f, i, k) * inv;
            band_at(f, i, k) = l;
            if (l == cplx(0.0, 0.0)) continue;
            for (int j = k + 1; j <= jmax; ++j) band_at(f, i, j) -= l * band_at(f, k, j);
        }
    }
    return f;
}

void band_lu_solve_inplace(const BandLu& f, CMatrix& b) {
    const int n = f.n;
    if (b.rows() != n) throw validation_error("band_lu_solve: shape mismatch");
    const int m = b.cols();
    for (int k = 0; k < n; ++k) {
        int p = f.perm[static_cast<std::size_t>(k)];
        if (p != k)
            for (int j = 0; j < m; ++j) std::swap(b(k, j), b(p, j));
        for (int i = k + 1; i <= std::min(n - 1, k + f.kl); ++i) {
            const cplx l = band_at(f, i, k);
            if (l == cplx(0.0, 0.0)) continue;
            cplx* b_i = b.row(i);
            const cplx* b_k = b.row(k);
            for (int j = 0; j < m; ++j) b_i[j] -= l * b_k[j];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        cplx* b_i = b.row(i);
        for (int k = i + 1; k <= std::min(n - 1, i + f.ku); ++k) {
            const cplx u = band_at(f, i, k);
            if (u == cplx(0.0, 0.0)) continue;
            const cplx* b_k = b.row(k);
            for (int j = 0; j < m; ++j) b_i[j] -= u * b_k[j];
        }
        const cplx inv = 1.0 / band_at(f, i, i);
        for (int j = 0; j < m; ++j) b_i[j] *= inv;
    }
}

CMatrix band_lu_inverse(const BandLu& f) {
    CMatrix b = CMatrix::identity(f.n);
    band_lu_solve_inplace(f, b);
    return b;
}

CMatrix matrix_exp(const CMatrix& a, double tol) {
    (void)tol;  // Pade(13) with scaling meets double-precision backward error
    const int n = a.rows();
    if (n != a.cols()) throw validation_error("matrix_exp: square matrix required");
    const double theta13 = 5.371920351148152;
    double nrm = one_norm(a);
    if (!std::isfinite(nrm) || nrm > 1e12) throw numeric_error("matrix_exp: norm too large");
    int s = 0;
    if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    CMatrix as = a;
    if (s > 0) as *= std::ldexp(1.0, -s);

    static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
    CMatrix a2 = matmul(as, as);
    CMatrix a4 = matmul(a2, a2);
    CMatrix a6 = matmul(a2, a4);
    CMatrix id = CMatrix::identity(n);

    auto lincomb = [&](double c6, double c4, double c2, double c0) {
        CMatrix r = a6;
        r *= c6;
        CMatrix t = a4; t *= c4; r += t;
        t = a2; t *= c2; r += t;
        t = id; t *= c0; r += t;
        return r;
    };
    CMatrix w1 = lincomb(b[13], b[11], b[9], 0.0);
    CMatrix w2 = lincomb(0.0, 0.0, 0.0, 0.0);
    {
        CMatrix t = a6; t *= b[7]; w2 = t;
        t = a4; t *= b[5]; w2 += t;
        t = a2; t *= b[3]; w2 += t;
        t = id; t *= b[1]; w2 += t;
    }
    CMatrix u = matmul(as, matmul(a6, w1));
    u += matmul(as, w2);
    CMatrix z1 = lincomb(b[12], b[10], b[8], 0.0);
    CMatrix v = matmul(a6, z1);
    {
        CMatrix t = a6; t *= b[6]; v += t;
        t = a4; t *= b[4]; v += t;
        t = a2; t *= b[2]; v += t;
        t = id; t *= b[0]; v += t;
    }
    CMatrix num = v; num += u;      // V + U
    CMatrix den = v; den -= u;      // V - U
    LuFactors f = lu_factor(std::move(den));
    lu_solve_inplace(f, num);       // (V-U)^{-1} (V+U)
    CMatrix r = std::move(num);
    for (int i = 0; i < s; ++i) r = matmul(r, r);
    return r;
}

}  // namespace opuc
