#include "opuc/operators.hpp"

#include <cmath>
#include <memory>

#include "opuc/szego.hpp"

namespace opuc {

Symbol scalar_symbol(std::function<cplx(std::int64_t)> fourier, std::function<cplx(double)> evaluator) {
    Symbol s;
    s.d = 1;
    s.fourier = [fourier](std::int64_t k) {
        CMatrix m(1, 1);
        m(0, 0) = fourier(k);
        return m;
    };
    if (evaluator)
        s.evaluator = [evaluator](double t) {
            CMatrix m(1, 1);
            m(0, 0) = evaluator(t);
            return m;
        };
    return s;
}

Symbol trig_poly_symbol(const std::vector<cplx>& coeffs, std::int64_t kmax) {
    if (static_cast<std::int64_t>(coeffs.size()) != 2 * kmax + 1)
        throw validation_error("trig_poly_symbol: need 2*kmax+1 coefficients");
    auto data = std::make_shared<std::vector<cplx>>(coeffs);
    return scalar_symbol(
        [data, kmax](std::int64_t k) {
            if (k < -kmax || k > kmax) return cplx(0.0);
            return (*data)[static_cast<std::size_t>(k + kmax)];
        },
        [data, kmax](double theta) {
            cplx v = 0.0;
            for (std::int64_t k = -kmax; k <= kmax; ++k)
                v += (*data)[static_cast<std::size_t>(k + kmax)] * std::exp(cplx(0.0, k * theta));
            return v;
        });
}

Symbol reflect_symbol(const Symbol& s) {
    Symbol r = s;
    auto f = s.fourier;
    r.fourier = [f](std::int64_t k) { return f(-k); };
    if (s.evaluator) {
        auto e = s.evaluator;
        r.evaluator = [e](double t) { return e(-t); };
    }
    return r;
}

namespace {
// boundary coefficient on the unit circle, keeping the phase of alpha_{N-1}
void push_boundary(AlphaCache& c, int last) {
    cplx a = c.alpha[static_cast<std::size_t>(last)];
    c.alpha[static_cast<std::size_t>(last)] = std::abs(a) > 1e-12 ? a / std::abs(a) : cplx(1.0);
    c.rho[static_cast<std::size_t>(last)] = 0.0;
}
}  // namespace

OperatorTruncation ggt_truncation(const VerblunskySequence& seq, int N, bool unitary_boundary) {
    if (N < 1) throw validation_error("ggt_truncation: N >= 1 required");
    AlphaCache c(seq, N);
    if (unitary_boundary) push_boundary(c, N - 1);
    CMatrix g(N, N);
    for (int j = 0; j < N; ++j) {
        const cplx aj = std::conj(c.alpha[static_cast<std::size_t>(j)]);
        double prod = 1.0;
        // walk up the column: i = j, j-1, ..., 0 accumulating rho products
        for (int i = j; i >= 0; --i) {
            const cplx head = i == 0 ? cplx(1.0) : -c.alpha[static_cast<std::size_t>(i - 1)];
            g(i, j) = aj * head * prod;
            if (i >= 1) prod *= c.rho[static_cast<std::size_t>(i - 1)];
        }
        if (j + 1 < N) g(j + 1, j) = c.rho[static_cast<std::size_t>(j)];
    }
    OperatorTruncation t;
    t.data = std::move(g);
    t.kind = OperatorKind::ggt;
    t.meta = "ggt:" + seq.kind;
    return t;
}

namespace {
// Entries of the L and M factors of the infinite CMV matrix C = L M, where
// L = Theta_0 (+) Theta_2 (+) ... and M = 1 (+) Theta_1 (+) Theta_3 (+) ...
// with Theta_j = [[conj(a_j), rho_j], [rho_j, -a_j]].
inline cplx theta_entry(const AlphaCache& c, std::int64_t j, int r, int s) {
    const cplx a = c.alpha[static_cast<std::size_t>(j)];
    const double rho = c.rho[static_cast<std::size_t>(j)];
    if (r == 0) return s == 0 ? std::conj(a) : cplx(rho);
    return s == 0 ? cplx(rho) : -a;
}

inline cplx l_entry(const AlphaCache& c, std::int64_t r, std::int64_t s) {
    if (r / 2 != s / 2) return 0.0;
    const std::int64_t j = 2 * (r / 2);
    return theta_entry(c, j, static_cast<int>(r - j), static_cast<int>(s - j));
}

inline cplx m_entry(const AlphaCache& c, std::int64_t r, std::int64_t s) {
    if (r == 0 || s == 0) return r == 0 && s == 0 ? cplx(1.0) : cplx(0.0);
    if ((r - 1) / 2 != (s - 1) / 2) return 0.0;
    const std::int64_t j = 2 * ((r - 1) / 2) + 1;
    return theta_entry(c, j, static_cast<int>(r - j), static_cast<int>(s - j));
}
}  // namespace

OperatorTruncation cmv_truncation(const VerblunskySequence& seq, int N, bool unitary_boundary) {
    if (N < 2) throw validation_error("cmv_truncation: N >= 2 required");
    AlphaCache c(seq, N + 2);
    if (unitary_boundary) push_boundary(c, N - 1);
    CMatrix cm(N, N);
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t k = std::max<std::int64_t>(0, i - 1); k <= i + 1; ++k) {
            const cplx l = l_entry(c, i, k);
            if (l == cplx(0.0)) continue;
            for (std::int64_t j = std::max<std::int64_t>(0, k - 1); j <= std::min<std::int64_t>(N - 1, k + 1); ++j) {
                const cplx m = m_entry(c, k, j);
                if (m != cplx(0.0)) cm(static_cast<int>(i), static_cast<int>(j)) += l * m;
            }
        }
    OperatorTruncation t;
    t.data = std::move(cm);
    t.kind = OperatorKind::cmv;
    t.bandwidth = 2;
    t.meta = "cmv:" + seq.kind;
    return t;
}

OperatorTruncation toeplitz(const Symbol& sym, int N) {
    if (sym.d != 1) throw validation_error("toeplitz: scalar symbol required (use block_toeplitz)");
    std::vector<cplx> diag(static_cast<std::size_t>(2 * N - 1));
    for (int k = -(N - 1); k <= N - 1; ++k)
        diag[static_cast<std::size_t>(k + N - 1)] = sym.coeff(k);
    CMatrix m(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = diag[static_cast<std::size_t>(i - j + N - 1)];
    OperatorTruncation t;
    t.data = std::move(m);
    t.kind = OperatorKind::toeplitz;
    return t;
}

// Hankel entries H_{ij} = psi_hat_{i+j+1}, the convention under which
// T(ab) = T(a)T(b) + H(a)H(b~) holds exactly.
OperatorTruncation hankel(const Symbol& sym, int N) {
    if (sym.d != 1) throw validation_error("hankel: scalar symbol required");
    std::vector<cplx> anti(static_cast<std::size_t>(2 * N - 1));
    for (int s = 1; s <= 2 * N - 1; ++s) anti[static_cast<std::size_t>(s - 1)] = sym.coeff(s);
    CMatrix m(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = anti[static_cast<std::size_t>(i + j)];
    OperatorTruncation t;
    t.data = std::move(m);
    t.kind = OperatorKind::hankel;
    return t;
}

OperatorTruncation block_toeplitz(const Symbol& sym, int N) {
    if (sym.d < 1) throw validation_error("block_toeplitz: bad block size");
    const int d = sym.d;
    CMatrix m(N * d, N * d);
    for (int k = -(N - 1); k <= N - 1; ++k) {
        CMatrix blk = sym.fourier(k);
        for (int i = 0; i < N; ++i) {
            int j = i - k;
            if (j < 0 || j >= N) continue;
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s) m(i * d + r, j * d + s) = blk(r, s);
        }
    }
    OperatorTruncation t;
    t.data = std::move(m);
    t.kind = OperatorKind::block_toeplitz;
    return t;
}

OperatorTruncation cayley(const OperatorTruncation& a, cplx omega) {
    const int n = a.data.rows();
    CMatrix shifted = a.data;
    for (int i = 0; i < n; ++i) shifted(i, i) -= omega;
    CMatrix inv;
    if (a.bandwidth >= 0 && a.bandwidth < n / 4) {
        BandLu f = band_lu_factor(shifted, a.bandwidth, a.bandwidth);
        inv = band_lu_inverse(f);
    } else {
        LuFactors f = lu_factor(std::move(shifted));
        inv = lu_inverse(f);
    }
    inv *= 2.0 * omega;
    for (int i = 0; i < n; ++i) inv(i, i) += 1.0;
    OperatorTruncation t;
    t.data = std::move(inv);
    t.kind = OperatorKind::cayley;
    t.meta = a.meta + ":cayley";
    return t;
}

double fit_offdiag_decay(const CMatrix& a, int* fitted_span) {
    const int n = a.rows();
    const int lo = n / 4, hi = 3 * n / 4;
    const int dmax = std::max(2, n / 4 - 1);
    std::vector<double> logmax;
    for (int d = 0; d <= dmax; ++d) {
        double m = 0.0;
        for (int i = lo; i < hi; ++i) {
            if (i + d < n) m = std::max(m, std::abs(a(i, i + d)));
            if (i - d >= 0) m = std::max(m, std::abs(a(i, i - d)));
        }
        if (m < 1e-280) break;
        logmax.push_back(std::log(m));
    }
    if (logmax.size() < 3) throw numeric_error("fit_offdiag_decay: too few usable distances");
    // least squares log m_d = c - rate * d
    const std::size_t k = logmax.size();
    double sd = 0, sl = 0, sdd = 0, sdl = 0;
    for (std::size_t d = 0; d < k; ++d) {
        sd += static_cast<double>(d);
        sl += logmax[d];
        sdd += static_cast<double>(d) * static_cast<double>(d);
        sdl += static_cast<double>(d) * logmax[d];
    }
    double denom = k * sdd - sd * sd;
    double slope = (k * sdl - sd * sl) / denom;
    if (fitted_span) *fitted_span = static_cast<int>(k);
    return -slope;
}

double resolvent_decay_rate(const VerblunskySequence& seq, cplx z, int N, OperatorKind which) {
    if (!(std::abs(z) < 1.0)) throw validation_error("resolvent_decay_rate: |z| < 1 required");
    OperatorTruncation m = which == OperatorKind::ggt ? ggt_truncation(seq, N) : cmv_truncation(seq, N);
    CMatrix shifted = m.data;
    for (int i = 0; i < N; ++i) shifted(i, i) -= z;
    CMatrix inv;
    if (m.bandwidth >= 0) {
        BandLu f = band_lu_factor(shifted, m.bandwidth, m.bandwidth);
        inv = band_lu_inverse(f);
    } else {
        LuFactors f = lu_factor(std::move(shifted));
        inv = lu_inverse(f);
    }
    return fit_offdiag_decay(inv);
}

}  // namespace opuc
