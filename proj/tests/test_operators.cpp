#include <doctest.h>

#include <cmath>

#include "opuc/measures.hpp"
#include "opuc/operators.hpp"
#include "opuc/rng.hpp"
#include "opuc/wienerhopf.hpp"

using namespace opuc;

namespace {

VerblunskySequence random_list(std::uint64_t seed, int len, double radius = 0.7) {
    RngStream r(seed, 0);
    nlohmann::json alphas = nlohmann::json::array();
    for (int i = 0; i < len; ++i) {
        double rad = radius * r.uniform();
        double ang = two_pi * r.uniform();
        alphas.push_back({{"re", rad * std::cos(ang)}, {"im", rad * std::sin(ang)}});
    }
    return make_catalog("explicit-list", {{"alphas", alphas}}).seq;
}

Symbol random_trig_poly(std::uint64_t seed, int kmax) {
    RngStream r(seed, 1);
    std::vector<cplx> c(static_cast<std::size_t>(2 * kmax + 1));
    for (auto& v : c) v = cplx(r.normal(), r.normal()) * 0.3;
    return trig_poly_symbol(c, kmax);
}

Symbol multiply_symbols(const Symbol& a, const Symbol& b, int ka, int kb) {
    std::vector<cplx> c(static_cast<std::size_t>(2 * (ka + kb) + 1), 0.0);
    for (int i = -ka; i <= ka; ++i)
        for (int j = -kb; j <= kb; ++j)
            c[static_cast<std::size_t>(i + j + ka + kb)] += a.coeff(i) * b.coeff(j);
    return trig_poly_symbol(c, ka + kb);
}

}  // namespace

TEST_SUITE("operators") {
    TEST_CASE("ggt entries: geronimus corner and cue shift") {
        CatalogEntry ger = make_catalog("geronimus", {{"alpha", 0.6}});
        const double a = 0.6, rho = 0.8;
        CMatrix g = ggt_truncation(ger.seq, 6).data;
        CHECK(std::abs(g(0, 0) - a) < 1e-15);
        CHECK(std::abs(g(0, 1) - a * rho) < 1e-15);
        CHECK(std::abs(g(1, 0) - rho) < 1e-15);
        CHECK(std::abs(g(1, 1) + a * a) < 1e-15);
        CHECK(std::abs(g(0, 3) - a * rho * rho * rho) < 1e-15);
        CHECK(std::abs(g(2, 3) + a * a * rho) < 1e-15);
        CHECK(std::abs(g(3, 1)) == 0.0);

        CMatrix s = ggt_truncation(make_catalog("cue").seq, 5).data;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                CHECK(std::abs(s(i, j) - (i == j + 1 ? 1.0 : 0.0)) == 0.0);
    }

    TEST_CASE("cmv entries: cue rows and geronimus (2,1)") {
        CMatrix c = cmv_truncation(make_catalog("cue").seq, 8).data;
        CHECK(std::abs(c(0, 2) - 1.0) < 1e-15);
        CHECK(std::abs(c(0, 0)) + std::abs(c(0, 1)) + std::abs(c(0, 3)) < 1e-15);
        CHECK(std::abs(c(1, 0) - 1.0) < 1e-15);
        for (int j = 1; j < 8; ++j) CHECK(std::abs(c(1, j)) < 1e-15);

        CatalogEntry ger = make_catalog("geronimus", {{"alpha", 0.5}});
        CMatrix cg = cmv_truncation(ger.seq, 8).data;
        CHECK(std::abs(cg(2, 1) - 0.5 * std::sqrt(0.75)) < 1e-15);
    }

    TEST_CASE("cmv bandwidth and unit columns on random sequences") {
        VerblunskySequence seq = random_list(31, 40);
        OperatorTruncation t = cmv_truncation(seq, 32);
        for (int i = 0; i < 32; ++i)
            for (int j = 0; j < 32; ++j)
                if (std::abs(i - j) > 2) CHECK(std::abs(t.data(i, j)) == 0.0);
        // interior columns of both representations have unit norm
        CMatrix g = ggt_truncation(seq, 32).data;
        for (int j = 0; j + 2 < 32; ++j) {
            double cn = 0, gn = 0;
            for (int i = 0; i < 32; ++i) {
                cn += std::norm(t.data(i, j));
                gn += std::norm(g(i, j));
            }
            if (j + 3 < 32) CHECK(cn == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(gn == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("unitary-boundary truncations are unitary") {
        VerblunskySequence seq = random_list(77, 50);
        for (bool use_cmv : {false, true}) {
            CMatrix u = use_cmv ? cmv_truncation(seq, 48, true).data
                                : ggt_truncation(seq, 48, true).data;
            CMatrix prod = matmul(adjoint(u), u);
            for (int i = 0; i < 48; ++i) prod(i, i) -= 1.0;
            CHECK(max_abs(prod) < 1e-13);
        }
    }

    TEST_CASE("unitary proxy preserves norms of interior vectors") {
        VerblunskySequence seq = random_list(51, 40);
        CMatrix c = cmv_truncation(seq, 36).data;  // plain cut
        RngStream r(3, 3);
        std::vector<cplx> v(36, 0.0);
        for (int i = 2; i <= 32; ++i) v[static_cast<std::size_t>(i)] = cplx(r.normal(), r.normal());
        double nv = 0, nav = 0;
        std::vector<cplx> av(36, 0.0);
        for (int i = 0; i < 36; ++i) {
            cplx s = 0;
            for (int j = 0; j < 36; ++j) s += c(i, j) * v[static_cast<std::size_t>(j)];
            av[static_cast<std::size_t>(i)] = s;
        }
        for (int i = 0; i < 36; ++i) {
            nv += std::norm(v[static_cast<std::size_t>(i)]);
            nav += std::norm(av[static_cast<std::size_t>(i)]);
        }
        CHECK(std::sqrt(nav) == doctest::Approx(std::sqrt(nv)).epsilon(1e-12));
    }

    TEST_CASE("toeplitz and hankel entries from the geronimus symbol") {
        Symbol phi = geronimus_symbol(0.6);
        CMatrix t = toeplitz(phi, 6).data;
        CHECK(t(0, 0).real() == doctest::Approx(-0.36).epsilon(1e-15));
        CHECK(t(1, 0).real() == doctest::Approx(0.8).epsilon(1e-15));
        CHECK(t(0, 1).real() == doctest::Approx(-0.36 * 0.8).epsilon(1e-14));
        CHECK(std::abs(t(2, 0)) == 0.0);
        for (int i = 0; i < 5; ++i) CHECK(std::abs(t(i, i) - t(i + 1, i + 1)) == 0.0);

        CMatrix h = hankel(phi, 6).data;
        // anti-diagonal structure, entries psi_hat_{i+j+1}
        CHECK(std::abs(h(0, 0) - phi.coeff(1)) == 0.0);
        CHECK(std::abs(h(2, 3) - phi.coeff(6)) == 0.0);
        CHECK(std::abs(h(3, 2) - h(2, 3)) == 0.0);
    }

    TEST_CASE("hankel Hilbert-Schmidt norm counts anti-diagonals") {
        Symbol s = random_trig_poly(9, 5);
        CMatrix h = hankel(s, 64).data;
        double hs2 = frobenius_norm(h);
        hs2 *= hs2;
        double expect = 0.0;
        for (int k = 1; k <= 5; ++k) expect += k * std::norm(s.coeff(k));
        CHECK(hs2 == doctest::Approx(expect).epsilon(1e-12));
    }

    TEST_CASE("toeplitz-hankel product identity on interior blocks") {
        const int ka = 4, kb = 3, n = 64;
        Symbol a = random_trig_poly(100, ka), b = random_trig_poly(200, kb);
        Symbol ab = multiply_symbols(a, b, ka, kb);
        CMatrix lhs = toeplitz(ab, n).data;
        CMatrix rhs = matmul(toeplitz(a, n).data, toeplitz(b, n).data);
        rhs += matmul(hankel(a, n).data, hankel(reflect_symbol(b), n).data);
        lhs -= rhs;
        const int guard = ka + kb + 8;
        double worst = 0.0;
        for (int i = guard; i < n - guard; ++i)
            for (int j = guard; j < n - guard; ++j) worst = std::max(worst, std::abs(lhs(i, j)));
        CHECK(worst < 1e-12);
    }

    TEST_CASE("toeplitz norm approaches the sup of the symbol") {
        Symbol s = random_trig_poly(42, 4);
        double sup = 0.0;
        for (int i = 0; i < 4096; ++i)
            sup = std::max(sup, std::abs(s.evaluator(two_pi * i / 4096)(0, 0)));
        double tn = operator_norm(toeplitz(s, 256).data, 400);
        CHECK(tn <= sup * (1.0 + 1e-8));
        CHECK(tn >= sup * 0.93);
    }

    TEST_CASE("block toeplitz places 2x2 blocks on diagonals") {
        Symbol s;
        s.d = 2;
        s.fourier = [](std::int64_t k) {
            CMatrix m(2, 2);
            if (std::abs(k) > 2) return m;
            m(0, 0) = cplx(static_cast<double>(k), 1.0);
            m(1, 1) = cplx(0.0, static_cast<double>(k));
            m(0, 1) = 0.5;
            return m;
        };
        CMatrix t = block_toeplitz(s, 5).data;
        CHECK(t.rows() == 10);
        CHECK(std::abs(t(2, 2) - t(4, 4)) == 0.0);          // block diagonal constant
        CHECK(std::abs(t(2, 5) - t(4, 7)) == 0.0);          // off block diagonals too
        CHECK(std::abs(t(0, 1) - 0.5) == 0.0);
        CHECK(std::abs(t(6, 2) - cplx(2.0, 1.0)) == 0.0);   // k = +2 block, (0,0) entry
    }

    TEST_CASE("cayley basics") {
        OperatorTruncation one;
        one.data = CMatrix(1, 1);
        one.data(0, 0) = 1.0;
        CHECK(std::abs(cayley(one, 0.5).data(0, 0) - 3.0) < 1e-14);

        // CMV(cue) unitary proxy: resolvent norm within the unitary bound
        OperatorTruncation c = cmv_truncation(make_catalog("cue").seq, 64, true);
        CMatrix shifted = c.data;
        for (int i = 0; i < 64; ++i) shifted(i, i) -= 0.9;
        CMatrix inv = lu_inverse(lu_factor(shifted));
        CHECK(operator_norm(inv) <= (1.0 / 0.1) * 1.1);

        // real sequences give real Cayley matrices
        OperatorTruncation g = ggt_truncation(make_catalog("geronimus", {{"alpha", 0.4}}).seq, 32, true);
        CMatrix b = cayley(g, cplx(0.7, 0.0)).data;
        CHECK(max_abs(hermitian_part(b)) > 0.0);
        double im = 0.0;
        for (int i = 0; i < 32; ++i)
            for (int j = 0; j < 32; ++j) im = std::max(im, std::abs(b(i, j).imag()));
        CHECK(im < 1e-12);
    }

    TEST_CASE("cayley of unitary proxy has positive interior numerical range") {
        VerblunskySequence seq = random_list(64, 40);
        OperatorTruncation c = cmv_truncation(seq, 40, true);
        const cplx omega(0.6, 0.2);
        CMatrix b = cayley(c, omega).data;
        RngStream r(8, 8);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<cplx> v(40, 0.0);
            double nv = 0.0;
            for (int i = 4; i < 36; ++i) {
                v[static_cast<std::size_t>(i)] = cplx(r.normal(), r.normal());
                nv += std::norm(v[static_cast<std::size_t>(i)]);
            }
            cplx quad = 0.0;
            for (int i = 0; i < 40; ++i) {
                cplx s = 0.0;
                for (int j = 0; j < 40; ++j) s += b(i, j) * v[static_cast<std::size_t>(j)];
                quad += std::conj(v[static_cast<std::size_t>(i)]) * s;
            }
            CHECK(quad.real() * (1.0 - std::norm(omega)) >= -1e-9 * nv);
        }
    }

    TEST_CASE("cayley singular pivot error carries the magnitude") {
        OperatorTruncation t;
        t.data = CMatrix(2, 2);
        t.data(0, 0) = 0.5;
        t.data(1, 1) = 0.5;  // (A - 0.5 I) singular
        CHECK_THROWS_AS(cayley(t, cplx(0.5, 0.0)), numeric_error);
    }

    TEST_CASE("cue ggt resolvent is the truncated shift Neumann series") {
        // (S - z)^{-1}_{ij} = -z^{j-i-1} for i >= j: geometric growth down the
        // triangle at rate ln(1/|z|) per index
        const cplx z(0.5, 0.0);
        const int n = 24;
        CMatrix s = ggt_truncation(make_catalog("cue").seq, n).data;
        for (int i = 0; i < n; ++i) s(i, i) -= z;
        CMatrix inv = lu_inverse(lu_factor(s));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                cplx expect = i >= j ? -std::pow(z, static_cast<double>(j - i - 1)) : cplx(0.0);
                CHECK(std::abs(inv(i, j) - expect) < 1e-9 * std::max(1.0, std::abs(expect)));
            }
        double rate = resolvent_decay_rate(make_catalog("cue").seq, z, 64, OperatorKind::ggt);
        CHECK(std::abs(rate) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
        CHECK(rate < 0.0);  // growth, not decay, for the nilpotent cut
    }

    TEST_CASE("geronimus resolvent decay exceeds the Combes-Thomas rate") {
        CatalogEntry ger = make_catalog("geronimus", {{"alpha", 0.5}});
        const double rho = std::sqrt(0.75);
        const cplx z(0.9, 0.0);
        double theta = std::min(0.1 / (2.0 * (12.0 / ((1 - rho) * (1 - rho)) + 3.0)),
                                std::log((1 + rho) / (2 * rho)));
        double rate = resolvent_decay_rate(ger.seq, z, 400, OperatorKind::ggt);
        CHECK(rate >= theta);
        // monotonicity probe: decay strengthens deeper inside the disk
        double r1 = resolvent_decay_rate(ger.seq, cplx(0.9, 0.0), 200, OperatorKind::ggt);
        double r2 = resolvent_decay_rate(ger.seq, cplx(0.7, 0.0), 200, OperatorKind::ggt);
        double r3 = resolvent_decay_rate(ger.seq, cplx(0.5, 0.0), 200, OperatorKind::ggt);
        CHECK(r2 > r1);
        CHECK(r3 > r2);
    }

    TEST_CASE("combes-thomas bound for cayley transforms of geronimus ggt") {
        for (double alpha : {0.2, 0.5, 0.8}) {
            CatalogEntry ger = make_catalog("geronimus", {{"alpha", alpha}});
            const double rho = std::sqrt(1.0 - alpha * alpha);
            for (double ngamma : {10.0, 100.0}) {
                const cplx z(1.0 - 1.0 / ngamma, 0.0);
                double d = 1.0 / ngamma;
                double theta = std::min(d / (2.0 * (12.0 / ((1 - rho) * (1 - rho)) + 3.0)),
                                        std::log((1 + rho) / (2 * rho)));
                OperatorTruncation g = ggt_truncation(ger.seq, 160, true);
                CMatrix b = cayley(g, z).data;
                double rate = fit_offdiag_decay(b);
                CHECK(rate >= theta);
            }
        }
    }
}
