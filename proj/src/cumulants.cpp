#include "opuc/cumulants.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "opuc/parallel.hpp"
#include "opuc/quadrature.hpp"
#include "opuc/sampler.hpp"
#include "opuc/szego.hpp"

namespace opuc {

int default_buffer(std::int64_t n, double gamma, double eta_re) {
    double ng = std::pow(static_cast<double>(n), gamma);
    return static_cast<int>(std::ceil(12.0 * ng / std::max(eta_re, 0.25))) + 64;
}

CMatrix poisson_statistic_operator(const VerblunskySequence& seq, Basis basis, int N,
                                   const ScaledStatistic& stat) {
    stat.validate();
    if (stat.kind != ScaledStatistic::Kind::poisson)
        throw validation_error("poisson_statistic_operator: poisson statistic required");
    if (N <= stat.n) throw validation_error("statistic operator: need N > n");
    OperatorTruncation m = basis == Basis::ggt ? ggt_truncation(seq, N, true)
                                               : cmv_truncation(seq, N, true);
    OperatorTruncation cay = cayley(m, stat.omega());
    CMatrix a = hermitian_part(cay.data);
    a *= 1.0 / std::pow(static_cast<double>(stat.n), stat.gamma);
    return a;
}

namespace {

// All compositions of m into ordered positive parts, grouped under cyclic
// rotation (the trace is rotation invariant).
std::vector<std::vector<int>> compositions(int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int rest) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = 1; p <= rest; ++p) {
            cur.push_back(p);
            rec(rest - p);
            cur.pop_back();
        }
    };
    rec(m);
    return out;
}

std::vector<int> canonical_rotation(const std::vector<int>& v) {
    std::vector<int> best = v;
    std::vector<int> rot = v;
    for (std::size_t r = 1; r < v.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

struct BlockTraces {
    std::vector<CMatrix> blocks;                 // B_l = P A^l P for l <= m-1
    std::vector<cplx> restricted_trace;          // Tr(A^l P) for l = 1..m
    std::map<std::vector<int>, CMatrix> prefix;  // cached left products

    const CMatrix& product(const std::vector<int>& factors) {
        auto it = prefix.find(factors);
        if (it != prefix.end()) return it->second;
        if (factors.size() == 1)
            return prefix.emplace(factors, blocks[static_cast<std::size_t>(factors[0] - 1)])
                .first->second;
        std::vector<int> head(factors.begin(), factors.end() - 1);
        CMatrix p = matmul(product(head), blocks[static_cast<std::size_t>(factors.back() - 1)]);
        return prefix.emplace(factors, std::move(p)).first->second;
    }

    cplx necklace_trace(const std::vector<int>& comp) {
        if (comp.size() == 1) return restricted_trace[static_cast<std::size_t>(comp[0] - 1)];
        if (comp.size() == 2)
            return trace_product(blocks[static_cast<std::size_t>(comp[0] - 1)],
                                 blocks[static_cast<std::size_t>(comp[1] - 1)]);
        std::vector<int> head(comp.begin(), comp.end() - 1);
        return trace_product(product(head), blocks[static_cast<std::size_t>(comp.back() - 1)]);
    }
};

// Compositions of m with >= 2 parts only involve powers <= m-1, so only
// those blocks are materialized; Tr(A^m P) comes from row-column dots.
BlockTraces make_blocks(const CMatrix& a, int n, int m) {
    const int big = a.rows();
    BlockTraces bt;
    CMatrix v = a.block(0, 0, big, n);  // V_l = A^l P
    bt.blocks.push_back(v.block(0, 0, n, n));
    bt.restricted_trace.push_back(trace(bt.blocks[0]));
    for (int l = 2; l <= m; ++l) {
        cplx t = 0.0;  // Tr(A^l P) with v = V_{l-1}
        for (int i = 0; i < n; ++i) {
            const cplx* a_i = a.row(i);
            cplx s = 0.0;
            for (int k = 0; k < big; ++k) s += a_i[k] * v(k, i);
            t += s;
        }
        bt.restricted_trace.push_back(t);
        if (l <= m - 1) {
            v = matmul(a, v);
            bt.blocks.push_back(v.block(0, 0, n, n));
        }
    }
    return bt;
}

}  // namespace

double cumulant_trace_tk(const CMatrix& a, int n, int m) {
    if (m < 1 || m > 6) throw validation_error("cumulant_trace: orders 1..6 supported");
    if (n >= a.rows()) throw validation_error("cumulant_trace: need truncation N > n");
    BlockTraces bt = make_blocks(a, n, m);
    if (m == 1) return bt.restricted_trace[0].real();
    const cplx tr_m = bt.restricted_trace[static_cast<std::size_t>(m - 1)];
    std::map<std::vector<int>, cplx> trace_cache;
    cplx total = 0.0;
    for (const auto& comp : compositions(m)) {
        const int j = static_cast<int>(comp.size());
        std::vector<int> key = canonical_rotation(comp);
        auto it = trace_cache.find(key);
        if (it == trace_cache.end()) it = trace_cache.emplace(key, bt.necklace_trace(key)).first;
        double fprod = 1.0;
        for (int l : comp) fprod *= factorial(l);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        total += sign / static_cast<double>(j) * (it->second - tr_m) / fprod;
    }
    return total.real();
}

CumulantReport cumulant_trace(const CMatrix& a, int n, int m) {
    CumulantReport r;
    r.order = m;
    r.method = "trace";
    r.resolution = "N=" + std::to_string(a.rows());
    r.value = factorial(m) * cumulant_trace_tk(a, n, m);
    r.error_estimate = 0.0;
    return r;
}

CumulantReport cumulant_trace(const OperatorTruncation& a, int n, int m) {
    return cumulant_trace(a.data, n, m);
}

std::vector<CumulantReport> cumulant_mgf(const CMatrix& a, int n, const std::vector<int>& orders,
                                         double t_base) {
    for (int m : orders)
        if (m < 1 || m > 4) throw validation_error("cumulant_mgf: orders 1..4 supported");
    if (n >= a.rows()) throw validation_error("cumulant_mgf: need truncation N > n");
    const double nrm = one_norm(a);
    double h = std::min(t_base, 0.25 / std::max(nrm, 1e-12));

    cplx tr_pa = 0.0;
    for (int i = 0; i < n; ++i) tr_pa += a(i, i);

    auto g = [&](double t) -> double {
        if (t == 0.0) return 0.0;
        CMatrix at = a;
        at *= t;
        CMatrix e = matrix_exp(at);
        CMatrix blk = e.block(0, 0, n, n);
        for (int i = 0; i < n; ++i) blk(i, i) -= 1.0;
        CMatrix det_arg = CMatrix::identity(n);
        det_arg += blk;
        LuFactors f = lu_factor(std::move(det_arg));
        cplx ld = lu_log_det(f);
        double im = std::remainder(ld.imag(), two_pi);
        if (std::abs(im) > 1e-6)
            throw numeric_error("cumulant_mgf: determinant not positive (arg " + std::to_string(im) + ")");
        return ld.real() - t * tr_pa.real();
    };

    // g at +/-h, +/-2h for steps h and h/2
    std::map<double, double> gv;
    gv[0.0] = 0.0;
    for (double s : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) gv[s * h] = g(s * h);

    auto d2 = [&](double step) {
        return (-gv[2 * step] + 16 * gv[step] + 16 * gv[-step] - gv[-2 * step]) / (12 * step * step);
    };
    auto d3 = [&](double step) {
        return (gv[2 * step] - 2 * gv[step] + 2 * gv[-step] - gv[-2 * step]) / (2 * step * step * step);
    };
    auto d4 = [&](double step) {
        return (gv[2 * step] - 4 * gv[step] - 4 * gv[-step] + gv[-2 * step]) / (step * step * step * step);
    };

    std::vector<CumulantReport> out;
    for (int m : orders) {
        CumulantReport r;
        r.order = m;
        r.method = "mgf";
        r.resolution = "N=" + std::to_string(a.rows()) + ",h=" + std::to_string(h);
        if (m == 1) {
            r.value = tr_pa.real();
            r.error_estimate = 0.0;
        } else if (m == 2) {
            double c = d2(h), f2 = d2(0.5 * h);
            r.value = (16.0 * f2 - c) / 15.0;
            r.error_estimate = std::abs(r.value - f2);
        } else if (m == 3) {
            double c = d3(h), f3 = d3(0.5 * h);
            r.value = (4.0 * f3 - c) / 3.0;
            r.error_estimate = std::abs(r.value - f3);
        } else {
            double c = d4(h), f4 = d4(0.5 * h);
            r.value = (4.0 * f4 - c) / 3.0;
            r.error_estimate = std::abs(r.value - f4);
        }
        out.push_back(r);
    }
    return out;
}

namespace {
struct KStat {
    double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
};

KStat kstat_from_power_sums(double s1, double s2, double s3, double s4, double n) {
    KStat k;
    k.k1 = s1 / n;
    const double m2 = s2 - s1 * s1 / n;
    const double m3 = s3 - 3.0 * s2 * s1 / n + 2.0 * s1 * s1 * s1 / (n * n);
    const double m4 = s4 - 4.0 * s3 * s1 / n + 6.0 * s2 * s1 * s1 / (n * n) -
                      3.0 * s1 * s1 * s1 * s1 / (n * n * n);
    k.k2 = m2 / (n - 1.0);
    k.k3 = n * m3 / ((n - 1.0) * (n - 2.0));
    k.k4 = (n * (n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) / ((n - 1.0) * (n - 2.0) * (n - 3.0));
    return k;
}
}  // namespace

std::vector<CumulantReport> kstatistics(const std::vector<double>& xs, int max_order) {
    if (max_order < 1 || max_order > 4) throw validation_error("kstatistics: orders 1..4 supported");
    const std::size_t n = xs.size();
    if (static_cast<int>(n) < 10 * max_order)
        throw validation_error("kstatistics: need at least 10*order samples");
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    for (double x : xs) {
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
    }
    const double dn = static_cast<double>(n);
    KStat k = kstat_from_power_sums(s1, s2, s3, s4, dn);
    if (max_order >= 3 && k.k2 <= 0.0)
        throw numeric_error("kstatistics: degenerate sample (zero variance)");

    // delete-one jackknife through the power sums
    std::vector<double> jk1, jk2, jk3, jk4;
    jk1.reserve(n);
    jk2.reserve(n);
    jk3.reserve(n);
    jk4.reserve(n);
    for (double x : xs) {
        KStat kj = kstat_from_power_sums(s1 - x, s2 - x * x, s3 - x * x * x, s4 - x * x * x * x,
                                         dn - 1.0);
        jk1.push_back(kj.k1);
        jk2.push_back(kj.k2);
        jk3.push_back(kj.k3);
        jk4.push_back(kj.k4);
    }
    auto jackknife_se = [dn](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::sqrt((dn - 1.0) / dn * ss);
    };

    std::vector<CumulantReport> out;
    const double kv[4] = {k.k1, k.k2, k.k3, k.k4};
    const std::vector<double>* jv[4] = {&jk1, &jk2, &jk3, &jk4};
    for (int m = 1; m <= max_order; ++m) {
        CumulantReport r;
        r.order = m;
        r.method = "mc";
        r.resolution = "samples=" + std::to_string(n);
        r.value = kv[m - 1];
        r.error_estimate = jackknife_se(*jv[m - 1]);
        out.push_back(r);
    }
    return out;
}

namespace {
struct QuadGrid {
    std::vector<double> theta;
    std::vector<double> w;  // includes dtheta/2pi or atom mass
};

QuadGrid measure_grid(const CircleMeasure& mu, double max_freq, double refine) {
    QuadGrid g;
    if (mu.full_circle_smooth()) {
        int m = static_cast<int>(std::ceil(1.1 * max_freq * refine)) + 64;
        g.theta.reserve(static_cast<std::size_t>(m));
        g.w.reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            double t = two_pi * j / m;
            double wt = mu.weight(t) / m;
            g.theta.push_back(t);
            g.w.push_back(wt);
        }
    } else {
        for (const ArcSpec& arc : mu.support) {
            std::vector<double> nodes, weights;
            arc_panel_nodes(arc, max_freq * refine, 24, nodes, weights);
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                g.theta.push_back(nodes[i]);
                g.w.push_back(weights[i] * mu.weight(nodes[i]) / two_pi);
            }
        }
    }
    for (const Atom& a : mu.atoms) {
        g.theta.push_back(a.angle);
        g.w.push_back(a.mass);
    }
    return g;
}

double variance_on_grid(const QuadGrid& g, const AlphaCache& cache, std::int64_t n,
                        const statistic_fn& f) {
    const std::int64_t m = static_cast<std::int64_t>(g.theta.size());
    std::vector<cplx> phi_n(static_cast<std::size_t>(m)), star_n(static_cast<std::size_t>(m)),
        fv(static_cast<std::size_t>(m));
    std::vector<cplx> zv(static_cast<std::size_t>(m));
    parallel_for_chunks(0, m, 256, [&](std::int64_t i0, std::int64_t i1) {
        for (std::int64_t i = i0; i < i1; ++i) {
            PolyPair p = eval_polys(cache, n, unit_circle(g.theta[static_cast<std::size_t>(i)]));
            phi_n[static_cast<std::size_t>(i)] = p.phi;
            star_n[static_cast<std::size_t>(i)] = p.phi_star;
            fv[static_cast<std::size_t>(i)] = f(g.theta[static_cast<std::size_t>(i)]);
            zv[static_cast<std::size_t>(i)] = unit_circle(g.theta[static_cast<std::size_t>(i)]);
        }
    });
    double total = parallel_sum<double>(0, m, 64, [&](std::int64_t i0, std::int64_t i1) {
        double acc = 0.0;
        std::vector<cplx> poly_buf;
        for (std::int64_t p = i0; p < i1; ++p) {
            const std::size_t sp = static_cast<std::size_t>(p);
            const double wp = g.w[sp];
            if (wp == 0.0) continue;
            double row = 0.0;
            for (std::int64_t q = 0; q < m; ++q) {
                if (q == p) continue;
                const std::size_t sq = static_cast<std::size_t>(q);
                const double wq = g.w[sq];
                if (wq == 0.0) continue;
                const cplx denom = 1.0 - zv[sp] * std::conj(zv[sq]);
                double k2;
                if (std::abs(denom) > 1e-8) {
                    const cplx k = (star_n[sp] * std::conj(star_n[sq]) - phi_n[sp] * std::conj(phi_n[sq])) / denom;
                    k2 = std::norm(k);
                } else {
                    if (poly_buf.size() < 2 * static_cast<std::size_t>(n))
                        poly_buf.resize(2 * static_cast<std::size_t>(n));
                    eval_polys_all(cache, n, zv[sp], poly_buf.data());
                    eval_polys_all(cache, n, zv[sq], poly_buf.data() + n);
                    cplx s = 0.0;
                    for (std::int64_t j = 0; j < n; ++j)
                        s += poly_buf[static_cast<std::size_t>(j)] *
                             std::conj(poly_buf[static_cast<std::size_t>(n + j)]);
                    k2 = std::norm(s);
                }
                row += wq * std::norm(fv[sp] - fv[sq]) * k2;
            }
            acc += wp * row;
        }
        return acc;
    });
    return 0.5 * total;
}
}  // namespace

CumulantReport variance_quadrature(const CircleMeasure& mu, const VerblunskySequence& seq,
                                   std::int64_t n, const statistic_fn& f, const QuadOptions& opts) {
    AlphaCache cache(seq, n + 1);
    const double max_freq = 2.0 * (static_cast<double>(n) + opts.stat_freq_hint);
    double refine = 1.0;
    QuadGrid g = measure_grid(mu, max_freq, refine);
    double prev = variance_on_grid(g, cache, n, f);
    for (int r = 0; r < opts.max_refinements; ++r) {
        refine *= opts.growth;
        g = measure_grid(mu, max_freq, refine);
        double cur = variance_on_grid(g, cache, n, f);
        double err = std::abs(cur - prev);
        if (err <= std::max(opts.tol, 1e-9 * std::abs(cur))) {
            CumulantReport rep;
            rep.order = 2;
            rep.method = "quadrature";
            rep.resolution = "nodes=" + std::to_string(g.theta.size());
            rep.value = cur;
            rep.error_estimate = err;
            return rep;
        }
        prev = cur;
    }
    throw numeric_error("variance_quadrature: not converged (last estimates " +
                        std::to_string(prev) + ")");
}

std::vector<CumulantReport> mc_cumulants(const std::vector<PointSample>& samples,
                                         const std::function<double(double)>& f,
                                         const std::vector<int>& orders) {
    if (samples.empty()) throw validation_error("mc_cumulants: no samples");
    std::vector<double> xs(samples.size());
    parallel_for_chunks(0, static_cast<std::int64_t>(samples.size()), 16,
                        [&](std::int64_t i0, std::int64_t i1) {
                            for (std::int64_t i = i0; i < i1; ++i) {
                                double s = 0.0;
                                for (double t : samples[static_cast<std::size_t>(i)].angles) s += f(t);
                                xs[static_cast<std::size_t>(i)] = s;
                            }
                        });
    int max_order = 1;
    for (int m : orders) max_order = std::max(max_order, m);
    std::vector<CumulantReport> all = kstatistics(xs, max_order);
    std::vector<CumulantReport> out;
    for (int m : orders) out.push_back(all[static_cast<std::size_t>(m - 1)]);
    return out;
}

}  // namespace opuc
