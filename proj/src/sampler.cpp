#include "opuc/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include "opuc/parallel.hpp"
#include "opuc/rng.hpp"
#include "opuc/szego.hpp"

namespace opuc {

namespace {

struct Cell {
    double theta;   // midpoint (or atom position)
    double weight;  // w(theta) * dtheta / 2pi, or atom mass
    double width;   // 0 for atoms
};

int auto_grid(std::int64_t n) {
    std::int64_t g = 8 * n;
    if (g < 1024) g = 1024;
    if (g > 16384) g = 16384;
    return static_cast<int>(g);
}

}  // namespace

PointSample sample_ope(const CircleMeasure& mu, const VerblunskySequence& seq, std::int64_t n,
                       std::uint64_t seed, std::int64_t sample_index, int grid) {
    if (n < 1) throw validation_error("sample_ope: n >= 1 required");
    if (mu.support.empty()) throw validation_error("sample_ope: measure has no support");
    const int cells_per_arc = grid > 0 ? grid : auto_grid(n);

    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(cells_per_arc) * mu.support.size() + mu.atoms.size() + 256);
    for (const ArcSpec& arc : mu.support) {
        const double h = (arc.hi - arc.lo) / cells_per_arc;
        for (int c = 0; c < cells_per_arc; ++c) {
            double t = arc.lo + (c + 0.5) * h;
            cells.push_back(Cell{t, mu.weight(t) * h / two_pi, h});
        }
    }
    for (const Atom& a : mu.atoms) cells.push_back(Cell{a.angle, a.mass, 0.0});

    AlphaCache cache(seq, n);
    auto kernel_diag = [&](double theta) {
        std::vector<cplx> f(static_cast<std::size_t>(n));
        eval_polys_all(cache, n, unit_circle(theta), f.data());
        double s = 0.0;
        for (const cplx& v : f) s += std::norm(v);
        return s;
    };

    // one refinement pass: split the 64 highest-mass cells into 4
    {
        std::vector<double> mass(cells.size());
        parallel_for_chunks(0, static_cast<std::int64_t>(cells.size()), 64,
                            [&](std::int64_t i0, std::int64_t i1) {
                                for (std::int64_t i = i0; i < i1; ++i) {
                                    const Cell& c = cells[static_cast<std::size_t>(i)];
                                    mass[static_cast<std::size_t>(i)] = c.weight * kernel_diag(c.theta);
                                }
                            });
        std::vector<std::size_t> order(cells.size());
        std::iota(order.begin(), order.end(), 0);
        std::size_t top = std::min<std::size_t>(64, cells.size());
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                          [&](std::size_t a, std::size_t b) { return mass[a] > mass[b]; });
        std::vector<Cell> refined;
        refined.reserve(cells.size() + 3 * top);
        std::vector<bool> split(cells.size(), false);
        for (std::size_t r = 0; r < top; ++r)
            if (cells[order[r]].width > 0.0) split[order[r]] = true;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!split[i]) {
                refined.push_back(cells[i]);
                continue;
            }
            const Cell& c = cells[i];
            const double h = c.width / 4.0;
            for (int s = 0; s < 4; ++s) {
                double t = c.theta - c.width / 2.0 + (s + 0.5) * h;
                refined.push_back(Cell{t, mu.weight(t) * h / two_pi, h});
            }
        }
        cells = std::move(refined);
    }

    const std::int64_t g_count = static_cast<std::int64_t>(cells.size());
    // f(theta_g) rows (planar float; draw masses only need ~1e-4 accuracy and
    // accepted points are re-evaluated in double) and the residual diagonal
    std::vector<float> fgrid_re(static_cast<std::size_t>(g_count) * static_cast<std::size_t>(n));
    std::vector<float> fgrid_im(fgrid_re.size());
    std::vector<double> resid(static_cast<std::size_t>(g_count));
    parallel_for_chunks(0, g_count, 64, [&](std::int64_t i0, std::int64_t i1) {
        std::vector<cplx> row(static_cast<std::size_t>(n));
        for (std::int64_t i = i0; i < i1; ++i) {
            eval_polys_all(cache, n, unit_circle(cells[static_cast<std::size_t>(i)].theta), row.data());
            double s = 0.0;
            float* rr = fgrid_re.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
            float* ri = fgrid_im.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
            for (std::int64_t j = 0; j < n; ++j) {
                s += std::norm(row[static_cast<std::size_t>(j)]);
                rr[j] = static_cast<float>(row[static_cast<std::size_t>(j)].real());
                ri[j] = static_cast<float>(row[static_cast<std::size_t>(j)].imag());
            }
            resid[static_cast<std::size_t>(i)] = s;
        }
    });

    RngStream rng = stream(seed, static_cast<std::uint64_t>(sample_index));
    std::vector<cplx> basis;  // e_0..e_{k-1}, each length n
    basis.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<double> cdf(static_cast<std::size_t>(g_count));
    std::vector<cplx> fpoint(static_cast<std::size_t>(n));
    PointSample out;
    out.seed = seed;
    out.sample_index = sample_index;
    out.diagnostics.grid = static_cast<int>(g_count);

    for (std::int64_t k = 0; k < n; ++k) {
        double total = 0.0;
        for (std::int64_t gi = 0; gi < g_count; ++gi) {
            total += std::max(0.0, resid[static_cast<std::size_t>(gi)]) *
                     cells[static_cast<std::size_t>(gi)].weight;
            cdf[static_cast<std::size_t>(gi)] = total;
        }
        if (!(total > 0.0)) throw numeric_error("sample_ope: residual mass vanished at step " +
                                                std::to_string(k));
        const double expected = static_cast<double>(n - k);
        const double dev = std::abs(total - expected) / expected;
        out.diagnostics.max_mass_deviation = std::max(out.diagnostics.max_mass_deviation, dev);
        if (dev > 1e-6) ++out.diagnostics.renormalizations;

        const double u = rng.uniform() * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::size_t ci = static_cast<std::size_t>(it - cdf.begin());
        if (ci >= cells.size()) ci = cells.size() - 1;
        const Cell& cell = cells[ci];
        double theta = cell.theta;
        if (cell.width > 0.0) theta = cell.theta + (rng.uniform() - 0.5) * cell.width;

        // exact residual at the drawn point
        eval_polys_all(cache, n, unit_circle(theta), fpoint.data());
        double kdiag = 0.0;
        for (std::int64_t j = 0; j < n; ++j) kdiag += std::norm(fpoint[static_cast<std::size_t>(j)]);
        std::vector<cplx> v(fpoint);
        double proj2 = 0.0;
        for (int pass = 0; pass < 2; ++pass) {  // one reorthogonalization pass
            for (std::int64_t i = 0; i < k; ++i) {
                const cplx* e_i = basis.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n);
                cplx c = 0.0;
                for (std::int64_t j = 0; j < n; ++j) c += v[static_cast<std::size_t>(j)] * std::conj(e_i[j]);
                for (std::int64_t j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] -= c * e_i[j];
                if (pass == 0) proj2 += std::norm(c);
            }
        }
        // residual density value; clipped at -1e-12 (scale aware), larger
        // negativity signals a degenerate Gram-Schmidt state
        const double residual_here = kdiag - proj2;
        if (residual_here < -1e-12 * std::max(1.0, kdiag))
            throw numeric_error("sample_ope: negative residual density at step " + std::to_string(k));
        double vnorm2 = 0.0;
        for (std::int64_t j = 0; j < n; ++j) vnorm2 += std::norm(v[static_cast<std::size_t>(j)]);
        if (!(vnorm2 > 0.0))
            throw numeric_error("sample_ope: numerically degenerate residual at step " +
                                std::to_string(k));
        const double inv = 1.0 / std::sqrt(vnorm2);
        for (std::int64_t j = 0; j < n; ++j) basis.push_back(v[static_cast<std::size_t>(j)] * inv);

        out.angles.push_back(wrap_angle(theta));

        // residual diagonal update: resid(g) -= |<f(g), e_k>|^2
        const cplx* e_k = basis.data() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n);
        std::vector<float> er(static_cast<std::size_t>(n)), ei(static_cast<std::size_t>(n));
        for (std::int64_t j = 0; j < n; ++j) {
            er[static_cast<std::size_t>(j)] = static_cast<float>(e_k[j].real());
            ei[static_cast<std::size_t>(j)] = static_cast<float>(e_k[j].imag());
        }
        parallel_for_chunks(0, g_count, 256, [&](std::int64_t i0, std::int64_t i1) {
            for (std::int64_t gi = i0; gi < i1; ++gi) {
                const float* rr = fgrid_re.data() + static_cast<std::size_t>(gi) * static_cast<std::size_t>(n);
                const float* ri = fgrid_im.data() + static_cast<std::size_t>(gi) * static_cast<std::size_t>(n);
                float cr = 0.0f, ci = 0.0f;
                for (std::int64_t j = 0; j < n; ++j) {
                    cr += rr[j] * er[static_cast<std::size_t>(j)] + ri[j] * ei[static_cast<std::size_t>(j)];
                    ci += ri[j] * er[static_cast<std::size_t>(j)] - rr[j] * ei[static_cast<std::size_t>(j)];
                }
                double r = resid[static_cast<std::size_t>(gi)] -
                           (static_cast<double>(cr) * cr + static_cast<double>(ci) * ci);
                resid[static_cast<std::size_t>(gi)] = r > 0.0 ? r : 0.0;
            }
        });
    }
    std::sort(out.angles.begin(), out.angles.end());
    return out;
}

std::vector<PointSample> batch_sample(const CircleMeasure& mu, const VerblunskySequence& seq,
                                      std::int64_t n, std::uint64_t seed, std::int64_t count,
                                      int workers, int grid) {
    if (count < 1) throw validation_error("batch_sample: count >= 1 required");
    int saved = worker_count();
    if (workers > 0) set_worker_count(workers);
    std::vector<PointSample> out(static_cast<std::size_t>(count));
    std::exception_ptr failure;
    std::mutex failure_mtx;
    // parallel across samples; nested loops inside sample_ope stay serial
    parallel_for_chunks(0, count, 1, [&](std::int64_t i0, std::int64_t i1) {
        for (std::int64_t i = i0; i < i1; ++i) {
            try {
                out[static_cast<std::size_t>(i)] = sample_ope(mu, seq, n, seed, i, grid);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mtx);
                if (!failure)
                    failure = std::make_exception_ptr(
                        numeric_error("batch_sample: sample " + std::to_string(i) + ": " + e.what()));
            }
        }
    });
    if (workers > 0) set_worker_count(saved >= 1 ? saved : 0);
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace opuc
