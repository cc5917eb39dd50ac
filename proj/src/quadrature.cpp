#include "opuc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace opuc {

const GlRule& gl_rule(int points) {
    static std::map<int, GlRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(points);
    if (it != cache.end()) return it->second;
    GlRule rule;
    rule.x.resize(static_cast<std::size_t>(points));
    rule.w.resize(static_cast<std::size_t>(points));
    const int n = points;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev-like initial guess.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it2 = 0; it2 < 100; ++it2) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[static_cast<std::size_t>(i)] = -x;
        rule.w[static_cast<std::size_t>(i)] = w;
        rule.x[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    auto [pos, ok] = cache.emplace(points, std::move(rule));
    (void)ok;
    return pos->second;
}

namespace {

cplx gl_panel(const std::function<cplx(double)>& f, double a, double b, const GlRule& r) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

cplx adaptive_rec(const std::function<cplx(double)>& f, double a, double b, cplx whole,
                  double tol, int depth, int max_depth, double* err_acc) {
    const double mid = 0.5 * (a + b);
    const GlRule& r = gl_rule(15);
    cplx left = gl_panel(f, a, mid, r);
    cplx right = gl_panel(f, mid, b, r);
    double err = std::abs(left + right - whole);
    const bool at_floor = depth >= max_depth || (b - a) <= 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
    if ((std::isfinite(err) && err <= tol) || at_floor) {
        if (at_floor && !(err <= 1e3 * std::max(tol, 1e-300)))
            throw numeric_error("adaptive quadrature did not converge (residual " +
                                std::to_string(err) + ")");
        if (err_acc) *err_acc += err;
        return left + right;
    }
    return adaptive_rec(f, a, mid, left, 0.6 * tol, depth + 1, max_depth, err_acc) +
           adaptive_rec(f, mid, b, right, 0.6 * tol, depth + 1, max_depth, err_acc);
}

}  // namespace

cplx adaptive_integrate(const std::function<cplx(double)>& f, double a, double b, double rel_tol,
                        double abs_tol, int max_depth) {
    if (b <= a) return 0.0;
    const GlRule& r = gl_rule(15);
    cplx whole = gl_panel(f, a, b, r);
    double tol = std::max(abs_tol, rel_tol * std::abs(whole));
    double err = 0.0;
    cplx v = adaptive_rec(f, a, b, whole, tol, 0, max_depth, &err);
    // rescale tolerance once if the first estimate was far off
    double tol2 = std::max(abs_tol, rel_tol * std::abs(v));
    if (tol2 > 4.0 * tol) return v;
    if (tol2 < 0.25 * tol) {
        err = 0.0;
        v = adaptive_rec(f, a, b, whole, tol2, 0, max_depth, &err);
    }
    return v;
}

cplx integrate_arc(const std::function<cplx(double)>& f, const ArcSpec& arc, double rel_tol,
                   double abs_tol) {
    const double len = arc.hi - arc.lo;
    if (len <= 0.0) return 0.0;
    double cut_lo = arc.lo, cut_hi = arc.hi;
    cplx total = 0.0;
    if (arc.sing_lo != 0.0) {
        cut_lo = arc.lo + 0.15 * len;
        const double m = std::max(1.0, 3.0 / (1.0 + arc.sing_lo));
        const double umax = std::pow(cut_lo - arc.lo, 1.0 / m);
        total += adaptive_integrate(
            [&](double u) { return f(arc.lo + std::pow(u, m)) * m * std::pow(u, m - 1.0); }, 0.0,
            umax, rel_tol, abs_tol);
    }
    if (arc.sing_hi != 0.0) {
        cut_hi = arc.hi - 0.15 * len;
        const double m = std::max(1.0, 3.0 / (1.0 + arc.sing_hi));
        const double umax = std::pow(arc.hi - cut_hi, 1.0 / m);
        total += adaptive_integrate(
            [&](double u) { return f(arc.hi - std::pow(u, m)) * m * std::pow(u, m - 1.0); }, 0.0,
            umax, rel_tol, abs_tol);
    }
    total += adaptive_integrate(f, cut_lo, cut_hi, rel_tol, abs_tol);
    return total;
}

void arc_panel_nodes(const ArcSpec& arc, double max_freq, int points_per_panel,
                     std::vector<double>& nodes, std::vector<double>& weights) {
    const double len = arc.hi - arc.lo;
    if (len <= 0.0) return;
    const GlRule& r = gl_rule(points_per_panel);
    const double panel_len = std::min(len, 1.35 * points_per_panel / std::max(max_freq, 1.0));

    auto emit = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            nodes.push_back(mid + half * r.x[i]);
            weights.push_back(half * r.w[i]);
        }
    };
    // Geometric panels toward a singular endpoint; each panel is smooth for
    // GL, and the untouched tail [a, a+h_min] is below the weight tolerance.
    auto emit_edge = [&](double endpoint, double inner, bool left, double sing) {
        double h = std::abs(inner - endpoint);
        double h_min = h;
        const double p1 = sing + 1.0;
        while (std::pow(h_min, p1) / p1 > 1e-15 && h_min > 1e-300) h_min *= 0.5;
        std::vector<std::pair<double, double>> spans;
        for (double a = h_min; a < h * 0.999; a *= 2.0) spans.emplace_back(a, std::min(2.0 * a, h));
        for (auto [a, b] : spans) {
            if (left)
                emit(endpoint + a, endpoint + b);
            else
                emit(endpoint - b, endpoint - a);
        }
    };

    double cut_lo = arc.lo, cut_hi = arc.hi;
    if (arc.sing_lo != 0.0) {
        cut_lo = arc.lo + std::min(0.1 * len, panel_len);
        emit_edge(arc.lo, cut_lo, true, arc.sing_lo);
    }
    if (arc.sing_hi != 0.0) {
        cut_hi = arc.hi - std::min(0.1 * len, panel_len);
        emit_edge(arc.hi, cut_hi, false, arc.sing_hi);
    }
    const double mid_len = cut_hi - cut_lo;
    const int n_panels = std::max(1, static_cast<int>(std::ceil(mid_len / panel_len)));
    for (int k = 0; k < n_panels; ++k)
        emit(cut_lo + mid_len * k / n_panels, cut_lo + mid_len * (k + 1) / n_panels);
}

}  // namespace opuc
