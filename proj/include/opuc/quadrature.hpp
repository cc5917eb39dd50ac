#pragma once

#include <functional>
#include <vector>

#include "opuc/common.hpp"

namespace opuc {

/// Gauss-Legendre rule on [-1, 1]; cached by point count.
struct GlRule {
    std::vector<double> x, w;
};
const GlRule& gl_rule(int points);

/// Adaptive Gauss-Legendre on [a, b] by panel bisection (GL15 vs two GL15
/// halves). Both tolerances are honored; abs_tol guards against pure-noise
/// refinement around zero.
cplx adaptive_integrate(const std::function<cplx(double)>& f, double a, double b,
                        double rel_tol = 1e-11, double abs_tol = 1e-14, int max_depth = 40);

/// One support arc with optional endpoint power behavior: the integrand
/// behaves like |t - a|^sing_lo near the left endpoint (and symmetrically on
/// the right). Exponents > -1.
struct ArcSpec {
    double lo = 0.0, hi = 0.0;
    double sing_lo = 0.0, sing_hi = 0.0;
};

/// Integrate f over the arc with power-law substitution panels at singular
/// endpoints, then adaptive GL on the smooth middle.
cplx integrate_arc(const std::function<cplx(double)>& f, const ArcSpec& arc,
                   double rel_tol = 1e-11, double abs_tol = 1e-14);

/// Fixed tensor-quadrature nodes resolving oscillation up to |frequency| =
/// max_freq on the arc, with substitution panels near singular endpoints.
/// Weights include the dtheta measure (no 1/2pi).
void arc_panel_nodes(const ArcSpec& arc, double max_freq, int points_per_panel,
                     std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace opuc
