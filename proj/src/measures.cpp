#include "opuc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>

namespace opuc {

cplx VerblunskySequence::alpha(std::int64_t k) const {
    if (k < 0) throw validation_error("alpha index must be >= 0");
    cplx a = eval(k);
    if (!(std::abs(a) < 1.0))
        throw numeric_error("Verblunsky coefficient alpha_" + std::to_string(k) +
                            " leaves the unit disk (|alpha| = " + std::to_string(std::abs(a)) + ")");
    return a;
}

double VerblunskySequence::rho(std::int64_t k) const {
    cplx a = alpha(k);
    return std::sqrt(std::max(0.0, 1.0 - std::norm(a)));
}

bool CircleMeasure::full_circle_smooth() const {
    return support.size() == 1 && support[0].lo == 0.0 && support[0].hi == two_pi &&
           support[0].sing_lo == 0.0 && support[0].sing_hi == 0.0;
}

double CircleMeasure::density_mass(double rel_tol) const {
    double total = 0.0;
    for (const ArcSpec& arc : support)
        total += integrate_arc([&](double t) { return cplx(weight(t)); }, arc, rel_tol).real() / two_pi;
    return total;
}

double CircleMeasure::total_mass(double rel_tol) const {
    double total = density_mass(rel_tol);
    for (const Atom& a : atoms) total += a.mass;
    return total;
}

namespace {

void check_unit_mass(const CircleMeasure& mu) {
    double mass = mu.total_mass(1e-12);
    if (std::abs(mass - 1.0) > 1e-10)
        throw numeric_error("measure '" + mu.name + "' has total mass " + std::to_string(mass));
}

VerblunskySequence constant_sequence(const std::string& kind, const nlohmann::json& params, cplx a) {
    VerblunskySequence s;
    s.kind = kind;
    s.params = params;
    s.eval = [a](std::int64_t) { return a; };
    return s;
}

// Levinson-backed evaluator over analytically known moments, grown on demand.
struct LevinsonCache {
    std::function<cplx(std::int64_t)> moment;  // c_k, k >= 0
    std::vector<cplx> alphas;
    std::mutex mtx;

    cplx get(std::int64_t k) {
        std::lock_guard<std::mutex> lock(mtx);
        if (static_cast<std::int64_t>(alphas.size()) <= k) {
            std::int64_t want = std::max<std::int64_t>(2 * (k + 1), 16);
            std::vector<cplx> c(static_cast<std::size_t>(want) + 1);
            for (std::int64_t j = 0; j <= want; ++j) c[static_cast<std::size_t>(j)] = moment(j);
            alphas = levinson(c, static_cast<int>(want));
        }
        return alphas[static_cast<std::size_t>(k)];
    }
};

struct HuaPickrellCache {
    double delta;
    std::vector<double> alphas;
    std::mutex mtx;

    double get(std::int64_t k) {
        std::lock_guard<std::mutex> lock(mtx);
        if (static_cast<std::int64_t>(alphas.size()) <= k)
            alphas = hua_pickrell_alphas(delta, std::max<std::int64_t>(2 * (k + 1), 64));
        return alphas[static_cast<std::size_t>(k)];
    }
};

CatalogEntry make_cue(const nlohmann::json& params) {
    CatalogEntry e;
    e.seq = constant_sequence("cue", params, 0.0);
    CircleMeasure mu;
    mu.name = "cue";
    mu.weight = [](double) { return 1.0; };
    mu.support = {ArcSpec{0.0, two_pi}};
    e.measure = std::move(mu);
    return e;
}

CatalogEntry make_geronimus(const nlohmann::json& params) {
    const double alpha = params.at("alpha").get<double>();
    if (!(std::abs(alpha) < 1.0)) throw validation_error("geronimus: need |alpha| < 1");
    if (alpha == 0.0) {
        CatalogEntry e = make_cue(params);
        e.seq.kind = "geronimus";
        return e;
    }
    CatalogEntry e;
    e.seq = constant_sequence("geronimus", params, alpha);
    const double rho2 = 1.0 - alpha * alpha;
    const double i_alpha = 2.0 * std::asin(std::abs(alpha));
    CircleMeasure mu;
    mu.name = "geronimus";
    mu.weight = [rho2, alpha](double t) {
        double c = std::cos(0.5 * t);
        double s2 = rho2 - c * c;
        if (s2 <= 0.0) return 0.0;
        return std::sqrt(s2) / (std::abs(1.0 + alpha) * std::sin(0.5 * t));
    };
    mu.support = {ArcSpec{i_alpha, two_pi - i_alpha, 0.5, 0.5}};
    // For alpha > 0 the constant-coefficient measure carries a point mass at
    // theta = 0 of mass 2 alpha/(1+alpha); the arc density alone integrates to
    // (1-alpha)/(1+alpha).
    if (alpha > 0.0) mu.atoms.push_back(Atom{0.0, 2.0 * alpha / (1.0 + alpha)});
    check_unit_mass(mu);
    e.measure = std::move(mu);
    return e;
}

CatalogEntry make_bernstein_szego(const nlohmann::json& params) {
    const double r = params.at("r").get<double>();
    if (!(r > 0.0 && r < 1.0)) throw validation_error("bernstein-szego: need 0 < r < 1");
    CatalogEntry e;
    e.seq.kind = "bernstein-szego";
    e.seq.params = params;
    e.seq.eval = [r](std::int64_t k) { return k == 0 ? cplx(r) : cplx(0.0); };
    CircleMeasure mu;
    mu.name = "bernstein-szego";
    mu.weight = [r](double t) {
        double d = 1.0 - 2.0 * r * std::cos(t) + r * r;
        return (1.0 - r * r) / d;
    };
    mu.support = {ArcSpec{0.0, two_pi}};
    check_unit_mass(mu);
    e.measure = std::move(mu);
    return e;
}

CatalogEntry make_single_moment(const nlohmann::json& params) {
    CatalogEntry e;
    e.seq.kind = "single-moment";
    e.seq.params = params;
    e.seq.eval = [](std::int64_t k) { return cplx(-1.0 / static_cast<double>(k + 2)); };
    CircleMeasure mu;
    mu.name = "single-moment";
    mu.weight = [](double t) { return 1.0 - std::cos(t); };
    mu.support = {ArcSpec{0.0, two_pi}};
    e.measure = std::move(mu);
    return e;
}

CatalogEntry make_inserted_mass_point(const nlohmann::json& params) {
    const double h = params.at("h").get<double>();
    const double theta0 = params.value("theta0", 0.0);
    if (!(h > 0.0 && h < 1.0)) throw validation_error("inserted-mass-point: need 0 < h < 1");
    CatalogEntry e;
    e.seq.kind = "inserted-mass-point";
    e.seq.params = params;
    auto cache = std::make_shared<LevinsonCache>();
    cache->moment = [h, theta0](std::int64_t k) {
        if (k == 0) return cplx(1.0);
        return h * std::exp(cplx(0.0, -theta0 * static_cast<double>(k)));
    };
    e.seq.eval = [cache](std::int64_t k) { return cache->get(k); };
    CircleMeasure mu;
    mu.name = "inserted-mass-point";
    mu.weight = [h](double) { return 1.0 - h; };
    mu.support = {ArcSpec{0.0, two_pi}};
    mu.atoms = {Atom{wrap_angle(theta0), h}};
    e.measure = std::move(mu);
    return e;
}

CatalogEntry make_hua_pickrell(const nlohmann::json& params) {
    const double delta = params.at("delta").get<double>();
    if (!(delta > -0.5)) throw validation_error("hua-pickrell: need delta > -1/2");
    CatalogEntry e;
    e.seq.kind = "hua-pickrell";
    e.seq.params = params;
    auto cache = std::make_shared<HuaPickrellCache>();
    cache->delta = delta;
    e.seq.eval = [cache](std::int64_t k) { return cplx(cache->get(k)); };

    CircleMeasure mu;
    mu.name = "hua-pickrell";
    // 2 - 2cos(t) = (2 sin(t/2))^2 evaluated through sin so the weight stays
    // accurate arbitrarily close to the singular point; the arcs put that
    // point at t = 0 where endpoint distances are exact.
    auto raw = [delta](double t) { return std::pow(2.0 * std::abs(std::sin(0.5 * t)), 2.0 * delta); };
    mu.support = {ArcSpec{-pi, 0.0, 0.0, 2.0 * delta}, ArcSpec{0.0, pi, 2.0 * delta, 0.0}};
    // Normalization by quadrature (rel tol 1e-12) rather than Gamma functions.
    double z = 0.0;
    for (const ArcSpec& arc : mu.support)
        z += integrate_arc([&](double t) { return cplx(raw(t)); }, arc, 1e-12).real() / two_pi;
    if (!(z > 0.0) || !std::isfinite(z)) throw numeric_error("hua-pickrell: non-normalizable density");
    mu.normalization = 1.0 / z;
    mu.weight = [raw, z](double t) { return raw(t) / z; };
    e.measure = std::move(mu);
    return e;
}

CatalogEntry make_perturbed(const nlohmann::json& params) {
    CatalogEntry base = make_catalog_spec(params.at("base"));
    const double c = params.at("c").get<double>();
    const double beta = params.at("beta").get<double>();
    CatalogEntry e;
    e.seq.kind = "perturbed";
    e.seq.params = params;
    auto base_eval = base.seq.eval;
    e.seq.eval = [base_eval, c, beta](std::int64_t k) {
        return base_eval(k) + c * std::pow(static_cast<double>(k + 1), -beta);
    };
    for (std::int64_t k = 0; k < 4096; ++k)
        if (!(std::abs(e.seq.eval(k)) < 1.0))
            throw validation_error("perturbed: |alpha_" + std::to_string(k) + "| >= 1");
    return e;  // no closed-form density
}

CatalogEntry make_explicit_list(const nlohmann::json& params) {
    std::vector<cplx> list;
    for (const auto& v : params.at("alphas")) {
        if (v.is_number())
            list.emplace_back(v.get<double>(), 0.0);
        else
            list.emplace_back(v.value("re", 0.0), v.value("im", 0.0));
    }
    CatalogEntry e;
    e.seq.kind = "explicit-list";
    e.seq.params = params;
    auto data = std::make_shared<std::vector<cplx>>(std::move(list));
    e.seq.eval = [data](std::int64_t k) {
        if (k >= static_cast<std::int64_t>(data->size()))
            throw validation_error("explicit-list: index " + std::to_string(k) + " beyond list");
        return (*data)[static_cast<std::size_t>(k)];
    };
    return e;
}

}  // namespace

CatalogEntry make_catalog(const std::string& kind, const nlohmann::json& params) {
    if (kind == "cue") return make_cue(params);
    if (kind == "geronimus") return make_geronimus(params);
    if (kind == "bernstein-szego") return make_bernstein_szego(params);
    if (kind == "single-moment") return make_single_moment(params);
    if (kind == "inserted-mass-point") return make_inserted_mass_point(params);
    if (kind == "hua-pickrell") return make_hua_pickrell(params);
    if (kind == "perturbed") return make_perturbed(params);
    if (kind == "explicit-list") return make_explicit_list(params);
    throw validation_error("unknown catalog kind '" + kind + "'");
}

CatalogEntry make_catalog_spec(const nlohmann::json& spec) {
    return make_catalog(spec.at("kind").get<std::string>(), spec);
}

CatalogEntry parse_measure_spec(const std::string& spec) {
    std::string s = spec;
    if (!s.empty() && s.front() == '{') return make_catalog_spec(nlohmann::json::parse(s));
    return make_catalog(s, nlohmann::json{{"kind", s}});
}

std::vector<cplx> trig_moments(const CircleMeasure& mu, int K, double rel_tol) {
    if (K < 0) throw validation_error("trig_moments: K >= 0 required");
    std::vector<cplx> c(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) {
        cplx v = 0.0;
        for (const ArcSpec& arc : mu.support)
            v += integrate_arc(
                     [&](double t) { return mu.weight(t) * std::exp(cplx(0.0, -k * t)); }, arc,
                     rel_tol, 1e-14) /
                 two_pi;
        for (const Atom& a : mu.atoms) v += a.mass * std::exp(cplx(0.0, -k * a.angle));
        c[static_cast<std::size_t>(k)] = v;
    }
    if (std::abs(c[0] - 1.0) > 1e-8)
        throw numeric_error("trig_moments: density not normalized (c_0 = " +
                            std::to_string(c[0].real()) + ")");
    return c;
}

namespace {
// reciprocal power series to the length of h (h[0] != 0)
std::vector<cplx> series_inverse(const std::vector<cplx>& h) {
    std::vector<cplx> b(h.size());
    b[0] = 1.0 / h[0];
    for (std::size_t m = 1; m < h.size(); ++m) {
        cplx s = 0.0;
        for (std::size_t j = 1; j <= m; ++j) s += h[j] * b[m - j];
        b[m] = -s * b[0];
    }
    return b;
}

std::vector<cplx> series_product(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                 std::size_t len) {
    std::vector<cplx> p(len, cplx(0.0));
    for (std::size_t i = 0; i < a.size() && i < len; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) p[i + j] += a[i] * b[j];
    return p;
}
}  // namespace

// Schur-algorithm form of the inverse problem: the recursion is run on the
// Taylor coefficients of the Schur function, whose iterates are all bounded
// by one on the disk. The naive monic-coefficient recursion is forward
// unstable for arc-supported measures (coefficients grow exponentially) and
// loses positive definiteness around order 40 in double precision.
std::vector<cplx> levinson(const std::vector<cplx>& moments, int K) {
    if (K < 0) throw validation_error("levinson: K >= 0 required");
    if (static_cast<int>(moments.size()) < K + 1)
        throw validation_error("levinson: need moments c_0..c_K");
    const double c0 = moments[0].real();
    if (!(c0 > 0.0)) throw numeric_error("levinson: moment matrix not positive definite at order 0");
    if (K == 0) return {};

    // Caratheodory function F(z) = 1 + 2 sum_{k>=1} (c_k/c_0) z^k;
    // Schur function f = (F - 1) / (z (F + 1)), as a series to order K-1.
    std::vector<cplx> num(static_cast<std::size_t>(K)), den(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        num[static_cast<std::size_t>(j)] = 2.0 * moments[static_cast<std::size_t>(j + 1)] / c0;
        den[static_cast<std::size_t>(j)] =
            j == 0 ? cplx(2.0) : 2.0 * moments[static_cast<std::size_t>(j)] / c0;
    }
    std::vector<cplx> f = series_product(num, series_inverse(den), static_cast<std::size_t>(K));

    std::vector<cplx> alphas;
    alphas.reserve(static_cast<std::size_t>(K));
    for (int n = 0; n < K; ++n) {
        cplx alpha = f[0];
        if (!(std::abs(alpha) < 1.0 - 1e-14))
            throw numeric_error("levinson: moment matrix not positive definite at order " +
                                std::to_string(n + 1));
        alphas.push_back(alpha);
        const std::size_t len = f.size() - 1;
        if (len == 0) break;
        // f_next = (1/z) (f - alpha) / (1 - conj(alpha) f)
        std::vector<cplx> h(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) h[j] = -std::conj(alpha) * f[j];
        h[0] += 1.0;
        std::vector<cplx> g = f;
        g[0] -= alpha;
        std::vector<cplx> q = series_product(g, series_inverse(h), f.size());
        f.assign(q.begin() + 1, q.end());
    }
    return alphas;
}

std::pair<double, double> jacobi_coefficients(double delta, std::int64_t k) {
    if (!(delta > -0.5)) throw validation_error("jacobi_coefficients: need delta > -1/2");
    if (k < 1) throw validation_error("jacobi_coefficients: k >= 1 required");
    // Monic Jacobi parameters for weight (1-x)^a (1+x)^b on [-1,1],
    // a = delta - 1/2, b = -1/2, scaled x -> 2x.
    const double a = delta - 0.5, b = -0.5;
    auto beta = [&](std::int64_t j) -> double {
        if (j == 0) return (b - a) / (a + b + 2.0);
        double s = 2.0 * static_cast<double>(j) + a + b;
        return (b * b - a * a) / (s * (s + 2.0));
    };
    auto gamma = [&](std::int64_t j) -> double {
        double dj = static_cast<double>(j);
        if (j == 1)  // the (a+b+1) factor cancelled against the denominator
            return 4.0 * (1.0 + a) * (1.0 + b) / ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0));
        double s = 2.0 * dj + a + b;
        return 4.0 * dj * (dj + a) * (dj + b) * (dj + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    };
    double a_k = 2.0 * std::sqrt(gamma(k));
    double b_k = 2.0 * beta(k - 1);
    return {a_k, b_k};
}

double JacobiCoefficients::a(std::int64_t k) const { return jacobi_coefficients(delta, k).first; }
double JacobiCoefficients::b(std::int64_t k) const { return jacobi_coefficients(delta, k).second; }

std::vector<double> hua_pickrell_alphas(double delta, std::int64_t count) {
    if (!(delta > -0.5)) throw validation_error("hua_pickrell_alphas: need delta > -1/2");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    if (count <= 0) return out;
    // u_k(+/-) = 2 +/- b_{k+1} - a_k^2 / u_{k-1}(+/-), seeded with 1/u_{-1} = 0.
    double up = 2.0 + jacobi_coefficients(delta, 1).second;
    double um = 2.0 - jacobi_coefficients(delta, 1).second;
    for (std::int64_t k = 0;; ++k) {
        if (!(up > 0.0) || !(um > 0.0))
            throw numeric_error("hua_pickrell_alphas: u-recursion left the positive cone");
        if (2 * k < count) out.push_back((up - um) / (up + um));  // alpha_{2k}
        if (static_cast<std::int64_t>(out.size()) >= count) break;
        double a_next = jacobi_coefficients(delta, k + 1).first;
        double b_after = jacobi_coefficients(delta, k + 2).second;
        double a2 = a_next * a_next;
        up = 2.0 + b_after - a2 / up;
        um = 2.0 - b_after - a2 / um;
        if (!(up > 0.0) || !(um > 0.0))
            throw numeric_error("hua_pickrell_alphas: u-recursion left the positive cone");
        out.push_back(1.0 - 0.5 * (up + um));  // alpha_{2k+1}
        if (static_cast<std::int64_t>(out.size()) >= count) break;
    }
    out.resize(static_cast<std::size_t>(count));
    return out;
}

}  // namespace opuc
