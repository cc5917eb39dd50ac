#include "opuc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "opuc/cumulants.hpp"
#include "opuc/linstat.hpp"
#include "opuc/measures.hpp"
#include "opuc/operators.hpp"
#include "opuc/parallel.hpp"
#include "opuc/sampler.hpp"
#include "opuc/szego.hpp"
#include "opuc/wienerhopf.hpp"

namespace opuc {

namespace {

nlohmann::json complex_to_json(cplx z) { return nlohmann::json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_string()) return parse_complex(j.get<std::string>());
    return cplx(j.value("re", 0.0), j.value("im", 0.0));
}

std::string csv_header_line(const nlohmann::json& config, std::uint64_t seed) {
    std::ostringstream os;
    os << "# schema=" << schema_version << " config=" << std::hex << std::setw(16)
       << std::setfill('0') << config_hash(config) << std::dec << " seed=" << seed;
    return os.str();
}

struct OutStream {
    std::ofstream file;
    std::ostream* os;
    OutStream(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            os = &fallback;
        } else {
            file.open(path);
            if (!file) throw validation_error("cannot open output file '" + path + "'");
            os = &file;
        }
    }
    std::ostream& get() { return *os; }
};

// statistic spec: {"kind":"poisson","eta":...} or
// {"kind":"rational-imag","poles":[...],"coeffs":[...]}
struct StatisticSpec {
    std::string kind = "poisson";
    cplx eta{1.0, 0.0};
    std::vector<cplx> poles;
    std::vector<double> coeffs;
};

StatisticSpec parse_statistic(const nlohmann::json& j) {
    StatisticSpec s;
    if (j.is_null() || j.empty()) return s;
    s.kind = j.value("kind", "poisson");
    if (j.contains("eta")) s.eta = complex_from_json(j.at("eta"));
    if (s.kind == "rational-imag") {
        for (const auto& p : j.at("poles")) s.poles.push_back(complex_from_json(p));
        for (const auto& c : j.at("coeffs")) s.coeffs.push_back(c.get<double>());
        if (s.poles.size() != s.coeffs.size())
            throw validation_error("rational-imag: poles and coeffs must have equal length");
        for (cplx p : s.poles)
            if (!(p.imag() > 0.0)) throw validation_error("rational-imag: poles need Im > 0");
    } else if (s.kind != "poisson") {
        throw validation_error("unknown statistic kind '" + s.kind + "'");
    }
    return s;
}

std::function<cplx(double)> rational_imag_g(const StatisticSpec& s) {
    auto poles = s.poles;
    auto coeffs = s.coeffs;
    return [poles, coeffs](double x) {
        double v = 0.0;
        for (std::size_t j = 0; j < poles.size(); ++j)
            v += coeffs[j] * (1.0 / (cplx(x, 0.0) - poles[j])).imag();
        return cplx(v, 0.0);
    };
}

double sigma2_poisson_theory(cplx eta) {
    double s = 2.0 * eta.real();
    return 2.0 / (s * s);
}

double sigma2_rational_theory(const StatisticSpec& s) {
    // residue form: sum_{j,k} c_j c_k (-1/2) Re (eta_j - conj(eta_k))^{-2}
    double total = 0.0;
    for (std::size_t j = 0; j < s.poles.size(); ++j)
        for (std::size_t k = 0; k < s.poles.size(); ++k) {
            cplx d = s.poles[j] - std::conj(s.poles[k]);
            total += s.coeffs[j] * s.coeffs[k] * (-0.5) * (1.0 / (d * d)).real();
        }
    return total;
}

double fit_log_rate(const std::vector<double>& ns, const std::vector<double>& errs) {
    // least squares of log err = c - rate * log n over positive entries
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(errs[i] > 0.0)) continue;
        double x = std::log(ns[i]), y = std::log(errs[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

int cmd_measures(const std::string& spec, std::ostream& out) {
    if (spec.empty()) {
        out << "cue\ngeronimus\nbernstein-szego\nsingle-moment\ninserted-mass-point\n"
               "hua-pickrell\nperturbed\nexplicit-list\n";
        return 0;
    }
    CatalogEntry e = parse_measure_spec(spec);
    nlohmann::json j;
    j["schema"] = schema_version;
    j["kind"] = e.seq.kind;
    if (e.measure) {
        const CircleMeasure& mu = *e.measure;
        j["name"] = mu.name;
        j["total_mass"] = mu.total_mass();
        for (const ArcSpec& a : mu.support)
            j["support"].push_back({{"lo", a.lo}, {"hi", a.hi}});
        for (const Atom& a : mu.atoms)
            j["atoms"].push_back({{"angle", a.angle}, {"mass", a.mass}});
    } else {
        j["name"] = e.seq.kind;
        j["note"] = "sequence-only entry (no closed-form density)";
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_alphas(const ExperimentConfig& cfg, std::ostream& fallback) {
    CatalogEntry e = make_catalog_spec(cfg.measure);
    OutStream os(cfg.out, fallback);
    os.get() << csv_header_line(cfg.to_json(), cfg.seed) << "\n";
    os.get() << "k,re_alpha,im_alpha,rho\n";
    os.get() << std::setprecision(17);
    for (std::int64_t k = 0; k < cfg.count; ++k) {
        cplx a = e.seq.alpha(k);
        os.get() << k << "," << a.real() << "," << a.imag() << "," << e.seq.rho(k) << "\n";
    }
    return 0;
}

int cmd_levinson(const ExperimentConfig& cfg, std::ostream& fallback) {
    CatalogEntry e = make_catalog_spec(cfg.measure);
    if (!e.measure) throw validation_error("levinson: measure has no density");
    std::vector<cplx> mom = trig_moments(*e.measure, static_cast<int>(cfg.count));
    std::vector<cplx> alphas = levinson(mom, static_cast<int>(cfg.count));
    OutStream os(cfg.out, fallback);
    os.get() << csv_header_line(cfg.to_json(), cfg.seed) << "\n";
    os.get() << "k,re_alpha,im_alpha,rho\n";
    os.get() << std::setprecision(17);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(alphas[k])));
        os.get() << k << "," << alphas[k].real() << "," << alphas[k].imag() << "," << rho << "\n";
    }
    return 0;
}

int cmd_kernel(const ExperimentConfig& cfg, std::int64_t n, int points, std::ostream& fallback) {
    CatalogEntry e = make_catalog_spec(cfg.measure);
    OutStream os(cfg.out, fallback);
    os.get() << csv_header_line(cfg.to_json(), cfg.seed) << "\n";
    os.get() << "theta,k_diag\n";
    os.get() << std::setprecision(17);
    AlphaCache cache(e.seq, n + 1);
    for (int i = 0; i < points; ++i) {
        double t = two_pi * i / points;
        os.get() << t << "," << cd_kernel(cache, n, t, t).real() << "\n";
    }
    return 0;
}

int cmd_sample(const ExperimentConfig& cfg, std::int64_t n, std::ostream& fallback) {
    CatalogEntry e = make_catalog_spec(cfg.measure);
    if (!e.measure) throw validation_error("sample: measure has no density");
    std::vector<PointSample> samples =
        batch_sample(*e.measure, e.seq, n, cfg.seed, cfg.count, cfg.workers, cfg.grid);
    OutStream os(cfg.out, fallback);
    os.get() << csv_header_line(cfg.to_json(), cfg.seed) << "\n";
    os.get() << "sample_index";
    for (std::int64_t j = 1; j <= n; ++j) os.get() << ",theta_" << j;
    os.get() << "\n" << std::setprecision(17);
    for (const PointSample& s : samples) {
        os.get() << s.sample_index;
        for (double t : s.angles) os.get() << "," << t;
        os.get() << "\n";
    }
    if (!cfg.out.empty()) {
        nlohmann::json side;
        side["schema"] = schema_version;
        side["software"] = software_version;
        side["seed"] = cfg.seed;
        side["config"] = cfg.to_json();
        side["config_hash"] = config_hash(cfg.to_json());
        side["grid"] = samples.front().diagnostics.grid;
        side["renormalizations"] = samples.front().diagnostics.renormalizations;
        std::ofstream sj(cfg.out + ".json");
        sj << side.dump(2) << "\n";
    }
    return 0;
}

nlohmann::json report_json(const CumulantReport& r) {
    nlohmann::json j;
    j["order"] = r.order;
    j["value"] = r.value;
    j["method"] = r.method;
    j["resolution"] = r.resolution;
    j["error_estimate"] = r.error_estimate;
    if (r.theory) j["theory"] = *r.theory;
    return j;
}

int cmd_cumulants_exact(const ExperimentConfig& cfg, std::int64_t n, const std::vector<int>& orders,
                        const std::string& basis_name, int buffer, std::ostream& out) {
    CatalogEntry e = make_catalog_spec(cfg.measure);
    StatisticSpec sspec = parse_statistic(cfg.statistic);
    if (sspec.kind != "poisson")
        throw validation_error("cumulants exact: only the poisson statistic has an operator form");
    cplx eta = cfg.statistic.contains("eta") ? sspec.eta : cfg.eta;
    ScaledStatistic stat = poisson_scaled(eta, cfg.gamma, cfg.theta0, n);
    Basis basis = basis_name == "ggt" ? Basis::ggt : Basis::cmv;
    int buf = buffer > 0 ? buffer : default_buffer(n, cfg.gamma, eta.real());
    CMatrix a = poisson_statistic_operator(e.seq, basis, static_cast<int>(n) + buf, stat);
    nlohmann::json reports = nlohmann::json::array();
    for (int m : orders) {
        CumulantReport r = cumulant_trace(a, static_cast<int>(n), m);
        if (m == 2) r.theory = sigma2_poisson_theory(eta);
        if (m > 2) r.theory = 0.0;
        reports.push_back(report_json(r));
    }
    nlohmann::json j;
    j["schema"] = schema_version;
    j["config_hash"] = config_hash(cfg.to_json());
    j["seed"] = cfg.seed;
    j["reports"] = reports;
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_cumulants_mc(const ExperimentConfig& cfg, std::int64_t n, const std::vector<int>& orders,
                     std::ostream& out) {
    CatalogEntry e = make_catalog_spec(cfg.measure);
    if (!e.measure) throw validation_error("cumulants mc: measure has no density");
    StatisticSpec sspec = parse_statistic(cfg.statistic);
    cplx eta = cfg.statistic.contains("eta") ? sspec.eta : cfg.eta;
    std::function<double(double)> f;
    if (sspec.kind == "poisson") {
        ScaledStatistic stat = poisson_scaled(eta, cfg.gamma, cfg.theta0, n);
        f = [stat](double t) { return poisson_statistic(stat, t); };
    } else {
        ScaledStatistic stat = line_scaled(rational_imag_g(sspec), cfg.gamma, cfg.theta0, n);
        f = [stat](double t) { return rescaled_statistic(stat, t).real(); };
    }
    std::vector<PointSample> samples =
        batch_sample(*e.measure, e.seq, n, cfg.seed, cfg.count, cfg.workers, cfg.grid);
    std::vector<CumulantReport> reports = mc_cumulants(samples, f, orders);
    nlohmann::json j;
    j["schema"] = schema_version;
    j["config_hash"] = config_hash(cfg.to_json());
    j["seed"] = cfg.seed;
    j["reports"] = nlohmann::json::array();
    for (const CumulantReport& r : reports) j["reports"].push_back(report_json(r));
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_variance_theory(const nlohmann::json& stat_json, std::ostream& out) {
    StatisticSpec s = parse_statistic(stat_json);
    nlohmann::json j;
    j["schema"] = schema_version;
    if (s.kind == "poisson") {
        j["sigma2"] = sigma2_poisson_theory(s.eta);
    } else {
        auto g = rational_imag_g(s);
        j["sigma2"] = sigma2_rational_theory(s);
        j["sigma_f2"] = sigma_f_squared([g](double x) { return g(x).real(); });
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_wiener_hopf(const ExperimentConfig& cfg, double alpha, std::ostream& out,
                    std::ostream& fallback) {
    nlohmann::json j;
    j["schema"] = schema_version;
    std::vector<double> ns;
    for (std::int64_t n : cfg.n_grid) ns.push_back(static_cast<double>(n));
    if (ns.empty()) ns = {1e4};
    const double theory = sigma2_poisson_theory(cfg.eta);
    if (alpha != 0.0) {
        WienerHopfData d = wiener_hopf_data(alpha, cfg.theta0, cfg.eta, ns.back(), cfg.gamma);
        j["roots"] = {{"plus", complex_to_json(d.roots.plus)}, {"minus", complex_to_json(d.roots.minus)}};
        j["A"] = d.a_edge;
        j["sigma_estimate"] = d.sigma_estimate;
    } else {
        const double ng = std::pow(ns.back(), cfg.gamma);
        j["sigma_estimate"] = alpha0_block_trace((1.0 - cfg.eta / ng) * unit_circle(cfg.theta0),
                                                 ns.back(), cfg.gamma);
    }
    j["theory"] = theory;
    nlohmann::json lemma = nlohmann::json::array();
    for (const Lemma3Row& r : lemma3_properties(cfg.eta, cfg.gamma, cfg.theta0, ns))
        lemma.push_back({{"n", r.n},
                         {"coeff_sum", r.coeff_sum},
                         {"fitted_decay", r.fitted_decay},
                         {"tail_decay", r.tail_decay},
                         {"weighted_sq_sum", r.weighted_sq_sum}});
    j["lemma3"] = lemma;
    out << j.dump(2) << "\n";
    if (!cfg.out.empty()) {
        OutStream os(cfg.out, fallback);
        os.get() << csv_header_line(cfg.to_json(), cfg.seed) << "\n";
        os.get() << "n,sigma_estimate,theory\n" << std::setprecision(17);
        for (double n : ns) {
            double est;
            if (alpha != 0.0) {
                est = wiener_hopf_data(alpha, cfg.theta0, cfg.eta, n, cfg.gamma).sigma_estimate;
            } else {
                const double ng = std::pow(n, cfg.gamma);
                est = alpha0_block_trace((1.0 - cfg.eta / ng) * unit_circle(cfg.theta0), n, cfg.gamma);
            }
            os.get() << n << "," << est << "," << theory << "\n";
        }
    }
    return 0;
}

int cmd_decay(const ExperimentConfig& cfg, cplx z, int big_n, const std::string& basis_name,
              std::ostream& fallback) {
    CatalogEntry e = make_catalog_spec(cfg.measure);
    OperatorKind which = basis_name == "ggt" ? OperatorKind::ggt : OperatorKind::cmv;
    OperatorTruncation m =
        which == OperatorKind::ggt ? ggt_truncation(e.seq, big_n) : cmv_truncation(e.seq, big_n);
    CMatrix shifted = m.data;
    for (int i = 0; i < big_n; ++i) shifted(i, i) -= z;
    LuFactors f = lu_factor(std::move(shifted));
    CMatrix inv = lu_inverse(f);
    OutStream os(cfg.out, fallback);
    os.get() << csv_header_line(cfg.to_json(), cfg.seed) << "\n";
    os.get() << "distance,max_abs_entry\n" << std::setprecision(17);
    const int lo = big_n / 4, hi = 3 * big_n / 4;
    for (int d = 0; d <= big_n / 4; ++d) {
        double mx = 0.0;
        for (int i = lo; i < hi; ++i) {
            if (i + d < big_n) mx = std::max(mx, std::abs(inv(i, i + d)));
            if (i - d >= 0) mx = std::max(mx, std::abs(inv(i, i - d)));
        }
        os.get() << d << "," << mx << "\n";
    }
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::vector<int>& orders, std::ostream& fallback) {
    if (cfg.n_grid.empty()) throw validation_error("sweep: empty n-grid");
    for (std::size_t i = 1; i < cfg.n_grid.size(); ++i)
        if (cfg.n_grid[i] <= cfg.n_grid[i - 1])
            throw validation_error("sweep: n-grid must be sorted ascending");
    const bool universality = cfg.mode == "universality";
    if (!universality && cfg.mode != "clt")
        throw validation_error("sweep: mode must be clt or universality");
    CatalogEntry e = make_catalog_spec(cfg.measure);
    std::optional<CatalogEntry> e0;
    if (universality) {
        if (cfg.measure0.is_null() || cfg.measure0.empty())
            throw validation_error("sweep universality: measure0 required");
        e0 = make_catalog_spec(cfg.measure0);
    }
    OutStream os(cfg.out, fallback);
    os.get() << csv_header_line(cfg.to_json(), cfg.seed) << "\n";
    os.get() << "n,order,value,theory,abs_err\n" << std::setprecision(17);
    std::vector<double> ns, errs;
    for (std::int64_t n : cfg.n_grid) {
        ScaledStatistic stat = poisson_scaled(cfg.eta, cfg.gamma, cfg.theta0, n);
        int buf = default_buffer(n, cfg.gamma, cfg.eta.real());
        CMatrix a = poisson_statistic_operator(e.seq, Basis::cmv, static_cast<int>(n) + buf, stat);
        for (int m : orders) {
            CumulantReport r = cumulant_trace(a, static_cast<int>(n), m);
            double target;
            if (universality) {
                CMatrix a0 =
                    poisson_statistic_operator(e0->seq, Basis::cmv, static_cast<int>(n) + buf, stat);
                target = cumulant_trace(a0, static_cast<int>(n), m).value;
            } else {
                target = m == 2 ? sigma2_poisson_theory(cfg.eta) : 0.0;
            }
            double err = std::abs(r.value - target);
            os.get() << n << "," << m << "," << r.value << "," << target << "," << err << "\n";
            if (m == orders.front()) {
                ns.push_back(static_cast<double>(n));
                errs.push_back(err);
            }
        }
    }
    os.get() << "fit," << orders.front() << "," << fit_log_rate(ns, errs) << ",,\n";
    return 0;
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["schema"] = schema_version;
    j["measure"] = measure;
    j["measure0"] = measure0;
    j["statistic"] = statistic;
    j["n_grid"] = n_grid;
    j["gamma"] = gamma;
    j["theta0"] = theta0;
    j["eta"] = complex_to_json(eta);
    j["seed"] = seed;
    j["count"] = count;
    j["mode"] = mode;
    j["out"] = out;
    j["grid"] = grid;
    j["workers"] = workers;
    j["tol"] = tol;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.measure = j.value("measure", nlohmann::json());
    c.measure0 = j.value("measure0", nlohmann::json());
    c.statistic = j.value("statistic", nlohmann::json());
    c.n_grid = j.value("n_grid", std::vector<std::int64_t>{});
    c.gamma = j.value("gamma", 0.5);
    c.theta0 = j.value("theta0", 0.0);
    if (j.contains("eta")) c.eta = complex_from_json(j.at("eta"));
    c.seed = j.value("seed", 0ull);
    c.count = j.value("count", 0ll);
    c.mode = j.value("mode", "");
    c.out = j.value("out", "");
    c.grid = j.value("grid", 0);
    c.workers = j.value("workers", 0);
    c.tol = j.value("tol", 0.0);
    return c;
}

cplx parse_complex(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw validation_error("empty complex literal");
    if (t.front() == '{') return complex_from_json(nlohmann::json::parse(t));
    // forms: a, bi, a+bi, a-bi
    std::size_t ipos = t.find_first_of("iI");
    if (ipos == std::string::npos) return cplx(std::stod(t), 0.0);
    std::size_t split = std::string::npos;
    for (std::size_t p = 1; p < t.size(); ++p) {
        if ((t[p] == '+' || t[p] == '-') && t[p - 1] != 'e' && t[p - 1] != 'E') split = p;
    }
    try {
        if (split == std::string::npos) {
            std::string im = t.substr(0, ipos);
            if (im.empty() || im == "+") im = "1";
            if (im == "-") im = "-1";
            return cplx(0.0, std::stod(im));
        }
        double re = std::stod(t.substr(0, split));
        std::string im = t.substr(split, ipos - split);
        if (im == "+") im = "1";
        if (im == "-") im = "-1";
        return cplx(re, std::stod(im));
    } catch (const std::exception&) {
        throw validation_error("cannot parse complex literal '" + s + "'");
    }
}

std::string format_complex(cplx z) {
    std::ostringstream os;
    os << std::setprecision(17) << z.real() << (z.imag() >= 0 ? "+" : "") << z.imag() << "i";
    return os.str();
}

std::uint64_t config_hash(const nlohmann::json& j) {
    std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mesoscopic linear statistics of orthogonal polynomial ensembles on the circle"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string measure_spec, measure0_spec, statistic_spec, eta_str = "1+0i", z_str = "0.5";
    std::string basis = "cmv", orders_str = "2";
    std::int64_t n = 100;
    int points = 256, big_n = 256, buffer = 0;
    double alpha = 0.5;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--measure", measure_spec, "catalog id or JSON spec");
        sub->add_option("--seed", cfg.seed, "master seed");
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--workers", cfg.workers, "parallel workers (0 = auto)");
    };

    CLI::App* c_measures = app.add_subcommand("measures", "describe catalog measures");
    c_measures->add_option("--measure", measure_spec, "catalog id or JSON spec");

    CLI::App* c_alphas = app.add_subcommand("alphas", "emit Verblunsky coefficients as CSV");
    add_common(c_alphas);
    c_alphas->add_option("--count", cfg.count, "number of coefficients")->required();

    CLI::App* c_lev = app.add_subcommand("levinson", "recover coefficients from quadrature moments");
    add_common(c_lev);
    c_lev->add_option("--count", cfg.count, "number of coefficients")->required();

    CLI::App* c_kernel = app.add_subcommand("kernel", "CD kernel diagonal profile as CSV");
    add_common(c_kernel);
    c_kernel->add_option("--n", n, "kernel size")->required();
    c_kernel->add_option("--points", points, "grid points");

    CLI::App* c_sample = app.add_subcommand("sample", "draw OPE samples");
    add_common(c_sample);
    c_sample->add_option("--n", n, "points per sample")->required();
    c_sample->add_option("--count", cfg.count, "number of samples")->required();
    c_sample->add_option("--grid", cfg.grid, "inverse-CDF cells per arc (0 = auto, spec default 65536)");
    std::string config_path;
    c_sample->add_option("--config", config_path, "JSON config (sidecar) to rerun");

    CLI::App* c_cum = app.add_subcommand("cumulants", "cumulants of a linear statistic");
    CLI::App* c_cum_exact = c_cum->add_subcommand("exact", "trace-formula route");
    add_common(c_cum_exact);
    c_cum_exact->add_option("--n", n, "ensemble size")->required();
    c_cum_exact->add_option("--orders", orders_str, "comma-separated orders (<= 6)");
    c_cum_exact->add_option("--gamma", cfg.gamma, "scale exponent");
    c_cum_exact->add_option("--theta0", cfg.theta0, "center angle");
    c_cum_exact->add_option("--eta", eta_str, "eta (a+bi)");
    c_cum_exact->add_option("--statistic", statistic_spec, "statistic JSON spec");
    c_cum_exact->add_option("--basis", basis, "cmv | ggt");
    c_cum_exact->add_option("--buffer", buffer, "truncation buffer override");
    CLI::App* c_cum_mc = c_cum->add_subcommand("mc", "Monte-Carlo k-statistics route");
    add_common(c_cum_mc);
    c_cum_mc->add_option("--n", n, "ensemble size")->required();
    c_cum_mc->add_option("--count", cfg.count, "number of samples")->required();
    c_cum_mc->add_option("--orders", orders_str, "comma-separated orders (<= 4)");
    c_cum_mc->add_option("--gamma", cfg.gamma, "scale exponent");
    c_cum_mc->add_option("--theta0", cfg.theta0, "center angle");
    c_cum_mc->add_option("--eta", eta_str, "eta (a+bi)");
    c_cum_mc->add_option("--statistic", statistic_spec, "statistic JSON spec");
    c_cum_mc->add_option("--grid", cfg.grid, "sampler grid");

    CLI::App* c_var = app.add_subcommand("variance-theory", "limiting variance of a statistic");
    c_var->add_option("--eta", eta_str, "eta for the poisson statistic");
    c_var->add_option("--statistic", statistic_spec, "statistic JSON spec");

    CLI::App* c_wh = app.add_subcommand("wiener-hopf", "constant-alpha Wiener-Hopf diagnostics");
    add_common(c_wh);
    c_wh->add_option("--alpha", alpha, "constant Verblunsky coefficient (0 = block path)");
    c_wh->add_option("--theta0", cfg.theta0, "center angle");
    c_wh->add_option("--eta", eta_str, "eta (a+bi)");
    c_wh->add_option("--gamma", cfg.gamma, "scale exponent");
    std::string ngrid_str = "10000";
    c_wh->add_option("--n-grid", ngrid_str, "comma-separated n grid");

    CLI::App* c_decay = app.add_subcommand("decay", "resolvent off-diagonal decay profile");
    add_common(c_decay);
    c_decay->add_option("--z", z_str, "resolvent point inside the disk");
    c_decay->add_option("--N", big_n, "truncation size");
    c_decay->add_option("--basis", basis, "cmv | ggt");

    CLI::App* c_sweep = app.add_subcommand("sweep", "cumulant sweeps over n");
    add_common(c_sweep);
    c_sweep->add_option("--mode", cfg.mode, "clt | universality")->required();
    c_sweep->add_option("--measure0", measure0_spec, "comparison measure (universality)");
    c_sweep->add_option("--n-grid", ngrid_str, "comma-separated n grid")->required();
    c_sweep->add_option("--orders", orders_str, "comma-separated orders");
    c_sweep->add_option("--gamma", cfg.gamma, "scale exponent");
    c_sweep->add_option("--theta0", cfg.theta0, "center angle");
    c_sweep->add_option("--eta", eta_str, "eta (a+bi)");

    std::vector<std::string> argv_r(args.rbegin(), args.rend());
    try {
        app.parse(argv_r);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw validation_error("cannot read config '" + config_path + "'");
            nlohmann::json j;
            f >> j;
            std::string out_flag = cfg.out;  // flags stay authoritative for the destination
            cfg = ExperimentConfig::from_json(j.contains("config") ? j.at("config") : j);
            cfg.out = out_flag;
            if (cfg.measure.is_null()) throw validation_error("config missing measure");
            measure_spec.clear();
            if (!cfg.n_grid.empty()) n = cfg.n_grid.front();
        }
        if (!measure_spec.empty())
            cfg.measure = measure_spec.front() == '{' ? nlohmann::json::parse(measure_spec)
                                                      : nlohmann::json{{"kind", measure_spec}};
        if (!measure0_spec.empty())
            cfg.measure0 = measure0_spec.front() == '{'
                               ? nlohmann::json::parse(measure0_spec)
                               : nlohmann::json{{"kind", measure0_spec}};
        if (!statistic_spec.empty()) cfg.statistic = nlohmann::json::parse(statistic_spec);
        cfg.eta = parse_complex(eta_str);
        if (cfg.workers > 0) set_worker_count(cfg.workers);

        auto parse_list = [](const std::string& s) {
            std::vector<std::int64_t> v;
            std::stringstream ss(s);
            std::string tok;
            while (std::getline(ss, tok, ',')) v.push_back(std::stoll(tok));
            return v;
        };
        std::vector<int> orders;
        for (std::int64_t m : parse_list(orders_str)) orders.push_back(static_cast<int>(m));
        cfg.n_grid = parse_list(ngrid_str);

        if (*c_measures) return cmd_measures(measure_spec, out);
        if (*c_alphas) return cmd_alphas(cfg, out);
        if (*c_lev) return cmd_levinson(cfg, out);
        if (*c_kernel) return cmd_kernel(cfg, n, points, out);
        if (*c_sample) {
            cfg.n_grid = {n};
            return cmd_sample(cfg, n, out);
        }
        if (*c_cum_exact) return cmd_cumulants_exact(cfg, n, orders, basis, buffer, out);
        if (*c_cum_mc) return cmd_cumulants_mc(cfg, n, orders, out);
        if (*c_var) {
            nlohmann::json sj = cfg.statistic;
            if (sj.is_null() || sj.empty()) sj = {{"kind", "poisson"}, {"eta", complex_to_json(cfg.eta)}};
            return cmd_variance_theory(sj, out);
        }
        if (*c_wh) return cmd_wiener_hopf(cfg, alpha, out, out);
        if (*c_decay) return cmd_decay(cfg, parse_complex(z_str), big_n, basis, out);
        if (*c_sweep) return cmd_sweep(cfg, orders, out);
        err << "no subcommand\n";
        return 2;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        err << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace opuc
