#ifndef TAILRISK_TOOLS_CLI_HPP
#define TAILRISK_TOOLS_CLI_HPP

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailrisk/tailrisk.hpp"

namespace tailrisk::cli {

/// A flag value failed validation; the message names the flag.
class FlagError : public std::runtime_error {
public:
    FlagError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

namespace detail {

inline std::vector<double> parse_list(const std::string& flag, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = tailrisk::detail::trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(tailrisk::detail::parse_number(item, "value"));
        } catch (const Error& e) {
            throw FlagError(flag, e.what());
        }
    }
    if (out.empty()) throw FlagError(flag, "empty list");
    return out;
}

inline std::size_t to_count(const std::string& flag, double v) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) throw FlagError(flag, "expected a positive integer, got " + csv_number(v));
    return static_cast<std::size_t>(v);
}

inline std::vector<std::size_t> parse_counts(const std::string& flag, const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_list(flag, text)) out.push_back(to_count(flag, v));
    return out;
}

template <class F>
auto flag_guard(const std::string& flag, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        throw FlagError(flag, e.what());
    }
}

inline void check_level(const std::string& flag, double a, double lo, bool lo_inclusive) {
    const bool ok = (lo_inclusive ? a >= lo : a > lo) && a < 1.0;
    if (!ok) {
        throw FlagError(flag, "value " + csv_number(a) + " must lie in " + (lo_inclusive ? "[" : "(") + csv_number(lo) +
                                  ", 1)");
    }
}

inline std::vector<double> read_values(const std::string& flag, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FlagError(flag, "cannot open '" + path + "'");
    std::vector<double> v;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::string cell = tailrisk::detail::trim(line.substr(0, line.find(',')));
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        if (cell.empty()) continue;
        try {
            v.push_back(tailrisk::detail::parse_number(cell, "value"));
        } catch (const Error& e) {
            if (!first) throw FlagError(flag, e.what());
        }
        first = false;
    }
    if (v.empty()) throw FlagError(flag, "no values in '" + path + "'");
    return v;
}

/// alpha_min .. alpha_max in `points` steps, uniform in log(1 - alpha).
inline std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    std::vector<double> g;
    if (points == 1) return {hi};
    const double l0 = std::log(1.0 - lo), l1 = std::log(1.0 - hi);
    for (std::size_t i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        g.push_back(i + 1 == points ? hi : (i == 0 ? lo : 1.0 - std::exp(l0 + t * (l1 - l0))));
    }
    return g;
}

} // namespace detail

/// Runs the command line `args` (program name excluded). Returns 0 on
/// success, 2 on a validation error, 1 on a computation error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Expectile, expected shortfall and value at risk: bounds, asymptotics and simulation"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "Write the result to this file instead of stdout");

    // shared option storage
    std::string dist_text, data_path, alpha_text, alphas_text, ns_text, measure = "expectile", vs = "es";
    std::string tail_text, kind, quantity = "ratio", portfolio_path;
    double alpha = 0.99, beta = 0.5, gamma = 0.01, eps = 0.1, delta_offset = 1.0;
    double oce_a = 0.05, oce_b = 0.0, shape = 0.0, alpha_min = 0.99, alpha_max = 0.9999, eta = 0.0;
    std::size_t points = 50, replications = 1, grid = 10000, k_hill = 0;
    double n_value = 1e5;
    std::uint64_t seed = 1;

    auto add_source = [&](CLI::App* sc) {
        sc->add_option("--dist", dist_text, "Parametric law, e.g. pareto:a=2.1 or student:nu=2.3,shift=-1");
        sc->add_option("--data", data_path, "File of observations (first column) for an empirical law");
    };

    auto* risk = app.add_subcommand("risk", "A single risk measure");
    add_source(risk);
    risk->add_option("--alpha", alpha, "Level")->required();
    risk->add_option("--measure", measure, "var, es, expectile, oce, distortion or all")
        ->check(CLI::IsMember({"var", "es", "expectile", "oce", "distortion", "all"}));
    risk->add_option("--oce-a", oce_a, "OCE loss parameter a in (0,1)");
    risk->add_option("--oce-b", oce_b, "OCE loss parameter b in [0,1]");

    auto* bstar = app.add_subcommand("beta-star", "Optimal ES level beta* of the expectile");
    add_source(bstar);
    bstar->add_option("--alpha", alpha, "Expectile level in [1/2,1)")->required();

    auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds of the expectile by ES");
    add_source(bounds);
    bounds->add_option("--alpha", alpha, "Expectile level in [1/2,1)")->required();
    bounds->add_option("--beta", beta, "ES level of the lower bound in (0,1)")->required();

    auto* alloc = app.add_subcommand("allocate", "Euler contributions of portfolio components");
    alloc->add_option("--portfolio", portfolio_path, "CSV of scenarios, one column per component")->required();
    alloc->add_option("--alpha", alpha, "Level in [1/2,1)");
    alloc->add_option("--alphas", alphas_text, "Comma separated levels for a ratio table");
    alloc->add_option("--eta", eta, "Tail index for the asymptotic constant (with --alphas)");

    auto* asympt = app.add_subcommand("asympt", "Asymptotic expansions against exact values");
    add_source(asympt);
    asympt->add_option("--alphas", alphas_text, "Comma separated levels");
    asympt->add_option("--quantity", quantity, "ratio or beta-star")->check(CLI::IsMember({"ratio", "beta-star"}));
    asympt->add_option("--alpha", alpha, "Level for the extreme expectile estimate (with --data)");
    asympt->add_option("--k", k_hill, "Number of upper order statistics for the Hill estimator");

    auto* ssize = app.add_subcommand("sample-size", "Sample sizes for VaR, ES and expectile");
    ssize->add_option("--tail", tail_text, "Tail class, e.g. poly:q=3,s=2.5 or exp:k=2,r=1,C=1,c=1")->required();
    ssize->add_option("--gamma", gamma, "Confidence gamma in (0,1)");
    ssize->add_option("--eps", eps, "Precision epsilon > 0");
    ssize->add_option("--alpha", alpha, "Level in [1/2,1)");
    ssize->add_option("--alphas", alphas_text, "Comma separated levels (needs --dist)");
    ssize->add_option("--dist", dist_text, "Law providing the density bound delta_alpha");
    ssize->add_option("--delta-offset", delta_offset, "delta_alpha = f(q_alpha + offset)");

    auto* table = app.add_subcommand("table", "Empirical against theoretical ratio table");
    table->add_option("--dist", dist_text, "Parametric law")->required();
    table->add_option("--alphas", alphas_text, "Comma separated levels")->required();
    table->add_option("--ns", ns_text, "Comma separated sample sizes, e.g. 1e6,5e5,1e5")->required();
    table->add_option("--seed", seed, "Master seed");
    table->add_option("--vs", vs, "es or var")->check(CLI::IsMember({"es", "var"}));
    table->add_option("--replications", replications, "Replications per cell (medians reported)");

    auto* figure = app.add_subcommand("figure", "Curve data for plotting: distortion functions and ratio expansions");
    figure->add_option("--kind", kind, "distortion, weibull-beta, frechet-pareto or frechet-student")
        ->required()
        ->check(CLI::IsMember({"distortion", "weibull-beta", "frechet-pareto", "frechet-student"}));
    figure->add_option("--a", shape, "Shape a (Pareto, power)");
    figure->add_option("--nu", shape, "Degrees of freedom (Student t)");
    figure->add_option("--alpha", alpha, "Level of the distortion kind");
    figure->add_option("--alpha-min", alpha_min, "First level of the grid");
    figure->add_option("--alpha-max", alpha_max, "Last level of the grid");
    figure->add_option("--points", points, "Number of grid points");

    auto* wass = app.add_subcommand("wasserstein", "Wasserstein distance of a sample to its law and the deviation bounds");
    wass->add_option("--dist", dist_text, "Parametric law")->required();
    wass->add_option("--n", n_value, "Sample size");
    wass->add_option("--seed", seed, "Seed");
    wass->add_option("--alpha", alpha, "Level in [1/2,1)");
    wass->add_option("--grid", grid, "Trapezoid grid cells (>= 100)");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    std::ostringstream buf;
    try {
        auto source = [&](CLI::App* sc) -> LossSource {
            const bool has_dist = sc->count("--dist") > 0, has_data = sc->count("--data") > 0;
            if (has_dist == has_data) throw FlagError("--dist/--data", "exactly one of the two is required");
            if (has_data) return LossSource(Sample(read_values("--data", data_path)));
            return flag_guard("--dist", [&] { return LossSource(parse_distribution(dist_text)); });
        };
        auto need_dist = [&]() { return flag_guard("--dist", [&] { return parse_distribution(dist_text); }); };

        if (risk->parsed()) {
            const LossSource src = source(risk);
            const bool all = measure == "all";
            if (measure == "var" || measure == "es" || all) check_level("--alpha", alpha, 0.0, measure == "es");
            if (measure == "expectile" || measure == "distortion" || all) check_level("--alpha", alpha, 0.5, true);
            if (measure == "var" || all) buf << "var: " << human_number(value_at_risk(src, alpha)) << '\n';
            if (measure == "es" || all) buf << "es: " << human_number(expected_shortfall(src, alpha)) << '\n';
            if (measure == "expectile" || all) {
                buf << "expectile: " << human_number(expectile(src, alpha)) << '\n';
                if (!src.is_constant()) {
                    const auto b = beta_star(src, alpha);
                    buf << "beta_star: [" << human_number(b.lower) << ", " << human_number(b.upper) << "] point "
                        << human_number(b.point) << '\n';
                }
            }
            if (measure == "oce" || all) {
                const OceParams p{oce_a, oce_b};
                flag_guard("--oce-a/--oce-b", [&] { validate(p); });
                buf << "oce: " << human_number(oce(src, p)) << " (lambda " << human_number(oce_lambda(p)) << ")\n";
            }
            if (measure == "distortion" || all)
                buf << "distortion: " << human_number(distortion_value(src, ExpectileDistortion{alpha})) << '\n';
        } else if (bstar->parsed()) {
            const LossSource src = source(bstar);
            check_level("--alpha", alpha, 0.5, true);
            if (src.is_constant()) throw FlagError(src.is_parametric() ? "--dist" : "--data", "beta* is undefined for a constant loss");
            const auto b = beta_star(src, alpha);
            buf << "expectile: " << human_number(b.expectile) << '\n'
                << "beta_star_lower: " << human_number(b.lower) << '\n'
                << "beta_star_upper: " << human_number(b.upper) << '\n'
                << "beta_star_point: " << human_number(b.point) << '\n'
                << "reconstruction: " << human_number(es_mean_mixture(src, alpha, b.point)) << '\n';
        } else if (bounds->parsed()) {
            const LossSource src = source(bounds);
            check_level("--alpha", alpha, 0.5, true);
            if (!(beta > 0.0 && beta < 1.0)) throw FlagError("--beta", "value must lie in (0, 1)");
            const auto b = expectile_bounds(src, alpha, beta);
            buf << "lower: " << human_number(b.lower) << '\n'
                << "expectile: " << human_number(expectile(src, alpha)) << '\n'
                << "upper: " << human_number(b.upper) << '\n'
                << "es_cap: " << human_number(b.es_cap) << '\n';
        } else if (alloc->parsed()) {
            std::ifstream in(portfolio_path);
            if (!in) throw FlagError("--portfolio", "cannot open '" + portfolio_path + "'");
            const Portfolio p = flag_guard("--portfolio", [&] { return read_portfolio_csv(in); });
            if (alloc->count("--alphas")) {
                if (!(eta > 1.0)) throw FlagError("--eta", "a tail index > 1 is required with --alphas");
                const auto alphas = parse_list("--alphas", alphas_text);
                for (double a : alphas) check_level("--alphas", a, 0.5, true);
                const auto t = euler_asymptotic_ratio(p, eta, alphas);
                CsvTable csv;
                csv.columns = {"alpha", "constant"};
                for (std::size_t k = 0; k < p.dimension(); ++k) csv.columns.push_back("ratio_" + std::to_string(k + 1));
                for (const auto& r : t.rows) {
                    std::vector<double> v{r.alpha, t.constant};
                    for (std::size_t k = 0; k < p.dimension(); ++k)
                        v.push_back(r.degenerate ? std::nan("") : r.ratio[k]);
                    csv.rows.push_back(std::move(v));
                }
                write_csv(buf, csv);
            } else {
                check_level("--alpha", alpha, 0.5, true);
                const auto ee = expectile_euler(p, alpha);
                const auto es = es_euler(p, alpha);
                CsvTable csv{{"component", "expectile_contribution", "es_contribution"}, {}};
                for (std::size_t k = 0; k < ee.size(); ++k) csv.rows.push_back({double(k + 1), ee[k], es[k]});
                write_csv(buf, csv);
            }
        } else if (asympt->parsed()) {
            if (asympt->count("--data")) {
                if (asympt->count("--dist")) throw FlagError("--dist/--data", "exactly one of the two is required");
                const Sample s(read_values("--data", data_path));
                check_level("--alpha", alpha, 0.5, true);
                const std::size_t k = k_hill ? k_hill : default_hill_k(s.size());
                const double eta_hat = flag_guard("--k", [&] { return hill_estimator(s, k); });
                buf << "k: " << k << '\n' << "hill_eta: " << human_number(eta_hat) << '\n'
                    << "expectile_estimate: " << human_number(extreme_expectile_estimate(s, alpha, k)) << '\n';
            } else {
                const auto d = need_dist();
                const auto cls = flag_guard("--dist", [&] { return mda_classify(d); });
                if (cls.mda == Mda::Gumbel) {
                    buf << "mda: Gumbel\nrelation: " << to_string(gumbel_relation(d)) << '\n';
                } else {
                    const auto alphas = asympt->count("--alphas") ? parse_list("--alphas", alphas_text)
                                                                  : log_grid(0.99, 0.9999, 9);
                    for (double a : alphas) check_level("--alphas", a, 0.5, true);
                    std::vector<ExpansionPoint> pts;
                    if (cls.mda == Mda::Frechet) {
                        pts = quantity == "ratio" ? frechet_ratio_curve(d, alphas) : frechet_beta_star_curve(d, alphas);
                    } else {
                        if (quantity != "ratio") throw FlagError("--quantity", "only 'ratio' is available for Weibull laws");
                        pts = weibull_ratio_curve(d, alphas);
                    }
                    CsvTable csv{{"alpha", "exact", "first_order", "second_order"}, {}};
                    for (const auto& pt : pts) csv.rows.push_back({pt.alpha, pt.exact, pt.first, pt.second});
                    write_csv(buf, csv);
                }
            }
        } else if (ssize->parsed()) {
            const TailClass tc = flag_guard("--tail", [&] { return parse_tail_class(tail_text); });
            if (!(gamma > 0.0 && gamma < 1.0)) throw FlagError("--gamma", "value must lie in (0, 1)");
            if (!(eps > 0.0)) throw FlagError("--eps", "value must be > 0");
            std::vector<SampleSizeReport> reports;
            std::vector<double> alphas =
                ssize->count("--alphas") ? parse_list("--alphas", alphas_text) : std::vector<double>{alpha};
            for (double a : alphas) {
                check_level(ssize->count("--alphas") ? "--alphas" : "--alpha", a, 0.5, true);
                if (eps > a / (1.0 - a)) throw FlagError("--eps", "value must be <= alpha/(1-alpha)");
            }
            if (ssize->count("--dist")) {
                const auto d = need_dist();
                reports = flag_guard("--dist", [&] { return size_ratio_curve(d, tc, gamma, eps, alphas, delta_offset); });
            } else {
                if (alphas.size() > 1) throw FlagError("--dist", "required with --alphas");
                const auto es = sample_size(tc, gamma, eps, alphas[0], Measure::ES);
                const auto ex = sample_size(tc, gamma, eps, alphas[0], Measure::Expectile);
                buf << "alpha: " << alphas[0] << "\nepsilon: " << eps << "\ngamma: " << gamma << "\nC: " << tc.C
                    << "\nc: " << tc.c << "\nn_es: " << csv_number(es.n) << "\nn_expectile: " << csv_number(ex.n)
                    << "\nratio_expectile_es: " << human_number(ex.n / es.n) << '\n';
                if (es.clamped || ex.clamped) buf << "warning: gamma >= prefactor, size clamped to 1\n";
            }
            if (!reports.empty()) {
                CsvTable csv{{"alpha", "epsilon", "gamma", "delta_alpha", "n_var", "n_es", "n_expectile", "ratio_es_var",
                              "ratio_expectile_var", "C", "c"},
                             {}};
                for (const auto& r : reports)
                    csv.rows.push_back({r.alpha, r.epsilon, r.gamma, r.delta_alpha, r.n_var, r.n_es, r.n_expectile,
                                        r.ratio_es, r.ratio_expectile, r.C, r.c});
                write_csv(buf, csv);
            }
        } else if (table->parsed()) {
            SimulationConfig cfg{need_dist(), parse_list("--alphas", alphas_text), parse_counts("--ns", ns_text), seed,
                                 vs == "var" ? Comparison::ExpectileVsVaR : Comparison::ExpectileVsES, replications};
            for (double a : cfg.alphas) check_level("--alphas", a, 0.5, true);
            if (replications < 1) throw FlagError("--replications", "value must be >= 1");
            write_csv(buf, ratio_table_csv(cfg, ratio_table(cfg)));
        } else if (figure->parsed()) {
            if (points < 2) throw FlagError("--points", "value must be >= 2");
            if (kind == "distortion") {
                check_level("--alpha", alpha, 0.5, true);
                std::vector<double> ts;
                for (std::size_t i = 0; i < points; ++i)
                    ts.push_back(i + 1 == points ? 1.0 : static_cast<double>(i) / static_cast<double>(points - 1));
                write_csv(buf, figure_series(FigureKind::DistortionCurves, alpha, ts));
            } else {
                const std::string shape_flag = kind == "frechet-student" ? "--nu" : "--a";
                if (figure->count(shape_flag) == 0) throw FlagError(shape_flag, "required for --kind " + kind);
                check_level("--alpha-min", alpha_min, 0.5, true);
                check_level("--alpha-max", alpha_max, 0.5, true);
                if (alpha_max < alpha_min) throw FlagError("--alpha-max", "must not be below --alpha-min");
                const FigureKind fk = kind == "weibull-beta"     ? FigureKind::WeibullRatioBeta
                                      : kind == "frechet-pareto" ? FigureKind::FrechetRatioPareto
                                                                 : FigureKind::FrechetRatioStudent;
                const auto g = log_grid(alpha_min, alpha_max, points);
                write_csv(buf, flag_guard(shape_flag, [&] { return figure_series(fk, shape, g); }));
            }
        } else if (wass->parsed()) {
            const auto d = need_dist();
            const std::size_t n = to_count("--n", n_value);
            check_level("--alpha", alpha, 0.5, true);
            if (grid < 100) throw FlagError("--grid", "value must be >= 100");
            const Sample s = sample(d, n, seed);
            const double w = wasserstein_exact(s, d);
            const auto trap = wasserstein_empirical(s, d, grid);
            const LossSource emp(s), par(d);
            buf << "wasserstein: " << csv_number(w) << '\n'
                << "wasserstein_trapezoid: " << csv_number(trap.value) << " (error estimate "
                << csv_number(trap.error_estimate) << ")\n"
                << "es_deviation: " << csv_number(std::fabs(expected_shortfall(emp, alpha) - expected_shortfall(par, alpha)))
                << " bound " << csv_number(w / (1.0 - alpha)) << '\n'
                << "expectile_deviation: " << csv_number(std::fabs(expectile(emp, alpha) - expectile(par, alpha)))
                << " bound " << csv_number(alpha / (1.0 - alpha) * w) << '\n';
        }
    } catch (const FlagError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "computation error: " << e.what() << '\n';
        return 1;
    }

    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) {
            err << "error: --out: cannot write '" << out_path << "'\n";
            return 2;
        }
        f << buf.str();
    } else {
        out << buf.str();
    }
    return 0;
}

} // namespace tailrisk::cli

#endif // TAILRISK_TOOLS_CLI_HPP
