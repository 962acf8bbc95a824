// Acceptance suite: `tailrisk_acceptance [N...]` runs the listed criteria (all
// when none are given), prints one PASS/FAIL line each and exits nonzero if
// any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tailrisk/allocation.hpp"
#include "tailrisk/concentration.hpp"
#include "tailrisk/montecarlo.hpp"

using namespace tailrisk;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const std::vector<double> table_alphas{0.983, 0.987, 0.991, 0.995, 0.999};

struct TableColumn {
    const char* name;
    DistributionSpec dist;
    Comparison cmp;
    std::vector<double> printed;
};

// 1. theoretical table columns to +-5e-5
Outcome criterion1() {
    constexpr double tol = 5e-5;
    const std::vector<TableColumn> cols{
        {"pareto2.1 e/VaR", DistributionSpec(Pareto{2.1}), Comparison::ExpectileVsVaR, {1.0941, 1.0759, 1.0551, 1.0294, 0.9888}},
        {"pareto2.1 e/ES", DistributionSpec(Pareto{2.1}), Comparison::ExpectileVsES, {0.5307, 0.5273, 0.5231, 0.5177, 0.5086}},
        {"student2.1 e/ES", DistributionSpec(StudentT{2.1}), Comparison::ExpectileVsES, {0.4918, 0.4938, 0.4959, 0.4980, 0.5000}},
        {"pareto2.3 e/ES", DistributionSpec(Pareto{2.3}), Comparison::ExpectileVsES, {0.5331, 0.5299, 0.5260, 0.5209, 0.5123}},
        {"student2.3 e/VaR", DistributionSpec(StudentT{2.3}), Comparison::ExpectileVsVaR, {0.8971, 0.8963, 0.8955, 0.8944, 0.8929}},
    };
    int bad = 0;
    double worst = 0.0;
    std::string where;
    for (const auto& c : cols) {
        for (std::size_t i = 0; i < table_alphas.size(); ++i) {
            const double d = std::fabs(risk_ratio(c.dist, table_alphas[i], c.cmp) - c.printed[i]);
            if (d > tol) ++bad;
            if (d > worst) {
                worst = d;
                where = std::string(c.name) + fmt(" at %.3f", table_alphas[i]);
            }
        }
    }
    return {bad == 0, std::to_string(bad) + " of " + std::to_string(5 * cols.size()) + " cells beyond 5e-5; max deviation " + fmt("%.2e", worst) + " (" + where + ")"};
}

// 2. medians over 20 replications at n = 1e5 on Pareto a=2.1
Outcome criterion2() {
    SimulationConfig cfg{DistributionSpec(Pareto{2.1}), table_alphas, {100000}};
    cfg.seed = 20240601;
    cfg.replications = 20;
    const auto es = ratio_table(cfg);
    cfg.comparison = Comparison::ExpectileVsVaR;
    const auto var = ratio_table(cfg);
    double worst = 0.0;
    for (const auto& r : es) worst = std::max(worst, r.err_pct[0]);
    const double es_top = es.back().err_pct[0], var_top = var.back().err_pct[0];
    return {worst < 1.0 && var_top > es_top,
            fmt("max median Err%% e/ES %.3f%%; at 0.999 e/VaR %.3f%% vs e/ES %.3f%%", worst, var_top, es_top)};
}

// 3. closed forms against the generic root finder, 50 levels
Outcome criterion3() {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double a = 0.5 + 0.49 * (i + 1) / 50.0;
        worst = std::max(worst, std::fabs(expectile(DistributionSpec(Uniform01{}), a) - oracle::uniform_expectile(a)));
        worst = std::max(worst, std::fabs(expectile(DistributionSpec(Exponential{}), a) - oracle::exponential_expectile(a)));
        worst = std::max(worst, std::fabs(expectile(DistributionSpec(Pareto{2.0}), a) - oracle::pareto2_expectile(a)));
    }
    return {worst <= 1e-9, fmt("max abs deviation %.2e", worst)};
}

// 4. bound chain and reconstruction on random empirical sources
Outcome criterion4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ua(0.5, 0.999), ub(0.001, 0.999);
    int violations = 0;
    double worst_rec = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const LossSource src(Sample(oracle::random_sample(rng, 200)));
        const double a = ua(rng), b = ub(rng);
        const double mu = src.mean();
        const double scale = 1.0 + std::fabs(mu) + std::fabs(expected_shortfall(src, 0.999));
        const double slack = 1e-12 * scale;
        const double e = expectile(src, a);
        const auto bd = expectile_bounds(src, a, b);
        if (!(bd.lower <= e + slack && e <= bd.upper + slack && bd.upper <= bd.es_cap + slack)) ++violations;
        if (e > expected_shortfall(src, a) + slack) ++violations;
        if (std::fabs(expectile(src, 0.5) - mu) > slack) ++violations;
        if (std::fabs(expected_shortfall(src, 0.0) - mu) > slack) ++violations;
        if (src.is_constant()) continue;
        const auto bs = beta_star(src, a);
        for (double beta : {bs.lower, bs.upper, 0.5 * (bs.lower + bs.upper)}) {
            if (beta >= 1.0) continue;
            const double d = std::fabs(expectile_from_es(src, a, beta).value - e) / (1.0 + std::fabs(e));
            worst_rec = std::max(worst_rec, d);
            if (d > 1e-9) ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations; max reconstruction error " + fmt("%.2e", worst_rec)};
}

// 5. two-point example
Outcome criterion5() {
    const LossSource src(DistributionSpec(TwoPoint{0.0, 1.0, 0.5}));
    const double a = 0.9;
    const double e = expectile(src, a);
    const double es = expected_shortfall(src, 4.0 / 9.0);
    const double r = distortion_value(src, ExpectileDistortion{a});
    const double upper = expectile_bounds(src, a, 0.5).upper;
    const double d = std::max({std::fabs(e - 0.9), std::fabs(es - 0.9), std::fabs(r - 0.9), std::fabs(upper - 17.0 / 18.0)});
    return {d <= 1e-12 && upper > e, fmt("e %.15f, ES_4/9 %.15f, R_phi %.15f", e, es, r) + fmt(", upper %.15f", upper)};
}

// 6. Frechet convergence and second-order accuracy
Outcome criterion6() {
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(1.0 - std::pow(10.0, -2.0 - 4.0 * i / 40.0));
    bool pass = true;
    std::string detail;
    const std::vector<std::pair<std::string, DistributionSpec>> ds{{"pareto1.8", DistributionSpec(Pareto{1.8})},
                                                                   {"pareto2.9", DistributionSpec(Pareto{2.9})},
                                                                   {"student1.8", DistributionSpec(StudentT{1.8})},
                                                                   {"student2.9", DistributionSpec(StudentT{2.9})}};
    for (const auto& [name, d] : ds) {
        const auto far = frechet_ratio_curve(d, {1.0 - 1e-6}).front();
        const double gap = std::fabs(far.exact - far.first);
        int losses = 0;
        double first_loss = NAN;
        for (const auto& p : frechet_ratio_curve(d, grid)) {
            if (!(std::fabs(p.second - p.exact) < std::fabs(p.first - p.exact))) {
                if (losses++ == 0) first_loss = p.alpha;
            }
        }
        pass = pass && gap <= 0.01 && losses == 0;
        detail += name + fmt(" gap %.2e", gap) + (losses ? fmt(" second-order worse at %.0f levels from %.6f", losses, first_loss) : "") + "; ";
    }
    return {pass, detail};
}

// 7. Euler allocation
Outcome criterion7() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.5, 0.999);
    double worst = 0.0, worst_self = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 1 + trial % 5;
        std::vector<std::vector<double>> comps;
        for (std::size_t k = 0; k < d; ++k) comps.push_back(oracle::random_sample(rng, 1000));
        const Portfolio p(comps);
        const double a = ua(rng);
        const auto c = expectile_euler(p, a);
        double s = 0.0;
        for (double v : c) s += v;
        const double e = expectile(Sample(p.total()), a);
        worst = std::max(worst, std::fabs(s - e) / (1.0 + std::fabs(e)));
        const double self = expectile_euler(Portfolio({comps[0]}), a)[0];
        const double e0 = expectile(Sample(comps[0]), a);
        worst_self = std::max(worst_self, std::fabs(self - e0) / (1.0 + std::fabs(e0)));
    }
    const double eta = 2.5;
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::vector<std::vector<double>> comps;
        for (std::uint64_t k = 0; k < 3; ++k) {
            const Sample s = sample(DistributionSpec(Pareto{eta}), 1000000, mix_seed(seed, {k}));
            comps.emplace_back(s.values().begin(), s.values().end());
        }
        const auto t = euler_asymptotic_ratio(Portfolio(comps), eta, {0.999});
        if (t.rows[0].degenerate) return {false, "degenerate tail at seed " + std::to_string(seed)};
        for (double r : t.rows[0].ratio) ratios.push_back(r);
    }
    std::sort(ratios.begin(), ratios.end());
    const double med = ratios[ratios.size() / 2];
    const double gap = std::fabs(med - frechet_constant(eta));
    return {worst <= 1e-9 && worst_self <= 1e-12 && gap <= 0.1,
            fmt("full allocation %.2e, self allocation %.2e, median ratio gap %.4f", worst, worst_self, gap)};
}

// 8. Wasserstein deviation bounds
Outcome criterion8() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ua(0.5, 0.999);
    const std::vector<DistributionSpec> ds{DistributionSpec(Pareto{2.1}), DistributionSpec(Pareto{4.0}),
                                           DistributionSpec(StudentT{2.3}), DistributionSpec(StudentT{5.0}),
                                           DistributionSpec(Exponential{}), DistributionSpec(Uniform01{}),
                                           DistributionSpec(PowerBeta{1.5})};
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto& d = ds[trial % ds.size()];
        const Sample s = sample(d, 50 + 25 * (trial % 9), rng());
        const double w = wasserstein_exact(s, d);
        const double a = ua(rng);
        const LossSource emp(s);
        const double slack = 1e-10 * (1.0 + std::fabs(expected_shortfall(d, a)));
        if (std::fabs(expected_shortfall(emp, a) - expected_shortfall(d, a)) > w / (1.0 - a) + slack) ++violations;
        if (std::fabs(expectile(emp, a) - expectile(d, a)) > a / (1.0 - a) * w + slack) ++violations;
    }
    return {violations == 0, std::to_string(violations) + " violations over 200 pairs"};
}

// 9. normalized n_ES / n_VaR curve for Pareto a=2.1
Outcome criterion9() {
    const TailClass tc{PolyMoment{2.05, 2.01}};
    const auto r = size_ratio_curve(DistributionSpec(Pareto{2.1}), tc, 0.01, 0.1, {0.9, 0.99, 0.999, 0.9999});
    bool decreasing = true;
    for (std::size_t i = 1; i < r.size(); ++i) decreasing = decreasing && r[i].ratio_es < r[i - 1].ratio_es;
    const double normalized = r.back().ratio_es / r.front().ratio_es;
    return {decreasing && normalized < 1e-2, fmt("normalized ratio at 0.9999 %.3e", normalized) + (decreasing ? ", decreasing" : ", not decreasing")};
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                         criterion6, criterion7, criterion8, criterion9};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= 9; ++i) which.push_back(i);
    bool all = true;
    for (int n : which) {
        if (n < 1 || n > 9) {
            std::fprintf(stderr, "unknown criterion %d\n", n);
            return 2;
        }
        Outcome o;
        try {
            o = criteria[n - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
