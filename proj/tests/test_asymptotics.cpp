#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tailrisk/asymptotics.hpp"

using namespace tailrisk;

namespace {

std::vector<double> log_grid(double lo_exp, double hi_exp, double step) {
    std::vector<double> g;
    for (double l = lo_exp; l >= hi_exp - 1e-9; l -= step) g.push_back(1.0 - std::pow(10.0, l));
    return g;
}

} // namespace

TEST(FrechetRatio, KnownValues) {
    EXPECT_DOUBLE_EQ(frechet_ratio(2.0, -1.0, 0.0, 0.9, Order::First).value, 0.5);
    EXPECT_DOUBLE_EQ(frechet_c(2.0, 0.0), 0.5);
    EXPECT_NEAR(frechet_ratio(1.0001, -1.0, 0.0, 0.9, Order::First).value, 0.9990, 5e-5);
    EXPECT_THROW(frechet_ratio(1.0, -1.0, 0.0, 0.9, Order::First), InvalidArgument);
}

TEST(FrechetRatio, SecondOrderAssembly) {
    const double eta = 2.5, rho = -0.7, aq = 0.03, alpha = 0.995;
    const auto r = frechet_ratio(eta, rho, aq, alpha, Order::Second);
    const double lead = std::pow(eta - 1.0, (eta - 1.0) / eta) * std::pow(2.0 * alpha - 1.0, 1.0 / eta) / eta;
    EXPECT_NEAR(r.leading, lead, 1e-15);
    EXPECT_NEAR(r.value, r.leading * (1.0 + r.correction), 1e-15);
    EXPECT_NEAR(r.correction, -frechet_c(eta, rho) * aq, 1e-15);
    EXPECT_EQ(frechet_ratio(eta, rho, aq, alpha, Order::First).correction, 0.0);
}

TEST(FrechetRatio, ConstantContinuousInEta) {
    double prev = frechet_ratio(1.1, -1.0, 0.0, 0.9, Order::First).value;
    for (double eta = 1.101; eta < 6.0; eta += 0.001) {
        const double v = frechet_ratio(eta, -1.0, 0.0, 0.9, Order::First).value;
        EXPECT_LT(std::fabs(v - prev), 0.01);
        prev = v;
    }
}

TEST(FrechetRatio, RhoZeroBranchIsSeparateFromGeneralBranch) {
    // the general branch tends to ln(eta-1)/eta^2 as rho -> 0, while the
    // rho = 0 branch is (ln(eta-1) + 1/(eta-1))/eta
    for (double eta : {1.5, 2.0, 3.3}) {
        EXPECT_NEAR(frechet_c(eta, -1e-7), std::log(eta - 1.0) / (eta * eta), 1e-6);
        EXPECT_NEAR(frechet_c(eta, 0.0), (std::log(eta - 1.0) + 1.0 / (eta - 1.0)) / eta, 1e-15);
    }
}

TEST(FrechetRatio, ReproducesParetoSpecialization) {
    for (double a : {1.8, 2.1, 2.9}) {
        for (double alpha : {0.95, 0.99, 0.9999}) {
            const double q = oracle::pareto_quantile(a, alpha) - 1.0 / (a - 1.0);
            const double astar = a * a / ((a - 1.0) * q);
            const double lead = std::pow(a - 1.0, (a - 1.0) / a) * std::pow(2.0 * alpha - 1.0, 1.0 / a) / a;
            const double specialized =
                lead * (1.0 + (1.0 - std::pow(a - 1.0, 1.0 / a)) / (std::pow(1.0 - alpha, -1.0 / a) - a / (a - 1.0)));
            EXPECT_NEAR(frechet_ratio(a, -1.0, astar, alpha, Order::Second).value, specialized, 1e-9) << a << ' ' << alpha;
        }
    }
}

TEST(FrechetRatio, StudentShortcutDiffersByFactorNu) {
    // The general second-order form with A(x) = nu^2 (nu+1) x^-2 / (nu+2) gives a
    // correction nu times the one obtained from (nu-1)(1-(nu-1)^{2/nu}) / (2 (nu+2) q^2).
    const double nu = 2.9, alpha = 0.999;
    const DistributionSpec t(StudentT{nu});
    const double q = value_at_risk(t, alpha);
    const auto cls = mda_classify(t);
    const double general = frechet_ratio(nu, -2.0, cls.auxiliary(q), alpha, Order::Second).correction;
    const double shortcut = (nu - 1.0) * (1.0 - std::pow(nu - 1.0, 2.0 / nu)) / (2.0 * (nu + 2.0) * q * q);
    EXPECT_NEAR(general, nu * shortcut, 1e-12);
    const double exact = expectile(t, alpha) / expected_shortfall(t, alpha);
    const double lead = frechet_ratio(nu, -2.0, 0.0, alpha, Order::Second).leading;
    EXPECT_LT(std::fabs(lead * (1.0 + general) - exact), std::fabs(lead * (1.0 + shortcut) - exact));
}

TEST(FrechetRatio, SecondOrderBeatsFirstOrderOnGrid) {
    const auto grid = log_grid(-2.0, -6.0, 0.25);
    for (const auto& d : {DistributionSpec(Pareto{2.1}), DistributionSpec(Pareto{2.9}), DistributionSpec(StudentT{1.8}),
                          DistributionSpec(StudentT{2.9})}) {
        for (const auto& p : frechet_ratio_curve(d, grid)) {
            EXPECT_LT(std::fabs(p.second - p.exact), std::fabs(p.first - p.exact)) << to_string(d) << ' ' << p.alpha;
        }
    }
}

TEST(FrechetRatio, HeavyParetoSecondOrderWinsAboveCrossing) {
    // for a = 1.8 the exact curve crosses the first-order constant near alpha = 0.9915
    const auto d = DistributionSpec(Pareto{1.8});
    for (const auto& p : frechet_ratio_curve(d, log_grid(-2.1, -6.0, 0.1)))
        EXPECT_LT(std::fabs(p.second - p.exact), std::fabs(p.first - p.exact)) << p.alpha;
    const auto at99 = frechet_ratio_curve(d, {0.99}).front();
    EXPECT_GT(std::fabs(at99.second - at99.exact), std::fabs(at99.first - at99.exact));
}

TEST(FrechetRatio, BitIdenticalReevaluation) {
    const auto a = frechet_ratio(2.3, -1.0, 0.01, 0.99, Order::Second);
    const auto b = frechet_ratio(2.3, -1.0, 0.01, 0.99, Order::Second);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.correction, b.correction);
}

TEST(FrechetBetaStarRatio, KnownValues) {
    EXPECT_EQ(frechet_beta_star_ratio(2.0, -1.0, 0.0, 0.99, Order::First).value, 1.0);
    EXPECT_EQ(frechet_beta_star_ratio(3.0, -1.0, 0.0, 0.9999, Order::First).value, 2.0);
    EXPECT_THROW(frechet_beta_star_ratio(2.0, 1.0, 0.1, 0.99, Order::Second), InvalidArgument);
}

TEST(FrechetBetaStarRatio, ParetoExactComparison) {
    // raw Pareto a = 2: exact beta* is closed form
    for (double alpha : {0.999, 0.9999}) {
        const double exact = (1.0 - oracle::pareto2_beta_star(alpha)) / (1.0 - alpha);
        const double first = frechet_beta_star_ratio(2.0, -1.0, 0.0, alpha, Order::First).value;
        if (alpha == 0.9999) EXPECT_NEAR(exact / first, 1.0, 0.05);
        else EXPECT_GT(std::fabs(exact / first - 1.0), 0.05);
    }
    const auto curve = frechet_beta_star_curve(DistributionSpec(Pareto{2.0}), {0.999});
    EXPECT_NEAR(curve[0].second / curve[0].exact, 1.0, 0.01);
}

TEST(WeibullRatio, ReproducesBetaSpecialization) {
    for (double a : {1.01, 1.1, 2.0}) {
        for (double alpha : {0.99, 0.999}) {
            const DistributionSpec d(PowerBeta{a});
            const auto cls = mda_classify(d);
            const double q = value_at_risk(d, alpha);
            const double a0 = cls.auxiliary(weibull_a0_argument(1.0, 1.0, q));
            const auto r = weibull_ratio(1.0, -1.0, 1.0, mean(d), q, a0, alpha, Order::Second);
            const double g = 1.0 - std::pow(alpha, 1.0 / a);
            const double specialized = std::sqrt((a + 1.0) * (2.0 * alpha - 1.0) * g) / (2.0 * std::sqrt(2.0)) *
                                   (1.0 + (a + 2.0) / 3.0 * std::sqrt(2.0 * g / (a + 1.0)));
            EXPECT_NEAR(r.value, specialized, 1e-9) << a << ' ' << alpha;
        }
    }
}

TEST(WeibullRatio, FirstOrderVanishesAndSecondOrderWins) {
    const auto grid = log_grid(-2.0, -6.0, 0.25);
    for (double a : {1.01, 1.1}) {
        const auto pts = weibull_ratio_curve(DistributionSpec(PowerBeta{a}), grid);
        EXPECT_LT(pts.back().first, 1e-3);
        for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_LT(pts[i].first, pts[i - 1].first);
        for (const auto& p : pts) EXPECT_LT(std::fabs(p.second - p.exact), std::fabs(p.first - p.exact)) << p.alpha;
    }
    const auto p = weibull_ratio_curve(DistributionSpec(PowerBeta{1.01}), {0.999}).front();
    EXPECT_LT(std::fabs(p.second - p.exact) / p.exact, std::fabs(p.first - p.exact) / p.exact);
}

TEST(WeibullRatio, RejectsInvalidInputs) {
    EXPECT_THROW(weibull_ratio(1.0, -1.0, 1.0, 0.5, 1.0, 0.0, 0.9, Order::First), InvalidArgument);
    EXPECT_THROW(weibull_ratio(1.0, 0.0, 1.0, 0.5, 0.9, 0.0, 0.9, Order::First), InvalidArgument);
    EXPECT_THROW(weibull_ratio(1.0, -1.0, 1.0, 1.0, 0.9, 0.0, 0.9, Order::First), InvalidArgument);
}

TEST(WeibullBetaStarRatio, KnownValues) {
    EXPECT_NEAR(weibull_beta_star_ratio(1.0, 1.0, 0.0, 0.75, 0.9), std::sqrt(8.0), 1e-15);
    const DistributionSpec u(Uniform01{});
    const double lo = weibull_beta_star_ratio(1.0, 1.0, 0.5, value_at_risk(u, 0.99), 0.99);
    const double hi = weibull_beta_star_ratio(1.0, 1.0, 0.5, value_at_risk(u, 0.9999), 0.9999);
    EXPECT_GT(hi, lo);
    const double alpha = 0.999;
    const double exact = (1.0 - oracle::uniform_expectile(alpha)) / (1.0 - alpha);
    EXPECT_NEAR(weibull_beta_star_ratio(1.0, 1.0, 0.5, alpha, alpha) / exact, 1.0, 0.10);
}

TEST(GumbelRelation, KnownValues) {
    EXPECT_EQ(gumbel_relation(DistributionSpec(Exponential{})), GumbelRelation::Equivalent);
    EXPECT_EQ(gumbel_relation(false, false), GumbelRelation::LogEquivalent);
    EXPECT_EQ(gumbel_relation(false, true), GumbelRelation::Equivalent);
    EXPECT_THROW(gumbel_relation(DistributionSpec(Pareto{2.0})), Unsupported);
}

TEST(GumbelRelation, ExponentialRatioConvergesSlowly) {
    const DistributionSpec d(Exponential{});
    double prev = 0.0;
    for (double alpha : {0.99, 0.9999, 1.0 - 1e-6, 1.0 - 1e-9}) {
        const double e = expectile(d, alpha), es = expected_shortfall(d, alpha);
        EXPECT_NEAR(es, 1.0 - std::log(1.0 - alpha), 1e-9 * es);
        EXPECT_GT(e / es, prev);
        EXPECT_LT(std::fabs(std::log(e) / std::log(es) - 1.0), std::fabs(e / es - 1.0));
        prev = e / es;
    }
}

TEST(HillEstimator, ExactParetoGrid) {
    const double a = 2.0;
    const std::size_t n = 200000;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::pow(1.0 - (i + 0.5) / n, -1.0 / a);
    const Sample s(x);
    double prev_err = INFINITY;
    for (std::size_t k : {100u, 1000u, 10000u}) {
        const double err = std::fabs(hill_estimator(s, k) - a);
        EXPECT_LT(err, 0.05);
        EXPECT_LT(err, prev_err * 1.5);
        prev_err = err;
    }
}

TEST(HillEstimator, UnitFactorAtEtaTwo) {
    // top k log-spacings averaging 1/2 give eta^ = 2 exactly
    std::vector<double> x{1.0, 1.0, 1.0, std::exp(0.25), std::exp(0.75)};
    const Sample s(x);
    EXPECT_DOUBLE_EQ(hill_estimator(s, 2), 2.0);
    EXPECT_DOUBLE_EQ(extreme_expectile_estimate(s, 0.9, 2), s.quantile(0.9));
}

TEST(HillEstimator, RejectsBadWindows) {
    const Sample s({-3.0, -2.0, -1.0, 1.0, 2.0});
    EXPECT_THROW(hill_estimator(s, 4), InvalidArgument);
    EXPECT_THROW(hill_estimator(s, 1), InvalidArgument);
    // log-spacings 2 and 3 give eta^ = 0.4, no finite mean
    const Sample heavy(std::vector<double>{1.0, 1.0, 1.0, std::exp(2.0), std::exp(3.0)});
    EXPECT_THROW(extreme_expectile_estimate(heavy, 0.9, 2), ComputationError);
}

TEST(ExtremeExpectile, ParetoEstimateWithinFifteenPercent) {
    const auto s = sample(DistributionSpec(Pareto{2.1}), 100000, 1);
    EXPECT_EQ(default_hill_k(100000), static_cast<std::size_t>(std::ceil(std::pow(1e5, 0.7))));
    const double est = extreme_expectile_estimate(s, 0.995);
    const double exact = oracle::pareto_expectile(2.1, 0.995);
    EXPECT_NEAR(est / exact, 1.0, 0.15);
}
