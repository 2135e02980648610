#include <doctest.h>

#include <cmath>

#include "lam/estimate.hpp"
#include "lam/regime.hpp"
#include "support.hpp"

using namespace lam;

namespace {

const Universe U3 = lamtest::universe_of(3);
const Universe U4 = lamtest::universe_of(4);

LamParams<double> lab3_params() { return LamParams<double>({1, 2.0 / 3, 1.0 / 3}, {1, 2, 3}, 0.5); }
LamParams<double> field4_params() { return LamParams<double>({1, 2, 4, 5}, {1, 0.8, 0.4, 0.2}, 0.75); }

LamParams<double> random_params(lamtest::Rng& rng, std::size_t n) {
    return LamParams<double>(rng.real_utilities(n), rng.real_utilities(n), rng.real(0.05, 0.95));
}

// Arbitrary counts, not generated by any LAM.
ChoiceCounts random_counts(lamtest::Rng& rng, std::size_t n) {
    ChoiceCounts::Table t;
    for (Menu m : all_menus(n)) {
        ChoiceCounts::Row row(n, 0);
        for (AltIndex i : m.members()) row[i] = rng.integer(0, 40);
        row[m.members().front()] += 1;
        t.emplace(m, row);
    }
    return ChoiceCounts(lamtest::universe_of(n), t);
}

double max_error(const LamParams<double>& a, const LamParams<double>& b) {
    double e = std::abs(a.alpha() - b.alpha());
    for (std::size_t i = 0; i < a.size(); ++i) {
        e = std::max({e, std::abs(a.u()[i] - b.u()[i]), std::abs(a.v()[i] - b.v()[i])});
    }
    return e;
}

}  // namespace

TEST_CASE("ChoiceCounts validation") {
    ChoiceCounts::Table ok{{Menu{0, 1}, {3, 1, 0}}};
    ChoiceCounts c(U3, ok);
    CHECK(c.trials(Menu{0, 1}) == 4);
    CHECK(c.empirical_rho().prob(0, Menu{0, 1}) == doctest::Approx(0.75));
    CHECK_THROWS_AS(c.trials(Menu{0, 2}), MissingData);
    CHECK_THROWS_AS(ChoiceCounts(U3, {{Menu{0, 1}, {3, 1, 2}}}), InvalidParameter);
    CHECK_THROWS_AS(ChoiceCounts(U3, {{Menu{0, 1}, {-1, 1, 0}}}), InvalidParameter);
    CHECK_THROWS_AS(ChoiceCounts(U3, {{Menu{0, 1}, {0, 0, 0}}}), InvalidParameter);
    CHECK_THROWS_AS(ChoiceCounts(U3, {{Menu{0, 1}, {1, 1}}}), InvalidParameter);
}

TEST_CASE("simulate_counts: determinism and the uniform law") {
    LamParams<double> flat({1, 1, 1}, {1, 3, 2}, 1.0);
    std::vector<Menu> menus{Menu{0, 1, 2}};
    auto a = simulate_counts(U3, flat, menus, 300, 11);
    auto b = simulate_counts(U3, flat, menus, 300, 11);
    CHECK(a == b);
    CHECK_FALSE(a == simulate_counts(U3, flat, menus, 300, 12));
    // 99.9% two-sided band: 3.29 standard deviations.
    const double sd = std::sqrt(300.0 * (1.0 / 3) * (2.0 / 3));
    for (auto c : a.table().at(Menu{0, 1, 2})) CHECK(std::abs(static_cast<double>(c) - 100.0) <= 3.29 * sd);
    CHECK_THROWS_AS(simulate_counts(U3, flat, menus, 0, 1), InvalidParameter);

    std::vector<Menu> dup{Menu{0, 1}, Menu{0, 1}};
    CHECK(simulate_counts(U3, flat, dup, 10, 3).table().size() == 1);
}

TEST_CASE("simulate_counts: pairwise frequency of the four-alternative model") {
    std::vector<Menu> menus{Menu{0, 1}};
    auto c = simulate_counts(U4, field4_params(), menus, 1000000, 2024);
    const double f = static_cast<double>(c.table().at(Menu{0, 1})[0]) / 1e6;
    CHECK(std::abs(f - 7.0 / 18) < 0.002);
}

TEST_CASE("property: simulated frequencies lie in 5 sigma bands") {
    lamtest::Rng rng(8);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto p = random_params(rng, n);
        auto menus = all_menus(n);
        const std::int64_t trials = 4000;
        auto c = simulate_counts(lamtest::universe_of(n), p, menus, trials, 100 + k);
        for (Menu m : menus) {
            const auto q = lam_forward(p, m);
            for (AltIndex i : m.members()) {
                const double sd = std::sqrt(q[i] * (1 - q[i]) / trials);
                const double f = static_cast<double>(c.table().at(m)[i]) / trials;
                CHECK(std::abs(f - q[i]) <= 5 * sd + 1e-12);
            }
        }
    }
}

TEST_CASE("log_likelihood: small cases") {
    LamParams<double> even({1, 1, 1}, {1, 1, 1}, 0.3);
    CHECK(log_likelihood(even, ChoiceCounts(U3, {{Menu{0}, {1, 0, 0}}})) == 0.0);
    CHECK(log_likelihood(even, ChoiceCounts(U3, {{Menu{0, 1}, {1, 0, 0}}})) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("property: swap invariance of the likelihood") {
    lamtest::Rng rng(21);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto data = random_counts(rng, n);
        // Dyadic alpha keeps 1 - (1 - alpha) == alpha, so equality is exact.
        const double alpha = static_cast<double>(rng.integer(1, 63)) / 64;
        LamParams<double> p(rng.real_utilities(n), rng.real_utilities(n), alpha);
        CHECK(log_likelihood(p, data) == log_likelihood(p.swapped(), data));
        LamParams<double> q = random_params(rng, n);
        CHECK(log_likelihood(q, data) == doctest::Approx(log_likelihood(q.swapped(), data)).epsilon(1e-13));
    }
}

TEST_CASE("log_likelihood peaks near the generating parameters") {
    auto menus = all_menus(3);
    const auto truth = lab3_params();
    auto data = simulate_counts(U3, truth, menus, 100000, 5);
    const double best = log_likelihood(truth, data);
    lamtest::Rng rng(6);
    const auto theta = to_coordinates(truth);
    for (int k = 0; k < 100; ++k) {
        std::vector<double> dir(theta.size());
        double norm = 0;
        for (auto& d : dir) {
            d = std::normal_distribution<double>()(rng.engine());
            norm += d * d;
        }
        std::vector<double> moved(theta);
        for (std::size_t i = 0; i < theta.size(); ++i) moved[i] += 0.1 * dir[i] / std::sqrt(norm);
        CHECK(log_likelihood(from_coordinates(moved, 3, 0), data) < best);
    }
}

TEST_CASE("coordinates round trip") {
    auto p = field4_params();
    auto back = from_coordinates(to_coordinates(p), 4, 0);
    CHECK(max_error(p, back) < 1e-14);
    CHECK_THROWS_AS(to_coordinates(LamParams<double>({1, 2}, {1, 3}, 1.0)), InvalidParameter);
}

TEST_CASE("property: analytic gradient matches central differences") {
    lamtest::Rng rng(13);
    const double h = 1e-5;
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto data = random_counts(rng, n);
        auto p = random_params(rng, n);
        auto theta = to_coordinates(p);
        auto g = log_likelihood_gradient(p, data);
        REQUIRE(g.size() == theta.size());
        double scale = 1;
        for (double gi : g) scale = std::max(scale, std::abs(gi));
        for (std::size_t i = 0; i < theta.size(); ++i) {
            auto up = theta, dn = theta;
            up[i] += h;
            dn[i] -= h;
            const double fd = (log_likelihood(from_coordinates(up, n, 0), data) -
                               log_likelihood(from_coordinates(dn, n, 0), data)) /
                              (2 * h);
            CHECK(std::abs(fd - g[i]) <= 1e-6 * scale);
        }
    }
}

TEST_CASE("weighted Luce MLE recovers a Luce rule from exact weights") {
    std::vector<double> w{1, 3, 0.5, 2};
    std::map<Menu, std::vector<double>> weights;
    for (Menu m : all_menus(4)) {
        auto row = luce_choice(w, m);
        for (auto& r : row) r *= 1000;
        weights.emplace(m, row);
    }
    auto fit = weighted_luce_mle(weights, std::vector<double>(4, 1.0), 0, InnerOptions{1e-14, 5000});
    for (std::size_t i = 0; i < 4; ++i) CHECK(fit[i] == doctest::Approx(w[i]).epsilon(1e-6));
}

TEST_CASE("property: EM ascent on arbitrary data") {
    lamtest::Rng rng(31);
    for (int k = 0; k < 30; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto data = random_counts(rng, n);
        auto p = random_params(rng, n);
        double ll = log_likelihood(p, data);
        for (int s = 0; s < 25; ++s) {
            p = em_step(p, data).params;
            const double next = log_likelihood(p, data);
            CHECK(next >= ll - 1e-10);
            ll = next;
        }
    }
}

TEST_CASE("em_step: aligned start keeps alpha and boundary steps freeze it") {
    auto data = simulate_counts(U4, LamParams<double>({1, 2, 3, 4}, {1, 2, 3, 4}, 0.5), all_menus(4), 500, 4);
    LamParams<double> start({1, 1.5, 2, 2.5}, {1, 1.5, 2, 2.5}, 0.3);
    auto s = em_step(start, data);
    CHECK_FALSE(s.boundary_frozen);
    CHECK(s.params.alpha() == doctest::Approx(0.3).epsilon(1e-12));
    for (std::size_t i = 0; i < 4; ++i) CHECK(s.params.u()[i] == doctest::Approx(s.params.v()[i]).epsilon(1e-10));

    LamParams<double> edge({1, 1, 1, 1}, {1, 2, 2, 2}, 0.0);
    auto f = em_step(edge, data);
    CHECK(f.boundary_frozen);
    CHECK(f.params.alpha() == 0.0);
    CHECK(f.params.u() == edge.u());
    CHECK(f.params.v() != edge.v());
}

TEST_CASE("run_em recovers the four-alternative model") {
    std::vector<Menu> menus = all_menus(4);
    const auto truth = field4_params();
    auto data = simulate_counts(U4, truth, menus, 100000, 1);
    FitOptions opts;
    opts.tol_ll = 1e-13;
    opts.max_iter = 20000;
    LamParams<double> start({1, 1, 1, 1}, {1, 0.9, 0.5, 0.3}, 0.5);
    std::vector<double> trace;
    double worst = 0;
    auto rec = run_em(data, start, opts, &trace, &worst);
    CHECK(rec.converged);
    CHECK(worst >= -1e-10);
    auto p = rec.final_params.alpha() < 0.5 ? rec.final_params.swapped() : rec.final_params;
    CHECK(std::abs(p.alpha() - 0.75) < 0.03);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(p.v()[i] - truth.v()[i]) < 0.05);
        // Absolute error in u is dominated by sampling noise at this n.
        CHECK(std::abs(p.u()[i] / truth.u()[i] - 1) < 0.05);
    }
}

TEST_CASE("fit_mle: alpha pair, determinism and ascent") {
    auto data = simulate_counts(U4, field4_params(), all_menus(4), 100000, 1);
    FitOptions opts;
    auto a = fit_mle(data, 4, opts, 99);
    auto b = fit_mle(data, 4, opts, 99);
    CHECK(a.status == FitStatus::converged);
    CHECK(a.params.alpha() >= 0.5);
    CHECK(std::abs(a.params.alpha() - 0.75) < 0.03);
    CHECK(a.min_increment >= -1e-10);
    CHECK(a.params == b.params);
    CHECK(a.log_likelihood == b.log_likelihood);
    CHECK(a.trace == b.trace);
    CHECK(a.iterations == b.iterations);
    CHECK(a.starts.size() == 5);
    for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i] >= a.trace[i - 1] - 1e-10);
    for (const auto& s : a.starts) CHECK(s.log_likelihood <= a.log_likelihood);
}

TEST_CASE("fit_mle on counts proportional to a Luce rule") {
    const std::vector<double> w{1, 2, 3, 4};
    ChoiceCounts::Table t;
    for (Menu m : all_menus(4)) {
        ChoiceCounts::Row row(4, 0);
        for (AltIndex i : m.members()) row[i] = static_cast<std::int64_t>(100 * w[i]);
        t.emplace(m, row);
    }
    ChoiceCounts data(U4, t);
    auto r = fit_mle(data, 5, FitOptions{}, 3);
    CHECK(r.status == FitStatus::converged);
    CHECK(classify_regime(r.params, 1e-6).regime == Regime::aligned);
    for (std::size_t i = 0; i < 4; ++i) CHECK(r.params.u()[i] == doctest::Approx(w[i]).epsilon(1e-6));

    // Without the one-component start EM only creeps toward u = v.
    FitOptions random_only;
    random_only.pooled_start = false;
    auto slow = fit_mle(data, 5, random_only, 3);
    CHECK(slow.log_likelihood <= r.log_likelihood);
    CHECK(sup_distance(lam_rule(U4, slow.params, all_menus(4)), data.empirical_rho()) < 1e-2);
}

TEST_CASE("fit_mle: degenerate and invalid inputs") {
    auto data = simulate_counts(U3, lab3_params(), all_menus(3), 200, 2);
    FitOptions wide;
    wide.boundary_tol = 0.5;  // every alpha counts as a boundary value
    auto r = fit_mle(data, 3, wide, 1);
    CHECK(r.status == FitStatus::degenerate_fit);
    CHECK_THROWS_AS(fit_mle(data, 0, FitOptions{}, 1), InvalidParameter);
    CHECK_THROWS_AS(fit_mle(ChoiceCounts(U3, {}), 2, FitOptions{}, 1), InsufficientData);
}
