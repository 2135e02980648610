#include <doctest.h>

#include <cmath>

#include "lam/instability.hpp"
#include "lam/luce_utility.hpp"
#include "lam/regime.hpp"
#include "support.hpp"

using namespace lam;
using lamtest::Q;
using lamtest::Qv;

namespace {

const Universe U3 = lamtest::universe_of(3);
const Universe U4 = lamtest::universe_of(4);
const Menu XYZ{0, 1, 2};
const Menu XY{0, 1};
const Menu XZ{0, 2};

StochasticChoice<Rational> ex1_ai() {
    LamParams<Rational> p(Qv({1, Q(2, 3), Q(1, 3)}), Qv({1, 2, 3}), Q(1, 2));
    auto menus = all_menus(3);
    return lam_rule(U3, p, menus);
}

StochasticChoice<Rational> ex1_h() {
    auto menus = all_menus(3);
    return luce_rule(U3, Qv({1, Q(2, 3), Q(1, 3)}), menus);
}

}  // namespace

TEST_CASE("universe validation") {
    CHECK_THROWS_AS(Universe({"x", "y"}), InvalidParameter);
    CHECK_THROWS_AS(Universe({"x", "y", "x"}), InvalidParameter);
    CHECK_THROWS_AS(Universe({"x", "", "z"}), InvalidParameter);
    CHECK_THROWS_AS(Universe({"x", "y;z", "w"}), InvalidParameter);
    Universe u({"a", "b", "c"});
    CHECK(u.index("c") == 2);
    CHECK_THROWS_AS(u.index("d"), InvalidParameter);
}

TEST_CASE("menu order, formatting and parsing") {
    CHECK(Menu{0, 1} < Menu{0, 1, 2});
    CHECK(Menu{0, 1, 2} < Menu{0, 2});
    CHECK(Menu{0, 2} < Menu{1, 2});
    auto menus = all_menus(3);
    REQUIRE(menus.size() == 4);
    CHECK(menus[0] == XY);
    CHECK(menus[1] == XYZ);
    CHECK(all_menus(4).size() == 11);
    CHECK(format_menu(U3, Menu{2, 0}) == "x;z");
    CHECK(parse_menu(U3, "z;x") == XZ);
    CHECK_THROWS_AS(parse_menu(U3, "x;x"), InvalidParameter);
    CHECK_THROWS_AS(parse_menu(U3, "x;w"), InvalidParameter);
    CHECK_THROWS_AS(parse_menu(U3, "x;;y"), InvalidParameter);
}

TEST_CASE("stochastic choice validation") {
    using SC = StochasticChoice<Rational>;
    CHECK_THROWS_AS(SC(U3, {{XY, Qv({Q(1, 2), Q(1, 3), 0})}}), InvalidParameter);
    CHECK_THROWS_AS(SC(U3, {{XY, Qv({Q(1, 2), Q(1, 4), Q(1, 4)})}}), InvalidParameter);
    CHECK_THROWS_AS(SC(U3, {{XY, Qv({1, 0})}}), InvalidParameter);
    SC ok(U3, {{XY, Qv({1, 0, 0})}});
    CHECK_FALSE(ok.positive());
    CHECK_THROWS_AS(ok.row(XZ), MissingData);
    CHECK(ex1_ai().positive());
    using SD = StochasticChoice<double>;
    CHECK_NOTHROW(SD(U3, {{XY, {0.5, 0.5 + 1e-12, 0.0}}}));
    CHECK_THROWS_AS(SD(U3, {{XY, {0.5, 0.5 + 1e-6, 0.0}}}), InvalidParameter);
}

TEST_CASE("lam params normalise at the anchor") {
    LamParams<Rational> p(Qv({2, 4, 6}), Qv({3, 3, 6}), Q(1, 3));
    CHECK(p.u() == Qv({1, 2, 3}));
    CHECK(p.v() == Qv({1, 1, 2}));
    LamParams<Rational> q = p.with_anchor(1);
    CHECK(q.u() == Qv({Q(1, 2), 1, Q(3, 2)}));
    CHECK_THROWS_AS(LamParams<Rational>(Qv({1, 0, 1}), Qv({1, 1, 1}), Q(1, 2)), InvalidParameter);
    CHECK_THROWS_AS(LamParams<Rational>(Qv({1, 1, 1}), Qv({1, 1, 1}), Q(3, 2)), InvalidParameter);
    CHECK(p.swapped().alpha() == Q(2, 3));
}

TEST_CASE("luce_choice examples") {
    CHECK(luce_choice(Qv({1, Q(2, 3), Q(1, 3)}), XYZ) == Qv({Q(1, 2), Q(1, 3), Q(1, 6)}));
    CHECK(luce_choice(Qv({5, 5, 5}), XYZ) == Qv({Q(1, 3), Q(1, 3), Q(1, 3)}));
    CHECK(luce_choice(Qv({1, 2, 3}), XZ) == Qv({Q(1, 4), 0, Q(3, 4)}));
    CHECK_THROWS_AS(luce_choice(Qv({1, -1, 3}), XYZ), InvalidParameter);
}

TEST_CASE("lam_forward examples") {
    LamParams<Rational> p2(Qv({1, 2, 4, 5}), Qv({1, Q(4, 5), Q(2, 5), Q(1, 5)}), Q(3, 4));
    CHECK(lam_forward(p2, XY)[0] == Q(7, 18));
    LamParams<Rational> one(Qv({1, 2, 3}), Qv({1, 7, 1}), Q(1));
    CHECK(lam_forward(one, XYZ) == luce_choice(one.u(), XYZ));
    LamParams<Rational> p1(Qv({1, Q(2, 3), Q(1, 3)}), Qv({1, 2, 3}), Q(1, 2));
    CHECK(lam_forward(p1, XYZ) == Qv({Q(1, 3), Q(1, 3), Q(1, 3)}));
}

TEST_CASE("instability measures on the three-alternative pair") {
    auto ai = ex1_ai();
    auto h = ex1_h();
    InstabilityTuple t{0, 1, XYZ, XY};
    CHECK(delta(ai, t) == Q(1, 45));
    CHECK(gamma(ai, h, t) == Q(-1, 15));
    CHECK(phi(ai, h, t) == Q(2, 45));
    CHECK(delta(h, t) == 0);
    CHECK(delta(ai, InstabilityTuple{0, 1, XYZ, XYZ}) == 0);
    CHECK(gamma(ai, ai, InstabilityTuple{0, 1, XY, XY}) == 0);
    CHECK(gamma(ai, h, InstabilityTuple{1, 0, XYZ, XY}) == Q(1, 15));
    CHECK(phi(ai, ai, t) == 2 * delta(ai, t));
    CHECK(phi(h, ai, t) == phi(ai, h, t));
    CHECK_THROWS_AS(delta(ai, InstabilityTuple{0, 2, XYZ, XY}), InvalidParameter);
    StochasticChoice<Rational> partial(U3, {{XY, ai.row(XY)}});
    CHECK_THROWS_AS(delta(partial, t), MissingData);
}

TEST_CASE("iia_violations") {
    auto ai = ex1_ai();
    auto viol = iia_violations(ai, Rational(0));
    auto has = [&](InstabilityTuple t) { return std::find(viol.begin(), viol.end(), t) != viol.end(); };
    CHECK(has(InstabilityTuple{0, 1, XYZ, XY}));
    CHECK_FALSE(has(InstabilityTuple{0, 2, XYZ, XZ}));
    CHECK(std::is_sorted(viol.begin(), viol.end()));
    CHECK(iia_violations(ex1_h(), Rational(0)).empty());
    CHECK(satisfies_iia(ex1_h(), Rational(0)));

    lamtest::Rng rng(11);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto u = rng.utilities(n);
        auto v = rng.utilities(n);
        if (lamtest::proportional(u, v)) continue;
        auto menus = all_menus(n);
        auto rho = lam_rule(lamtest::universe_of(n), LamParams<Rational>(u, v, Q(1, 2)), menus);
        CHECK_FALSE(iia_violations(rho, Rational(0)).empty());
    }
}

TEST_CASE("tuple enumeration scopes") {
    auto ai = ex1_ai();
    const auto all = tuples(ai);
    const auto canon = tuples(ai, TupleScope::canonical);
    CHECK(all.size() == 4 * canon.size());
    for (const auto& t : canon) {
        CHECK(t.x < t.y);
        CHECK(t.s < t.t);
    }
}

TEST_CASE("recover_luce_utility") {
    CHECK(recover_luce_utility(ex1_h(), 0) == Qv({1, Q(2, 3), Q(1, 3)}));
    auto menus = all_menus(3);
    auto auton = luce_rule(U3, Qv({1, 2, 3}), menus);
    CHECK(recover_luce_utility(auton, 0) == Qv({1, 2, 3}));
    auto uniform = luce_rule(U3, Qv({1, 1, 1}), menus);
    CHECK(recover_luce_utility(uniform, 0) == Qv({1, 1, 1}));
    CHECK(recover_luce_utility(ex1_h(), 2) == Qv({3, 2, 1}));
    CHECK_THROWS_AS(recover_luce_utility(ex1_ai(), 0), NotALuceRule);

    std::vector<Menu> sparse{XY};
    auto partial = luce_rule(U3, Qv({1, 2, 3}), sparse);
    CHECK_THROWS_AS(recover_luce_utility(partial, 0), InsufficientData);

    std::vector<Menu> chain{Menu{0, 1}, Menu{1, 2}};
    auto chained = luce_rule(U3, Qv({1, 2, 6}), chain);
    CHECK(recover_luce_utility(chained, 0) == Qv({1, 2, 6}));

    // Float mode: geometric mean over menus.
    auto fl = to_float(luce_rule(U4, Qv({1, Q(1, 3), 7, Q(5, 2)}), all_menus(4)));
    auto uf = recover_luce_utility(fl, 0);
    CHECK(uf[1] == doctest::Approx(1.0 / 3).epsilon(1e-13));
    CHECK(uf[2] == doctest::Approx(7.0).epsilon(1e-13));
    CHECK(uf[3] == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("classify_regime examples and precedence") {
    auto r1 = classify_regime(LamParams<Rational>(Qv({1, 2, 3}), Qv({2, 4, 6}), Q(3, 10)), Rational(0));
    CHECK(r1.regime == Regime::aligned);
    auto r2 = classify_regime(LamParams<Rational>(Qv({1, 2, 3}), Qv({1, Q(1, 2), Q(1, 3)}), Q(3, 10)), Rational(0));
    CHECK(r2.regime == Regime::adversarial);
    auto r3 = classify_regime(LamParams<Rational>(Qv({1, Q(2, 3), Q(1, 3)}), Qv({1, 2, 3}), Q(1, 2)), Rational(0));
    CHECK(r3.regime == Regime::misaligned);
    CHECK(r3.ratio == Qv({1, Q(1, 3), Q(1, 9)}));
    auto r4 = classify_regime(LamParams<Rational>(Qv({1, 2, 3}), Qv({1, Q(1, 2), Q(1, 3)}), Q(1)), Rational(0));
    CHECK(r4.regime == Regime::compliant);
    auto r5 = classify_regime(LamParams<Rational>(Qv({1, 2, 3}), Qv({1, 5, 5}), Q(0)), Rational(0));
    CHECK(r5.regime == Regime::autonomous);
    auto r6 = classify_regime(LamParams<Rational>(Qv({1, 2, 3}), Qv({1, 2, 3}), Q(1)), Rational(0));
    CHECK(r6.regime == Regime::aligned);
    auto r7 = classify_regime(LamParams<double>({1, 2, 3}, {1, 2 + 1e-12, 3}, 0.4), 1e-9);
    CHECK(r7.regime == Regime::aligned);
}

TEST_CASE("property: antisymmetry and symmetry of the measures") {
    lamtest::Rng rng(21);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto uni = lamtest::universe_of(n);
        auto menus = all_menus(n);
        LamParams<Rational> p(rng.utilities(n), rng.utilities(n), Rational(rng.integer(0, 20), 20));
        auto ai = lam_rule(uni, p, menus);
        auto h = luce_rule(uni, rng.utilities(n), menus);
        for (const auto& t : tuples(ai, TupleScope::canonical)) {
            InstabilityTuple yx{t.y, t.x, t.s, t.t};
            InstabilityTuple ts{t.x, t.y, t.t, t.s};
            CHECK(delta(ai, t) == -delta(ai, yx));
            CHECK(delta(ai, t) == -delta(ai, ts));
            CHECK(gamma(ai, h, t) == -gamma(ai, h, yx));
            CHECK(phi(ai, h, t) == phi(h, ai, t));
            CHECK(phi(ai, h, t) == -phi(ai, h, yx));
        }
    }
}

TEST_CASE("property: Luce rules have zero own instability") {
    lamtest::Rng rng(31);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto rho = luce_rule(lamtest::universe_of(n), rng.utilities(n), all_menus(n));
        for_each_tuple(rho, TupleScope::all, [&](const InstabilityTuple& t) { CHECK(delta(rho, t) == 0); });
    }
}

TEST_CASE("property: scale invariance, swap symmetry, proportionality law, mixture bounds") {
    lamtest::Rng rng(41);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto uni = lamtest::universe_of(n);
        auto menus = all_menus(n);
        auto u = rng.utilities(n);
        auto v = rng.utilities(n);
        Rational alpha(rng.integer(0, 20), 20);
        LamParams<Rational> p(u, v, alpha);
        const Rational lambda = rng.fraction();
        std::vector<Rational> scaled;
        for (const auto& x : u) scaled.push_back(lambda * x);
        std::vector<double> uf, sf;
        for (std::size_t i = 0; i < n; ++i) {
            uf.push_back(to_double(u[i]));
            sf.push_back(to_double(u[i]) * 3.7);
        }
        for (Menu m : menus) {
            CHECK(luce_choice(scaled, m) == luce_choice(u, m));
            auto a = luce_choice(uf, m);
            auto b = luce_choice(sf, m);
            for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);
            CHECK(lam_forward(p, m) == lam_forward(p.swapped(), m));
            auto f = lam_forward(p, m);
            Rational sum(0);
            for (const auto& x : f) {
                CHECK(x >= 0);
                sum += x;
            }
            CHECK(sum == 1);
        }
        auto ai = lam_rule(uni, p, menus);
        auto h = luce_rule(uni, u, menus);
        for_each_tuple(ai, TupleScope::all,
                       [&](const InstabilityTuple& t) { CHECK(delta(ai, t) == alpha * phi(ai, h, t)); });
    }
}

TEST_CASE("property: float proportionality law within 1e-12") {
    lamtest::Rng rng(51);
    for (int k = 0; k < 40; ++k) {
        const std::size_t n = 3 + static_cast<std::size_t>(k % 3);
        auto uni = lamtest::universe_of(n);
        auto menus = all_menus(n);
        LamParams<double> p(rng.real_utilities(n), rng.real_utilities(n), rng.real(0, 1));
        auto ai = lam_rule(uni, p, menus);
        auto h = luce_rule(uni, p.u(), menus);
        for_each_tuple(ai, TupleScope::all, [&](const InstabilityTuple& t) {
            CHECK(std::abs(delta(ai, t) - p.alpha() * phi(ai, h, t)) <= 1e-12);
        });
    }
}
