#pragma once

// Stochastic choice functions, LAM parameters and the two forward models:
//
//   luce(u)(x, S) = u(x) / sum_{y in S} u(y)
//   lam(u, v, alpha)(x, S) = alpha * luce(u)(x, S) + (1 - alpha) * luce(v)(x, S)

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lam/errors.hpp"
#include "lam/menu.hpp"
#include "lam/scalar.hpp"

namespace lam {

// Choice probabilities over one menu, indexed by alternative. Entries for
// alternatives outside the menu are zero.
template <Scalar T>
using ChoiceRow = std::vector<T>;

// rho: (menu, alternative) -> probability, recorded on a finite domain of
// menus. Immutable once constructed.
template <Scalar T>
class StochasticChoice {
public:
    using Row = ChoiceRow<T>;
    using Table = std::map<Menu, Row>;

    StochasticChoice() = default;

    // Validates every row: correct length, zero off-menu, non-negative and
    // summing to one within sum_tol (exactly in rational mode).
    StochasticChoice(Universe universe, Table table, T sum_tol = default_sum_tol())
        : universe_(std::move(universe)), table_(std::move(table)) {
        const std::size_t n = universe_.size();
        const Menu full = Menu::full(n);
        if constexpr (is_exact_v<T>) sum_tol = T(0);
        positive_ = true;
        for (const auto& [menu, row] : table_) {
            const std::string name = format_menu_safe(menu);
            if (menu.empty() || !full.contains(menu)) {
                throw InvalidParameter("menu outside the universe: " + name);
            }
            if (row.size() != n) {
                throw InvalidParameter("row for menu {" + name + "} has wrong length");
            }
            T sum(0);
            for (AltIndex i = 0; i < n; ++i) {
                if (!menu.contains(i)) {
                    if (row[i] != 0) {
                        throw InvalidParameter("positive probability for " + universe_.id(i) +
                                               " outside menu {" + name + "}");
                    }
                    continue;
                }
                if (row[i] < 0 && T(-row[i]) > sum_tol) {
                    throw InvalidParameter("negative probability for " + universe_.id(i) +
                                           " in menu {" + name + "}");
                }
                if (!(row[i] > 0)) positive_ = false;
                sum += row[i];
            }
            if (!near_equal(sum, T(1), sum_tol)) {
                throw InvalidParameter("probabilities in menu {" + name + "} sum to " +
                                       to_string(sum) + ", expected 1");
            }
        }
    }

    static T default_sum_tol() {
        if constexpr (is_exact_v<T>) {
            return T(0);
        } else {
            return 1e-9;
        }
    }

    const Universe& universe() const { return universe_; }
    std::size_t size() const { return universe_.size(); }
    const Table& table() const { return table_; }
    bool has_menu(Menu s) const { return table_.find(s) != table_.end(); }
    bool positive() const { return positive_; }

    const Row& row(Menu s) const {
        auto it = table_.find(s);
        if (it == table_.end()) {
            throw MissingData("menu {" + format_menu_safe(s) + "} is not in the domain");
        }
        return it->second;
    }

    // rho(x, S); zero when x is not a member of S.
    const T& prob(AltIndex x, Menu s) const { return row(s).at(x); }

    std::vector<Menu> domain() const {
        std::vector<Menu> out;
        out.reserve(table_.size());
        for (const auto& entry : table_) out.push_back(entry.first);
        return out;
    }

    friend bool operator==(const StochasticChoice& a, const StochasticChoice& b) {
        return a.universe_ == b.universe_ && a.table_ == b.table_;
    }

private:
    std::string format_menu_safe(Menu s) const {
        if (!Menu::full(universe_.size()).contains(s)) return "<bits " + std::to_string(s.bits()) + ">";
        return format_menu(universe_, s);
    }

    Universe universe_;
    Table table_;
    bool positive_ = false;
};

// A LAM representation (u, v, alpha) normalised so that
// u(anchor) = v(anchor) = 1.
template <Scalar T>
class LamParams {
public:
    LamParams() = default;

    LamParams(std::vector<T> u, std::vector<T> v, T alpha, AltIndex anchor = 0)
        : u_(std::move(u)), v_(std::move(v)), alpha_(std::move(alpha)), anchor_(anchor) {
        if (u_.size() != v_.size()) throw InvalidParameter("u and v have different lengths");
        if (anchor_ >= u_.size()) throw InvalidParameter("anchor index out of range");
        for (std::size_t i = 0; i < u_.size(); ++i) {
            if (!(u_[i] > 0) || !(v_[i] > 0)) {
                throw InvalidParameter("utilities must be strictly positive");
            }
        }
        if (alpha_ < 0 || alpha_ > 1) {
            throw InvalidParameter("compliance alpha must lie in [0,1], got " + to_string(alpha_));
        }
        const T su = u_[anchor_];
        const T sv = v_[anchor_];
        for (std::size_t i = 0; i < u_.size(); ++i) {
            u_[i] /= su;
            v_[i] /= sv;
        }
        u_[anchor_] = T(1);
        v_[anchor_] = T(1);
    }

    const std::vector<T>& u() const { return u_; }
    const std::vector<T>& v() const { return v_; }
    const T& alpha() const { return alpha_; }
    AltIndex anchor() const { return anchor_; }
    std::size_t size() const { return u_.size(); }

    // (v, u, 1 - alpha): generates the same rho_AI.
    LamParams swapped() const { return LamParams(v_, u_, T(1 - alpha_), anchor_); }

    LamParams with_anchor(AltIndex anchor) const { return LamParams(u_, v_, alpha_, anchor); }

    friend bool operator==(const LamParams& a, const LamParams& b) {
        return a.anchor_ == b.anchor_ && a.alpha_ == b.alpha_ && a.u_ == b.u_ && a.v_ == b.v_;
    }

private:
    std::vector<T> u_;
    std::vector<T> v_;
    T alpha_{};
    AltIndex anchor_ = 0;
};

template <Scalar T>
ChoiceRow<T> luce_choice(std::span<const T> u, Menu s) {
    if (s.empty()) throw InvalidParameter("empty menu");
    ChoiceRow<T> row(u.size(), T(0));
    T total(0);
    for (AltIndex i : s.members()) {
        if (i >= u.size()) throw InvalidParameter("menu member outside the utility vector");
        if (!(u[i] > 0)) throw InvalidParameter("utilities must be strictly positive");
        total += u[i];
    }
    for (AltIndex i : s.members()) row[i] = u[i] / total;
    return row;
}

template <Scalar T>
ChoiceRow<T> luce_choice(const std::vector<T>& u, Menu s) {
    return luce_choice(std::span<const T>(u), s);
}

template <Scalar T>
ChoiceRow<T> lam_forward(const LamParams<T>& params, Menu s) {
    ChoiceRow<T> h = luce_choice(params.u(), s);
    if (params.alpha() == 1) return h;
    ChoiceRow<T> a = luce_choice(params.v(), s);
    if (params.alpha() == 0) return a;
    const T beta = T(1) - params.alpha();
    for (AltIndex i : s.members()) h[i] = params.alpha() * h[i] + beta * a[i];
    return h;
}

// Builds a StochasticChoice by evaluating row_fn(menu) on each menu.
template <Scalar T, class RowFn>
StochasticChoice<T> tabulate(const Universe& universe, std::span<const Menu> menus, RowFn&& row_fn,
                             T sum_tol = StochasticChoice<T>::default_sum_tol()) {
    typename StochasticChoice<T>::Table table;
    for (Menu m : menus) table.emplace(m, row_fn(m));
    return StochasticChoice<T>(universe, std::move(table), sum_tol);
}

template <Scalar T>
StochasticChoice<T> luce_rule(const Universe& universe, const std::vector<T>& u,
                              std::span<const Menu> menus) {
    return tabulate<T>(universe, menus, [&](Menu m) { return luce_choice(u, m); });
}

template <Scalar T>
StochasticChoice<T> lam_rule(const Universe& universe, const LamParams<T>& params,
                             std::span<const Menu> menus) {
    return tabulate<T>(universe, menus, [&](Menu m) { return lam_forward(params, m); });
}

// sup over the common domain of |a(x,S) - b(x,S)|. Menus present in only
// one of the two functions raise MissingData.
template <Scalar T>
T sup_distance(const StochasticChoice<T>& a, const StochasticChoice<T>& b) {
    T best(0);
    for (const auto& [menu, row] : a.table()) {
        const auto& other = b.row(menu);
        for (AltIndex i : menu.members()) best = max_value(best, abs_value(T(row[i] - other[i])));
    }
    return best;
}

// Converts an exact choice function to floating point.
inline StochasticChoice<double> to_float(const StochasticChoice<Rational>& rho) {
    StochasticChoice<double>::Table table;
    for (const auto& [menu, row] : rho.table()) {
        ChoiceRow<double> r(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) r[i] = to_double(row[i]);
        table.emplace(menu, std::move(r));
    }
    return StochasticChoice<double>(rho.universe(), std::move(table), 1e-12);
}

inline LamParams<double> to_float(const LamParams<Rational>& p) {
    std::vector<double> u, v;
    for (const auto& x : p.u()) u.push_back(to_double(x));
    for (const auto& x : p.v()) v.push_back(to_double(x));
    return LamParams<double>(u, v, to_double(p.alpha()), p.anchor());
}

}  // namespace lam
