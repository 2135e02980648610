#pragma once

// Instability measures between stochastic choice functions.
//
//   own       Delta_xy(S,T | r)      = r(x,S) r(y,T) - r(y,S) r(x,T)
//   cross     Gamma_xy(S,T | r, r')  = r(x,S) r'(y,T) - r(y,S) r'(x,T)
//   composite Phi_xy(S,T | r, r')    = Gamma(r, r') + Gamma(r', r)
//
// Delta vanishes on every tuple exactly when r satisfies IIA.

#include <compare>
#include <type_traits>
#include <vector>

#include "lam/choice.hpp"

namespace lam {

struct InstabilityTuple {
    AltIndex x = 0;
    AltIndex y = 0;
    Menu s;
    Menu t;

    bool valid() const {
        Menu both = s.intersect(t);
        return x != y && both.contains(x) && both.contains(y);
    }

    friend bool operator==(const InstabilityTuple&, const InstabilityTuple&) = default;
    friend auto operator<=>(const InstabilityTuple&, const InstabilityTuple&) = default;
};

inline void require_valid(const InstabilityTuple& t) {
    if (!t.valid()) {
        throw InvalidParameter("instability tuple needs x != y with {x,y} inside both menus");
    }
}

template <Scalar T>
T delta(const StochasticChoice<T>& rho, const InstabilityTuple& t) {
    require_valid(t);
    const auto& rs = rho.row(t.s);
    const auto& rt = rho.row(t.t);
    return rs[t.x] * rt[t.y] - rs[t.y] * rt[t.x];
}

template <Scalar T>
T gamma(const StochasticChoice<T>& rho, const StochasticChoice<T>& other, const InstabilityTuple& t) {
    require_valid(t);
    const auto& rs = rho.row(t.s);
    const auto& ot = other.row(t.t);
    return rs[t.x] * ot[t.y] - rs[t.y] * ot[t.x];
}

template <Scalar T>
T phi(const StochasticChoice<T>& rho, const StochasticChoice<T>& other, const InstabilityTuple& t) {
    return gamma(rho, other, t) + gamma(other, rho, t);
}

// all:       every (x, y, S, T) with x != y, S != T, {x,y} inside S and T.
// canonical: the subset with x < y and S < T. Every other tuple is a sign
//            flip of a canonical one, so scans of |Delta|, Delta*Phi or
//            Phi^2 lose nothing by restricting to it.
enum class TupleScope { all, canonical };

// Calls fn(tuple) over the domain of rho in lexicographic (x, y, S, T)
// order. fn may return bool; returning false stops the scan.
template <Scalar T, class Fn>
void for_each_tuple(const StochasticChoice<T>& rho, TupleScope scope, Fn&& fn) {
    const std::vector<Menu> menus = rho.domain();
    const std::size_t n = rho.size();
    for (AltIndex x = 0; x < n; ++x) {
        for (AltIndex y = (scope == TupleScope::canonical ? x + 1 : 0); y < n; ++y) {
            if (x == y) continue;
            std::vector<Menu> with_pair;
            for (Menu m : menus) {
                if (m.contains(x) && m.contains(y)) with_pair.push_back(m);
            }
            for (std::size_t i = 0; i < with_pair.size(); ++i) {
                for (std::size_t j = (scope == TupleScope::canonical ? i + 1 : 0); j < with_pair.size();
                     ++j) {
                    if (i == j) continue;
                    InstabilityTuple t{x, y, with_pair[i], with_pair[j]};
                    if constexpr (std::is_same_v<decltype(fn(t)), bool>) {
                        if (!fn(t)) return;
                    } else {
                        fn(t);
                    }
                }
            }
        }
    }
}

template <Scalar T>
std::vector<InstabilityTuple> tuples(const StochasticChoice<T>& rho, TupleScope scope = TupleScope::all) {
    std::vector<InstabilityTuple> out;
    for_each_tuple(rho, scope, [&](const InstabilityTuple& t) { out.push_back(t); });
    return out;
}

// Every tuple with |Delta| > tol, in lexicographic order.
template <Scalar T>
std::vector<InstabilityTuple> iia_violations(const StochasticChoice<T>& rho, const T& tol,
                                             TupleScope scope = TupleScope::all) {
    std::vector<InstabilityTuple> out;
    for_each_tuple(rho, scope, [&](const InstabilityTuple& t) {
        if (!near_zero(delta(rho, t), tol)) out.push_back(t);
    });
    return out;
}

template <Scalar T>
std::vector<InstabilityTuple> iia_violations(const StochasticChoice<T>& rho) {
    return iia_violations(rho, default_tol<T>());
}

// Stops at the first violation.
template <Scalar T>
bool satisfies_iia(const StochasticChoice<T>& rho, const T& tol) {
    bool ok = true;
    for_each_tuple(rho, TupleScope::canonical, [&](const InstabilityTuple& t) {
        if (!near_zero(delta(rho, t), tol)) ok = false;
        return ok;
    });
    return ok;
}

}  // namespace lam
