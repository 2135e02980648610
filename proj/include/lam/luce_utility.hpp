#pragma once

#include <vector>

#include "lam/choice.hpp"
#include "lam/instability.hpp"

namespace lam {

// Recovers the Luce utility behind rho with u(anchor) = 1.
//
// Alternatives are resolved breadth-first from the anchor: an alternative b
// first reached from the resolved set R gets
//
//   u(b) = geomean over (S, a), a in R, {a,b} in S, of u(a) * rho(b,S) / rho(a,S)
//
// where only the previous BFS layer enters R, so every estimate uses the
// shortest available chain. Under exact IIA every term is identical.
//
// Throws NotALuceRule when rho violates IIA beyond tol or is not positive,
// InsufficientData when some alternative shares no menu chain with the anchor.
template <Scalar T>
std::vector<T> recover_luce_utility(const StochasticChoice<T>& rho, AltIndex anchor, const T& tol) {
    const std::size_t n = rho.size();
    if (anchor >= n) throw InvalidParameter("anchor index out of range");
    for (const auto& [menu, row] : rho.table()) {
        for (AltIndex i : menu.members()) {
            if (!(row[i] > 0)) {
                throw NotALuceRule("positivity fails: rho(" + rho.universe().id(i) + ", {" +
                                   format_menu(rho.universe(), menu) + "}) = " + to_string(row[i]));
            }
        }
    }
    if (!satisfies_iia(rho, tol)) {
        auto bad = iia_violations(rho, tol, TupleScope::canonical).front();
        throw NotALuceRule("IIA violated at (" + rho.universe().id(bad.x) + ", " +
                           rho.universe().id(bad.y) + ", {" + format_menu(rho.universe(), bad.s) +
                           "}, {" + format_menu(rho.universe(), bad.t) + "})");
    }

    std::vector<T> u(n, T(0));
    std::vector<bool> resolved(n, false);
    u[anchor] = T(1);
    resolved[anchor] = true;
    std::vector<AltIndex> frontier{anchor};
    std::size_t count = 1;
    while (!frontier.empty() && count < n) {
        std::vector<AltIndex> next;
        for (AltIndex b = 0; b < n; ++b) {
            if (resolved[b]) continue;
            std::vector<T> estimates;
            for (AltIndex a : frontier) {
                for (const auto& [menu, row] : rho.table()) {
                    if (menu.contains(a) && menu.contains(b)) {
                        estimates.push_back(T(u[a] * row[b] / row[a]));
                    }
                }
            }
            if (!estimates.empty()) {
                u[b] = geometric_mean<T>(estimates);
                next.push_back(b);
            }
        }
        for (AltIndex b : next) resolved[b] = true;
        count += next.size();
        frontier = std::move(next);
    }
    if (count < n) {
        for (AltIndex b = 0; b < n; ++b) {
            if (!resolved[b]) {
                throw InsufficientData("alternative " + rho.universe().id(b) +
                                       " is not linked to the anchor by any chain of menus");
            }
        }
    }
    return u;
}

template <Scalar T>
std::vector<T> recover_luce_utility(const StochasticChoice<T>& rho, AltIndex anchor) {
    return recover_luce_utility(rho, anchor, default_tol<T>());
}

}  // namespace lam
