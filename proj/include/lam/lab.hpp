#pragma once

// Laboratory setting: both rho_AI and rho_H are observed.
//
// Under LAM the own instability of rho_AI is proportional to the composite
// instability of (rho_AI, rho_H) on every tuple, with slope alpha:
//
//   Delta_xy(S,T | AI) = alpha * Phi_xy(S,T | AI, H)
//
// Identification recovers u from rho_H, alpha from that slope, the
// autonomous rule rho_A = (rho_AI - alpha rho_H) / (1 - alpha), and v from
// rho_A. check_axioms() decides LAM-consistency of the pair directly.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lam/choice.hpp"
#include "lam/instability.hpp"
#include "lam/luce_utility.hpp"

namespace lam {

enum class AlphaStrategy { single_tuple, least_squares };

inline const char* strategy_name(AlphaStrategy s) {
    return s == AlphaStrategy::single_tuple ? "single-tuple" : "least-squares";
}

template <Scalar T>
struct TupleAlpha {
    InstabilityTuple tuple;
    T delta;
    T phi;
    T alpha;  // delta / phi
};

template <Scalar T>
struct AlphaEstimate {
    T alpha;      // reported value (clamped to [0,1] in float mode)
    T raw;        // unclamped estimate
    bool clamped = false;
    AlphaStrategy strategy = AlphaStrategy::least_squares;
    InstabilityTuple pivot;  // tuple with the largest |Phi|
    std::vector<TupleAlpha<T>> per_tuple;
    // Uncentred R^2 of the through-origin fit Delta ~ alpha * Phi.
    double r_squared = 1.0;
};

// Throws PartiallyIdentified when rho_AI = rho_H within tol, NotIdentified
// when rho_AI has no IIA violation.
template <Scalar T>
AlphaEstimate<T> estimate_alpha(const StochasticChoice<T>& ai, const StochasticChoice<T>& h,
                                AlphaStrategy strategy, const T& tol) {
    if (sup_distance(ai, h) <= tol) {
        throw PartiallyIdentified("rho_AI equals rho_H: alpha and v are not separately identified");
    }
    if (satisfies_iia(ai, tol)) {
        throw NotIdentified("rho_AI satisfies IIA and differs from rho_H; alpha is not an instability ratio");
    }
    AlphaEstimate<T> est;
    est.strategy = strategy;
    T sum_dp(0), sum_pp(0), sum_dd(0), best_phi(-1);
    for_each_tuple(ai, TupleScope::canonical, [&](const InstabilityTuple& t) {
        T d = delta(ai, t);
        T p = phi(ai, h, t);
        sum_dd += d * d;
        if (near_zero(p, tol)) return;
        sum_dp += d * p;
        sum_pp += p * p;
        T ap = abs_value(p);
        if (ap > best_phi) {
            best_phi = ap;
            est.pivot = t;
        }
        est.per_tuple.push_back({t, d, p, T(d / p)});
    });
    if (est.per_tuple.empty()) {
        throw InconsistentInputs("rho_AI violates IIA but the composite instability vanishes everywhere");
    }
    if (strategy == AlphaStrategy::single_tuple) {
        est.raw = delta(ai, est.pivot) / phi(ai, h, est.pivot);
    } else {
        est.raw = sum_dp / sum_pp;
    }
    // Residual of the proportionality fit over every tuple, Phi=0 ones included.
    T ss_res = sum_dd - T(2) * est.raw * sum_dp + est.raw * est.raw * sum_pp;
    est.r_squared = sum_dd == 0 ? 1.0 : 1.0 - to_double(ss_res) / to_double(sum_dd);
    est.alpha = est.raw;
    if constexpr (!is_exact_v<T>) {
        if (est.alpha < 0) est.alpha = 0;
        if (est.alpha > 1) est.alpha = 1;
        est.clamped = est.alpha != est.raw;
    }
    return est;
}

template <Scalar T>
AlphaEstimate<T> estimate_alpha(const StochasticChoice<T>& ai, const StochasticChoice<T>& h,
                                AlphaStrategy strategy = AlphaStrategy::least_squares) {
    return estimate_alpha(ai, h, strategy, default_tol<T>());
}

// rho_A(x,S) = (rho_AI(x,S) - alpha rho_H(x,S)) / (1 - alpha) on rho_AI's domain.
template <Scalar T>
StochasticChoice<T> recover_autonomous(const StochasticChoice<T>& ai, const StochasticChoice<T>& h,
                                       const T& alpha, const T& tol) {
    if (alpha == 1) throw DegenerateDivision("alpha = 1 leaves the autonomous rule undefined");
    if (alpha < 0 || alpha > 1) throw InvalidParameter("alpha must lie in [0,1)");
    const T scale = T(1) - alpha;
    typename StochasticChoice<T>::Table table;
    for (const auto& [menu, row] : ai.table()) {
        const auto& hr = h.row(menu);
        ChoiceRow<T> out(row.size(), T(0));
        for (AltIndex i : menu.members()) {
            out[i] = (row[i] - alpha * hr[i]) / scale;
            if (out[i] < 0 && T(-out[i]) > tol) {
                throw InconsistentInputs("recovered autonomous probability is negative for " +
                                         ai.universe().id(i) + " in {" +
                                         format_menu(ai.universe(), menu) + "}");
            }
        }
        table.emplace(menu, std::move(out));
    }
    T sum_tol = StochasticChoice<T>::default_sum_tol();
    if constexpr (!is_exact_v<T>) sum_tol = max_value(sum_tol, tol) * (1.0 + 1.0 / scale);
    return StochasticChoice<T>(ai.universe(), std::move(table), sum_tol);
}

template <Scalar T>
StochasticChoice<T> recover_autonomous(const StochasticChoice<T>& ai, const StochasticChoice<T>& h,
                                       const T& alpha) {
    return recover_autonomous(ai, h, alpha, default_tol<T>());
}

enum class LabStatus { point_identified, partially_identified, inconsistent };

inline const char* lab_status_name(LabStatus s) {
    switch (s) {
        case LabStatus::point_identified: return "point-identified";
        case LabStatus::partially_identified: return "partially-identified";
        case LabStatus::inconsistent: return "inconsistent";
    }
    return "?";
}

template <Scalar T>
struct LabOptions {
    AlphaStrategy strategy = AlphaStrategy::least_squares;
    T tol = default_tol<T>();
};

template <Scalar T>
struct LabResult {
    LabStatus status = LabStatus::inconsistent;
    std::optional<LamParams<T>> params;
    std::optional<std::vector<T>> human_utility;  // u, whenever rho_H is a Luce rule
    std::optional<AlphaEstimate<T>> alpha_diagnostics;
    std::optional<StochasticChoice<T>> recovered_autonomous;
    std::string reason;
    T tol{};
};

template <Scalar T>
LabResult<T> identify_lab(const StochasticChoice<T>& ai, const StochasticChoice<T>& h, AltIndex anchor,
                          const LabOptions<T>& options = {}) {
    LabResult<T> result;
    const T& tol = options.tol;
    result.tol = tol;
    auto inconsistent = [&](std::string why) {
        result.status = LabStatus::inconsistent;
        result.params.reset();
        result.reason = std::move(why);
        return result;
    };

    if (!(ai.universe() == h.universe())) throw InvalidParameter("rho_AI and rho_H use different universes");
    for (Menu m : ai.domain()) {
        if (!h.has_menu(m)) throw MissingData("menu {" + format_menu(ai.universe(), m) + "} missing from rho_H");
    }

    std::vector<T> u;
    try {
        u = recover_luce_utility(h, anchor, tol);
    } catch (const NotALuceRule& e) {
        return inconsistent(std::string("rho_H is not a Luce rule: ") + e.what());
    }
    result.human_utility = u;

    if (sup_distance(ai, h) <= tol) {
        result.status = LabStatus::partially_identified;
        result.reason = "rho_AI equals rho_H: compliance and AI utility are not separately identified";
        return result;
    }

    std::vector<T> v;
    T alpha(0);
    if (satisfies_iia(ai, tol)) {
        try {
            v = recover_luce_utility(ai, anchor, tol);
        } catch (const NotALuceRule& e) {
            return inconsistent(std::string("rho_AI is not a Luce rule: ") + e.what());
        }
    } else {
        AlphaEstimate<T> est;
        try {
            est = estimate_alpha(ai, h, options.strategy, tol);
        } catch (const InconsistentInputs& e) {
            return inconsistent(e.what());
        }
        result.alpha_diagnostics = est;
        if (!less_tol(T(0), est.raw, T(0)) || !(est.raw < T(1) - tol)) {
            return inconsistent("estimated compliance " + to_string(est.raw) + " lies outside (0,1)");
        }
        alpha = est.alpha;
        try {
            result.recovered_autonomous = recover_autonomous(ai, h, alpha, tol);
            v = recover_luce_utility(*result.recovered_autonomous, anchor, tol);
        } catch (const InconsistentInputs& e) {
            return inconsistent(e.what());
        } catch (const NotALuceRule& e) {
            return inconsistent(std::string("recovered autonomous rule is not a Luce rule: ") + e.what());
        } catch (const InvalidParameter& e) {
            return inconsistent(std::string("recovered autonomous rule is invalid: ") + e.what());
        }
    }

    LamParams<T> params(u, v, alpha, anchor);
    for (const auto& [menu, row] : ai.table()) {
        auto fwd = lam_forward(params, menu);
        auto hum = luce_choice(params.u(), menu);
        const auto& hr = h.row(menu);
        for (AltIndex i : menu.members()) {
            if (!near_equal(fwd[i], row[i], tol) || !near_equal(hum[i], hr[i], tol)) {
                return inconsistent("recovered parameters do not reproduce the data on {" +
                                    format_menu(ai.universe(), menu) + "}");
            }
        }
    }
    result.params = params;
    result.status = LabStatus::point_identified;
    return result;
}

// ---------------------------------------------------------------------------
// Axioms 1-5 (Positivity, H-IIA, Proportionality, Bounded Instability,
// Bounded Divergence). The pair is LAM-consistent iff all five hold.

struct AxiomWitness {
    std::string function;  // "rho_AI" or "rho_H" where relevant
    std::optional<InstabilityTuple> tuple;
    std::optional<InstabilityTuple> other_tuple;
    std::optional<Menu> menu;
    std::optional<AltIndex> alternative;
    std::string detail;
};

struct AxiomVerdict {
    const char* name = "";
    bool pass = true;
    std::optional<AxiomWitness> witness;
};

struct AxiomReport {
    std::array<AxiomVerdict, 5> axioms{};
    bool consistent = false;
};

// slope:  Proportionality via a reference tuple (max |Phi|), equivalent to
//         the pairwise statement. strict: every unordered tuple pair.
enum class AxiomScan { slope, strict };

template <Scalar T>
AxiomReport check_axioms(const StochasticChoice<T>& ai, const StochasticChoice<T>& h, const T& tol,
                         AxiomScan scan = AxiomScan::slope) {
    AxiomReport report;
    auto& [pos, hiia, prop, bounded, divergence] = report.axioms;
    pos.name = "positivity";
    hiia.name = "h-iia";
    prop.name = "proportionality";
    bounded.name = "bounded-instability";
    divergence.name = "bounded-divergence";
    const Universe& uni = ai.universe();

    // Axiom 1
    for (const auto* rho : {&ai, &h}) {
        if (!pos.pass) break;
        for (const auto& [menu, row] : rho->table()) {
            for (AltIndex i : menu.members()) {
                if (!(row[i] > tol)) {
                    pos.pass = false;
                    pos.witness = AxiomWitness{rho == &ai ? "rho_AI" : "rho_H", {}, {}, menu, i,
                                               "probability " + to_string(row[i]) + " is not positive"};
                    break;
                }
            }
            if (!pos.pass) break;
        }
    }
    for (Menu m : ai.domain()) {
        if (!h.has_menu(m)) throw MissingData("menu {" + format_menu(uni, m) + "} missing from rho_H");
    }

    // Axiom 2
    if (!satisfies_iia(h, tol)) {
        hiia.pass = false;
        auto t = iia_violations(h, tol, TupleScope::canonical).front();
        hiia.witness = AxiomWitness{"rho_H", t, {}, {}, {}, "Delta = " + to_string(delta(h, t))};
    }

    struct Record {
        InstabilityTuple t;
        T d;
        T p;
    };
    std::vector<Record> recs;
    for_each_tuple(ai, TupleScope::canonical,
                   [&](const InstabilityTuple& t) { recs.push_back({t, delta(ai, t), phi(ai, h, t)}); });

    // Axiom 3
    auto cross_mismatch = [&](const Record& a, const Record& b) {
        return !near_zero(T(a.d * b.p - b.d * a.p), tol);
    };
    if (scan == AxiomScan::strict) {
        for (std::size_t i = 0; i < recs.size() && prop.pass; ++i) {
            for (std::size_t j = i + 1; j < recs.size(); ++j) {
                if (cross_mismatch(recs[i], recs[j])) {
                    prop.pass = false;
                    prop.witness = AxiomWitness{"rho_AI", recs[i].t, recs[j].t, {}, {},
                                                "Delta*Phi' != Delta'*Phi"};
                    break;
                }
            }
        }
    } else if (!recs.empty()) {
        const Record* ref = &recs.front();
        for (const auto& r : recs) {
            if (abs_value(r.p) > abs_value(ref->p)) ref = &r;
        }
        if (!near_zero(ref->p, tol)) {
            for (const auto& r : recs) {
                if (cross_mismatch(*ref, r)) {
                    prop.pass = false;
                    prop.witness = AxiomWitness{"rho_AI", ref->t, r.t, {}, {}, "Delta*Phi' != Delta'*Phi"};
                    break;
                }
            }
        }
    }

    // Axiom 4
    for (const auto& r : recs) {
        if (near_zero(r.d, tol)) continue;
        T ad = abs_value(r.d);
        T ap = abs_value(r.p);
        if (!(r.d * r.p > 0) || !less_tol(ad, ap, tol)) {
            bounded.pass = false;
            bounded.witness = AxiomWitness{"rho_AI", r.t, {}, {}, {},
                                           "Delta = " + to_string(r.d) + ", Phi = " + to_string(r.p)};
            break;
        }
    }

    // Axiom 5: only tuples with Delta != 0 constrain; the binding one
    // maximises |Delta| / |Phi|, compared by cross-multiplication.
    const Record* binding = nullptr;
    for (const auto& r : recs) {
        if (near_zero(r.d, tol)) continue;
        if (binding == nullptr ||
            abs_value(r.d) * abs_value(binding->p) > abs_value(binding->d) * abs_value(r.p)) {
            binding = &r;
        }
    }
    if (binding != nullptr) {
        const T ad = abs_value(binding->d);
        const T ap = abs_value(binding->p);
        for (const auto& [menu, row] : ai.table()) {
            const auto& hr = h.row(menu);
            for (AltIndex z : menu.members()) {
                if (!less_tol(T(hr[z] * ad), T(row[z] * ap), tol)) {
                    divergence.pass = false;
                    divergence.witness = AxiomWitness{"rho_AI", binding->t, {}, menu, z,
                                                      "rho_AI(z,U)*|Phi| <= rho_H(z,U)*|Delta|"};
                    break;
                }
            }
            if (!divergence.pass) break;
        }
    }

    report.consistent = pos.pass && hiia.pass && prop.pass && bounded.pass && divergence.pass;
    return report;
}

template <Scalar T>
AxiomReport check_axioms(const StochasticChoice<T>& ai, const StochasticChoice<T>& h) {
    return check_axioms(ai, h, default_tol<T>());
}

}  // namespace lam
