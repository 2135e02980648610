#pragma once

// Field setting: only rho_AI is observed.
//
// With u(x) = v(x) = 1 at the anchor x, both u(y) and v(y) solve
//
//   1/L_S(k) + 1/L_T(k) = 1/L_{S\t}(k) + 1/L_{S\z}(k),   L_M(k) = rho(x,M) k - rho(y,M)
//
// for S = {x,y,z,t}, T = {x,y}. Cross-multiplying gives a cubic whose third
// root is spurious. Spurious roots are removed by intersecting candidates
// across reference pairs (z,t), then by requiring the compliance implied by
// each candidate pair to agree across alternatives. The result is the
// parameter class {(u,v,alpha), (v,u,1-alpha)}.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lam/choice.hpp"
#include "lam/instability.hpp"
#include "lam/polynomial.hpp"

namespace lam {

template <Scalar T>
struct CubicPoly {
    std::array<T, 4> coeffs{};  // c0, c1, c2, c3
    AltIndex x = 0, y = 0, z = 0, t = 0;
    std::array<Menu, 4> menus{};  // S, T, S\t, S\z
    std::array<T, 4> slope{};     // rho(x, M)
    std::array<T, 4> intercept{}; // rho(y, M)
    T scale{};                    // largest |product of three input probabilities|

    T evaluate(const T& k) const { return evaluate_polynomial<T>(coeffs, k); }

    bool identically_zero(const T& tol) const {
        for (const auto& c : coeffs) {
            if (abs_value(c) > tol * scale) return false;
        }
        return true;
    }

    T denominator(std::size_t m, const T& k) const { return slope[m] * k - intercept[m]; }

    // 1/L_S + 1/L_T - 1/L_{S\t} - 1/L_{S\z}; requires no vanishing denominator.
    T residual(const T& k) const {
        return T(1) / denominator(0, k) + T(1) / denominator(1, k) - T(1) / denominator(2, k) -
               T(1) / denominator(3, k);
    }
};

// Throws InsufficientData when one of the four menus is not observed.
template <Scalar T>
CubicPoly<T> identification_polynomial(const StochasticChoice<T>& rho, AltIndex x, AltIndex y, AltIndex z,
                                       AltIndex t) {
    if (x == y || x == z || x == t || y == z || y == t || z == t) {
        throw InvalidParameter("identification polynomial needs four distinct alternatives");
    }
    const std::size_t n = rho.size();
    if (x >= n || y >= n || z >= n || t >= n) throw InvalidParameter("alternative index out of range");
    CubicPoly<T> poly;
    poly.x = x;
    poly.y = y;
    poly.z = z;
    poly.t = t;
    const Menu s{x, y, z, t};
    poly.menus = {s, Menu{x, y}, s.without(t), s.without(z)};
    T largest(0);
    for (std::size_t m = 0; m < 4; ++m) {
        if (!rho.has_menu(poly.menus[m])) {
            throw InsufficientData("menu {" + format_menu(rho.universe(), poly.menus[m]) +
                                   "} is required for the identification polynomial of " +
                                   rho.universe().id(y));
        }
        poly.slope[m] = rho.prob(x, poly.menus[m]);
        poly.intercept[m] = rho.prob(y, poly.menus[m]);
        largest = max_value(largest, max_value(poly.slope[m], poly.intercept[m]));
    }
    poly.scale = largest * largest * largest;

    // L_M(k) = a k - b as ascending coefficients {-b, a}.
    using Lin = std::array<T, 2>;
    using Quad = std::array<T, 3>;
    auto lin = [&](std::size_t m) { return Lin{T(-poly.intercept[m]), poly.slope[m]}; };
    auto add = [](const Lin& p, const Lin& q) { return Lin{p[0] + q[0], p[1] + q[1]}; };
    auto mul = [](const Lin& p, const Lin& q) {
        return Quad{p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[1] * q[1]};
    };
    auto mul3 = [](const Lin& p, const Quad& q) {
        return std::array<T, 4>{p[0] * q[0], p[0] * q[1] + p[1] * q[0], p[0] * q[2] + p[1] * q[1],
                                p[1] * q[2]};
    };
    const auto lhs = mul3(add(lin(0), lin(1)), mul(lin(2), lin(3)));
    const auto rhs = mul3(add(lin(2), lin(3)), mul(lin(0), lin(1)));
    for (std::size_t i = 0; i < 4; ++i) poly.coeffs[i] = lhs[i] - rhs[i];
    return poly;
}

enum class RootRejection { complex_value, irrational, non_positive, denominator_vanishes, fails_equation };

inline const char* rejection_name(RootRejection r) {
    switch (r) {
        case RootRejection::complex_value: return "complex";
        case RootRejection::irrational: return "irrational";
        case RootRejection::non_positive: return "non-positive";
        case RootRejection::denominator_vanishes: return "denominator-vanishes";
        case RootRejection::fails_equation: return "fails-original-equation";
    }
    return "?";
}

template <Scalar T>
struct RejectedRoot {
    double real = 0.0;
    double imag = 0.0;
    std::optional<T> value;  // present when the root is exactly representable
    RootRejection reason = RootRejection::fails_equation;
};

template <Scalar T>
struct CandidateSet {
    AltIndex alternative = 0;
    AltIndex ref_z = 0, ref_t = 0;
    std::vector<T> admissible;  // ascending
    std::vector<RejectedRoot<T>> rejected;
    // Odds of y against the anchor are menu-independent: u(y) = v(y) and the
    // single candidate is rho(y,{x,y}) / rho(x,{x,y}).
    bool aligned_coordinate = false;
};

namespace detail {

template <Scalar T>
bool same_root(const T& a, const T& b, double rel_tol) {
    if constexpr (is_exact_v<T>) {
        (void)rel_tol;
        return a == b;
    } else {
        return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
    }
}

// Damped Newton on the rational equation; keeps the start point when no
// step improves the residual.
inline double polish_root(const CubicPoly<double>& poly, double k) {
    for (int it = 0; it < 8; ++it) {
        double f = 0, df = 0;
        const double sign[4] = {1, 1, -1, -1};
        for (std::size_t m = 0; m < 4; ++m) {
            double l = poly.denominator(m, k);
            if (l == 0) return k;
            f += sign[m] / l;
            df -= sign[m] * poly.slope[m] / (l * l);
        }
        if (f == 0 || df == 0 || !std::isfinite(df)) break;
        double step = f / df;
        bool improved = false;
        for (int half = 0; half < 6; ++half, step *= 0.5) {
            double cand = k - step;
            double fc = 0;
            bool ok = true;
            for (std::size_t m = 0; m < 4; ++m) {
                double l = poly.denominator(m, cand);
                if (l == 0) ok = false;
                fc += (m < 2 ? 1.0 : -1.0) / l;
            }
            if (ok && std::abs(fc) < std::abs(f)) {
                k = cand;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return k;
}

}  // namespace detail

// Admissible roots of poly: real, positive, away from every pole of the
// rational equation, and solving it. Throws NonGenericFailure when none
// survive. root_rel_tol governs float-mode pole distance and deduplication.
template <Scalar T>
CandidateSet<T> candidate_utilities(const CubicPoly<T>& poly, const StochasticChoice<T>& rho, const T& tol,
                                    double root_rel_tol = 1e-8) {
    (void)rho;
    CandidateSet<T> out;
    out.alternative = poly.y;
    out.ref_z = poly.z;
    out.ref_t = poly.t;

    bool constant_odds = true;
    for (std::size_t m : {0u, 2u, 3u}) {
        T cross = poly.slope[m] * poly.intercept[1] - poly.slope[1] * poly.intercept[m];
        if (!near_zero(cross, tol)) constant_odds = false;
    }
    if (constant_odds || poly.identically_zero(tol)) {
        out.aligned_coordinate = true;
        out.admissible.push_back(poly.intercept[1] / poly.slope[1]);
        return out;
    }

    auto reject = [&](double re, double im, std::optional<T> value, RootRejection why) {
        out.rejected.push_back(RejectedRoot<T>{re, im, std::move(value), why});
    };
    auto admit = [&](const T& k) {
        for (const auto& existing : out.admissible) {
            if (detail::same_root(existing, k, root_rel_tol)) return;
        }
        out.admissible.push_back(k);
    };

    if constexpr (is_exact_v<T>) {
        ExactRoots roots = rational_roots(std::span<const Rational>(poly.coeffs));
        for (const auto& z : roots.inexact) {
            reject(z.real(), z.imag(), std::nullopt,
                   z.imag() != 0 ? RootRejection::complex_value : RootRejection::irrational);
        }
        for (const Rational& k : roots.rational) {
            const double kd = to_double(k);
            if (!(k > 0)) {
                reject(kd, 0, k, RootRejection::non_positive);
                continue;
            }
            bool pole = false;
            for (std::size_t m = 0; m < 4; ++m) pole = pole || poly.denominator(m, k) == 0;
            if (pole) {
                reject(kd, 0, k, RootRejection::denominator_vanishes);
                continue;
            }
            if (poly.residual(k) != 0) {
                reject(kd, 0, k, RootRejection::fails_equation);
                continue;
            }
            admit(k);
        }
    } else {
        std::array<double, 4> c{};
        for (std::size_t i = 0; i < 4; ++i) c[i] = poly.coeffs[i];
        for (auto z : companion_roots(c)) {
            const double re = z.real();
            if (std::abs(z.imag()) > root_rel_tol * std::max(1.0, std::abs(re))) {
                reject(re, z.imag(), std::nullopt, RootRejection::complex_value);
                continue;
            }
            if (!(re > 0)) {
                reject(re, 0, re, RootRejection::non_positive);
                continue;
            }
            const double pole_tol = std::max(tol, root_rel_tol) * std::max(1.0, re);
            auto near_pole = [&](double k) {
                for (std::size_t m = 0; m < 4; ++m) {
                    if (poly.slope[m] == 0) continue;
                    if (std::abs(k - poly.intercept[m] / poly.slope[m]) <= pole_tol) return true;
                }
                return false;
            };
            if (near_pole(re)) {
                reject(re, 0, re, RootRejection::denominator_vanishes);
                continue;
            }
            const double k = detail::polish_root(poly, re);
            if (!(k > 0) || near_pole(k)) {
                reject(k, 0, k, RootRejection::denominator_vanishes);
                continue;
            }
            double magnitude = 0;
            for (std::size_t m = 0; m < 4; ++m) magnitude += 1.0 / std::abs(poly.denominator(m, k));
            if (std::abs(poly.residual(k)) > std::max(tol, 1e-12) * magnitude) {
                reject(k, 0, k, RootRejection::fails_equation);
                continue;
            }
            admit(k);
        }
    }
    std::sort(out.admissible.begin(), out.admissible.end());
    if (out.admissible.empty()) {
        throw NonGenericFailure("identification polynomial for " + rho.universe().id(poly.y) +
                                " has no admissible root");
    }
    return out;
}

enum class AlphaFeasibility { feasible, infeasible, full_interval };

inline const char* feasibility_name(AlphaFeasibility f) {
    switch (f) {
        case AlphaFeasibility::feasible: return "feasible";
        case AlphaFeasibility::infeasible: return "infeasible";
        case AlphaFeasibility::full_interval: return "full-interval";
    }
    return "?";
}

// Compliance implied by a candidate pair {k1, k2} through
// rho(x,{x,y}) = alpha / (1 + k1) + (1 - alpha) / (1 + k2).
template <Scalar T>
struct ImpliedAlpha {
    AlphaFeasibility feasibility = AlphaFeasibility::infeasible;
    std::optional<T> alpha;  // value when k1 is taken as u(y); absent if undetermined

    T first() const { return *alpha; }
    T second() const { return T(1) - *alpha; }
    T low() const { return first() < second() ? first() : second(); }
    T high() const { return first() < second() ? second() : first(); }
};

template <Scalar T>
ImpliedAlpha<T> implied_alpha(const StochasticChoice<T>& rho, AltIndex x, AltIndex y, const T& k1, const T& k2,
                              const T& tol) {
    if (!(k1 > 0) || !(k2 > 0)) throw InvalidParameter("candidate utilities must be positive");
    const T p = rho.prob(x, Menu{x, y});
    const T h1 = T(1) / (T(1) + k1);
    const T h2 = T(1) / (T(1) + k2);
    ImpliedAlpha<T> out;
    if (near_equal(h1, h2, tol)) {
        out.feasibility = near_equal(p, h1, tol) ? AlphaFeasibility::full_interval : AlphaFeasibility::infeasible;
        return out;
    }
    out.alpha = (p - h2) / (h1 - h2);
    const bool inside = *out.alpha >= -tol && *out.alpha <= T(1) + tol;
    out.feasibility = inside ? AlphaFeasibility::feasible : AlphaFeasibility::infeasible;
    return out;
}

enum class FieldStatus { identified_up_to_swap, degenerate_iia, non_generic_failure };

inline const char* field_status_name(FieldStatus s) {
    switch (s) {
        case FieldStatus::identified_up_to_swap: return "identified-up-to-swap";
        case FieldStatus::degenerate_iia: return "degenerate-iia";
        case FieldStatus::non_generic_failure: return "non-generic-failure";
    }
    return "?";
}

enum class FieldFailure {
    none,
    no_admissible_roots,
    empty_intersection,
    no_consistent_alpha,
    ambiguous_alpha,
    alpha_half,
    boundary_alpha,
    verification_failed,
};

inline const char* field_failure_name(FieldFailure f) {
    switch (f) {
        case FieldFailure::none: return "none";
        case FieldFailure::no_admissible_roots: return "no-admissible-roots";
        case FieldFailure::empty_intersection: return "empty-intersection";
        case FieldFailure::no_consistent_alpha: return "no-consistent-alpha";
        case FieldFailure::ambiguous_alpha: return "ambiguous-alpha";
        case FieldFailure::alpha_half: return "alpha-half";
        case FieldFailure::boundary_alpha: return "boundary-alpha";
        case FieldFailure::verification_failed: return "verification-failed";
    }
    return "?";
}

template <Scalar T>
struct CandidatePair {
    T k1;  // k1 < k2
    T k2;
    ImpliedAlpha<T> implied;
};

template <Scalar T>
struct AlternativeDiagnostics {
    AltIndex alternative = 0;
    std::vector<CandidateSet<T>> per_reference;
    std::vector<T> common;  // candidates shared by every reference pair
    bool aligned_coordinate = false;
    std::vector<CandidatePair<T>> pairs;  // the consistency table
    std::optional<std::size_t> selected;  // index into pairs
};

template <Scalar T>
struct FieldOptions {
    T tol = default_tol<T>();
    double root_rel_tol = 1e-8;
};

template <Scalar T>
struct FieldResult {
    FieldStatus status = FieldStatus::non_generic_failure;
    FieldFailure failure = FieldFailure::none;
    // Canonical member first: alpha >= 1/2, ties broken by u <= v lexicographically.
    std::optional<std::array<LamParams<T>, 2>> swap_class;
    std::optional<std::pair<T, T>> alpha_pair;  // {high, low}
    std::vector<AlternativeDiagnostics<T>> alternatives;
    // Every (alpha-low, per-alternative selection) consistent assignment found.
    std::vector<std::pair<T, std::vector<std::size_t>>> consistent_assignments;
    AltIndex anchor = 0;
    std::string reason;
    T tol{};
};

// Menus used for alternative y: {x,y,z,t}, {x,y,z}, {x,y,t} and {x,y} for a
// reference pair (z,t); every pair (z,t) with all four observed is used.
template <Scalar T>
FieldResult<T> identify_field(const StochasticChoice<T>& rho, AltIndex anchor, const FieldOptions<T>& options = {}) {
    const std::size_t n = rho.size();
    const T& tol = options.tol;
    if (n < 4) throw InsufficientData("field identification needs at least four alternatives");
    if (anchor >= n) throw InvalidParameter("anchor index out of range");
    const Universe& uni = rho.universe();

    FieldResult<T> result;
    result.anchor = anchor;
    result.tol = tol;
    auto fail = [&](FieldFailure why, std::string detail) {
        result.status = FieldStatus::non_generic_failure;
        result.failure = why;
        result.reason = std::move(detail);
        result.swap_class.reset();
        result.alpha_pair.reset();
        return result;
    };

    // Up-front menu validation.
    std::vector<std::vector<std::pair<AltIndex, AltIndex>>> references(n);
    for (AltIndex y = 0; y < n; ++y) {
        if (y == anchor) continue;
        for (AltIndex z = 0; z < n; ++z) {
            for (AltIndex t = z + 1; t < n; ++t) {
                if (z == anchor || z == y || t == anchor || t == y) continue;
                const Menu s{anchor, y, z, t};
                if (rho.has_menu(s) && rho.has_menu(s.without(t)) && rho.has_menu(s.without(z)) &&
                    rho.has_menu(Menu{anchor, y})) {
                    references[y].emplace_back(z, t);
                }
            }
        }
        if (references[y].empty()) {
            throw InsufficientData("no reference pair (z,t) with menus {x,y,z,t}, {x,y,z}, {x,y,t}, {x,y} "
                                   "observed for " + uni.id(y));
        }
    }

    if (satisfies_iia(rho, tol)) {
        result.status = FieldStatus::degenerate_iia;
        result.reason = "rho_AI satisfies IIA: either v = lambda*u or alpha in {0,1}";
        return result;
    }

    // Step 1: candidates per alternative, intersected across reference pairs.
    for (AltIndex y = 0; y < n; ++y) {
        if (y == anchor) continue;
        AlternativeDiagnostics<T> diag;
        diag.alternative = y;
        bool first = true;
        bool any_aligned = false;
        for (auto [z, t] : references[y]) {
            CubicPoly<T> poly = identification_polynomial(rho, anchor, y, z, t);
            CandidateSet<T> cands;
            try {
                cands = candidate_utilities(poly, rho, tol, options.root_rel_tol);
            } catch (const NonGenericFailure&) {
                cands.alternative = y;
                cands.ref_z = z;
                cands.ref_t = t;
                diag.per_reference.push_back(std::move(cands));
                result.alternatives.push_back(std::move(diag));
                return fail(FieldFailure::no_admissible_roots,
                            "no admissible root for " + uni.id(y) + " with reference pair (" + uni.id(z) + ", " +
                                uni.id(t) + ")");
            }
            any_aligned = any_aligned || cands.aligned_coordinate;
            if (first) {
                diag.common = cands.admissible;
                first = false;
            } else {
                std::vector<T> kept;
                for (const auto& k : diag.common) {
                    for (const auto& other : cands.admissible) {
                        if (detail::same_root(k, other, options.root_rel_tol)) {
                            kept.push_back(k);
                            break;
                        }
                    }
                }
                diag.common = std::move(kept);
            }
            diag.per_reference.push_back(std::move(cands));
        }
        diag.aligned_coordinate = any_aligned && diag.common.size() == 1;
        const bool usable = diag.aligned_coordinate || diag.common.size() >= 2;
        result.alternatives.push_back(std::move(diag));
        if (!usable) {
            return fail(FieldFailure::empty_intersection,
                        "fewer than two candidates for " + uni.id(y) + " survive every reference pair");
        }
    }

    // Step 2: implied compliance for every candidate pair.
    std::vector<std::size_t> informative;
    for (std::size_t a = 0; a < result.alternatives.size(); ++a) {
        auto& diag = result.alternatives[a];
        if (diag.aligned_coordinate) continue;
        informative.push_back(a);
        for (std::size_t i = 0; i < diag.common.size(); ++i) {
            for (std::size_t j = i + 1; j < diag.common.size(); ++j) {
                const T& k1 = diag.common[i];
                const T& k2 = diag.common[j];
                diag.pairs.push_back({k1, k2, implied_alpha(rho, anchor, diag.alternative, k1, k2, tol)});
            }
        }
    }
    if (informative.empty()) {
        return fail(FieldFailure::no_consistent_alpha, "every alternative has menu-independent odds");
    }

    // Alpha-pair shared by exactly one feasible candidate pair per alternative.
    auto feasible = [](const CandidatePair<T>& p) { return p.implied.feasibility == AlphaFeasibility::feasible; };
    std::size_t pivot = informative.front();
    auto count_feasible = [&](std::size_t a) {
        return std::count_if(result.alternatives[a].pairs.begin(), result.alternatives[a].pairs.end(), feasible);
    };
    for (std::size_t a : informative) {
        if (count_feasible(a) < count_feasible(pivot)) pivot = a;
    }
    const auto& pivot_pairs = result.alternatives[pivot].pairs;
    for (std::size_t p = 0; p < pivot_pairs.size(); ++p) {
        if (!feasible(pivot_pairs[p])) continue;
        const T a_low = pivot_pairs[p].implied.low();
        std::vector<std::vector<std::size_t>> matches(result.alternatives.size());
        bool all = true;
        for (std::size_t a : informative) {
            const auto& pairs = result.alternatives[a].pairs;
            for (std::size_t q = 0; q < pairs.size(); ++q) {
                if (a == pivot && q != p) continue;
                if (feasible(pairs[q]) && near_equal(pairs[q].implied.low(), a_low, tol)) matches[a].push_back(q);
            }
            if (matches[a].empty()) {
                all = false;
                break;
            }
        }
        if (!all) continue;
        // Expand the product of per-alternative matches.
        std::vector<std::vector<std::size_t>> combos{std::vector<std::size_t>(result.alternatives.size(), 0)};
        for (std::size_t a : informative) {
            std::vector<std::vector<std::size_t>> next;
            for (const auto& c : combos) {
                for (std::size_t q : matches[a]) {
                    auto d = c;
                    d[a] = q;
                    next.push_back(std::move(d));
                }
            }
            combos = std::move(next);
        }
        for (auto& c : combos) result.consistent_assignments.emplace_back(a_low, std::move(c));
    }
    if (result.consistent_assignments.empty()) {
        return fail(FieldFailure::no_consistent_alpha, "no compliance value is shared by all alternatives");
    }
    if (result.consistent_assignments.size() > 1) {
        return fail(FieldFailure::ambiguous_alpha, std::to_string(result.consistent_assignments.size()) +
                                                       " candidate assignments share a compliance value");
    }
    const auto& selection = result.consistent_assignments.front().second;
    for (std::size_t a : informative) result.alternatives[a].selected = selection[a];

    // Step 3: fix alpha^u on the pivot and orient every other pair by it.
    const auto& pivot_pair = result.alternatives[pivot].pairs[selection[pivot]];
    const T alpha_u = pivot_pair.implied.first();
    if (near_equal(alpha_u, T(1) / T(2), tol)) {
        return fail(FieldFailure::alpha_half, "compliance 1/2 leaves the u/v assignment undetermined");
    }
    if (!(alpha_u > tol) || !(alpha_u < T(1) - tol)) {
        return fail(FieldFailure::boundary_alpha, "implied compliance lies on the boundary of [0,1]");
    }
    std::vector<T> u(n, T(1)), v(n, T(1));
    for (const auto& diag : result.alternatives) {
        const AltIndex y = diag.alternative;
        if (diag.aligned_coordinate) {
            u[y] = v[y] = diag.common.front();
            continue;
        }
        const auto& pair = diag.pairs[*diag.selected];
        if (near_equal(pair.implied.first(), alpha_u, tol)) {
            u[y] = pair.k1;
            v[y] = pair.k2;
        } else {
            u[y] = pair.k2;
            v[y] = pair.k1;
        }
    }
    T alpha = alpha_u;
    if constexpr (!is_exact_v<T>) alpha = std::clamp(alpha, 0.0, 1.0);
    LamParams<T> params(u, v, alpha, anchor);

    for (const auto& [menu, row] : rho.table()) {
        auto fwd = lam_forward(params, menu);
        for (AltIndex i : menu.members()) {
            if (!near_equal(fwd[i], row[i], tol)) {
                return fail(FieldFailure::verification_failed,
                            "assembled parameters do not reproduce rho_AI on {" + format_menu(uni, menu) + "}");
            }
        }
    }

    LamParams<T> other = params.swapped();
    bool params_first = params.alpha() > other.alpha() ||
                        (params.alpha() == other.alpha() && params.u() <= params.v());
    result.swap_class = params_first ? std::array<LamParams<T>, 2>{params, other}
                                     : std::array<LamParams<T>, 2>{other, params};
    result.alpha_pair = std::make_pair((*result.swap_class)[0].alpha(), (*result.swap_class)[1].alpha());
    result.status = FieldStatus::identified_up_to_swap;
    return result;
}

// Reflection-invariant distance between a laboratory compliance estimate and
// the field compliance pair {alpha, 1 - alpha}.
template <Scalar T>
T deception_gap(const T& lab_alpha, const T& field_alpha) {
    const T a = abs_value(T(lab_alpha - field_alpha));
    const T b = abs_value(T(lab_alpha - (T(1) - field_alpha)));
    return a < b ? a : b;
}

template <Scalar T>
T deception_gap(const T& lab_alpha, const FieldResult<T>& field) {
    if (field.status != FieldStatus::identified_up_to_swap || !field.alpha_pair) {
        throw UndefinedGap(std::string("deception gap needs an identified field result, got ") +
                           field_status_name(field.status));
    }
    return deception_gap(lab_alpha, field.alpha_pair->first);
}

}  // namespace lam
