#include "lam/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lam {

ChoiceCounts::ChoiceCounts(Universe universe, Table table)
    : universe_(std::move(universe)), table_(std::move(table)) {
    const std::size_t n = universe_.size();
    const Menu full = Menu::full(n);
    for (const auto& [menu, row] : table_) {
        if (menu.empty() || !full.contains(menu)) throw InvalidParameter("count menu outside the universe");
        const std::string name = format_menu(universe_, menu);
        if (row.size() != n) throw InvalidParameter("count row for {" + name + "} has wrong length");
        std::int64_t total = 0;
        for (AltIndex i = 0; i < n; ++i) {
            if (row[i] < 0) throw InvalidParameter("negative count in {" + name + "}");
            if (row[i] != 0 && !menu.contains(i)) {
                throw InvalidParameter("count for " + universe_.id(i) + " outside menu {" + name + "}");
            }
            total += row[i];
        }
        if (total == 0) throw InvalidParameter("menu {" + name + "} has no observations");
    }
}

std::vector<Menu> ChoiceCounts::domain() const {
    std::vector<Menu> out;
    for (const auto& entry : table_) out.push_back(entry.first);
    return out;
}

std::int64_t ChoiceCounts::trials(Menu s) const {
    auto it = table_.find(s);
    if (it == table_.end()) throw MissingData("menu {" + format_menu(universe_, s) + "} has no counts");
    std::int64_t total = 0;
    for (auto c : it->second) total += c;
    return total;
}

std::int64_t ChoiceCounts::total_trials() const {
    std::int64_t total = 0;
    for (const auto& entry : table_) {
        for (auto c : entry.second) total += c;
    }
    return total;
}

StochasticChoice<double> ChoiceCounts::empirical_rho() const {
    StochasticChoice<double>::Table table;
    for (const auto& [menu, row] : table_) {
        const double total = static_cast<double>(trials(menu));
        ChoiceRow<double> r(row.size(), 0.0);
        for (std::size_t i = 0; i < row.size(); ++i) r[i] = static_cast<double>(row[i]) / total;
        table.emplace(menu, std::move(r));
    }
    return StochasticChoice<double>(universe_, std::move(table));
}

double uniform53(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

ChoiceCounts simulate_counts(const Universe& universe, const LamParams<double>& params,
                             std::span<const Menu> menus, std::int64_t n_per_menu, std::uint64_t seed) {
    if (n_per_menu < 1) throw InvalidParameter("n_per_menu must be at least 1");
    if (params.size() != universe.size()) throw InvalidParameter("parameters do not match the universe");
    std::vector<Menu> sorted(menus.begin(), menus.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::mt19937_64 gen(seed);
    ChoiceCounts::Table table;
    for (Menu m : sorted) {
        const auto p = lam_forward(params, m);
        const auto members = m.members();
        std::vector<double> cdf;
        double acc = 0;
        for (AltIndex i : members) {
            acc += p[i];
            cdf.push_back(acc);
        }
        ChoiceCounts::Row row(universe.size(), 0);
        for (std::int64_t k = 0; k < n_per_menu; ++k) {
            const double r = uniform53(gen) * acc;
            std::size_t j = 0;
            while (j + 1 < members.size() && r >= cdf[j]) ++j;
            ++row[members[j]];
        }
        table.emplace(m, std::move(row));
    }
    return ChoiceCounts(universe, std::move(table));
}

double log_likelihood(const LamParams<double>& params, const ChoiceCounts& data) {
    double ll = 0;
    for (const auto& [menu, row] : data.table()) {
        const auto p = lam_forward(params, menu);
        for (AltIndex i : menu.members()) {
            if (row[i] > 0) ll += static_cast<double>(row[i]) * std::log(p[i]);
        }
    }
    return ll;
}

std::vector<double> to_coordinates(const LamParams<double>& params) {
    const double a = params.alpha();
    if (!(a > 0 && a < 1)) throw InvalidParameter("logit coordinates need 0 < alpha < 1");
    std::vector<double> theta;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i != params.anchor()) theta.push_back(std::log(params.u()[i]));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i != params.anchor()) theta.push_back(std::log(params.v()[i]));
    }
    theta.push_back(std::log(a) - std::log1p(-a));
    return theta;
}

LamParams<double> from_coordinates(std::span<const double> theta, std::size_t n, AltIndex anchor) {
    if (theta.size() != 2 * (n - 1) + 1) throw InvalidParameter("coordinate vector has wrong length");
    std::vector<double> u(n, 1.0), v(n, 1.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != anchor) u[i] = std::exp(theta[k++]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i != anchor) v[i] = std::exp(theta[k++]);
    }
    const double alpha = 1.0 / (1.0 + std::exp(-theta[k]));
    return LamParams<double>(u, v, alpha, anchor);
}

std::vector<double> log_likelihood_gradient(const LamParams<double>& params, const ChoiceCounts& data) {
    const std::size_t n = params.size();
    const AltIndex anchor = params.anchor();
    const double alpha = params.alpha();
    std::vector<double> gu(n, 0.0), gv(n, 0.0);
    double ga = 0;
    for (const auto& [menu, row] : data.table()) {
        const auto a = luce_choice(params.u(), menu);
        const auto b = luce_choice(params.v(), menu);
        const auto members = menu.members();
        for (AltIndex x : members) {
            if (row[x] == 0) continue;
            const double p = alpha * a[x] + (1 - alpha) * b[x];
            const double w = static_cast<double>(row[x]) / p;
            // d a_x / d log u_j = a_x (delta_xj - a_j)
            for (AltIndex j : members) {
                const double dj = (j == x ? 1.0 : 0.0);
                gu[j] += w * alpha * a[x] * (dj - a[j]);
                gv[j] += w * (1 - alpha) * b[x] * (dj - b[j]);
            }
            ga += w * alpha * (1 - alpha) * (a[x] - b[x]);
        }
    }
    std::vector<double> g;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != anchor) g.push_back(gu[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i != anchor) g.push_back(gv[i]);
    }
    g.push_back(ga);
    return g;
}

std::vector<double> weighted_luce_mle(const std::map<Menu, std::vector<double>>& weights,
                                      std::vector<double> u, AltIndex anchor, const InnerOptions& opts) {
    const std::size_t n = u.size();
    std::vector<double> wins(n, 0.0);
    for (const auto& [menu, w] : weights) {
        for (AltIndex i : menu.members()) wins[i] += w[i];
    }
    auto objective = [&](const std::vector<double>& util) {
        double q = 0;
        for (const auto& [menu, w] : weights) {
            double total = 0, mass = 0;
            for (AltIndex i : menu.members()) {
                total += util[i];
                mass += w[i];
            }
            for (AltIndex i : menu.members()) {
                if (w[i] > 0) q += w[i] * std::log(util[i]);
            }
            q -= mass * std::log(total);
        }
        return q;
    };
    double prev = objective(u);
    for (int it = 0; it < opts.max_iter; ++it) {
        std::vector<double> denom(n, 0.0);
        for (const auto& [menu, w] : weights) {
            double total = 0, mass = 0;
            for (AltIndex i : menu.members()) {
                total += u[i];
                mass += w[i];
            }
            for (AltIndex i : menu.members()) denom[i] += mass / total;
        }
        std::vector<double> next(u);
        for (std::size_t i = 0; i < n; ++i) {
            if (denom[i] > 0) next[i] = wins[i] / denom[i];
        }
        const double scale = next[anchor] > 0 ? next[anchor] : *std::max_element(next.begin(), next.end());
        double top = 0;
        for (auto& x : next) {
            x /= scale;
            top = std::max(top, x);
        }
        for (auto& x : next) x = std::max(x, 1e-12 * top);
        const double q = objective(next);
        u = std::move(next);
        if (std::abs(q - prev) <= opts.tol * std::max(1.0, std::abs(prev))) break;
        prev = q;
    }
    const double s = u[anchor];
    for (auto& x : u) x /= s;
    return u;
}

EmStep em_step(const LamParams<double>& params, const ChoiceCounts& data, const InnerOptions& opts) {
    const std::size_t n = params.size();
    const AltIndex anchor = params.anchor();
    const double alpha = params.alpha();
    const bool frozen = alpha <= 0 || alpha >= 1;

    std::map<Menu, std::vector<double>> wh, wa;
    double mass_h = 0, mass = 0;
    for (const auto& [menu, row] : data.table()) {
        const auto a = luce_choice(params.u(), menu);
        const auto b = luce_choice(params.v(), menu);
        std::vector<double> h(n, 0.0), r(n, 0.0);
        for (AltIndex x : menu.members()) {
            const double c = static_cast<double>(row[x]);
            if (c == 0) continue;
            double resp;
            if (frozen) {
                resp = alpha >= 1 ? 1.0 : 0.0;
            } else {
                const double p = alpha * a[x] + (1 - alpha) * b[x];
                resp = alpha * a[x] / p;
            }
            h[x] = c * resp;
            r[x] = c - h[x];
            mass_h += h[x];
            mass += c;
        }
        wh.emplace(menu, std::move(h));
        wa.emplace(menu, std::move(r));
    }

    std::vector<double> u = params.u(), v = params.v();
    double next_alpha = alpha;
    if (!frozen) {
        next_alpha = mass_h / mass;
        u = weighted_luce_mle(wh, u, anchor, opts);
        v = weighted_luce_mle(wa, v, anchor, opts);
    } else if (alpha >= 1) {
        u = weighted_luce_mle(wh, u, anchor, opts);
    } else {
        v = weighted_luce_mle(wa, v, anchor, opts);
    }
    return EmStep{LamParams<double>(u, v, next_alpha, anchor), frozen};
}

const char* fit_status_name(FitStatus s) {
    switch (s) {
        case FitStatus::converged: return "converged";
        case FitStatus::max_iterations: return "max-iterations";
        case FitStatus::degenerate_fit: return "degenerate-fit";
    }
    return "?";
}

namespace {

// One squared-extrapolation proposal from theta0 -> theta1 -> theta2 in
// unconstrained coordinates; empty when the steps are degenerate.
std::optional<LamParams<double>> extrapolate(const LamParams<double>& p0, const LamParams<double>& p1,
                                             const LamParams<double>& p2) {
    for (const auto* p : {&p0, &p1, &p2}) {
        if (!(p->alpha() > 0 && p->alpha() < 1)) return std::nullopt;
    }
    const auto t0 = to_coordinates(p0), t1 = to_coordinates(p1), t2 = to_coordinates(p2);
    double rr = 0, vv = 0;
    for (std::size_t i = 0; i < t0.size(); ++i) {
        const double r = t1[i] - t0[i];
        const double v = t2[i] - 2 * t1[i] + t0[i];
        rr += r * r;
        vv += v * v;
    }
    if (!(vv > 0) || !(rr > 0)) return std::nullopt;
    const double step = -std::sqrt(rr / vv);
    if (step > -1) return std::nullopt;  // no gain over the plain double step
    std::vector<double> t(t0.size());
    for (std::size_t i = 0; i < t0.size(); ++i) {
        const double r = t1[i] - t0[i];
        const double v = t2[i] - 2 * t1[i] + t0[i];
        t[i] = t0[i] - 2 * step * r + step * step * v;
        if (!std::isfinite(t[i]) || std::abs(t[i]) > 50) return std::nullopt;
    }
    return from_coordinates(t, p0.size(), p0.anchor());
}

}  // namespace

StartRecord run_em(const ChoiceCounts& data, const LamParams<double>& start, const FitOptions& opts,
                   std::vector<double>* trace, double* min_increment) {
    StartRecord rec;
    rec.initial = start;
    LamParams<double> current = start;
    double ll = log_likelihood(current, data);
    if (trace) trace->push_back(ll);
    double worst = std::numeric_limits<double>::infinity();
    auto record = [&](const LamParams<double>& p, double value) {
        if (trace) trace->push_back(value);
        worst = std::min(worst, value - ll);
        current = p;
        ll = value;
    };
    int it = 0;
    while (it < opts.max_iter) {
        const double before = ll;
        EmStep s1 = em_step(current, data, opts.inner);
        ++it;
        const LamParams<double> p0 = current;
        record(s1.params, log_likelihood(s1.params, data));
        if (s1.boundary_frozen) {
            rec.degenerate = true;
            break;
        }
        if (opts.accelerate && it < opts.max_iter) {
            EmStep s2 = em_step(current, data, opts.inner);
            ++it;
            double ll2 = log_likelihood(s2.params, data);
            LamParams<double> next = s2.params;
            if (auto prop = extrapolate(p0, s1.params, s2.params)) {
                EmStep s3 = em_step(*prop, data, opts.inner);
                const double ll3 = log_likelihood(s3.params, data);
                if (std::isfinite(ll3) && ll3 > ll2) {
                    next = s3.params;
                    ll2 = ll3;
                }
            }
            record(next, ll2);
        }
        if (ll - before <= opts.tol_ll * std::abs(ll)) {
            rec.converged = true;
            break;
        }
    }
    rec.final_params = current;
    rec.log_likelihood = ll;
    rec.iterations = it;
    const double a = current.alpha();
    if (a <= opts.boundary_tol || a >= 1 - opts.boundary_tol) rec.degenerate = true;
    if (min_increment) *min_increment = worst;
    return rec;
}

FitResult fit_mle(const ChoiceCounts& data, int starts, const FitOptions& opts, std::uint64_t seed) {
    if (data.table().empty()) throw InsufficientData("no counts to fit");
    if (starts < 1) throw InvalidParameter("at least one start is required");
    const std::size_t n = data.size();
    if (opts.anchor >= n) throw InvalidParameter("anchor index out of range");

    std::mt19937_64 gen(seed);
    FitResult result;
    result.empirical_rho = data.empirical_rho();
    result.min_increment = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> traces;
    std::optional<std::size_t> best;
    for (int s = 0; s < starts; ++s) {
        std::vector<double> u(n, 1.0), v(n, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == opts.anchor) continue;
            u[i] = std::exp(-1.5 + 3.0 * uniform53(gen));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == opts.anchor) continue;
            v[i] = std::exp(-1.5 + 3.0 * uniform53(gen));
        }
        const double alpha = 0.2 + 0.6 * uniform53(gen);
        std::vector<double> trace;
        double worst = 0;
        StartRecord rec = run_em(data, LamParams<double>(u, v, alpha, opts.anchor), opts, &trace, &worst);
        result.min_increment = std::min(result.min_increment, worst);
        if (!rec.degenerate && (!best || rec.log_likelihood > result.starts[*best].log_likelihood)) {
            best = result.starts.size();
        }
        result.starts.push_back(std::move(rec));
        traces.push_back(std::move(trace));
    }

    if (opts.pooled_start) {
        std::map<Menu, std::vector<double>> pooled;
        for (const auto& [menu, row] : data.table()) {
            pooled.emplace(menu, std::vector<double>(row.begin(), row.end()));
        }
        const auto w = weighted_luce_mle(pooled, std::vector<double>(n, 1.0), opts.anchor,
                                         InnerOptions{opts.inner.tol, 50 * opts.inner.max_iter});
        std::vector<double> trace;
        double worst = 0;
        StartRecord rec = run_em(data, LamParams<double>(w, w, 0.5, opts.anchor), opts, &trace, &worst);
        rec.pooled = true;
        result.min_increment = std::min(result.min_increment, worst);
        if (!rec.degenerate && (!best || rec.log_likelihood > result.starts[*best].log_likelihood)) {
            best = result.starts.size();
        }
        result.starts.push_back(std::move(rec));
        traces.push_back(std::move(trace));
    }

    // All starts degenerate: report the best of them anyway.
    std::size_t pick = 0;
    if (best) {
        pick = *best;
    } else {
        for (std::size_t s = 1; s < result.starts.size(); ++s) {
            if (result.starts[s].log_likelihood > result.starts[pick].log_likelihood) pick = s;
        }
    }
    const StartRecord& chosen = result.starts[pick];
    LamParams<double> params = chosen.final_params;
    if (params.alpha() < 0.5) params = params.swapped();
    result.params = params;
    result.log_likelihood = chosen.log_likelihood;
    result.iterations = chosen.iterations;
    result.converged = chosen.converged;
    result.trace = std::move(traces[pick]);
    result.best_start = pick;
    if (!best) {
        result.status = FitStatus::degenerate_fit;
    } else {
        result.status = chosen.converged ? FitStatus::converged : FitStatus::max_iterations;
    }
    return result;
}

}  // namespace lam
