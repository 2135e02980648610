#pragma once

// Finite-sample layer: multinomial sampling from a LAM and maximum
// likelihood fitting by EM. Floating point only.
//
// Random numbers come from std::mt19937_64 (the 64-bit Mersenne Twister,
// fully specified by the C++ standard). Each uniform is (g() >> 11) * 2^-53
// and each draw picks the first menu member whose cumulative probability
// exceeds it, members taken in universe order, menus in Menu order. Any
// implementation following this recipe reproduces the same counts.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lam/choice.hpp"

namespace lam {

class ChoiceCounts {
public:
    using Row = std::vector<std::int64_t>;
    using Table = std::map<Menu, Row>;

    ChoiceCounts() = default;
    // Rows need the universe's length, zeros off-menu, non-negative entries
    // and at least one positive entry.
    ChoiceCounts(Universe universe, Table table);

    const Universe& universe() const { return universe_; }
    std::size_t size() const { return universe_.size(); }
    const Table& table() const { return table_; }
    std::vector<Menu> domain() const;
    std::int64_t trials(Menu s) const;
    std::int64_t total_trials() const;
    // Count frequencies per menu.
    StochasticChoice<double> empirical_rho() const;

    friend bool operator==(const ChoiceCounts& a, const ChoiceCounts& b) {
        return a.universe_ == b.universe_ && a.table_ == b.table_;
    }

private:
    Universe universe_;
    Table table_;
};

// n i.i.d. draws per menu from lam_forward(params, menu). Duplicate menus
// are sampled once.
ChoiceCounts simulate_counts(const Universe& universe, const LamParams<double>& params,
                             std::span<const Menu> menus, std::int64_t n_per_menu, std::uint64_t seed);

// Uniform on [0, 1) with 53 random bits.
double uniform53(std::mt19937_64& gen);

double log_likelihood(const LamParams<double>& params, const ChoiceCounts& data);

// Unconstrained coordinates: log u(i) and log v(i) for every i != anchor
// (in index order), then logit(alpha). Requires 0 < alpha < 1.
std::vector<double> to_coordinates(const LamParams<double>& params);
LamParams<double> from_coordinates(std::span<const double> theta, std::size_t n, AltIndex anchor);

// Gradient of log_likelihood with respect to to_coordinates(params).
std::vector<double> log_likelihood_gradient(const LamParams<double>& params, const ChoiceCounts& data);

struct InnerOptions {
    double tol = 1e-12;
    int max_iter = 500;
};

// Maximises sum_S sum_x w(x,S) log luce(u)(x,S) by minorize-maximize,
// starting from `start`; returns utilities with u(anchor) = 1.
// Alternatives that are never chosen are floored at 1e-12 relative.
std::vector<double> weighted_luce_mle(const std::map<Menu, std::vector<double>>& weights,
                                      std::vector<double> start, AltIndex anchor, const InnerOptions& opts = {});

struct EmStep {
    LamParams<double> params;
    // alpha was 0 or 1: only the active component was updated.
    bool boundary_frozen = false;
};

EmStep em_step(const LamParams<double>& params, const ChoiceCounts& data, const InnerOptions& opts = {});

struct FitOptions {
    double tol_ll = 1e-10;  // relative log-likelihood improvement
    int max_iter = 2000;
    InnerOptions inner{};
    double boundary_tol = 1e-8;  // alpha within this of 0 or 1 counts as degenerate
    AltIndex anchor = 0;
    // Squared extrapolation between two EM steps, kept only when it beats
    // the plain step; every recorded iterate still ascends.
    bool accelerate = true;
    // Also run EM from the one-component fit u = v (pooled Luce MLE).
    bool pooled_start = true;
};

enum class FitStatus { converged, max_iterations, degenerate_fit };

const char* fit_status_name(FitStatus s);

struct StartRecord {
    bool pooled = false;  // the u = v start
    LamParams<double> initial;
    LamParams<double> final_params;
    double log_likelihood = 0;
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;
};

struct FitResult {
    FitStatus status = FitStatus::degenerate_fit;
    LamParams<double> params;  // canonical member: alpha >= 1/2
    double log_likelihood = 0;
    int iterations = 0;
    bool converged = false;
    StochasticChoice<double> empirical_rho;
    // Log-likelihood after every EM step of the selected start, starting
    // with the initial value.
    std::vector<double> trace;
    // Smallest step-to-step change over all starts; >= -1e-10 certifies ascent.
    double min_increment = 0;
    std::size_t best_start = 0;
    std::vector<StartRecord> starts;
};

// Multi-start EM. Start k draws log u, log v ~ U(-1.5, 1.5) off the anchor
// and alpha ~ U(0.2, 0.8) from one generator seeded with `seed`. With
// opts.pooled_start an extra start u = v = pooled Luce MLE, alpha = 1/2 is
// appended; EM leaves it fixed, so it competes on likelihood alone.
FitResult fit_mle(const ChoiceCounts& data, int starts, const FitOptions& opts, std::uint64_t seed);

// Runs EM from a given start.
StartRecord run_em(const ChoiceCounts& data, const LamParams<double>& start, const FitOptions& opts,
                   std::vector<double>* trace = nullptr, double* min_increment = nullptr);

}  // namespace lam
