#include "lam/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace lam {

namespace {

std::size_t effective_degree(std::span<const double> c) {
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0;
    std::size_t deg = c.size() - 1;
    while (deg > 0 && std::abs(c[deg]) <= 1e-14 * scale) --deg;
    return deg;
}

std::vector<Rational> trim(std::span<const Rational> c) {
    std::vector<Rational> out(c.begin(), c.end());
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

bool rational_sqrt(const Rational& d, Rational& root) {
    if (d < 0) return false;
    BigInt num = boost::multiprecision::numerator(d);
    BigInt den = boost::multiprecision::denominator(d);
    BigInt sn = boost::multiprecision::sqrt(num);
    BigInt sd = boost::multiprecision::sqrt(den);
    if (sn * sn != num || sd * sd != den) return false;
    root = Rational(sn, sd);
    return true;
}

// Newton refinement in long double against coefficients rounded from Q.
long double polish(const std::vector<long double>& c, long double x) {
    for (int it = 0; it < 30; ++it) {
        long double p = 0, dp = 0;
        for (std::size_t i = c.size(); i-- > 0;) {
            dp = dp * x + p;
            p = p * x + c[i];
        }
        if (dp == 0) break;
        long double step = p / dp;
        x -= step;
        if (std::abs(step) <= 1e-19L * std::max<long double>(1, std::abs(x))) break;
    }
    return x;
}

// Searches the continued-fraction convergents of x for an exact root.
bool find_rational_near(std::span<const Rational> c, long double x, Rational& out) {
    if (!std::isfinite(static_cast<double>(x))) return false;
    // Convergents h/k with h_n = a_n h_{n-1} + h_{n-2}.
    BigInt h_2 = 0, h_1 = 1, k_2 = 1, k_1 = 0;
    const BigInt k_limit = BigInt(1) << 50;
    long double rem = x;
    for (int i = 0; i < 64; ++i) {
        long double a = std::floor(rem);
        if (std::abs(a) > 1e18L) break;
        BigInt ai(static_cast<long long>(a));
        BigInt h = ai * h_1 + h_2;
        BigInt k = ai * k_1 + k_2;
        h_2 = h_1;
        h_1 = h;
        k_2 = k_1;
        k_1 = k;
        if (k > k_limit) break;
        Rational candidate(h, k);
        if (evaluate_polynomial<Rational>(c, candidate) == 0) {
            out = candidate;
            return true;
        }
        long double frac = rem - a;
        if (frac <= 1e-30L) break;
        rem = 1.0L / frac;
    }
    return false;
}

void push_unique(std::vector<Rational>& v, const Rational& r) {
    if (std::find(v.begin(), v.end(), r) == v.end()) v.push_back(r);
}

std::complex<double> to_complex(double re, double im) { return {re, im}; }

void solve_quadratic(const Rational& c0, const Rational& c1, const Rational& c2, ExactRoots& out) {
    const Rational disc = c1 * c1 - Rational(4) * c2 * c0;
    Rational s;
    if (rational_sqrt(disc, s)) {
        push_unique(out.rational, Rational((-c1 - s) / (Rational(2) * c2)));
        push_unique(out.rational, Rational((-c1 + s) / (Rational(2) * c2)));
        return;
    }
    const double b = c1.convert_to<double>();
    const double a = c2.convert_to<double>();
    const double d = disc.convert_to<double>();
    if (d >= 0) {
        double q = -0.5 * (b + std::copysign(std::sqrt(d), b));
        out.inexact.push_back(to_complex(q / a, 0.0));
        out.inexact.push_back(to_complex(c0.convert_to<double>() / q, 0.0));
    } else {
        double re = -b / (2 * a);
        double im = std::sqrt(-d) / (2 * std::abs(a));
        out.inexact.push_back(to_complex(re, -im));
        out.inexact.push_back(to_complex(re, im));
    }
}

}  // namespace

std::vector<std::complex<double>> companion_roots(std::span<const double> ascending) {
    const std::size_t deg = effective_degree(ascending);
    std::vector<std::complex<double>> roots;
    if (deg == 0) return roots;
    const double lead = ascending[deg];
    if (deg == 1) {
        roots.emplace_back(-ascending[0] / lead, 0.0);
        return roots;
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg),
                                                      static_cast<Eigen::Index>(deg));
    for (std::size_t i = 1; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -ascending[i] / lead;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    const auto& ev = solver.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) roots.push_back(ev[i]);
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

ExactRoots rational_roots(std::span<const Rational> ascending) {
    ExactRoots out;
    std::vector<Rational> c = trim(ascending);
    if (c.size() <= 1) return out;

    // Factor out k = 0 roots.
    std::size_t zeros = 0;
    while (zeros + 1 < c.size() && c[zeros] == 0) ++zeros;
    if (zeros > 0) {
        push_unique(out.rational, Rational(0));
        c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
    }

    while (c.size() > 3) {
        std::vector<double> approx(c.size());
        std::vector<long double> approx_ld(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            approx[i] = c[i].convert_to<double>();
            approx_ld[i] = static_cast<long double>(approx[i]);
        }
        bool found = false;
        Rational root;
        for (auto z : companion_roots(approx)) {
            if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z.real()))) continue;
            long double x = polish(approx_ld, static_cast<long double>(z.real()));
            if (find_rational_near(c, x, root) || find_rational_near(c, z.real(), root)) {
                found = true;
                break;
            }
        }
        if (!found) {
            for (auto z : companion_roots(approx)) out.inexact.push_back(z);
            std::sort(out.rational.begin(), out.rational.end());
            return out;
        }
        push_unique(out.rational, root);
        // Synthetic division by (k - root).
        std::vector<Rational> q(c.size() - 1);
        Rational carry(0);
        for (std::size_t i = c.size(); i-- > 1;) {
            carry = c[i] + carry * root;
            q[i - 1] = carry;
        }
        c = std::move(q);
    }

    if (c.size() == 3) {
        solve_quadratic(c[0], c[1], c[2], out);
    } else if (c.size() == 2) {
        push_unique(out.rational, Rational(-c[0] / c[1]));
    }
    std::sort(out.rational.begin(), out.rational.end());
    return out;
}

}  // namespace lam
