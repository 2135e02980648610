#pragma once

// Shared helpers for the test binaries.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lam/choice.hpp"

namespace lamtest {

using lam::Rational;

inline lam::Universe universe_of(std::size_t n) {
    static const std::vector<std::string> names{"x", "y", "z", "t", "w", "s", "r", "q"};
    return lam::Universe(std::vector<std::string>(names.begin(), names.begin() + static_cast<long>(n)));
}

inline Rational Q(long p, long q = 1) { return Rational(p, q); }

inline std::vector<Rational> Qv(std::initializer_list<Rational> xs) { return std::vector<Rational>(xs); }

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    Rational fraction(long max = 9) { return Rational(integer(1, max), integer(1, max)); }

    std::vector<Rational> utilities(std::size_t n, long max = 9) {
        std::vector<Rational> u(n);
        u[0] = 1;
        for (std::size_t i = 1; i < n; ++i) u[i] = fraction(max);
        return u;
    }

    std::vector<double> real_utilities(std::size_t n) {
        std::vector<double> u(n, 1.0);
        for (std::size_t i = 1; i < n; ++i) u[i] = std::exp(real(-1.5, 1.5));
        return u;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

// v is proportional to u.
template <class T>
bool proportional(const std::vector<T>& u, const std::vector<T>& v) {
    for (std::size_t i = 1; i < u.size(); ++i) {
        if (u[i] * v[0] != v[i] * u[0]) return false;
    }
    return true;
}

}  // namespace lamtest
