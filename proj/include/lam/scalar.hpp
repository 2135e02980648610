#pragma once

// Scalar backends shared by every algorithm in the library.
//
// Two modes are supported:
//   - double    : estimation and noisy data, comparisons use a tolerance
//   - Rational  : arbitrary-precision exact arithmetic, tolerance is zero
//
// Algorithms are templates over `Scalar T`; mode-specific behaviour goes
// through ScalarTraits or `if constexpr (is_exact_v<T>)`.

#include <cmath>
#include <concepts>
#include <numeric>
#include <span>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace lam {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* mode_name = "float";
    static double default_tol() { return 1e-9; }
    static double to_double(double x) { return x; }
};

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* mode_name = "exact";
    static Rational default_tol() { return Rational(0); }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

template <Scalar T>
T default_tol() {
    return ScalarTraits<T>::default_tol();
}

template <Scalar T>
double to_double(const T& x) {
    return ScalarTraits<T>::to_double(x);
}

template <Scalar T>
T abs_value(const T& x) {
    return x < 0 ? T(-x) : x;
}

// |a| <= tol. With tol = 0 this is an exact zero test.
template <Scalar T>
bool near_zero(const T& a, const T& tol) {
    return abs_value(a) <= tol;
}

template <Scalar T>
bool near_equal(const T& a, const T& b, const T& tol) {
    return abs_value(T(a - b)) <= tol;
}

// Strict a < b, relaxed by tol when tol > 0.
template <Scalar T>
bool less_tol(const T& a, const T& b, const T& tol) {
    return tol == 0 ? a < b : a < b + tol;
}

// Non-strict a <= b, relaxed by tol.
template <Scalar T>
bool at_most_tol(const T& a, const T& b, const T& tol) {
    return a <= b + tol;
}

template <Scalar T>
T max_value(const T& a, const T& b) {
    return a < b ? b : a;
}

// Geometric mean of positive values. In exact mode callers only pass
// values that are equal (IIA holds exactly), so the first one is returned.
template <Scalar T>
T geometric_mean(std::span<const T> values) {
    if constexpr (is_exact_v<T>) {
        return values.front();
    } else {
        double acc = 0.0;
        for (double v : values) acc += std::log(v);
        return std::exp(acc / static_cast<double>(values.size()));
    }
}

// "p/q" or "p" for rationals, shortest round-trip text for doubles.
std::string to_string(const Rational& x);
std::string to_string(double x);

// Integer or p/q literal, optional sign. Throws InvalidParameter.
Rational parse_rational_literal(std::string_view text);

// Integer, p/q, or decimal/scientific literal converted to double.
double parse_real_literal(std::string_view text);

bool is_rational_literal(std::string_view text);

}  // namespace lam
