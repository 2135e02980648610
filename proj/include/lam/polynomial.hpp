#pragma once

// Root finding for the low-degree polynomials that arise in field
// identification. Coefficients are stored in ascending order: c[0] + c[1] k + ...

#include <complex>
#include <span>
#include <vector>

#include "lam/scalar.hpp"

namespace lam {

// Eigenvalues of the companion matrix. Leading coefficients with
// |c| <= 1e-14 * max|c| are dropped first; an all-zero input yields no roots.
std::vector<std::complex<double>> companion_roots(std::span<const double> ascending);

struct ExactRoots {
    std::vector<Rational> rational;              // distinct, ascending
    std::vector<std::complex<double>> inexact;   // irrational or complex, approximated
};

// Exact root extraction for polynomials of degree <= 3 with rational
// coefficients. A rational root of a cubic is located from a numerical
// approximation by continued-fraction convergents and confirmed by exact
// evaluation; the remaining quadratic is solved exactly. Roots irrational
// over Q are returned only as approximations.
ExactRoots rational_roots(std::span<const Rational> ascending);

template <Scalar T>
T evaluate_polynomial(std::span<const T> ascending, const T& k) {
    T acc(0);
    for (std::size_t i = ascending.size(); i-- > 0;) acc = acc * k + ascending[i];
    return acc;
}

}  // namespace lam
