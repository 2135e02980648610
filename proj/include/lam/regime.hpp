#pragma once

#include <string>
#include <vector>

#include "lam/choice.hpp"

namespace lam {

// Ordered by precedence: when several labels apply the earliest wins.
enum class Regime { aligned, compliant, autonomous, adversarial, misaligned };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::aligned: return "aligned";
        case Regime::compliant: return "compliant";
        case Regime::autonomous: return "autonomous";
        case Regime::adversarial: return "adversarial";
        case Regime::misaligned: return "misaligned";
    }
    return "?";
}

template <Scalar T>
struct RegimeReport {
    Regime regime = Regime::misaligned;
    std::vector<T> ratio;  // r(a) = u(a) / v(a), anchor-normalised
    T tol{};
};

// aligned      v = lambda * u
// compliant    alpha = 1
// autonomous   alpha = 0
// adversarial  v = lambda / u
// misaligned   otherwise
// All comparisons are made on anchor-normalised utilities within tol.
template <Scalar T>
RegimeReport<T> classify_regime(const LamParams<T>& params, const T& tol) {
    const auto& u = params.u();
    const auto& v = params.v();
    RegimeReport<T> report;
    report.tol = tol;
    report.ratio.reserve(u.size());
    bool proportional = true;
    bool reciprocal = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        report.ratio.push_back(u[i] / v[i]);
        if (!near_equal(v[i], u[i], tol)) proportional = false;
        if (!near_equal(T(u[i] * v[i]), T(1), tol)) reciprocal = false;
    }
    if (proportional) {
        report.regime = Regime::aligned;
    } else if (params.alpha() >= T(1) - tol) {
        report.regime = Regime::compliant;
    } else if (params.alpha() <= tol) {
        report.regime = Regime::autonomous;
    } else if (reciprocal) {
        report.regime = Regime::adversarial;
    } else {
        report.regime = Regime::misaligned;
    }
    return report;
}

}  // namespace lam
