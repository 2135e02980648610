#include "lam/scalar.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <system_error>

#include "lam/errors.hpp"

namespace lam {

namespace {

bool is_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::string_view strip_sign(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return s;
}

}  // namespace

std::string to_string(const Rational& x) { return x.str(); }

std::string to_string(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) return std::to_string(x);
    return std::string(buf, end);
}

bool is_rational_literal(std::string_view text) {
    std::string_view body = strip_sign(text);
    auto slash = body.find('/');
    if (slash == std::string_view::npos) return is_digits(body);
    return is_digits(body.substr(0, slash)) && is_digits(body.substr(slash + 1));
}

Rational parse_rational_literal(std::string_view text) {
    if (!is_rational_literal(text)) {
        throw InvalidParameter("not a rational literal (expected integer or p/q): '" +
                               std::string(text) + "'");
    }
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw InvalidParameter("zero denominator in '" + std::string(text) + "'");
        BigInt num(s.substr(0, slash));
        return Rational(num, den);
    }
    return Rational(BigInt(s));
}

double parse_real_literal(std::string_view text) {
    if (is_rational_literal(text)) {
        return parse_rational_literal(text).convert_to<double>();
    }
    std::string s(text);
    char* end = nullptr;
    double value = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(value)) {
        throw InvalidParameter("not a numeric literal: '" + s + "'");
    }
    return value;
}

}  // namespace lam
