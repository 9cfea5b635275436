#pragma once

#include <boost/functional/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace gradarg {

// All weights, degrees, and targets are exact rationals. cpp_rational keeps
// values canonical (gcd = 1, denominator > 0) through every operation, so
// equality tests decide the inference problems exactly.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

inline BigInt pow10(unsigned k) {
    BigInt r = 1;
    while (k--) r *= 10;
    return r;
}

inline BigInt floor_rat(const Rational& q) {
    BigInt n = num(q), d = den(q);
    BigInt t = n / d;  // truncates toward zero
    if (n < 0 && t * d != n) --t;
    return t;
}

inline BigInt ceil_rat(const Rational& q) { return -floor_rat(-q); }

/// Nearest multiple of 1/target_den, ties rounded up.
inline Rational round_to_denominator(const Rational& q, const BigInt& target_den) {
    return Rational(floor_rat(q * target_den + Rational(1, 2)), target_den);
}

inline bool in_unit_interval(const Rational& q) { return q >= 0 && q <= 1; }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// "p" when the denominator is 1, otherwise "p/q".
inline std::string to_string(const Rational& q) {
    std::string s = num(q).str();
    if (den(q) != 1) s += "/" + den(q).str();
    return s;
}

/// Fixed-point decimal rendering rounded half-up to `digits` places.
inline std::string decimal_string(const Rational& q, unsigned digits) {
    const bool neg = q < 0;
    const BigInt scale = pow10(digits);
    BigInt scaled = floor_rat((neg ? -q : q) * scale + Rational(1, 2));
    std::string s = BigInt(scaled / scale).str();
    if (digits > 0) {
        std::string frac = BigInt(scaled % scale).str();
        s += "." + std::string(digits - frac.size(), '0') + frac;
    }
    return neg && scaled != 0 ? "-" + s : s;
}

/// Accepts "p/q", integers, and decimals with an optional exponent
/// ("0.7", "-3", "9/10", "5e-4"). Decimal input converts exactly.
inline std::optional<Rational> parse_rational(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    auto read_digits = [&](std::string& out) {
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') out += text[pos++];
        return pos > start;
    };

    std::string int_part;
    if (!read_digits(int_part)) return std::nullopt;

    Rational value;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        std::string den_part;
        if (!read_digits(den_part) || pos != text.size()) return std::nullopt;
        BigInt d(den_part);
        if (d == 0) return std::nullopt;
        value = Rational(BigInt(int_part), d);
    } else {
        std::string frac_part;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            if (!read_digits(frac_part)) return std::nullopt;
        }
        const BigInt scale = pow10(static_cast<unsigned>(frac_part.size()));
        BigInt n = BigInt(int_part) * scale;
        if (!frac_part.empty()) n += BigInt(frac_part);
        value = Rational(n, scale);
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            ++pos;
            bool exp_negative = false;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
                exp_negative = text[pos] == '-';
                ++pos;
            }
            std::string exp_part;
            if (!read_digits(exp_part) || exp_part.size() > 5) return std::nullopt;
            const BigInt p = pow10(static_cast<unsigned>(std::stoul(exp_part)));
            if (exp_negative)
                value /= p;
            else
                value *= p;
        }
        if (pos != text.size()) return std::nullopt;
    }
    return negative ? Rational(-value) : value;
}

struct RationalHash {
    std::size_t operator()(const Rational& q) const { return boost::hash<Rational>()(q); }
};

}  // namespace gradarg
