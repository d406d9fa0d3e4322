#pragma once

#include <cstdint>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

namespace homgrowth {

// Exact fraction, reduced, den > 0. Used for normalized Betti numbers and
// the spectral-sequence mass bookkeeping; magnitudes stay far below 2^63.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n) : num(n), den(1) {}
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    Fraction operator+(const Fraction& o) const {
        std::int64_t g = std::gcd(den, o.den);
        return Fraction(num * (o.den / g) + o.num * (den / g), (den / g) * o.den);
    }
    Fraction operator-(const Fraction& o) const {
        return *this + Fraction(-o.num, o.den);
    }
    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Fraction& o) const { return !(*this == o); }
    bool operator<(const Fraction& o) const {
        return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
    }
    bool operator<=(const Fraction& o) const { return !(o < *this); }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    // "25/16" (integers render without the denominator)
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    // "25/16=1.562500" — exact value first, decimal for humans
    std::string str_with_decimal() const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", value());
        return str() + "=" + buf;
    }
};

}  // namespace homgrowth
