#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>

namespace btb {

using Rational = boost::rational<long long>;

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

inline std::string rat_str(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// min with nullopt acting as +infinity
inline Rational min_with_inf(const Rational& a, const std::optional<Rational>& b) {
    if (!b) return a;
    return a < *b ? a : *b;
}

inline long long rat_floor(const Rational& r) {
    long long q = r.numerator() / r.denominator();
    if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
    return q;
}

inline long long rat_ceil(const Rational& r) { return -rat_floor(-r); }

}  // namespace btb
