#pragma once

#include <random>
#include <vector>

#include "btb/bttree.hpp"
#include "btb/localfield.hpp"

namespace btb::testing {

// A random nonzero element with valuation in [-vspan, vspan] and a couple of
// significant digits; exact by construction.
inline PadicNumber random_value(std::mt19937_64& rng, const BaseField& k, int vspan = 2) {
    long long p = k.prime();
    long long v = static_cast<long long>(rng() % (2 * vspan + 1)) - vspan;
    long long u = 1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(p - 1));
    long long d1 = static_cast<long long>(rng() % static_cast<std::uint64_t>(p));
    long long d2 = static_cast<long long>(rng() % static_cast<std::uint64_t>(p));
    return k.from_int(u + d1 * p + d2 * p * p).shifted(v);
}

// Brute-force quadratic defect of an integer x (nu(x) >= 0): minimize
// nu(x - b^2) over b mod p^digits, capping unresolved values at `digits`.
inline Valuation defect_oracle(long long x, long long p, int digits) {
    long long mod = 1;
    for (int i = 0; i < digits; ++i) mod *= p;
    long long best = -1;
    for (long long b = 0; b < mod; ++b) {
        long long d = (x - b * b) % mod;
        if (d < 0) d += mod;
        long long v = 0;
        if (d == 0) {
            v = digits;
        } else {
            while (d % p == 0) {
                d /= p;
                ++v;
            }
        }
        if (v > best) best = v;
    }
    if (best >= digits) return Valuation::infinity();  // square to the tested depth
    return Valuation(best);
}

// Solution-search oracle for the Hilbert symbol: looks for a primitive triple
// with a x^2 + b y^2 = z^2 (mod p^(2t+1)) that Hensel-lifts (some partial
// derivative of valuation <= t).  Exact for integral a, b with nu <= 1.
inline int hilbert_oracle(long long a, long long b, long long p) {
    auto vp = [&](long long n) {
        long long v = 0;
        while (n != 0 && n % p == 0) {
            n /= p;
            ++v;
        }
        return n == 0 ? 1000 : v;
    };
    long long nu2 = p == 2 ? 1 : 0;
    long long t = nu2 + std::max({vp(a), vp(b), 0LL});
    long long mod = 1;
    for (long long i = 0; i < 2 * t + 1; ++i) mod *= p;
    long long am = ((a % mod) + mod) % mod, bm = ((b % mod) + mod) % mod;
    for (long long x = 0; x < mod; ++x)
        for (long long y = 0; y < mod; ++y)
            for (long long z = 0; z < mod; ++z) {
                if (x % p == 0 && y % p == 0 && z % p == 0) continue;
                long long q =
                    (am * x % mod * x % mod + bm * y % mod * y % mod + mod - z * z % mod) % mod;
                if (q != 0) continue;
                long long dv = std::min({vp(2 * a * x), vp(2 * b * y), vp(2 * z)});
                if (dv <= t) return 1;
            }
    return -1;
}

}  // namespace btb::testing
