#include <doctest.h>

#include <random>

#include "btb/localfield.hpp"
#include "helpers.hpp"

using namespace btb;
using btb::testing::defect_oracle;
using btb::testing::hilbert_oracle;
using btb::testing::random_value;

TEST_CASE("valuation basics") {
    CHECK(PadicNumber(5, 50).valuation().value() == 2);
    CHECK(PadicNumber(2, 1).valuation().value() == 0);
    CHECK(PadicNumber(3, 0).valuation().is_infinite());
    std::mt19937_64 rng(11);
    for (long long p : {2, 3, 5}) {
        BaseField k(p);
        for (int it = 0; it < 100; ++it) {
            PadicNumber x = random_value(rng, k), y = random_value(rng, k);
            CHECK((x * y).valuation().value() ==
                  x.valuation().value() + y.valuation().value());
        }
    }
}

TEST_CASE("zero to precision is distinct from exact zero") {
    BaseField k(5);
    PadicNumber x = k.from_int(7);
    PadicNumber d = x - x;
    CHECK(d.is_zero_to_precision());
    CHECK(!d.is_exact_zero());
    CHECK(d.valuation().is_infinite());
    CHECK_THROWS_AS(quadratic_defect(d), precision_exhausted);
    CHECK(PadicNumber::zero(5).is_exact_zero());
}

TEST_CASE("precision laws") {
    BaseField k(5);
    PadicNumber a = k.from_int(7), b = k.from_int(12).shifted(2);
    CHECK((a * b).precision() == std::min(a.precision(), b.precision()));
    CHECK(a.inverse().precision() == a.precision());
    // additions report min(v1+N1, v2+N2) - v digits
    PadicNumber s = a + b;
    CHECK(s.precision() == std::min(a.precision() + 0, b.precision() + 2) - 0);
    // catastrophic cancellation: 1 + (p^3 - 1) has valuation 3, three digits fewer
    PadicNumber c = k.from_int(1) + k.from_int(124);
    CHECK(c.valuation().value() == 3);
    CHECK(c.precision() == k.precision() - 3);
}

TEST_CASE("quadratic defect of the class representatives") {
    // qdef(1) = {0}, qdef(Delta) = (4), qdef(pi_n) = (pi), qdef(u_n) = (pi^{2s+1})
    CHECK(quadratic_defect(PadicNumber(5, 1)).is_infinite());
    CHECK(quadratic_defect(PadicNumber(5, 5)).value() == 1);
    CHECK(quadratic_defect(PadicNumber(2, 5)).value() == 2);
    CHECK(quadratic_defect(PadicNumber(2, 3)).value() == 1);
    CHECK(quadratic_defect(PadicNumber(2, 7)).value() == 1);
    CHECK(quadratic_defect(PadicNumber(3, 2)).value() == 0);
}

TEST_CASE("quadratic defect matches the brute-force oracle") {
    for (long long p : {2, 3, 5}) {
        int digits = p == 2 ? 8 : 5;
        for (long long x = 1; x <= 40; ++x) {
            Valuation got = quadratic_defect(PadicNumber(p, x));
            Valuation want = defect_oracle(x, p, digits);
            INFO("p=", p, " x=", x);
            CHECK(got == want);
        }
    }
}

TEST_CASE("square class representatives") {
    auto reps5 = square_class_reps(5);
    REQUIRE(reps5.size() == 4);
    CHECK(reps5[0].lift == 1);
    CHECK(reps5[1].lift == 2);  // Delta = 2 for p = 5
    CHECK(reps5[2].lift == 5);
    CHECK(reps5[3].lift == 10);

    auto reps3 = square_class_reps(3);
    CHECK(reps3.size() == 4);

    auto reps2 = square_class_reps(2);
    REQUIRE(reps2.size() == 8);  // 2N + 4 with N = 2
    CHECK(reps2[1].lift == 5);   // Delta = 5 for p = 2
    int ram = 0;
    for (const auto& c : reps2)
        if (c.tag == SquareClassTag::RamifiedUnit) {
            ++ram;
            CHECK(c.defect.value() == 2 * c.s + 1);
            CHECK(c.s == 0);  // 0 <= s < nu(2) = 1
        }
    CHECK(ram == 2);

    // pairwise inequivalent modulo squares, and exhaustive
    for (long long p : {2, 3, 5}) {
        auto reps = square_class_reps(p);
        for (size_t i = 0; i < reps.size(); ++i)
            for (size_t j = 0; j < reps.size(); ++j) {
                bool same = quadratic_defect(reps[i].rep / reps[j].rep).is_infinite();
                CHECK(same == (i == j));
            }
        std::mt19937_64 rng(17);
        BaseField k(p);
        for (int it = 0; it < 50; ++it) {
            PadicNumber x = random_value(rng, k);
            int hits = 0;
            for (const auto& c : reps)
                if (quadratic_defect(c.rep / x).is_infinite()) ++hits;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("defect classification table per class") {
    for (long long p : {2, 3, 5}) {
        long long nu2 = p == 2 ? 1 : 0;
        for (const auto& c : square_class_reps(p)) {
            switch (c.tag) {
                case SquareClassTag::One: CHECK(c.defect.is_infinite()); break;
                case SquareClassTag::Delta: CHECK(c.defect.value() == 2 * nu2); break;
                case SquareClassTag::Uniformizer: CHECK(c.defect.value() == 1); break;
                case SquareClassTag::RamifiedUnit:
                    CHECK(c.defect.value() % 2 == 1);
                    CHECK(c.defect.value() < 2 * nu2 + 1);
                    break;
            }
        }
    }
}

TEST_CASE("square roots exist exactly for infinite defect") {
    CHECK((*sqrt_if_square(PadicNumber(5, 4)) * *sqrt_if_square(PadicNumber(5, 4))) ==
          PadicNumber(5, 4));
    CHECK(!sqrt_if_square(PadicNumber(5, 2)));
    CHECK(sqrt_if_square(PadicNumber(5, 6)).has_value());  // 6 = 1 mod 5 lifts
    std::mt19937_64 rng(23);
    for (long long p : {2, 3, 5}) {
        BaseField k(p);
        for (int it = 0; it < 500; ++it) {
            PadicNumber x = random_value(rng, k);
            auto r = sqrt_if_square(x);
            CHECK(r.has_value() == quadratic_defect(x).is_infinite());
            if (r) CHECK(*r * *r == x);
        }
    }
}

TEST_CASE("hilbert symbol examples and oracle") {
    BaseField k5(5);
    CHECK(hilbert_symbol(k5.from_int(1), k5.from_int(7)) == 1);
    CHECK(hilbert_symbol(k5.from_int(5), k5.from_int(5)) == 1);
    CHECK(hilbert_symbol(k5.from_int(2), k5.from_int(5)) == -1);
    // solution-search oracle over all pairs of class representatives
    for (long long p : {2, 3, 5}) {
        BaseField k(p);
        auto reps = square_class_reps(p);
        for (const auto& ca : reps)
            for (const auto& cb : reps) {
                INFO("p=", p, " a=", ca.lift, " b=", cb.lift);
                CHECK(hilbert_symbol(ca.rep, cb.rep) == hilbert_oracle(ca.lift, cb.lift, p));
            }
    }
}

TEST_CASE("hilbert symbol is symmetric and bimultiplicative") {
    std::mt19937_64 rng(31);
    for (long long p : {2, 3, 5}) {
        BaseField k(p);
        for (int it = 0; it < 200; ++it) {
            PadicNumber a = random_value(rng, k), b = random_value(rng, k),
                        c = random_value(rng, k);
            CHECK(hilbert_symbol(a, b) == hilbert_symbol(b, a));
            CHECK(hilbert_symbol(a, b) * hilbert_symbol(a, c) == hilbert_symbol(a, b * c));
            CHECK(hilbert_symbol(a, -a) == 1);
        }
    }
}

TEST_CASE("extension valuation") {
    BaseField k5(5);
    PadicNumber five = k5.from_int(5), two = k5.from_int(2);
    QuadExtElement r5(k5.zero(), k5.one(), five);  // sqrt(5)
    CHECK(ext_valuation(r5) == Rational(1, 2));
    QuadExtElement w(k5.one(), k5.one(), five);  // 1 + sqrt(5)
    CHECK(ext_valuation(w) == Rational(0));
    QuadExtElement u(two, k5.one(), two);  // 2 + sqrt(2)
    CHECK(ext_valuation(u) == Rational(0));
    // multiplicativity
    std::mt19937_64 rng(37);
    for (int it = 0; it < 100; ++it) {
        QuadExtElement x(random_value(rng, k5), random_value(rng, k5), two);
        QuadExtElement y(random_value(rng, k5), random_value(rng, k5), two);
        CHECK(ext_valuation(x * y) == ext_valuation(x) + ext_valuation(y));
    }
}

TEST_CASE("normalization to class representatives") {
    for (long long p : {2, 3, 5}) {
        BaseField k(p);
        std::mt19937_64 rng(41);
        for (int it = 0; it < 60; ++it) {
            PadicNumber x = random_value(rng, k);
            auto [cls, c] = normalize_to_class_rep(x);
            CHECK(c * c * x == cls.rep);
        }
    }
}
