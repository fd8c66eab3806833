#include "btb/localfield.hpp"

#include <algorithm>
#include <cassert>

namespace btb {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 powu(u64 base, int n) {
    u64 r = 1;
    for (int i = 0; i < n; ++i) r *= base;
    return r;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128(a) * b) % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 m) {
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(m), nr = static_cast<long long>(a % m);
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw std::domain_error("invmod: not invertible");
    return static_cast<u64>(t < 0 ? t + static_cast<long long>(m) : t);
}

int int_valuation(u64& n, long long p) {
    int v = 0;
    while (n % static_cast<u64>(p) == 0) {
        n /= static_cast<u64>(p);
        ++v;
    }
    return v;
}

long long eps2(long long p) { return p == 2 ? 1 : 0; }  // nu(2) in Q_p

}  // namespace

int max_digits(long long prime) {
    int n = 0;
    u64 lim = (u64(1) << 63) - 1;
    u64 acc = 1;
    while (acc <= lim / static_cast<u64>(prime)) {
        acc *= static_cast<u64>(prime);
        ++n;
    }
    return n;
}

// ---------------------------------------------------------------------------
// PadicNumber
// ---------------------------------------------------------------------------

PadicNumber::PadicNumber(long long prime, long long value, int precision) {
    if (prime < 2) throw std::invalid_argument("PadicNumber: prime must be >= 2");
    p_ = prime;
    prec_ = std::min(std::max(precision, 1), max_digits(prime));
    pm_ = powu(static_cast<u64>(prime), prec_);
    if (value == 0) {
        kind_ = Kind::Zero;
        return;
    }
    bool neg = value < 0;
    u64 n = neg ? u64(-(value + 1)) + 1 : u64(value);
    v_ = int_valuation(n, prime);
    u_ = n % pm_;
    if (neg) u_ = pm_ - u_;
    kind_ = Kind::Unit;
}

PadicNumber PadicNumber::zero(long long prime, int precision) {
    return PadicNumber(prime, 0, precision);
}

PadicNumber PadicNumber::from_rational(long long prime, long long num, long long den,
                                       int precision) {
    if (den == 0) throw std::invalid_argument("from_rational: zero denominator");
    PadicNumber n(prime, num, precision);
    PadicNumber d(prime, den, precision);
    return n / d;
}

PadicNumber PadicNumber::from_unit(long long prime, long long valuation, std::uint64_t unit,
                                   int precision) {
    PadicNumber r(prime, 1, precision);
    if (unit % static_cast<u64>(prime) == 0)
        throw std::invalid_argument("from_unit: unit divisible by p");
    r.v_ = valuation;
    r.u_ = unit % r.pm_;
    return r;
}

PadicNumber PadicNumber::zero_mod(long long prime, long long exponent, int precision) {
    PadicNumber r(prime, 0, precision);
    r.kind_ = Kind::ZeroMod;
    r.v_ = exponent;
    return r;
}

void PadicNumber::check_same_field(const PadicNumber& o) const {
    if (p_ != o.p_) throw std::invalid_argument("PadicNumber: mixed primes");
}

Valuation PadicNumber::valuation() const {
    if (kind_ != Kind::Unit) return Valuation::infinity();
    return Valuation(v_);
}

long long PadicNumber::known_valuation() const {
    switch (kind_) {
        case Kind::Unit: return v_;
        case Kind::Zero: throw std::domain_error("known_valuation: exact zero");
        default:
            throw precision_exhausted("valuation unresolved: value is 0 mod p^" +
                                      std::to_string(v_));
    }
}

long long PadicNumber::zero_mod_exponent() const {
    if (kind_ != Kind::ZeroMod) throw std::domain_error("zero_mod_exponent: wrong kind");
    return v_;
}

std::uint64_t PadicNumber::unit_part() const {
    if (kind_ != Kind::Unit) throw std::domain_error("unit_part: zero-ish value");
    return u_;
}

std::uint64_t PadicNumber::unit_residue(int digits) const {
    if (digits > prec_)
        throw precision_exhausted("unit_residue: requested " + std::to_string(digits) +
                                  " digits, have " + std::to_string(prec_));
    return unit_part() % powu(static_cast<u64>(p_), digits);
}

PadicNumber PadicNumber::operator-() const {
    PadicNumber r = *this;
    if (kind_ == Kind::Unit) r.u_ = pm_ - u_;
    return r;
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
    check_same_field(o);
    if (kind_ == Kind::Zero) return o;
    if (o.kind_ == Kind::Zero) return *this;
    // available modulus exponent of the sum
    long long m1 = (kind_ == Kind::Unit) ? v_ + prec_ : v_;
    long long m2 = (o.kind_ == Kind::Unit) ? o.v_ + o.prec_ : o.v_;
    long long M = std::min(m1, m2);
    int prec = std::min(prec_, o.prec_);
    if (kind_ == Kind::ZeroMod && o.kind_ == Kind::ZeroMod)
        return zero_mod(p_, M, prec);
    if (kind_ == Kind::ZeroMod || o.kind_ == Kind::ZeroMod) {
        const PadicNumber& unit = (kind_ == Kind::Unit) ? *this : o;
        if (unit.v_ >= M) return zero_mod(p_, M, prec);
        long long n = M - unit.v_;  // digits of the unit that survive
        return from_unit(p_, unit.v_, unit.u_ % powu(static_cast<u64>(p_), int(n)),
                         static_cast<int>(n));
    }
    long long vmin = std::min(v_, o.v_);
    long long digits = M - vmin;
    if (digits > max_digits(p_)) {
        digits = max_digits(p_);
        M = vmin + digits;
    }
    u64 mod = powu(static_cast<u64>(p_), static_cast<int>(digits));
    auto term = [&](const PadicNumber& x) -> u128 {
        long long shift = x.v_ - vmin;
        if (shift >= digits) return 0;  // contributes nothing below level M
        u64 kept = x.u_ % powu(static_cast<u64>(p_), static_cast<int>(digits - shift));
        return u128(kept) * powu(static_cast<u64>(p_), static_cast<int>(shift));
    };
    u64 sum = static_cast<u64>((term(*this) + term(o)) % mod);
    if (sum == 0) return zero_mod(p_, M, std::min(prec_, o.prec_));
    int s = int_valuation(sum, p_);
    return from_unit(p_, vmin + s, sum, static_cast<int>(digits - s));
}

PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return *this + (-o); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
    check_same_field(o);
    if (kind_ == Kind::Zero || o.kind_ == Kind::Zero) return zero(p_, std::min(prec_, o.prec_));
    if (kind_ == Kind::ZeroMod || o.kind_ == Kind::ZeroMod) {
        // v_ is a lower bound on the valuation in both the Unit and ZeroMod states
        return zero_mod(p_, v_ + o.v_, std::min(prec_, o.prec_));
    }
    int prec = std::min(prec_, o.prec_);
    u64 mod = powu(static_cast<u64>(p_), prec);
    return from_unit(p_, v_ + o.v_, mulmod(u_ % mod, o.u_ % mod, mod), prec);
}

PadicNumber PadicNumber::inverse() const {
    if (kind_ == Kind::Zero) throw std::domain_error("inverse of zero");
    if (kind_ == Kind::ZeroMod)
        throw precision_exhausted("inverse of a value indistinguishable from zero");
    return from_unit(p_, -v_, invmod(u_, pm_), prec_);
}

PadicNumber PadicNumber::operator/(const PadicNumber& o) const { return *this * o.inverse(); }

PadicNumber PadicNumber::shifted(long long k) const {
    PadicNumber r = *this;
    if (kind_ != Kind::Zero) r.v_ += k;
    return r;
}

bool PadicNumber::operator==(const PadicNumber& o) const {
    check_same_field(o);
    return (*this - o).is_zero_like();
}

bool PadicNumber::val_at_least(long long m) const {
    switch (kind_) {
        case Kind::Zero: return true;
        case Kind::Unit: return v_ >= m;
        default:
            if (v_ >= m) return true;
            throw precision_exhausted("val_at_least: value known 0 mod p^" + std::to_string(v_) +
                                      " only, need level " + std::to_string(m));
    }
}

PadicNumber PadicNumber::truncated(long long m) const {
    if (val_at_least(m)) return zero(p_, prec_);
    long long digits = m - v_;  // >= 1, and <= prec_ by val_at_least above
    if (digits > prec_)
        throw precision_exhausted("truncated: not enough digits");
    u64 r = u_ % powu(static_cast<u64>(p_), static_cast<int>(digits));
    return from_unit(p_, v_, r, max_digits(p_));
}

std::pair<long long, long long> PadicNumber::truncated_rational(long long m) const {
    PadicNumber t = truncated(m);
    if (t.is_exact_zero()) return {0, 1};
    long long num = static_cast<long long>(t.u_);
    long long v = t.v_;
    if (v >= 0) {
        for (long long i = 0; i < v; ++i) num *= p_;
        return {num, 1};
    }
    long long den = 1;
    for (long long i = 0; i < -v; ++i) den *= p_;
    return {num, den};
}

std::string PadicNumber::str() const {
    switch (kind_) {
        case Kind::Zero: return "0";
        case Kind::ZeroMod: return "O(" + std::to_string(p_) + "^" + std::to_string(v_) + ")";
        default:
            return std::to_string(u_) + "*" + std::to_string(p_) + "^" + std::to_string(v_) +
                   " + O(" + std::to_string(p_) + "^" + std::to_string(v_ + prec_) + ")";
    }
}

Valuation valuation(const PadicNumber& x) { return x.valuation(); }

// ---------------------------------------------------------------------------
// Quadratic theory: defect, square roots, Hilbert symbol, square classes
// ---------------------------------------------------------------------------

namespace {

// Digit-by-digit minimization of nu(u - b^2) for a unit u.  Returns the defect
// exponent (infinity for squares) together with the best approximation b.
std::pair<Valuation, PadicNumber> unit_defect(const PadicNumber& u) {
    long long p = u.prime();
    long long eps = eps2(p);
    PadicNumber b(p, 1, u.precision());
    while (true) {
        PadicNumber d = u - b * b;
        if (d.is_exact_zero()) return {Valuation::infinity(), b};
        if (d.is_zero_to_precision()) {
            if (d.zero_mod_exponent() >= 2 * eps + 1) return {Valuation::infinity(), b};
            throw precision_exhausted("quadratic_defect: minimization unresolved at precision");
        }
        long long e = d.known_valuation();
        if (e >= 2 * eps + 1) return {Valuation::infinity(), b};
        if (e % 2 != 0) return {Valuation(e), b};
        bool improved = false;
        for (long long c = 1; c < p && !improved; ++c) {
            PadicNumber b2 = b + PadicNumber(p, c).shifted(e / 2);
            PadicNumber d2 = u - b2 * b2;
            if (d2.is_zero_like() || d2.known_valuation() > e) {
                b = b2;
                improved = true;
            }
        }
        if (!improved) return {Valuation(e), b};
    }
}

std::pair<Valuation, PadicNumber> defect_and_minimizer(const PadicNumber& x) {
    if (x.is_exact_zero()) throw std::invalid_argument("quadratic_defect: zero input");
    long long v = x.known_valuation();
    long long p = x.prime();
    if (v % 2 != 0) {
        // odd valuation: nu(delta^2 - x) <= nu(x), attained by delta = 0
        return {Valuation(v), PadicNumber::zero(p, x.precision())};
    }
    PadicNumber unit = x.shifted(-v);
    auto [d, b] = unit_defect(unit);
    PadicNumber delta = b.shifted(v / 2);
    if (d.is_infinite()) return {Valuation::infinity(), delta};
    return {Valuation(v + d.value()), delta};
}

int legendre(u64 a, long long p) {
    u64 r = powmod(a % static_cast<u64>(p), static_cast<u64>((p - 1) / 2), static_cast<u64>(p));
    return r == 1 ? 1 : -1;
}

}  // namespace

Valuation quadratic_defect(const PadicNumber& x) { return defect_and_minimizer(x).first; }

PadicNumber defect_minimizer(const PadicNumber& x) { return defect_and_minimizer(x).second; }

std::optional<PadicNumber> sqrt_if_square(const PadicNumber& x) {
    if (x.is_exact_zero()) throw std::invalid_argument("sqrt_if_square: zero input");
    long long v = x.known_valuation();
    if (v % 2 != 0) return std::nullopt;
    auto [d, b] = defect_and_minimizer(x);
    if (!d.is_infinite()) return std::nullopt;
    // Newton-lift b: at entry nu(x - b^2) >= 2 nu(2) + 1 + v, which guarantees convergence.
    PadicNumber r = b;
    PadicNumber half = PadicNumber(x.prime(), 1, x.precision()) /
                       PadicNumber(x.prime(), 2, x.precision());
    for (int it = 0; it < 64; ++it) {
        PadicNumber f = r * r - x;
        if (f.is_zero_like()) break;
        r = r - f * half / r;
    }
    return r;
}

int hilbert_symbol(const PadicNumber& a, const PadicNumber& b) {
    if (a.is_zero_like() || b.is_zero_like())
        throw std::invalid_argument("hilbert_symbol: zero argument");
    long long p = a.prime();
    long long al = a.known_valuation(), be = b.known_valuation();
    if (p != 2) {
        u64 u = a.shifted(-al).unit_residue(1);
        u64 v = b.shifted(-be).unit_residue(1);
        int sign = 1;
        if ((al % 2) && (be % 2) && legendre(static_cast<u64>(p) - 1, p) == -1) sign = -sign;
        if (be % 2 && legendre(u, p) == -1) sign = -sign;
        if (al % 2 && legendre(v, p) == -1) sign = -sign;
        return sign;
    }
    u64 u = a.shifted(-al).unit_residue(3);  // mod 8
    u64 v = b.shifted(-be).unit_residue(3);
    auto eps = [](u64 x) { return (x - 1) / 2 % 2; };
    auto omega = [](u64 x) { return (x * x - 1) / 8 % 2; };
    u64 expo = eps(u) * eps(v) + static_cast<u64>(al % 2) * omega(v) +
               static_cast<u64>(be % 2) * omega(u);
    return expo % 2 == 0 ? 1 : -1;
}

std::string to_string(SquareClassTag tag) {
    switch (tag) {
        case SquareClassTag::One: return "one";
        case SquareClassTag::Delta: return "delta";
        case SquareClassTag::RamifiedUnit: return "ramified_unit";
        default: return "uniformizer";
    }
}

std::vector<SquareClass> square_class_reps(long long prime, int precision) {
    std::vector<SquareClass> out;
    auto mk = [&](SquareClassTag tag, long long lift, Valuation defect) {
        SquareClass c{tag, PadicNumber(prime, lift, precision), defect, 0, lift};
        if (tag == SquareClassTag::RamifiedUnit) c.s = static_cast<int>((defect.value() - 1) / 2);
        return c;
    };
    std::vector<long long> unit_lifts;  // {1, Delta, ramified units...}
    if (prime == 2) {
        unit_lifts = {1, 5, 3, 7};
        out.push_back(mk(SquareClassTag::One, 1, Valuation::infinity()));
        out.push_back(mk(SquareClassTag::Delta, 5, Valuation(2)));
        out.push_back(mk(SquareClassTag::RamifiedUnit, 3, Valuation(1)));
        out.push_back(mk(SquareClassTag::RamifiedUnit, 7, Valuation(1)));
    } else {
        long long delta = 2;
        while (legendre(static_cast<u64>(delta), prime) == 1) ++delta;
        unit_lifts = {1, delta};
        out.push_back(mk(SquareClassTag::One, 1, Valuation::infinity()));
        out.push_back(mk(SquareClassTag::Delta, delta, Valuation(0)));
    }
    for (long long u : unit_lifts)
        out.push_back(mk(SquareClassTag::Uniformizer, prime * u, Valuation(1)));
    return out;
}

std::pair<SquareClass, PadicNumber> normalize_to_class_rep(const PadicNumber& x) {
    if (x.is_zero_like()) throw std::invalid_argument("normalize_to_class_rep: zero input");
    auto reps = square_class_reps(x.prime(), x.precision());
    for (const auto& cls : reps) {
        auto root = sqrt_if_square(cls.rep / x);
        if (root) return {cls, *root};
    }
    throw std::logic_error("normalize_to_class_rep: no class matched");  // unreachable
}

// ---------------------------------------------------------------------------
// QuadExtElement
// ---------------------------------------------------------------------------

QuadExtElement::QuadExtElement(PadicNumber x, PadicNumber y, PadicNumber alpha)
    : x_(std::move(x)), y_(std::move(y)), alpha_(std::move(alpha)) {
    if (x_.prime() != y_.prime() || x_.prime() != alpha_.prime())
        throw std::invalid_argument("QuadExtElement: mixed primes");
}

QuadExtElement QuadExtElement::from_base(const PadicNumber& x, const PadicNumber& alpha) {
    return QuadExtElement(x, PadicNumber::zero(x.prime(), x.precision()), alpha);
}

QuadExtElement QuadExtElement::conj() const { return QuadExtElement(x_, -y_, alpha_); }

PadicNumber QuadExtElement::norm() const { return x_ * x_ - alpha_ * y_ * y_; }

QuadExtElement QuadExtElement::operator-() const { return QuadExtElement(-x_, -y_, alpha_); }

QuadExtElement QuadExtElement::operator+(const QuadExtElement& o) const {
    return QuadExtElement(x_ + o.x_, y_ + o.y_, alpha_);
}

QuadExtElement QuadExtElement::operator-(const QuadExtElement& o) const {
    return QuadExtElement(x_ - o.x_, y_ - o.y_, alpha_);
}

QuadExtElement QuadExtElement::operator*(const QuadExtElement& o) const {
    return QuadExtElement(x_ * o.x_ + alpha_ * y_ * o.y_, x_ * o.y_ + y_ * o.x_, alpha_);
}

QuadExtElement QuadExtElement::inverse() const {
    PadicNumber n = norm();
    return QuadExtElement(x_ / n, -y_ / n, alpha_);
}

QuadExtElement QuadExtElement::operator/(const QuadExtElement& o) const {
    return *this * o.inverse();
}

bool QuadExtElement::operator==(const QuadExtElement& o) const {
    return x_ == o.x_ && y_ == o.y_;
}

bool QuadExtElement::val_at_least(const Rational& m) const {
    // v_L(w) >= m  iff  nu(norm) >= 2m; norm cancellation is bounded by the
    // defect of alpha, so this resolves whenever the inputs carry spare digits.
    Rational two_m = m * 2;
    if (two_m.denominator() != 1)
        throw std::invalid_argument("val_at_least: level must lie in (1/2)Z");
    return norm().val_at_least(two_m.numerator());
}

std::string QuadExtElement::str() const {
    return "(" + x_.str() + ") + (" + y_.str() + ")*sqrt(" + alpha_.str() + ")";
}

Rational ext_valuation(const QuadExtElement& w) {
    PadicNumber n = w.norm();
    if (n.is_exact_zero()) throw std::invalid_argument("ext_valuation: zero element");
    return Rational(n.known_valuation(), 2);
}

}  // namespace btb
