#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "btb/rational.hpp"

namespace btb {

inline constexpr int kDefaultPrecision = 24;

/// Raised when a result cannot be resolved within the available significant
/// digits (e.g. the valuation of a difference that cancels to precision).
class precision_exhausted : public std::runtime_error {
public:
    explicit precision_exhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for pairs (alpha, beta, lambda) with lambda^2 = alpha*beta, where the
/// representation theory degenerates and the usual branch formulas do not apply.
class degenerate_error : public std::domain_error {
public:
    explicit degenerate_error(const std::string& what) : std::domain_error(what) {}
};

/// An integer valuation extended by +infinity (the valuation of zero).
class Valuation {
public:
    static Valuation infinity() { return Valuation(true, 0); }
    Valuation(long long v) : infinite_(false), v_(v) {}  // NOLINT(implicit)

    bool is_infinite() const { return infinite_; }
    long long value() const {
        if (infinite_) throw std::domain_error("Valuation: infinite value");
        return v_;
    }

    bool operator==(const Valuation& o) const {
        return infinite_ == o.infinite_ && (infinite_ || v_ == o.v_);
    }
    bool operator!=(const Valuation& o) const { return !(*this == o); }
    bool operator<(const Valuation& o) const {
        if (infinite_) return false;
        if (o.infinite_) return true;
        return v_ < o.v_;
    }
    bool operator>=(const Valuation& o) const { return !(*this < o); }

    friend std::ostream& operator<<(std::ostream& os, const Valuation& v) {
        if (v.infinite_) return os << "infinity";
        return os << v.v_;
    }

private:
    Valuation(bool inf, long long v) : infinite_(inf), v_(v) {}
    bool infinite_;
    long long v_;
};

/**
 * Truncated element of k = Q_p.
 *
 * A nonzero value is stored as p^v * u with u a unit modulo p^N, where N is
 * the number of significant base-p digits (so the value is known modulo
 * p^{v+N}).  Two zero-ish states are kept apart:
 *   - the exact zero (constructed from the integer 0), and
 *   - "zero to precision": a computed result all of whose digits cancelled,
 *     known only to satisfy x = 0 (mod p^M).
 * Arithmetic never claims more digits than its inputs justify; precision is
 * non-increasing under +, * and inversion (add: N = min(v1+N1, v2+N2) - v;
 * mul: N = min(N1, N2); inverse: N unchanged).
 *
 * The unit part lives in a 64-bit word, so the precision is clamped to the
 * largest N with p^N < 2^63 (>= 17 digits for p <= 13, 27 for p = 5).
 */
class PadicNumber {
public:
    PadicNumber(long long prime, long long value, int precision = kDefaultPrecision);

    static PadicNumber zero(long long prime, int precision = kDefaultPrecision);
    static PadicNumber from_rational(long long prime, long long num, long long den,
                                     int precision = kDefaultPrecision);
    static PadicNumber from_unit(long long prime, long long valuation, std::uint64_t unit,
                                 int precision);
    static PadicNumber zero_mod(long long prime, long long exponent, int precision);

    long long prime() const { return p_; }
    int precision() const { return prec_; }

    bool is_exact_zero() const { return kind_ == Kind::Zero; }
    bool is_zero_to_precision() const { return kind_ == Kind::ZeroMod; }
    bool is_zero_like() const { return kind_ != Kind::Unit; }

    /// Valuation, with +infinity for both zero states.
    Valuation valuation() const;

    /// Valuation as a plain integer; throws precision_exhausted on a
    /// zero-to-precision value and domain_error on the exact zero.
    long long known_valuation() const;

    /// For a zero-to-precision value: the exponent M with x = 0 (mod p^M).
    long long zero_mod_exponent() const;

    std::uint64_t unit_part() const;
    /// Unit part modulo p^digits (requires digits <= precision).
    std::uint64_t unit_residue(int digits) const;

    PadicNumber operator-() const;
    PadicNumber operator+(const PadicNumber& o) const;
    PadicNumber operator-(const PadicNumber& o) const;
    PadicNumber operator*(const PadicNumber& o) const;
    PadicNumber operator/(const PadicNumber& o) const;
    PadicNumber inverse() const;
    /// Multiply by p^k.
    PadicNumber shifted(long long k) const;

    /// True when the difference is indistinguishable from zero at the shared
    /// precision (exact equality is not observable in truncated arithmetic).
    bool operator==(const PadicNumber& o) const;
    bool operator!=(const PadicNumber& o) const { return !(*this == o); }

    /// Decides v(x) >= m; throws precision_exhausted when the digits cannot tell.
    bool val_at_least(long long m) const;

    /// Exact representative of x modulo p^m (digits below level m), full precision.
    PadicNumber truncated(long long m) const;

    /// The representative of x mod p^m as a reduced fraction (num, den); den a power of p.
    std::pair<long long, long long> truncated_rational(long long m) const;

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const PadicNumber& x) {
        return os << x.str();
    }

private:
    enum class Kind { Zero, ZeroMod, Unit };

    PadicNumber() = default;
    void check_same_field(const PadicNumber& o) const;

    long long p_ = 0;
    Kind kind_ = Kind::Zero;
    long long v_ = 0;        // valuation (Unit) or known-zero exponent M (ZeroMod)
    std::uint64_t u_ = 0;    // unit part mod p^prec_, coprime to p
    int prec_ = 0;
    std::uint64_t pm_ = 0;   // cached p^prec_
};

/// Largest digit count N with p^N < 2^63.
int max_digits(long long prime);

/// nu(x), normalized with nu(p) = 1; +infinity for zero-ish input.
Valuation valuation(const PadicNumber& x);

/// Exponent of the quadratic defect ideal: min over b of nu(x - b^2), found by
/// digit-by-digit minimization; +infinity exactly when x is a square.
Valuation quadratic_defect(const PadicNumber& x);

/// An element delta of k minimizing nu(delta^2 - x) (so (delta^2 - x) spans the defect).
PadicNumber defect_minimizer(const PadicNumber& x);

/// Hensel square root; empty exactly when the quadratic defect is finite.
std::optional<PadicNumber> sqrt_if_square(const PadicNumber& x);

/// +1 iff a x^2 + b y^2 = z^2 has a nontrivial solution over Q_p.
int hilbert_symbol(const PadicNumber& a, const PadicNumber& b);

enum class SquareClassTag { One, Delta, RamifiedUnit, Uniformizer };

std::string to_string(SquareClassTag tag);

/// One representative of a class of k*/k*^2, with its defect data.
struct SquareClass {
    SquareClassTag tag;
    PadicNumber rep;
    Valuation defect;   // exponent of the defect ideal
    int s = 0;          // for RamifiedUnit: defect exponent = 2s+1, 0 <= s < nu(2)
    long long lift = 0; // the integer whose image is rep (smallest nonnegative)
};

/// All of k*/k*^2 as {1, Delta, u_1..u_N, pi_1..pi_{N+2}}, smallest integer lifts.
std::vector<SquareClass> square_class_reps(long long prime, int precision = kDefaultPrecision);

/// The class representative of x together with c satisfying c^2 * x = rep.
std::pair<SquareClass, PadicNumber> normalize_to_class_rep(const PadicNumber& x);

/**
 * Element x + y*sqrt(alpha) of the quadratic extension L = k(sqrt(alpha)).
 * Valuations on L are normalized to extend those of k, so they live in (1/e)Z.
 */
class QuadExtElement {
public:
    QuadExtElement(PadicNumber x, PadicNumber y, PadicNumber alpha);
    static QuadExtElement from_base(const PadicNumber& x, const PadicNumber& alpha);

    const PadicNumber& x() const { return x_; }
    const PadicNumber& y() const { return y_; }
    const PadicNumber& alpha() const { return alpha_; }
    long long prime() const { return x_.prime(); }

    bool is_exact_zero() const { return x_.is_exact_zero() && y_.is_exact_zero(); }
    bool is_zero_like() const { return x_.is_zero_like() && y_.is_zero_like(); }
    bool is_zero_to_precision() const { return is_zero_like() && !is_exact_zero(); }
    bool is_base() const { return y_.is_exact_zero(); }

    QuadExtElement conj() const;
    PadicNumber norm() const;  // x^2 - alpha y^2

    QuadExtElement operator-() const;
    QuadExtElement operator+(const QuadExtElement& o) const;
    QuadExtElement operator-(const QuadExtElement& o) const;
    QuadExtElement operator*(const QuadExtElement& o) const;
    QuadExtElement operator/(const QuadExtElement& o) const;
    QuadExtElement inverse() const;

    bool operator==(const QuadExtElement& o) const;
    bool operator!=(const QuadExtElement& o) const { return !(*this == o); }

    /// Decides v(x) >= m in (1/2)Z; throws precision_exhausted when unresolved.
    bool val_at_least(const Rational& m) const;

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const QuadExtElement& w) {
        return os << w.str();
    }

private:
    PadicNumber x_, y_, alpha_;
};

/// (1/2) nu(x^2 - alpha y^2) as an exact rational with denominator <= 2.
Rational ext_valuation(const QuadExtElement& w);

}  // namespace btb
