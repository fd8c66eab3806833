#include "btb/bttree.hpp"

namespace btb {

QuadExtField::QuadExtField(const BaseField& k, const PadicNumber& alpha)
    : k_(k),
      alpha_(alpha),
      delta_(defect_minimizer(alpha)),
      ramified_(false),
      defect_exp_(0),
      pi_(QuadExtElement::from_base(k.one(), alpha)) {
    Valuation d = quadratic_defect(alpha);
    if (d.is_infinite())
        throw std::invalid_argument("QuadExtField: alpha is a square");
    defect_exp_ = static_cast<int>(d.value());
    ramified_ = defect_exp_ % 2 != 0;
    long long nu2 = k.prime() == 2 ? 1 : 0;
    long long va = alpha.known_valuation();
    // The tree machinery needs a square-class representative: unramified alpha
    // must be a unit of defect (4), ramified alpha must have defect (pi).
    bool ok = ramified_ ? (defect_exp_ == 1 && (va == 0 || va == 1))
                        : (va == 0 && defect_exp_ == 2 * nu2);
    if (!ok)
        throw std::invalid_argument("QuadExtField: alpha must be a square-class representative");
    if (ramified_) {
        // delta + sqrt(alpha) has valuation defect/2 = 1/2: a uniformizer of L
        pi_ = QuadExtElement(delta_, k_.one(), alpha_);
    } else {
        pi_ = embed(k_.one().shifted(1));
    }
    if (ramified_) {
        for (long long c = 0; c < k_.prime(); ++c) transversal_.push_back(from_int(c));
    } else {
        // omega = (delta + sqrt(alpha))/2 is integral with residue generating F_{q^2}
        PadicNumber two = k_.from_int(2);
        QuadExtElement omega(delta_ / two, k_.one() / two, alpha_);
        for (long long c0 = 0; c0 < k_.prime(); ++c0)
            for (long long c1 = 0; c1 < k_.prime(); ++c1)
                transversal_.push_back(from_int(c0) + from_int(c1) * omega);
    }
}

QuadExtField::Elem QuadExtField::uniformizer_power(const Rational& r) const {
    if (!ramified_) {
        if (!is_integer(r))
            throw std::invalid_argument("unramified levels are integers");
        return embed(k_.one().shifted(r.numerator()));
    }
    Rational twice = r * 2;
    if (!is_integer(twice))
        throw std::invalid_argument("ramified levels lie in (1/2)Z");
    long long m = twice.numerator();
    Elem base = m >= 0 ? pi_ : pi_.inverse();
    Elem out = one();
    for (long long i = 0; i < (m >= 0 ? m : -m); ++i) out = out * base;
    return out;
}

}  // namespace btb
