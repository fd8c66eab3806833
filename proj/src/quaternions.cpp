#include "btb/quaternions.hpp"

#include <vector>

namespace btb {

namespace {

// homogeneous coordinates of a projective point
std::pair<PadicNumber, PadicNumber> homog(const BaseField& k, const ProjPk& p) {
    if (p.is_infinite()) return {k.one(), k.zero()};
    return {p.value(), k.one()};
}

PadicNumber half_anticommutator(const Mat2k& i, const Mat2k& j) {
    Mat2k s = i * j + j * i;
    if (!s.b.is_zero_like() || !s.c.is_zero_like())
        throw std::logic_error("anticommutator of pure quaternions must be scalar");
    return s.a / PadicNumber(s.a.prime(), 2, s.a.precision());
}

}  // namespace

Idempotent idempotent_from_ends(const BaseField& k, const ProjPk& a, const ProjPk& b) {
    auto [a0, a1] = homog(k, a);
    auto [b0, b1] = homog(k, b);
    // u = (a1, -a0) annihilates (a0, a1); scale so that u . (b0, b1) = 1
    PadicNumber s = a1 * b0 - a0 * b1;
    if (s.is_zero_like()) throw std::invalid_argument("idempotent_from_ends: equal ends");
    Mat2k m{b0 * a1 / s, -(b0 * a0) / s, b1 * a1 / s, -(b1 * a0) / s};
    return Idempotent{m, a, b};
}

PureQuaternion make_pure(const Mat2k& m) {
    if (!(m.a + m.d).is_zero_like()) throw std::invalid_argument("make_pure: nonzero trace");
    return PureQuaternion{m, -(m.det())};
}

PureQuaternion pure_from_conjugate_ends(const BaseField& k, const PadicNumber& alpha,
                                        const PadicNumber& a, const PadicNumber& b) {
    if (quadratic_defect(alpha).is_infinite())
        throw std::invalid_argument(
            "pure_from_conjugate_ends: alpha is a square; use idempotent ends");
    return realize_generator(k, alpha, a, b);
}

PureQuaternion realize_generator(const BaseField& k, const PadicNumber& alpha,
                                 const PadicNumber& a, const PadicNumber& b) {
    if (b.is_zero_like()) throw std::invalid_argument("realize_generator: b = 0");
    Mat2k m{-a / b, (a * a - alpha * b * b) / b, -k.one() / b, a / b};
    return PureQuaternion{m, alpha};
}

PadicNumber lambda_from_t(const BaseField& k, const ProjPk& t) {
    if (t.is_infinite()) return k.one();
    PadicNumber den = t.value() - k.one();
    if (den.is_zero_like()) throw std::invalid_argument("lambda_from_t: pole at t = 1");
    return (t.value() + k.one()) / den;
}

ProjPk t_from_lambda(const BaseField& k, const PadicNumber& lambda) {
    PadicNumber den = lambda - k.one();
    if (den.is_zero_like()) return ProjPk::infinity();
    return ProjPk((lambda + k.one()) / den);
}

QuaternionPairSpec normalize_pair_spec(const BaseField& k, const PadicNumber& alpha,
                                       const PadicNumber& beta, const PadicNumber& lambda) {
    (void)k;
    auto [ca, ci] = normalize_to_class_rep(alpha);
    auto [cb, cj] = normalize_to_class_rep(beta);
    return QuaternionPairSpec{ca.rep, cb.rep, ci * cj * lambda, ca, cb, ci, cj};
}

std::string to_string(SplitResult r) {
    switch (r) {
        case SplitResult::Splits: return "splits";
        case SplitResult::Division: return "division";
        default: return "degenerate";
    }
}

SplitResult split_check(const QuaternionPairSpec& spec) {
    PadicNumber disc = spec.alpha * spec.beta - spec.lambda * spec.lambda;
    if (disc.is_zero_like()) return SplitResult::Degenerate;
    if (quadratic_defect(spec.alpha).is_infinite() || quadratic_defect(spec.beta).is_infinite())
        return SplitResult::Splits;  // a square generator yields an idempotent
    // orthogonalize: j' = j - (lambda/alpha) i has square (alpha beta - lambda^2)/alpha
    return hilbert_symbol(spec.alpha, disc / spec.alpha) == 1 ? SplitResult::Splits
                                                              : SplitResult::Division;
}

std::optional<Witness> find_witness(const BaseField& k, const PadicNumber& alpha,
                                    const PadicNumber& beta, const PadicNumber& lambda,
                                    int bound, int digit_depth) {
    PadicNumber disc = lambda * lambda - alpha * beta;
    if (disc.is_zero_like()) throw degenerate_error("find_witness: lambda^2 = alpha beta");
    long long p = k.prime();
    std::vector<long long> units;
    long long mod = 1;
    for (int i = 0; i < digit_depth; ++i) mod *= p;
    for (long long u = 1; u < mod; ++u)
        if (u % p != 0) units.push_back(u);
    // Scaling (a,b,c,d) by k* fixes b = 1, c = 0; the relation then reads
    // g^2 = alpha + beta d^2 - 2 lambda d, i.e. beta g^2 = y^2 - disc with
    // y = beta d - lambda.  Scanning y (a bounded valuation box with short
    // unit digits) reaches witnesses whose d would need deep digits when
    // lambda^2 is close to alpha beta.
    long long n = disc.known_valuation();
    long long nu2 = p == 2 ? 1 : 0;
    long long lo = std::min<long long>(-bound, n / 2 - bound);
    long long hi = std::max<long long>(bound, n / 2 + nu2 + 2);
    for (long long m = lo; m <= hi; ++m) {
        for (long long uy : units) {
            PadicNumber y = k.from_int(uy).shifted(m);
            PadicNumber d = (y + lambda) / beta;
            if (d.is_zero_like()) continue;  // bd != 0 required
            PadicNumber g2 = (y * y - disc) / beta;
            std::optional<PadicNumber> g;
            if (g2.is_exact_zero()) {
                g = k.zero();
            } else if (g2.is_zero_to_precision()) {
                continue;  // cannot certify a square here
            } else if (g2.known_valuation() % 2 == 0) {
                g = sqrt_if_square(g2);
            }
            if (!g) continue;
            return Witness{*g, k.one(), k.zero(), d};
        }
    }
    return std::nullopt;
}

namespace {

std::pair<PureQuaternion, PureQuaternion> checked(const QuaternionPairSpec& spec, const Mat2k& i,
                                                  const Mat2k& j) {
    if (-(i.det()) != spec.alpha || -(j.det()) != spec.beta)
        throw std::logic_error("construct_pair: squares do not match spec");
    if (half_anticommutator(i, j) != spec.lambda)
        throw std::logic_error("construct_pair: anticommutator does not match spec");
    return {PureQuaternion{i, spec.alpha}, PureQuaternion{j, spec.beta}};
}

}  // namespace

std::pair<PureQuaternion, PureQuaternion> construct_pair(const QuaternionPairSpec& spec) {
    BaseField k(spec.alpha.prime(), spec.alpha.precision());
    SplitResult sr = split_check(spec);
    if (sr == SplitResult::Degenerate)
        throw degenerate_error("construct_pair: lambda^2 = alpha beta");
    if (sr == SplitResult::Division)
        throw std::domain_error("construct_pair: algebra is division, no matrix pair exists");
    bool a_sq = quadratic_defect(spec.alpha).is_infinite();
    bool b_sq = quadratic_defect(spec.beta).is_infinite();
    Mat2k one = scalar_mat(k.one(), k.zero());

    if (a_sq && b_sq) {
        // alpha = beta = 1 after normalization: the quartet (inf, 0, 1, t)
        // with t = (lambda+1)/(lambda-1) realizes the pair through idempotents,
        // the i-pair taken in the orientation (t, 1)
        ProjPk t = t_from_lambda(k, spec.lambda);
        Mat2k tj = idempotent_from_ends(k, ProjPk::infinity(), ProjPk(k.zero())).m;
        Mat2k ti = idempotent_from_ends(k, t, ProjPk(k.one())).m;
        return checked(spec, ti + ti - one, tj + tj - one);
    }
    if (a_sq != b_sq) {
        // One square generator: put the non-square one at conjugate ends (0,1)
        // and solve for rational ends (x, y) of the other.  With
        // s = 1 - 2 tau_{x,y} and n = realize(nonsq, 0, 1), the relation reads
        // lambda = (nonsq - x y)/(y - x), so x = (nonsq - lambda y)/(y - lambda).
        const PadicNumber& nonsq = a_sq ? spec.beta : spec.alpha;
        Mat2k mn = realize_generator(k, nonsq, k.zero(), k.one()).m;
        for (long long yi = 0; yi < 4 * k.prime(); ++yi) {
            PadicNumber y = k.from_int(yi);
            PadicNumber den = y - spec.lambda;
            if (den.is_zero_like()) continue;
            PadicNumber x = (nonsq - spec.lambda * y) / den;
            if ((x - y).is_zero_like()) continue;
            Mat2k tau = idempotent_from_ends(k, ProjPk(x), ProjPk(y)).m;
            Mat2k ms = one - tau - tau;  // 1 - 2 tau, squares to 1
            return a_sq ? checked(spec, ms, mn) : checked(spec, mn, ms);
        }
        throw std::runtime_error("construct_pair: no rational end configuration found");
    }
    // both non-squares: witness search per the splitting criterion.  Near the
    // degenerate locus (lambda^2 close to alpha beta) the witness digits must
    // track a deep square root, so the 2-adic search escalates with nu(disc).
    long long n = (spec.lambda * spec.lambda - spec.alpha * spec.beta).known_valuation();
    std::vector<int> depths{2, 3};
    depths.push_back(k.prime() == 2 ? static_cast<int>(std::max<long long>(8, n + 5)) : 4);
    for (int depth : depths) {
        auto w = find_witness(k, spec.alpha, spec.beta, spec.lambda, 4, depth);
        if (!w) continue;
        Mat2k i = realize_generator(k, spec.alpha, w->a, w->b).m;
        Mat2k j = realize_generator(k, spec.beta, w->c, w->d).m;
        return checked(spec, i, j);
    }
    throw std::runtime_error(
        "construct_pair: no witness found within search bound (try a larger bound)");
}

}  // namespace btb
