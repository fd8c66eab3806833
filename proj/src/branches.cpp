#include "btb/branches.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace btb {

std::string to_string(StemClass c) {
    switch (c) {
        case StemClass::Split: return "split";
        case StemClass::Unramified: return "unramified";
        default: return "ramified";
    }
}

std::optional<long long> stem_length(StemClass c) {
    switch (c) {
        case StemClass::Split: return std::nullopt;
        case StemClass::Unramified: return 0;
        default: return 1;
    }
}

StemClass stem_class_of(const PadicNumber& alpha) {
    Valuation d = quadratic_defect(alpha);
    if (d.is_infinite()) return StemClass::Split;
    long long nu2 = alpha.prime() == 2 ? 1 : 0;
    if (alpha.known_valuation() % 2 == 0 && d.value() % 2 == 0 &&
        d.value() == alpha.known_valuation() + 2 * nu2)
        return StemClass::Unramified;
    return StemClass::Ramified;
}

GhostEnds ghost_stem_ends(const BaseField& k, const PureQuaternion& q) {
    if (q.alpha.is_zero_like())
        throw std::invalid_argument("ghost_stem_ends: nilpotent generator");
    if (quadratic_defect(q.alpha).is_infinite())
        throw std::invalid_argument("ghost_stem_ends: alpha is a square; ends are rational");
    const Mat2k& m = q.m;
    // matrix [[-a/b, (a^2 - alpha b^2)/b], [-1/b, a/b]]: recover a, b
    if (m.c.is_zero_like())
        throw std::logic_error("ghost_stem_ends: lower-left entry vanishes for non-square alpha");
    PadicNumber b = -(k.one() / m.c);
    PadicNumber a = m.d * b;
    QuadExtElement z(a, b, q.alpha);
    return GhostEnds{a, b, z, z.conj()};
}

PadicNumber vine_base(const BaseField& k, const PadicNumber& alpha, const PadicNumber& a,
                      const PadicNumber& b) {
    (void)k;
    return a + b * defect_minimizer(alpha);
}

ThickPath k_stem_and_depth(const BaseField& k, const PadicNumber& alpha) {
    return branch_predict(k, realize_generator(k, alpha, k.zero(), k.one()));
}

ThickPath branch_predict(const BaseField& k, const PureQuaternion& i) {
    if (i.alpha.is_zero_like())
        throw std::invalid_argument("branch_predict: nilpotent generator (infinite leaf)");
    TreeK tree(k);
    long long nu2 = k.prime() == 2 ? 1 : 0;
    Valuation defect = quadratic_defect(i.alpha);
    if (defect.is_infinite()) {
        PadicNumber g = *sqrt_if_square(i.alpha);
        ProjPk e1, e2;
        if (!i.m.c.is_zero_like()) {
            e1 = ProjPk((i.m.a + g) / i.m.c);
            e2 = ProjPk((i.m.a - g) / i.m.c);
        } else {
            e1 = ProjPk::infinity();
            e2 = ProjPk(-(i.m.b) / (i.m.a + i.m.a));  // fixed point of an upper-triangular matrix
        }
        ThickPath tp;
        tp.cls = StemClass::Split;
        tp.split_ends = {e1, e2};
        tp.depth = Rational(nu2) + Rational(i.alpha.known_valuation(), 2);
        return tp;
    }
    GhostEnds ge = ghost_stem_ends(k, i);
    QuadExtField L(k, i.alpha);  // validates that alpha is a class representative
    PadicNumber xi = ge.a + ge.b * L.delta();
    long long vb = ge.b.known_valuation();
    ThickPath tp;
    if (!L.ramified()) {
        tp.cls = StemClass::Unramified;
        tp.stem = {tree.make_ball(xi, Rational(nu2 + vb))};
        tp.depth = Rational(nu2);
    } else {
        long long s = (L.defect_exponent() - 1) / 2;  // 0 whenever q = p
        tp.cls = StemClass::Ramified;
        tp.stem = {tree.make_ball(xi, Rational(vb + s)), tree.make_ball(xi, Rational(vb + s + 1))};
        tp.depth = Rational(s);
    }
    return tp;
}

bool thick_path_contains(const TreeK& tree, const ThickPath& tp, const BallK& v) {
    if (tp.cls == StemClass::Split)
        return tree.path_distance(tp.split_ends->first, tp.split_ends->second, v) <= tp.depth;
    for (const auto& sv : tp.stem)
        if (tree.distance(v, sv) <= tp.depth) return true;
    return false;
}

std::vector<BallK> predicted_vertices(const TreeK& tree, const ThickPath& tp, const BallK& center,
                                      const Rational& radius) {
    std::vector<BallK> out;
    for (const auto& v : tree.ball_vertices(center, radius))
        if (thick_path_contains(tree, tp, v)) out.push_back(v);
    return out;
}

BranchReport branch_compare(const BaseField& k, const std::vector<Mat2k>& gens,
                            const BallK& center, const Rational& radius) {
    TreeK tree(k);
    BranchReport rep;
    PadicNumber two = k.from_int(2);
    bool predicted_empty = false;
    std::vector<ThickPath> paths;
    for (const auto& g : gens) {
        PadicNumber s = g.trace() / two;
        Mat2k pure = g - scalar_mat(s, k.zero());
        bool pure_zero = pure.a.is_zero_like() && pure.b.is_zero_like() &&
                         pure.c.is_zero_like() && pure.d.is_zero_like();
        if (pure_zero) {
            rep.trivial = true;
            if (!s.is_zero_like() && !k.val_at_least(s, Rational(0))) predicted_empty = true;
            continue;  // an integral scalar constrains nothing
        }
        if (!s.is_zero_like() && !k.val_at_least(s, Rational(0))) {
            predicted_empty = true;  // non-integral trace: no order contains g
            continue;
        }
        paths.push_back(branch_predict(k, make_pure(pure)));
    }
    rep.predicted = paths;
    std::set<std::string> predicted_keys;
    for (const auto& v : tree.ball_vertices(center, radius)) {
        bool in = !predicted_empty;
        for (const auto& tp : paths)
            if (in && !thick_path_contains(tree, tp, v)) in = false;
        if (in) {
            predicted_keys.insert(tree.key(v));
            rep.predicted_ids.push_back(tree.node_id(v));
        }
    }
    std::set<std::string> oracle_keys;
    for (const auto& v : tree.enumerate_containment(gens, center, radius)) {
        oracle_keys.insert(tree.key(v));
        rep.oracle_ids.push_back(tree.node_id(v));
    }
    rep.agreement = predicted_keys == oracle_keys;
    if (!rep.agreement) {
        std::set<std::string> sym;
        std::set_symmetric_difference(predicted_keys.begin(), predicted_keys.end(),
                                      oracle_keys.begin(), oracle_keys.end(),
                                      std::inserter(sym, sym.begin()));
        rep.mismatches.assign(sym.begin(), sym.end());
    }
    std::sort(rep.predicted_ids.begin(), rep.predicted_ids.end());
    std::sort(rep.oracle_ids.begin(), rep.oracle_ids.end());
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem 2.1
// ---------------------------------------------------------------------------

namespace {

bool is_unit_type(const SquareClass& c) {
    return c.tag == SquareClassTag::One || c.tag == SquareClassTag::Delta;
}

long long half_defect(const SquareClass& c) {
    return (c.defect.value() - 1) / 2;  // qdef = (pi^{2s+1}) -> s
}

}  // namespace

FakeDistance fake_distance(const QuaternionPairSpec& spec) {
    PadicNumber disc = spec.lambda * spec.lambda - spec.alpha * spec.beta;
    bool a12 = is_unit_type(spec.alpha_class);
    bool b12 = is_unit_type(spec.beta_class);
    if (disc.is_zero_like()) {
        if (spec.alpha_class.tag == SquareClassTag::One &&
            spec.beta_class.tag == SquareClassTag::One)
            return FakeDistance{true, Rational(0)};  // stems share a ray
        throw degenerate_error("fake_distance: lambda^2 = alpha beta with non-square classes");
    }
    long long nu = disc.known_valuation();
    long long nu2 = spec.alpha.prime() == 2 ? 1 : 0;
    Rational df;
    if (a12 && b12) {
        df = Rational(-(nu - 2 * nu2), 2);
    } else if (a12 && !b12) {
        df = Rational(half_defect(spec.beta_class)) - Rational(nu, 2);
    } else if (!a12 && b12) {
        df = Rational(half_defect(spec.alpha_class)) - Rational(nu, 2);
    } else {
        df = Rational(half_defect(spec.alpha_class) + half_defect(spec.beta_class)) -
             Rational(nu + 2 * nu2, 2);
    }
    return FakeDistance{false, df};
}

std::string to_string(RelativePosition::Kind k) {
    switch (k) {
        case RelativePosition::Kind::Distance: return "distance";
        case RelativePosition::Kind::Intersection: return "intersection";
        default: return "ray";
    }
}

RelativePosition relative_position(const QuaternionPairSpec& spec) {
    FakeDistance df = fake_distance(spec);
    if (df.infinite) return RelativePosition{RelativePosition::Kind::Ray, Rational(0), df};
    if (df.value > Rational(0))
        return RelativePosition{RelativePosition::Kind::Distance, df.value, df};
    Rational len = -2 * df.value;
    auto cap = [&](const SquareClass& c) {
        auto l = stem_length(stem_class_of(c.rep));
        if (l && Rational(*l) < len) len = Rational(*l);
    };
    cap(spec.alpha_class);
    cap(spec.beta_class);
    return RelativePosition{RelativePosition::Kind::Intersection, len, df};
}

// ---------------------------------------------------------------------------
// Oracle measurement
// ---------------------------------------------------------------------------

std::pair<std::vector<BallK>, int> erode_to_stem(const TreeK& tree, const std::vector<BallK>& set,
                                                 const BallK& center, const Rational& radius) {
    std::map<std::string, BallK> cur;
    for (const auto& v : set) cur.emplace(tree.key(v), v);
    int level = 0;
    while (true) {
        std::map<std::string, BallK> next;
        Rational window = radius - Rational(level + 1) * tree.field().step();
        for (const auto& [key, v] : cur) {
            if (tree.distance(v, center) > window) continue;
            bool interior = true;
            for (const auto& n : tree.neighbors(v))
                if (!cur.count(tree.key(n))) {
                    interior = false;
                    break;
                }
            if (interior) next.emplace(key, v);
        }
        if (next.empty()) break;
        cur = std::move(next);
        ++level;
    }
    std::vector<BallK> stem;
    for (const auto& [key, v] : cur) stem.push_back(v);
    return {stem, level};
}

MeasuredPosition oracle_pair_position(const BaseField& k, const Mat2k& gi, const Mat2k& gj,
                                      const BallK& center, const Rational& radius) {
    TreeK tree(k);
    auto si = tree.enumerate_containment({gi}, center, radius);
    auto sj = tree.enumerate_containment({gj}, center, radius);
    auto [mi, di] = erode_to_stem(tree, si, center, radius);
    auto [mj, dj] = erode_to_stem(tree, sj, center, radius);
    MeasuredPosition out;
    out.depth_i = di;
    out.depth_j = dj;
    std::set<std::string> ki;
    for (const auto& v : mi) ki.insert(tree.key(v));
    long long common = 0;
    for (const auto& v : mj)
        if (ki.count(tree.key(v))) ++common;
    if (common > 0) {
        out.intersects = true;
        out.value = Rational(common - 1) * tree.field().step();
        return out;
    }
    std::optional<Rational> best;
    for (const auto& u : mi)
        for (const auto& v : mj) {
            Rational d = tree.distance(u, v);
            if (!best || d < *best) best = d;
        }
    if (!best) throw std::runtime_error("oracle_pair_position: empty stem in window");
    out.intersects = false;
    out.value = *best;
    return out;
}

BallK pair_anchor(const BaseField& k, const ThickPath& ti, const ThickPath& tj) {
    TreeK tree(k);
    std::vector<BallK> cand;
    if (ti.cls == StemClass::Split) {
        const auto& [e1, e2] = *ti.split_ends;
        if (tj.cls == StemClass::Split) {
            const auto& [f1, f2] = *tj.split_ends;
            cand.push_back(tree.median(e1, e2, f1));
            cand.push_back(tree.median(e1, e2, f2));
        } else {
            for (const auto& v : tj.stem) cand.push_back(tree.path_nearest(e1, e2, v));
        }
    } else {
        cand = ti.stem;
    }
    auto dist_to_j = [&](const BallK& v) -> Rational {
        if (tj.cls == StemClass::Split)
            return tree.path_distance(tj.split_ends->first, tj.split_ends->second, v);
        Rational best = tree.distance(v, tj.stem.front());
        for (const auto& w : tj.stem) best = std::min(best, tree.distance(v, w));
        return best;
    };
    BallK best = cand.front();
    Rational bd = dist_to_j(best);
    for (const auto& v : cand) {
        Rational d = dist_to_j(v);
        if (d < bd) {
            best = v;
            bd = d;
        }
    }
    return tree.canonical(best);
}

}  // namespace btb
