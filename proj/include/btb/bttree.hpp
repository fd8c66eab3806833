#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "btb/localfield.hpp"
#include "btb/rational.hpp"

namespace btb {

// ---------------------------------------------------------------------------
// Field contexts.  A context provides everything the tree needs to enumerate
// vertices: a uniformizer power for every admissible level, representatives of
// the residue field, and valuation tests.
// ---------------------------------------------------------------------------

class BaseField {
public:
    using Elem = PadicNumber;

    explicit BaseField(long long prime, int precision = kDefaultPrecision)
        : p_(prime), prec_(std::min(precision, max_digits(prime))) {
        if (prime < 2) throw std::invalid_argument("BaseField: bad prime");
    }

    long long prime() const { return p_; }
    int precision() const { return prec_; }
    long long residue_size() const { return p_; }
    Rational step() const { return Rational(1); }

    Elem from_int(long long n) const { return PadicNumber(p_, n, prec_); }
    Elem zero() const { return PadicNumber::zero(p_, prec_); }
    Elem one() const { return from_int(1); }

    Elem uniformizer_power(const Rational& r) const {
        if (!is_integer(r)) throw std::invalid_argument("base field levels are integers");
        return one().shifted(r.numerator());
    }

    std::vector<Elem> transversal() const {
        std::vector<Elem> t;
        for (long long c = 0; c < p_; ++c) t.push_back(from_int(c));
        return t;
    }

    Elem conj(const Elem& x) const { return x; }

    std::optional<Rational> val(const Elem& x) const {
        if (x.is_exact_zero()) return std::nullopt;
        return Rational(x.known_valuation());
    }

    bool val_at_least(const Elem& x, const Rational& m) const {
        return x.val_at_least(rat_ceil(m));  // integer valuations: v >= m iff v >= ceil(m)
    }

    std::string elem_key(const Elem& x) const {
        if (x.is_exact_zero()) return "z";
        return std::to_string(x.known_valuation()) + ":" + std::to_string(x.unit_part());
    }

    std::string elem_repr(const Elem& x) const {
        if (x.is_exact_zero()) return "0";
        long long v = x.known_valuation();
        long long num = static_cast<long long>(x.unit_part());
        if (v >= 0) {
            for (long long i = 0; i < v; ++i) num *= p_;
            return std::to_string(num);
        }
        long long den = 1;
        for (long long i = 0; i < -v; ++i) den *= p_;
        return std::to_string(num) + "/" + std::to_string(den);
    }

private:
    long long p_;
    int prec_;
};

/**
 * The quadratic extension L = k(sqrt(alpha)) as a tree context.  alpha must be
 * a non-square; valuations and distances extend those of k, with uniformizer
 * valuation 1/e.  For ramified L the vertex levels are half-integers.
 */
class QuadExtField {
public:
    using Elem = QuadExtElement;

    QuadExtField(const BaseField& k, const PadicNumber& alpha);

    const BaseField& base() const { return k_; }
    long long prime() const { return k_.prime(); }
    const PadicNumber& alpha() const { return alpha_; }
    const PadicNumber& delta() const { return delta_; }  // minimizer of nu(delta^2 - alpha)
    bool ramified() const { return ramified_; }
    int defect_exponent() const { return defect_exp_; }

    long long residue_size() const { return ramified_ ? k_.prime() : k_.prime() * k_.prime(); }
    Rational step() const { return ramified_ ? Rational(1, 2) : Rational(1); }

    Elem embed(const PadicNumber& x) const { return QuadExtElement::from_base(x, alpha_); }
    Elem sqrt_alpha() const {
        return QuadExtElement(k_.zero(), k_.one(), alpha_);
    }
    Elem from_int(long long n) const { return embed(k_.from_int(n)); }
    Elem zero() const { return embed(k_.zero()); }
    Elem one() const { return embed(k_.one()); }

    Elem uniformizer_power(const Rational& r) const;
    const std::vector<Elem>& transversal() const { return transversal_; }

    Elem conj(const Elem& x) const { return x.conj(); }

    std::optional<Rational> val(const Elem& x) const {
        if (x.is_exact_zero()) return std::nullopt;
        return ext_valuation(x);
    }

    bool val_at_least(const Elem& x, const Rational& m) const { return x.val_at_least(m); }

    std::string elem_key(const Elem& x) const {
        return k_.elem_key(x.x()) + "|" + k_.elem_key(x.y());
    }

    std::string elem_repr(const Elem& x) const {
        if (x.y().is_exact_zero()) return k_.elem_repr(x.x());
        return k_.elem_repr(x.x()) + "+" + k_.elem_repr(x.y()) + "s";
    }

private:
    BaseField k_;
    PadicNumber alpha_;
    PadicNumber delta_;
    bool ramified_;
    int defect_exp_;
    Elem pi_;  // uniformizer: delta + sqrt(alpha) when ramified, p otherwise
    std::vector<Elem> transversal_;
};

// ---------------------------------------------------------------------------
// 2x2 matrices
// ---------------------------------------------------------------------------

template <class F>
struct Mat2 {
    F a, b, c, d;  // [[a, b], [c, d]]

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator-() const { return {-a, -b, -c, -d}; }
    Mat2 scaled(const F& s) const { return {s * a, s * b, s * c, s * d}; }

    F det() const { return a * d - b * c; }
    F trace() const { return a + d; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
    Mat2 inverse() const {
        F dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
};

template <class F>
Mat2<F> scalar_mat(const F& s, const F& zero) {
    return {s, zero, zero, s};
}

using Mat2k = Mat2<PadicNumber>;

// ---------------------------------------------------------------------------
// Projective line
// ---------------------------------------------------------------------------

template <class F>
struct ProjPoint {
    std::optional<F> v;  // empty = the point at infinity

    ProjPoint() = default;
    explicit ProjPoint(F value) : v(std::move(value)) {}
    static ProjPoint infinity() { return ProjPoint(); }

    bool is_infinite() const { return !v.has_value(); }
    const F& value() const { return *v; }
};

using ProjPk = ProjPoint<PadicNumber>;

/// Homogeneous "determinant" D(P,Q); zero iff the points coincide.
template <class F>
F proj_det(const ProjPoint<F>& p, const ProjPoint<F>& q, const F& one) {
    if (p.is_infinite() && q.is_infinite()) return one - one;
    if (p.is_infinite()) return one;   // D((1:0),(x:1)) = 1
    if (q.is_infinite()) return -one;  // D((x:1),(1:0)) = -1
    return p.value() - q.value();
}

/// Cross-ratio [a,b;c,d] normalized so that [inf,0;1,t] = t.
template <class F>
ProjPoint<F> cross_ratio(const ProjPoint<F>& a, const ProjPoint<F>& b, const ProjPoint<F>& c,
                         const ProjPoint<F>& d, const F& one) {
    F num = proj_det(c, a, one) * proj_det(d, b, one);
    F den = proj_det(c, b, one) * proj_det(d, a, one);
    if (den.is_exact_zero()) return ProjPoint<F>::infinity();
    return ProjPoint<F>(num / den);
}

// ---------------------------------------------------------------------------
// Balls and walks
// ---------------------------------------------------------------------------

template <class Ctx>
struct Ball {
    typename Ctx::Elem center;
    Rational r;  // radius exponent; larger r = smaller ball
};

template <class Ctx>
struct Walk {
    std::vector<Ball<Ctx>> vertices;
    bool infinite_start = false;
    bool infinite_end = false;
};

/**
 * The Bruhat-Tits tree over a field context, in the ball model.  Vertices are
 * balls B_a^[r]; two balls are neighbors when one is a maximal sub-ball of the
 * other.  All distances are normalized so neighboring vertices of t(L) are at
 * distance 1/e.
 */
template <class Ctx>
class Tree {
public:
    using Elem = typename Ctx::Elem;
    using B = Ball<Ctx>;
    using P = ProjPoint<Elem>;

    explicit Tree(const Ctx& ctx) : ctx_(ctx) {}
    const Ctx& field() const { return ctx_; }

    // --- canonical form, identity ------------------------------------------

    Elem reduce_center(const Elem& c, const Rational& r) const {
        Elem rest = c;
        Elem out = ctx_.zero();
        while (!ctx_.val_at_least(rest, r)) {
            Rational v = *ctx_.val(rest);
            Elem w = ctx_.uniformizer_power(v);
            bool found = false;
            for (const Elem& t : ctx_.transversal()) {
                if (t.is_exact_zero()) continue;
                Elem cand = rest - t * w;
                if (ctx_.val_at_least(cand, v + ctx_.step())) {
                    out = out + t * w;
                    rest = cand;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::logic_error("reduce_center: no digit matched");
        }
        return out;
    }

    B canonical(const B& b) const { return B{reduce_center(b.center, b.r), b.r}; }

    B make_ball(const Elem& center, const Rational& r) const {
        if ((r / ctx_.step()).denominator() != 1)
            throw std::invalid_argument("ball radius not a multiple of 1/e");
        return canonical(B{center, r});
    }

    std::string key(const B& b) const {
        return ctx_.elem_key(reduce_center(b.center, b.r)) + "@" + rat_str(b.r);
    }

    std::string node_id(const B& b) const {
        return ctx_.elem_repr(reduce_center(b.center, b.r)) + ":" + rat_str(b.r);
    }

    bool equal(const B& v, const B& w) const {
        if (v.r != w.r) return false;
        return ctx_.val_at_least(v.center - w.center, v.r);
    }

    B root() const { return B{ctx_.zero(), Rational(0)}; }

    // --- adjacency and metric ----------------------------------------------

    std::vector<B> neighbors(const B& v) const {
        B c = canonical(v);
        std::vector<B> out;
        out.push_back(canonical(B{c.center, c.r - ctx_.step()}));  // minimal super-ball
        Elem w = ctx_.uniformizer_power(c.r);
        for (const Elem& t : ctx_.transversal())
            out.push_back(B{c.center + t * w, c.r + ctx_.step()});  // maximal sub-balls
        return out;
    }

    Rational distance(const B& v, const B& w) const {
        Rational m = std::min(v.r, w.r);
        Elem diff = v.center - w.center;
        if (!diff.is_exact_zero() && !ctx_.val_at_least(diff, m)) m = std::min(m, *ctx_.val(diff));
        return (v.r - m) + (w.r - m);
    }

    // --- projective points, medians, maximal paths --------------------------

    bool distinct(const P& a, const P& b) const {
        if (a.is_infinite() || b.is_infinite()) return !(a.is_infinite() && b.is_infinite());
        Elem d = a.value() - b.value();
        if (d.is_exact_zero()) return false;
        if (d.is_zero_to_precision())
            throw precision_exhausted("projective points indistinguishable at precision");
        return true;
    }

    /// The unique vertex lying on all three pairwise maximal paths.
    B median(const P& a, const P& b, const P& c) const {
        int ninf = int(a.is_infinite()) + int(b.is_infinite()) + int(c.is_infinite());
        if (!distinct(a, b) || !distinct(a, c) || !distinct(b, c))
            throw std::invalid_argument("median: coincident points");
        if (ninf >= 2) throw std::invalid_argument("median: repeated infinite point");
        if (ninf == 1) {
            const P& x = a.is_infinite() ? b : a;
            const P& y = a.is_infinite() ? c : (b.is_infinite() ? c : b);
            return make_ball(x.value(), *ctx_.val(x.value() - y.value()));
        }
        Rational vab = *ctx_.val(a.value() - b.value());
        Rational vac = *ctx_.val(a.value() - c.value());
        Rational vbc = *ctx_.val(b.value() - c.value());
        Rational m = std::max({vab, vac, vbc});
        const P& base = (vab == m || vac == m) ? a : b;
        return make_ball(base.value(), m);
    }

    /// Join level of the two ends: the radius of the apex of p(a,b).
    /// For an infinite end the path has no apex (it climbs forever).
    std::optional<Rational> join_level(const P& a, const P& b) const {
        if (!distinct(a, b)) throw std::invalid_argument("path: equal ends");
        if (a.is_infinite() || b.is_infinite()) return std::nullopt;
        return *ctx_.val(a.value() - b.value());
    }

    bool path_contains(const P& a, const P& b, const B& v) const {
        auto s0 = join_level(a, b);
        if (s0 && v.r < *s0) return false;
        if (!a.is_infinite() && ctx_.val_at_least(v.center - a.value(), v.r)) return true;
        if (!b.is_infinite() && ctx_.val_at_least(v.center - b.value(), v.r)) return true;
        if (a.is_infinite() || b.is_infinite()) {
            const P& fin = a.is_infinite() ? b : a;
            return ctx_.val_at_least(v.center - fin.value(), v.r);
        }
        return false;
    }

    Rational path_distance(const P& a, const P& b, const B& v) const {
        return path_project(a, b, v).second;
    }

    B path_nearest(const P& a, const P& b, const B& v) const {
        return path_project(a, b, v).first;
    }

    /// Valuation of x capped at `cap`; resolves values that vanish to precision
    /// beyond the cap without demanding their exact valuation.
    Rational val_clamped(const Elem& x, const Rational& cap) const {
        if (x.is_exact_zero() || ctx_.val_at_least(x, cap)) return cap;
        return *ctx_.val(x);
    }

    /// Nearest path vertex together with the distance to it.
    std::pair<B, Rational> path_project(const P& a, const P& b, const B& v) const {
        auto s0 = join_level(a, b);
        std::optional<std::pair<B, Rational>> best;
        auto consider = [&](const P& end) {
            if (end.is_infinite()) return;
            Rational m = val_clamped(v.center - end.value(), v.r);
            Rational level = s0 ? std::max(*s0, m) : m;
            Rational dist = (v.r - m) + (level - m);
            if (!best || dist < best->second)
                best = {make_ball(end.value(), level), dist};
        };
        consider(a);
        consider(b);
        if (!best) throw std::invalid_argument("path_project: both ends infinite");
        return *best;
    }

    /// All path vertices within the given distance of a vertex.
    std::vector<B> path_within(const P& a, const P& b, const B& center,
                               const Rational& radius) const {
        Walk<Ctx> w = path_segment(a, b, center, radius);
        return w.vertices;
    }

    /// The finite part of the walk from end a to end b visible within
    /// distance `radius` of `center`, ordered from the a side to the b side.
    Walk<Ctx> path_segment(const P& a, const P& b, const B& center,
                           const Rational& radius) const {
        auto s0 = join_level(a, b);
        // walk coordinate: on the a side (levels s >= s0, descending toward the
        // apex) use -s; past the apex on the b side use s - 2 s0.
        struct Pos {
            B ball;
            Rational coord;
        };
        std::vector<Pos> got;
        auto emit_side = [&](const P& end, bool a_side) {
            if (end.is_infinite()) return;
            Rational m = min_with_inf(center.r, ctx_.val(center.center - end.value()));
            Rational near_level = s0 ? std::max(*s0, m) : m;
            auto emit = [&](const Rational& s) {
                B v = canonical(B{end.value(), s});
                if (distance(v, center) > radius) return false;
                if (!a_side && s0 && s == *s0) return true;  // apex already on the a side
                Rational coord = a_side ? -s : (s0 ? s - 2 * *s0 : s);
                got.push_back({v, coord});
                return true;
            };
            for (Rational s = near_level; emit(s); s += ctx_.step()) {}
            for (Rational s = near_level - ctx_.step(); (!s0 || s >= *s0) && emit(s);
                 s -= ctx_.step()) {}
        };
        if (!a.is_infinite() && !b.is_infinite()) {
            emit_side(a, true);
            emit_side(b, false);
        } else {
            // a single finite end carries the whole path; the coordinate flips
            // depending on which end is infinite so the walk runs from a to b
            const P& fin = a.is_infinite() ? b : a;
            emit_side(fin, b.is_infinite());
        }
        std::sort(got.begin(), got.end(),
                  [](const Pos& x, const Pos& y) { return x.coord < y.coord; });
        Walk<Ctx> w;
        w.infinite_start = w.infinite_end = true;
        for (auto& g : got) w.vertices.push_back(g.ball);
        return w;
    }

    // --- lattices, orders, containment --------------------------------------

    Mat2<Elem> vertex_basis(const B& v) const {
        return {v.center, ctx_.uniformizer_power(v.r), ctx_.one(), ctx_.zero()};
    }

    /// True iff B^{-1} g B is integral, i.e. g lies in the maximal order of v.
    bool order_contains_at(const B& v, const Mat2<Elem>& g) const {
        const Elem& a = v.center;
        Elem w = ctx_.uniformizer_power(v.r);
        Elem m00 = g.c * a + g.d;
        Elem m01 = g.c * w;
        Elem m11 = g.a - a * g.c;
        Elem m10 = (g.a * a + g.b - a * m00) / w;
        return ctx_.val_at_least(m00, Rational(0)) && ctx_.val_at_least(m01, Rational(0)) &&
               ctx_.val_at_least(m10, Rational(0)) && ctx_.val_at_least(m11, Rational(0));
    }

    /// All vertices within the given radius of center (breadth first).
    std::vector<B> ball_vertices(const B& center, const Rational& radius) const {
        if (radius > Rational(8)) throw std::invalid_argument("enumeration radius capped at 8");
        if (ctx_.residue_size() > 13 * 13)
            throw std::invalid_argument("enumeration residue size capped");
        std::vector<B> out;
        std::unordered_set<std::string> seen;
        std::vector<B> frontier{canonical(center)};
        seen.insert(key(center));
        Rational d(0);
        while (!frontier.empty() && d <= radius) {
            std::vector<B> next;
            for (const B& v : frontier) {
                out.push_back(v);
                if (d + ctx_.step() > radius) continue;
                for (const B& n : neighbors(v)) {
                    std::string k = key(n);
                    if (seen.insert(k).second) next.push_back(n);
                }
            }
            frontier = std::move(next);
            d += ctx_.step();
        }
        return out;
    }

    /// Brute-force branch oracle: vertices within `radius` of `center` whose
    /// maximal order contains every generator.
    std::vector<B> enumerate_containment(const std::vector<Mat2<Elem>>& gens, const B& center,
                                         const Rational& radius) const {
        std::vector<B> out;
        for (const B& v : ball_vertices(center, radius)) {
            bool all = true;
            for (const auto& g : gens)
                if (!order_contains_at(v, g)) {
                    all = false;
                    break;
                }
            if (all) out.push_back(v);
        }
        return out;
    }

    // --- group actions -------------------------------------------------------

    B galois_image(const B& v) const { return canonical(B{ctx_.conj(v.center), v.r}); }

    P apply_moebius(const Mat2<Elem>& m, const P& x) const {
        Elem num = x.is_infinite() ? m.a : m.a * x.value() + m.b;
        Elem den = x.is_infinite() ? m.c : m.c * x.value() + m.d;
        if (den.is_exact_zero()) return P::infinity();
        if (den.is_zero_to_precision())
            throw precision_exhausted("moebius: image denominator unresolved");
        return P(num / den);
    }

    /// Image of a vertex under a Moebius transformation, computed as the
    /// median of the images of three ends spanning the ball.  The spanning
    /// ends are chosen to avoid the pole of the transformation (which can
    /// swallow at most one candidate).
    B moebius_image(const Mat2<Elem>& m, const B& v) const {
        Elem w = ctx_.uniformizer_power(v.r);
        Elem wp = ctx_.uniformizer_power(v.r + ctx_.step());
        // The median of three ends equals v exactly when two of them lie in
        // distinct maximal sub-balls and the third lies outside v.  The pole
        // of the transformation can swallow at most one candidate end.
        auto image = [&](const P& e) -> std::optional<P> {
            try {
                return apply_moebius(m, e);
            } catch (const precision_exhausted&) {
                return std::nullopt;  // e is (indistinguishable from) the pole
            }
        };
        std::optional<P> inside[2][2];  // two sub-balls, two ends each
        int digit = 0;
        for (const Elem& t : ctx_.transversal()) {
            inside[digit][0] = image(P(v.center + t * w));
            inside[digit][1] = image(P(v.center + t * w + wp));
            if (++digit == 2) break;
        }
        std::vector<std::optional<P>> outside{image(P::infinity()),
                                              image(P(v.center + ctx_.uniformizer_power(
                                                                      v.r - ctx_.step())))};
        for (const auto& p1 : inside[0])
            for (const auto& p2 : inside[1])
                for (const auto& p3 : outside)
                    if (p1 && p2 && p3) return median(*p1, *p2, *p3);
        throw precision_exhausted("moebius_image: could not span the ball away from the pole");
    }

private:
    const Ctx& ctx_;
};

using BallK = Ball<BaseField>;
using TreeK = Tree<BaseField>;

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

/// Renders a finite vertex set as an undirected DOT graph.  `group` may assign
/// a subgraph label per vertex (emitted as the node attribute `group`).
template <class Ctx>
std::string to_dot(const Tree<Ctx>& tree, const std::vector<Ball<Ctx>>& vertices,
                   const std::function<std::string(const Ball<Ctx>&)>& group = {},
                   const std::string& name = "tree") {
    std::ostringstream os;
    os << "graph " << name << " {\n";
    os << "  node [shape=circle];\n";
    std::unordered_map<std::string, int> index;
    for (const auto& v : vertices) index.emplace(tree.key(v), static_cast<int>(index.size()));
    for (const auto& v : vertices) {
        os << "  \"" << tree.node_id(v) << "\"";
        if (group) {
            std::string g = group(v);
            if (!g.empty()) os << " [group=\"" << g << "\"]";
        }
        os << ";\n";
    }
    // edges: each vertex to its parent (the minimal super-ball), when present
    for (const auto& v : vertices) {
        Ball<Ctx> parent = tree.canonical({v.center, v.r - tree.field().step()});
        auto it = index.find(tree.key(parent));
        if (it != index.end())
            os << "  \"" << tree.node_id(v) << "\" -- \"" << tree.node_id(parent) << "\";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace btb
