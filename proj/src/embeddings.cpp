#include "btb/embeddings.hpp"

#include <algorithm>
#include <stdexcept>

namespace btb {

namespace {

long long ipow(long long b, long long e) {
    long long r = 1;
    for (long long i = 0; i < e; ++i) r *= b;
    return r;
}

long long vp(long long n, long long p) {
    long long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace

std::string to_string(ExtensionKind k) {
    return k == ExtensionKind::Unramified ? "unramified" : "ramified";
}

bool existence(ExtensionKind kind, long long r, long long t) {
    if (r < 0 || t < 0) throw std::invalid_argument("existence: negative parameter");
    return kind == ExtensionKind::Unramified ? r <= 2 * t : r <= 2 * t + 1;
}

namespace {

// The defining enumeration, tolerant of out-of-range parameters (the invariant
// table reaches chi(2t+1, t, t), one step past the stated domain; the count is
// then 0 because no lift can have negative nu(a-1)).
long long chi_count(long long r, long long u, long long t, long long p) {
    if (u == 0) return 1;  // convention
    long long mexp = t - r + 2 * u;
    long long target = t - r + u;
    if (mexp < 0 || target < 0) return 0;
    long long mod = ipow(p, mexp);
    long long count = 0;
    for (long long a = 2; a < mod; ++a) {  // a = 1 never qualifies: its lifts realize every valuation
        if (a % p == 0) continue;
        if ((a * a) % mod != 1) continue;
        if (vp(a - 1, p) == target) ++count;
    }
    return count;
}

}  // namespace

long long chi(long long r, long long u, long long t, long long p) {
    if (u != 0 && (u < std::max<long long>(0, r - t) || u > r / 2))
        throw std::invalid_argument("chi: u outside [max{0,r-t}, [r/2]]");
    return chi_count(r, u, t, p);
}

long long chi3(long long r, long long t, long long p) {
    long long v = std::max<long long>(0, r - t);
    long long h = r / 2;
    long long sum = 0;
    for (long long u = v; u <= h; ++u) sum += chi_count(r, u, t, p);
    return sum;  // 0 when the range is empty
}

TableRow table1(ExtensionKind kind, long long r, long long t, long long p) {
    if (!existence(kind, r, t)) throw std::domain_error("table1: no optimal embeddings exist");
    if (r <= 0) throw std::invalid_argument("table1: level must be positive");
    if (r < 2 * t) {
        if (r % 2 != 0) return {0, 0};
        long long h = r / 2;
        return {(p - 1) * ipow(p, h - 1), chi_count(r, h, t, p)};
    }
    if (r == 2 * t) {
        if (kind == ExtensionKind::Unramified) return {ipow(p, t), chi_count(r, t, t, p)};
        return {(p - 1) * ipow(p, t - 1), chi_count(r, t, t, p)};
    }
    // ramified, r = 2t + 1
    return {ipow(p, t), chi_count(r, t, t, p)};
}

EmbeddingVector embedding_vector(ExtensionKind kind, long long r, long long t, long long p) {
    if (!existence(kind, r, t))
        throw std::domain_error("embedding_vector: no optimal embeddings exist");
    EmbeddingVector out;
    if (r == 0) {
        out.e1 = out.e2 = out.e3 = out.e4 = Rational(1);
        out.n = out.m = 1;
        out.chi2 = out.chi3 = 1;  // the u = 0 convention; Burnside then holds as stated
        out.integral = true;
        out.consistent = true;
        return out;
    }
    TableRow row = table1(kind, r, t, p);
    out.n = ipow(p, r / 2);
    out.m = row.m;
    out.chi2 = row.chi2;
    out.chi3 = chi3(r, t, p);
    Rational n(out.n), m(out.m), c2(out.chi2), c3(out.chi3);
    out.e1 = 2 * n - m;
    out.e2 = n - m / 2 + c2 / 2;
    out.e3 = n - m / 2 + c3 / 2;
    out.e4 = n / 2 + (c2 + c3) / 4;
    auto pos_int = [](const Rational& x) { return is_integer(x) && x > Rational(0); };
    out.integral = pos_int(out.e1) && pos_int(out.e2) && pos_int(out.e3) && pos_int(out.e4);
    out.consistent = out.e1 == 2 * n - m && 2 * out.e2 == out.e1 + c2 &&
                     2 * out.e3 == out.e1 + c3 && 4 * out.e4 == out.e1 + c2 + c3 + m;
    return out;
}

// ---------------------------------------------------------------------------
// Walk census
// ---------------------------------------------------------------------------

namespace {

struct ModelGraph {
    std::vector<std::vector<int>> adj;
    std::vector<long long> dist;  // distance to the stem
};

ModelGraph build_model(const ThickPathModel& model) {
    ModelGraph g;
    auto add_vertex = [&](long long dist) {
        g.adj.emplace_back();
        g.dist.push_back(dist);
        return static_cast<int>(g.adj.size()) - 1;
    };
    auto link = [&](int a, int b) {
        g.adj[a].push_back(b);
        g.adj[b].push_back(a);
    };
    int s0 = add_vertex(0);
    std::vector<int> stem{s0};
    if (model.stem_len == 1) {
        int s1 = add_vertex(0);
        link(s0, s1);
        stem.push_back(s1);
    } else if (model.stem_len != 0) {
        throw std::invalid_argument("walk census models have stem length 0 or 1");
    }
    // hang complete q-ary subtrees of height t so every stem vertex has q+1 neighbors
    std::function<void(int, long long)> grow = [&](int v, long long d) {
        if (d == model.t) return;
        for (long long c = 0; c < model.q; ++c) {
            int w = add_vertex(d + 1);
            link(v, w);
            grow(w, d + 1);
        }
    };
    for (int sv : stem) {
        long long hang = model.q + 1 - static_cast<long long>(g.adj[sv].size());
        for (long long c = 0; c < hang; ++c) {
            if (model.t == 0) break;
            int w = add_vertex(1);
            link(sv, w);
            grow(w, 1);
        }
    }
    return g;
}

}  // namespace

CensusResult walk_census(const ThickPathModel& model, long long r,
                         const std::function<void(const std::vector<long long>&)>& visitor) {
    if (r < 0 || r > model.truncation)
        throw std::invalid_argument("walk_census: length exceeds truncation budget");
    ModelGraph g = build_model(model);
    int v0 = -1;
    for (size_t i = 0; i < g.dist.size(); ++i)
        if (g.dist[i] == model.t) {
            v0 = static_cast<int>(i);
            break;
        }
    if (v0 < 0) throw std::logic_error("walk_census: no optimal vertex");
    CensusResult res{0, 0};
    std::vector<long long> profile{model.t - g.dist[v0]};  // depth within the branch
    std::function<void(int, int, long long)> dfs = [&](int v, int prev, long long len) {
        if (len == r) {
            ++res.n;
            if (g.dist[v] == model.t) ++res.m;
            if (visitor) visitor(profile);
            return;
        }
        for (int w : g.adj[v]) {
            if (w == prev) continue;
            profile.push_back(model.t - g.dist[w]);
            dfs(w, v, len + 1);
            profile.pop_back();
        }
    };
    dfs(v0, -1, 0);
    return res;
}

Rational distance_from_cross_ratio(const BaseField& k, const ProjPk& a, const ProjPk& b,
                                   const ProjPk& c, const ProjPk& d) {
    ProjPk t = cross_ratio(a, b, c, d, k.one());
    if (t.is_infinite()) throw std::invalid_argument("distance_from_cross_ratio: t = infinity");
    PadicNumber tm1 = t.value() - k.one();
    if (tm1.is_exact_zero())
        throw std::invalid_argument("distance_from_cross_ratio: t = 1 (paths share an end)");
    return Rational(tm1.known_valuation());
}

ConsistencyReport consistency_report(ExtensionKind kind, long long r, long long t, long long p) {
    ConsistencyReport rep;
    rep.kind = kind;
    rep.r = r;
    rep.t = t;
    rep.p = p;
    rep.exists = existence(kind, r, t);
    if (!rep.exists) {
        rep.issues.push_back("no optimal embeddings for these parameters");
        rep.ok = false;
        return rep;
    }
    rep.vec = embedding_vector(kind, r, t, p);
    ThickPathModel model{kind == ExtensionKind::Ramified ? 1 : 0, t, p, 16};
    rep.census = walk_census(model, r);
    rep.census_n_ok = rep.census.n == rep.vec.n;
    rep.census_m_ok = rep.census.m == rep.vec.m;
    if (!rep.census_n_ok) rep.issues.push_back("walk census n differs from q^[r/2]");
    if (!rep.census_m_ok) rep.issues.push_back("walk census m differs from the table value");
    if (!rep.vec.integral) rep.issues.push_back("non-integral embedding vector entry");
    if (!rep.vec.consistent) rep.issues.push_back("Burnside identities fail");
    rep.ok = rep.issues.empty();
    return rep;
}

}  // namespace btb
