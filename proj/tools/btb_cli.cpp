#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "btb/branches.hpp"
#include "btb/bttree.hpp"
#include "btb/embeddings.hpp"
#include "btb/localfield.hpp"
#include "btb/quaternions.hpp"

using json = nlohmann::ordered_json;
using namespace btb;

namespace {

struct RunConfig {
    long long p = 5;
    int prec = kDefaultPrecision;
    long long radius = 4;
    std::string format = "json";
    std::uint64_t seed = 1;
    std::string out;
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text << std::endl;
        return;
    }
    std::ofstream f(cfg.out);
    f << text << std::endl;
}

PadicNumber parse_value(const BaseField& k, const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return k.from_int(std::stoll(s));
    long long num = std::stoll(s.substr(0, slash));
    long long den = std::stoll(s.substr(slash + 1));
    return PadicNumber::from_rational(k.prime(), num, den, k.precision());
}

json valuation_json(const Valuation& v) {
    if (v.is_infinite()) return "infinity";
    return v.value();
}

json thick_path_json(const TreeK& tree, const ThickPath& tp) {
    json j;
    j["class"] = to_string(tp.cls);
    if (tp.split_ends) {
        auto fmt = [&](const ProjPk& e) -> std::string {
            if (e.is_infinite()) return "inf";
            return tree.field().elem_repr(e.value());
        };
        j["stem"] = {std::string("path(") + fmt(tp.split_ends->first) + "," +
                     fmt(tp.split_ends->second) + ")"};
    } else {
        json stem = json::array();
        for (const auto& v : tp.stem) stem.push_back(tree.node_id(v));
        j["stem"] = stem;
    }
    j["depth"] = rat_str(tp.depth);
    auto l = stem_length(tp.cls);
    j["stem_length"] = l ? json(*l) : json("infinity");
    return j;
}

json branch_report_json(const BranchReport& rep) {
    json j;
    j["trivial"] = rep.trivial;
    j["predicted"] = rep.predicted_ids;
    j["oracle"] = rep.oracle_ids;
    j["agreement"] = rep.agreement;
    j["mismatches"] = rep.mismatches;
    return j;
}

std::string branch_dot(const BaseField& k, const ThickPath& tp, const BallK& center,
                       long long radius) {
    TreeK tree(k);
    auto verts = tree.ball_vertices(center, Rational(radius));
    auto group = [&](const BallK& v) -> std::string {
        if (!thick_path_contains(tree, tp, v)) return "";
        if (tp.cls == StemClass::Split) {
            if (tree.path_distance(tp.split_ends->first, tp.split_ends->second, v) == Rational(0))
                return "stem";
        } else {
            for (const auto& sv : tp.stem)
                if (tree.distance(v, sv) == Rational(0)) return "stem";
        }
        return "tube";
    };
    return to_dot<BaseField>(tree, verts, group, "branch");
}

json embedding_json(const ConsistencyReport& rep) {
    json j;
    j["params"] = {{"kind", to_string(rep.kind)}, {"r", rep.r}, {"t", rep.t}, {"p", rep.p}};
    j["e"] = {rat_str(rep.vec.e1), rat_str(rep.vec.e2), rat_str(rep.vec.e3), rat_str(rep.vec.e4)};
    j["n"] = rep.vec.n;
    j["m"] = rep.vec.m;
    j["chi2"] = rep.vec.chi2;
    j["chi3"] = rep.vec.chi3;
    j["flags"] = {{"integral", rep.vec.integral}, {"consistent", rep.vec.consistent}};
    j["census"] = {{"n", rep.census.n}, {"m", rep.census.m}};
    j["issues"] = rep.issues;
    return j;
}

int run_defect(const RunConfig& cfg, const std::string& value) {
    BaseField k(cfg.p, cfg.prec);
    PadicNumber x = parse_value(k, value);
    json j;
    j["p"] = cfg.p;
    j["value"] = value;
    j["defect_exponent"] = valuation_json(quadratic_defect(x));
    emit(cfg, j.dump(2));
    return 0;
}

int run_classes(const RunConfig& cfg) {
    json out = json::array();
    for (const auto& c : square_class_reps(cfg.p, cfg.prec)) {
        json j;
        j["rep"] = c.lift;
        j["tag"] = to_string(c.tag);
        j["defect_exponent"] = valuation_json(c.defect);
        if (c.tag == SquareClassTag::RamifiedUnit) j["s"] = c.s;
        out.push_back(j);
    }
    emit(cfg, out.dump(2));
    return 0;
}

int run_hilbert(const RunConfig& cfg, const std::string& a, const std::string& b) {
    BaseField k(cfg.p, cfg.prec);
    json j;
    j["p"] = cfg.p;
    j["symbol"] = hilbert_symbol(parse_value(k, a), parse_value(k, b));
    emit(cfg, j.dump(2));
    return 0;
}

int run_branch(const RunConfig& cfg, const std::string& alpha_s, const std::string& a_s,
               const std::string& b_s) {
    BaseField k(cfg.p, cfg.prec);
    TreeK tree(k);
    PadicNumber alpha = parse_value(k, alpha_s);
    auto [cls, scale] = normalize_to_class_rep(alpha);
    PadicNumber rep = cls.rep;
    PureQuaternion gen =
        realize_generator(k, rep, parse_value(k, a_s), parse_value(k, b_s));
    ThickPath tp = branch_predict(k, gen);
    BallK center = tp.cls == StemClass::Split
                       ? tree.median(tp.split_ends->first, tp.split_ends->second,
                                     tp.split_ends->first.is_infinite() ||
                                             tp.split_ends->second.is_infinite()
                                         ? ProjPk(k.one() + k.one() + k.one())
                                         : ProjPk::infinity())
                       : tp.stem.front();
    BranchReport rep_cmp = branch_compare(k, {gen.m}, center, Rational(cfg.radius));
    if (cfg.format == "dot") {
        emit(cfg, branch_dot(k, tp, center, cfg.radius));
        return rep_cmp.agreement ? 0 : 4;
    }
    json j;
    j["p"] = cfg.p;
    j["alpha"] = alpha_s;
    j["normalized_alpha"] = cls.lift;
    if (quadratic_defect(alpha).is_infinite()) j["note"] = "alpha is a square; split stem";
    j["predicted"] = thick_path_json(tree, tp);
    j["compare"] = branch_report_json(rep_cmp);
    emit(cfg, j.dump(2));
    return rep_cmp.agreement ? 0 : 4;
}

int run_pair(const RunConfig& cfg, const std::string& alpha_s, const std::string& beta_s,
             const std::string& lambda_s) {
    BaseField k(cfg.p, cfg.prec);
    QuaternionPairSpec spec = normalize_pair_spec(k, parse_value(k, alpha_s),
                                                  parse_value(k, beta_s), parse_value(k, lambda_s));
    json j;
    j["p"] = cfg.p;
    j["normalized"] = {{"alpha", spec.alpha_class.lift},
                       {"beta", spec.beta_class.lift},
                       {"lambda", spec.lambda.str()}};
    SplitResult sr = split_check(spec);
    j["algebra"] = to_string(sr);
    RelativePosition rel = relative_position(spec);  // throws degenerate_error when degenerate
    j["fake_distance"] = rel.fake.infinite ? json("infinity") : json(rat_str(rel.fake.value));
    j["position"] = {{"kind", to_string(rel.kind)}, {"value", rat_str(rel.value)}};
    bool agreement = true;
    if (sr == SplitResult::Splits && rel.kind != RelativePosition::Kind::Ray) {
        auto [qi, qj] = construct_pair(spec);
        ThickPath ti = branch_predict(k, qi), tj = branch_predict(k, qj);
        BallK center = pair_anchor(k, ti, tj);
        MeasuredPosition mp = oracle_pair_position(k, qi.m, qj.m, center, Rational(cfg.radius));
        j["oracle"] = {{"kind", mp.intersects ? "intersection" : "distance"},
                       {"value", rat_str(mp.value)}};
        agreement = (mp.intersects == (rel.kind == RelativePosition::Kind::Intersection)) &&
                    mp.value == rel.value;
        j["agreement"] = agreement;
    } else {
        j["oracle"] = "skipped (division algebra or shared ray)";
    }
    emit(cfg, j.dump(2));
    return agreement ? 0 : 4;
}

int run_embed(const RunConfig& cfg, const std::string& kind_s, long long r, long long t) {
    ExtensionKind kind =
        kind_s == "ramified" ? ExtensionKind::Ramified : ExtensionKind::Unramified;
    if (kind_s != "ramified" && kind_s != "unramified")
        throw std::invalid_argument("kind must be 'unramified' or 'ramified'");
    if (!existence(kind, r, t))
        throw std::domain_error("no optimal embeddings exist: " + kind_s +
                                " requires r <= " + std::to_string(2 * t + (kind_s == "ramified")));
    ConsistencyReport rep = consistency_report(kind, r, t, cfg.p);
    emit(cfg, embedding_json(rep).dump(2));
    return rep.ok ? 0 : 4;
}

int run_chi(const RunConfig& cfg, long long r, long long u, long long t) {
    json j;
    j["p"] = cfg.p;
    j["chi"] = chi(r, u, t, cfg.p);
    j["chi3"] = chi3(r, t, cfg.p);
    emit(cfg, j.dump(2));
    return 0;
}

int run_oracle_sweep(const RunConfig& cfg, long long span) {
    BaseField k(cfg.p, cfg.prec);
    TreeK tree(k);
    json j;
    j["p"] = cfg.p;
    long long checked = 0;
    json mism = json::array();
    // branch predictions against the containment oracle, all class representatives
    for (const auto& cls : square_class_reps(cfg.p, cfg.prec)) {
        PureQuaternion gen = realize_generator(k, cls.rep, k.zero(), k.one());
        ThickPath tp = branch_predict(k, gen);
        BallK center = tp.cls == StemClass::Split ? tree.root() : tp.stem.front();
        BranchReport rep = branch_compare(k, {gen.m}, center, Rational(cfg.radius));
        ++checked;
        if (!rep.agreement)
            mism.push_back({{"kind", "branch"}, {"alpha", cls.lift}});
    }
    // pair positions against the two-branch oracle
    auto reps = square_class_reps(cfg.p, cfg.prec);
    std::mt19937_64 rng(cfg.seed);
    for (const auto& ca : reps) {
        for (const auto& cb : reps) {
            for (long long v = -span; v <= span; ++v) {
                long long u = 1 + static_cast<long long>(rng() % static_cast<std::uint64_t>(
                                                             cfg.p - 1));
                PadicNumber lambda = k.from_int(u).shifted(v);
                QuaternionPairSpec spec = normalize_pair_spec(k, ca.rep, cb.rep, lambda);
                if ((spec.lambda * spec.lambda - spec.alpha * spec.beta).is_zero_like()) continue;
                if (split_check(spec) != SplitResult::Splits) continue;
                RelativePosition rel = relative_position(spec);
                auto [qi, qj] = construct_pair(spec);
                BallK center = pair_anchor(k, branch_predict(k, qi), branch_predict(k, qj));
                MeasuredPosition mp =
                    oracle_pair_position(k, qi.m, qj.m, center, Rational(cfg.radius));
                ++checked;
                bool ok =
                    (mp.intersects == (rel.kind == RelativePosition::Kind::Intersection)) &&
                    mp.value == rel.value;
                if (!ok)
                    mism.push_back({{"kind", "pair"},
                                    {"alpha", ca.lift},
                                    {"beta", cb.lift},
                                    {"lambda", lambda.str()}});
            }
        }
    }
    // walk census against the embedding-number table
    for (int kind_i = 0; kind_i < 2; ++kind_i) {
        ExtensionKind kind = kind_i ? ExtensionKind::Ramified : ExtensionKind::Unramified;
        for (long long t = 0; t <= 4; ++t)
            for (long long r = 1; r <= 6; ++r) {
                if (!existence(kind, r, t)) continue;
                ConsistencyReport rep = consistency_report(kind, r, t, cfg.p);
                ++checked;
                if (!rep.census_n_ok || !rep.census_m_ok)
                    mism.push_back({{"kind", "census"},
                                    {"extension", to_string(kind)},
                                    {"r", r},
                                    {"t", t}});
            }
    }
    j["checked"] = checked;
    j["mismatches"] = mism;
    emit(cfg, j.dump(2));
    return mism.empty() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"branches of orders on the Bruhat-Tits tree: exact p-adic computations"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--p", cfg.p, "prime of the base field Q_p")->capture_default_str();
    app.add_option("--prec", cfg.prec, "working precision in base-p digits")
        ->capture_default_str();
    app.add_option("--radius", cfg.radius, "enumeration radius for oracles (max 8)")
        ->check(CLI::Range(1, 8))
        ->capture_default_str();
    app.add_option("--format", cfg.format, "output format: json, dot or text")
        ->check(CLI::IsMember({"json", "dot", "text"}))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized sweeps")->capture_default_str();
    app.add_option("--out", cfg.out, "write output to a file instead of stdout");

    std::string value, a{"0"}, b{"1"}, beta, lambda, kind{"unramified"};
    long long r = 0, t = 0, u = 0, span = 2;

    auto* c_defect = app.add_subcommand("defect", "quadratic defect exponent of a value");
    c_defect->add_option("value", value, "element of Q_p (integer or num/den)")->required();

    auto* c_classes = app.add_subcommand("classes", "square class representatives of Q_p*");

    auto* c_hilbert = app.add_subcommand("hilbert", "Hilbert symbol (a, b)");
    c_hilbert->add_option("a", value)->required();
    c_hilbert->add_option("b", beta)->required();

    auto* c_branch = app.add_subcommand("branch", "stem and depth of a branch, with oracle check");
    c_branch->add_option("alpha", value, "square of the generator")->required();
    c_branch->add_option("a", a, "ghost end coefficient a (default 0)");
    c_branch->add_option("b", b, "ghost end coefficient b (default 1)");

    auto* c_pair = app.add_subcommand("pair", "relative position of two branches");
    c_pair->add_option("alpha", value)->required();
    c_pair->add_option("beta", beta)->required();
    c_pair->add_option("lambda", lambda, "half the anticommutator (num/den allowed)")->required();

    auto* c_embed = app.add_subcommand("embed", "optimal embedding numbers");
    c_embed->add_option("--kind", kind, "unramified or ramified")->capture_default_str();
    c_embed->add_option("-r", r, "Eichler level")->required();
    c_embed->add_option("-t", t, "conductor exponent")->required();

    auto* c_chi = app.add_subcommand("chi", "the character count chi(r,u,t) and chi3");
    c_chi->add_option("-r", r)->required();
    c_chi->add_option("-u", u)->required();
    c_chi->add_option("-t", t)->required();

    auto* c_sweep = app.add_subcommand("oracle-sweep", "formula-versus-oracle regression sweep");
    c_sweep->add_option("--span", span, "valuation span for lambda values")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_defect)) return run_defect(cfg, value);
        if (app.got_subcommand(c_classes)) return run_classes(cfg);
        if (app.got_subcommand(c_hilbert)) return run_hilbert(cfg, value, beta);
        if (app.got_subcommand(c_branch)) return run_branch(cfg, value, a, b);
        if (app.got_subcommand(c_pair)) return run_pair(cfg, value, beta, lambda);
        if (app.got_subcommand(c_embed)) return run_embed(cfg, kind, r, t);
        if (app.got_subcommand(c_chi)) return run_chi(cfg, r, u, t);
        if (app.got_subcommand(c_sweep)) return run_oracle_sweep(cfg, span);
    } catch (const precision_exhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << std::endl;
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
