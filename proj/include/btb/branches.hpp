#pragma once

#include <optional>
#include <string>
#include <vector>

#include "btb/bttree.hpp"
#include "btb/quaternions.hpp"

namespace btb {

enum class StemClass { Split, Unramified, Ramified };

std::string to_string(StemClass c);

/// Stem length l of the branch: infinity, 0 or 1 (empty optional = infinity).
std::optional<long long> stem_length(StemClass c);

StemClass stem_class_of(const PadicNumber& alpha);

/// The conjugate ghost ends z, zbar of a pure quaternion with non-square
/// square, recovered from the matrix entries: z = a + b sqrt(alpha).
struct GhostEnds {
    PadicNumber a, b;
    QuadExtElement z, zbar;
};

GhostEnds ghost_stem_ends(const BaseField& k, const PureQuaternion& q);

/// Base of the k-vine: the element xi = a + b delta of k closest to the ghost
/// end z = a + b sqrt(alpha); (delta^2 - alpha) spans the quadratic defect.
PadicNumber vine_base(const BaseField& k, const PadicNumber& alpha, const PadicNumber& a,
                      const PadicNumber& b);

/**
 * Predicted shape of a branch over k: the stem (a maximal path for split
 * classes, one vertex for unramified, an edge for ramified) together with the
 * tubular depth.
 */
struct ThickPath {
    StemClass cls;
    std::optional<std::pair<ProjPk, ProjPk>> split_ends;  // Split only
    std::vector<BallK> stem;                              // 1 or 2 vertices otherwise
    Rational depth{0};
};

/// Stem location and depth for the default generator of alpha (ends 0 +- sqrt(alpha)).
ThickPath k_stem_and_depth(const BaseField& k, const PadicNumber& alpha);

/// Stem location and depth of s_k(i) for a given pure quaternion; requires
/// i^2 to be a square or a square-class representative.
ThickPath branch_predict(const BaseField& k, const PureQuaternion& i);

bool thick_path_contains(const TreeK& tree, const ThickPath& tp, const BallK& v);

/// The predicted branch intersected with the enumeration ball.
std::vector<BallK> predicted_vertices(const TreeK& tree, const ThickPath& tp, const BallK& center,
                                      const Rational& radius);

/// Formula-versus-oracle comparison for a generating set.
struct BranchReport {
    bool trivial = false;  // scalar generators constrain nothing
    std::vector<ThickPath> predicted;
    std::vector<std::string> predicted_ids;
    std::vector<std::string> oracle_ids;
    bool agreement = false;
    std::vector<std::string> mismatches;
};

BranchReport branch_compare(const BaseField& k, const std::vector<Mat2k>& gens,
                            const BallK& center, const Rational& radius);

// ---------------------------------------------------------------------------
// Theorem-level relative position of two branches
// ---------------------------------------------------------------------------

/// The fake distance: positive values are genuine stem distances, non-positive
/// values encode intersection lengths; empty = +infinity (shared ray).
struct FakeDistance {
    bool infinite = false;
    Rational value{0};
};

FakeDistance fake_distance(const QuaternionPairSpec& spec);

struct RelativePosition {
    enum class Kind { Distance, Intersection, Ray };
    Kind kind;
    Rational value{0};  // distance, or intersection length in edges
    FakeDistance fake;
};

std::string to_string(RelativePosition::Kind k);

RelativePosition relative_position(const QuaternionPairSpec& spec);

// ---------------------------------------------------------------------------
// Oracle-side measurement (independent of the formulas above: containment
// enumeration plus erosion)
// ---------------------------------------------------------------------------

/// Erodes an oracle vertex set to its stem: each pass keeps the vertices all
/// of whose neighbors belong to the set, shrinking the trusted window by one
/// step per pass.  Returns the last nonempty stage and the number of passes
/// (the measured depth).
std::pair<std::vector<BallK>, int> erode_to_stem(const TreeK& tree, const std::vector<BallK>& set,
                                                 const BallK& center, const Rational& radius);

struct MeasuredPosition {
    bool intersects = false;
    Rational value{0};  // distance between stems, or intersection length in edges
    int depth_i = 0, depth_j = 0;
};

/// Enumerates both branches around `center`, erodes to stems, and measures
/// their distance or overlap length.
MeasuredPosition oracle_pair_position(const BaseField& k, const Mat2k& gi, const Mat2k& gj,
                                      const BallK& center, const Rational& radius);

/// A stem vertex of the predicted i-branch closest to the predicted j-stem;
/// a sensible window center for pair comparisons.
BallK pair_anchor(const BaseField& k, const ThickPath& ti, const ThickPath& tj);

}  // namespace btb
