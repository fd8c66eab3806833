#pragma once

#include <optional>
#include <utility>

#include "btb/bttree.hpp"
#include "btb/localfield.hpp"

namespace btb {

/**
 * The idempotent tau_{a,b} attached to an ordered pair of distinct ends:
 * kernel spanned by (a,1)^t, image by (b,1)^t (infinity contributing (1,0)^t).
 * Satisfies tau^2 = tau and tau_{b,a} = 1 - tau_{a,b}.
 */
struct Idempotent {
    Mat2k m;
    ProjPk a, b;
};

Idempotent idempotent_from_ends(const BaseField& k, const ProjPk& a, const ProjPk& b);

/// Trace-zero matrix; its square is the scalar alpha = -det.
struct PureQuaternion {
    Mat2k m;
    PadicNumber alpha;
};

PureQuaternion make_pure(const Mat2k& m);

/// The pure quaternion sqrt(alpha)(2 tau_{z,zbar} - 1) with z = a + b sqrt(alpha):
/// the matrix [[-a/b, (a^2 - alpha b^2)/b], [-1/b, a/b]], defined over k.
/// Requires alpha non-square (ends become conjugate ghosts) and b != 0.
PureQuaternion pure_from_conjugate_ends(const BaseField& k, const PadicNumber& alpha,
                                        const PadicNumber& a, const PadicNumber& b);

/// Same matrix without the non-square requirement; for square alpha the two
/// fixed ends a +- b sqrt(alpha) are rational and the stem splits.
PureQuaternion realize_generator(const BaseField& k, const PadicNumber& alpha,
                                 const PadicNumber& a, const PadicNumber& b);

/// lambda = (t+1)/(t-1); sends t = infinity to 1. Throws on the pole t = 1.
PadicNumber lambda_from_t(const BaseField& k, const ProjPk& t);
/// Inverse map t = (lambda+1)/(lambda-1); lambda = 1 maps to infinity.
ProjPk t_from_lambda(const BaseField& k, const PadicNumber& lambda);

/// Normalized triple (alpha, beta, lambda) with alpha, beta square-class
/// representatives; scale factors record the original generators' rescaling
/// (i -> ci * i, j -> cj * j, lambda -> ci cj lambda).
struct QuaternionPairSpec {
    PadicNumber alpha, beta, lambda;
    SquareClass alpha_class, beta_class;
    PadicNumber scale_i, scale_j;
};

QuaternionPairSpec normalize_pair_spec(const BaseField& k, const PadicNumber& alpha,
                                       const PadicNumber& beta, const PadicNumber& lambda);

enum class SplitResult { Splits, Division, Degenerate };

std::string to_string(SplitResult r);

/// Does the algebra k[i,j | i^2=alpha, j^2=beta, ij+ji=2 lambda] split?
/// Degenerate exactly when lambda^2 = alpha beta.  Otherwise the algebra is
/// quaternion; after completing j to an orthogonal generator j - (lambda/alpha) i
/// (with square (alpha beta - lambda^2)/alpha) the Hilbert symbol decides.
SplitResult split_check(const QuaternionPairSpec& spec);

/// Witness (a, b, c, d) for lambda = (b^2 alpha + d^2 beta - (a-c)^2)/(2bd),
/// searched over a bounded valuation box with unit digits of limited depth.
struct Witness {
    PadicNumber a, b, c, d;
};

std::optional<Witness> find_witness(const BaseField& k, const PadicNumber& alpha,
                                    const PadicNumber& beta, const PadicNumber& lambda,
                                    int bound = 4, int digit_depth = 2);

/// A pair (i, j) of pure quaternions realizing the normalized spec, with
/// i^2 = alpha, j^2 = beta, ij + ji = 2 lambda, verified to precision.
/// Throws degenerate_error when lambda^2 = alpha beta and a runtime error when
/// no witness is found within the search bound.
std::pair<PureQuaternion, PureQuaternion> construct_pair(const QuaternionPairSpec& spec);

}  // namespace btb
