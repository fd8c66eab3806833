#pragma once

#include <functional>
#include <string>
#include <vector>

#include "btb/bttree.hpp"
#include "btb/rational.hpp"

namespace btb {

enum class ExtensionKind { Unramified, Ramified };

std::string to_string(ExtensionKind k);

/// Do optimal embeddings of O_L^{t} into an Eichler order of level r exist?
/// Unramified: r <= 2t.  Ramified: r <= 2t + 1.
bool existence(ExtensionKind kind, long long r, long long t);

/// chi(r, u, t): the number of classes a in (o/pi^{t-r+2u})* with a^2 = 1 and
/// nu(a-1) = t-r+u for any lifting; 1 by convention for u = 0.
long long chi(long long r, long long u, long long t, long long p);

/// chi3 = sum of chi(r, u, t) for u from max{0, r-t} to [r/2]; 0 when empty.
long long chi3(long long r, long long t, long long p);

/// The (m, chi2) columns of the invariant table, by row:
///   odd r < 2t -> (0, 0);  r = 2h < 2t -> ((q-1) q^{h-1}, chi(r,h,t));
///   unramified r = 2t -> (q^t, chi(r,t,t));  ramified r = 2t -> ((q-1) q^{t-1}, chi(r,t,t));
///   ramified r = 2t+1 -> (q^t, chi(r,t,t)).
struct TableRow {
    long long m;
    long long chi2;
};

TableRow table1(ExtensionKind kind, long long r, long long t, long long p);

/**
 * The embedding vector e = (e1, e2, e3, e4) evaluated from
 *   e = (n/2)(4,2,2,1) - (m/2)(2,1,1,0) + (chi2/4)(0,2,0,1) + (chi3/4)(0,0,2,1)
 * with n = q^{[r/2]}, kept as exact rationals.  Non-integral entries are never
 * rounded; they are reported through the flags.
 */
struct EmbeddingVector {
    Rational e1, e2, e3, e4;
    long long n = 0, m = 0, chi2 = 0, chi3 = 0;
    bool integral = false;    // all entries positive integers
    bool consistent = false;  // Burnside identities hold for these n, m, chi2, chi3
};

EmbeddingVector embedding_vector(ExtensionKind kind, long long r, long long t, long long p);

/// The finite combinatorial stand-in for the branch of O_L^{t}: a thick path
/// with stem length 0 (unramified) or 1 (ramified), depth t, arity q+1.
struct ThickPathModel {
    int stem_len;       // 0 or 1
    long long t;        // depth
    long long q;        // residue size
    long long truncation = 16;  // walk-length budget
};

struct CensusResult {
    long long n;  // backtracking-free walks of length r from a fixed optimal vertex
    long long m;  // those ending at an optimal vertex
};

/// Exhaustive walk census inside the model; optional visitor receives the
/// depth profile (distance-to-stem complement) of every walk counted in n.
CensusResult walk_census(const ThickPathModel& model, long long r,
                         const std::function<void(const std::vector<long long>&)>& visitor = {});

/// nu(t - 1) for t = [a,b;c,d]: the (signed) distance between the paths p(a,b)
/// and p(c,d); negative values measure the length of their overlap.
Rational distance_from_cross_ratio(const BaseField& k, const ProjPk& a, const ProjPk& b,
                                   const ProjPk& c, const ProjPk& d);

/// Formula evaluation, walk census and Burnside identities side by side.
struct ConsistencyReport {
    ExtensionKind kind;
    long long r, t, p;
    bool exists;
    EmbeddingVector vec;      // valid when exists
    CensusResult census{0, 0};
    bool census_n_ok = false;  // census n == q^{[r/2]}
    bool census_m_ok = false;  // census m == table m
    std::vector<std::string> issues;
    bool ok = false;
};

ConsistencyReport consistency_report(ExtensionKind kind, long long r, long long t, long long p);

}  // namespace btb
