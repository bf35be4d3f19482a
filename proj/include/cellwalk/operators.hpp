#pragma once

#include <string>
#include <utility>

#include "cellwalk/walk.hpp"

namespace cellwalk {

/// A cell-walk operator materialized as a group-ring matrix with its
/// domain/codomain labels and build parameters.
struct OperatorRep {
    GroupRingMatrix<Rational> matrix;
    std::string domain;
    std::string codomain;
    int degree = 0;
    Rational q;
};

/// The projection T (oriented chains to signed chains, Theta killed) and the
/// inclusion I (positive-orientation embedding); T * I = Id.
struct ChainMaps {
    OperatorRep projection;  // orbit_count x (2*orbit_count + 1)
    OperatorRep inclusion;   // (2*orbit_count + 1) x orbit_count
};

// State indexing over I_k^pm plus Theta: (orbit o, sign +) -> 2o,
// (o, -) -> 2o + 1, Theta -> 2m.
inline int oriented_state_index(int orbit, int sign) { return 2 * orbit + (sign > 0 ? 0 : 1); }

/// Propagation operator of the q-lazy walk over the doubled orbit set plus
/// Theta; entry (s, s') holds sum_g P(s' at identity -> s at g) * g.
OperatorRep build_propagation(const TransitionTable& table);

ChainMaps build_chain_maps(const GCWComplex& x, int k);

/// The signed walk operator on k-chains at laziness q (q = 0 gives the
/// non-lazy operator; diagonal identity coefficient equals q).
OperatorRep build_signed_walk(const GCWComplex& x, int k, const Rational& q,
                              bool allow_absorbing = false);

/// Upper k-Laplacian from the local formula; also built as d d* and the two
/// constructions asserted equal.
OperatorRep build_upper_laplacian(const GCWComplex& x, int k);

/// The diagonal multiplication operators pairing the walk with the
/// Laplacian: per orbit dpdm/(q dpdm + (1-q) dp2) and (1-q)/(same).
std::pair<OperatorRep, OperatorRep> build_multiplication_ops(const GCWComplex& x, int k,
                                                             const Rational& q);

struct IdentityReport {
    bool holds = false;
    double max_defect = 0.0;  // largest absolute coefficient difference
    std::string detail;
};

/// Walk-Laplacian identity: B_q o M1 == Id - Laplacian o M2, checked
/// bit-exactly in rational arithmetic.
IdentityReport verify_walk_laplacian_identity(const GCWComplex& x, int k, const Rational& q);

/// Chain-map identities: B_q T == T P_q, B_q == T P_q I, and
/// B_q^n == T P_q^n I for n <= n_max, all bit-exact.
IdentityReport verify_chain_map_identities(const GCWComplex& x, int k, const Rational& q, int n_max);

/// The plane-grid eigenstate relations at laziness q: the square-boundary
/// chain is an eigenstate of the walk operator, the shifted-laziness
/// parameter is (4q-1)/(2q+1), and the walk image of the vertical edge
/// decomposes through it. All checked in exact arithmetic.
struct GridEigenstateReport {
    bool eigenstate_holds = false;      // B S = (1/6)(x+x^-1+y+y^-1-2) S
    bool lazy_eigenstate_holds = false; // B_q S = C1^-1 P^{Z^2}_{q'} S
    bool edge_image_holds = false;      // B_q(up) = C1^-1 up + C1^-1 C2 (x^-1 - 1) S
    Rational q_prime;
    bool holds() const { return eigenstate_holds && lazy_eigenstate_holds && edge_image_holds; }
};

GridEigenstateReport eigenstate_check_grid(const Rational& q);

}  // namespace cellwalk
