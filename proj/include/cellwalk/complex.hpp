#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cellwalk/group_ring.hpp"

namespace cellwalk {

/// One incidence triple of a (k+1)-orbit: [beta : shift . face] = coeff,
/// where face names a k-orbit representative.
struct IncidenceTriple {
    int face = 0;
    GroupElement shift;
    int coeff = 0;
};

/// Quotient description of a free G-CW complex of finite type: named cell
/// orbits per degree plus incidence triples of each orbit onto the degree
/// below. incidence[d][b] lists the triples of the b-th d-orbit (d >= 1).
struct GCWComplex {
    Group group;
    int dim = 0;
    std::vector<std::vector<std::string>> orbit_names;            // [degree][orbit]
    std::vector<std::vector<std::vector<IncidenceTriple>>> incidence;  // [degree][orbit][triple]

    int orbit_count(int k) const {
        if (k < 0 || k > dim) return 0;
        return static_cast<int>(orbit_names[static_cast<std::size_t>(k)].size());
    }

    int orbit_index(int k, const std::string& name) const;

    const std::vector<IncidenceTriple>& triples(int degree, int orbit) const {
        return incidence[static_cast<std::size_t>(degree)][static_cast<std::size_t>(orbit)];
    }
};

/// Parse and validate a JSON manifest. Duplicate (cell, face, shift) triples
/// are summed and exact zeros dropped.
GCWComplex load_complex(const std::string& json_text);
GCWComplex load_complex_file(const std::string& path);

/// Canonical JSON serialization: load(save(X)) == X and save(load(m)) is a
/// fixed point for canonical manifests.
std::string save_complex(const GCWComplex& x);

/// Boundary operator from (k+1)-chains to k-chains as a group-ring matrix:
/// rows are k-orbits, columns (k+1)-orbits, entry = sum_g [beta : g.alpha] g.
GroupRingMatrix<Rational> boundary_matrix(const GCWComplex& x, int k);

/// Local degree quantities of the k-orbits and the derived global bounds.
struct DegreeData {
    struct OrbitDegrees {
        long d_plus2 = 0;   // sum of squared incidence coefficients
        long d_plus = 0;    // sum of absolute incidence coefficients
        long d_minus = 0;   // max outgoing incidence over cofaces
    };

    std::vector<OrbitDegrees> orbits;
    // (beta orbit, alpha orbit) -> worst-case d_-(beta; alpha) over the
    // cofaces of alpha lying in the beta orbit.
    std::map<std::pair<int, int>, long> d_minus_beta;
    long degree_bound = 0;       // D: max of all three quantities over orbits
    long spectral_bound = 0;     // S_k: explicit upper Laplacian norm bound
    Rational q0;                 // laziness threshold with C_{2,q} <= 1/S_k
    std::vector<int> degenerate_orbits;  // orbits with d_plus * d_minus = 0
};

/// Compute DegreeData for degree k. Degenerate cells raise
/// DegenerateCellError unless allow_absorbing is set.
DegreeData degree_quantities(const GCWComplex& x, int k, bool allow_absorbing = false);

struct ConnectivityReport {
    bool connected = false;
    std::string witness;  // disconnecting partition or proper sublattice when false
};

/// Upper k-connectivity of X (the covering space, not the quotient).
/// Trivial group: BFS on the coface-sharing graph. Free abelian: quotient
/// graph connected and the cycle-voltage lattice equal to Z^d.
ConnectivityReport check_upper_k_connected(const GCWComplex& x, int k);

struct RegularityReport {
    bool regular = false;
    long dpdm = 0;     // common d_plus * d_minus when regular
    long d_plus2 = 0;  // common d_plus2 when regular
    std::string c1_formula;
    std::string c2_formula;

    Rational c1(const Rational& q) const;
    Rational c2(const Rational& q) const;
};

/// Upper k-regularity: d_plus*d_minus and d_plus2 constant across k-orbits.
/// When regular the closed-form constants C_{1,q}, C_{2,q} are provided.
RegularityReport check_upper_k_regular(const GCWComplex& x, int k);

}  // namespace cellwalk
