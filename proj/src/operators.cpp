#include "cellwalk/operators.hpp"

#include <cmath>
#include <cstdlib>

#include "cellwalk/generators.hpp"

namespace cellwalk {

OperatorRep build_propagation(const TransitionTable& table) {
    const int m = table.orbit_count();
    const int dim = 2 * m + 1;  // doubled orbits plus Theta
    const int theta = 2 * m;
    GroupRingMatrix<Rational> p(table.group, dim, dim);
    const GroupElement id = GroupElement::identity(table.group);

    p.at(theta, theta).add_term(id, Rational(1));
    for (int a = 0; a < m; ++a) {
        for (int nu : {+1, -1}) {
            const int col = oriented_state_index(a, nu);
            p.at(col, col).add_term(id, table.q);
            p.at(theta, col).add_term(id, table.theta_prob[static_cast<std::size_t>(a)]);
            for (const auto& mv : table.moves[static_cast<std::size_t>(a)]) {
                const int row = oriented_state_index(mv.target_orbit, nu * mv.sign);
                p.at(row, col).add_term(mv.shift, mv.prob);
            }
        }
    }
    return {std::move(p), "I_k^* (oriented cells + Theta)", "I_k^* (oriented cells + Theta)",
            table.degree, table.q};
}

ChainMaps build_chain_maps(const GCWComplex& x, int k) {
    const int m = x.orbit_count(k);
    GroupRingMatrix<Rational> proj(x.group, m, 2 * m + 1);
    GroupRingMatrix<Rational> incl(x.group, 2 * m + 1, m);
    const GroupElement id = GroupElement::identity(x.group);
    for (int a = 0; a < m; ++a) {
        proj.at(a, oriented_state_index(a, +1)).add_term(id, Rational(1));
        proj.at(a, oriented_state_index(a, -1)).add_term(id, Rational(-1));
        incl.at(oriented_state_index(a, +1), a).add_term(id, Rational(1));
    }
    ChainMaps maps;
    maps.projection = {std::move(proj), "I_k^* (oriented cells + Theta)", "I_k", k, Rational(0)};
    maps.inclusion = {std::move(incl), "I_k", "I_k^* (oriented cells + Theta)", k, Rational(0)};
    return maps;
}

OperatorRep build_signed_walk(const GCWComplex& x, int k, const Rational& q,
                              bool allow_absorbing) {
    auto data = degree_quantities(x, k, allow_absorbing);
    const int m = x.orbit_count(k);
    GroupRingMatrix<Rational> b(x.group, m, m);
    const GroupElement id = GroupElement::identity(x.group);
    const Rational lazy_rest = Rational(1) - q;

    // Column alpha' collects sum_beta d(target cell, alpha', beta) over the
    // cofaces of alpha', scaled by 1/(d_plus d_minus)(alpha'), with the
    // relative shift recorded on the group element. The cell diagonal of the
    // non-lazy part vanishes because the route back through the same triple
    // is excluded.
    for (int src = 0; src < m; ++src) {
        const auto& od = data.orbits[static_cast<std::size_t>(src)];
        if (od.d_plus * od.d_minus == 0) continue;  // absorbing column stays zero
        Rational denom = lazy_rest / (Rational(od.d_plus) * Rational(od.d_minus));
        denom.canonicalize();
        if (sgn(denom) == 0) continue;
        for (int bb = 0; bb < x.orbit_count(k + 1); ++bb) {
            const auto& ts = x.triples(k + 1, bb);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (ts[i].face != src) continue;
                for (std::size_t j = 0; j < ts.size(); ++j) {
                    if (j == i) continue;
                    const long strength =
                        -static_cast<long>(ts[i].coeff) * static_cast<long>(ts[j].coeff);
                    b.at(ts[j].face, src).add_term(ts[j].shift - ts[i].shift,
                                                   Rational(strength) * denom);
                }
            }
        }
    }
    for (int a = 0; a < m; ++a) b.at(a, a).add_term(id, q);
    return {std::move(b), "I_k", "I_k", k, q};
}

OperatorRep build_upper_laplacian(const GCWComplex& x, int k) {
    if (k < 0 || k > x.dim) throw DimensionError("degree out of range");
    const int m = x.orbit_count(k);
    GroupRingMatrix<Rational> lap(x.group, m, m);
    const GroupElement id = GroupElement::identity(x.group);
    if (k + 1 > x.dim) {
        // Top degree: no cofaces, the operator is zero.
        return {std::move(lap), "I_k", "I_k", k, Rational(0)};
    }

    for (int bb = 0; bb < x.orbit_count(k + 1); ++bb) {
        const auto& ts = x.triples(k + 1, bb);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const long c = ts[i].coeff;
            lap.at(ts[i].face, ts[i].face).add_term(id, Rational(c * c));
            for (std::size_t j = 0; j < ts.size(); ++j) {
                if (j == i) continue;
                // minus the connection strength d = -[b:a][b:a'] on the shift
                lap.at(ts[j].face, ts[i].face)
                    .add_term(ts[j].shift - ts[i].shift,
                              Rational(static_cast<long>(ts[i].coeff) * ts[j].coeff));
            }
        }
    }

    // Cross-check against the boundary-operator construction d d*.
    auto d = boundary_matrix(x, k);
    auto via_boundary = d * d.adjoint();
    if (!(via_boundary == lap))
        throw Error("internal error: Laplacian formula disagrees with d d*");
    return {std::move(lap), "I_k", "I_k", k, Rational(0)};
}

std::pair<OperatorRep, OperatorRep> build_multiplication_ops(const GCWComplex& x, int k,
                                                             const Rational& q) {
    if (q < 0 || q > 1) throw DomainError("laziness q must lie in [0,1]");
    auto data = degree_quantities(x, k);
    const int m = x.orbit_count(k);
    GroupRingMatrix<Rational> m1(x.group, m, m), m2(x.group, m, m);
    const GroupElement id = GroupElement::identity(x.group);
    for (int a = 0; a < m; ++a) {
        const auto& od = data.orbits[static_cast<std::size_t>(a)];
        const Rational pd(od.d_plus * od.d_minus);
        Rational den = q * pd + (Rational(1) - q) * Rational(od.d_plus2);
        den.canonicalize();
        Rational v1 = pd / den;
        Rational v2 = (Rational(1) - q) / den;
        v1.canonicalize();
        v2.canonicalize();
        m1.at(a, a).add_term(id, v1);
        m2.at(a, a).add_term(id, v2);
    }
    OperatorRep r1{std::move(m1), "I_k", "I_k", k, q};
    OperatorRep r2{std::move(m2), "I_k", "I_k", k, q};
    return {std::move(r1), std::move(r2)};
}

namespace {

double max_abs_defect(const GroupRingMatrix<Rational>& lhs, const GroupRingMatrix<Rational>& rhs) {
    return (lhs - rhs).max_abs_coefficient();
}

}  // namespace

IdentityReport verify_walk_laplacian_identity(const GCWComplex& x, int k, const Rational& q) {
    auto walk = build_signed_walk(x, k, q);
    auto lap = build_upper_laplacian(x, k);
    auto [m1, m2] = build_multiplication_ops(x, k, q);
    auto lhs = walk.matrix * m1.matrix;
    auto rhs = GroupRingMatrix<Rational>::identity(x.group, x.orbit_count(k)) -
               lap.matrix * m2.matrix;
    IdentityReport rep;
    rep.holds = lhs == rhs;
    rep.max_defect = rep.holds ? 0.0 : max_abs_defect(lhs, rhs);
    if (!rep.holds) rep.detail = "walk-Laplacian identity defect";
    return rep;
}

IdentityReport verify_chain_map_identities(const GCWComplex& x, int k, const Rational& q, int n_max) {
    if (n_max < 1) throw DomainError("n_max must be at least 1");
    auto table = build_transitions(x, k, q);
    auto walk = build_signed_walk(x, k, q);
    auto prop = build_propagation(table);
    auto maps = build_chain_maps(x, k);
    const auto& t = maps.projection.matrix;
    const auto& incl = maps.inclusion.matrix;

    IdentityReport rep;
    rep.holds = true;
    rep.max_defect = 0.0;
    auto record = [&rep](bool ok, double defect, const std::string& what) {
        if (!ok) {
            rep.holds = false;
            rep.max_defect = std::max(rep.max_defect, defect);
            if (!rep.detail.empty()) rep.detail += "; ";
            rep.detail += what;
        }
    };

    {
        auto lhs = walk.matrix * t;
        auto rhs = t * prop.matrix;
        record(lhs == rhs, max_abs_defect(lhs, rhs), "B_q T != T P_q");
    }
    {
        auto rhs = t * prop.matrix * incl;
        record(walk.matrix == rhs, max_abs_defect(walk.matrix, rhs), "B_q != T P_q I");
    }
    {
        auto walk_pow = GroupRingMatrix<Rational>::identity(x.group, x.orbit_count(k));
        auto prop_pow = GroupRingMatrix<Rational>::identity(x.group, 2 * x.orbit_count(k) + 1);
        for (int n = 0; n <= n_max; ++n) {
            if (n > 0) {
                walk_pow = walk_pow * walk.matrix;
                prop_pow = prop_pow * prop.matrix;
            }
            auto rhs = t * prop_pow * incl;
            record(walk_pow == rhs, max_abs_defect(walk_pow, rhs),
                   "B_q^" + std::to_string(n) + " != T P_q^" + std::to_string(n) + " I");
        }
    }
    return rep;
}

GridEigenstateReport eigenstate_check_grid(const Rational& q) {
    if (q < 0 || q > 1) throw DomainError("laziness q must lie in [0,1]");
    const GCWComplex grid = make_grid2d();
    const Group g = grid.group;
    using Elem = GroupRingElement<Rational>;

    auto mono = [&g](int a, int b, long c) {
        return Elem::monomial(g, GroupElement::of({a, b}), Rational(c));
    };
    const Elem one = Elem::one(g);
    const Elem x = mono(1, 0, 1);
    const Elem xinv = mono(-1, 0, 1);
    const Elem y = mono(0, 1, 1);
    const Elem yinv = mono(0, -1, 1);

    // S = (1-x) up + (y-1) right, the boundary of the square orbit.
    const Elem s_up = one - x;
    const Elem s_right = y - one;
    {
        auto d2 = boundary_matrix(grid, 1);
        if (!(d2.at(0, 0) == s_up && d2.at(1, 0) == s_right))
            throw Error("grid2d boundary does not match the square-boundary chain");
    }

    GridEigenstateReport rep;

    auto apply = [](const GroupRingMatrix<Rational>& m, const Elem& v0, const Elem& v1) {
        return std::make_pair(m.at(0, 0) * v0 + m.at(0, 1) * v1,
                              m.at(1, 0) * v0 + m.at(1, 1) * v1);
    };

    // Non-lazy eigenstate: B S = (1/6)(x + x^-1 + y + y^-1 - 2) S.
    auto walk0 = build_signed_walk(grid, 1, Rational(0));
    Elem eigen0 = (x + xinv + y + yinv - one * Rational(2)) * rational(1, 6);
    {
        auto [b0, b1] = apply(walk0.matrix, s_up, s_right);
        rep.eigenstate_holds = (b0 == eigen0 * s_up) && (b1 == eigen0 * s_right);
    }

    // Lazy eigenstate through the shifted nearest-neighbour element:
    // B_q S = C1^-1 (4 C2 P^{Z^2} + (1 - 4 C2)) S with q' = 1 - 4 C2.
    auto reg = check_upper_k_regular(grid, 1);
    const Rational c1 = reg.c1(q);
    const Rational c2 = reg.c2(q);
    Rational qprime = (Rational(4) * q - 1) / (Rational(2) * q + 1);
    qprime.canonicalize();
    rep.q_prime = qprime;
    {
        Rational one_minus_4c2 = Rational(1) - Rational(4) * c2;
        one_minus_4c2.canonicalize();
        if (!(one_minus_4c2 == qprime))
            throw Error("internal error: q' != 1 - 4 C2 on the grid");
        auto walkq = build_signed_walk(grid, 1, q);
        Elem lazy_nn = (x + xinv + y + yinv) * c2 + one * qprime;  // P^{Z^2}_{q'}
        Elem factor = lazy_nn * (Rational(1) / c1);
        auto [b0, b1] = apply(walkq.matrix, s_up, s_right);
        rep.lazy_eigenstate_holds = (b0 == factor * s_up) && (b1 == factor * s_right);

        // Walk image of the vertical edge:
        // B_q(up) = C1^-1 up + C1^-1 C2 (x^-1 - 1) S.
        Elem coeff = (xinv - one) * (c2 / c1);
        Elem expect_up = one * (Rational(1) / c1) + coeff * s_up;
        Elem expect_right = coeff * s_right;
        rep.edge_image_holds =
            (walkq.matrix.at(0, 0) == expect_up) && (walkq.matrix.at(1, 0) == expect_right);
    }
    return rep;
}

}  // namespace cellwalk
