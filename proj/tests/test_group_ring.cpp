#include <doctest.h>

#include <cmath>

#include "cellwalk/fourier.hpp"
#include "cellwalk/group_ring.hpp"
#include "oracles.hpp"

using namespace cellwalk;

namespace {

const Group kZ = Group::free_abelian(1);
const Group kZ2 = Group::free_abelian(2);

GroupRingElement<Rational> mono(const Group& g, std::initializer_list<std::int32_t> coords,
                                long num, long den = 1) {
    return GroupRingElement<Rational>::monomial(g, GroupElement::of(coords), rational(num, den));
}

GroupRingElement<Rational> random_element(oracles::TestRng& rng, const Group& g, int max_terms) {
    GroupRingElement<Rational> e(g);
    const int n = rng.uniform(0, max_terms);
    for (int i = 0; i < n; ++i) {
        std::vector<std::int32_t> c(static_cast<std::size_t>(g.rank));
        for (auto& v : c) v = static_cast<std::int32_t>(rng.uniform(-3, 3));
        e.add_term(GroupElement::of(c), rational(rng.uniform(-5, 5), rng.uniform(1, 4)));
    }
    return e;
}

}  // namespace

TEST_CASE("ring multiplication: inverse pair and telescoping") {
    auto x = mono(kZ, {1}, 1);
    auto xinv = mono(kZ, {-1}, 1);
    CHECK(x * xinv == GroupRingElement<Rational>::one(kZ));

    auto one = GroupRingElement<Rational>::one(kZ);
    auto lhs = (one - x) * (one + x);
    auto x2 = mono(kZ, {2}, 1);
    CHECK(lhs == one - x2);
}

TEST_CASE("ring multiplication matches brute-force support enumeration") {
    // the (1-x)-style coefficient pattern of the square boundary, squared
    auto one = GroupRingElement<Rational>::one(kZ2);
    auto x = mono(kZ2, {1, 0}, 1);
    auto y = mono(kZ2, {0, 1}, 1);
    auto s = (one - x) + (y - one) * rational(2, 3);
    CHECK(s * s == oracles::convolve_bruteforce(s, s));

    oracles::TestRng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_element(rng, kZ2, 6);
        auto b = random_element(rng, kZ2, 6);
        CHECK(a * b == oracles::convolve_bruteforce(a, b));
    }
}

TEST_CASE("ring axioms on randomized elements (exact)") {
    oracles::TestRng rng(7);
    const auto one = GroupRingElement<Rational>::one(kZ2);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_element(rng, kZ2, 5);
        auto b = random_element(rng, kZ2, 5);
        auto c = random_element(rng, kZ2, 5);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * one == a);
        CHECK(one * a == a);
    }
}

TEST_CASE("group and scalar mode mismatches are rejected") {
    auto a = mono(kZ, {1}, 1);
    auto b = mono(kZ2, {1, 0}, 1);
    CHECK_THROWS_AS(a * b, DimensionError);
    CHECK_THROWS_AS(a + b, DimensionError);
}

TEST_CASE("involution: generators, linearity, anti-automorphism") {
    auto x = mono(kZ, {1}, 1);
    auto xinv = mono(kZ, {-1}, 1);
    CHECK(x.involution() == xinv);

    auto one = GroupRingElement<Rational>::one(kZ);
    CHECK((one - x).involution() == one - xinv);

    oracles::TestRng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_element(rng, kZ2, 5);
        auto b = random_element(rng, kZ2, 5);
        CHECK(a.involution().involution() == a);
        CHECK((a * b).involution() == b.involution() * a.involution());
    }
}

TEST_CASE("matrix power and identity trace basics") {
    auto m = GroupRingMatrix<Rational>::identity(kZ2, 3);
    CHECK(m.power(0) == m);
    CHECK(m.identity_trace() == Rational(3));

    GroupRingMatrix<Rational> a(kZ, 2, 3);
    GroupRingMatrix<Rational> b(kZ, 2, 2);
    CHECK_THROWS_AS(a * b, DimensionError);
    CHECK_THROWS_AS(a.identity_trace(), DimensionError);
}

TEST_CASE("trace property tr(AB) = tr(BA)") {
    oracles::TestRng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        GroupRingMatrix<Rational> a(kZ2, 3, 2), b(kZ2, 2, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j) {
                a.at(i, j) = random_element(rng, kZ2, 3);
                b.at(j, i) = random_element(rng, kZ2, 3);
            }
        CHECK((a * b).identity_trace() == (b * a).identity_trace());
    }
}

TEST_CASE("support cap aborts oversized products") {
    auto saved = support_cap().load();
    support_cap().store(4);
    GroupRingMatrix<Rational> m(kZ, 1, 1);
    for (int i = 0; i < 6; ++i) m.at(0, 0).add_term(GroupElement::of({i}), Rational(1));
    CHECK_THROWS_AS(m * m, SupportCapError);
    support_cap().store(saved);
}

TEST_CASE("fourier evaluation basics") {
    auto x = mono(kZ, {1}, 1);
    auto xinv = mono(kZ, {-1}, 1);
    GroupRingMatrix<Rational> m(kZ, 1, 1);
    m.at(0, 0) = x + xinv;
    const double theta0[] = {0.0};
    auto hat = fourier_evaluate(m, theta0);
    CHECK(hat(0, 0).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(hat(0, 0).imag() == doctest::Approx(0.0).epsilon(1e-14));

    GroupRingMatrix<Rational> trivial(Group::trivial(), 1, 1);
    const double none[] = {0.0};
    CHECK_THROWS_AS(fourier_evaluate(trivial, std::span<const double>(none, 0)), DomainError);
}

TEST_CASE("fourier is a pointwise ring homomorphism and respects adjoints") {
    oracles::TestRng rng(13);
    const double thetas[][2] = {{0.3, 1.1}, {2.0, 4.4}, {5.9, 0.7}};
    for (int trial = 0; trial < 10; ++trial) {
        GroupRingMatrix<Rational> a(kZ2, 2, 2), b(kZ2, 2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                a.at(i, j) = random_element(rng, kZ2, 4);
                b.at(i, j) = random_element(rng, kZ2, 4);
            }
        auto ab = a * b;
        for (const auto& th : thetas) {
            auto ha = fourier_evaluate(a, th);
            auto hb = fourier_evaluate(b, th);
            auto hab = fourier_evaluate(ab, th);
            CHECK((ha * hb - hab).cwiseAbs().maxCoeff() <= 1e-12);
            auto hadj = fourier_evaluate(a.adjoint(), th);
            CHECK((hadj - ha.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("identity trace of powers equals torus quadrature") {
    oracles::TestRng rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        GroupRingMatrix<Rational> m(kZ2, 2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m.at(i, j) = random_element(rng, kZ2, 3);
        const int n_max = 4;
        auto quad = quadrature_trace_powers(m, n_max, 64);
        auto power = GroupRingMatrix<Rational>::identity(kZ2, 2);
        for (int n = 0; n <= n_max; ++n) {
            if (n > 0) power = power * m;
            const double exact = power.identity_trace().get_d();
            CHECK(std::abs(exact - quad[static_cast<std::size_t>(n)]) <=
                  1e-9 * std::max(1.0, std::abs(exact)));
        }
    }
}
