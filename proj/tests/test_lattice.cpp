#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cycubic/lattice.hpp"

using namespace cycubic;
using namespace cycubic::lattices;

namespace {

std::vector<Int> iv(std::initializer_list<long> xs) {
    std::vector<Int> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

IntMatrix rows(std::initializer_list<std::vector<Int>> rs) {
    std::size_t n = rs.begin()->size();
    IntMatrix m(rs.size(), n);
    std::size_t i = 0;
    for (const auto& r : rs) m.set_row(i++, r);
    return m;
}

Lattice random_nondegenerate(std::mt19937_64& rng, std::size_t n, int bound) {
    std::uniform_int_distribution<int> e(-bound, bound);
    for (;;) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                m(i, j) = e(rng);
                m(j, i) = m(i, j);
            }
        if (det(m) != 0) return Lattice(std::move(m));
    }
}

}  // namespace

TEST_CASE("signatures of the standard lattices") {
    CHECK(signature(hyperbolic_U()) == std::pair<std::size_t, std::size_t>(1, 1));
    CHECK(signature(big_S()) == std::pair<std::size_t, std::size_t>(20, 2));
    CHECK(signature(A2_neg()) == std::pair<std::size_t, std::size_t>(0, 2));
    CHECK(signature(E8()) == std::pair<std::size_t, std::size_t>(8, 0));
    CHECK(signature(S_neg()) == std::pair<std::size_t, std::size_t>(2, 20));
    CHECK_THROWS_AS(signature(Lattice(IntMatrix(2, 2))), DegenerateLattice);
}

TEST_CASE("discriminant groups of A2, <6>, E8") {
    DiscriminantGroup a2 = discriminant_group(A2());
    REQUIRE(a2.invariant_factors.size() == 1);
    CHECK(a2.invariant_factors[0] == 3);
    CHECK(a2.q_values[0] == Rat(2, 3));  // dual generator (2 e1 + e2)/3 has square 2/3

    DiscriminantGroup six = discriminant_group(span_m(Int(6)));
    REQUIRE(six.invariant_factors.size() == 1);
    CHECK(six.invariant_factors[0] == 6);
    CHECK(six.q_values[0] == Rat(1, 6));  // dual generator v/6

    CHECK(discriminant_group(E8()).invariant_factors.empty());
}

TEST_CASE("discriminant group order equals |det| and q is well-defined") {
    std::mt19937_64 rng(31337);
    int done = 0;
    while (done < 100) {
        std::size_t n = 1 + done % 5;
        Lattice l = random_nondegenerate(rng, n, 6);
        DiscriminantGroup d = discriminant_group(l);
        CHECK(d.order() == abs_int(l.determinant()));
        // recompute in a permuted basis: invariant factors must agree and
        // q(x+y) - q(x) - q(y) = 2 b(x,y) must hold mod the modulus
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        IntMatrix pg(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) pg(i, j) = l.gram()(perm[i], perm[j]);
        DiscriminantGroup dp = discriminant_group(Lattice(pg));
        CHECK(d.invariant_factors == dp.invariant_factors);
        for (std::size_t i = 0; i < d.length(); ++i)
            for (std::size_t j = 0; j < d.length(); ++j) {
                // 2 b(gi,gj) and q(gi+gj)-q(gi)-q(gj) agree mod q_modulus
                std::vector<Rat> sum(n);
                for (std::size_t t = 0; t < n; ++t)
                    sum[t] = d.generator_lifts[i][t] + d.generator_lifts[j][t];
                Rat qsum(0);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        qsum += sum[a] * Rat(l.gram()(a, b)) * sum[b];
                Rat lhs = qsum - d.q_values[i] - d.q_values[j] - Rat(2) * d.b_values[i][j];
                Rat scaled = lhs / Rat(d.q_modulus);
                CHECK(is_integral(scaled));
            }
        ++done;
    }
}

TEST_CASE("orthogonal complements in small lattices") {
    Lattice u = hyperbolic_U();
    Sublattice span_e_plus_3f(u, rows({iv({1, 3})}));
    Sublattice comp = orthogonal_complement(span_e_plus_3f);
    REQUIRE(comp.rank() == 1);
    IntMatrix g = comp.induced_gram();
    CHECK(g(0, 0) == -6);  // e - 3f has square -6

    Lattice um2 = direct_sum(hyperbolic_U(), span_m(Int(-2)));
    Sublattice span_e(um2, rows({iv({1, 0, 0})}));
    Sublattice c2 = orthogonal_complement(span_e);
    REQUIRE(c2.rank() == 2);
    IntMatrix g2 = c2.induced_gram();
    CHECK(det(g2) == 0);  // e is isotropic and orthogonal to itself and w
}

TEST_CASE("saturation and primitivity") {
    Lattice u = hyperbolic_U();
    Sublattice twice_e(u, rows({iv({2, 0})}));
    SaturationResult s = saturate(twice_e);
    CHECK(s.index == 2);
    CHECK(is_primitive(s.saturation));
    CHECK(!is_primitive(twice_e));
    // idempotence
    SaturationResult again = saturate(s.saturation);
    CHECK(again.index == 1);
    CHECK(hnf_rows(again.saturation.basis()) == hnf_rows(s.saturation.basis()));
    Sublattice prim(u, rows({iv({1, 0})}));
    CHECK(is_primitive(prim));
}

TEST_CASE("complement is primitive; double complement returns the Q-span") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> e(-3, 3);
    Lattice amb = direct_sum(direct_sum(hyperbolic_U(), hyperbolic_U()), span_m(Int(-2)));
    int done = 0;
    while (done < 25) {
        IntMatrix b(2, 5);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 5; ++j) b(i, j) = e(rng);
        if (rank(to_rational(b)) != 2) continue;
        Sublattice sub(amb, b);
        Sublattice comp = orthogonal_complement(sub);
        CHECK(is_primitive(comp));
        if (comp.rank() + 2 == amb.rank()) {
            Sublattice dc = orthogonal_complement(comp);
            CHECK(hnf_rows(dc.basis()) == hnf_rows(saturate(sub).saturation.basis()));
        }
        ++done;
    }
}

TEST_CASE("reflections") {
    Lattice u = hyperbolic_U();
    Isometry r = reflection(u, iv({1, -1}));  // v = e - f swaps e and f
    CHECK(r.apply(iv({1, 0})) == iv({0, 1}));
    CHECK(r.apply(iv({0, 1})) == iv({1, 0}));
    CHECK(r.matrix() * r.matrix() == IntMatrix::identity(2));

    CHECK_THROWS_AS(reflection(u, iv({1, 0})), IsotropicVector);

    Lattice a2 = A2();
    Isometry ra = reflection(a2, iv({1, 0}));
    CHECK(ra.matrix() * ra.matrix() == IntMatrix::identity(2));
    CHECK(ra.apply(iv({1, 0})) == iv({-1, 0}));
}

TEST_CASE("reflection involutivity on random roots") {
    std::mt19937_64 rng(4242);
    Lattice amb = direct_sum(direct_sum(hyperbolic_U(), E8_neg()), A2_neg());
    std::uniform_int_distribution<int> e(-2, 2);
    int done = 0;
    while (done < 50) {
        std::vector<Int> v(amb.rank(), Int(0));
        for (std::size_t j = 0; j < amb.rank(); ++j) v[j] = e(rng);
        Int n = amb.norm(v);
        if (n != 2 && n != -2) continue;
        Isometry r = reflection(amb, v);
        CHECK(r.matrix() * r.matrix() == IntMatrix::identity(amb.rank()));
        std::vector<Int> neg(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) neg[j] = -v[j];
        CHECK(r.apply(v) == neg);
        ++done;
    }
}

TEST_CASE("divisibility") {
    CHECK(divisibility(hyperbolic_U(), iv({1, 0})) == 1);
    CHECK(divisibility(span_m(Int(-2)), iv({1})) == 2);
    CHECK_THROWS_AS(divisibility(hyperbolic_U(), iv({0, 0})), ZeroVector);
    // divisibility divides the exponent of the discriminant group
    std::mt19937_64 rng(5150);
    Lattice l = direct_sum(U3(), span_m(Int(-2)));
    DiscriminantGroup d = discriminant_group(l);
    Int exponent = d.invariant_factors.empty() ? Int(1) : d.invariant_factors.back();
    std::uniform_int_distribution<int> e(-4, 4);
    int done = 0;
    while (done < 50) {
        std::vector<Int> v(l.rank());
        Int content(0);
        for (auto& x : v) {
            x = e(rng);
            content = gcd_int(content, x);
        }
        if (content == 0) continue;
        for (auto& x : v) x /= content;  // the invariant is stated for primitive vectors
        CHECK(exponent % divisibility(l, v) == 0);
        ++done;
    }
}

TEST_CASE("nikulin hypothesis report") {
    NikulinReport su = nikulin_hypothesis(S_neg());
    CHECK(su.holds);
    CHECK(su.rank == 22);
    CHECK(su.length == 1);
    CHECK(nikulin_hypothesis(hyperbolic_U()).holds);
    NikulinReport six = nikulin_hypothesis(span_m(Int(6)));
    CHECK(!six.holds);
    CHECK(!six.indefinite);
}

TEST_CASE("isometry search finds the classical rank-3 coincidence") {
    Lattice a = direct_sum(span_m(Int(6)), A2_neg());
    Lattice b = direct_sum(U3(), span_m(Int(-2)));
    IsometrySearchResult r = isometry_search(a, b, 3);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.witness->transpose() * a.gram() * *r.witness == b.gram());
}

TEST_CASE("isometry search short-circuits on determinant mismatch") {
    IsometrySearchResult r = isometry_search(hyperbolic_U(), U3(), 10);
    CHECK(r.status == SearchStatus::NoByInvariants);
}

TEST_CASE("isometry search finds the identity at bound 1") {
    Lattice l = A2();
    IsometrySearchResult r = isometry_search(l, l, 1);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(r.witness->transpose() * l.gram() * *r.witness == l.gram());
}

TEST_CASE("direct sum and rescale") {
    CHECK(rescale(A2(), Int(-1)).gram() == A2_neg().gram());
    CHECK(rescale(hyperbolic_U(), Int(3)).gram() == U3().gram());
    Lattice a = A2(), b = span_m(Int(-2));
    CHECK(det(direct_sum(a, b).gram()) == det(a.gram()) * det(b.gram()));
    CHECK_THROWS(rescale(a, Int(0)));
}

TEST_CASE("gluing lemma: trivial glue and epsilon = -1 both extend") {
    // unimodular S: complement of a hyperbolic plane inside U + U
    Lattice amb = direct_sum(hyperbolic_U(), hyperbolic_U());
    Sublattice s(amb, rows({iv({1, 0, 0, 0}), iv({0, 1, 0, 0})}));
    Sublattice t = orthogonal_complement(s);
    Isometry swap_ef(IntMatrix{{Int(0), Int(1)}, {Int(1), Int(0)}}, s.as_lattice());
    Isometry id_t(IntMatrix::identity(2), t.as_lattice());
    GlueResult g = glue_extends(amb, s, t, swap_ef, id_t);
    CHECK(g.extends);
    CHECK(g.glue_order == 1);

    // epsilon = -1 on a non-unimodular complement
    Lattice amb2 = direct_sum(direct_sum(hyperbolic_U(), hyperbolic_U()),
                              direct_sum(hyperbolic_U(), span_m(Int(-2))));
    Sublattice s2(amb2, rows({iv({0, 0, 0, 0, 0, 0, 1})}));
    Sublattice t2 = orthogonal_complement(s2);
    Isometry id_s2(IntMatrix::identity(1), s2.as_lattice());
    IntMatrix neg = -IntMatrix::identity(6);
    Isometry minus_t2(neg, t2.as_lattice());
    GlueResult g2 = glue_extends(amb2, s2, t2, id_s2, minus_t2);
    CHECK(g2.extends);
}

TEST_CASE("gluing lemma on random primitive sublattices of U^3 + <-2>") {
    std::mt19937_64 rng(60606);
    Lattice amb = direct_sum(direct_sum(hyperbolic_U(), hyperbolic_U()),
                             direct_sum(hyperbolic_U(), span_m(Int(-2))));
    std::uniform_int_distribution<int> e(-2, 2);
    int done = 0;
    while (done < 20) {
        IntMatrix b(2, 7);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 7; ++j) b(i, j) = e(rng);
        if (rank(to_rational(b)) != 2) continue;
        Sublattice s = saturate(Sublattice(amb, b)).saturation;
        if (det(s.induced_gram()) == 0) continue;
        Sublattice t = orthogonal_complement(s);
        if (s.rank() + t.rank() != amb.rank()) continue;
        Isometry id_s(IntMatrix::identity(s.rank()), s.as_lattice());
        Isometry id_t(IntMatrix::identity(t.rank()), t.as_lattice());
        Isometry neg_s(-IntMatrix::identity(s.rank()), s.as_lattice());
        Isometry neg_t(-IntMatrix::identity(t.rank()), t.as_lattice());

        // -id acts by -1 on every discriminant group, so both (id,id) and
        // (-id,-id) preserve the glue
        CHECK(glue_extends(amb, s, t, id_s, id_t).extends);
        CHECK(glue_extends(amb, s, t, neg_s, neg_t).extends);

        // (id,-id) flips only the T component; it preserves a glue graph
        // exactly when the glue group is 2-torsion
        GlueResult mixed = glue_extends(amb, s, t, id_s, neg_t);
        bool two_torsion = true;
        for (const auto& [gs, gt] : mixed.glue_generators) {
            for (const auto& c : gt) two_torsion = two_torsion && is_integral(Rat(2) * c);
            (void)gs;
        }
        CHECK(mixed.extends == two_torsion);
        ++done;
    }
}

TEST_CASE("glue precondition is enforced") {
    Lattice amb = direct_sum(hyperbolic_U(), hyperbolic_U());
    Sublattice s(amb, rows({iv({1, 0, 0, 0}), iv({0, 1, 0, 0})}));
    Sublattice not_comp(amb, rows({iv({1, 1, 0, 0}), iv({0, 0, 1, 0})}));
    Isometry id_s(IntMatrix::identity(2), s.as_lattice());
    Isometry id_t(IntMatrix::identity(2), not_comp.as_lattice());
    CHECK_THROWS_AS(glue_extends(amb, s, not_comp, id_s, id_t), InvalidDecomposition);
}
