#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cycubic/certify.hpp"
#include "cycubic/quadform.hpp"

using namespace cycubic;

namespace {

QMatrix hyperbolic_q() {
    QMatrix g(2, 2);
    g(0, 1) = Rat(1, 2);
    g(1, 0) = Rat(1, 2);
    return g;  // q(x,y) = x y
}

}  // namespace

TEST_CASE("witt bounds for the hyperbolic plane and definite forms") {
    WittBounds u = witt_bounds(hyperbolic_q());
    CHECK(u.lower == 1);
    CHECK(u.upper == 1);
    CHECK(u.exact());

    QMatrix negdef(3, 3);
    for (int i = 0; i < 3; ++i) negdef(i, i) = Rat(-1);
    IsotropicSearchResult r = find_isotropic_subspace(negdef, 1);
    CHECK(r.status == IsotropicStatus::ImpossibleBySignature);
    WittBounds w = witt_bounds(negdef);
    CHECK(w.upper == 0);
    CHECK(w.exact());
}

TEST_CASE("isotropic basis vectors are jointly isotropic") {
    // q = x0 x1 + x2 x3 - x4^2 has Witt index 2
    QMatrix g(5, 5);
    g(0, 1) = g(1, 0) = Rat(1, 2);
    g(2, 3) = g(3, 2) = Rat(1, 2);
    g(4, 4) = Rat(-1);
    WittBounds w = witt_bounds(g);
    CHECK(w.lower == 2);
    CHECK(w.upper == 2);
    for (std::size_t i = 0; i < w.witness.rows(); ++i)
        for (std::size_t j = i; j < w.witness.rows(); ++j) {
            Rat s(0);
            for (std::size_t a = 0; a < 5; ++a)
                for (std::size_t b = 0; b < 5; ++b)
                    s += Rat(w.witness(i, a)) * g(a, b) * Rat(w.witness(j, b));
            CHECK(s == 0);
        }
}

TEST_CASE("the Pfaffian quadratic form has Witt index 7, its hyperplane 6") {
    PfaffianFlag flag = load_appendix();
    QMatrix g = q_gram(flag.phi0);
    auto [pos, neg, zero] = signature_of(g);
    CHECK(pos == 7);
    CHECK(neg == 8);
    CHECK(zero == 0);
    WittBounds full = witt_bounds(g);
    CHECK(full.lower == 7);
    CHECK(full.exact());

    IntMatrix hb;
    QMatrix gh = qh_gram(flag.phi0, &hb);
    CHECK(hb.rows() == 14);
    auto [hp, hn, hz] = signature_of(gh);
    CHECK(hp == 6);
    CHECK(hn == 8);
    CHECK(hz == 0);
    WittBounds restricted = witt_bounds(gh);
    CHECK(restricted.lower == 6);
    CHECK(restricted.exact());
}

TEST_CASE("q values on the appendix data") {
    PfaffianFlag flag = load_appendix();
    // q(phi0) = 3 and the appendix Z is a totally isotropic 5-space
    Rat q_phi0 = volume_coefficient(wedge(flag.phi0, wedge(flag.phi0, flag.phi0))) / 2;
    CHECK(q_phi0 == 3);
    Certificate iso = verify_isotropy(flag);
    CHECK(iso.verdict);
    // a flag whose Z contains phi0 must fail isotropy
    PfaffianFlag bad = flag;
    bad.z[0] = bad.phi0;
    CHECK(!verify_isotropy(bad).verdict);
}

TEST_CASE("witt certificate on the appendix flag") {
    PfaffianFlag flag = load_appendix();
    Certificate c = witt_certificate(flag);
    CHECK(c.verdict);
}

TEST_CASE("seeded isotropic search is reproducible and certified") {
    PfaffianFlag flag = load_appendix();
    QMatrix gh = qh_gram(flag.phi0);
    IsotropicSearchParams p1;
    p1.seed = 31;
    IsotropicSearchResult a = find_isotropic_subspace(gh, 5, p1);
    IsotropicSearchResult b = find_isotropic_subspace(gh, 5, p1);
    REQUIRE(a.status == IsotropicStatus::Reached);
    CHECK(a.basis == b.basis);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j) {
            Rat s(0);
            for (std::size_t x = 0; x < 14; ++x)
                for (std::size_t y = 0; y < 14; ++y)
                    s += Rat(a.basis(i, x)) * gh(x, y) * Rat(a.basis(j, y));
            CHECK(s == 0);
        }
}
