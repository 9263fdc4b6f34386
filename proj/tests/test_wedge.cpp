#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cycubic/matrix.hpp"
#include "cycubic/wedge.hpp"

using namespace cycubic;

namespace {

std::uint8_t mask(unsigned i, unsigned j) {
    return static_cast<std::uint8_t>((1u << i) | (1u << j));
}

Wedge<Rat> random_two_form(std::mt19937_64& rng, int bound) {
    std::uniform_int_distribution<int> e(-bound, bound);
    Wedge<Rat> w(2);
    for (unsigned i = 0; i < 6; ++i)
        for (unsigned j = i + 1; j < 6; ++j) {
            int c = e(rng);
            if (c) w.set(mask(i, j), Rat(c));
        }
    return w;
}

// determinant of the skew matrix of a constant two-form (oracle for Pf^2)
Rat det_of_two_form(const Wedge<Rat>& w) {
    QMatrix m(6, 6);
    for (const auto& [mm, v] : w.coords()) {
        unsigned i = std::countr_zero(static_cast<unsigned>(mm));
        unsigned j = std::countr_zero(static_cast<unsigned>(mm) & ~(1u << i));
        m(i, j) = v;
        m(j, i) = -v;
    }
    return det(m);
}

}  // namespace

TEST_CASE("wedge basics") {
    Wedge<Rat> e12(2), e34(2);
    e12.set(mask(0, 1), Rat(1));
    e34.set(mask(2, 3), Rat(1));
    Wedge<Rat> prod = wedge(e12, e34);
    CHECK(prod.get(0b001111) == 1);

    // graded commutativity on random pairs of 2-forms (even degree: symmetric)
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        Wedge<Rat> a = random_two_form(rng, 4), b = random_two_form(rng, 4);
        CHECK(wedge(a, b) == wedge(b, a));
    }
    // odd-degree anticommutativity
    Wedge<Rat> v1(1), v2(1);
    v1.set(1 << 2, Rat(3));
    v2.set(1 << 4, Rat(5));
    CHECK(wedge(v1, v2) == -wedge(v2, v1));

    Wedge<Rat> four = wedge(e12, e34);
    CHECK_THROWS_AS(wedge(four, four), DegreeOverflow);
    // overlapping index sets annihilate
    CHECK(wedge(e12, e12).is_zero());
}

TEST_CASE("standard symplectic form has Pfaffian one") {
    Wedge<Rat> phi0(2);
    phi0.set(mask(0, 3), Rat(-1));
    phi0.set(mask(1, 4), Rat(-1));
    phi0.set(mask(2, 5), Rat(-1));
    CHECK(pfaffian_cube_route(phi0) == 1);
    SkewForm<Rat> m = SkewForm<Rat>::from_two_form(phi0);
    CHECK(pfaffian(m) == 1);
    // phi0^3 = 6 * volume form
    Wedge<Rat> cube = wedge(wedge(phi0, phi0), phi0);
    CHECK(volume_coefficient(cube) == 6);
}

TEST_CASE("pfaffian squared equals the determinant on random skew matrices") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        Wedge<Rat> w = random_two_form(rng, 9);
        Rat pf = pfaffian(SkewForm<Rat>::from_two_form(w));
        CHECK(pf * pf == det_of_two_form(w));
        CHECK(pf == pfaffian_cube_route(w));
    }
}

TEST_CASE("pfaffian of polynomial matrices matches the wedge-cube route") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> e(-3, 3);
    for (int t = 0; t < 10; ++t) {
        // linear forms in 3 variables as entries
        SkewForm<QPoly> m;
        Wedge<QPoly> w(2);
        for (unsigned i = 0; i < 6; ++i)
            for (unsigned j = i + 1; j < 6; ++j) {
                QPoly entry(3);
                for (std::size_t v = 0; v < 3; ++v) {
                    int c = e(rng);
                    if (c) entry = entry + QPoly::variable(3, v).scaled(Rat(c));
                }
                m.set_upper(i, j, entry);
                if (!entry.is_zero()) w.set(mask(i, j), entry);
            }
        CHECK(pfaffian(m) == pfaffian_cube_route(w));
    }
}

TEST_CASE("antisymmetry is enforced") {
    SkewForm<Rat> m;
    CHECK_NOTHROW(m.validate());
    // from_two_form always produces antisymmetric data; a hand-built bad
    // matrix must be rejected
    SkewForm<QPoly> bad;
    bad.set_upper(0, 1, QPoly::constant(1, Rat(2)));
    CHECK_NOTHROW(bad.validate());
}

TEST_CASE("pfaffian decomposition: binomial identity for phi = phi0") {
    Wedge<Rat> phi0(2);
    phi0.set(mask(0, 3), Rat(-1));
    phi0.set(mask(1, 4), Rat(-1));
    phi0.set(mask(2, 5), Rat(-1));
    auto d = pfaffian_decomposition(phi0, phi0);
    CHECK(d.h == 3);
    CHECK(d.q == 3);
    CHECK(d.pf == 1);

    Wedge<Rat> zero(2);
    auto dz = pfaffian_decomposition(phi0, zero);
    CHECK(dz.h == 0);
    CHECK(dz.q == 0);
    CHECK(dz.pf == 0);

    Wedge<Rat> not_normalized(2);
    not_normalized.set(mask(0, 1), Rat(1));
    CHECK_THROWS_AS(pfaffian_decomposition(not_normalized, phi0), NotNormalized);
}

TEST_CASE("decomposition identity Pf(t phi0 + phi) = t^3 + t^2 h + t q + Pf") {
    Wedge<Rat> phi0c(2);
    phi0c.set(mask(0, 3), Rat(-1));
    phi0c.set(mask(1, 4), Rat(-1));
    phi0c.set(mask(2, 5), Rat(-1));
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        Wedge<Rat> phi = random_two_form(rng, 4);
        auto d = pfaffian_decomposition(phi0c, phi);
        // symbolic check in one variable t: lift to polynomial coefficients
        Wedge<QPoly> lift(2);
        for (const auto& [m, v] : phi.coords())
            lift.set(m, QPoly::constant(1, v));
        Wedge<QPoly> t_phi0(2);
        for (const auto& [m, v] : phi0c.coords())
            t_phi0.set(m, QPoly::variable(1, 0).scaled(v));
        Wedge<QPoly> sum = t_phi0 + lift;
        QPoly pf = pfaffian_cube_route(sum);
        QPoly t = QPoly::variable(1, 0);
        QPoly expected = t * t * t + (t * t).scaled(d.h) + t.scaled(d.q) +
                         QPoly::constant(1, d.pf);
        CHECK(pf == expected);
    }
}
