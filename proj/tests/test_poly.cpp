#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cycubic/poly.hpp"

using namespace cycubic;

TEST_CASE("basic arithmetic") {
    QPoly x0 = QPoly::variable(2, 0), x1 = QPoly::variable(2, 1);
    QPoly s = x0 + x1;
    QPoly sq = s * s;
    CHECK(sq.coeff(Monomial::var(0, 2)) == 1);
    CHECK(sq.coeff(Monomial::var(1, 2)) == 1);
    CHECK(sq.coeff(Monomial::var(0) * Monomial::var(1)) == 2);
    CHECK(sq.degree() == 2);
    CHECK(sq.is_homogeneous(2));
    CHECK((sq - sq).is_zero());
}

TEST_CASE("derivative and eval") {
    QPoly x0 = QPoly::variable(1, 0);
    QPoly cube = x0 * x0 * x0;
    QPoly d = cube.partial_derivative(0);
    CHECK(d.coeff(Monomial::var(0, 2)) == 3);
    CHECK(d.term_count() == 1);
    std::vector<Rat> pt{Rat(2)};
    CHECK(cube.eval(std::span<const Rat>(pt)) == 8);
}

TEST_CASE("grevlex ordering") {
    // in grevlex with x > y > z: x^2 > x y > y^2 > x z > y z > z^2
    Monomial x2 = Monomial::var(0, 2);
    Monomial xy = Monomial::var(0) * Monomial::var(1);
    Monomial y2 = Monomial::var(1, 2);
    Monomial xz = Monomial::var(0) * Monomial::var(2);
    CHECK(grevlex_greater(x2, xy, 3));
    CHECK(grevlex_greater(xy, y2, 3));
    CHECK(grevlex_greater(y2, xz, 3));
    CHECK(grevlex_greater(x2, xz, 3));
    CHECK(!grevlex_greater(xz, y2, 3));
}

TEST_CASE("parser and printer round-trip") {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> coeff(-20, 20), den(1, 9), ex(0, 3);
    for (int t = 0; t < 50; ++t) {
        QPoly p(6);
        for (int k = 0; k < 8; ++k) {
            Monomial m;
            unsigned d = 0;
            for (std::size_t i = 0; i < 6; ++i) {
                m.e[i] = static_cast<std::uint8_t>(ex(rng));
                d += m.e[i];
            }
            m.deg = static_cast<std::uint16_t>(d);
            p.add_term(m, Rat(coeff(rng), den(rng)));
        }
        QPoly q = parse_qpoly(to_string(p), 6);
        CHECK(q == p);
    }
    CHECK(parse_qpoly("0", 3).is_zero());
    CHECK(to_string(QPoly(4)) == "0");
    QPoly mixed = parse_qpoly("-x1^2 + 3/2x0*x2 - 7", 3);
    CHECK(mixed.coeff(Monomial::var(1, 2)) == -1);
    CHECK(mixed.coeff(Monomial::var(0) * Monomial::var(2)) == Rat(3, 2));
    CHECK(mixed.coeff(Monomial::one()) == -7);
}

TEST_CASE("substitute_linear is a ring map") {
    std::mt19937_64 rng(3141);
    std::uniform_int_distribution<int> e(-3, 3);
    for (int t = 0; t < 20; ++t) {
        QPoly p(3), q(3);
        for (int k = 0; k < 4; ++k) {
            Monomial m;
            unsigned d = 0;
            for (std::size_t i = 0; i < 3; ++i) {
                m.e[i] = static_cast<std::uint8_t>(std::abs(e(rng)) % 3);
                d += m.e[i];
            }
            m.deg = static_cast<std::uint16_t>(d);
            p.add_term(m, Rat(e(rng)));
            q.add_term(m, Rat(e(rng)));
        }
        std::vector<std::vector<Rat>> a(3, std::vector<Rat>(3));
        for (auto& row : a)
            for (auto& x : row) x = Rat(e(rng));
        CHECK((p * q).substitute_linear(a) == p.substitute_linear(a) * q.substitute_linear(a));
        CHECK((p + q).substitute_linear(a) == p.substitute_linear(a) + q.substitute_linear(a));
    }
}

TEST_CASE("reduction mod p commutes with multiplication") {
    FpContext ctx(101);
    std::mt19937_64 rng(999);
    std::uniform_int_distribution<int> e(-9, 9), den(1, 9);
    for (int t = 0; t < 20; ++t) {
        QPoly p(4), q(4);
        for (int k = 0; k < 5; ++k) {
            Monomial m;
            unsigned d = 0;
            for (std::size_t i = 0; i < 4; ++i) {
                m.e[i] = static_cast<std::uint8_t>(std::abs(e(rng)) % 3);
                d += m.e[i];
            }
            m.deg = static_cast<std::uint16_t>(d);
            p.add_term(m, Rat(e(rng), den(rng)));
            q.add_term(m, Rat(e(rng), den(rng)));
        }
        CHECK(reduce_poly_mod_p(p * q) == reduce_poly_mod_p(p) * reduce_poly_mod_p(q));
    }
}

TEST_CASE("Fp arithmetic and cube roots") {
    FpContext ctx(13);
    Fp a(7ull), b(9ull);
    CHECK((a * b).value() == 63 % 13);
    CHECK((a * a.inv()).value() == 1);
    Fp xi = primitive_cube_root();
    CHECK(xi != Fp::from_raw(1));
    CHECK(xi * xi * xi == Fp::from_raw(1));
    {
        FpContext ctx5(5);
        CHECK_THROWS_AS(primitive_cube_root(), NoCubeRoot);
    }
    CHECK_THROWS_AS(FpContext(9), BadPrime);
    CHECK_THROWS_AS(reduce_mod_p(Rat(1, 13)), BadPrime);
}
