#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cycubic/matrix.hpp"

using namespace cycubic;

namespace {

bool is_unimodular(const IntMatrix& m) {
    Int d = det(m);
    return d == 1 || d == -1;
}

IntMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, int bound) {
    std::uniform_int_distribution<int> e(-bound, bound);
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            m(i, j) = e(rng);
            m(j, i) = m(i, j);
        }
    return m;
}

}  // namespace

TEST_CASE("snf of the A2 Gram matrix") {
    IntMatrix m{{Int(2), Int(-1)}, {Int(-1), Int(2)}};
    SnfResult s = snf(m);
    CHECK(s.d(0, 0) == 1);
    CHECK(s.d(1, 1) == 3);
    CHECK(s.u * m * s.v == s.d);
    CHECK(is_unimodular(s.u));
    CHECK(is_unimodular(s.v));
}

TEST_CASE("snf of identity and of the hyperbolic Gram") {
    SnfResult s1 = snf(IntMatrix::identity(3));
    CHECK(s1.d == IntMatrix::identity(3));
    IntMatrix u{{Int(0), Int(1)}, {Int(1), Int(0)}};
    SnfResult s2 = snf(u);
    CHECK(s2.d(0, 0) == 1);
    CHECK(s2.d(1, 1) == 1);
}

TEST_CASE("snf properties on random symmetric matrices") {
    std::mt19937_64 rng(20240501);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + trial % 6;
        IntMatrix m = random_symmetric(rng, n, 10);
        SnfResult s = snf(m);
        CHECK(s.u * m * s.v == s.d);
        CHECK(is_unimodular(s.u));
        CHECK(is_unimodular(s.v));
        Int prod(1);
        for (std::size_t k = 0; k < n; ++k) {
            prod *= s.d(k, k);
            if (k + 1 < n && s.d(k, k) != 0) CHECK(s.d(k + 1, k + 1) % s.d(k, k) == 0);
        }
        // product of the elementary divisors matches the determinant (brute-force oracle)
        CHECK(abs_int(prod) == abs_int(det(m)));
    }
}

TEST_CASE("kernel and saturation") {
    // rows (2,4) span an index-2 subgroup of the primitive (1,2)
    IntMatrix b(1, 2);
    b(0, 0) = 2;
    b(0, 1) = 4;
    IntMatrix s = saturate_rows(b);
    REQUIRE(s.rows() == 1);
    CHECK(abs_int(s(0, 0)) == 1);
    CHECK(abs_int(s(0, 1)) == 2);

    IntMatrix m(1, 3);
    m(0, 0) = 2;
    m(0, 1) = -1;
    m(0, 2) = 0;
    IntMatrix k = kernel_int(m);
    REQUIRE(k.rows() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(m(0, 0) * k(i, 0) + m(0, 1) * k(i, 1) + m(0, 2) * k(i, 2) == 0);
}

TEST_CASE("hnf is idempotent and spans the same lattice") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> e(-5, 5);
    for (int trial = 0; trial < 30; ++trial) {
        IntMatrix m(3, 4);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 4; ++j) m(i, j) = e(rng);
        IntMatrix h = hnf_rows(m);
        CHECK(hnf_rows(h) == h);
    }
}

TEST_CASE("rational inverse and determinant") {
    QMatrix m{{Rat(2), Rat(1)}, {Rat(1), Rat(1)}};
    QMatrix inv = inverse(m);
    CHECK(m * inv == QMatrix::identity(2));
    CHECK(det(m) == Rat(1));
    CHECK_THROWS_AS(inverse(QMatrix(2, 2)), std::domain_error);
}

TEST_CASE("bareiss determinant agrees with rational elimination") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> e(-9, 9);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + trial % 5;
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = e(rng);
        CHECK(Rat(det(m)) == det(to_rational(m)));
    }
}
