#pragma once

#include "cycubic/numbers.hpp"

namespace cycubic {

// a + b*xi with xi a fixed primitive cube root of unity, xi^2 = -1 - xi.
// theta = xi - xi^{-1} = 1 + 2 xi satisfies theta * conj(theta) = 3.
struct EisensteinInt {
    Int a{0}, b{0};

    EisensteinInt() = default;
    EisensteinInt(Int a_, Int b_) : a(std::move(a_)), b(std::move(b_)) {}

    static EisensteinInt xi() { return {Int(0), Int(1)}; }
    static EisensteinInt theta() { return {Int(1), Int(2)}; }

    bool is_zero() const { return a == 0 && b == 0; }

    EisensteinInt operator+(const EisensteinInt& o) const { return {a + o.a, b + o.b}; }
    EisensteinInt operator-(const EisensteinInt& o) const { return {a - o.a, b - o.b}; }
    EisensteinInt operator-() const { return {-a, -b}; }
    EisensteinInt operator*(const EisensteinInt& o) const {
        // (a + b xi)(c + d xi) = ac - bd + (ad + bc - bd) xi
        return {a * o.a - b * o.b, a * o.b + b * o.a - b * o.b};
    }
    bool operator==(const EisensteinInt& o) const { return a == o.a && b == o.b; }
    bool operator!=(const EisensteinInt& o) const { return !(*this == o); }

    EisensteinInt conj() const { return {a - b, -b}; }
    Int norm() const { return a * a - a * b + b * b; }

    bool is_unit() const { return norm() == 1; }
};

// Rounded quotient z/w; remainder z - q*w has norm < norm(w) (Euclidean ring).
EisensteinInt eis_div_round(const EisensteinInt& z, const EisensteinInt& w);
EisensteinInt eis_gcd(EisensteinInt z, EisensteinInt w);

// Whether z and w generate the same ideal (agree up to a unit).
bool eis_same_ideal(const EisensteinInt& z, const EisensteinInt& w);

std::string to_string(const EisensteinInt& z);

}  // namespace cycubic
