#include "cycubic/eisenstein.hpp"

namespace cycubic {

EisensteinInt eis_div_round(const EisensteinInt& z, const EisensteinInt& w) {
    if (w.is_zero()) throw std::domain_error("division by zero Eisenstein integer");
    EisensteinInt num = z * w.conj();
    Int n = w.norm();
    return {round_rat(Rat(num.a, n)), round_rat(Rat(num.b, n))};
}

EisensteinInt eis_gcd(EisensteinInt z, EisensteinInt w) {
    while (!w.is_zero()) {
        EisensteinInt q = eis_div_round(z, w);
        EisensteinInt r = z - q * w;
        z = w;
        w = r;
    }
    return z;
}

bool eis_same_ideal(const EisensteinInt& z, const EisensteinInt& w) {
    if (z.is_zero() || w.is_zero()) return z.is_zero() && w.is_zero();
    if (z.norm() != w.norm()) return false;
    EisensteinInt q = eis_div_round(z, w);
    return (z - q * w).is_zero() && q.is_unit();
}

std::string to_string(const EisensteinInt& z) {
    std::string s = z.a.str();
    if (z.b != 0) {
        s += (z.b > 0 ? "+" : "-");
        Int ab = abs_int(z.b);
        if (ab != 1) s += ab.str() + "*";
        s += "xi";
    }
    return s;
}

}  // namespace cycubic
