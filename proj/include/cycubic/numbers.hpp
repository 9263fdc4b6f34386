#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cycubic {

// Arbitrary-precision integer and rational scalars. All lattice and
// polynomial arithmetic in this library is exact; there is no floating
// point anywhere. Expression templates are off so values behave as plain
// regular types in generic code.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat =
    boost::multiprecision::number<boost::multiprecision::backends::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline Int lcm_int(const Int& a, const Int& b) {
    if (a == 0 || b == 0) return 0;
    return abs_int(a / gcd_int(a, b) * b);
}

inline Int numer(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denom(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integral(const Rat& q) { return denom(q) == 1; }

// Floor division a/b for exact integers (rounds toward -infinity).
inline Int fdiv(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

// Nearest-integer rounding of a rational (ties toward +infinity).
inline Int round_rat(const Rat& q) {
    Int n = numer(q), d = denom(q);
    return fdiv(2 * n + d, 2 * d);
}

inline std::string to_string(const Int& a) { return a.str(); }

inline std::string to_string(const Rat& q) {
    if (is_integral(q)) return numer(q).str();
    return numer(q).str() + "/" + denom(q).str();
}

inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int n(s.substr(0, slash)), d(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(n, d);
}

}  // namespace cycubic
