#include "cycubic/poly.hpp"

#include <cctype>

namespace cycubic {

FpPoly reduce_poly_mod_p(const QPoly& p) {
    FpPoly r(p.nvars());
    for (const auto& t : p.terms()) r.add_term(t.m, reduce_mod_p(t.c));
    return r;
}

std::string to_string(const QPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        Rat c = t.c;
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        first = false;
        bool printed_coeff = false;
        if (c != 1 || t.m.deg == 0) {
            os << to_string(c);
            printed_coeff = true;
        }
        for (std::size_t i = 0; i < p.nvars(); ++i) {
            if (t.m.e[i] == 0) continue;
            if (printed_coeff) os << "*";
            os << "x" << i;
            if (t.m.e[i] > 1) os << "^" << unsigned(t.m.e[i]);
            printed_coeff = true;
        }
    }
    return os.str();
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return s[i];
    }
};

Int parse_int(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.i;
    if (c.i < c.s.size() && (c.s[c.i] == '-' || c.s[c.i] == '+')) ++c.i;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
    if (c.i == start) throw std::invalid_argument("polynomial parse error: expected integer");
    return Int(c.s.substr(start, c.i - start));
}

}  // namespace

QPoly parse_qpoly(const std::string& text, std::size_t nvars) {
    QPoly p(nvars);
    Cursor c{text};
    if (c.done()) return p;
    bool first = true;
    while (!c.done()) {
        int sign = 1;
        if (c.peek() == '+' || c.peek() == '-') {
            sign = c.peek() == '-' ? -1 : 1;
            ++c.i;
        } else if (!first) {
            throw std::invalid_argument("polynomial parse error: expected + or -");
        }
        first = false;
        Rat coeff(1);
        bool have_coeff = false;
        Monomial m;
        for (;;) {
            if (c.done()) break;
            char ch = c.peek();
            if (ch == '+' || ch == '-') break;
            if (ch == '*') {
                ++c.i;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(ch))) {
                Int num = parse_int(c);
                if (!c.done() && c.peek() == '/') {
                    ++c.i;
                    Int den = parse_int(c);
                    coeff = have_coeff ? coeff * Rat(num, den) : Rat(num, den);
                } else {
                    coeff = have_coeff ? coeff * Rat(num) : Rat(num);
                }
                have_coeff = true;
                continue;
            }
            if (ch == 'x') {
                ++c.i;
                Int idx = parse_int(c);
                if (idx < 0 || idx >= Int(nvars))
                    throw std::invalid_argument("polynomial parse error: variable out of range");
                unsigned e = 1;
                if (!c.done() && c.peek() == '^') {
                    ++c.i;
                    Int ee = parse_int(c);
                    if (ee < 0 || ee > 255) throw DegreeOverflow();
                    e = static_cast<unsigned>(ee);
                }
                std::size_t vi = static_cast<std::size_t>(idx);
                unsigned s = m.e[vi] + e;
                if (s > 255) throw DegreeOverflow();
                m.e[vi] = static_cast<std::uint8_t>(s);
                m.deg = static_cast<std::uint16_t>(m.deg + e);
                continue;
            }
            throw std::invalid_argument(std::string("polynomial parse error at '") + ch + "'");
        }
        if (sign < 0) coeff = -coeff;
        p.add_term(m, coeff);
    }
    return p;
}

}  // namespace cycubic
