#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cycubic/fp.hpp"
#include "cycubic/numbers.hpp"

namespace cycubic {

constexpr std::size_t kMaxVars = 16;

struct DegreeOverflow : std::overflow_error {
    DegreeOverflow() : std::overflow_error("monomial exponent overflow") {}
};

// Exponent vector with cached total degree. Comparison is graded reverse
// lexicographic: higher total degree wins; on ties the last variable with a
// differing exponent decides, smaller exponent winning.
struct Monomial {
    std::array<std::uint8_t, kMaxVars> e{};
    std::uint16_t deg = 0;

    static Monomial one() { return {}; }
    static Monomial var(std::size_t i, std::uint8_t k = 1) {
        Monomial m;
        m.e[i] = k;
        m.deg = k;
        return m;
    }

    bool operator==(const Monomial& o) const { return deg == o.deg && e == o.e; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        unsigned d = deg + o.deg;
        if (d > 0xffff) throw DegreeOverflow();
        r.deg = static_cast<std::uint16_t>(d);
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            unsigned s = unsigned(e[i]) + o.e[i];
            if (s > 0xff) throw DegreeOverflow();
            r.e[i] = static_cast<std::uint8_t>(s);
        }
        return r;
    }

    bool divides(const Monomial& o) const {
        if (deg > o.deg) return false;
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }
    Monomial divide(const Monomial& o) const {  // *this / o, assuming divisibility
        Monomial r;
        r.deg = static_cast<std::uint16_t>(deg - o.deg);
        for (std::size_t i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint8_t>(e[i] - o.e[i]);
        return r;
    }
    static Monomial lcm(const Monomial& a, const Monomial& b) {
        Monomial r;
        unsigned d = 0;
        for (std::size_t i = 0; i < kMaxVars; ++i) {
            r.e[i] = std::max(a.e[i], b.e[i]);
            d += r.e[i];
        }
        r.deg = static_cast<std::uint16_t>(d);
        return r;
    }
    static bool coprime(const Monomial& a, const Monomial& b) {
        for (std::size_t i = 0; i < kMaxVars; ++i)
            if (a.e[i] && b.e[i]) return false;
        return true;
    }
};

// grevlex: a > b ?
inline bool grevlex_greater(const Monomial& a, const Monomial& b, std::size_t nvars) {
    if (a.deg != b.deg) return a.deg > b.deg;
    for (std::size_t i = nvars; i-- > 0;)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i];
    return false;
}

namespace detail {
inline bool coeff_is_zero(const Rat& c) { return c == 0; }
inline bool coeff_is_zero(const Fp& c) { return c.is_zero(); }
inline Rat coeff_one(const Rat*) { return Rat(1); }
inline Fp coeff_one(const Fp*) { return Fp::from_raw(1); }
}  // namespace detail

// Sparse multivariate polynomial over K (exact rationals or a prime field),
// terms kept sorted in descending grevlex order.
template <typename K>
class MultiPoly {
public:
    struct Term {
        Monomial m;
        K c;
    };

    MultiPoly() = default;
    explicit MultiPoly(std::size_t nvars) : nvars_(nvars) {
        if (nvars > kMaxVars) throw std::invalid_argument("too many variables");
    }
    static MultiPoly constant(std::size_t nvars, const K& c) {
        MultiPoly p(nvars);
        if (!detail::coeff_is_zero(c)) p.terms_.push_back({Monomial::one(), c});
        return p;
    }
    static MultiPoly variable(std::size_t nvars, std::size_t i) {
        MultiPoly p(nvars);
        p.terms_.push_back({Monomial::var(i), detail::coeff_one(static_cast<const K*>(nullptr))});
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    const Monomial& leading_monomial() const { return terms_.front().m; }
    const K& leading_coeff() const { return terms_.front().c; }
    int degree() const {
        int d = -1;
        for (const auto& t : terms_) d = std::max(d, int(t.m.deg));
        return d;
    }
    bool is_homogeneous(int d) const {
        for (const auto& t : terms_)
            if (int(t.m.deg) != d) return false;
        return true;
    }

    K coeff(const Monomial& m) const {
        for (const auto& t : terms_)
            if (t.m == m) return t.c;
        return K();
    }

    void check_same(const MultiPoly& o) const {
        if (nvars_ != o.nvars_) throw std::invalid_argument("variable count mismatch");
    }

    // A default-constructed polynomial is the zero of every ring; it is
    // absorbed by arithmetic with polynomials in any number of variables.
    bool is_universal_zero() const { return nvars_ == 0 && terms_.empty(); }

    MultiPoly operator+(const MultiPoly& o) const {
        if (is_universal_zero()) return o;
        if (o.is_universal_zero()) return *this;
        check_same(o);
        MultiPoly r(nvars_);
        r.terms_.reserve(terms_.size() + o.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < o.terms_.size()) {
            if (j == o.terms_.size() ||
                (i < terms_.size() && grevlex_greater(terms_[i].m, o.terms_[j].m, nvars_))) {
                r.terms_.push_back(terms_[i++]);
            } else if (i == terms_.size() || grevlex_greater(o.terms_[j].m, terms_[i].m, nvars_)) {
                r.terms_.push_back(o.terms_[j++]);
            } else {
                K c = terms_[i].c + o.terms_[j].c;
                if (!detail::coeff_is_zero(c)) r.terms_.push_back({terms_[i].m, c});
                ++i;
                ++j;
            }
        }
        return r;
    }
    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& t : r.terms_) t.c = -t.c;
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

    MultiPoly operator*(const MultiPoly& o) const {
        if (is_zero() || o.is_zero()) return MultiPoly(std::max(nvars_, o.nvars_));
        check_same(o);
        MultiPoly r(nvars_);
        // accumulate into a sorted map keyed by the packed exponent vector
        std::map<std::array<std::uint8_t, kMaxVars>, K> acc;
        for (const auto& a : terms_)
            for (const auto& b : o.terms_) {
                Monomial m = a.m * b.m;
                auto [it, inserted] = acc.try_emplace(m.e, a.c * b.c);
                if (!inserted) it->second = it->second + a.c * b.c;
            }
        for (auto& [e, c] : acc) {
            if (detail::coeff_is_zero(c)) continue;
            Monomial m;
            m.e = e;
            m.deg = 0;
            for (std::size_t i = 0; i < kMaxVars; ++i) m.deg += e[i];
            r.terms_.push_back({m, c});
        }
        std::sort(r.terms_.begin(), r.terms_.end(), [&](const Term& x, const Term& y) {
            return grevlex_greater(x.m, y.m, nvars_);
        });
        return r;
    }

    MultiPoly scaled(const K& c) const {
        MultiPoly r(nvars_);
        if (detail::coeff_is_zero(c)) return r;
        r.terms_ = terms_;
        for (auto& t : r.terms_) t.c = t.c * c;
        return r;
    }

    MultiPoly times_term(const Monomial& m, const K& c) const {
        MultiPoly r(nvars_);
        if (detail::coeff_is_zero(c)) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.m * m, t.c * c});
        return r;
    }

    bool operator==(const MultiPoly& o) const {
        if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].m != o.terms_[i].m || !(terms_[i].c == o.terms_[i].c)) return false;
        return true;
    }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    K eval(std::span<const K> point) const {
        if (point.size() != nvars_) throw std::invalid_argument("eval: wrong point size");
        K acc{};
        for (const auto& t : terms_) {
            K v = t.c;
            for (std::size_t i = 0; i < nvars_; ++i)
                for (unsigned k = 0; k < t.m.e[i]; ++k) v = v * point[i];
            acc = acc + v;
        }
        return acc;
    }

    // simultaneous substitution x_i -> images[i]
    MultiPoly compose(const std::vector<MultiPoly>& images) const {
        if (images.size() != nvars_) throw std::invalid_argument("compose: wrong image count");
        std::size_t out_vars = images.empty() ? 0 : images[0].nvars();
        MultiPoly acc(out_vars);
        // memoize powers of each image
        std::vector<std::vector<MultiPoly>> pows(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i)
            pows[i].push_back(MultiPoly::constant(out_vars, detail::coeff_one(static_cast<const K*>(nullptr))));
        auto power = [&](std::size_t i, unsigned k) -> const MultiPoly& {
            while (pows[i].size() <= k) pows[i].push_back(pows[i].back() * images[i]);
            return pows[i][k];
        };
        for (const auto& t : terms_) {
            MultiPoly term = MultiPoly::constant(out_vars, t.c);
            for (std::size_t i = 0; i < nvars_; ++i)
                if (t.m.e[i]) term = term * power(i, t.m.e[i]);
            acc = acc + term;
        }
        return acc;
    }

    // x -> A x with A given as rows of coefficient vectors over the new variables
    MultiPoly substitute_linear(const std::vector<std::vector<K>>& a) const {
        if (a.size() != nvars_) throw std::invalid_argument("substitute_linear: wrong row count");
        std::size_t out_vars = a.empty() ? 0 : a[0].size();
        std::vector<MultiPoly> images;
        images.reserve(nvars_);
        for (std::size_t i = 0; i < nvars_; ++i) {
            MultiPoly img(out_vars);
            for (std::size_t j = 0; j < out_vars; ++j)
                if (!detail::coeff_is_zero(a[i][j]))
                    img = img + MultiPoly::variable(out_vars, j).scaled(a[i][j]);
            images.push_back(std::move(img));
        }
        return compose(images);
    }

    MultiPoly partial_derivative(std::size_t i) const {
        MultiPoly r(nvars_);
        for (const auto& t : terms_) {
            if (t.m.e[i] == 0) continue;
            K c = t.c * K(static_cast<long long>(t.m.e[i]));
            if (detail::coeff_is_zero(c)) continue;
            Monomial m = t.m;
            --m.e[i];
            --m.deg;
            r.terms_.push_back({m, c});
        }
        return r;
    }

    void add_term(const Monomial& m, const K& c) {
        if (detail::coeff_is_zero(c)) return;
        terms_.push_back({m, c});
        std::sort(terms_.begin(), terms_.end(), [&](const Term& x, const Term& y) {
            return grevlex_greater(x.m, y.m, nvars_);
        });
        // merge equal monomials
        std::vector<Term> merged;
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().m == t.m)
                merged.back().c = merged.back().c + t.c;
            else
                merged.push_back(t);
        }
        terms_.clear();
        for (auto& t : merged)
            if (!detail::coeff_is_zero(t.c)) terms_.push_back(t);
    }

private:
    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

using QPoly = MultiPoly<Rat>;
using FpPoly = MultiPoly<Fp>;

FpPoly reduce_poly_mod_p(const QPoly& p);

// Text format: sums of terms "c*x0^a0*...*x5^a5"; rational coefficients
// as "n/d". The printer emits descending grevlex order and the parser
// round-trips exactly.
std::string to_string(const QPoly& p);
QPoly parse_qpoly(const std::string& text, std::size_t nvars);

}  // namespace cycubic
