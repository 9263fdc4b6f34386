#pragma once

#include <bit>
#include <map>

#include "cycubic/poly.hpp"

namespace cycubic {

struct NotAntisymmetric : std::invalid_argument {
    NotAntisymmetric() : std::invalid_argument("matrix is not antisymmetric") {}
};
struct NotNormalized : std::invalid_argument {
    NotNormalized() : std::invalid_argument("Pf(phi0) must be 1") {}
};

constexpr unsigned kDimV = 6;
constexpr std::uint8_t kVolMask = (1u << kDimV) - 1;

namespace detail {
inline bool ring_is_zero(const Rat& c) { return c == 0; }
inline bool ring_is_zero(const Fp& c) { return c.is_zero(); }
template <typename K>
bool ring_is_zero(const MultiPoly<K>& p) {
    return p.is_zero();
}
inline Rat ring_scale(const Rat& c, long num, long den) { return c * Rat(num, den); }
inline Fp ring_scale(const Fp& c, long num, long den) {
    return c * Fp(static_cast<long long>(num)) * Fp(static_cast<long long>(den)).inv();
}
template <typename K>
MultiPoly<K> ring_scale(const MultiPoly<K>& p, long num, long den) {
    K f = K(static_cast<long long>(num));
    // division only by units: exact over Q, inverse mod p otherwise
    if constexpr (std::is_same_v<K, Rat>)
        f = f * Rat(1, den);
    else
        f = f * K(static_cast<long long>(den)).inv();
    return p.scaled(f);
}
inline bool ring_is_one(const Rat& c) { return c == 1; }
inline bool ring_is_one(const Fp& c) { return c == Fp::from_raw(1); }
template <typename K>
bool ring_is_one(const MultiPoly<K>& p) {
    return p.term_count() == 1 && p.leading_monomial().deg == 0 &&
           ring_is_one(p.leading_coeff());
}
}  // namespace detail

// sign of e_A ^ e_B for disjoint sorted index sets encoded as bitmasks;
// zero when the masks intersect
inline int wedge_sign(std::uint8_t a, std::uint8_t b) {
    if (a & b) return 0;
    unsigned inversions = 0;
    for (unsigned i = 0; i < kDimV; ++i)
        if (b & (1u << i)) inversions += std::popcount(static_cast<unsigned>(a >> (i + 1)));
    return inversions % 2 ? -1 : 1;
}

// Element of the exterior algebra of a fixed 6-space (or its dual), with
// coefficients in R over the basis e_I, I a sorted index set. The
// orientation isomorphism sends e_0^...^e_5 to 1.
template <typename R>
class Wedge {
public:
    Wedge() = default;
    explicit Wedge(unsigned degree) : deg_(degree) {
        if (degree > kDimV) throw std::invalid_argument("wedge degree exceeds 6");
    }

    unsigned degree() const { return deg_; }
    const std::map<std::uint8_t, R>& coords() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    void set(std::uint8_t mask, R value) {
        if (static_cast<unsigned>(std::popcount(static_cast<unsigned>(mask))) != deg_)
            throw std::invalid_argument("index set size does not match degree");
        if (detail::ring_is_zero(value))
            c_.erase(mask);
        else
            c_[mask] = std::move(value);
    }
    R get(std::uint8_t mask) const {
        auto it = c_.find(mask);
        return it == c_.end() ? R{} : it->second;
    }

    Wedge operator+(const Wedge& o) const {
        if (deg_ != o.deg_) throw std::invalid_argument("wedge degree mismatch");
        Wedge r(deg_);
        r.c_ = c_;
        for (const auto& [m, v] : o.c_) {
            auto it = r.c_.find(m);
            if (it == r.c_.end())
                r.c_[m] = v;
            else {
                it->second = it->second + v;
                if (detail::ring_is_zero(it->second)) r.c_.erase(it);
            }
        }
        return r;
    }
    Wedge operator-() const {
        Wedge r(deg_);
        for (const auto& [m, v] : c_) r.c_[m] = -v;
        return r;
    }
    Wedge operator-(const Wedge& o) const { return *this + (-o); }

    template <typename S>
    Wedge scaled(const S& s) const {
        Wedge r(deg_);
        for (const auto& [m, v] : c_) {
            R x = v * s;
            if (!detail::ring_is_zero(x)) r.c_[m] = x;
        }
        return r;
    }

    bool operator==(const Wedge& o) const { return deg_ == o.deg_ && c_ == o.c_; }

private:
    unsigned deg_ = 0;
    std::map<std::uint8_t, R> c_;
};

template <typename R>
Wedge<R> wedge(const Wedge<R>& a, const Wedge<R>& b) {
    if (a.degree() + b.degree() > kDimV)
        throw DegreeOverflow();
    Wedge<R> r(a.degree() + b.degree());
    std::map<std::uint8_t, R> acc;
    for (const auto& [ma, va] : a.coords())
        for (const auto& [mb, vb] : b.coords()) {
            int s = wedge_sign(ma, mb);
            if (s == 0) continue;
            R term = va * vb;
            if (s < 0) term = -term;
            std::uint8_t m = ma | mb;
            auto it = acc.find(m);
            if (it == acc.end())
                acc[m] = std::move(term);
            else
                it->second = it->second + term;
        }
    for (auto& [m, v] : acc)
        if (!detail::ring_is_zero(v)) r.set(m, std::move(v));
    return r;
}

// coefficient of the volume form e_0^...^e_5
template <typename R>
R volume_coefficient(const Wedge<R>& a) {
    return a.get(kVolMask);
}

// 6x6 antisymmetric matrix of ring elements (typically linear forms).
template <typename R>
class SkewForm {
public:
    SkewForm() : a_(kDimV, std::vector<R>(kDimV)) {}

    const R& at(unsigned i, unsigned j) const { return a_[i][j]; }
    void set_upper(unsigned i, unsigned j, R v) {
        if (i >= j) throw std::invalid_argument("set_upper wants i < j");
        a_[j][i] = -v;
        a_[i][j] = std::move(v);
    }
    void validate() const {
        for (unsigned i = 0; i < kDimV; ++i) {
            if (!detail::ring_is_zero(a_[i][i])) throw NotAntisymmetric();
            for (unsigned j = i + 1; j < kDimV; ++j)
                if (!detail::ring_is_zero(a_[i][j] + a_[j][i])) throw NotAntisymmetric();
        }
    }

    Wedge<R> as_two_form() const {
        Wedge<R> w(2);
        for (unsigned i = 0; i < kDimV; ++i)
            for (unsigned j = i + 1; j < kDimV; ++j)
                if (!detail::ring_is_zero(a_[i][j]))
                    w.set(static_cast<std::uint8_t>((1u << i) | (1u << j)), a_[i][j]);
        return w;
    }
    static SkewForm from_two_form(const Wedge<R>& w) {
        if (w.degree() != 2) throw std::invalid_argument("need a 2-form");
        SkewForm s;
        for (const auto& [m, v] : w.coords()) {
            unsigned i = std::countr_zero(static_cast<unsigned>(m));
            unsigned j = std::countr_zero(static_cast<unsigned>(m) & ~(1u << i));
            s.set_upper(i, j, v);
        }
        return s;
    }

private:
    std::vector<std::vector<R>> a_;
};

// Pfaffian by recursive expansion along the first remaining row.
template <typename R>
R pfaffian(const SkewForm<R>& m) {
    m.validate();
    std::vector<unsigned> idx{0, 1, 2, 3, 4, 5};
    struct Rec {
        const SkewForm<R>& a;
        R run(const std::vector<unsigned>& id) {
            if (id.size() == 2) return a.at(id[0], id[1]);
            R acc{};
            for (std::size_t k = 1; k < id.size(); ++k) {
                std::vector<unsigned> rest;
                for (std::size_t t = 1; t < id.size(); ++t)
                    if (t != k) rest.push_back(id[t]);
                R term = a.at(id[0], id[k]) * run(rest);
                acc = (k % 2 == 1) ? acc + term : acc - term;
            }
            return acc;
        }
    } rec{m};
    return rec.run(idx);
}

// Pf(phi) = (1/6) phi^3 under the orientation isomorphism; independent
// route used to cross-check the matrix expansion.
template <typename R>
R pfaffian_cube_route(const Wedge<R>& phi) {
    if (phi.degree() != 2) throw std::invalid_argument("need a 2-form");
    return detail::ring_scale(volume_coefficient(wedge(wedge(phi, phi), phi)), 1, 6);
}

// h(phi) = 1/2 phi0^2 ^ phi and q(phi) = 1/2 phi0 ^ phi^2 in
// Pf(t phi0 + phi) = t^3 + t^2 h(phi) + t q(phi) + Pf(phi).
template <typename R>
struct PfDecomposition {
    R h, q, pf;
};

template <typename R>
PfDecomposition<R> pfaffian_decomposition(const Wedge<R>& phi0, const Wedge<R>& phi) {
    if (!detail::ring_is_one(pfaffian_cube_route(phi0))) throw NotNormalized();
    PfDecomposition<R> d;
    d.h = detail::ring_scale(volume_coefficient(wedge(wedge(phi0, phi0), phi)), 1, 2);
    d.q = detail::ring_scale(volume_coefficient(wedge(phi0, wedge(phi, phi))), 1, 2);
    d.pf = pfaffian_cube_route(phi);
    return d;
}

}  // namespace cycubic
