#include "cycubic/lattice.hpp"

#include <algorithm>
#include <functional>

namespace cycubic {

Lattice::Lattice(IntMatrix gram, std::string name) : gram_(std::move(gram)), name_(std::move(name)) {
    if (!gram_.is_symmetric()) throw std::invalid_argument("Gram matrix must be symmetric");
}

Int Lattice::inner(const std::vector<Int>& x, const std::vector<Int>& y) const {
    if (x.size() != rank() || y.size() != rank())
        throw std::invalid_argument("inner: coordinate size mismatch");
    Int s(0);
    for (std::size_t i = 0; i < rank(); ++i) {
        if (x[i] == 0) continue;
        Int row(0);
        for (std::size_t j = 0; j < rank(); ++j)
            if (y[j] != 0) row += gram_(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

bool Lattice::is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (gram_(i, i) % 2 != 0) return false;
    return true;
}

Sublattice::Sublattice(Lattice ambient, IntMatrix basis)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {
    if (basis_.cols() != ambient_.rank())
        throw std::invalid_argument("sublattice basis has wrong ambient dimension");
    if (cycubic::rank(to_rational(basis_)) != basis_.rows())
        throw std::invalid_argument("sublattice basis rows are linearly dependent");
}

IntMatrix Sublattice::induced_gram() const {
    return basis_ * ambient_.gram() * basis_.transpose();
}

std::vector<Int> Sublattice::to_ambient(const std::vector<Int>& v) const {
    if (v.size() != rank()) throw std::invalid_argument("to_ambient: size mismatch");
    std::vector<Int> out(ambient_.rank(), Int(0));
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += v[i] * basis_(i, j);
    return out;
}

std::optional<std::vector<Rat>> Sublattice::from_ambient(const std::vector<Rat>& v) const {
    // solve c * basis = v by row reduction on [basis^T | v]
    std::size_t k = rank(), n = ambient_.rank();
    QMatrix aug(n, k + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug(i, j) = Rat(basis_(j, i));
        aug(i, k) = v[i];
    }
    std::size_t r = 0;
    std::vector<std::size_t> pivot_col(k, n);
    for (std::size_t c = 0; c < k && r < n; ++c) {
        std::size_t piv = r;
        while (piv < n && aug(piv, c) == 0) ++piv;
        if (piv == n) continue;
        if (piv != r)
            for (std::size_t j = 0; j <= k; ++j) std::swap(aug(r, j), aug(piv, j));
        Rat d = aug(r, c);
        for (std::size_t j = 0; j <= k; ++j) aug(r, j) /= d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || aug(i, c) == 0) continue;
            Rat f = aug(i, c);
            for (std::size_t j = 0; j <= k; ++j) aug(i, j) -= f * aug(r, j);
        }
        pivot_col[c] = r;
        ++r;
    }
    std::vector<Rat> coeff(k, Rat(0));
    for (std::size_t c = 0; c < k; ++c)
        if (pivot_col[c] != n) coeff[c] = aug(pivot_col[c], k);
    // consistency: rows past the pivots must have zero rhs
    for (std::size_t i = r; i < n; ++i)
        if (aug(i, k) != 0) return std::nullopt;
    return coeff;
}

Isometry::Isometry(IntMatrix matrix, Lattice lattice)
    : matrix_(std::move(matrix)), lattice_(std::move(lattice)) {
    if (matrix_.rows() != lattice_.rank() || matrix_.cols() != lattice_.rank())
        throw std::invalid_argument("isometry matrix has wrong size");
    if (matrix_.transpose() * lattice_.gram() * matrix_ != lattice_.gram())
        throw std::invalid_argument("matrix does not preserve the Gram form");
    Int d = det(matrix_);
    if (d != 1 && d != -1) throw std::invalid_argument("isometry must be unimodular");
}

Isometry Isometry::compose(const Isometry& inner) const {
    return Isometry(matrix_ * inner.matrix_, lattice_);
}

int Isometry::order(int bound) const {
    IntMatrix id = IntMatrix::identity(matrix_.rows());
    IntMatrix p = matrix_;
    for (int k = 1; k <= bound; ++k) {
        if (p == id) return k;
        p = p * matrix_;
    }
    return 0;
}

Int DiscriminantGroup::order() const {
    Int o(1);
    for (const auto& d : invariant_factors) o *= d;
    return o;
}

namespace {

Rat reduce_mod(const Rat& x, const Int& modulus) {
    // representative in [0, modulus)
    Rat m(modulus);
    Rat r = x - Rat(fdiv(numer(x), denom(x) * modulus)) * m;
    while (r < 0) r += m;
    while (r >= m) r -= m;
    return r;
}

}  // namespace

DiscriminantGroup discriminant_group(const Lattice& l) {
    if (l.is_degenerate()) throw DegenerateLattice();
    std::size_t n = l.rank();
    SnfResult s = snf(l.gram());
    DiscriminantGroup dg;
    dg.q_modulus = l.is_even() ? Int(2) : Int(1);
    // Row lattice of G^{-1} modulo Z^n is generated by rows of D^{-1} U;
    // rows with d_i > 1 give the cyclic summands.
    for (std::size_t i = 0; i < n; ++i) {
        Int d = s.d(i, i);
        if (d <= 1) continue;
        dg.invariant_factors.push_back(d);
        std::vector<Rat> g(n);
        for (std::size_t j = 0; j < n; ++j) g[j] = Rat(s.u(i, j), d);
        dg.generator_lifts.push_back(std::move(g));
    }
    std::size_t k = dg.generator_lifts.size();
    QMatrix gq = to_rational(l.gram());
    auto pair = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
        Rat r(0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) r += x[i] * gq(i, j) * y[j];
        return r;
    };
    dg.q_values.resize(k);
    dg.b_values.assign(k, std::vector<Rat>(k));
    for (std::size_t i = 0; i < k; ++i) {
        dg.q_values[i] = reduce_mod(pair(dg.generator_lifts[i], dg.generator_lifts[i]), dg.q_modulus);
        for (std::size_t j = 0; j < k; ++j)
            dg.b_values[i][j] = reduce_mod(pair(dg.generator_lifts[i], dg.generator_lifts[j]), Int(1));
    }
    return dg;
}

std::tuple<std::size_t, std::size_t, std::size_t> signature_of(const QMatrix& g) {
    std::size_t n = g.rows();
    QMatrix a = g;
    std::size_t pos = 0, neg = 0, zero = 0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = n;
        for (std::size_t i = k; i < n; ++i)
            if (a(i, i) != 0) {
                piv = i;
                break;
            }
        if (piv == n) {
            // all-zero diagonal: transfer an off-diagonal entry to the diagonal
            std::size_t oi = n, oj = n;
            for (std::size_t i = k; i < n && oi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (a(i, j) != 0) {
                        oi = i;
                        oj = j;
                        break;
                    }
            if (oi == n) {
                zero += n - k;
                break;
            }
            for (std::size_t t = 0; t < n; ++t) a(oi, t) += a(oj, t);
            for (std::size_t t = 0; t < n; ++t) a(t, oi) += a(t, oj);
            piv = oi;
        }
        if (piv != k) {
            for (std::size_t t = 0; t < n; ++t) std::swap(a(k, t), a(piv, t));
            for (std::size_t t = 0; t < n; ++t) std::swap(a(t, k), a(t, piv));
        }
        Rat d = a(k, k);
        if (d > 0)
            ++pos;
        else
            ++neg;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / d;
            for (std::size_t t = 0; t < n; ++t) a(i, t) -= f * a(k, t);
            for (std::size_t t = 0; t < n; ++t) a(t, i) -= f * a(t, k);
        }
    }
    return {pos, neg, zero};
}

std::pair<std::size_t, std::size_t> signature(const Lattice& l) {
    auto [pos, neg, zero] = signature_of(to_rational(l.gram()));
    if (zero != 0) throw DegenerateLattice();
    return {pos, neg};
}

Sublattice orthogonal_complement(const Sublattice& sub) {
    // x with basis * G * x^T = 0; integer kernel is saturated, hence primitive.
    IntMatrix cond = sub.basis() * sub.ambient().gram();
    return Sublattice(sub.ambient(), kernel_int(cond));
}

SaturationResult saturate(const Sublattice& sub) {
    IntMatrix sat = saturate_rows(sub.basis());
    Sublattice s(sub.ambient(), sat);
    // index = |det| of the coordinate matrix of the old basis in the new one
    std::size_t k = sub.rank();
    QMatrix coord(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rat> v(sub.ambient().rank());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = Rat(sub.basis()(i, j));
        auto c = s.from_ambient(v);
        if (!c) throw std::logic_error("saturation lost a basis vector");
        for (std::size_t j = 0; j < k; ++j) coord(i, j) = (*c)[j];
    }
    Rat idx = det(coord);
    if (!is_integral(idx)) throw std::logic_error("saturation index not integral");
    Int index = abs_int(numer(idx));
    return {std::move(s), index};
}

bool is_primitive(const Sublattice& sub) { return saturate(sub).index == 1; }

NikulinReport nikulin_hypothesis(const Lattice& l) {
    NikulinReport r;
    r.rank = l.rank();
    r.even = l.is_even();
    auto [pos, neg, zero] = signature_of(to_rational(l.gram()));
    if (zero != 0) throw DegenerateLattice();
    r.indefinite = pos > 0 && neg > 0;
    r.length = discriminant_group(l).length();
    r.holds = r.even && r.indefinite && r.rank >= r.length + 2;
    return r;
}

Isometry reflection(const Lattice& l, const std::vector<Int>& v) {
    Int vv = l.norm(v);
    if (vv == 0) throw IsotropicVector();
    std::size_t n = l.rank();
    std::vector<Int> gv(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) gv[i] += l.gram()(i, j) * v[j];
    // r(x) = x - 2<x,v>/<v,v> v ; column j needs vv | 2 (Gv)_j v
    IntMatrix m = IntMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
        Int num = 2 * gv[j];
        for (std::size_t i = 0; i < n; ++i) {
            Int t = num * v[i];
            if (t % vv != 0) throw NonIntegralReflection();
            m(i, j) -= t / vv;
        }
    }
    return Isometry(std::move(m), l);
}

Int divisibility(const Lattice& l, const std::vector<Int>& v) {
    bool zero = std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
    if (zero) throw ZeroVector();
    Int g(0);
    for (std::size_t i = 0; i < l.rank(); ++i) {
        Int e(0);
        for (std::size_t j = 0; j < l.rank(); ++j) e += l.gram()(i, j) * v[j];
        g = gcd_int(g, e);
    }
    return g;
}

GlueResult glue_extends(const Lattice& m, const Sublattice& s, const Sublattice& t,
                        const Isometry& phi_s, const Isometry& phi_t) {
    if (s.rank() + t.rank() != m.rank())
        throw InvalidDecomposition("ranks of S and T do not fill the ambient lattice");
    // T must be the orthogonal complement of S (same saturated row span).
    Sublattice comp = orthogonal_complement(s);
    if (hnf_rows(comp.basis()) != hnf_rows(saturate_rows(t.basis())) ||
        saturate(t).index != 1)
        throw InvalidDecomposition("T is not the orthogonal complement of S");
    if (!is_primitive(s)) throw InvalidDecomposition("S is not primitive");
    if (phi_s.matrix().rows() != s.rank() || phi_t.matrix().rows() != t.rank())
        throw InvalidDecomposition("isometry sizes do not match the sublattices");

    std::size_t n = m.rank();
    // Q columns: S basis vectors then T basis vectors, in ambient coordinates.
    QMatrix q(n, n);
    for (std::size_t j = 0; j < s.rank(); ++j)
        for (std::size_t i = 0; i < n; ++i) q(i, j) = Rat(s.basis()(j, i));
    for (std::size_t j = 0; j < t.rank(); ++j)
        for (std::size_t i = 0; i < n; ++i) q(i, s.rank() + j) = Rat(t.basis()(j, i));
    QMatrix qinv = inverse(q);

    GlueResult res;
    res.glue_order = abs_int(numer(Rat(1) / det(qinv)));

    // glue generators: ambient basis vectors expressed in the S + T frame
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Rat> a(s.rank()), b(t.rank());
        bool fractional = false;
        for (std::size_t r = 0; r < n; ++r) {
            Rat c = qinv(r, i);
            Rat fr = c - Rat(fdiv(numer(c), denom(c)));
            if (fr != 0) fractional = true;
            if (r < s.rank())
                a[r] = fr;
            else
                b[r - s.rank()] = fr;
        }
        if (fractional) res.glue_generators.emplace_back(std::move(a), std::move(b));
    }

    // extension in ambient coordinates: E = Q diag(phi_s, phi_t) Q^{-1};
    // it exists as a lattice isometry exactly when E is integral, which is
    // the invariance of M/(S+T) inside D_S + D_T.
    QMatrix block(n, n);
    for (std::size_t i = 0; i < s.rank(); ++i)
        for (std::size_t j = 0; j < s.rank(); ++j) block(i, j) = Rat(phi_s.matrix()(i, j));
    for (std::size_t i = 0; i < t.rank(); ++i)
        for (std::size_t j = 0; j < t.rank(); ++j)
            block(s.rank() + i, s.rank() + j) = Rat(phi_t.matrix()(i, j));
    QMatrix e = q * block * qinv;
    auto ei = to_integral(e);
    if (!ei) {
        res.extends = false;
        return res;
    }
    res.extends = true;
    res.extension = Isometry(*ei, m);
    return res;
}

namespace {

bool same_invariant_factors(const Lattice& a, const Lattice& b) {
    auto fa = discriminant_group(a).invariant_factors;
    auto fb = discriminant_group(b).invariant_factors;
    return fa == fb;
}

}  // namespace

IsometrySearchResult isometry_search(const Lattice& l1, const Lattice& l2, long bound) {
    IsometrySearchResult out;
    if (l1.rank() != l2.rank()) {
        out.status = SearchStatus::NoByInvariants;
        return out;
    }
    std::size_t n = l1.rank();
    if (det(l1.gram()) != det(l2.gram()) || l1.is_even() != l2.is_even() ||
        signature(l1) != signature(l2) || !same_invariant_factors(l1, l2)) {
        out.status = SearchStatus::NoByInvariants;
        return out;
    }

    // enumerate candidate columns grouped by required norm
    std::vector<std::vector<Int>> cand;
    std::vector<Int> v(n, Int(-bound));
    for (;;) {
        cand.push_back(v);
        std::size_t i = 0;
        while (i < n && v[i] == bound) v[i++] = -bound;
        if (i == n) break;
        ++v[i];
    }

    std::vector<std::vector<Int>> cols;
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
        if (k == n) return true;
        for (const auto& c : cand) {
            if (l1.norm(c) != l2.gram()(k, k)) continue;
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i)
                ok = l1.inner(cols[i], c) == l2.gram()(i, k);
            if (!ok) continue;
            cols.push_back(c);
            if (rec(k + 1)) return true;
            cols.pop_back();
        }
        return false;
    };
    if (rec(0)) {
        IntMatrix b(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) b(i, j) = cols[j][i];
        out.status = SearchStatus::Found;
        out.witness = b;
    } else {
        out.status = SearchStatus::Exhausted;
    }
    return out;
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
    std::size_t n = a.rank(), m = b.rank();
    IntMatrix g(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = a.gram()(i, j);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) g(n + i, n + j) = b.gram()(i, j);
    std::string name;
    if (!a.name().empty() && !b.name().empty()) name = a.name() + "+" + b.name();
    return Lattice(std::move(g), std::move(name));
}

Lattice rescale(const Lattice& l, const Int& n) {
    if (n == 0) throw std::invalid_argument("rescale by zero");
    IntMatrix g = l.gram();
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= n;
    std::string name;
    if (!l.name().empty()) name = l.name() + "(" + n.str() + ")";
    return Lattice(std::move(g), std::move(name));
}

namespace lattices {

Lattice hyperbolic_U() { return Lattice(IntMatrix{{Int(0), Int(1)}, {Int(1), Int(0)}}, "U"); }

Lattice U3() { return rescale(hyperbolic_U(), Int(3)); }

Lattice A2() { return Lattice(IntMatrix{{Int(2), Int(-1)}, {Int(-1), Int(2)}}, "A2"); }

Lattice A2_neg() { return rescale(A2(), Int(-1)); }

Lattice E8() {
    // Bourbaki Cartan matrix of E8 (node 2 attached to node 4)
    const int c[8][8] = {
        {2, 0, -1, 0, 0, 0, 0, 0},  {0, 2, 0, -1, 0, 0, 0, 0},  {-1, 0, 2, -1, 0, 0, 0, 0},
        {0, -1, -1, 2, -1, 0, 0, 0}, {0, 0, 0, -1, 2, -1, 0, 0}, {0, 0, 0, 0, -1, 2, -1, 0},
        {0, 0, 0, 0, 0, -1, 2, -1}, {0, 0, 0, 0, 0, 0, -1, 2}};
    IntMatrix g(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) g(i, j) = c[i][j];
    return Lattice(std::move(g), "E8");
}

Lattice E8_neg() { return rescale(E8(), Int(-1)); }

Lattice span_m(const Int& m) { return Lattice(IntMatrix{{m}}, "<" + m.str() + ">"); }

Lattice big_S() {
    return direct_sum(direct_sum(direct_sum(direct_sum(hyperbolic_U(), hyperbolic_U()), E8()), E8()), A2());
}

Lattice S_neg() {
    // U(-1) is isometric to U, so the scaled lattice is realized with
    // standard hyperbolic blocks: U^2 + E8(-1)^2 + A2(-1).
    return direct_sum(
        direct_sum(direct_sum(direct_sum(hyperbolic_U(), hyperbolic_U()), E8_neg()), E8_neg()),
        A2_neg());
}

}  // namespace lattices

}  // namespace cycubic
