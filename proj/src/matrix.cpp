#include "cycubic/matrix.hpp"

#include <algorithm>

namespace cycubic {

QMatrix to_rational(const IntMatrix& m) {
    QMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
    return r;
}

std::optional<IntMatrix> to_integral(const QMatrix& m) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!is_integral(m(i, j))) return std::nullopt;
            r(i, j) = numer(m(i, j));
        }
    return r;
}

Int det(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(k, k) * a(i, j) - a(i, k) * a(k, j)) / prev;
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

Rat det(const QMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
    std::size_t n = m.rows();
    QMatrix a = m;
    Rat d(1);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            d = -d;
        }
        d *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return d;
}

QMatrix inverse(const QMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: not square");
    std::size_t n = m.rows();
    QMatrix a = m, inv = QMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) throw std::domain_error("inverse: singular matrix");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        Rat d = a(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) /= d;
            inv(k, j) /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a(i, k) == 0) continue;
            Rat f = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

QMatrix solve_right(const QMatrix& a, const QMatrix& b) { return inverse(a) * b; }

std::size_t rank(const QMatrix& m) {
    QMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && a(piv, c) == 0) ++piv;
        if (piv == a.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(piv, j));
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (a(i, c) == 0) continue;
            Rat f = a(i, c) / a(r, c);
            for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return r;
}

namespace {

// Position of the entry with the smallest nonzero magnitude in the working
// submatrix; keeping pivots small limits coefficient growth in snf/hnf.
bool min_nonzero(const IntMatrix& a, std::size_t from, std::size_t& bi, std::size_t& bj) {
    bool found = false;
    Int best(0);
    for (std::size_t i = from; i < a.rows(); ++i)
        for (std::size_t j = from; j < a.cols(); ++j) {
            if (a(i, j) == 0) continue;
            Int v = abs_int(a(i, j));
            if (!found || v < best) {
                best = v;
                bi = i;
                bj = j;
                found = true;
            }
        }
    return found;
}

}  // namespace

SnfResult snf(const IntMatrix& m) {
    std::size_t rows = m.rows(), cols = m.cols();
    IntMatrix a = m;
    IntMatrix u = IntMatrix::identity(rows), v = IntMatrix::identity(cols);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        for (std::size_t t = 0; t < cols; ++t) std::swap(a(i, t), a(j, t));
        for (std::size_t t = 0; t < rows; ++t) std::swap(u(i, t), u(j, t));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t t = 0; t < rows; ++t) std::swap(a(t, i), a(t, j));
        for (std::size_t t = 0; t < cols; ++t) std::swap(v(t, i), v(t, j));
    };
    auto addmul_row = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t t = 0; t < cols; ++t) a(dst, t) += f * a(src, t);
        for (std::size_t t = 0; t < rows; ++t) u(dst, t) += f * u(src, t);
    };
    auto addmul_col = [&](std::size_t dst, std::size_t src, const Int& f) {
        for (std::size_t t = 0; t < rows; ++t) a(t, dst) += f * a(t, src);
        for (std::size_t t = 0; t < cols; ++t) v(t, dst) += f * v(t, src);
    };
    auto neg_row = [&](std::size_t i) {
        for (std::size_t t = 0; t < cols; ++t) a(i, t) = -a(i, t);
        for (std::size_t t = 0; t < rows; ++t) u(i, t) = -u(i, t);
    };

    std::size_t n = std::min(rows, cols);
    for (std::size_t k = 0; k < n; ++k) {
        bool block_zero = false;
        for (;;) {
            // always restart from the entry of smallest magnitude; this keeps
            // the euclidean quotients small and avoids coefficient explosion
            std::size_t bi, bj;
            if (!min_nonzero(a, k, bi, bj)) {
                block_zero = true;
                break;
            }
            if (bi != k) swap_rows(k, bi);
            if (bj != k) swap_cols(k, bj);
            bool dirty = false;
            for (std::size_t i = k + 1; i < rows; ++i)
                if (a(i, k) != 0) {
                    Int q = fdiv(a(i, k), a(k, k));
                    if (q != 0) addmul_row(i, k, -q);
                    if (a(i, k) != 0) dirty = true;
                }
            for (std::size_t j = k + 1; j < cols; ++j)
                if (a(k, j) != 0) {
                    Int q = fdiv(a(k, j), a(k, k));
                    if (q != 0) addmul_col(j, k, -q);
                    if (a(k, j) != 0) dirty = true;
                }
            if (dirty) continue;
            // pivot must divide every remaining entry
            bool divides = true;
            for (std::size_t i = k + 1; i < rows && divides; ++i)
                for (std::size_t j = k + 1; j < cols && divides; ++j)
                    if (a(i, j) % a(k, k) != 0) {
                        addmul_row(k, i, Int(1));
                        divides = false;
                    }
            if (divides) break;
        }
        if (block_zero) break;
        if (a(k, k) < 0) neg_row(k);
    }

    IntMatrix d(rows, cols);
    for (std::size_t k = 0; k < n; ++k) d(k, k) = a(k, k);
    return {u, d, v};
}

IntMatrix hnf_rows(const IntMatrix& m) {
    std::size_t rows = m.rows(), cols = m.cols();
    IntMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        // reduce column c below row r with a euclidean cascade
        for (;;) {
            std::size_t piv = rows;
            Int best(0);
            for (std::size_t i = r; i < rows; ++i)
                if (a(i, c) != 0 && (piv == rows || abs_int(a(i, c)) < best)) {
                    piv = i;
                    best = abs_int(a(i, c));
                }
            if (piv == rows) break;
            if (piv != r)
                for (std::size_t t = 0; t < cols; ++t) std::swap(a(r, t), a(piv, t));
            bool done = true;
            for (std::size_t i = r + 1; i < rows; ++i)
                if (a(i, c) != 0) {
                    Int q = fdiv(a(i, c), a(r, c));
                    for (std::size_t t = 0; t < cols; ++t) a(i, t) -= q * a(r, t);
                    if (a(i, c) != 0) done = false;
                }
            if (done) break;
        }
        if (a(r, c) == 0) continue;
        if (a(r, c) < 0)
            for (std::size_t t = 0; t < cols; ++t) a(r, t) = -a(r, t);
        for (std::size_t i = 0; i < r; ++i) {
            Int q = fdiv(a(i, c), a(r, c));
            if (q != 0)
                for (std::size_t t = 0; t < cols; ++t) a(i, t) -= q * a(r, t);
        }
        ++r;
    }
    IntMatrix out(r, cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(i, j);
    return out;
}

IntMatrix kernel_int(const IntMatrix& m) {
    // UMV = D  =>  M (V x) = U^-1 D x ; kernel spanned by columns of V past the rank.
    SnfResult s = snf(m);
    std::size_t n = m.cols();
    std::size_t r = 0;
    for (std::size_t k = 0; k < std::min(m.rows(), n); ++k)
        if (s.d(k, k) != 0) ++r;
    IntMatrix ker(n - r, n);
    for (std::size_t j = r; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) ker(j - r, i) = s.v(i, j);
    return ker;
}

IntMatrix kernel_rows(const QMatrix& m) {
    // clear denominators row by row, then integer kernel (already saturated)
    IntMatrix mi(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Int l(1);
        for (std::size_t j = 0; j < m.cols(); ++j) l = lcm_int(l, denom(m(i, j)));
        for (std::size_t j = 0; j < m.cols(); ++j) mi(i, j) = numer(m(i, j) * Rat(l));
    }
    return kernel_int(mi);
}

IntMatrix saturate_rows(const IntMatrix& m) {
    // (row span)_Q cap Z^n  =  kernel of the kernel
    return kernel_int(kernel_int(m));
}

}  // namespace cycubic
