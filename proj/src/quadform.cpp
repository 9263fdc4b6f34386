#include "cycubic/quadform.hpp"

#include <random>

namespace cycubic {

namespace {

Rat eval_q(const QMatrix& g, const std::vector<Int>& v) {
    Rat s(0);
    std::size_t n = g.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0) continue;
        Rat row(0);
        for (std::size_t j = 0; j < n; ++j)
            if (v[j] != 0) row += g(i, j) * Rat(v[j]);
        s += Rat(v[i]) * row;
    }
    return s;
}

// candidate vectors in the row space of `space`, enumerated sparse-first
// with growing coefficient boxes; first isotropic vector not in `current`
// wins. Deterministic for a fixed basis ordering.
std::optional<std::vector<Int>> search_isotropic(const QMatrix& g, const IntMatrix& space,
                                                 const IntMatrix& current, long max_coeff,
                                                 std::size_t max_support) {
    std::size_t k = space.rows(), n = space.cols();
    if (k == 0) return std::nullopt;
    QMatrix cur = to_rational(current);

    auto in_current = [&](const std::vector<Int>& v) {
        if (current.rows() == 0) return false;
        QMatrix stacked(current.rows() + 1, n);
        for (std::size_t i = 0; i < current.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) stacked(i, j) = Rat(current(i, j));
        for (std::size_t j = 0; j < n; ++j) stacked(current.rows(), j) = Rat(v[j]);
        return rank(stacked) == current.rows();
    };

    std::vector<std::size_t> support;
    std::vector<Int> combo(k, Int(0));
    std::vector<Int> v(n);
    std::optional<std::vector<Int>> found;

    auto try_combo = [&]() {
        for (std::size_t j = 0; j < n; ++j) {
            v[j] = 0;
            for (std::size_t idx : support)
                if (combo[idx] != 0) v[j] += combo[idx] * space(idx, j);
        }
        bool zero = true;
        for (const auto& x : v) zero = zero && x == 0;
        if (zero) return false;
        if (eval_q(g, v) != 0) return false;
        if (in_current(v)) return false;
        found = v;
        return true;
    };

    // enumerate supports of increasing size, coefficients in [-b, b]
    for (long b = 1; b <= max_coeff && !found; ++b) {
        for (std::size_t sz = 1; sz <= std::min(max_support, k) && !found; ++sz) {
            support.assign(sz, 0);
            for (std::size_t i = 0; i < sz; ++i) support[i] = i;
            for (;;) {
                // iterate coefficient box over the chosen support
                std::vector<long> coeff(sz, -b);
                for (;;) {
                    bool lead_positive = false;
                    for (std::size_t i = 0; i < sz; ++i) {
                        combo[support[i]] = coeff[i];
                        if (!lead_positive && coeff[i] != 0) lead_positive = coeff[i] > 0;
                    }
                    if (lead_positive && try_combo()) break;
                    std::size_t i = 0;
                    while (i < sz && coeff[i] == b) coeff[i++] = -b;
                    if (i == sz) break;
                    ++coeff[i];
                }
                for (std::size_t idx : support) combo[idx] = 0;
                if (found) break;
                // next support combination
                std::size_t i = sz;
                while (i > 0 && support[i - 1] == k - sz + i - 1) --i;
                if (i == 0) break;
                ++support[i - 1];
                for (std::size_t t = i; t < sz; ++t) support[t] = support[t - 1] + 1;
            }
        }
    }
    return found;
}

}  // namespace

IsotropicSearchResult find_isotropic_subspace(const QMatrix& gram, std::size_t target_dim,
                                              const IsotropicSearchParams& params) {
    std::size_t n = gram.rows();
    IsotropicSearchResult res;
    auto [pos, neg, zero] = signature_of(gram);
    if (target_dim > std::min(pos, neg) + zero) {
        res.status = IsotropicStatus::ImpossibleBySignature;
        return res;
    }

    IntMatrix current(0, n);
    std::mt19937_64 rng(params.seed);

    int restarts_left = params.restarts;
    while (current.rows() < target_dim) {
        // polar complement of the current span (contains the span itself)
        IntMatrix space;
        if (current.rows() == 0) {
            space = IntMatrix::identity(n);
        } else {
            QMatrix cond(current.rows(), n);
            for (std::size_t i = 0; i < current.rows(); ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Rat s(0);
                    for (std::size_t t = 0; t < n; ++t) s += Rat(current(i, t)) * gram(t, j);
                    cond(i, j) = s;
                }
            space = kernel_rows(cond);
        }
        auto v = search_isotropic(gram, space, current, params.max_coefficient,
                                  params.max_support);
        if (!v && restarts_left > 0) {
            // remix the complement basis with random unimodular row operations
            --restarts_left;
            IntMatrix mixed = space;
            std::uniform_int_distribution<std::size_t> pick(0, space.rows() ? space.rows() - 1 : 0);
            std::uniform_int_distribution<int> scale(-2, 2);
            for (int ops = 0; ops < 16 && space.rows() > 1; ++ops) {
                std::size_t a = pick(rng), b = pick(rng);
                if (a == b) continue;
                int c = scale(rng);
                for (std::size_t j = 0; j < n; ++j) mixed(a, j) += c * mixed(b, j);
            }
            v = search_isotropic(gram, mixed, current, params.max_coefficient,
                                 params.max_support);
        }
        if (!v) {
            res.status = IsotropicStatus::Exhausted;
            res.basis = current;
            return res;
        }
        // normalize by content to keep coordinates small
        Int content(0);
        for (const auto& x : *v) content = gcd_int(content, x);
        if (content > 1)
            for (auto& x : *v) x /= content;
        IntMatrix next(current.rows() + 1, n);
        for (std::size_t i = 0; i < current.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) next(i, j) = current(i, j);
        next.set_row(current.rows(), *v);
        current = std::move(next);
    }
    res.status = IsotropicStatus::Reached;
    res.basis = current;
    return res;
}

WittBounds witt_bounds(const QMatrix& gram, const IsotropicSearchParams& params) {
    auto [pos, neg, zero] = signature_of(gram);
    WittBounds w;
    w.upper = std::min(pos, neg) + zero;
    IsotropicSearchResult r = find_isotropic_subspace(gram, w.upper, params);
    w.lower = r.basis.rows();
    w.witness = r.basis;
    return w;
}

}  // namespace cycubic
