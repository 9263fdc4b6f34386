#include "cycubic/groebner.hpp"

#include <algorithm>
#include <list>

namespace cycubic {

namespace {

FpPoly make_monic(const FpPoly& p) {
    if (p.is_zero()) return p;
    return p.scaled(p.leading_coeff().inv());
}

FpPoly spoly(const FpPoly& f, const FpPoly& g, std::size_t nvars) {
    (void)nvars;
    Monomial l = Monomial::lcm(f.leading_monomial(), g.leading_monomial());
    // both are monic
    FpPoly a = f.times_term(l.divide(f.leading_monomial()), Fp::from_raw(1));
    FpPoly b = g.times_term(l.divide(g.leading_monomial()), Fp::from_raw(1));
    return a - b;
}

struct Pair {
    std::size_t i, j;
    Monomial lcm;
};

}  // namespace

FpPoly normal_form(const FpPoly& p, const std::vector<FpPoly>& basis) {
    FpPoly rem(p.nvars());
    FpPoly work = p;
    while (!work.is_zero()) {
        const Monomial& lm = work.leading_monomial();
        const FpPoly* divisor = nullptr;
        for (const auto& g : basis)
            if (!g.is_zero() && g.leading_monomial().divides(lm)) {
                divisor = &g;
                break;
            }
        if (divisor) {
            Fp c = work.leading_coeff() * divisor->leading_coeff().inv();
            work = work - divisor->times_term(lm.divide(divisor->leading_monomial()), c);
        } else {
            rem.add_term(lm, work.leading_coeff());
            FpPoly lt(p.nvars());
            lt.add_term(lm, work.leading_coeff());
            work = work - lt;
        }
    }
    return rem;
}

std::vector<FpPoly> groebner(std::vector<FpPoly> gens) {
    std::vector<FpPoly> g;
    std::size_t nvars = 0;
    for (auto& p : gens) {
        nvars = p.nvars();
        if (!p.is_zero()) g.push_back(make_monic(p));
    }
    if (g.empty()) return {};
    for (const auto& p : g)
        if (p.leading_monomial().deg == 0) return {FpPoly::constant(nvars, Fp::from_raw(1))};

    std::list<Pair> pairs;

    // Gebauer-Moller pair update when element t joins the basis
    auto update_pairs = [&](std::size_t t) {
        const Monomial& lt = g[t].leading_monomial();
        std::vector<Pair> fresh;
        for (std::size_t i = 0; i < t; ++i)
            if (!g[i].is_zero()) fresh.push_back({i, t, Monomial::lcm(g[i].leading_monomial(), lt)});
        // drop new pairs whose lcm is properly divisible by another new lcm
        std::vector<bool> keep(fresh.size(), true);
        for (std::size_t a = 0; a < fresh.size(); ++a)
            for (std::size_t b = 0; b < fresh.size() && keep[a]; ++b) {
                if (a == b || !keep[b]) continue;
                if (fresh[b].lcm.divides(fresh[a].lcm) && fresh[b].lcm != fresh[a].lcm)
                    keep[a] = false;
            }
        // among classes with equal lcm: if any member is coprime, drop the
        // class; otherwise keep exactly one representative
        for (std::size_t a = 0; a < fresh.size(); ++a) {
            if (!keep[a]) continue;
            bool coprime_in_class =
                Monomial::coprime(g[fresh[a].i].leading_monomial(), lt);
            for (std::size_t b = a + 1; b < fresh.size(); ++b) {
                if (!keep[b] || fresh[b].lcm != fresh[a].lcm) continue;
                coprime_in_class =
                    coprime_in_class || Monomial::coprime(g[fresh[b].i].leading_monomial(), lt);
                keep[b] = false;
            }
            if (coprime_in_class) keep[a] = false;
        }
        // chain criterion on old pairs
        for (auto it = pairs.begin(); it != pairs.end();) {
            const Monomial& l = it->lcm;
            if (lt.divides(l) && Monomial::lcm(g[it->i].leading_monomial(), lt) != l &&
                Monomial::lcm(g[it->j].leading_monomial(), lt) != l)
                it = pairs.erase(it);
            else
                ++it;
        }
        for (std::size_t a = 0; a < fresh.size(); ++a)
            if (keep[a]) pairs.push_back(fresh[a]);
    };

    for (std::size_t t = 1; t < g.size(); ++t) update_pairs(t);

    while (!pairs.empty()) {
        // normal selection: smallest lcm degree, ties by (i, j)
        auto best = pairs.begin();
        for (auto it = std::next(pairs.begin()); it != pairs.end(); ++it) {
            if (it->lcm.deg < best->lcm.deg ||
                (it->lcm.deg == best->lcm.deg &&
                 (it->i < best->i || (it->i == best->i && it->j < best->j))))
                best = it;
        }
        Pair p = *best;
        pairs.erase(best);

        FpPoly r = normal_form(spoly(g[p.i], g[p.j], nvars), g);
        if (r.is_zero()) continue;
        r = make_monic(r);
        if (r.leading_monomial().deg == 0)
            return {FpPoly::constant(nvars, Fp::from_raw(1))};
        g.push_back(std::move(r));
        update_pairs(g.size() - 1);
    }

    // reduce: drop elements whose lead is divisible by another lead, then
    // tail-reduce each survivor against the others
    std::vector<FpPoly> minimal;
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
            if (i == j) continue;
            if (g[j].leading_monomial().divides(g[i].leading_monomial())) {
                // on ties keep the earlier element
                if (g[j].leading_monomial() != g[i].leading_monomial() || j < i) redundant = true;
            }
        }
        if (!redundant) minimal.push_back(g[i]);
    }
    std::vector<FpPoly> reduced;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        std::vector<FpPoly> others;
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        FpPoly r = normal_form(minimal[i], others);
        if (!r.is_zero()) reduced.push_back(make_monic(r));
    }
    std::sort(reduced.begin(), reduced.end(), [&](const FpPoly& a, const FpPoly& b) {
        return grevlex_greater(a.leading_monomial(), b.leading_monomial(), nvars);
    });
    return reduced;
}

bool is_unit_ideal(const std::vector<FpPoly>& gens) {
    std::vector<FpPoly> basis = groebner(gens);
    return basis.size() == 1 && !basis[0].is_zero() && basis[0].leading_monomial().deg == 0;
}

}  // namespace cycubic
