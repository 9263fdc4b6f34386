#pragma once

#include "cycubic/poly.hpp"

namespace cycubic {

// Remainder of p on division by the (nonempty leading terms) list of
// divisors; full reduction of every term.
FpPoly normal_form(const FpPoly& p, const std::vector<FpPoly>& basis);

// Reduced Groebner basis in grevlex order via Buchberger's algorithm with
// the coprimality and chain criteria, normal pair selection (lowest lcm
// degree first). Deterministic given the input order.
std::vector<FpPoly> groebner(std::vector<FpPoly> gens);

// True iff the reduced basis is {1}, i.e. the generators have no common
// zero over the algebraic closure of F_p.
bool is_unit_ideal(const std::vector<FpPoly>& gens);

}  // namespace cycubic
