#pragma once

#include <cstdint>
#include <optional>

#include "cycubic/lattice.hpp"

namespace cycubic {

// Rational quadratic form q(v) = v^T G v with G symmetric rational.

enum class IsotropicStatus { Reached, ImpossibleBySignature, Exhausted };

struct IsotropicSearchResult {
    IsotropicStatus status = IsotropicStatus::Exhausted;
    // rows are jointly isotropic integer vectors (q and its polar vanish)
    IntMatrix basis;
};

struct IsotropicSearchParams {
    long max_coefficient = 4;     // coefficient box bound per sparsity level
    std::size_t max_support = 5;  // nonzero positions tried per candidate
    int restarts = 6;             // randomized unimodular remixes after stalls
    std::uint64_t seed = 9001;
};

// Incremental totally isotropic subspace search: find a small-height
// isotropic vector in the polar complement of the current span, adjoin,
// repeat. A negative answer is conclusive only via the signature bound.
IsotropicSearchResult find_isotropic_subspace(const QMatrix& gram, std::size_t target_dim,
                                              const IsotropicSearchParams& params = {});

struct WittBounds {
    std::size_t lower = 0;  // dimension of an exhibited totally isotropic subspace
    std::size_t upper = 0;  // min(n+, n-) + dim radical
    IntMatrix witness;
    bool exact() const { return lower == upper; }
};

WittBounds witt_bounds(const QMatrix& gram, const IsotropicSearchParams& params = {});

}  // namespace cycubic
