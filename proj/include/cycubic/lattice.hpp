#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cycubic/matrix.hpp"

namespace cycubic {

struct DegenerateLattice : std::domain_error {
    DegenerateLattice() : std::domain_error("lattice has determinant zero") {}
};
struct InvalidDecomposition : std::domain_error {
    explicit InvalidDecomposition(const std::string& w) : std::domain_error(w) {}
};
struct NonIntegralReflection : std::domain_error {
    NonIntegralReflection() : std::domain_error("reflection does not preserve the lattice") {}
};
struct IsotropicVector : std::domain_error {
    IsotropicVector() : std::domain_error("vector has self-pairing zero") {}
};
struct ZeroVector : std::domain_error {
    ZeroVector() : std::domain_error("zero vector") {}
};

// Free Z-module of finite rank with an integral symmetric bilinear form.
// Vectors are coordinates in the basis implied by the Gram matrix.
class Lattice {
public:
    Lattice() = default;
    explicit Lattice(IntMatrix gram, std::string name = {});

    const IntMatrix& gram() const { return gram_; }
    const std::string& name() const { return name_; }
    std::size_t rank() const { return gram_.rows(); }

    Int inner(const std::vector<Int>& x, const std::vector<Int>& y) const;
    Int norm(const std::vector<Int>& x) const { return inner(x, x); }

    bool is_even() const;
    Int determinant() const { return det(gram_); }
    bool is_degenerate() const { return determinant() == 0; }

private:
    IntMatrix gram_;
    std::string name_;
};

// Sublattice given by basis rows in ambient coordinates.
// Induced Gram is basis * G * basis^T.
class Sublattice {
public:
    Sublattice(Lattice ambient, IntMatrix basis);

    const Lattice& ambient() const { return ambient_; }
    const IntMatrix& basis() const { return basis_; }
    std::size_t rank() const { return basis_.rows(); }
    IntMatrix induced_gram() const;
    Lattice as_lattice(std::string name = {}) const { return Lattice(induced_gram(), std::move(name)); }

    // ambient coordinates of a vector given in sublattice coordinates
    std::vector<Int> to_ambient(const std::vector<Int>& v) const;
    // sublattice coordinates of an ambient vector, if it lies in the Q-span
    // (integral result iff it lies in the sublattice itself)
    std::optional<std::vector<Rat>> from_ambient(const std::vector<Rat>& v) const;

private:
    Lattice ambient_;
    IntMatrix basis_;
};

// Gram-preserving integer matrix of determinant +-1, acting on columns.
class Isometry {
public:
    Isometry(IntMatrix matrix, Lattice lattice);

    const IntMatrix& matrix() const { return matrix_; }
    const Lattice& lattice() const { return lattice_; }
    std::vector<Int> apply(const std::vector<Int>& v) const { return matrix_.apply(v); }
    Isometry compose(const Isometry& inner) const;  // this after inner
    int order(int bound = 64) const;                // smallest k <= bound with M^k = id, or 0

private:
    IntMatrix matrix_;
    Lattice lattice_;
};

// D_S = S*/S as invariant factors d1 | d2 | ... (each > 1) with lifted
// generators in S (x) Q, the finite quadratic form on the generators
// (mod 2Z for even lattices, mod Z otherwise), and the bilinear values mod Z.
struct DiscriminantGroup {
    std::vector<Int> invariant_factors;
    std::vector<std::vector<Rat>> generator_lifts;
    std::vector<Rat> q_values;                 // q(g_i), reduced representative
    std::vector<std::vector<Rat>> b_values;    // b(g_i, g_j) mod Z
    Int q_modulus;                             // 2 for even lattices, 1 otherwise
    Int order() const;
    std::size_t length() const { return invariant_factors.size(); }
};

DiscriminantGroup discriminant_group(const Lattice& l);

std::pair<std::size_t, std::size_t> signature(const Lattice& l);  // (n_plus, n_minus)
// Signature of a rational symmetric matrix; third component counts the radical.
std::tuple<std::size_t, std::size_t, std::size_t> signature_of(const QMatrix& g);

Sublattice orthogonal_complement(const Sublattice& sub);

struct SaturationResult {
    Sublattice saturation;
    Int index;  // [saturation : sub]
};
SaturationResult saturate(const Sublattice& sub);
bool is_primitive(const Sublattice& sub);

struct NikulinReport {
    std::size_t rank = 0, length = 0;
    bool even = false, indefinite = false;
    bool holds = false;  // even, indefinite and rank >= length + 2
};
NikulinReport nikulin_hypothesis(const Lattice& l);

Isometry reflection(const Lattice& l, const std::vector<Int>& v);

Int divisibility(const Lattice& l, const std::vector<Int>& v);

struct GlueResult {
    bool extends = false;
    std::optional<Isometry> extension;
    Int glue_order{1};  // |M / (S + T)|
    // generators of the glue group as (fractional S-part, fractional T-part)
    std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> glue_generators;
};
GlueResult glue_extends(const Lattice& m, const Sublattice& s, const Sublattice& t,
                        const Isometry& phi_s, const Isometry& phi_t);

enum class SearchStatus { Found, NoByInvariants, Exhausted };

struct IsometrySearchResult {
    SearchStatus status = SearchStatus::Exhausted;
    std::optional<IntMatrix> witness;  // B with B^T G1 B = G2
    bool conclusive() const { return status != SearchStatus::Exhausted; }
};
// Backtracking search for an isometry L2 -> L1 with entries bounded by
// `bound`. Determinant/signature/parity/discriminant mismatches give a
// conclusive negative; exhaustion without a witness is inconclusive.
IsometrySearchResult isometry_search(const Lattice& l1, const Lattice& l2, long bound);

Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice rescale(const Lattice& l, const Int& n);

// Standard lattices used throughout.
namespace lattices {
Lattice hyperbolic_U();
Lattice U3();
Lattice A2();
Lattice A2_neg();
Lattice E8();
Lattice E8_neg();
Lattice span_m(const Int& m);  // <m>
Lattice big_S();               // U^2 + E8^2 + A2, signature (20,2)
Lattice S_neg();               // U^2 + E8(-1)^2 + A2(-1)
}  // namespace lattices

}  // namespace cycubic
