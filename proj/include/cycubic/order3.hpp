#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cycubic/eisenstein.hpp"
#include "cycubic/lattice.hpp"

namespace cycubic {

struct ConstructionFailed : std::logic_error {
    explicit ConstructionFailed(const std::string& w) : std::logic_error(w) {}
};
struct NotARoot : std::domain_error {
    NotARoot() : std::domain_error("vector is not a root (self-pairing must be -2)") {}
};
struct InconsistentClassification : std::logic_error {
    explicit InconsistentClassification(const std::string& w) : std::logic_error(w) {}
};

// Lattice with a fixed-point-free isometry rho of order three; this makes it
// a module over the Eisenstein integers via xi * x := rho(x).
class Order3Lattice {
public:
    Order3Lattice(Lattice lattice, Isometry rho);

    const Lattice& lattice() const { return lattice_; }
    const Isometry& rho() const { return rho_; }

private:
    Lattice lattice_;
    Isometry rho_;
};

// H(x,y) = theta * (<x, xi y> - xi <x, y>) with xi y = rho(y).
EisensteinInt hermitian_form(const Order3Lattice& ol, const std::vector<Int>& x,
                             const std::vector<Int>& y);

enum class RootKind { Nodal, Chordal };

struct RootClass {
    std::vector<Int> delta;  // coordinates in the rank-22 block lattice
    RootKind kind;
    // chordal: integral lift of (1/3)(-theta + 4 delta + 2 rho delta) in L coords;
    // nodal: Eisenstein generator of the (non-full) Hermitian pairing ideal.
    std::optional<std::vector<Int>> chordal_class;
    std::optional<EisensteinInt> ideal_generator;
};

// Explicit model of the rank-23 lattice L as the index-3 overlattice of
// <6> + (U^2 + E8(-1)^2 + A2(-1)) glued along the A2(-1) block, together
// with the order-three isometry rho fixing the square-6 class.
struct PaperModel {
    Lattice L;                 // rank 23, even, signature (3,20), |det| = 2
    std::vector<Int> theta;    // square-6 class, L coordinates
    Sublattice Sminus;         // rank-22 orthogonal complement of theta in L
    Isometry rho;              // order 3 on L, fixes theta
    Order3Lattice block;       // the rank-22 block lattice with rho0
    std::vector<Rat> glue_vector;  // in <6> + block coordinates, (theta + 2 d1 + d2)/3

    // embed block (S(-1)) coordinates into L coordinates
    std::vector<Int> block_to_L(const std::vector<Int>& v) const;
};

PaperModel build_paper_model();

RootClass classify_root(const PaperModel& model, const std::vector<Int>& delta);

// R_delta = span(delta, rho delta) inside the block lattice; isometric to A2(-1).
Sublattice degeneracy_lattice(const PaperModel& model, const std::vector<Int>& delta);

struct DegenerationCheck {
    std::string name;
    std::string expected;
    std::string got;
    bool pass = false;
};

struct DegenerationReport {
    RootClass root;
    Sublattice R_delta;   // in block-lattice coordinates
    Sublattice T_delta;   // saturation of <theta> + R_delta, in L
    Sublattice S_delta;   // orthogonal complement of T_delta in L
    Int saturation_index{0};
    Isometry rho_delta;   // r_{rho delta} . r_delta . rho
    std::vector<Int> e_class;            // L coordinates, square -2
    std::optional<IntMatrix> t_witness;  // isometry witness for T_delta
    std::vector<DegenerationCheck> checks;
    bool all_pass() const;
};

DegenerationReport degenerate(const PaperModel& model, const std::vector<Int>& delta);

// Complement of the e-class in L with the restriction of rho_delta; the fixed
// sublattice of the restriction is U(3) (nodal) or U (chordal).
struct EClassRestriction {
    Lattice complement;        // rank 22, K3-lattice invariants
    Isometry restriction;      // order 3
    Lattice fixed_part;        // rank 2
    std::optional<IntMatrix> fixed_witness;  // isometry to U(3) resp. U
};
EClassRestriction restrict_to_eclass_complement(const PaperModel& model,
                                                const DegenerationReport& report);

// Deterministic sample of >= count roots drawn from all blocks of the model.
std::vector<std::vector<Int>> sample_roots(const PaperModel& model, std::size_t count,
                                           std::uint64_t seed = 12001u);

}  // namespace cycubic
