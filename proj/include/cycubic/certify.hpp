#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "cycubic/quadform.hpp"
#include "cycubic/wedge.hpp"

namespace cycubic {

struct DatasetCorrupt : std::runtime_error {
    explicit DatasetCorrupt(const std::string& w) : std::runtime_error(w) {}
};
struct EnumerationTooLarge : std::domain_error {
    EnumerationTooLarge() : std::domain_error("enumeration only supported for p in {2,3}") {}
};
struct DegeneratePair : std::domain_error {
    explicit DegeneratePair(const std::string& w) : std::domain_error(w) {}
};
// The two image points exist over a quadratic extension but not over F_p.
struct NonSplitPair : std::domain_error {
    NonSplitPair() : std::domain_error("image pair is conjugate over F_p^2") {}
};

// Cyclic Pfaffian flag: a rank-6 two-form phi0 with Pf(phi0) = 1 and a
// 5-dimensional totally isotropic Z inside ker h. Coordinates on P(W):
// x0..x4 along Z and x5 along phi0 (the covering direction).
struct PfaffianFlag {
    Wedge<Rat> phi0;
    std::vector<Wedge<Rat>> z;  // 5 two-forms
    QPoly F;                    // Pf(x5 phi0 + sum xk z_k), 6 variables
    QPoly f;                    // restriction to x5 = 0, 5 variables
};

// W basis in the fixed order [z0..z4, phi0].
std::vector<Wedge<Rat>> w_basis(const PfaffianFlag& flag);

// Build the flag (and its Pfaffian cubics) from the raw forms.
PfaffianFlag flag_from_forms(Wedge<Rat> phi0, std::vector<Wedge<Rat>> z);

// Shipped dataset: 15 linear forms filling the upper triangle row by row
// plus the placements of the covering coordinate.
std::string appendix_dataset_text();
PfaffianFlag parse_appendix(const std::string& text);
PfaffianFlag load_appendix();                             // embedded copy
PfaffianFlag load_appendix_file(const std::string& path);
QPoly appendix_reference_cubic();  // the 5-variable cubic, for exact comparison

struct Certificate {
    std::string kind;    // cyclic_form | isotropy | witt_bounds | smoothness |
                         // triple_lines | k3_lines | pfaffian_equation
    std::string method;  // exact_rational | nullstellensatz_rank | enumeration |
                         // groebner_charts
    std::vector<std::uint64_t> primes;
    bool verdict = false;
    std::string soundness_note;
    std::vector<std::pair<std::string, std::string>> payload;
};

// F is cyclic iff F - x5^3 involves no x5; extracts the branch cubic.
Certificate verify_cyclic_form(const QPoly& F, QPoly* branch_out = nullptr);

// h and the polar of q vanish on Z, and q vanishes on the basis of Z.
Certificate verify_isotropy(const PfaffianFlag& flag);

// Gram matrix of the quadratic form q(phi) = 1/2 phi0 ^ phi ^ phi on the
// 15 coordinates of 2-forms, and its restriction to the hyperplane ker h.
QMatrix q_gram(const Wedge<Rat>& phi0);
QMatrix qh_gram(const Wedge<Rat>& phi0, IntMatrix* h_basis_out = nullptr);

// Witt-index evidence for q (bounds meet at 7) and q_H (at 6).
Certificate witt_certificate(const PfaffianFlag& flag);

enum class SmoothMethod { NullstellensatzRank, Enumeration };
Certificate certify_smooth(const QPoly& F, std::uint64_t p, SmoothMethod method);

enum class ChartMode { GroebnerCharts, Enumeration };

// Triple lines on the branch cubic threefold: 10 Grassmannian charts times
// 3 alpha charts; refuses singular input.
Certificate triple_lines(const QPoly& f, std::uint64_t p, ChartMode mode);

// Dual side: annihilators of W and Z, with the Grassmannian quadrics
// restricted to P(W°).
struct DualData {
    IntMatrix w_ann;                 // 9 x 15
    IntMatrix z_ann;                 // 10 x 15
    IntMatrix w_forms;               // 6 x 15, integral scaled basis of W
    std::vector<QPoly> sigma_quadrics;  // 15 quadrics in the 9 coordinates of W°
};
DualData dual_data(const PfaffianFlag& flag);
// Dual data assembled from an arbitrary 6-dimensional space of 2-forms
// (used for negative controls with non-generic W).
DualData dual_from_w_basis(const std::vector<Wedge<Rat>>& w);

// Lines on the dual K3: 60 flag charts over F_p.
Certificate k3_lines(const DualData& dual, std::uint64_t p, ChartMode mode);

// --- order-three action on pairs of dual K3 points over F_p, p = 1 mod 3 ---

// A point of the dual surface, stored as the reduced row-echelon basis of a
// 2-plane in F_p^6.
using PlaneBasis = std::array<std::array<std::uint64_t, 6>, 2>;

struct SigmaPairResult {
    bool fixed = false;  // the connecting pencil lies in P(Z)
    PlaneBasis P, Q;
};

SigmaPairResult sigma_on_pairs(const PfaffianFlag& flag, const PlaneBasis& P,
                               const PlaneBasis& Q, std::uint64_t p);

// Deterministic sample of points on the dual surface over F_p.
std::vector<PlaneBasis> sigma_sample_points(const PfaffianFlag& flag, std::uint64_t p,
                                            std::size_t count);

// Chart coverage helpers (exposed for the point-count cross-checks).
std::size_t count_distinct_chart_lines(std::uint64_t p);  // points of G(1,P^4)(F_p)
std::size_t count_distinct_chart_flags(std::uint64_t p);  // points of Flag(1,3;6)(F_p)

// Seeded search for a new totally isotropic flag (candidate for the full
// certificate chain).
std::optional<PfaffianFlag> search_cyclic_flag(std::uint64_t seed);

}  // namespace cycubic
