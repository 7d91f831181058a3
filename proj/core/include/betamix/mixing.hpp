#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betamix/process.hpp"

#include "json.hpp"

namespace betamix {

/// Everything computed for one pair of observation windows (A, B):
/// the exact mixing coefficients together with every bound that applies.
///
///   p, q          measures of A and B
///   r             distance between A and B (+inf when one is empty)
///   beta_exact    total variation between joint and product restriction laws
///   alpha_exact   strong-mixing coefficient (present when the event
///                 enumeration caps allow it)
///   bound_theorem1      intensity-based bound evaluated at (A, B)
///   bound_dpp_general   closed-form DPP bound (kernel known)
///   bound_dpp_rank      finite-rank DPP bound (kernel known)
///   lower_bound_dpp     lower bound (kernel known, hypotheses satisfied)
struct MixingReport {
    std::vector<int> a_members;
    std::vector<int> b_members;
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    double beta_exact = 0.0;
    std::optional<double> alpha_exact;
    double bound_theorem1 = 0.0;
    std::optional<double> bound_dpp_general;
    std::optional<double> bound_dpp_rank;
    std::optional<double> lower_bound_dpp;

    nlohmann::json to_json() const;
    /// Column order: A,B,p,q,r,beta_exact,alpha_exact,bound_theorem1,
    /// bound_dpp_general,bound_dpp_rank,lower_bound_dpp. Index lists are
    /// semicolon-joined; absent optionals serialize as empty cells.
    static std::string csv_header();
    std::string to_csv_row() const;
};

/// Exact beta-mixing coefficient between the sigma-algebras generated by
/// X ∩ A and X ∩ B (disjoint regions): half the L1 distance between the
/// joint restriction law and the product of the marginal restriction laws.
/// The supremum over finite partitions is attained on the atoms
/// {X∩A = a} x {X∩B = b}, so the atom sum is exact.
double beta_exact(const FiniteProcess& process, Region a, Region b);

/// The variational form: (1/2) |E[f(X∩A, X∩B)] - E[f(X∩A, X'∩B)]| for a
/// test function with sup norm at most 1 and an independent copy X'.
/// Bounded by beta_exact for every admissible f, with equality at
/// f = sign(joint - product).
double beta_sup_form_check(const FiniteProcess& process, Region a, Region b,
                           const BiSetFunction& f);

/// Exact alpha-mixing coefficient: max over unions of atoms on both sides
/// of |P(S ∩ T) - P(S) P(T)|. Doubly exponential, so each side is capped
/// at 8 atoms (2^|A| <= 8); beyond that an error is raised.
double alpha_exact(const FiniteProcess& process, Region a, Region b);

/// The per-pair intensity bound:
///   sum_{a ⊆ A} sum_{b ⊆ B} 2^{|a|+|b|} |wrho(a) wrho(b) - wrho(a ∪ b)|
/// where wrho is the weighted intensity (the tuple series collapses
/// exactly: repeated-index tuples vanish and orderings cancel the
/// factorials). beta_exact never exceeds it.
double theorem1_bound(const CorrelationOracle& oracle, Region a, Region b);

/// Closed-form upper bound for DPPs evaluated at one pair of regions.
///   value        4 (1+2p|K|)(1+2q|K|) e^{2(p+q)|K|} * l2_cross
///   display_form same prefactor with l2_cross replaced by p q omega^2
/// where |K| is the max absolute entry of the weighted kernel over the
/// sites in play (A ∪ B), omega the max absolute cross-block entry and
/// l2_cross the squared Frobenius mass of the A x B block.
struct DppGeneralBound {
    double value = 0.0;
    double display_form = 0.0;
    double l2_cross = 0.0;
    double omega = 0.0;
    double k_inf = 0.0;
};
DppGeneralBound dpp_bound_general(const DiscreteDPP& dpp, Region a, Region b);

/// Finite-rank bound 4 p q N^2 9^N omega^2 with N the numerical rank of
/// the weighted kernel (eigenvalues above 1e-9).
double dpp_bound_rank(const DiscreteDPP& dpp, Region a, Region b);

/// Lower bound 2 (1-M)^{(p+q)|K|/M} * l2_cross for kernels with
/// non-negative entries and spectrum in [0, M], M < 1. Throws when the
/// hypotheses fail.
double dpp_lower_bound(const DiscreteDPP& dpp, Region a, Region b);

/// The determinant-gap quantities behind the DPP bounds, exposed as a
/// testable triple for ordered index tuples x, y (distinct entries,
/// disjoint):
///   gap    |det(K[x]) det(K[y]) - det(K[x,y])|
///   bound1 n m |K|^{n+m-2} sum_{i,j} K(x_i, y_j)^2
///   bound2 (sum_{i<n} minor_i(K[x])) (sum_{j<m} minor_j(K[y])) sum K(x_i,y_j)^2
/// where minor_i is the leading i x i principal minor and minor_0 = 1.
/// For PSD kernels with spectrum in [0,1], gap <= bound1 and gap <= bound2,
/// both with equality at n = m = 1.
struct DeterminantGap {
    double gap = 0.0;
    double bound1 = 0.0;
    double bound2 = 0.0;
};
DeterminantGap determinant_gap(const Eigen::MatrixXd& kernel,
                               std::span<const int> x, std::span<const int> y);

struct SweepOptions {
    /// Limit on the number of enumerated (A, B) candidates; the candidate
    /// space of a ground space with S sites has 3^S ordered disjoint pairs.
    std::uint64_t pair_cap = 1'000'000;
};

/// Enumerate every ordered pair of disjoint regions with measure(A) <= p,
/// measure(B) <= q, dist(A, B) > r, and report the pair maximizing
/// beta_exact, with all applicable bounds evaluated at that pair. Exact
/// for the discrete space (a lower bound of the continuous-space sup).
/// Ties are broken toward the lexicographically smallest (A, B). The
/// empty pair always qualifies, so the sweep is total.
MixingReport beta_pq_r_sweep(const FiniteProcess& process, double p, double q,
                             double r, const SweepOptions& options = {});
/// Same sweep for a DPP; the kernel bounds are filled in as well.
MixingReport beta_pq_r_sweep(const DiscreteDPP& dpp, double p, double q,
                             double r, const SweepOptions& options = {});

/// Full report at one fixed pair of disjoint regions.
MixingReport mixing_report(const FiniteProcess& process, Region a, Region b);
MixingReport mixing_report(const DiscreteDPP& dpp, Region a, Region b);

}  // namespace betamix
