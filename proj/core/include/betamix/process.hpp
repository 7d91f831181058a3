#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "betamix/ground.hpp"
#include "betamix/transforms.hpp"

namespace betamix {

/// Structural tolerances used by the process layer. Each layer of
/// computation is allowed roughly one extra order of magnitude:
/// construction 1e-12, spectral checks 1e-9, cross-algorithm agreement
/// 1e-9, series-vs-direct equalities 1e-8.
struct Tolerances {
    static constexpr double structural = 1e-12;
    static constexpr double spectral = 1e-9;
    static constexpr double cross_check = 1e-9;
    static constexpr double series = 1e-8;
    static constexpr double law_negativity = 1e-8;
};

/// A point process given by its explicit law: one probability per subset of
/// the ground space, indexed by global bitmask.
class FiniteProcess {
public:
    FiniteProcess(GroundSpace space, std::vector<double> law);

    const GroundSpace& space() const { return space_; }
    double prob(Config c) const { return law_[c.mask()]; }
    std::span<const double> law() const { return law_; }

private:
    GroundSpace space_;
    std::vector<double> law_;
};

/// A determinantal process on a discrete ground space, given by a real
/// symmetric kernel matrix K. Probabilistic statements use the weighted
/// kernel Kw with Kw_ij = sqrt(w_i w_j) K_ij, so that the inclusion
/// probability of a set of sites is the principal determinant det(Kw[a]);
/// with unit weights Kw = K. Validity requires the spectrum of Kw to lie
/// in [0, 1] up to the spectral tolerance.
class DiscreteDPP {
public:
    DiscreteDPP(GroundSpace space, Eigen::MatrixXd kernel);

    const GroundSpace& space() const { return space_; }
    const Eigen::MatrixXd& kernel() const { return kernel_; }
    const Eigen::MatrixXd& weighted_kernel() const { return weighted_; }
    /// Eigenvalues of the weighted kernel, ascending.
    const Eigen::VectorXd& spectrum() const { return spectrum_; }
    double max_eigenvalue() const { return spectrum_(spectrum_.size() - 1); }

    /// Number of eigenvalues exceeding `tol`.
    int numerical_rank(double tol = Tolerances::spectral) const;

    /// True when every eigenvalue is at most 1 - margin, i.e. the
    /// L-ensemble parameterization L = Kw (I - Kw)^-1 exists.
    bool l_ensemble_available(double margin = Tolerances::spectral) const;

    /// P(a ⊆ X) = det(Kw[a]).
    double inclusion_probability(Config a) const;

private:
    GroundSpace space_;
    Eigen::MatrixXd kernel_;
    Eigen::MatrixXd weighted_;
    Eigen::VectorXd spectrum_;
};

/// Intensity (correlation) data of a process, tabulated on every subset of
/// the ground space. Two views are provided:
///
///   rho(a)          the intensity on distinct sites, density wrt mu
///   weighted_rho(a) rho(a) * prod_{i in a} w_i
///
/// For a process, weighted_rho(a) = P(a ⊆ X); for a DPP, rho(a) = det(K[a])
/// and weighted_rho(a) = det(Kw[a]). weighted_rho is always defined;
/// rho(a) is undefined when a contains a zero-weight site and querying it
/// throws ("intensity undefined on null atoms"). Tuples with repeated
/// sites have intensity 0 by convention, matching the vanishing of
/// determinants with repeated rows.
class CorrelationOracle {
public:
    static CorrelationOracle from_process(const FiniteProcess& process);
    static CorrelationOracle from_dpp(const DiscreteDPP& dpp);

    const GroundSpace& space() const { return space_; }
    double rho(Config a) const;
    double weighted_rho(Config a) const { return weighted_rho_[a.mask()]; }
    /// 0 on tuples with a repeated index, rho of the underlying set otherwise.
    double rho_tuple(std::span<const int> x) const;

private:
    CorrelationOracle(GroundSpace space, std::vector<double> weighted);
    GroundSpace space_;
    std::vector<double> weighted_rho_;  // by global mask
    std::vector<double> rho_;           // NaN where undefined
};

/// Intensity oracle of an explicit-law process: weighted_rho(a) = P(a ⊆ X).
CorrelationOracle correlations_of(const FiniteProcess& process);

/// det(K[a]) for the unweighted kernel; 1 for the empty set.
double dpp_correlation(const DiscreteDPP& dpp, Config a);

double correlation_tuple(const CorrelationOracle& oracle, std::span<const int> x);

enum class DppLawPath {
    mobius,      // inclusion-exclusion over inclusion probabilities
    l_ensemble,  // P(X=a) = det(L[a]) det(I-Kw), L = Kw (I-Kw)^-1
};

/// Explicit law of a DPP. The default path is the inclusion-exclusion
/// (Moebius) inversion of the inclusion probabilities, which works for the
/// whole admissible spectrum including projection kernels; the L-ensemble
/// path requires all eigenvalues at most 1 - 1e-9 and must agree with the
/// Moebius path within 1e-9 whenever it applies.
FiniteProcess dpp_to_process(const DiscreteDPP& dpp,
                             DppLawPath path = DppLawPath::mobius);

/// Law of X ∩ A as a table over subsets of A, computed by aggregating the
/// full law. The inclusion-exclusion route over P(b ⊆ X) is exposed
/// separately as a cross-check; the two agree within 1e-10.
SetFunction restriction_law(const FiniteProcess& process, Region a);
SetFunction restriction_law_incl_excl(const FiniteProcess& process, Region a);

/// Joint law of (X ∩ A, X ∩ B) for disjoint regions, as a bivariate table.
BiSetFunction joint_restriction_law(const FiniteProcess& process, Region a, Region b);

/// E[f(X)] = sum_c P(X=c) f(c). The ground-truth expectation.
double expectation_direct(const FiniteProcess& process, const SetFunction& f);

/// E[f(X)] through the intensity series: the tuple series collapses to the
/// finite subset sum  sum_{z ⊆ region} f~(z) weighted_rho(z)
/// where f~ is the lower difference of f (repeated-index tuples vanish and
/// the n! orderings of each subset cancel the 1/n!).
double expectation_series(const CorrelationOracle& oracle, const SetFunction& f,
                          Region region);

/// E[f(X ∩ A, X' ∩ B)] for independent processes X, X' with the given
/// oracles: double subset sum of the bivariate lower difference against
/// both intensities.
double expectation_series_bi(const CorrelationOracle& oracle_x,
                             const CorrelationOracle& oracle_y,
                             const BiSetFunction& f, Region a, Region b);

/// Determinant of the leading i x i submatrix, 1-based.
double principal_minor(const Eigen::MatrixXd& m, int i);

/// Inverse-CDF sampling from the explicit law. The CDF is accumulated in
/// the canonical subset order (by size, then lexicographic); a draw u maps
/// to the first subset whose cumulative probability exceeds u.
/// Deterministic for a fixed seed.
std::vector<Config> sample(const FiniteProcess& process, std::uint64_t seed,
                           int count);

/// det of the submatrix indexed by the members of `s` (in ascending order).
double subset_determinant(const Eigen::MatrixXd& m, SiteSet s);

}  // namespace betamix
