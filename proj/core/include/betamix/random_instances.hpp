#pragma once

#include <Eigen/Dense>

#include "betamix/process.hpp"
#include "betamix/rng.hpp"
#include "betamix/transforms.hpp"

namespace betamix {

// Deterministic random instances for the property suites. Everything draws
// from the caller's SplitMix64 stream, so a fixed seed reproduces the exact
// same instances.

/// Sites with uniform coordinates in [0, 10]^dim; unit weights when
/// `unit_weights`, otherwise weights uniform in [0.2, 2].
GroundSpace random_space(SplitMix64& rng, int n_sites, int dim = 2,
                         bool unit_weights = true);

/// Random symmetric PSD matrix with spectrum uniform in [eig_lo, eig_hi]:
/// a Haar-ish orthogonal conjugation of a random diagonal.
Eigen::MatrixXd random_psd(SplitMix64& rng, int n, double eig_lo, double eig_hi);

/// PSD matrix with the given eigenvalues (padded with zeros), for
/// rank-controlled kernels.
Eigen::MatrixXd random_psd_with_spectrum(SplitMix64& rng, int n,
                                         std::span<const double> eigenvalues);

/// Entrywise non-negative PSD matrix (a Gram matrix of non-negative
/// vectors) rescaled so the top eigenvalue equals `max_eig`.
Eigen::MatrixXd random_nonneg_psd(SplitMix64& rng, int n, double max_eig);

/// DPP on a random space whose *weighted* kernel has spectrum in
/// [eig_lo, eig_hi].
DiscreteDPP random_dpp(SplitMix64& rng, int n_sites, double eig_lo, double eig_hi,
                       bool unit_weights = true);

/// Explicit-law process with probabilities proportional to iid
/// exponentials.
FiniteProcess random_process(SplitMix64& rng, int n_sites, bool unit_weights = true);

/// Table with iid uniform values in [-amplitude, amplitude].
SetFunction random_set_function(SplitMix64& rng, Region region, double amplitude = 1.0);
BiSetFunction random_bi_set_function(SplitMix64& rng, Region a, Region b,
                                     double amplitude = 1.0);

/// Table of iid uniform integers in [-amplitude, amplitude].
SetFunction random_integer_set_function(SplitMix64& rng, Region region,
                                        int amplitude = 1000);

/// Uniform subset of `within` with at most `max_size` members.
SiteSet random_subset(SplitMix64& rng, SiteSet within, int max_size);

}  // namespace betamix
