#include "betamix/random_instances.hpp"

#include <algorithm>
#include <cmath>

namespace betamix {

GroundSpace random_space(SplitMix64& rng, int n_sites, int dim, bool unit_weights) {
    std::vector<Site> sites(static_cast<std::size_t>(n_sites));
    for (Site& s : sites) {
        s.coord.resize(static_cast<std::size_t>(dim));
        for (double& c : s.coord) c = rng.uniform(0.0, 10.0);
        s.weight = unit_weights ? 1.0 : rng.uniform(0.2, 2.0);
    }
    return GroundSpace(dim, std::move(sites));
}

namespace {

Eigen::MatrixXd random_orthogonal(SplitMix64& rng, int n) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

Eigen::MatrixXd conjugate_diagonal(SplitMix64& rng, int n, const Eigen::VectorXd& eigs) {
    const Eigen::MatrixXd q = random_orthogonal(rng, n);
    Eigen::MatrixXd k = q * eigs.asDiagonal() * q.transpose();
    return ((k + k.transpose()) / 2.0).eval();
}

}  // namespace

Eigen::MatrixXd random_psd(SplitMix64& rng, int n, double eig_lo, double eig_hi) {
    Eigen::VectorXd eigs(n);
    for (int i = 0; i < n; ++i) eigs(i) = rng.uniform(eig_lo, eig_hi);
    return conjugate_diagonal(rng, n, eigs);
}

Eigen::MatrixXd random_psd_with_spectrum(SplitMix64& rng, int n,
                                         std::span<const double> eigenvalues) {
    Eigen::VectorXd eigs = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < eigenvalues.size() && i < static_cast<std::size_t>(n); ++i)
        eigs(static_cast<Eigen::Index>(i)) = eigenvalues[i];
    return conjugate_diagonal(rng, n, eigs);
}

Eigen::MatrixXd random_nonneg_psd(SplitMix64& rng, int n, double max_eig) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.uniform();
    Eigen::MatrixXd k = g * g.transpose();
    k = ((k + k.transpose()) / 2.0).eval();
    const double top =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .maxCoeff();
    if (top > 0.0) k *= max_eig / top;
    return k;
}

DiscreteDPP random_dpp(SplitMix64& rng, int n_sites, double eig_lo, double eig_hi,
                       bool unit_weights) {
    GroundSpace space = random_space(rng, n_sites, 2, unit_weights);
    const Eigen::MatrixXd weighted = random_psd(rng, n_sites, eig_lo, eig_hi);
    // The generator controls the spectrum of the weighted kernel; undo the
    // weighting to obtain the raw kernel the DPP constructor expects.
    Eigen::MatrixXd kernel = weighted;
    for (int i = 0; i < n_sites; ++i)
        for (int j = 0; j < n_sites; ++j)
            kernel(i, j) /= std::sqrt(space.weight(i) * space.weight(j));
    return DiscreteDPP(std::move(space), std::move(kernel));
}

FiniteProcess random_process(SplitMix64& rng, int n_sites, bool unit_weights) {
    GroundSpace space = random_space(rng, n_sites, 2, unit_weights);
    std::vector<double> law(std::size_t{1} << n_sites);
    double total = 0.0;
    for (double& p : law) {
        p = -std::log(1.0 - rng.uniform());
        total += p;
    }
    for (double& p : law) p /= total;
    return FiniteProcess(std::move(space), std::move(law));
}

SetFunction random_set_function(SplitMix64& rng, Region region, double amplitude) {
    std::vector<double> values(std::size_t{1} << region.size());
    for (double& v : values) v = rng.uniform(-amplitude, amplitude);
    return SetFunction(region, std::move(values));
}

BiSetFunction random_bi_set_function(SplitMix64& rng, Region a, Region b,
                                     double amplitude) {
    std::vector<double> values(std::size_t{1} << (a.size() + b.size()));
    for (double& v : values) v = rng.uniform(-amplitude, amplitude);
    return BiSetFunction(a, b, std::move(values));
}

SetFunction random_integer_set_function(SplitMix64& rng, Region region, int amplitude) {
    std::vector<double> values(std::size_t{1} << region.size());
    for (double& v : values)
        v = static_cast<double>(
            static_cast<long long>(rng.below(2 * static_cast<std::uint64_t>(amplitude) + 1)) -
            amplitude);
    return SetFunction(region, std::move(values));
}

SiteSet random_subset(SplitMix64& rng, SiteSet within, int max_size) {
    const std::vector<int> pool = within.members();
    const int take = static_cast<int>(
        rng.below(static_cast<std::uint64_t>(
                      std::min(max_size, static_cast<int>(pool.size()))) +
                  1));
    // Partial Fisher-Yates over a copy of the pool.
    std::vector<int> items = pool;
    SiteSet out;
    for (int i = 0; i < take; ++i) {
        const std::size_t j =
            static_cast<std::size_t>(i) +
            static_cast<std::size_t>(rng.below(items.size() - static_cast<std::size_t>(i)));
        std::swap(items[static_cast<std::size_t>(i)], items[j]);
        out = out.with(items[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace betamix
