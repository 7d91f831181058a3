#include "betamix/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "betamix/mixing.hpp"
#include "betamix/random_instances.hpp"

namespace betamix {

namespace {

/// Collects the worst margin seen across trials.
struct MarginTracker {
    double worst = -std::numeric_limits<double>::infinity();
    void observe(double margin) { worst = std::max(worst, margin); }
    double value() const { return std::isfinite(worst) ? worst : 0.0; }
};

}  // namespace

const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {
        "transforms", "expectation", "theorem1",
        "determinant", "dpp-bounds", "lower-bound",
    };
    return names;
}

SuiteReport run_suite(const std::string& name, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (name == "transforms") return run_transforms_suite(trials, seed);
    if (name == "expectation") return run_expectation_suite(trials, seed);
    if (name == "theorem1") return run_theorem1_suite(trials, seed);
    if (name == "determinant") return run_determinant_suite(trials, seed);
    if (name == "dpp-bounds") return run_dpp_bounds_suite(trials, seed);
    if (name == "lower-bound") return run_lower_bound_suite(trials, seed);
    throw std::invalid_argument("unknown verify suite '" + name + "'");
}

SuiteReport run_transforms_suite(int trials, std::uint64_t seed) {
    SuiteReport report;
    report.suite = "transforms";
    report.trials = trials;
    report.tolerance = 1e-10;
    SplitMix64 rng(seed);
    MarginTracker tracker;
    for (int t = 0; t < trials; ++t) {
        const int m = 1 + static_cast<int>(rng.below(6));
        const Region region = SiteSet::full(m);
        const SetFunction f = random_set_function(rng, region);
        double margin = 0.0;

        // Inversion both ways.
        const SetFunction diff = lower_difference(f);
        const SetFunction back = lower_sum(diff);
        const SetFunction there = lower_difference(lower_sum(f));
        for (std::uint32_t x = 0; x < f.table_size(); ++x) {
            margin = std::max(margin, std::abs(back.local(x) - f.local(x)));
            margin = std::max(margin, std::abs(there.local(x) - f.local(x)));
        }

        // Growth: |f~(X)| <= ||f||_inf 2^|X|.
        const double sup = f.sup_norm();
        for (std::uint32_t x = 0; x < f.table_size(); ++x) {
            const int card = std::popcount(x);
            margin = std::max(margin,
                              std::abs(diff.local(x)) - sup * std::ldexp(1.0, card));
        }

        // Restriction: the lower difference of f_A vanishes off subsets of
        // A and matches the lower difference of f|_A inside.
        const Region a = random_subset(rng, region, m);
        const SetFunction ga = lower_difference(restrict_to(f, a));
        const SetFunction fa =
            SetFunction::build(a, [&](Config z) { return f(z); });
        const SetFunction fa_diff = lower_difference(fa);
        for (std::uint32_t x = 0; x < f.table_size(); ++x) {
            const Config gx = ga.to_global(x);
            const double expected = gx.subset_of(a) ? fa_diff(gx) : 0.0;
            margin = std::max(margin, std::abs(ga.local(x) - expected));
        }

        // Gluing: for disjoint A, B and g(X) = h(X∩A, X∩B), the lower
        // difference of g is the bivariate lower difference of h inside
        // A ∪ B and zero outside.
        const Region b = random_subset(rng, region.minus(a), m);
        const BiSetFunction h = random_bi_set_function(rng, a, b);
        const SetFunction g =
            SetFunction::build(region, [&](Config x) {
                return h(x.intersect(a), x.intersect(b));
            });
        const SetFunction g_diff = lower_difference(g);
        const BiSetFunction h_diff = lower_difference_bi(h);
        for (std::uint32_t x = 0; x < g.table_size(); ++x) {
            const Config gx = g_diff.to_global(x);
            const double expected = gx.subset_of(a.unite(b))
                                        ? h_diff(gx.intersect(a), gx.intersect(b))
                                        : 0.0;
            margin = std::max(margin, std::abs(g_diff.local(x) - expected));
        }

        // Lattice pass vs direct loop: exact agreement on integer tables
        // (every partial sum stays integral below 2^53).
        const SetFunction fi = random_integer_set_function(rng, region);
        const SetFunction zeta_fast = lower_sum_fast(fi);
        const SetFunction zeta_direct = lower_sum(fi);
        const SetFunction mob_fast = lower_difference_fast(fi);
        const SetFunction mob_direct = lower_difference(fi);
        for (std::uint32_t x = 0; x < fi.table_size(); ++x) {
            if (zeta_fast.local(x) != zeta_direct.local(x) ||
                mob_fast.local(x) != mob_direct.local(x))
                margin = std::max(margin, 1.0);
        }

        tracker.observe(margin);
        if (margin > report.tolerance) ++report.failures;
    }
    report.worst_margin = tracker.value();
    return report;
}

SuiteReport run_expectation_suite(int trials, std::uint64_t seed) {
    SuiteReport report;
    report.suite = "expectation";
    report.trials = trials;
    report.tolerance = 1e-8;
    SplitMix64 rng(seed);
    MarginTracker tracker;
    for (int t = 0; t < trials; ++t) {
        const bool use_dpp = (t % 2) == 0;
        const int s = 3 + static_cast<int>(rng.below(5));  // 3..7 sites
        const FiniteProcess process =
            use_dpp ? dpp_to_process(random_dpp(rng, s, 0.0, 0.95, (t % 4) < 2))
                    : random_process(rng, s, (t % 4) < 2);
        const CorrelationOracle oracle = correlations_of(process);
        const Region full = SiteSet::full(s);
        const SetFunction f = random_set_function(rng, full);
        double margin = std::abs(expectation_series(oracle, f, full) -
                                 expectation_direct(process, f));

        // Bivariate: E[h(X∩A, X'∩B)] against the product-law double loop.
        const Region a = random_subset(rng, full, 3);
        const Region b = random_subset(rng, full.minus(a), 3);
        const BiSetFunction h = random_bi_set_function(rng, a, b);
        const double series = expectation_series_bi(oracle, oracle, h, a, b);
        double direct = 0.0;
        const std::size_t n = std::size_t{1} << s;
        for (std::uint32_t c1 = 0; c1 < n; ++c1) {
            const double p1 = process.law()[c1];
            if (p1 == 0.0) continue;
            const Config z1 = Config::from_mask(c1).intersect(a);
            for (std::uint32_t c2 = 0; c2 < n; ++c2)
                direct += p1 * process.law()[c2] *
                          h(z1, Config::from_mask(c2).intersect(b));
        }
        margin = std::max(margin, std::abs(series - direct));

        tracker.observe(margin);
        if (margin > report.tolerance) ++report.failures;
    }
    report.worst_margin = tracker.value();
    return report;
}

SuiteReport run_theorem1_suite(int trials, std::uint64_t seed) {
    SuiteReport report;
    report.suite = "theorem1";
    report.trials = trials;
    report.tolerance = 1e-10;
    SplitMix64 rng(seed);
    MarginTracker tracker;
    for (int t = 0; t < trials; ++t) {
        const bool use_dpp = (t % 2) == 0;
        const int s = 4 + static_cast<int>(rng.below(5));  // 4..8 sites
        const FiniteProcess process =
            use_dpp ? dpp_to_process(random_dpp(rng, s, 0.0, 1.0, (t % 4) < 2))
                    : random_process(rng, s, (t % 4) < 2);
        const Region full = SiteSet::full(s);
        const Region a = random_subset(rng, full, 3);
        const Region b = random_subset(rng, full.minus(a), 3);
        const double beta = beta_exact(process, a, b);
        const double bound = theorem1_bound(correlations_of(process), a, b);
        const double margin = beta - bound;
        tracker.observe(margin);
        if (margin > report.tolerance) ++report.failures;
    }
    report.worst_margin = tracker.value();
    return report;
}

SuiteReport run_determinant_suite(int trials, std::uint64_t seed) {
    SuiteReport report;
    report.suite = "determinant";
    report.trials = trials;
    report.tolerance = 1e-10;
    SplitMix64 rng(seed);
    MarginTracker tracker;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(rng.below(7));  // 2..8
        const Eigen::MatrixXd kernel = random_psd(rng, n, 0.0, 1.0);

        // Random disjoint tuples with 1..4 entries each (as the sizes allow).
        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        const int nx = 1 + static_cast<int>(rng.below(
            static_cast<std::uint64_t>(std::min(4, n - 1))));
        const int ny = 1 + static_cast<int>(rng.below(
            static_cast<std::uint64_t>(std::min(4, n - nx))));
        const std::span<const int> x(perm.data(), static_cast<std::size_t>(nx));
        const std::span<const int> y(perm.data() + nx, static_cast<std::size_t>(ny));

        const DeterminantGap dg = determinant_gap(kernel, x, y);
        const double margin = dg.gap - std::min(dg.bound1, dg.bound2);
        tracker.observe(margin);
        if (margin > report.tolerance) ++report.failures;
    }
    report.worst_margin = tracker.value();
    return report;
}

SuiteReport run_dpp_bounds_suite(int trials, std::uint64_t seed) {
    SuiteReport report;
    report.suite = "dpp-bounds";
    report.trials = trials;
    report.tolerance = 1e-10;
    SplitMix64 rng(seed);
    MarginTracker tracker;
    for (int t = 0; t < trials; ++t) {
        const int s = 4 + static_cast<int>(rng.below(4));  // 4..7 sites
        const bool unit_w = (t % 4) < 2;
        double margin;
        if (t % 2 == 0) {
            // Chain: theorem1 bound below the closed-form bound.
            const DiscreteDPP dpp = random_dpp(rng, s, 0.0, 1.0, unit_w);
            const Region full = SiteSet::full(s);
            const Region a = random_subset(rng, full, 3);
            const Region b = random_subset(rng, full.minus(a), 3);
            const double t1 = theorem1_bound(CorrelationOracle::from_dpp(dpp), a, b);
            margin = t1 - dpp_bound_general(dpp, a, b).value;
        } else {
            // Rank-deficient kernels: exact beta below the rank bound.
            GroundSpace space = random_space(rng, s, 2, unit_w);
            const int rank = 1 + static_cast<int>(rng.below(2));
            std::vector<double> eigs(static_cast<std::size_t>(rank));
            for (double& e : eigs) e = rng.uniform(0.1, 0.95);
            const Eigen::MatrixXd weighted = random_psd_with_spectrum(rng, s, eigs);
            Eigen::MatrixXd kernel = weighted;
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j)
                    kernel(i, j) /= std::sqrt(space.weight(i) * space.weight(j));
            const DiscreteDPP dpp(std::move(space), std::move(kernel));
            const FiniteProcess process = dpp_to_process(dpp);
            const Region full = SiteSet::full(s);
            const Region a = random_subset(rng, full, 3);
            const Region b = random_subset(rng, full.minus(a), 3);
            margin = beta_exact(process, a, b) - dpp_bound_rank(dpp, a, b);
        }
        tracker.observe(margin);
        if (margin > report.tolerance) ++report.failures;
    }
    report.worst_margin = tracker.value();
    return report;
}

SuiteReport run_lower_bound_suite(int trials, std::uint64_t seed) {
    SuiteReport report;
    report.suite = "lower-bound";
    report.trials = trials;
    report.tolerance = 1e-10;
    SplitMix64 rng(seed);
    MarginTracker tracker;
    for (int t = 0; t < trials; ++t) {
        double margin;
        if (t % 2 == 0) {
            // Analytic 2-site family [[0.5, c], [c, 0.5]].
            const double c = rng.uniform(0.02, 0.45);
            GroundSpace space(1, {Site{{0.0}, 1.0}, Site{{1.0}, 1.0}});
            Eigen::MatrixXd kernel(2, 2);
            kernel << 0.5, c, c, 0.5;
            const DiscreteDPP dpp(std::move(space), std::move(kernel));
            const Region a = SiteSet::of({0});
            const Region b = SiteSet::of({1});
            const double lower = dpp_lower_bound(dpp, a, b);
            const double beta = beta_exact(dpp_to_process(dpp), a, b);
            margin = lower - beta;
        } else {
            // Sweep maximizer of a random non-negative kernel with spectrum
            // strictly below 1. Per-set violations at non-maximizer pairs
            // are recorded as notes rather than failures.
            const int s = 4 + static_cast<int>(rng.below(3));  // 4..6 sites
            GroundSpace space = random_space(rng, s, 2, true);
            const Eigen::MatrixXd kernel =
                random_nonneg_psd(rng, s, rng.uniform(0.3, 0.9));
            const DiscreteDPP dpp(std::move(space), std::move(kernel));
            const MixingReport rep = beta_pq_r_sweep(dpp, 2.0, 2.0, 0.0);
            margin = rep.lower_bound_dpp ? *rep.lower_bound_dpp - rep.beta_exact
                                         : 0.0;

            const FiniteProcess process = dpp_to_process(dpp);
            const Region full = SiteSet::full(s);
            const Region pa = random_subset(rng, full, 2);
            const Region pb = random_subset(rng, full.minus(pa), 2);
            const double pl = dpp_lower_bound(dpp, pa, pb);
            const double pbeta = beta_exact(process, pa, pb);
            if (pl > pbeta + report.tolerance)
                report.notes.push_back(
                    "per-set lower bound exceeded beta_exact at a non-maximizer pair "
                    "(trial " + std::to_string(t) + ")");
        }
        tracker.observe(margin);
        if (margin > report.tolerance) ++report.failures;
    }
    report.worst_margin = tracker.value();
    return report;
}

}  // namespace betamix
