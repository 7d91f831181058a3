#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "betamix/mixing.hpp"
#include "betamix/random_instances.hpp"
#include "betamix/rng.hpp"

using namespace betamix;

namespace {

GroundSpace unit_sites(int n) {
    std::vector<Site> sites;
    for (int i = 0; i < n; ++i)
        sites.push_back(Site{{static_cast<double>(i)}, 1.0});
    return GroundSpace(1, std::move(sites));
}

DiscreteDPP two_site_dpp(double a, double c) {
    Eigen::MatrixXd kernel(2, 2);
    kernel << a, c, c, a;
    return DiscreteDPP(unit_sites(2), kernel);
}

FiniteProcess bernoulli_product(const std::vector<double>& t) {
    const int n = static_cast<int>(t.size());
    std::vector<double> law(std::size_t{1} << n);
    for (std::uint32_t c = 0; c < law.size(); ++c) {
        double p = 1.0;
        for (int i = 0; i < n; ++i)
            p *= ((c >> i) & 1) ? t[static_cast<std::size_t>(i)]
                                : 1.0 - t[static_cast<std::size_t>(i)];
        law[c] = p;
    }
    return FiniteProcess(unit_sites(n), law);
}

}  // namespace

TEST_CASE("beta on the analytic two-site family") {
    const DiscreteDPP dpp = two_site_dpp(0.5, 0.3);
    const FiniteProcess process = dpp_to_process(dpp);
    const Region a = Region::of({0});
    const Region b = Region::of({1});

    CHECK(beta_exact(process, a, b) == doctest::Approx(0.18).epsilon(1e-13));
    CHECK(alpha_exact(process, a, b) == doctest::Approx(0.09).epsilon(1e-13));
    CHECK(theorem1_bound(CorrelationOracle::from_dpp(dpp), a, b) ==
          doctest::Approx(0.36).epsilon(1e-13));
}

TEST_CASE("independent processes have zero mixing coefficients") {
    const FiniteProcess process = bernoulli_product({0.3, 0.6, 0.8, 0.2});
    const Region a = Region::of({0, 2});
    const Region b = Region::of({1, 3});
    CHECK(beta_exact(process, a, b) == doctest::Approx(0.0).scale(1).epsilon(1e-13));
    CHECK(alpha_exact(process, a, b) == doctest::Approx(0.0).scale(1).epsilon(1e-13));
    // product-form correlations kill every term in the intensity bound
    CHECK(theorem1_bound(correlations_of(process), a, b) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("beta with an empty region vanishes") {
    SplitMix64 rng(41);
    const FiniteProcess process = random_process(rng, 5);
    CHECK(beta_exact(process, Region{}, Region::of({1, 2})) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-14));
    CHECK(theorem1_bound(correlations_of(process), Region{}, Region::of({1})) ==
          doctest::Approx(0.0).scale(1).epsilon(1e-14));
}

TEST_CASE("beta is symmetric in its regions") {
    SplitMix64 rng(42);
    const FiniteProcess process = random_process(rng, 6);
    const Region a = Region::of({0, 4});
    const Region b = Region::of({2, 3});
    CHECK(beta_exact(process, a, b) ==
          doctest::Approx(beta_exact(process, b, a)).epsilon(1e-13));
    const CorrelationOracle oracle = correlations_of(process);
    CHECK(theorem1_bound(oracle, a, b) ==
          doctest::Approx(theorem1_bound(oracle, b, a)).epsilon(1e-13));
    CHECK_THROWS_WITH_AS(beta_exact(process, a, Region::of({0})),
                         "regions must be disjoint", std::invalid_argument);
}

TEST_CASE("the variational form is dominated by beta and tight at the sign maximizer") {
    SplitMix64 rng(43);
    const FiniteProcess process = random_process(rng, 6);
    const Region a = Region::of({0, 1});
    const Region b = Region::of({3, 4});
    const double beta = beta_exact(process, a, b);

    SUBCASE("constants see no dependence") {
        const BiSetFunction one = BiSetFunction::constant(a, b, 1.0);
        CHECK(beta_sup_form_check(process, a, b, one) ==
              doctest::Approx(0.0).scale(1).epsilon(1e-14));
    }

    SUBCASE("sign of (joint - product) attains beta") {
        const BiSetFunction joint = joint_restriction_law(process, a, b);
        const SetFunction ma = restriction_law(process, a);
        const SetFunction mb = restriction_law(process, b);
        BiSetFunction sign = BiSetFunction::constant(a, b, 0.0);
        for (std::uint32_t u = 0; u < 4; ++u)
            for (std::uint32_t v = 0; v < 4; ++v) {
                const double d = joint.local(u, v) - ma.local(u) * mb.local(v);
                sign.local(u, v) = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
            }
        CHECK(beta_sup_form_check(process, a, b, sign) ==
              doctest::Approx(beta).epsilon(1e-12));
    }

    SUBCASE("random admissible test functions stay below beta") {
        for (int t = 0; t < 200; ++t) {
            const BiSetFunction f = random_bi_set_function(rng, a, b);
            CHECK(beta_sup_form_check(process, a, b, f) <= beta + 1e-10);
        }
    }

    SUBCASE("sup norms above one are rejected") {
        const BiSetFunction two = BiSetFunction::constant(a, b, 2.0);
        CHECK_THROWS_AS(beta_sup_form_check(process, a, b, two),
                        std::invalid_argument);
    }
}

TEST_CASE("alpha respects its enumeration cap and the 2-alpha inequality") {
    SplitMix64 rng(44);
    const FiniteProcess process = random_process(rng, 8);
    CHECK_THROWS_WITH_AS(
        alpha_exact(process, Region::of({0, 1, 2, 3}), Region::of({4})),
        "alpha enumeration cap exceeded", std::domain_error);

    for (int t = 0; t < 25; ++t) {
        const Region a = random_subset(rng, Region::full(8), 3);
        const Region b = random_subset(rng, Region::full(8).minus(a), 3);
        const double alpha = alpha_exact(process, a, b);
        const double beta = beta_exact(process, a, b);
        CHECK(2.0 * alpha <= beta + 1e-10);
        CHECK(alpha >= 0.0);
        CHECK(alpha <= 0.25 + 1e-12);
    }
}

TEST_CASE("the intensity bound dominates beta on random processes") {
    SplitMix64 rng(45);
    for (int t = 0; t < 50; ++t) {
        const bool use_dpp = t % 2 == 0;
        const FiniteProcess process =
            use_dpp ? dpp_to_process(random_dpp(rng, 6, 0.0, 1.0, t % 4 < 2))
                    : random_process(rng, 6, t % 4 < 2);
        const Region a = random_subset(rng, Region::full(6), 3);
        const Region b = random_subset(rng, Region::full(6).minus(a), 3);
        CHECK(beta_exact(process, a, b) <=
              theorem1_bound(correlations_of(process), a, b) + 1e-10);
    }
}

TEST_CASE("closed-form DPP bounds") {
    const DiscreteDPP dpp = two_site_dpp(0.5, 0.3);
    const Region a = Region::of({0});
    const Region b = Region::of({1});

    SUBCASE("general bound reproduces 16 e^2 l2") {
        const DppGeneralBound bound = dpp_bound_general(dpp, a, b);
        CHECK(bound.value ==
              doctest::Approx(16.0 * std::exp(2.0) * 0.09).epsilon(1e-12));
        CHECK(bound.l2_cross == doctest::Approx(0.09).epsilon(1e-15));
        CHECK(bound.omega == doctest::Approx(0.3).epsilon(1e-15));
        CHECK(bound.k_inf == doctest::Approx(0.5).epsilon(1e-15));
        // the display form replaces l2 by p q omega^2; identical here
        CHECK(bound.display_form == doctest::Approx(bound.value).epsilon(1e-12));
    }

    SUBCASE("vanishing cross block gives a zero bound") {
        const DiscreteDPP diag = two_site_dpp(0.5, 0.0);
        CHECK(dpp_bound_general(diag, a, b).value == 0.0);
        CHECK(dpp_lower_bound(diag, a, b) == 0.0);
    }

    SUBCASE("rank bound on the rank-one kernel") {
        Eigen::MatrixXd k(2, 2);
        k << 0.4, 0.4, 0.4, 0.4;
        const DiscreteDPP rank1(unit_sites(2), k);
        REQUIRE(rank1.numerical_rank() == 1);
        CHECK(dpp_bound_rank(rank1, a, b) == doctest::Approx(5.76).epsilon(1e-12));

        const DiscreteDPP zero(unit_sites(2), Eigen::MatrixXd::Zero(2, 2));
        CHECK(dpp_bound_rank(zero, a, b) == 0.0);
    }

    SUBCASE("lower bound value and sandwich on the family") {
        const double lower = dpp_lower_bound(dpp, a, b);
        CHECK(lower ==
              doctest::Approx(2.0 * std::pow(0.2, 1.25) * 0.09).epsilon(1e-12));
        const double beta = beta_exact(dpp_to_process(dpp), a, b);
        CHECK(lower <= beta + 1e-12);
        CHECK(beta == doctest::Approx(0.18).epsilon(1e-13));
    }

    SUBCASE("lower bound hypotheses are enforced") {
        Eigen::MatrixXd neg(2, 2);
        neg << 0.5, -0.2, -0.2, 0.5;
        const DiscreteDPP signed_kernel(unit_sites(2), neg);
        CHECK_THROWS_WITH_AS(dpp_lower_bound(signed_kernel, a, b),
                             "proposition hypotheses violated", std::domain_error);

        const DiscreteDPP proj(unit_sites(2), Eigen::MatrixXd::Identity(2, 2));
        CHECK_THROWS_WITH_AS(dpp_lower_bound(proj, a, b),
                             "proposition hypotheses violated", std::domain_error);
    }

    SUBCASE("lower/upper ratio converges to one half as the kernel shrinks") {
        double prev_gap = 1.0;
        for (const double t : {0.1, 0.05, 0.01}) {
            const DiscreteDPP scaled = two_site_dpp(0.5 * t, 0.3 * t);
            const double ratio = dpp_lower_bound(scaled, a, b) /
                                 dpp_bound_general(scaled, a, b).value;
            const double gap = std::abs(ratio - 0.5);
            CHECK(gap < prev_gap);
            prev_gap = gap;
        }
        CHECK(prev_gap < 0.03);  // gap shrinks ~2.5t; 0.024 at t = 0.01
    }
}

TEST_CASE("bound chain on random DPPs") {
    SplitMix64 rng(46);
    for (int t = 0; t < 50; ++t) {
        const DiscreteDPP dpp = random_dpp(rng, 5, 0.0, 1.0, t % 2 == 0);
        const Region a = random_subset(rng, Region::full(5), 2);
        const Region b = random_subset(rng, Region::full(5).minus(a), 2);
        const double t1 = theorem1_bound(CorrelationOracle::from_dpp(dpp), a, b);
        CHECK(t1 <= dpp_bound_general(dpp, a, b).value + 1e-10);
    }
}

TEST_CASE("determinant gap") {
    SUBCASE("block-diagonal kernels have no gap") {
        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(4, 4);
        k.topLeftCorner(2, 2) << 0.5, 0.2, 0.2, 0.5;
        k.bottomRightCorner(2, 2) << 0.6, 0.1, 0.1, 0.6;
        const int x[] = {0, 1};
        const int y[] = {2, 3};
        const DeterminantGap dg = determinant_gap(k, x, y);
        CHECK(dg.gap == doctest::Approx(0.0).scale(1).epsilon(1e-14));
        CHECK(dg.bound1 == 0.0);
        CHECK(dg.bound2 == 0.0);
    }

    SUBCASE("singleton tuples are tight for both bounds") {
        SplitMix64 rng(47);
        const Eigen::MatrixXd k = random_psd(rng, 4, 0.0, 1.0);
        const int x[] = {1};
        const int y[] = {3};
        const DeterminantGap dg = determinant_gap(k, x, y);
        CHECK(dg.gap == doctest::Approx(k(1, 3) * k(1, 3)).epsilon(1e-13));
        CHECK(dg.bound1 == doctest::Approx(dg.gap).epsilon(1e-13));
        CHECK(dg.bound2 == doctest::Approx(dg.gap).epsilon(1e-13));
    }

    SUBCASE("tuples must be disjoint with distinct entries") {
        const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(3, 3);
        const int x[] = {0, 0};
        const int y[] = {1};
        CHECK_THROWS_AS(determinant_gap(k, x, y), std::invalid_argument);
        const int x2[] = {0, 1};
        const int y2[] = {1};
        CHECK_THROWS_AS(determinant_gap(k, x2, y2), std::invalid_argument);
    }

    SUBCASE("empty tuples give zero gap and zero bounds") {
        const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(3, 3);
        const int y[] = {1, 2};
        const DeterminantGap dg = determinant_gap(k, {}, y);
        CHECK(dg.gap == 0.0);
        CHECK(dg.bound1 == 0.0);
        CHECK(dg.bound2 == 0.0);
    }
}

TEST_CASE("sweep") {
    SUBCASE("separation beyond the diameter leaves only empty regions") {
        SplitMix64 rng(48);
        const FiniteProcess process = random_process(rng, 5);
        const MixingReport rep = beta_pq_r_sweep(process, 2.0, 2.0, 1e6);
        CHECK(rep.a_members.empty());
        CHECK(rep.b_members.empty());
        CHECK(rep.beta_exact == 0.0);
    }

    SUBCASE("zero measure caps select empty regions") {
        SplitMix64 rng(49);
        const FiniteProcess process = random_process(rng, 5);
        const MixingReport rep = beta_pq_r_sweep(process, 0.0, 0.0, 0.0);
        CHECK(rep.beta_exact == 0.0);
        CHECK(rep.a_members.empty());
    }

    SUBCASE("maximized beta is non-increasing in the separation r") {
        // six collinear unit-weight sites with a gaussian kernel
        std::vector<Site> sites;
        for (int i = 0; i < 6; ++i) sites.push_back(Site{{static_cast<double>(i)}, 1.0});
        GroundSpace space(1, sites);
        Eigen::MatrixXd kernel(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                kernel(i, j) = 0.35 * std::exp(-0.5 * (i - j) * (i - j));
        const DiscreteDPP dpp(space, kernel);
        double prev = std::numeric_limits<double>::infinity();
        for (const double r : {0.5, 1.5, 2.5, 3.5}) {
            const MixingReport rep = beta_pq_r_sweep(dpp, 1.0, 1.0, r);
            CHECK(rep.beta_exact <= prev + 1e-14);
            prev = rep.beta_exact;
            CHECK(rep.beta_exact <= rep.bound_theorem1 + 1e-10);
            REQUIRE(rep.bound_dpp_general.has_value());
            CHECK(rep.bound_theorem1 <= *rep.bound_dpp_general + 1e-10);
        }
    }

    SUBCASE("the candidate cap is enforced") {
        SplitMix64 rng(50);
        const FiniteProcess process = random_process(rng, 8);
        SweepOptions opts;
        opts.pair_cap = 100;
        CHECK_THROWS_WITH_AS(beta_pq_r_sweep(process, 10.0, 10.0, 0.0, opts),
                             "sweep enumeration cap exceeded", std::runtime_error);
    }

    SUBCASE("sweeps are deterministic") {
        SplitMix64 rng(51);
        const DiscreteDPP dpp = random_dpp(rng, 5, 0.0, 0.9);
        const MixingReport r1 = beta_pq_r_sweep(dpp, 2.0, 2.0, 1.0);
        const MixingReport r2 = beta_pq_r_sweep(dpp, 2.0, 2.0, 1.0);
        CHECK(r1.to_json().dump() == r2.to_json().dump());
        CHECK(r1.to_csv_row() == r2.to_csv_row());
    }
}

TEST_CASE("report serialization") {
    const DiscreteDPP dpp = two_site_dpp(0.5, 0.3);
    const MixingReport rep = mixing_report(dpp, Region::of({0}), Region::of({1}));

    SUBCASE("json carries every field") {
        const nlohmann::json j = rep.to_json();
        CHECK(j.at("A") == nlohmann::json::array({0}));
        CHECK(j.at("B") == nlohmann::json::array({1}));
        CHECK(j.at("beta_exact").get<double>() == doctest::Approx(0.18));
        CHECK(j.at("alpha_exact").get<double>() == doctest::Approx(0.09));
        CHECK(j.at("bound_theorem1").get<double>() == doctest::Approx(0.36));
        CHECK(j.at("bound_dpp_general").get<double>() ==
              doctest::Approx(16.0 * std::exp(2.0) * 0.09));
        CHECK(j.at("lower_bound_dpp").get<double>() ==
              doctest::Approx(2.0 * std::pow(0.2, 1.25) * 0.09));
    }

    SUBCASE("csv columns follow the documented order; absents are empty") {
        CHECK(MixingReport::csv_header() ==
              "A,B,p,q,r,beta_exact,alpha_exact,bound_theorem1,bound_dpp_general,"
              "bound_dpp_rank,lower_bound_dpp");
        MixingReport bare;
        bare.a_members = {0, 2};
        bare.b_members = {1};
        bare.p = 2.0;
        bare.q = 1.0;
        bare.r = 1.5;
        bare.beta_exact = 0.25;
        bare.bound_theorem1 = 0.5;
        const std::string row = bare.to_csv_row();
        CHECK(row == "0;2,1,2,1,1.5,0.25,,0.5,,,");
    }

    SUBCASE("process reports omit the kernel bounds") {
        SplitMix64 rng(52);
        const FiniteProcess process = random_process(rng, 4);
        const MixingReport r = mixing_report(process, Region::of({0}), Region::of({2}));
        CHECK(!r.bound_dpp_general.has_value());
        CHECK(!r.bound_dpp_rank.has_value());
        CHECK(!r.lower_bound_dpp.has_value());
        CHECK(r.alpha_exact.has_value());
    }
}
