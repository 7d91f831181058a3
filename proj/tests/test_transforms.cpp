#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "betamix/random_instances.hpp"
#include "betamix/rng.hpp"
#include "betamix/transforms.hpp"

using namespace betamix;

namespace {

// Brute-force oracles, deliberately independent of the library's bitmask
// machinery: they work on explicit member vectors and test containment by
// std::includes.

bool contains_all(const std::vector<int>& big, const std::vector<int>& small) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::vector<std::vector<int>> all_subsets(const std::vector<int>& members) {
    std::vector<std::vector<int>> out{{}};
    for (const int m : members) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<int> next = out[i];
            next.push_back(m);
            out.push_back(std::move(next));
        }
    }
    for (auto& s : out) std::sort(s.begin(), s.end());
    return out;
}

double oracle_lower_sum_at(const SetFunction& f, const std::vector<int>& x) {
    double acc = 0.0;
    for (const auto& z : all_subsets(f.region().members()))
        if (contains_all(x, z)) acc += f(Config::from_indices(z));
    return acc;
}

double oracle_lower_difference_at(const SetFunction& f, const std::vector<int>& x) {
    double acc = 0.0;
    for (const auto& z : all_subsets(f.region().members()))
        if (contains_all(x, z)) {
            const double sign = ((x.size() - z.size()) % 2 == 0) ? 1.0 : -1.0;
            acc += sign * f(Config::from_indices(z));
        }
    return acc;
}

}  // namespace

TEST_CASE("lower sum basics") {
    const Region region = Region::of({0, 1, 2, 3});

    SUBCASE("indicator of the empty set sums to the constant 1") {
        const SetFunction f = SetFunction::indicator(region, Config{});
        const SetFunction fs = lower_sum(f);
        for (std::uint32_t x = 0; x < fs.table_size(); ++x)
            CHECK(fs.local(x) == 1.0);
    }

    SUBCASE("indicator of singletons sums to the cardinality") {
        const SetFunction f = SetFunction::build(
            region, [](Config z) { return z.size() == 1 ? 1.0 : 0.0; });
        const SetFunction fs = lower_sum(f);
        for (std::uint32_t x = 0; x < fs.table_size(); ++x)
            CHECK(fs.local(x) == static_cast<double>(fs.to_global(x).size()));
    }
}

TEST_CASE("lower sum matches the brute-force double loop on a 6-site region") {
    SplitMix64 rng(11);
    const Region region = Region::of({0, 1, 2, 3, 4, 5});
    const SetFunction f = random_set_function(rng, region);
    const SetFunction fs = lower_sum(f);
    for (const auto& x : all_subsets(region.members()))
        CHECK(fs(Config::from_indices(x)) ==
              doctest::Approx(oracle_lower_sum_at(f, x)).epsilon(1e-13));
}

TEST_CASE("lower difference") {
    const Region region = Region::of({0, 1, 2, 3, 4});

    SUBCASE("3^|Z| transforms to 2^|X|") {
        const SetFunction f = SetFunction::build(
            region, [](Config z) { return std::pow(3.0, z.size()); });
        const SetFunction fd = lower_difference(f);
        for (std::uint32_t x = 0; x < fd.table_size(); ++x)
            CHECK(fd.local(x) ==
                  doctest::Approx(std::ldexp(1.0, fd.to_global(x).size()))
                      .epsilon(1e-12));
    }

    SUBCASE("a constant collapses onto the empty set") {
        const SetFunction f = SetFunction::constant(region, 2.75);
        const SetFunction fd = lower_difference(f);
        CHECK(fd(Config{}) == 2.75);
        for (std::uint32_t x = 1; x < fd.table_size(); ++x)
            CHECK(fd.local(x) == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("agrees with the brute-force signed loop") {
        SplitMix64 rng(12);
        const SetFunction f = random_set_function(rng, region);
        const SetFunction fd = lower_difference(f);
        for (const auto& x : all_subsets(region.members()))
            CHECK(fd(Config::from_indices(x)) ==
                  doctest::Approx(oracle_lower_difference_at(f, x)).epsilon(1e-12));
    }
}

TEST_CASE("inversion holds both ways on random tables") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(6));
        const SetFunction f = random_set_function(rng, Region::full(m));
        const SetFunction a = lower_sum(lower_difference(f));
        const SetFunction b = lower_difference(lower_sum(f));
        for (std::uint32_t x = 0; x < f.table_size(); ++x) {
            CHECK(a.local(x) == doctest::Approx(f.local(x)).epsilon(1e-12));
            CHECK(b.local(x) == doctest::Approx(f.local(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("transforms are linear and obey the growth bound") {
    SplitMix64 rng(14);
    const Region region = Region::full(6);
    const SetFunction f = random_set_function(rng, region);
    const SetFunction g = random_set_function(rng, region);

    SetFunction combo = f;
    for (std::uint32_t x = 0; x < combo.table_size(); ++x)
        combo.local(x) = 2.0 * f.local(x) - 3.0 * g.local(x);
    const SetFunction lhs = lower_difference(combo);
    const SetFunction fd = lower_difference(f);
    const SetFunction gd = lower_difference(g);
    for (std::uint32_t x = 0; x < lhs.table_size(); ++x)
        CHECK(lhs.local(x) ==
              doctest::Approx(2.0 * fd.local(x) - 3.0 * gd.local(x)).epsilon(1e-12));

    const double sup = f.sup_norm();
    for (std::uint32_t x = 0; x < fd.table_size(); ++x)
        CHECK(std::abs(fd.local(x)) <=
              sup * std::ldexp(1.0, fd.to_global(x).size()) + 1e-12);
}

TEST_CASE("bivariate transforms") {
    const Region ra = Region::of({0, 1, 2});
    const Region rb = Region::of({4, 5, 6});

    SUBCASE("indicator of (empty, empty) sums to 1 everywhere") {
        BiSetFunction f = BiSetFunction::constant(ra, rb, 0.0);
        f.local(0, 0) = 1.0;
        const BiSetFunction fs = lower_sum_bi(f);
        for (std::uint32_t u = 0; u < 8; ++u)
            for (std::uint32_t v = 0; v < 8; ++v) CHECK(fs.local(u, v) == 1.0);
    }

    SUBCASE("products factorize") {
        SplitMix64 rng(15);
        const SetFunction g = random_set_function(rng, ra);
        const SetFunction h = random_set_function(rng, rb);
        const BiSetFunction f = BiSetFunction::build(
            ra, rb, [&](Config z1, Config z2) { return g(z1) * h(z2); });
        const BiSetFunction fs = lower_sum_bi(f);
        const SetFunction gs = lower_sum(g);
        const SetFunction hs = lower_sum(h);
        for (std::uint32_t u = 0; u < 8; ++u)
            for (std::uint32_t v = 0; v < 8; ++v)
                CHECK(fs.local(u, v) ==
                      doctest::Approx(gs.local(u) * hs.local(v)).epsilon(1e-12));
    }

    SUBCASE("difference of the product of 3-powers gives 2-powers") {
        const BiSetFunction f = BiSetFunction::build(ra, rb, [](Config a, Config b) {
            return std::pow(3.0, a.size()) * std::pow(3.0, b.size());
        });
        const BiSetFunction fd = lower_difference_bi(f);
        for (std::uint32_t u = 0; u < 8; ++u)
            for (std::uint32_t v = 0; v < 8; ++v)
                CHECK(fd.local(u, v) ==
                      doctest::Approx(std::ldexp(1.0, std::popcount(u) + std::popcount(v)))
                          .epsilon(1e-12));
    }

    SUBCASE("constants collapse onto (empty, empty)") {
        const BiSetFunction f = BiSetFunction::constant(ra, rb, -1.5);
        const BiSetFunction fd = lower_difference_bi(f);
        CHECK(fd.local(0, 0) == -1.5);
        double off = 0.0;
        for (std::uint32_t u = 0; u < 8; ++u)
            for (std::uint32_t v = 0; v < 8; ++v)
                if (u || v) off = std::max(off, std::abs(fd.local(u, v)));
        CHECK(off <= 1e-13);
    }

    SUBCASE("quadruple-loop oracle and round trip on random tables") {
        SplitMix64 rng(16);
        const BiSetFunction f = random_bi_set_function(rng, ra, rb);
        const BiSetFunction fs = lower_sum_bi(f);
        const auto subs_a = all_subsets(ra.members());
        const auto subs_b = all_subsets(rb.members());
        for (const auto& xa : subs_a)
            for (const auto& xb : subs_b) {
                double acc = 0.0;
                for (const auto& za : subs_a)
                    for (const auto& zb : subs_b)
                        if (contains_all(xa, za) && contains_all(xb, zb))
                            acc += f(Config::from_indices(za), Config::from_indices(zb));
                CHECK(fs(Config::from_indices(xa), Config::from_indices(xb)) ==
                      doctest::Approx(acc).epsilon(1e-12));
            }

        const BiSetFunction back = lower_difference_bi(fs);
        for (std::uint32_t u = 0; u < 8; ++u)
            for (std::uint32_t v = 0; v < 8; ++v)
                CHECK(back.local(u, v) == doctest::Approx(f.local(u, v)).epsilon(1e-12));
    }
}

TEST_CASE("restriction") {
    SplitMix64 rng(17);
    const Region region = Region::full(6);
    const SetFunction f = random_set_function(rng, region);

    SUBCASE("restricting to the full region is the identity") {
        const SetFunction g = restrict_to(f, region);
        for (std::uint32_t x = 0; x < f.table_size(); ++x)
            CHECK(g.local(x) == f.local(x));
    }

    SUBCASE("restricting to the empty region is the constant f(empty)") {
        const SetFunction g = restrict_to(f, Region{});
        for (std::uint32_t x = 0; x < g.table_size(); ++x)
            CHECK(g.local(x) == f(Config{}));
    }

    SUBCASE("lower difference of a restriction vanishes off the window") {
        const Region a = Region::of({1, 3, 4});
        const SetFunction gd = lower_difference(restrict_to(f, a));
        const SetFunction fa =
            SetFunction::build(a, [&](Config z) { return f(z); });
        const SetFunction fad = lower_difference(fa);
        for (std::uint32_t x = 0; x < gd.table_size(); ++x) {
            const Config gx = gd.to_global(x);
            const double expected = gx.subset_of(a) ? fad(gx) : 0.0;
            CHECK(gd.local(x) == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    SUBCASE("window must lie inside the region") {
        CHECK_THROWS_AS(restrict_to(f, Region::of({7})), std::invalid_argument);
    }
}

TEST_CASE("gluing disjoint restrictions matches the bivariate difference") {
    SplitMix64 rng(18);
    const Region region = Region::full(7);
    const Region a = Region::of({0, 2, 5});
    const Region b = Region::of({1, 6});
    const BiSetFunction h = random_bi_set_function(rng, a, b);
    const SetFunction g = SetFunction::build(region, [&](Config x) {
        return h(x.intersect(a), x.intersect(b));
    });
    const SetFunction gd = lower_difference(g);
    const BiSetFunction hd = lower_difference_bi(h);
    for (std::uint32_t x = 0; x < gd.table_size(); ++x) {
        const Config gx = gd.to_global(x);
        const double expected = gx.subset_of(a.unite(b))
                                    ? hd(gx.intersect(a), gx.intersect(b))
                                    : 0.0;
        CHECK(gd.local(x) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("lattice pass agrees with the direct loop") {
    SplitMix64 rng(19);

    SUBCASE("bitwise on integer tables up to 12 sites") {
        for (const int m : {4, 8, 12}) {
            const SetFunction f = random_integer_set_function(rng, Region::full(m));
            const SetFunction zf = lower_sum_fast(f);
            const SetFunction zd = lower_sum(f);
            const SetFunction mf = lower_difference_fast(f);
            const SetFunction md = lower_difference(f);
            for (std::uint32_t x = 0; x < f.table_size(); ++x) {
                CHECK(zf.local(x) == zd.local(x));
                CHECK(mf.local(x) == md.local(x));
            }
        }
    }

    SUBCASE("to roundoff on float tables") {
        const SetFunction f = random_set_function(rng, Region::full(10));
        const SetFunction zf = lower_sum_fast(f);
        const SetFunction zd = lower_sum(f);
        for (std::uint32_t x = 0; x < f.table_size(); ++x)
            CHECK(zf.local(x) == doctest::Approx(zd.local(x)).epsilon(1e-12));
    }
}
