#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace betamix {

/// Default hard cap on the number of sites. Everything downstream
/// enumerates all 2^S subsets, so the cap keeps instances honest.
inline constexpr int kDefaultMaxSites = 20;

/// One atom of the ground measure: a point of R^d carrying a mass.
struct Site {
    std::vector<double> coord;
    double weight = 1.0;
};

/// A finite list of weighted sites standing in for (R^d, mu). All exact
/// computations in the library run on subsets of these sites; integrals
/// against mu become weighted sums over site indices.
class GroundSpace {
public:
    GroundSpace(int dimension, std::vector<Site> sites,
                int max_sites = kDefaultMaxSites);

    int dimension() const { return dimension_; }
    int size() const { return static_cast<int>(sites_.size()); }
    const Site& site(int i) const { return sites_[static_cast<std::size_t>(i)]; }
    double weight(int i) const { return sites_[static_cast<std::size_t>(i)].weight; }
    const std::vector<Site>& sites() const { return sites_; }

    /// Euclidean distance between two sites.
    double site_distance(int i, int j) const;

private:
    int dimension_;
    std::vector<Site> sites_;
};

/// Canonical subset of sites. Stored as a bitmask over site indices; the
/// observable form is the strictly ascending list of members, which is what
/// all documented orderings refer to.
class SiteSet {
public:
    constexpr SiteSet() = default;

    static SiteSet of(std::initializer_list<int> indices);
    static SiteSet from_indices(std::span<const int> indices);
    static constexpr SiteSet from_mask(std::uint32_t mask) { return SiteSet(mask); }
    static constexpr SiteSet full(int n) {
        return SiteSet(n >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1);
    }

    constexpr std::uint32_t mask() const { return bits_; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
    constexpr bool subset_of(SiteSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool intersects(SiteSet o) const { return (bits_ & o.bits_) != 0; }

    constexpr SiteSet unite(SiteSet o) const { return SiteSet(bits_ | o.bits_); }
    constexpr SiteSet intersect(SiteSet o) const { return SiteSet(bits_ & o.bits_); }
    constexpr SiteSet minus(SiteSet o) const { return SiteSet(bits_ & ~o.bits_); }
    constexpr SiteSet with(int i) const { return SiteSet(bits_ | (std::uint32_t{1} << i)); }

    std::vector<int> members() const;

    constexpr bool operator==(const SiteSet&) const = default;

private:
    explicit constexpr SiteSet(std::uint32_t bits) : bits_(bits) {}
    std::uint32_t bits_ = 0;
};

using Config = SiteSet;  // a point configuration (element of the finite Omega_f)
using Region = SiteSet;  // an observation window A

/// Lexicographic order on the ascending member lists ({} < {0} < {0,1} < {1}).
/// Used for documented tie-breaks and enumeration orders.
bool lex_less(SiteSet a, SiteSet b);

/// Order by cardinality first, then lexicographic. This is the canonical
/// enumeration order of subsets throughout the library.
bool size_lex_less(SiteSet a, SiteSet b);

/// All 2^|region| subsets of `region`, each exactly once, ordered by size
/// then lexicographically on member lists.
std::vector<Config> enumerate_subsets(const GroundSpace& space, Region region);

/// mu(A): the summed weight of the region's sites.
double measure(const GroundSpace& space, Region region);

/// Product of site weights over the set (1 for the empty set).
double weight_product(const GroundSpace& space, SiteSet s);

/// dist(A, B): minimum Euclidean distance between sites of A and sites of B;
/// +infinity when either region is empty.
double region_distance(const GroundSpace& space, Region a, Region b);

/// Throws std::out_of_range unless every member of `s` indexes a site.
void require_valid(const GroundSpace& space, SiteSet s);

}  // namespace betamix
