#include "betamix/ground.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace betamix {

GroundSpace::GroundSpace(int dimension, std::vector<Site> sites, int max_sites)
    : dimension_(dimension), sites_(std::move(sites)) {
    if (dimension_ <= 0) throw std::invalid_argument("dimension must be positive");
    if (max_sites > 32)
        throw std::invalid_argument("site cap exceeds the 32-site representation limit");
    if (static_cast<int>(sites_.size()) > max_sites)
        throw std::invalid_argument("site count " + std::to_string(sites_.size()) +
                                    " exceeds hard cap " + std::to_string(max_sites));
    for (const Site& s : sites_) {
        if (static_cast<int>(s.coord.size()) != dimension_)
            throw std::invalid_argument("site coordinate length differs from dimension");
        if (!(s.weight >= 0.0))
            throw std::invalid_argument("site weights must be non-negative");
    }
}

double GroundSpace::site_distance(int i, int j) const {
    const Site& a = site(i);
    const Site& b = site(j);
    double sq = 0.0;
    for (int k = 0; k < dimension_; ++k) {
        const double d = a.coord[static_cast<std::size_t>(k)] -
                         b.coord[static_cast<std::size_t>(k)];
        sq += d * d;
    }
    return std::sqrt(sq);
}

SiteSet SiteSet::of(std::initializer_list<int> indices) {
    std::uint32_t bits = 0;
    for (const int i : indices) {
        if (i < 0 || i >= 32) throw std::out_of_range("site index out of range");
        bits |= std::uint32_t{1} << i;
    }
    return SiteSet(bits);
}

SiteSet SiteSet::from_indices(std::span<const int> indices) {
    std::uint32_t bits = 0;
    for (const int i : indices) {
        if (i < 0 || i >= 32) throw std::out_of_range("site index out of range");
        bits |= std::uint32_t{1} << i;
    }
    return SiteSet(bits);
}

std::vector<int> SiteSet::members() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    std::uint32_t m = bits_;
    while (m != 0) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

bool lex_less(SiteSet a, SiteSet b) {
    if (a == b) return false;
    const std::uint32_t diff = a.mask() ^ b.mask();
    const int k = std::countr_zero(diff);
    // The shared members below k form a common prefix. If b owns k, a is
    // smaller exactly when it has nothing beyond the prefix; symmetrically
    // if a owns k, a is smaller unless b has ended. Shift twice: k can be
    // 31 and a single shift by k+1 would be undefined.
    if (b.contains(k)) return ((a.mask() >> k) >> 1) == 0;
    return ((b.mask() >> k) >> 1) != 0;
}

bool size_lex_less(SiteSet a, SiteSet b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_less(a, b);
}

void require_valid(const GroundSpace& space, SiteSet s) {
    if (!s.subset_of(SiteSet::full(space.size())))
        throw std::out_of_range("set references sites outside the ground space");
}

std::vector<Config> enumerate_subsets(const GroundSpace& space, Region region) {
    require_valid(space, region);
    const std::vector<int> mem = region.members();
    const int m = static_cast<int>(mem.size());
    std::vector<Config> out;
    out.reserve(std::size_t{1} << m);
    out.push_back(Config{});
    // Size classes in turn; combinations within a class advance like an
    // odometer over positions into the ascending member list, which is
    // exactly lexicographic order on the member sequences.
    std::vector<int> pos;
    for (int n = 1; n <= m; ++n) {
        pos.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(i)] = i;
        while (true) {
            SiteSet s;
            for (const int p : pos) s = s.with(mem[static_cast<std::size_t>(p)]);
            out.push_back(s);
            int i = n - 1;
            while (i >= 0 && pos[static_cast<std::size_t>(i)] == m - n + i) --i;
            if (i < 0) break;
            ++pos[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j)
                pos[static_cast<std::size_t>(j)] = pos[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return out;
}

double measure(const GroundSpace& space, Region region) {
    require_valid(space, region);
    double total = 0.0;
    for (const int i : region.members()) total += space.weight(i);
    return total;
}

double weight_product(const GroundSpace& space, SiteSet s) {
    require_valid(space, s);
    double prod = 1.0;
    for (const int i : s.members()) prod *= space.weight(i);
    return prod;
}

double region_distance(const GroundSpace& space, Region a, Region b) {
    require_valid(space, a);
    require_valid(space, b);
    if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const int i : a.members())
        for (const int j : b.members())
            best = std::min(best, space.site_distance(i, j));
    return best;
}

}  // namespace betamix
