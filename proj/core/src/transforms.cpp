#include "betamix/transforms.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace betamix {

namespace {

std::uint32_t compress_bits(std::uint32_t global, const std::vector<int>& members) {
    std::uint32_t local = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
        if ((global >> members[i]) & 1u) local |= std::uint32_t{1} << i;
    return local;
}

std::uint32_t expand_bits(std::uint32_t local, const std::vector<int>& members) {
    std::uint32_t global = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
        if ((local >> i) & 1u) global |= std::uint32_t{1} << members[i];
    return global;
}

}  // namespace

SetFunction::SetFunction(Region region, std::vector<double> values)
    : region_(region), members_(region.members()), values_(std::move(values)) {
    if (values_.size() != (std::size_t{1} << members_.size()))
        throw std::invalid_argument("table size must be 2^|region|");
}

SetFunction SetFunction::build(Region region, const std::function<double(Config)>& fn) {
    const std::vector<int> mem = region.members();
    std::vector<double> vals(std::size_t{1} << mem.size());
    for (std::uint32_t lm = 0; lm < vals.size(); ++lm)
        vals[lm] = fn(Config::from_mask(expand_bits(lm, mem)));
    return SetFunction(region, std::move(vals));
}

SetFunction SetFunction::constant(Region region, double value) {
    return SetFunction(region,
                       std::vector<double>(std::size_t{1} << region.size(), value));
}

SetFunction SetFunction::indicator(Region region, Config of) {
    if (!of.subset_of(region))
        throw std::invalid_argument("indicator target must lie inside the region");
    SetFunction f = constant(region, 0.0);
    f.values_[f.to_local(of)] = 1.0;
    return f;
}

std::uint32_t SetFunction::to_local(Config x) const {
    if (!x.subset_of(region_))
        throw std::out_of_range("configuration not contained in the function's region");
    return compress_bits(x.mask(), members_);
}

Config SetFunction::to_global(std::uint32_t local_mask) const {
    return Config::from_mask(expand_bits(local_mask, members_));
}

double SetFunction::sup_norm() const {
    double m = 0.0;
    for (const double v : values_) m = std::max(m, std::abs(v));
    return m;
}

BiSetFunction::BiSetFunction(Region region_a, Region region_b, std::vector<double> values)
    : region_a_(region_a),
      region_b_(region_b),
      members_a_(region_a.members()),
      members_b_(region_b.members()),
      arity_a_(static_cast<int>(members_a_.size())),
      arity_b_(static_cast<int>(members_b_.size())),
      values_(std::move(values)) {
    if (values_.size() != (std::size_t{1} << (arity_a_ + arity_b_)))
        throw std::invalid_argument("table size must be 2^|A| * 2^|B|");
}

BiSetFunction BiSetFunction::build(Region region_a, Region region_b,
                                   const std::function<double(Config, Config)>& fn) {
    const std::vector<int> ma = region_a.members();
    const std::vector<int> mb = region_b.members();
    std::vector<double> vals(std::size_t{1} << (ma.size() + mb.size()));
    std::size_t idx = 0;
    for (std::uint32_t la = 0; la < (std::uint32_t{1} << ma.size()); ++la) {
        const Config a = Config::from_mask(expand_bits(la, ma));
        for (std::uint32_t lb = 0; lb < (std::uint32_t{1} << mb.size()); ++lb, ++idx)
            vals[idx] = fn(a, Config::from_mask(expand_bits(lb, mb)));
    }
    return BiSetFunction(region_a, region_b, std::move(vals));
}

BiSetFunction BiSetFunction::constant(Region region_a, Region region_b, double value) {
    return BiSetFunction(
        region_a, region_b,
        std::vector<double>(std::size_t{1} << (region_a.size() + region_b.size()), value));
}

double BiSetFunction::operator()(Config a, Config b) const {
    return local(to_local_a(a), to_local_b(b));
}

std::uint32_t BiSetFunction::to_local_a(Config a) const {
    if (!a.subset_of(region_a_))
        throw std::out_of_range("first argument not contained in region A");
    return compress_bits(a.mask(), members_a_);
}

std::uint32_t BiSetFunction::to_local_b(Config b) const {
    if (!b.subset_of(region_b_))
        throw std::out_of_range("second argument not contained in region B");
    return compress_bits(b.mask(), members_b_);
}

Config BiSetFunction::to_global_a(std::uint32_t la) const {
    return Config::from_mask(expand_bits(la, members_a_));
}

Config BiSetFunction::to_global_b(std::uint32_t lb) const {
    return Config::from_mask(expand_bits(lb, members_b_));
}

double BiSetFunction::sup_norm() const {
    double m = 0.0;
    for (const double v : values_) m = std::max(m, std::abs(v));
    return m;
}

// Direct submask loops. Submasks are visited in descending numeric order,
// starting from X itself and ending at the empty set.

SetFunction lower_sum(const SetFunction& f) {
    SetFunction out = f;
    const std::uint32_t n = static_cast<std::uint32_t>(f.table_size());
    for (std::uint32_t x = 0; x < n; ++x) {
        double acc = 0.0;
        std::uint32_t sub = x;
        while (true) {
            acc += f.local(sub);
            if (sub == 0) break;
            sub = (sub - 1) & x;
        }
        out.local(x) = acc;
    }
    return out;
}

SetFunction lower_difference(const SetFunction& f) {
    SetFunction out = f;
    const std::uint32_t n = static_cast<std::uint32_t>(f.table_size());
    for (std::uint32_t x = 0; x < n; ++x) {
        double acc = 0.0;
        std::uint32_t sub = x;
        while (true) {
            const int removed = std::popcount(x ^ sub);
            acc += (removed & 1) ? -f.local(sub) : f.local(sub);
            if (sub == 0) break;
            sub = (sub - 1) & x;
        }
        out.local(x) = acc;
    }
    return out;
}

SetFunction lower_sum_fast(const SetFunction& f) {
    SetFunction out = f;
    const int m = f.arity();
    const std::uint32_t n = static_cast<std::uint32_t>(f.table_size());
    for (int b = 0; b < m; ++b) {
        const std::uint32_t bit = std::uint32_t{1} << b;
        for (std::uint32_t x = 0; x < n; ++x)
            if (x & bit) out.local(x) += out.local(x ^ bit);
    }
    return out;
}

SetFunction lower_difference_fast(const SetFunction& f) {
    SetFunction out = f;
    const int m = f.arity();
    const std::uint32_t n = static_cast<std::uint32_t>(f.table_size());
    for (int b = 0; b < m; ++b) {
        const std::uint32_t bit = std::uint32_t{1} << b;
        for (std::uint32_t x = 0; x < n; ++x)
            if (x & bit) out.local(x) -= out.local(x ^ bit);
    }
    return out;
}

BiSetFunction lower_sum_bi(const BiSetFunction& f) {
    BiSetFunction out = f;
    const std::uint32_t na = std::uint32_t{1} << f.arity_a();
    const std::uint32_t nb = std::uint32_t{1} << f.arity_b();
    for (std::uint32_t xa = 0; xa < na; ++xa) {
        for (std::uint32_t xb = 0; xb < nb; ++xb) {
            double acc = 0.0;
            std::uint32_t sa = xa;
            while (true) {
                std::uint32_t sb = xb;
                while (true) {
                    acc += f.local(sa, sb);
                    if (sb == 0) break;
                    sb = (sb - 1) & xb;
                }
                if (sa == 0) break;
                sa = (sa - 1) & xa;
            }
            out.local(xa, xb) = acc;
        }
    }
    return out;
}

BiSetFunction lower_difference_bi(const BiSetFunction& f) {
    BiSetFunction out = f;
    const std::uint32_t na = std::uint32_t{1} << f.arity_a();
    const std::uint32_t nb = std::uint32_t{1} << f.arity_b();
    for (std::uint32_t xa = 0; xa < na; ++xa) {
        for (std::uint32_t xb = 0; xb < nb; ++xb) {
            double acc = 0.0;
            std::uint32_t sa = xa;
            while (true) {
                const int ra = std::popcount(xa ^ sa);
                std::uint32_t sb = xb;
                while (true) {
                    const int removed = ra + std::popcount(xb ^ sb);
                    acc += (removed & 1) ? -f.local(sa, sb) : f.local(sa, sb);
                    if (sb == 0) break;
                    sb = (sb - 1) & xb;
                }
                if (sa == 0) break;
                sa = (sa - 1) & xa;
            }
            out.local(xa, xb) = acc;
        }
    }
    return out;
}

SetFunction restrict_to(const SetFunction& f, Region a) {
    if (!a.subset_of(f.region()))
        throw std::invalid_argument("restriction window must lie inside the region");
    SetFunction out = f;
    const std::uint32_t a_local = f.to_local(a);
    const std::uint32_t n = static_cast<std::uint32_t>(f.table_size());
    for (std::uint32_t x = 0; x < n; ++x) out.local(x) = f.local(x & a_local);
    return out;
}

}  // namespace betamix
