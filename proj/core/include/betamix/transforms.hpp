#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "betamix/ground.hpp"

namespace betamix {

/// A real function materialized as a total table over the subsets of a
/// declared region. Tables are exact and finite, which is what makes every
/// transform below testable against brute force.
///
/// Internally a subset X of the region maps to a "local mask": bit i of the
/// local mask corresponds to the i-th smallest member of the region.
class SetFunction {
public:
    SetFunction(Region region, std::vector<double> values);

    static SetFunction build(Region region,
                             const std::function<double(Config)>& fn);
    static SetFunction constant(Region region, double value);
    /// Indicator of a single configuration (which must lie inside region).
    static SetFunction indicator(Region region, Config of);

    Region region() const { return region_; }
    int arity() const { return static_cast<int>(members_.size()); }
    std::size_t table_size() const { return values_.size(); }

    /// Value at a configuration X ⊆ region.
    double operator()(Config x) const { return values_[to_local(x)]; }

    double local(std::uint32_t local_mask) const { return values_[local_mask]; }
    double& local(std::uint32_t local_mask) { return values_[local_mask]; }
    std::span<const double> values() const { return values_; }

    std::uint32_t to_local(Config x) const;
    Config to_global(std::uint32_t local_mask) const;

    /// Max absolute table value.
    double sup_norm() const;

private:
    Region region_;
    std::vector<int> members_;
    std::vector<double> values_;
};

/// Bivariate analogue: a total table over subsets of two declared regions.
/// Entry (a, b) lives at index a_local * 2^|regionB| + b_local.
class BiSetFunction {
public:
    BiSetFunction(Region region_a, Region region_b, std::vector<double> values);

    static BiSetFunction build(Region region_a, Region region_b,
                               const std::function<double(Config, Config)>& fn);
    static BiSetFunction constant(Region region_a, Region region_b, double value);

    Region region_a() const { return region_a_; }
    Region region_b() const { return region_b_; }
    int arity_a() const { return arity_a_; }
    int arity_b() const { return arity_b_; }
    std::size_t table_size() const { return values_.size(); }

    double operator()(Config a, Config b) const;
    double local(std::uint32_t la, std::uint32_t lb) const {
        return values_[(static_cast<std::size_t>(la) << arity_b_) | lb];
    }
    double& local(std::uint32_t la, std::uint32_t lb) {
        return values_[(static_cast<std::size_t>(la) << arity_b_) | lb];
    }
    std::span<const double> values() const { return values_; }

    std::uint32_t to_local_a(Config a) const;
    std::uint32_t to_local_b(Config b) const;
    Config to_global_a(std::uint32_t) const;
    Config to_global_b(std::uint32_t) const;

    double sup_norm() const;

private:
    Region region_a_, region_b_;
    std::vector<int> members_a_, members_b_;
    int arity_a_ = 0, arity_b_ = 0;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Lattice transforms.
//
//   lower_sum        f^(X) = sum_{Z ⊆ X} f(Z)
//   lower_difference f~(X) = sum_{Z ⊆ X} (-1)^{|X\Z|} f(Z)
//
// The two operators are mutually inverse on every table, and
// |f~(X)| <= ||f||_inf * 2^|X|.
//
// The default evaluation is the direct double loop over (X, Z ⊆ X): O(3^m)
// additions in a fixed, documented order. The *_fast variants run the
// standard in-place lattice pass in O(m 2^m); they sum the same terms in a
// different association, so on general floating tables they agree with the
// direct loop only up to roundoff. On integer-valued tables whose partial
// sums stay below 2^53 every intermediate is exact and the two paths agree
// bitwise.
// ---------------------------------------------------------------------------

SetFunction lower_sum(const SetFunction& f);
SetFunction lower_difference(const SetFunction& f);
SetFunction lower_sum_fast(const SetFunction& f);
SetFunction lower_difference_fast(const SetFunction& f);

/// Bivariate transforms: the sum/difference runs over both coordinates,
/// with sign (-1)^{|X1\Z1| + |X2\Z2|} for the difference.
BiSetFunction lower_sum_bi(const BiSetFunction& f);
BiSetFunction lower_difference_bi(const BiSetFunction& f);

/// f_A : X -> f(X ∩ A), on the full region of f. Requires A ⊆ region.
/// The lower difference of f_A vanishes outside subsets of A and agrees
/// with the lower difference of f|_A inside.
SetFunction restrict_to(const SetFunction& f, Region a);

}  // namespace betamix
