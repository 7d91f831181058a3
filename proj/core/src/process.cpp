#include "betamix/process.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "betamix/rng.hpp"

namespace betamix {

namespace {

Eigen::MatrixXd gather_submatrix(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) sub(r, c) = m(idx[r], idx[c]);
    return sub;
}

}  // namespace

double subset_determinant(const Eigen::MatrixXd& m, SiteSet s) {
    const int n = s.size();
    if (n == 0) return 1.0;
    const std::vector<int> idx = s.members();
    if (n == 1) return m(idx[0], idx[0]);
    if (n == 2)
        return m(idx[0], idx[0]) * m(idx[1], idx[1]) -
               m(idx[0], idx[1]) * m(idx[1], idx[0]);
    return gather_submatrix(m, idx).partialPivLu().determinant();
}

FiniteProcess::FiniteProcess(GroundSpace space, std::vector<double> law)
    : space_(std::move(space)), law_(std::move(law)) {
    if (law_.size() != (std::size_t{1} << space_.size()))
        throw std::invalid_argument("law must assign a probability to all 2^S subsets");
    double total = 0.0;
    for (const double p : law_) {
        if (p < -Tolerances::law_negativity)
            throw std::invalid_argument("law has a negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > Tolerances::structural)
        throw std::invalid_argument("law does not sum to 1 (total " +
                                    std::to_string(total) + ")");
    for (double& p : law_)
        if (p < 0.0) p = 0.0;
}

DiscreteDPP::DiscreteDPP(GroundSpace space, Eigen::MatrixXd kernel)
    : space_(std::move(space)), kernel_(std::move(kernel)) {
    const int n = space_.size();
    if (kernel_.rows() != n || kernel_.cols() != n)
        throw std::invalid_argument("kernel must be S x S for the ground space");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(kernel_(i, j) - kernel_(j, i)) > Tolerances::structural)
                throw std::invalid_argument("symmetry violated");

    weighted_ = kernel_;
    Eigen::VectorXd root_w(n);
    for (int i = 0; i < n; ++i) root_w(i) = std::sqrt(space_.weight(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) weighted_(i, j) *= root_w(i) * root_w(j);
    // Symmetrize exactly so the eigensolver sees the average of the two
    // (tolerance-equal) triangles.
    weighted_ = ((weighted_ + weighted_.transpose()) / 2.0).eval();

    if (n > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(weighted_,
                                                          Eigen::EigenvaluesOnly);
        spectrum_ = es.eigenvalues();
        if (spectrum_(0) < -Tolerances::spectral ||
            spectrum_(n - 1) > 1.0 + Tolerances::spectral)
            throw std::invalid_argument("spectrum outside [0,1]");
    } else {
        spectrum_ = Eigen::VectorXd(0);
    }
}

int DiscreteDPP::numerical_rank(double tol) const {
    int rank = 0;
    for (Eigen::Index i = 0; i < spectrum_.size(); ++i)
        if (spectrum_(i) > tol) ++rank;
    return rank;
}

bool DiscreteDPP::l_ensemble_available(double margin) const {
    return spectrum_.size() == 0 || max_eigenvalue() <= 1.0 - margin;
}

double DiscreteDPP::inclusion_probability(Config a) const {
    require_valid(space_, a);
    return subset_determinant(weighted_, a);
}

CorrelationOracle::CorrelationOracle(GroundSpace space, std::vector<double> weighted)
    : space_(std::move(space)), weighted_rho_(std::move(weighted)) {
    if (weighted_rho_.size() != (std::size_t{1} << space_.size()))
        throw std::invalid_argument("oracle table must cover all 2^S subsets");
    if (std::abs(weighted_rho_[0] - 1.0) > Tolerances::structural)
        throw std::invalid_argument("rho of the empty set must be 1");
    for (double& v : weighted_rho_) {
        if (v < 0.0) {
            if (v < -Tolerances::law_negativity)
                throw std::invalid_argument("negative intensity value");
            v = 0.0;
        }
    }
    rho_.resize(weighted_rho_.size());
    for (std::uint32_t mask = 0; mask < weighted_rho_.size(); ++mask) {
        const double wp = weight_product(space_, SiteSet::from_mask(mask));
        rho_[mask] = wp > 0.0 ? weighted_rho_[mask] / wp
                              : std::numeric_limits<double>::quiet_NaN();
    }
}

CorrelationOracle CorrelationOracle::from_process(const FiniteProcess& process) {
    const std::size_t n = std::size_t{1} << process.space().size();
    std::vector<double> weighted(n, 0.0);
    // weighted_rho(a) = P(a ⊆ X): superset sums of the law.
    for (std::uint32_t a = 0; a < n; ++a) {
        const std::uint32_t complement = static_cast<std::uint32_t>(n - 1) & ~a;
        double acc = 0.0;
        std::uint32_t t = complement;
        while (true) {
            acc += process.law()[a | t];
            if (t == 0) break;
            t = (t - 1) & complement;
        }
        weighted[a] = acc;
    }
    return CorrelationOracle(process.space(), std::move(weighted));
}

CorrelationOracle CorrelationOracle::from_dpp(const DiscreteDPP& dpp) {
    const std::size_t n = std::size_t{1} << dpp.space().size();
    std::vector<double> weighted(n);
    for (std::uint32_t a = 0; a < n; ++a)
        weighted[a] = subset_determinant(dpp.weighted_kernel(), SiteSet::from_mask(a));
    return CorrelationOracle(dpp.space(), std::move(weighted));
}

double CorrelationOracle::rho(Config a) const {
    require_valid(space_, a);
    const double v = rho_[a.mask()];
    if (std::isnan(v))
        throw std::domain_error("intensity undefined on null atoms");
    return v;
}

double CorrelationOracle::rho_tuple(std::span<const int> x) const {
    std::uint32_t mask = 0;
    for (const int i : x) {
        if (i < 0 || i >= space_.size())
            throw std::out_of_range("tuple index outside the ground space");
        const std::uint32_t bit = std::uint32_t{1} << i;
        if (mask & bit) return 0.0;  // repeated site
        mask |= bit;
    }
    return rho(Config::from_mask(mask));
}

CorrelationOracle correlations_of(const FiniteProcess& process) {
    return CorrelationOracle::from_process(process);
}

double dpp_correlation(const DiscreteDPP& dpp, Config a) {
    require_valid(dpp.space(), a);
    return subset_determinant(dpp.kernel(), a);
}

double correlation_tuple(const CorrelationOracle& oracle, std::span<const int> x) {
    return oracle.rho_tuple(x);
}

FiniteProcess dpp_to_process(const DiscreteDPP& dpp, DppLawPath path) {
    const int s = dpp.space().size();
    const std::size_t n = std::size_t{1} << s;
    std::vector<double> law(n);

    if (path == DppLawPath::mobius) {
        for (std::uint32_t b = 0; b < n; ++b)
            law[b] = subset_determinant(dpp.weighted_kernel(), SiteSet::from_mask(b));
        // In-place superset Moebius inversion:
        // P(X=a) = sum_{b ⊇ a} (-1)^{|b\a|} P(b ⊆ X).
        for (int bit = 0; bit < s; ++bit) {
            const std::uint32_t mask = std::uint32_t{1} << bit;
            for (std::uint32_t a = 0; a < n; ++a)
                if (!(a & mask)) law[a] -= law[a | mask];
        }
    } else {
        if (!dpp.l_ensemble_available())
            throw std::domain_error(
                "L-ensemble path requires all eigenvalues below 1");
        const Eigen::MatrixXd& kw = dpp.weighted_kernel();
        const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(s, s);
        Eigen::MatrixXd l = (identity - kw).ldlt().solve(kw);
        l = ((l + l.transpose()) / 2.0).eval();
        const double det_complement = (identity - kw).partialPivLu().determinant();
        for (std::uint32_t a = 0; a < n; ++a)
            law[a] = det_complement * subset_determinant(l, SiteSet::from_mask(a));
    }

    for (const double p : law)
        if (p < -Tolerances::law_negativity)
            throw std::domain_error("invalid kernel");
    return FiniteProcess(dpp.space(), std::move(law));
}

SetFunction restriction_law(const FiniteProcess& process, Region a) {
    require_valid(process.space(), a);
    SetFunction out = SetFunction::constant(a, 0.0);
    const std::size_t n = std::size_t{1} << process.space().size();
    for (std::uint32_t c = 0; c < n; ++c)
        out.local(out.to_local(Config::from_mask(c & a.mask()))) += process.law()[c];
    return out;
}

SetFunction restriction_law_incl_excl(const FiniteProcess& process, Region a) {
    require_valid(process.space(), a);
    const CorrelationOracle oracle = correlations_of(process);
    // P(X∩A = z) = sum_{z ⊆ b ⊆ A} (-1)^{|b\z|} P(b ⊆ X)
    SetFunction out = SetFunction::constant(a, 0.0);
    const std::uint32_t na = static_cast<std::uint32_t>(out.table_size());
    for (std::uint32_t z = 0; z < na; ++z) {
        const std::uint32_t room = (na - 1) & ~z;
        double acc = 0.0;
        std::uint32_t t = room;
        while (true) {
            const double incl = oracle.weighted_rho(out.to_global(z | t));
            acc += (std::popcount(t) & 1) ? -incl : incl;
            if (t == 0) break;
            t = (t - 1) & room;
        }
        out.local(z) = acc;
    }
    return out;
}

BiSetFunction joint_restriction_law(const FiniteProcess& process, Region a, Region b) {
    require_valid(process.space(), a);
    require_valid(process.space(), b);
    if (a.intersects(b)) throw std::invalid_argument("regions must be disjoint");
    BiSetFunction out = BiSetFunction::constant(a, b, 0.0);
    const std::size_t n = std::size_t{1} << process.space().size();
    for (std::uint32_t c = 0; c < n; ++c) {
        const std::uint32_t la = out.to_local_a(Config::from_mask(c & a.mask()));
        const std::uint32_t lb = out.to_local_b(Config::from_mask(c & b.mask()));
        out.local(la, lb) += process.law()[c];
    }
    return out;
}

double expectation_direct(const FiniteProcess& process, const SetFunction& f) {
    if (f.region() != SiteSet::full(process.space().size()))
        throw std::invalid_argument("f must be defined on subsets of the full space");
    double acc = 0.0;
    const std::size_t n = std::size_t{1} << process.space().size();
    for (std::uint32_t c = 0; c < n; ++c)
        acc += process.law()[c] * f(Config::from_mask(c));
    return acc;
}

double expectation_series(const CorrelationOracle& oracle, const SetFunction& f,
                          Region region) {
    require_valid(oracle.space(), region);
    if (f.region() != region)
        throw std::invalid_argument("f must be defined on subsets of the region");
    const SetFunction diff = lower_difference(f);
    double acc = 0.0;
    const std::uint32_t n = static_cast<std::uint32_t>(diff.table_size());
    for (std::uint32_t z = 0; z < n; ++z)
        acc += diff.local(z) * oracle.weighted_rho(diff.to_global(z));
    return acc;
}

double expectation_series_bi(const CorrelationOracle& oracle_x,
                             const CorrelationOracle& oracle_y,
                             const BiSetFunction& f, Region a, Region b) {
    require_valid(oracle_x.space(), a);
    require_valid(oracle_y.space(), b);
    if (f.region_a() != a || f.region_b() != b)
        throw std::invalid_argument("f must be defined on subsets of (A, B)");
    const BiSetFunction diff = lower_difference_bi(f);
    double acc = 0.0;
    const std::uint32_t na = std::uint32_t{1} << diff.arity_a();
    const std::uint32_t nb = std::uint32_t{1} << diff.arity_b();
    for (std::uint32_t u = 0; u < na; ++u) {
        const double rx = oracle_x.weighted_rho(diff.to_global_a(u));
        if (rx == 0.0) continue;
        for (std::uint32_t v = 0; v < nb; ++v)
            acc += diff.local(u, v) * rx * oracle_y.weighted_rho(diff.to_global_b(v));
    }
    return acc;
}

double principal_minor(const Eigen::MatrixXd& m, int i) {
    if (i < 1 || i > m.rows())
        throw std::out_of_range("principal minor index out of range");
    if (i == 1) return m(0, 0);
    return m.topLeftCorner(i, i).partialPivLu().determinant();
}

std::vector<Config> sample(const FiniteProcess& process, std::uint64_t seed,
                           int count) {
    if (count < 0) throw std::invalid_argument("sample count must be non-negative");
    const std::vector<Config> order =
        enumerate_subsets(process.space(), SiteSet::full(process.space().size()));
    std::vector<double> cdf(order.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        acc += process.prob(order[k]);
        cdf[k] = acc;
    }
    cdf.back() = std::max(cdf.back(), 1.0);  // guard the final bucket

    SplitMix64 rng(seed);
    std::vector<Config> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        out.push_back(order[static_cast<std::size_t>(
            std::min<std::ptrdiff_t>(it - cdf.begin(),
                                     static_cast<std::ptrdiff_t>(order.size()) - 1))]);
    }
    return out;
}

}  // namespace betamix
