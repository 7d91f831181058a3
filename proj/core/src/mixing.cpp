#include "betamix/mixing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace betamix {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_members(const std::vector<int>& members) {
    std::string out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i > 0) out += ';';
        out += std::to_string(members[i]);
    }
    return out;
}

nlohmann::json json_number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

Eigen::MatrixXd tuple_submatrix(const Eigen::MatrixXd& m, std::span<const int> idx) {
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) sub(r, c) = m(idx[r], idx[c]);
    return sub;
}

double tuple_determinant(const Eigen::MatrixXd& m, std::span<const int> idx) {
    if (idx.empty()) return 1.0;
    if (idx.size() == 1) return m(idx[0], idx[0]);
    return tuple_submatrix(m, idx).partialPivLu().determinant();
}

/// Max |Kw_ij| over the sites in play; the discrete stand-in for the
/// kernel's sup norm.
double kernel_sup_on(const Eigen::MatrixXd& kw, SiteSet sites) {
    double sup = 0.0;
    for (const int i : sites.members())
        for (const int j : sites.members()) sup = std::max(sup, std::abs(kw(i, j)));
    return sup;
}

double cross_block_max(const Eigen::MatrixXd& kw, Region a, Region b) {
    double omega = 0.0;
    for (const int i : a.members())
        for (const int j : b.members()) omega = std::max(omega, std::abs(kw(i, j)));
    return omega;
}

double cross_block_l2(const Eigen::MatrixXd& kw, Region a, Region b) {
    double l2 = 0.0;
    for (const int i : a.members())
        for (const int j : b.members()) l2 += kw(i, j) * kw(i, j);
    return l2;
}

void require_disjoint(Region a, Region b) {
    if (a.intersects(b)) throw std::invalid_argument("regions must be disjoint");
}

}  // namespace

nlohmann::json MixingReport::to_json() const {
    nlohmann::json j;
    j["A"] = a_members;
    j["B"] = b_members;
    j["p"] = p;
    j["q"] = q;
    j["r"] = json_number_or_null(r);
    j["beta_exact"] = beta_exact;
    j["alpha_exact"] = alpha_exact ? nlohmann::json(*alpha_exact) : nlohmann::json(nullptr);
    j["bound_theorem1"] = bound_theorem1;
    j["bound_dpp_general"] =
        bound_dpp_general ? nlohmann::json(*bound_dpp_general) : nlohmann::json(nullptr);
    j["bound_dpp_rank"] =
        bound_dpp_rank ? nlohmann::json(*bound_dpp_rank) : nlohmann::json(nullptr);
    j["lower_bound_dpp"] =
        lower_bound_dpp ? nlohmann::json(*lower_bound_dpp) : nlohmann::json(nullptr);
    return j;
}

std::string MixingReport::csv_header() {
    return "A,B,p,q,r,beta_exact,alpha_exact,bound_theorem1,bound_dpp_general,"
           "bound_dpp_rank,lower_bound_dpp";
}

std::string MixingReport::to_csv_row() const {
    const auto opt = [](const std::optional<double>& v) {
        return v ? format_double(*v) : std::string{};
    };
    std::string row = join_members(a_members);
    row += ',';
    row += join_members(b_members);
    row += ',';
    row += format_double(p);
    row += ',';
    row += format_double(q);
    row += ',';
    row += format_double(r);
    row += ',';
    row += format_double(beta_exact);
    row += ',';
    row += opt(alpha_exact);
    row += ',';
    row += format_double(bound_theorem1);
    row += ',';
    row += opt(bound_dpp_general);
    row += ',';
    row += opt(bound_dpp_rank);
    row += ',';
    row += opt(lower_bound_dpp);
    return row;
}

double beta_exact(const FiniteProcess& process, Region a, Region b) {
    require_disjoint(a, b);
    require_valid(process.space(), a);
    require_valid(process.space(), b);
    // An empty window generates the trivial sigma-algebra.
    if (a.empty() || b.empty()) return 0.0;
    const BiSetFunction joint = joint_restriction_law(process, a, b);
    const SetFunction marg_a = restriction_law(process, a);
    const SetFunction marg_b = restriction_law(process, b);
    double total = 0.0;
    const std::uint32_t na = std::uint32_t{1} << joint.arity_a();
    const std::uint32_t nb = std::uint32_t{1} << joint.arity_b();
    for (std::uint32_t ia = 0; ia < na; ++ia)
        for (std::uint32_t ib = 0; ib < nb; ++ib)
            total += std::abs(joint.local(ia, ib) -
                              marg_a.local(ia) * marg_b.local(ib));
    return total / 2.0;
}

double beta_sup_form_check(const FiniteProcess& process, Region a, Region b,
                           const BiSetFunction& f) {
    require_disjoint(a, b);
    if (f.region_a() != a || f.region_b() != b)
        throw std::invalid_argument("f must be defined on subsets of (A, B)");
    if (f.sup_norm() > 1.0 + Tolerances::structural)
        throw std::invalid_argument("test function must have sup norm at most 1");
    const BiSetFunction joint = joint_restriction_law(process, a, b);
    const SetFunction marg_a = restriction_law(process, a);
    const SetFunction marg_b = restriction_law(process, b);
    double coupled = 0.0, independent = 0.0;
    const std::uint32_t na = std::uint32_t{1} << joint.arity_a();
    const std::uint32_t nb = std::uint32_t{1} << joint.arity_b();
    for (std::uint32_t ia = 0; ia < na; ++ia)
        for (std::uint32_t ib = 0; ib < nb; ++ib) {
            coupled += joint.local(ia, ib) * f.local(ia, ib);
            independent += marg_a.local(ia) * marg_b.local(ib) * f.local(ia, ib);
        }
    return std::abs(coupled - independent) / 2.0;
}

double alpha_exact(const FiniteProcess& process, Region a, Region b) {
    require_disjoint(a, b);
    require_valid(process.space(), a);
    require_valid(process.space(), b);
    const int na = 1 << a.size();
    const int nb = 1 << b.size();
    if (na > 8 || nb > 8)
        throw std::domain_error("alpha enumeration cap exceeded");
    if (a.empty() || b.empty()) return 0.0;
    const BiSetFunction joint = joint_restriction_law(process, a, b);
    const SetFunction marg_a = restriction_law(process, a);
    const SetFunction marg_b = restriction_law(process, b);

    // Events of the restriction sigma-algebras are unions of atoms
    // {X∩A = a_i}; enumerate them as masks over atom indices.
    const int events_a = 1 << na;
    const int events_b = 1 << nb;
    std::vector<double> prob_b(static_cast<std::size_t>(events_b), 0.0);
    for (int t = 0; t < events_b; ++t)
        for (int j = 0; j < nb; ++j)
            if ((t >> j) & 1) prob_b[static_cast<std::size_t>(t)] += marg_b.local(j);

    double best = 0.0;
    std::vector<double> row(static_cast<std::size_t>(nb));
    for (int s = 0; s < events_a; ++s) {
        double prob_s = 0.0;
        std::fill(row.begin(), row.end(), 0.0);
        for (int i = 0; i < na; ++i) {
            if (!((s >> i) & 1)) continue;
            prob_s += marg_a.local(i);
            for (int j = 0; j < nb; ++j) row[static_cast<std::size_t>(j)] += joint.local(i, j);
        }
        for (int t = 0; t < events_b; ++t) {
            double joint_st = 0.0;
            for (int j = 0; j < nb; ++j)
                if ((t >> j) & 1) joint_st += row[static_cast<std::size_t>(j)];
            best = std::max(best,
                            std::abs(joint_st - prob_s * prob_b[static_cast<std::size_t>(t)]));
        }
    }
    return best;
}

double theorem1_bound(const CorrelationOracle& oracle, Region a, Region b) {
    require_disjoint(a, b);
    require_valid(oracle.space(), a);
    require_valid(oracle.space(), b);
    double total = 0.0;
    std::uint32_t sa = a.mask();
    while (true) {
        const Config ca = Config::from_mask(sa);
        const double ra = oracle.weighted_rho(ca);
        std::uint32_t sb = b.mask();
        while (true) {
            const Config cb = Config::from_mask(sb);
            const double rb = oracle.weighted_rho(cb);
            const double rab = oracle.weighted_rho(ca.unite(cb));
            total += std::ldexp(std::abs(ra * rb - rab),
                                ca.size() + cb.size());
            if (sb == 0) break;
            sb = (sb - 1) & b.mask();
        }
        if (sa == 0) break;
        sa = (sa - 1) & a.mask();
    }
    return total;
}

DppGeneralBound dpp_bound_general(const DiscreteDPP& dpp, Region a, Region b) {
    require_disjoint(a, b);
    require_valid(dpp.space(), a);
    require_valid(dpp.space(), b);
    const Eigen::MatrixXd& kw = dpp.weighted_kernel();
    DppGeneralBound out;
    out.k_inf = kernel_sup_on(kw, a.unite(b));
    out.omega = cross_block_max(kw, a, b);
    out.l2_cross = cross_block_l2(kw, a, b);
    const double p = measure(dpp.space(), a);
    const double q = measure(dpp.space(), b);
    const double prefactor = 4.0 * (1.0 + 2.0 * p * out.k_inf) *
                             (1.0 + 2.0 * q * out.k_inf) *
                             std::exp(2.0 * (p + q) * out.k_inf);
    out.value = prefactor * out.l2_cross;
    out.display_form = prefactor * p * q * out.omega * out.omega;
    return out;
}

double dpp_bound_rank(const DiscreteDPP& dpp, Region a, Region b) {
    require_disjoint(a, b);
    require_valid(dpp.space(), a);
    require_valid(dpp.space(), b);
    const double p = measure(dpp.space(), a);
    const double q = measure(dpp.space(), b);
    const double omega = cross_block_max(dpp.weighted_kernel(), a, b);
    const int rank = dpp.numerical_rank();
    return 4.0 * p * q * static_cast<double>(rank) * static_cast<double>(rank) *
           std::pow(9.0, rank) * omega * omega;
}

double dpp_lower_bound(const DiscreteDPP& dpp, Region a, Region b) {
    require_disjoint(a, b);
    require_valid(dpp.space(), a);
    require_valid(dpp.space(), b);
    const Eigen::MatrixXd& kw = dpp.weighted_kernel();
    if (kw.size() > 0 && kw.minCoeff() < -Tolerances::structural)
        throw std::domain_error("proposition hypotheses violated");
    const double max_eig = dpp.space().size() > 0 ? dpp.max_eigenvalue() : 0.0;
    if (max_eig > 1.0 - Tolerances::spectral)
        throw std::domain_error("proposition hypotheses violated");
    const double l2 = cross_block_l2(kw, a, b);
    if (l2 == 0.0) return 0.0;
    const double p = measure(dpp.space(), a);
    const double q = measure(dpp.space(), b);
    const double k_inf = kernel_sup_on(kw, a.unite(b));
    return 2.0 * std::pow(1.0 - max_eig, (p + q) * k_inf / max_eig) * l2;
}

DeterminantGap determinant_gap(const Eigen::MatrixXd& kernel,
                               std::span<const int> x, std::span<const int> y) {
    std::uint32_t seen = 0;
    const auto check = [&](std::span<const int> tuple) {
        for (const int i : tuple) {
            if (i < 0 || i >= kernel.rows())
                throw std::out_of_range("tuple index out of range");
            const std::uint32_t bit = std::uint32_t{1} << i;
            if (seen & bit)
                throw std::invalid_argument("tuple entries must be distinct and disjoint");
            seen |= bit;
        }
    };
    check(x);
    check(y);

    const int n = static_cast<int>(x.size());
    const int m = static_cast<int>(y.size());
    std::vector<int> xy(x.begin(), x.end());
    xy.insert(xy.end(), y.begin(), y.end());

    const double det_x = tuple_determinant(kernel, x);
    const double det_y = tuple_determinant(kernel, y);
    const double det_xy = tuple_determinant(kernel, xy);

    DeterminantGap out;
    out.gap = std::abs(det_x * det_y - det_xy);

    double cross_sq = 0.0;
    for (const int i : x)
        for (const int j : y) cross_sq += kernel(i, j) * kernel(i, j);

    if (n == 0 || m == 0) {
        out.bound1 = 0.0;
        out.bound2 = 0.0;
        return out;
    }
    const double k_inf = kernel.cwiseAbs().maxCoeff();
    out.bound1 = static_cast<double>(n) * static_cast<double>(m) *
                 std::pow(k_inf, n + m - 2) * cross_sq;

    // Sum of the leading principal minors of the first 0..n-1 tuple points,
    // with the empty minor counting 1. (Summing 1..n instead yields a
    // refutable inequality: at n = m = 1 it degrades to
    // K_xx K_yy K_xy^2 < K_xy^2 whenever the diagonal is below 1.)
    const Eigen::MatrixXd kx = tuple_submatrix(kernel, x);
    const Eigen::MatrixXd ky = tuple_submatrix(kernel, y);
    double minors_x = 1.0, minors_y = 1.0;
    for (int i = 1; i < n; ++i) minors_x += principal_minor(kx, i);
    for (int j = 1; j < m; ++j) minors_y += principal_minor(ky, j);
    out.bound2 = minors_x * minors_y * cross_sq;
    return out;
}

namespace {

MixingReport report_at(const FiniteProcess& process, const CorrelationOracle& oracle,
                       Region a, Region b) {
    MixingReport rep;
    rep.a_members = a.members();
    rep.b_members = b.members();
    rep.p = measure(process.space(), a);
    rep.q = measure(process.space(), b);
    rep.r = region_distance(process.space(), a, b);
    rep.beta_exact = beta_exact(process, a, b);
    if ((1 << a.size()) <= 8 && (1 << b.size()) <= 8)
        rep.alpha_exact = alpha_exact(process, a, b);
    rep.bound_theorem1 = theorem1_bound(oracle, a, b);
    return rep;
}

void fill_dpp_bounds(MixingReport& rep, const DiscreteDPP& dpp, Region a, Region b) {
    rep.bound_dpp_general = dpp_bound_general(dpp, a, b).value;
    rep.bound_dpp_rank = dpp_bound_rank(dpp, a, b);
    const bool entries_ok = dpp.weighted_kernel().size() == 0 ||
                            dpp.weighted_kernel().minCoeff() >= -Tolerances::structural;
    const bool spectrum_ok = dpp.space().size() == 0 ||
                             dpp.max_eigenvalue() <= 1.0 - Tolerances::spectral;
    if (entries_ok && spectrum_ok)
        rep.lower_bound_dpp = dpp_lower_bound(dpp, a, b);
}

struct SweepArgmax {
    Region a, b;
    double beta = -1.0;
};

SweepArgmax sweep_argmax(const FiniteProcess& process, double p, double q, double r,
                         const SweepOptions& options) {
    if (p < 0.0 || q < 0.0 || r < 0.0)
        throw std::invalid_argument("sweep parameters p, q, r must be non-negative");
    const GroundSpace& space = process.space();
    const std::uint32_t full = SiteSet::full(space.size()).mask();
    SweepArgmax best;
    std::uint64_t pairs = 0;
    for (std::uint32_t am = 0;; ++am) {
        const Region a = Region::from_mask(am);
        if (measure(space, a) <= p) {
            const std::uint32_t room = full & ~am;
            std::uint32_t bm = room;
            while (true) {
                const Region b = Region::from_mask(bm);
                if (measure(space, b) <= q && region_distance(space, a, b) > r) {
                    if (++pairs > options.pair_cap)
                        throw std::runtime_error("sweep enumeration cap exceeded");
                    const double beta = beta_exact(process, a, b);
                    const bool better =
                        beta > best.beta ||
                        (beta == best.beta &&
                         (lex_less(a, best.a) ||
                          (a == best.a && lex_less(b, best.b))));
                    if (better) best = SweepArgmax{a, b, beta};
                }
                if (bm == 0) break;
                bm = (bm - 1) & room;
            }
        }
        if (am == full) break;
    }
    return best;
}

}  // namespace

MixingReport mixing_report(const FiniteProcess& process, Region a, Region b) {
    return report_at(process, correlations_of(process), a, b);
}

MixingReport mixing_report(const DiscreteDPP& dpp, Region a, Region b) {
    const FiniteProcess process = dpp_to_process(dpp);
    MixingReport rep = report_at(process, CorrelationOracle::from_dpp(dpp), a, b);
    fill_dpp_bounds(rep, dpp, a, b);
    return rep;
}

MixingReport beta_pq_r_sweep(const FiniteProcess& process, double p, double q,
                             double r, const SweepOptions& options) {
    const SweepArgmax best = sweep_argmax(process, p, q, r, options);
    return mixing_report(process, best.a, best.b);
}

MixingReport beta_pq_r_sweep(const DiscreteDPP& dpp, double p, double q, double r,
                             const SweepOptions& options) {
    const FiniteProcess process = dpp_to_process(dpp);
    const SweepArgmax best = sweep_argmax(process, p, q, r, options);
    MixingReport rep =
        report_at(process, CorrelationOracle::from_dpp(dpp), best.a, best.b);
    fill_dpp_bounds(rep, dpp, best.a, best.b);
    return rep;
}

}  // namespace betamix
