#include "betamix/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace betamix {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kBesselPeriod = 2.0 * kPi;
constexpr int kBesselGridPerPeriod = 4096;
constexpr int kBesselWindowPeriods = 10;

bool is_half_integer_order(double nu) {
    return nu == 0.5 || nu == 1.5 || nu == 2.5;
}

double matern_profile(double u, double nu) {
    if (nu == 0.5) return std::exp(-u);
    if (nu == 1.5) {
        const double t = std::sqrt(3.0) * u;
        return (1.0 + t) * std::exp(-t);
    }
    const double t = std::sqrt(5.0) * u;
    return (1.0 + t + t * t / 3.0) * std::exp(-t);
}

/// Normalized J_nu(u)/u^nu profiles, value 1 at u = 0.
double bessel_profile(double u, double nu) {
    if (nu == 0.5) {
        if (u < 1e-6) return 1.0 - u * u / 6.0;
        return std::sin(u) / u;
    }
    if (nu == 1.5) {
        if (u < 1e-4) return 1.0 - u * u / 10.0;
        return 3.0 * (std::sin(u) / u - std::cos(u)) / (u * u);
    }
    if (u < 1e-3) return 1.0 - u * u / 14.0;
    return 15.0 * ((3.0 - u * u) * std::sin(u) / u - 3.0 * std::cos(u)) /
           (u * u * u * u);
}

}  // namespace

std::string to_string(DecayClass c) {
    switch (c) {
        case DecayClass::exponential: return "exponential";
        case DecayClass::polynomial_d: return "polynomial_d";
        case DecayClass::polynomial_half: return "polynomial_half";
    }
    return "unknown";
}

std::string to_string(KernelFamily f) {
    switch (f) {
        case KernelFamily::gaussian: return "gaussian";
        case KernelFamily::whittle_matern: return "whittle-matern";
        case KernelFamily::cauchy: return "cauchy";
        case KernelFamily::bessel: return "bessel";
        case KernelFamily::ginibre_modulus: return "ginibre-modulus";
    }
    return "unknown";
}

IsotropicKernel::IsotropicKernel(KernelFamily family, double rho0, double alpha0,
                                 double nu, int dimension)
    : family_(family), rho0_(rho0), alpha0_(alpha0), nu_(nu), dim_(dimension) {
    if (!(rho0_ > 0.0)) throw std::invalid_argument("intensity rho must be positive");
    if (!(alpha0_ > 0.0)) throw std::invalid_argument("scale alpha must be positive");
    if (dim_ < 1) throw std::invalid_argument("dimension must be positive");
    switch (family_) {
        case KernelFamily::whittle_matern:
            if (!is_half_integer_order(nu_))
                throw std::invalid_argument(
                    "whittle-matern requires nu in {0.5, 1.5, 2.5}");
            break;
        case KernelFamily::bessel:
            if (dim_ != 1)
                throw std::invalid_argument("bessel family is restricted to d = 1");
            if (!is_half_integer_order(nu_))
                throw std::invalid_argument("bessel requires nu in {0.5, 1.5, 2.5}");
            break;
        case KernelFamily::cauchy:
            if (!(nu_ > 0.0)) throw std::invalid_argument("cauchy requires nu > 0");
            break;
        case KernelFamily::gaussian:
        case KernelFamily::ginibre_modulus:
            break;
    }
}

double IsotropicKernel::eval(double s) const {
    if (s < 0.0) throw std::invalid_argument("separation must be non-negative");
    const double u = s / alpha0_;
    switch (family_) {
        case KernelFamily::gaussian: return rho0_ * std::exp(-u * u);
        case KernelFamily::whittle_matern: return rho0_ * matern_profile(u, nu_);
        case KernelFamily::cauchy:
            return rho0_ * std::pow(1.0 + u * u, -nu_ - dim_ / 2.0);
        case KernelFamily::bessel: return rho0_ * bessel_profile(u, nu_);
        case KernelFamily::ginibre_modulus: return rho0_ * std::exp(-u * u / 2.0);
    }
    return 0.0;
}

double IsotropicKernel::bessel_envelope(double u) const {
    // Crude monotone majorants of |profile| for u > 0, capped at 1.
    double env;
    if (nu_ == 0.5)
        env = 1.0 / u;
    else if (nu_ == 1.5)
        env = 3.0 * (1.0 + u) / (u * u * u);
    else
        env = 15.0 * (3.0 + 3.0 * u + u * u) / (u * u * u * u * u);
    return rho0_ * std::min(1.0, env);
}

double IsotropicKernel::omega(double r) const {
    if (r < 0.0) throw std::invalid_argument("separation must be non-negative");
    if (family_ != KernelFamily::bessel) return std::abs(eval(r));

    // Oscillatory family: max of |k| over a globally aligned grid spanning
    // ten periods, with the monotone envelope covering the tail. The window
    // start snaps down to the grid so the evaluated point set shrinks as r
    // grows, making the result non-increasing by construction. The grid
    // resolves the oscillation to ~3e-7 relative (half-step phase error
    // squared), which is the documented accuracy of this omega.
    const double u_lo = r / alpha0_;
    const double u_hi = u_lo + kBesselWindowPeriods * kBesselPeriod;
    const double step = kBesselPeriod / kBesselGridPerPeriod;
    const long first = static_cast<long>(std::floor(u_lo / step));
    const long last = static_cast<long>(std::floor(u_hi / step));
    double best = 0.0;
    for (long i = first; i <= last; ++i) {
        const double v =
            rho0_ * std::abs(bessel_profile(static_cast<double>(i) * step, nu_));
        best = std::max(best, v);
    }
    return std::max(best, bessel_envelope(u_hi));
}

DecayClass IsotropicKernel::decay_class() const {
    switch (family_) {
        case KernelFamily::gaussian:
        case KernelFamily::ginibre_modulus: return DecayClass::exponential;
        case KernelFamily::whittle_matern:
        case KernelFamily::cauchy: return DecayClass::polynomial_d;
        case KernelFamily::bessel: return DecayClass::polynomial_half;
    }
    return DecayClass::exponential;
}

IsotropicKernel IsotropicKernel::parse_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);

    KernelFamily family;
    double nu;
    if (name == "gaussian") {
        family = KernelFamily::gaussian;
        nu = 0.0;
    } else if (name == "whittle-matern") {
        family = KernelFamily::whittle_matern;
        nu = 0.5;
    } else if (name == "cauchy") {
        family = KernelFamily::cauchy;
        nu = 1.0;
    } else if (name == "bessel") {
        family = KernelFamily::bessel;
        nu = 1.5;
    } else if (name == "ginibre-modulus") {
        family = KernelFamily::ginibre_modulus;
        nu = 0.0;
    } else {
        throw std::invalid_argument("unknown kernel family '" + name + "'");
    }

    double rho = 1.0, alpha = 1.0;
    int dim = 1;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t end = rest.find(',', pos);
            if (end == std::string::npos) end = rest.size();
            const std::string item = rest.substr(pos, end - pos);
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("bad kernel spec item '" + item + "'");
            const std::string key = item.substr(0, eq);
            const std::string value = item.substr(eq + 1);
            std::size_t parsed = 0;
            const double v = std::stod(value, &parsed);
            if (parsed != value.size())
                throw std::invalid_argument("bad numeric value '" + value + "'");
            if (key == "rho") rho = v;
            else if (key == "alpha") alpha = v;
            else if (key == "nu") nu = v;
            else if (key == "d") dim = static_cast<int>(v);
            else throw std::invalid_argument("unknown kernel spec key '" + key + "'");
            pos = end + 1;
        }
    }
    return IsotropicKernel(family, rho, alpha, nu, dim);
}

std::string IsotropicKernel::spec_string() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s:rho=%g,alpha=%g,nu=%g,d=%d",
                  to_string(family_).c_str(), rho0_, alpha0_, nu_, dim_);
    return buf;
}

void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    if (order < 1) throw std::invalid_argument("quadrature order must be positive");
    nodes.assign(static_cast<std::size_t>(order), 0.0);
    weights.assign(static_cast<std::size_t>(order), 0.0);
    const int mid = (order + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        // Chebyshev initial guess, then Newton on P_order.
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(order - 1 - i)] = w;
    }
}

namespace {

struct TensorGrid {
    std::vector<std::vector<double>> points;  // flattened grid points
    std::vector<double> weights;
};

TensorGrid tensor_grid(const Box& box, int dim, int order) {
    if (static_cast<int>(box.lower.size()) != dim ||
        static_cast<int>(box.upper.size()) != dim)
        throw std::invalid_argument("box dimension mismatch");
    for (int k = 0; k < dim; ++k)
        if (box.lower[static_cast<std::size_t>(k)] > box.upper[static_cast<std::size_t>(k)])
            throw std::invalid_argument("box bounds must satisfy lower <= upper");

    std::vector<double> nodes, weights;
    gauss_legendre(order, nodes, weights);

    double total_d = 1.0;
    for (int k = 0; k < dim; ++k) total_d *= order;
    if (total_d > 1e8) throw std::invalid_argument("quadrature grid too large");
    const std::size_t total = static_cast<std::size_t>(total_d);

    TensorGrid grid;
    grid.points.assign(total, std::vector<double>(static_cast<std::size_t>(dim)));
    grid.weights.assign(total, 1.0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int k = 0; k < dim; ++k) {
            const std::size_t node = rem % static_cast<std::size_t>(order);
            rem /= static_cast<std::size_t>(order);
            const double lo = box.lower[static_cast<std::size_t>(k)];
            const double hi = box.upper[static_cast<std::size_t>(k)];
            grid.points[flat][static_cast<std::size_t>(k)] =
                0.5 * (hi - lo) * nodes[node] + 0.5 * (hi + lo);
            grid.weights[flat] *= 0.5 * (hi - lo) * weights[node];
        }
    }
    return grid;
}

}  // namespace

double l2_cross_mass(const IsotropicKernel& kernel, const Box& a, const Box& b,
                     int order) {
    if (order < 2) throw std::invalid_argument("quadrature order must be at least 2");
    const int dim = kernel.dimension();
    const TensorGrid ga = tensor_grid(a, dim, order);
    const TensorGrid gb = tensor_grid(b, dim, order);

    double total = 0.0;
    for (std::size_t i = 0; i < ga.points.size(); ++i) {
        for (std::size_t j = 0; j < gb.points.size(); ++j) {
            double sq = 0.0;
            for (int k = 0; k < dim; ++k) {
                const double d = ga.points[i][static_cast<std::size_t>(k)] -
                                 gb.points[j][static_cast<std::size_t>(k)];
                sq += d * d;
            }
            const double v = kernel.eval(std::sqrt(sq));
            total += ga.weights[i] * gb.weights[j] * v * v;
        }
    }
    return std::max(total, 0.0);
}

std::vector<BoundCurveRow> bound_curve(const IsotropicKernel& kernel, double p,
                                       double q, std::span<const double> r_grid) {
    if (!(p > 0.0) || !(q > 0.0))
        throw std::invalid_argument("window measures p, q must be positive");
    if (r_grid.empty()) throw std::invalid_argument("r grid must be non-empty");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (r_grid[i] < r_grid[i - 1])
            throw std::invalid_argument("r grid must be sorted ascending");

    const double k0 = kernel.sup_value();
    const double prefactor = 4.0 * p * q * (1.0 + 2.0 * p * k0) *
                             (1.0 + 2.0 * q * k0) * std::exp(2.0 * (p + q) * k0);
    std::vector<BoundCurveRow> rows;
    rows.reserve(r_grid.size());
    for (const double r : r_grid) {
        BoundCurveRow row;
        row.r = r;
        row.omega = kernel.omega(r);
        row.bound_general = prefactor * row.omega * row.omega;
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> log_space(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("log_space needs 0 < lo < hi and n >= 2");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double ratio = hi / lo;
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
    return out;
}

DecayCheckResult decay_check(const IsotropicKernel& kernel, double r_lo,
                             double r_hi, int samples) {
    DecayCheckResult result;
    if (kernel.decay_class() == DecayClass::exponential) {
        // log omega + c u^kappa should be flat (= log rho0). The residual is
        // sampled a decade below the polynomial range: past u ~ 27 the
        // gaussian tail underflows double precision entirely.
        const double c = kernel.family() == KernelFamily::ginibre_modulus ? 0.5 : 1.0;
        const std::vector<double> rs = log_space(r_lo / 10.0, r_hi / 10.0, samples);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const double r : rs) {
            const double u = r / kernel.alpha0();
            const double residual =
                std::log(kernel.omega(r)) - std::log(kernel.rho0()) + c * u * u;
            lo = std::min(lo, residual);
            hi = std::max(hi, residual);
        }
        result.margin = hi - lo;
        result.consistent = result.margin <= 1e-9;
        return result;
    }
    const std::vector<double> rs = log_space(r_lo, r_hi, samples);
    const double exponent = kernel.decay_class() == DecayClass::polynomial_d
                                ? static_cast<double>(kernel.dimension())
                                : (kernel.dimension() + 1) / 2.0;
    double min_step = std::numeric_limits<double>::infinity();
    double prev = kernel.omega(rs[0]) * std::pow(rs[0], exponent);
    for (std::size_t i = 1; i < rs.size(); ++i) {
        const double cur = kernel.omega(rs[i]) * std::pow(rs[i], exponent);
        min_step = std::min(min_step, (prev - cur) / prev);
        prev = cur;
    }
    result.margin = min_step;
    result.consistent = min_step > 0.0;
    return result;
}

}  // namespace betamix
