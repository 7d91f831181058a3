#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace betamix {

enum class KernelFamily {
    gaussian,
    whittle_matern,
    cauchy,
    bessel,
    ginibre_modulus,
};

enum class DecayClass {
    exponential,      // omega decays like exp(-c r^kappa)
    polynomial_d,     // omega = o(r^-d)
    polynomial_half,  // omega = o(r^-(d+1)/2)
};

std::string to_string(DecayClass c);
std::string to_string(KernelFamily f);

/// Translation-invariant kernel k(s) of an isotropic DPP family, with
/// u = s / alpha0:
///
///   gaussian         rho0 exp(-u^2)
///   whittle-matern   nu = 1/2: rho0 exp(-u)
///                    nu = 3/2: rho0 (1 + sqrt3 u) exp(-sqrt3 u)
///                    nu = 5/2: rho0 (1 + sqrt5 u + 5u^2/3) exp(-sqrt5 u)
///   cauchy           rho0 (1 + u^2)^-(nu + d/2)
///   bessel (d = 1)   half-integer Bessel-J members J_nu(u)/u^nu, normalized:
///                    nu = 1/2: rho0 sin(u)/u
///                    nu = 3/2: 3 rho0 (sin(u)/u - cos(u))/u^2   (default)
///                    nu = 5/2: 15 rho0 ((3-u^2) sin(u)/u - 3 cos(u))/u^4
///   ginibre-modulus  rho0 exp(-u^2/2)
///
/// Every family satisfies k(0) = rho0, which doubles as the kernel sup norm
/// for the bound curves. The bessel default is the nu = 3/2 member: its
/// tail decays like u^-2, strictly faster than r^-(d+1)/2 in d = 1, whereas
/// the nu = 1/2 member sits exactly on the r^-(d+1)/2 boundary.
///
/// No admissibility (spectral) validation is attempted for these continuous
/// families; bounds are computed for whatever parameters are supplied.
class IsotropicKernel {
public:
    IsotropicKernel(KernelFamily family, double rho0, double alpha0, double nu,
                    int dimension);

    /// Parse a CLI spec string "family:key=value,key=value" with keys
    /// rho, alpha, nu, d; e.g. "gaussian:rho=1.0,alpha=1.0,d=2".
    static IsotropicKernel parse_spec(const std::string& spec);

    KernelFamily family() const { return family_; }
    double rho0() const { return rho0_; }
    double alpha0() const { return alpha0_; }
    double nu() const { return nu_; }
    int dimension() const { return dim_; }

    /// k(s) for separation s >= 0.
    double eval(double s) const;

    /// Tail function omega(r) = sup_{s >= r} |k(s)|. Monotone families
    /// evaluate as |k(r)|; the oscillatory bessel family takes the max of
    /// |k| over a globally aligned grid spanning ten periods past r (4096
    /// points per period) combined with the documented monotone envelope
    /// beyond the grid, so the result is non-increasing in r.
    double omega(double r) const;

    DecayClass decay_class() const;

    /// k(0) = rho0; stands in for the kernel sup norm.
    double sup_value() const { return rho0_; }

    std::string spec_string() const;

private:
    double bessel_envelope(double u) const;

    KernelFamily family_;
    double rho0_;
    double alpha0_;
    double nu_;
    int dim_;
};

/// Axis-aligned integration window.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Integral of k(|x - y|)^2 over A x B by tensor-product Gauss-Legendre
/// quadrature with `order` nodes per dimension (2d dimensions total).
double l2_cross_mass(const IsotropicKernel& kernel, const Box& a, const Box& b,
                     int order = 32);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights);

struct BoundCurveRow {
    double r = 0.0;
    double omega = 0.0;
    double bound_general = 0.0;
    std::optional<double> bound_rank;  // reserved for finite-rank spectra
};

/// Closed-form bound curve over a sorted grid of separations:
/// bound_general(r) = 4pq (1+2p k0)(1+2q k0) e^{2(p+q) k0} omega(r)^2
/// with k0 = k(0). None of the built-in families is finite-rank, so the
/// rank column stays empty.
std::vector<BoundCurveRow> bound_curve(const IsotropicKernel& kernel, double p,
                                       double q, std::span<const double> r_grid);

/// n log-spaced points on [lo, hi], endpoints included.
std::vector<double> log_space(double lo, double hi, int n);

struct DecayCheckResult {
    bool consistent = false;
    /// Exponential class: max deviation of log omega + c u^kappa from
    /// log rho0 (bounded-residual check). Polynomial classes: the minimum
    /// relative step decrease of omega(r) r^e over the sample grid
    /// (negative when some step increases).
    double margin = 0.0;
};

/// Desk-scale numeric surrogate of the family's decay classification:
/// checks the class template against sampled omega values on a log grid
/// (default 8 points over [5, 50] for the polynomial classes; the
/// exponential residual samples [r_lo/10, r_hi/10] since the gaussian tail
/// underflows past u ~ 27).
DecayCheckResult decay_check(const IsotropicKernel& kernel, double r_lo = 5.0,
                             double r_hi = 50.0, int samples = 8);

}  // namespace betamix
