#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fraclab/fields.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/mc.hpp"

namespace fraclab::funct {

using fields::Field;
using geom::Domain;

// Exponent tuple governing both sides of the weighted inequality.
struct FracParams {
    double s = 0.5;
    double p = 2.0;
    double q = 2.0;
    double a = 0.0;
    double b = 0.0;
    double tau = 0.5;

    void validate() const {
        if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("FracParams: s must lie in (0,1)");
        if (!(p >= 1.0)) throw std::invalid_argument("FracParams: p must be >= 1");
        if (!(q >= p)) throw std::invalid_argument("FracParams: q must be >= p");
        if (!(a >= 0.0)) throw std::invalid_argument("FracParams: a must be >= 0");
        if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("FracParams: tau must lie in (0,1)");
    }
};

struct UndefinedQuotient : std::runtime_error {
    explicit UndefinedQuotient(const std::string& msg) : std::runtime_error(msg) {}
};

struct LqNormResult {
    double c_star = 0.0;
    mc::Estimate estimate;
};

// inf_c || f - c ||_{L^q(Omega, d^a)} together with the minimizing constant.
// Closed forms for q = 2 (d^a-weighted mean) and q = 1 (d^a-weighted median);
// golden-section search on [min f, max f] otherwise.
LqNormResult inf_lq_norm(const Field& f, const Domain& dom, double q, double a,
                         const mc::McConfig& cfg);

// Restricted weighted seminorm: the double integral over
// Omega x {|x-z| <= tau d(x)} of |f(z)-f(x)|^p |z-x|^{-n-sp} delta(x,z)^b,
// raised to 1/p. Inner points are drawn radially with a power-law density.
mc::Estimate frac_seminorm_restricted(const Field& f, const Domain& dom, const FracParams& params,
                                      const mc::McConfig& cfg);

// Full seminorm over Omega x Omega (no distance weight), raised to 1/p.
mc::Estimate frac_seminorm_full(const Field& f, const Domain& dom, double s, double p,
                                const mc::McConfig& cfg);

// Local seminorm density h(x) = (int_{|x-w| <= d(x)/2} ...)^{1/p}.
mc::Estimate local_h(const Field& f, const Domain& dom, std::span<const double> x, double s,
                     double p, const mc::McConfig& cfg);

// int_{|y-x| <= c1 d(x)} h(x) |x-y|^{-(n-s)} dx with nested estimation of h.
mc::Estimate representation_rhs(const Field& f, const Domain& dom, std::span<const double> y,
                                double s, double p, double c1, const mc::McConfig& cfg);

struct QuotientResult {
    mc::Estimate quotient;
    LqNormResult numerator;
    mc::Estimate denominator;
};

// inf_lq_norm / frac_seminorm_restricted with errors combined in quadrature.
// Throws UndefinedQuotient when the seminorm vanishes (constant fields).
QuotientResult poincare_quotient(const Field& f, const Domain& dom, const FracParams& params,
                                 const mc::McConfig& cfg);

// Deterministic tensor-grid midpoint evaluation of the seminorm on the unit
// square. The diagonal (self-cell) contribution is excluded and bounded
// analytically through the field's Lipschitz constant, giving a bracketing
// interval [lower, upper] for the exact value.
struct GridOracleResult {
    double lower = 0.0;
    double upper = 0.0;
    int nodes_per_axis = 0;
    double lipschitz = 0.0;
};

GridOracleResult grid_oracle_seminorm(const Field& f, const FracParams& params, int nodes_per_axis,
                                      bool full_variant = false, int workers = 0);

// Truncated power integrals over the cusp slab {lo < x_n <= hi}, used by the
// divergence studies. Both return the integral itself (not rooted).
mc::Estimate truncated_lq_power(const Field& f, const Domain& cusp, double q, double a, double lo,
                                double hi, const mc::McConfig& cfg);
mc::Estimate truncated_seminorm_power(const Field& f, const Domain& cusp, double s, double p,
                                      double b, double tau, double lo, double hi,
                                      const mc::McConfig& cfg);

// delta(x,z) = min{d(x), d(z)}
inline double boundary_delta(double dx, double dz) { return dx < dz ? dx : dz; }

namespace detail {
// Weighted inf-over-c helpers, exposed for direct testing.
double weighted_mean(std::span<const double> f, std::span<const double> w);
double weighted_median(std::span<const double> f, std::span<const double> w);
double lq_objective(std::span<const double> f, std::span<const double> w, double q, double c);
double golden_min_c(std::span<const double> f, std::span<const double> w, double q, double lo,
                    double hi, double tol);
} // namespace detail

} // namespace fraclab::funct
