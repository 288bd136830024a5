#include "fraclab/functionals.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <thread>

#include "fraclab/numeric.hpp"

namespace fraclab::funct {

namespace {

constexpr std::int64_t kMaxTriesPerPoint = 4'000'000;

// Outer integration region: the whole domain or a slab of it.
struct OuterRegion {
    const Domain* dom;
    const geom::BBox* box;
    double measure;
    double band_lo = -1.0, band_hi = -1.0; // active when band_hi > 0

    bool inside(std::span<const double> x) const {
        if (band_hi > 0.0) {
            const double t = x[x.size() - 1];
            if (!(t > band_lo && t <= band_hi)) return false;
        }
        return dom->contains(x);
    }
};

void sample_in_region(const OuterRegion& reg, mc::RngStream& rng, std::span<double> x) {
    const auto& lo = reg.box->lo;
    const auto& hi = reg.box->hi;
    for (std::int64_t tries = 0; tries < kMaxTriesPerPoint; ++tries) {
        for (std::size_t k = 0; k < x.size(); ++k) x[k] = lo[k] + (hi[k] - lo[k]) * rng.u01();
        if (reg.inside(x)) return;
    }
    throw std::runtime_error("monte carlo sampler: acceptance rate below floor for " +
                             reg.dom->describe());
}

mc::Estimate finalize_power_estimate(const mc::MeanStats& stats, double measure, double root_p) {
    mc::Estimate est;
    const double integral = measure * stats.mean;
    const double se = measure * stats.se;
    est.n_effective = stats.n;
    est.flags.divergent = stats.divergent;
    est.flags.clamped_fraction = stats.clamped_fraction;
    est.flags.core_bound = measure * stats.aux_mean;
    if (root_p == 1.0) {
        est.value = integral;
        est.std_error = se;
    } else if (integral > 0.0) {
        est.value = std::pow(integral, 1.0 / root_p);
        est.std_error = se / root_p * std::pow(integral, 1.0 / root_p - 1.0);
    } else {
        est.value = 0.0;
        est.std_error = 0.0;
    }
    return est;
}

struct SeminormSpec {
    double s, p, b = 0.0, tau = 0.5;
    bool full = false; // R = diam(Omega), no delta weight
};

// root: 1/root is applied to the integral (pass p for the seminorm itself,
// 1.0 for the raw power integral).
mc::Estimate seminorm_impl(const Field& f, const Domain& dom, const SeminormSpec& sp,
                           const OuterRegion& region, const mc::McConfig& cfg,
                           std::string_view path, double root) {
    const int n = dom.dim();
    const double gamma = sp.p * (1.0 - sp.s);
    const PowFn pow_gamma(gamma);
    const PowFn pow_inv_gamma(1.0 / gamma);
    const PowFn pow_dfp(sp.p / 2.0);      // applied to (f(z)-f(x))^2
    const PowFn pow_rinv(-sp.p / 2.0);    // applied to r^2
    const PowFn pow_b(sp.b);
    const double sigma = geom::sphere_surface_area(n);
    const double diam = dom.diameter();
    const bool use_delta = !sp.full && sp.b != 0.0;
    const auto lip = f.lipschitz_bound();
    const double lip_p = lip ? std::pow(*lip, sp.p) : 0.0;

    auto body = [&](std::int64_t, std::int64_t count, mc::RngStream& rng, mc::ChunkAccum& acc) {
        std::vector<double> x(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n)),
            omega(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < count; ++i) {
            sample_in_region(region, rng, x);
            double d = 0.0, R;
            if (sp.full) {
                R = diam;
            } else {
                d = dom.dist_boundary(x);
                R = sp.tau * d;
            }
            const double rmin = cfg.r_min_rel * R;
            const double Rg = pow_gamma(R);
            const double rming = pow_gamma(rmin);
            const double rg = rming + rng.u01() * (Rg - rming);
            const double r = pow_inv_gamma(rg);
            rng.unit_vector(omega);
            for (std::size_t k = 0; k < x.size(); ++k) z[k] = x[k] + r * omega[k];

            double w = 0.0;
            if (dom.contains(z)) {
                const double df = f.eval(z) - f.eval(x);
                if (!std::isfinite(df)) throw std::domain_error("seminorm: non-finite field value");
                w = sigma * (Rg - rming) / gamma * pow_dfp(df * df) * pow_rinv(r * r);
                if (use_delta) {
                    const double dz = dom.dist_boundary(z);
                    double delta = boundary_delta(d, dz);
                    if (sp.b < 0.0 && delta < rmin) {
                        delta = rmin;
                        ++acc.clamped;
                    }
                    w *= pow_b(delta);
                }
            }
            acc.add(w);
            if (lip) {
                // Analytic bound on the excised core r < rmin for Lipschitz f.
                double bfac = 1.0;
                if (use_delta) bfac = sp.b >= 0.0 ? pow_b(d) : pow_b(std::max(d - rmin, 1e-300));
                acc.aux += sigma * lip_p * bfac * rming / gamma;
            }
        }
    };

    const auto stats =
        mc::chunked_mean(cfg.n_pairs, cfg, mc::split_seed(cfg.seed, path), body);
    return finalize_power_estimate(stats, region.measure, root);
}

} // namespace

// ---------------------------------------------------------------------------
// inf_lq_norm
// ---------------------------------------------------------------------------

namespace detail {

double weighted_mean(std::span<const double> f, std::span<const double> w) {
    double num = 0.0, den = 0.0;
    if (w.empty()) {
        for (double v : f) num += v;
        return num / static_cast<double>(f.size());
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        num += w[i] * f[i];
        den += w[i];
    }
    return den > 0.0 ? num / den : 0.0;
}

double weighted_median(std::span<const double> f, std::span<const double> w) {
    std::vector<std::size_t> idx(f.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return f[i] < f[j]; });
    double total = 0.0;
    if (w.empty())
        total = static_cast<double>(f.size());
    else
        for (double v : w) total += v;
    double cum = 0.0;
    for (std::size_t k : idx) {
        cum += w.empty() ? 1.0 : w[k];
        if (cum >= 0.5 * total) return f[k];
    }
    return f.empty() ? 0.0 : f[idx.back()];
}

double lq_objective(std::span<const double> f, std::span<const double> w, double q, double c) {
    const PowFn pq(q);
    double acc = 0.0;
    if (w.empty()) {
        for (double v : f) acc += pq(std::abs(v - c));
    } else {
        for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * pq(std::abs(f[i] - c));
    }
    return acc;
}

double golden_min_c(std::span<const double> f, std::span<const double> w, double q, double lo,
                    double hi, double tol) {
    // The objective is a norm of an affine family in c, hence convex;
    // golden-section bracketing is exact up to the tolerance.
    constexpr double invphi = 0.6180339887498948482;
    if (!(hi > lo)) return lo;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = lq_objective(f, w, q, x1);
    double f2 = lq_objective(f, w, q, x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = lq_objective(f, w, q, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = lq_objective(f, w, q, x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

LqNormResult inf_lq_norm(const Field& f, const Domain& dom, double q, double a,
                         const mc::McConfig& cfg) {
    if (!(q >= 1.0)) throw std::invalid_argument("inf_lq_norm: q must be >= 1");
    if (!(a >= 0.0)) throw std::invalid_argument("inf_lq_norm: a must be >= 0");
    cfg.validate();
    const std::int64_t n_samples = cfg.n_pairs;
    const int n = dom.dim();
    const bool weighted = a != 0.0;
    const PowFn pow_a(a);

    std::vector<double> fv(static_cast<std::size_t>(n_samples));
    std::vector<double> wv(weighted ? static_cast<std::size_t>(n_samples) : 0);
    OuterRegion region{&dom, &dom.bounding_box(), dom.measure()};

    auto body = [&](std::int64_t ci, std::int64_t count, mc::RngStream& rng, mc::ChunkAccum& acc) {
        std::vector<double> x(static_cast<std::size_t>(n));
        const std::int64_t first = ci * cfg.chunk;
        for (std::int64_t i = 0; i < count; ++i) {
            sample_in_region(region, rng, x);
            const double v = f.eval(x);
            if (!std::isfinite(v)) throw std::domain_error("inf_lq_norm: non-finite field value");
            fv[static_cast<std::size_t>(first + i)] = v;
            if (weighted)
                wv[static_cast<std::size_t>(first + i)] = pow_a(dom.dist_boundary(x));
            acc.add(0.0);
        }
    };
    mc::chunked_mean(n_samples, cfg, mc::split_seed(cfg.seed, "inf_lq_norm"), body);
    if (fv.empty()) throw std::runtime_error("inf_lq_norm: empty sample set");

    const auto [mn_it, mx_it] = std::minmax_element(fv.begin(), fv.end());
    const double fmin = *mn_it, fmax = *mx_it;
    double c_star;
    if (fmax == fmin) {
        c_star = fmin;
    } else if (q == 2.0) {
        c_star = detail::weighted_mean(fv, wv);
    } else if (q == 1.0) {
        c_star = detail::weighted_median(fv, wv);
    } else {
        c_star = detail::golden_min_c(fv, wv, q, fmin, fmax, 1e-8 * (fmax - fmin));
    }

    const PowFn pq(q);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        const double y = pq(std::abs(fv[i] - c_star)) * (weighted ? wv[i] : 1.0);
        sum += y;
        sumsq += y * y;
    }
    const double nn = static_cast<double>(fv.size());
    mc::MeanStats stats;
    stats.mean = sum / nn;
    stats.n = static_cast<std::int64_t>(fv.size());
    if (fv.size() > 1) {
        const double var = std::max(0.0, (sumsq - sum * stats.mean) / (nn - 1.0));
        stats.se = std::sqrt(var / nn);
    }
    LqNormResult out;
    out.c_star = c_star;
    out.estimate = finalize_power_estimate(stats, dom.measure(), q);
    return out;
}

// ---------------------------------------------------------------------------
// Seminorms
// ---------------------------------------------------------------------------

mc::Estimate frac_seminorm_restricted(const Field& f, const Domain& dom, const FracParams& params,
                                      const mc::McConfig& cfg) {
    params.validate();
    cfg.validate();
    SeminormSpec sp{params.s, params.p, params.b, params.tau, false};
    OuterRegion region{&dom, &dom.bounding_box(), dom.measure()};
    return seminorm_impl(f, dom, sp, region, cfg, "seminorm", params.p);
}

mc::Estimate frac_seminorm_full(const Field& f, const Domain& dom, double s, double p,
                                const mc::McConfig& cfg) {
    FracParams pr;
    pr.s = s;
    pr.p = p;
    pr.q = p;
    pr.validate();
    cfg.validate();
    SeminormSpec sp{s, p, 0.0, 0.5, true};
    OuterRegion region{&dom, &dom.bounding_box(), dom.measure()};
    return seminorm_impl(f, dom, sp, region, cfg, "seminorm", p);
}

mc::Estimate local_h(const Field& f, const Domain& dom, std::span<const double> x, double s,
                     double p, const mc::McConfig& cfg) {
    if (!(s > 0.0 && s < 1.0) || !(p >= 1.0)) throw std::invalid_argument("local_h: bad (s,p)");
    cfg.validate();
    const int n = dom.dim();
    const double d = dom.dist_boundary(x); // throws when x is not interior
    const double R = 0.5 * d;
    const double rmin = cfg.r_min_rel * R;
    const double gamma = p * (1.0 - s);
    const PowFn pow_gamma(gamma);
    const PowFn pow_inv_gamma(1.0 / gamma);
    const PowFn pow_dfp(p / 2.0);
    const PowFn pow_rinv(-p / 2.0);
    const double sigma = geom::sphere_surface_area(n);
    const double Rg = pow_gamma(R);
    const double rming = pow_gamma(rmin);
    const double fx = f.eval(x);
    std::vector<double> base(x.begin(), x.end());

    auto body = [&](std::int64_t, std::int64_t count, mc::RngStream& rng, mc::ChunkAccum& acc) {
        std::vector<double> z(static_cast<std::size_t>(n)), omega(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < count; ++i) {
            const double rg = rming + rng.u01() * (Rg - rming);
            const double r = pow_inv_gamma(rg);
            rng.unit_vector(omega);
            for (std::size_t k = 0; k < base.size(); ++k) z[k] = base[k] + r * omega[k];
            // |x-w| <= d(x)/2 keeps w inside Omega; checked all the same
            double w = 0.0;
            if (dom.contains(z)) {
                const double df = f.eval(z) - fx;
                w = sigma * (Rg - rming) / gamma * pow_dfp(df * df) * pow_rinv(r * r);
            }
            acc.add(w);
        }
    };
    const auto stats = mc::chunked_mean(cfg.n_pairs, cfg, mc::split_seed(cfg.seed, "local_h"), body);
    return finalize_power_estimate(stats, 1.0, p);
}

mc::Estimate representation_rhs(const Field& f, const Domain& dom, std::span<const double> y,
                                double s, double p, double c1, const mc::McConfig& cfg) {
    if (!(c1 > 0.0)) throw std::invalid_argument("representation_rhs: c1 must be positive");
    if (!(s > 0.0 && s < 1.0) || !(p >= 1.0))
        throw std::invalid_argument("representation_rhs: bad (s,p)");
    cfg.validate();
    if (!dom.contains(y)) throw std::domain_error("representation_rhs: y is not interior");

    const int n = dom.dim();
    // d(x) <= diam/2, so the integration region sits inside B(y, c1*diam/2).
    const double Rout = c1 * 0.5 * dom.diameter();
    const double rmin_out = cfg.r_min_rel * Rout;
    const PowFn pow_s(s);
    const double sigma = geom::sphere_surface_area(n);
    const double Rs = pow_s(Rout);
    const double rmins = pow_s(rmin_out);
    const PowFn pow_inv_s(1.0 / s);

    const std::int64_t inner =
        std::clamp<std::int64_t>(static_cast<std::int64_t>(std::sqrt(static_cast<double>(cfg.n_pairs))),
                                 64, 4096);
    const std::int64_t outer = std::max<std::int64_t>(1, cfg.n_pairs / inner);

    // inner h(x) machinery
    const double gamma = p * (1.0 - s);
    const PowFn pow_gamma(gamma);
    const PowFn pow_inv_gamma(1.0 / gamma);
    const PowFn pow_dfp(p / 2.0);
    const PowFn pow_rinv(-p / 2.0);

    std::vector<double> base(y.begin(), y.end());
    auto body = [&](std::int64_t, std::int64_t count, mc::RngStream& rng, mc::ChunkAccum& acc) {
        std::vector<double> x(static_cast<std::size_t>(n)), z(static_cast<std::size_t>(n)),
            omega(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < count; ++i) {
            const double rg = rmins + rng.u01() * (Rs - rmins);
            const double r = pow_inv_s(rg);
            rng.unit_vector(omega);
            for (std::size_t k = 0; k < base.size(); ++k) x[k] = base[k] + r * omega[k];
            double w = 0.0;
            if (dom.contains(x)) {
                const double d = dom.dist_boundary(x);
                if (r <= c1 * d) {
                    // nested estimate of h(x) with the reduced inner budget
                    const double Rh = 0.5 * d;
                    const double rmin_h = cfg.r_min_rel * Rh;
                    const double Rhg = pow_gamma(Rh);
                    const double rminhg = pow_gamma(rmin_h);
                    const double fx = f.eval(x);
                    double acc_h = 0.0;
                    for (std::int64_t j = 0; j < inner; ++j) {
                        const double rg2 = rminhg + rng.u01() * (Rhg - rminhg);
                        const double r2 = pow_inv_gamma(rg2);
                        rng.unit_vector(omega);
                        for (std::size_t k = 0; k < base.size(); ++k) z[k] = x[k] + r2 * omega[k];
                        if (!dom.contains(z)) continue;
                        const double df = f.eval(z) - fx;
                        acc_h += sigma * (Rhg - rminhg) / gamma * pow_dfp(df * df) *
                                 pow_rinv(r2 * r2);
                    }
                    const double Jh = acc_h / static_cast<double>(inner);
                    const double h = Jh > 0.0 ? std::pow(Jh, 1.0 / p) : 0.0;
                    w = sigma * (Rs - rmins) / s * h;
                }
            }
            acc.add(w);
        }
    };
    const auto stats =
        mc::chunked_mean(outer, cfg, mc::split_seed(cfg.seed, "representation_rhs"), body);
    return finalize_power_estimate(stats, 1.0, 1.0);
}

QuotientResult poincare_quotient(const Field& f, const Domain& dom, const FracParams& params,
                                 const mc::McConfig& cfg) {
    params.validate();
    QuotientResult out;
    out.numerator = inf_lq_norm(f, dom, params.q, params.a, cfg);
    out.denominator = frac_seminorm_restricted(f, dom, params, cfg);
    if (out.denominator.value == 0.0)
        throw UndefinedQuotient("undefined quotient: the seminorm vanishes (constant field)");
    const double v = out.numerator.estimate.value / out.denominator.value;
    const double rel_n = out.numerator.estimate.value > 0.0
                             ? out.numerator.estimate.std_error / out.numerator.estimate.value
                             : 0.0;
    const double rel_d = out.denominator.std_error / out.denominator.value;
    out.quotient.value = v;
    out.quotient.std_error = v * std::sqrt(rel_n * rel_n + rel_d * rel_d);
    out.quotient.n_effective =
        std::min(out.numerator.estimate.n_effective, out.denominator.n_effective);
    out.quotient.flags.divergent =
        out.numerator.estimate.flags.divergent || out.denominator.flags.divergent;
    out.quotient.flags.clamped_fraction = out.denominator.flags.clamped_fraction;
    return out;
}

// ---------------------------------------------------------------------------
// Grid oracle
// ---------------------------------------------------------------------------

GridOracleResult grid_oracle_seminorm(const Field& f, const FracParams& params, int m,
                                      bool full_variant, int workers) {
    params.validate();
    if (m < 50) throw std::invalid_argument("grid_oracle_seminorm: need at least 50 nodes per axis");
    const auto lip = f.lipschitz_bound();
    if (!lip)
        throw std::invalid_argument("grid_oracle_seminorm: non-Lipschitz field rejected");
    const double L = *lip;
    const double w = 1.0 / m;
    const std::size_t mm = static_cast<std::size_t>(m);

    std::vector<double> F(mm * mm), D(mm * mm);
    std::vector<double> xs(mm);
    for (std::size_t i = 0; i < mm; ++i) xs[i] = (static_cast<double>(i) + 0.5) * w;
    for (std::size_t iy = 0; iy < mm; ++iy) {
        for (std::size_t ix = 0; ix < mm; ++ix) {
            const double pt[2] = {xs[ix], xs[iy]};
            F[iy * mm + ix] = f.eval(pt);
            D[iy * mm + ix] = std::min({pt[0], 1.0 - pt[0], pt[1], 1.0 - pt[1]});
        }
    }

    const double sp = params.s * params.p;
    const PowFn pow_kern(0.5 * (2.0 + sp)); // applied to r^2
    const PowFn pow_dfp(params.p / 2.0);
    const PowFn pow_b(params.b);
    const bool use_delta = !full_variant && params.b != 0.0;
    const double Lp = std::pow(L, params.p);
    const double gamma = params.p - sp;
    const double diam = std::sqrt(2.0);

    std::vector<double> row_sum(mm, 0.0), row_core(mm, 0.0);
    auto do_row = [&](std::size_t iy) {
        double acc = 0.0, core = 0.0;
        for (std::size_t ix = 0; ix < mm; ++ix) {
            const std::size_t xi = iy * mm + ix;
            const double Dx = D[xi];
            const double R = full_variant ? diam : params.tau * Dx;
            const double R2 = R * R;
            const double Fx = F[xi];
            const long kw = full_variant ? static_cast<long>(mm)
                                         : static_cast<long>(std::ceil(R / w)) + 1;
            const long jy0 = std::max<long>(0, static_cast<long>(iy) - kw);
            const long jy1 = std::min<long>(static_cast<long>(mm) - 1, static_cast<long>(iy) + kw);
            const long jx0 = std::max<long>(0, static_cast<long>(ix) - kw);
            const long jx1 = std::min<long>(static_cast<long>(mm) - 1, static_cast<long>(ix) + kw);
            for (long jy = jy0; jy <= jy1; ++jy) {
                const double dy = (static_cast<double>(jy) - static_cast<double>(iy)) * w;
                for (long jx = jx0; jx <= jx1; ++jx) {
                    if (jx == static_cast<long>(ix) && jy == static_cast<long>(iy)) continue;
                    const double dx = (static_cast<double>(jx) - static_cast<double>(ix)) * w;
                    const double r2 = dx * dx + dy * dy;
                    if (r2 > R2) continue;
                    const std::size_t zi =
                        static_cast<std::size_t>(jy) * mm + static_cast<std::size_t>(jx);
                    const double df = F[zi] - Fx;
                    double k = pow_dfp(df * df) / pow_kern(r2);
                    if (use_delta) k *= pow_b(std::min(Dx, D[zi]));
                    acc += k;
                }
            }
            // analytic bound for the excluded self-cell
            const double r_cap = std::min(w / std::sqrt(2.0), R);
            double bfac = 1.0;
            if (use_delta)
                bfac = params.b >= 0.0 ? pow_b(Dx) : pow_b(std::max(Dx - r_cap, 1e-300));
            core += Lp * bfac * 2.0 * std::numbers::pi * std::pow(r_cap, gamma) / gamma;
        }
        row_sum[iy] = acc;
        row_core[iy] = core;
    };

    int nw = workers;
    if (nw <= 0) nw = static_cast<int>(std::thread::hardware_concurrency());
    if (nw <= 0) nw = 1;
    if (nw == 1) {
        for (std::size_t iy = 0; iy < mm; ++iy) do_row(iy);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t iy = next.fetch_add(1);
                if (iy >= mm) break;
                do_row(iy);
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    double S = 0.0, core_total = 0.0;
    for (std::size_t iy = 0; iy < mm; ++iy) {
        S += row_sum[iy];
        core_total += row_core[iy];
    }
    const double cell4 = w * w * w * w;
    const double lower_int = S * cell4;
    const double upper_int = lower_int + core_total * w * w;

    GridOracleResult out;
    out.nodes_per_axis = m;
    out.lipschitz = L;
    out.lower = lower_int > 0.0 ? std::pow(lower_int, 1.0 / params.p) : 0.0;
    out.upper = upper_int > 0.0 ? std::pow(upper_int, 1.0 / params.p) : 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Truncated cusp integrals
// ---------------------------------------------------------------------------

namespace {
OuterRegion cusp_band_region(const Domain& dom, double lo, double hi, geom::BBox& box_storage) {
    if (dom.kind() != geom::DomainKind::Cusp)
        throw std::invalid_argument("truncated integrals are defined on the cusp domain");
    if (!(lo >= 0.0 && hi > lo && hi <= 1.0))
        throw std::invalid_argument("truncated integrals: need 0 <= lo < hi <= 1");
    const double wmax = std::pow(hi, 1.0 / dom.alpha());
    box_storage.lo = {-wmax, lo};
    box_storage.hi = {wmax, hi};
    OuterRegion reg{&dom, &box_storage, geom::cusp_band_area(dom.alpha(), lo, hi), lo, hi};
    return reg;
}

std::string band_path(const char* op, double lo, double hi) {
    std::ostringstream os;
    os << op << "@" << lo << ":" << hi;
    return os.str();
}
} // namespace

mc::Estimate truncated_lq_power(const Field& f, const Domain& cusp, double q, double a, double lo,
                                double hi, const mc::McConfig& cfg) {
    if (!(q >= 1.0) || !(a >= 0.0)) throw std::invalid_argument("truncated_lq_power: bad (q,a)");
    cfg.validate();
    geom::BBox box;
    OuterRegion region = cusp_band_region(cusp, lo, hi, box);
    const PowFn pq(q);
    const PowFn pa(a);
    const bool weighted = a != 0.0;
    const int n = cusp.dim();

    auto body = [&](std::int64_t, std::int64_t count, mc::RngStream& rng, mc::ChunkAccum& acc) {
        std::vector<double> x(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < count; ++i) {
            sample_in_region(region, rng, x);
            const double v = f.eval(x);
            if (!std::isfinite(v)) throw std::domain_error("truncated_lq_power: non-finite value");
            double y = pq(std::abs(v));
            if (weighted) y *= pa(cusp.dist_boundary(x));
            acc.add(y);
        }
    };
    const auto stats = mc::chunked_mean(
        cfg.n_pairs, cfg, mc::split_seed(cfg.seed, band_path("trunc_norm", lo, hi)), body);
    return finalize_power_estimate(stats, region.measure, 1.0);
}

mc::Estimate truncated_seminorm_power(const Field& f, const Domain& cusp, double s, double p,
                                      double b, double tau, double lo, double hi,
                                      const mc::McConfig& cfg) {
    FracParams pr;
    pr.s = s;
    pr.p = p;
    pr.q = p;
    pr.b = b;
    pr.tau = tau;
    pr.validate();
    cfg.validate();
    geom::BBox box;
    OuterRegion region = cusp_band_region(cusp, lo, hi, box);
    SeminormSpec sp{s, p, b, tau, false};
    return seminorm_impl(f, cusp, sp, region, cfg, band_path("trunc_seminorm", lo, hi), 1.0);
}

} // namespace fraclab::funct
