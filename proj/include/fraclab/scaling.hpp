#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace fraclab::scaling {

// Least-squares fit of log(value) against log(scale).
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_se = 0.0;
    std::vector<std::array<double, 2>> points; // (scale, value)
};

// rel_se, when provided, carries the relative standard error of each value;
// it propagates into slope_se (the fit itself stays unweighted).
inline ScalingFit fit_loglog(std::span<const double> scales, std::span<const double> values,
                             std::span<const double> rel_se = {}) {
    const std::size_t m = scales.size();
    if (m != values.size()) throw std::invalid_argument("fit_loglog: size mismatch");
    if (m < 4) throw std::invalid_argument("fit_loglog: need at least 4 points");
    if (!rel_se.empty() && rel_se.size() != m)
        throw std::invalid_argument("fit_loglog: rel_se size mismatch");

    ScalingFit fit;
    fit.points.reserve(m);
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(scales[i] > 0.0) || !(values[i] > 0.0))
            throw std::invalid_argument("fit_loglog: scales and values must be positive");
        xs[i] = std::log(scales[i]);
        ys[i] = std::log(values[i]);
        fit.points.push_back({scales[i], values[i]});
    }
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        xbar += xs[i];
        ybar += ys[i];
    }
    xbar /= static_cast<double>(m);
    ybar /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        syy += (ys[i] - ybar) * (ys[i] - ybar);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_loglog: degenerate scales");
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;

    if (!rel_se.empty()) {
        // slope = sum c_i y_i with c_i = (x_i-xbar)/sxx; the log-value errors
        // are the relative errors of the values.
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double c = (xs[i] - xbar) / sxx;
            v += c * c * rel_se[i] * rel_se[i];
        }
        fit.slope_se = std::sqrt(v);
    } else if (m > 2) {
        fit.slope_se = std::sqrt(ss_res / static_cast<double>(m - 2) / sxx);
    }
    return fit;
}

} // namespace fraclab::scaling
