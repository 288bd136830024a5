#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace fraclab {

// Power function with fast paths for the exponents that dominate the hot
// loops (small integers and half-integers, e.g. r^3 or (r^2)^{3/2}).
class PowFn {
public:
    PowFn() : PowFn(1.0) {}

    explicit PowFn(double e) : e_(e) {
        const double r = std::round(e);
        const double r2 = std::round(2.0 * e);
        if (e == 0.0) {
            mode_ = Mode::One;
        } else if (e == r && std::abs(r) <= 8.0) {
            mode_ = Mode::Int;
            k_ = static_cast<int>(r);
        } else if (2.0 * e == r2 && std::abs(r2) <= 17.0) {
            mode_ = Mode::HalfInt;
            k_ = static_cast<int>(r2); // x^e = sqrt(x)^k
        } else {
            mode_ = Mode::Generic;
        }
    }

    double exponent() const { return e_; }

    double operator()(double x) const {
        switch (mode_) {
        case Mode::One:
            return 1.0;
        case Mode::Int:
            return ipow(x, k_);
        case Mode::HalfInt:
            return ipow(std::sqrt(x), k_);
        case Mode::Generic:
            return std::pow(x, e_);
        }
        return std::pow(x, e_);
    }

private:
    enum class Mode { One, Int, HalfInt, Generic };

    static double ipow(double x, int k) {
        if (k < 0) return 1.0 / ipow(x, -k);
        double acc = 1.0;
        while (k > 0) {
            if (k & 1) acc *= x;
            x *= x;
            k >>= 1;
        }
        return acc;
    }

    double e_ = 1.0;
    Mode mode_ = Mode::Generic;
    int k_ = 1;
};

inline double require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite value");
    return v;
}

} // namespace fraclab
