#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclab::thresholds {

// Exponent-threshold arithmetic for the admissible weight powers on each
// domain family. Everything here is plain field arithmetic (+,-,*,/ and
// comparisons), so the same code runs in double precision and, for the
// invariant tests that need exactness at equality, with an exact rational
// type (boost::rational).

struct SideCondition {
    std::string name;
    bool satisfied = true;
};

template <class T>
struct ThresholdReport {
    std::string rule;       // which threshold formula produced the report
    std::string bound_kind; // "b_max", "b_sup" or "q_max"
    std::optional<T> bound; // empty when no finite threshold exists
    bool strict = false;    // true when the admissible region is an open half-line
    bool finite = true;
    std::vector<SideCondition> side_conditions;
};

template <class T>
struct NuWindow {
    bool nonempty = false;
    T lo{};     // inclusive
    T hi{};     // exclusive
};

template <class T>
struct MushroomExponents {
    T lhs_exp{};   // L^q norm side, per unit of the norm
    T rhs_exp{};   // dominant (stem) exponent of seminorm^{1/p}
    T other_exp{}; // non-dominant cube/cap exponent of seminorm^{1/p}
};

namespace detail {
inline void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(std::string("thresholds: ") + msg);
}

template <class T>
std::string fmt(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
} // namespace detail

template <class T>
void validate_common(const T& n, const T& s, const T& a) {
    detail::require(n >= T(2), "dimension n must be >= 2");
    detail::require(s > T(0) && s < T(1), "s must lie in (0,1)");
    detail::require(a >= T(0), "a must be >= 0");
}

// b <= (n+a)p/q + sp - n on John domains (p > 1), with the companion
// condition q <= np/(n-sp) when p < n/s.
template <class T>
ThresholdReport<T> john_b_max(const T& n, const T& p, const T& q, const T& a, const T& s) {
    validate_common(n, s, a);
    detail::require(p > T(1), "john_b_max requires p > 1");
    detail::require(q >= p, "requires q >= p");
    ThresholdReport<T> rep;
    rep.rule = "john";
    rep.bound_kind = "b_max";
    rep.bound = (n + a) * p / q + s * p - n;
    rep.strict = false;
    if (p * s < n) {
        const T qs = n * p / (n - s * p);
        rep.side_conditions.push_back({"q <= n*p/(n-s*p) when p < n/s", q <= qs});
    } else {
        rep.side_conditions.push_back({"q <= n*p/(n-s*p) when p < n/s (not applicable)", true});
    }
    return rep;
}

// p = 1 John case: b <= (n+a)/q - n + s with 1 <= q <= n/(n-s).
template <class T>
ThresholdReport<T> john_p1_b_max(const T& n, const T& q, const T& a, const T& s) {
    validate_common(n, s, a);
    detail::require(q >= T(1), "requires q >= 1");
    ThresholdReport<T> rep;
    rep.rule = "john-p1";
    rep.bound_kind = "b_max";
    rep.bound = (n + a) / q - n + s;
    rep.side_conditions.push_back({"1 <= q <= n/(n-s)", q <= n / (n - s)});
    return rep;
}

// b < (n+a)p/(q*beta) + (p-1)/beta + sp - p + 1 - n on beta-John domains.
// The companion condition is reported in both readings: the one as stated,
// q <= (n-p)/(n-sp), and the conventional Sobolev bound q <= np/(n-sp).
template <class T>
ThresholdReport<T> beta_john_b_sup(const T& n, const T& p, const T& q, const T& a, const T& s,
                                   const T& beta) {
    validate_common(n, s, a);
    detail::require(p > T(1), "beta_john_b_sup requires p > 1");
    detail::require(q >= p, "requires q >= p");
    detail::require(beta >= T(1), "requires beta >= 1");
    ThresholdReport<T> rep;
    rep.rule = "beta-john";
    rep.bound_kind = "b_sup";
    rep.bound = (n + a) * p / (q * beta) + (p - T(1)) / beta + s * p - p + T(1) - n;
    rep.strict = true;
    if (p * s < n) {
        rep.side_conditions.push_back(
            {"q <= (n-p)/(n-s*p) when p < n/s (as stated)", q <= (n - p) / (n - s * p)});
        rep.side_conditions.push_back(
            {"q <= n*p/(n-s*p) when p < n/s (alternative)", q <= n * p / (n - s * p)});
    } else {
        rep.side_conditions.push_back({"q-bound when p < n/s (not applicable)", true});
    }
    return rep;
}

// p = 1 beta-John case: b <= (n+a)/(q*beta) + s - n with 1 <= q <= (n-1)/(n-s)
// (the q-condition is reported as stated, even where it is unsatisfiable).
template <class T>
ThresholdReport<T> beta_john_p1_b_max(const T& n, const T& q, const T& a, const T& s,
                                      const T& beta) {
    validate_common(n, s, a);
    detail::require(q >= T(1), "requires q >= 1");
    detail::require(beta >= T(1), "requires beta >= 1");
    ThresholdReport<T> rep;
    rep.rule = "beta-john-p1";
    rep.bound_kind = "b_max";
    rep.bound = (n + a) / (q * beta) + s - n;
    rep.side_conditions.push_back({"1 <= q <= (n-1)/(n-s) (as stated)", q <= (n - T(1)) / (n - s)});
    return rep;
}

// Largest admissible q on the mushroom family:
// q <= (n+a)p / (1 - p + beta(b + n - 1 + p - sp)), when the denominator is
// positive; otherwise no finite threshold exists.
template <class T>
ThresholdReport<T> mushroom_q_max(const T& n, const T& a, const T& p, const T& b, const T& s,
                                  const T& beta) {
    validate_common(n, s, a);
    detail::require(p >= T(1), "requires p >= 1");
    detail::require(beta >= T(1), "requires beta >= 1");
    ThresholdReport<T> rep;
    rep.rule = "mushroom-q";
    rep.bound_kind = "q_max";
    const T den = T(1) - p + beta * (b + n - T(1) + p - s * p);
    if (den > T(0)) {
        rep.bound = (n + a) * p / den;
        rep.side_conditions.push_back({"denominator 1-p+beta*(b+n-1+p-s*p) > 0", true});
    } else {
        rep.finite = false;
        rep.side_conditions.push_back({"denominator 1-p+beta*(b+n-1+p-s*p) > 0", false});
    }
    return rep;
}

// b <= p(s-n) + p(n-1+alpha)(1 + 1/q - 1/p) on Hoelder-alpha domains (a = 0).
template <class T>
ThresholdReport<T> holder_b_max(const T& n, const T& p, const T& q, const T& alpha, const T& s) {
    validate_common(n, s, T(0));
    detail::require(p > T(1), "holder_b_max requires p > 1");
    detail::require(q >= p, "requires q >= p");
    detail::require(alpha > T(0) && alpha <= T(1), "requires alpha in (0,1]");
    ThresholdReport<T> rep;
    rep.rule = "holder";
    rep.bound_kind = "b_max";
    rep.bound = p * (s - n) + p * (n - T(1) + alpha) * (T(1) + T(1) / q - T(1) / p);
    if (p * s < n) {
        rep.side_conditions.push_back(
            {"q <= (n-p)/(n-s*p) when p < n/s (as stated)", q <= (n - p) / (n - s * p)});
        rep.side_conditions.push_back(
            {"q <= n*p/(n-s*p) when p < n/s (alternative)", q <= n * p / (n - s * p)});
    } else {
        rep.side_conditions.push_back({"q-bound when p < n/s (not applicable)", true});
    }
    return rep;
}

// Sharp bound on the cusp family: b <= p(s-1+alpha) + p(n-1+alpha)(1/q - 1/p).
template <class T>
ThresholdReport<T> holder_b_sharp(const T& n, const T& p, const T& q, const T& alpha, const T& s) {
    validate_common(n, s, T(0));
    detail::require(p > T(1), "holder_b_sharp requires p > 1");
    detail::require(q >= p, "requires q >= p");
    detail::require(alpha > T(0) && alpha <= T(1), "requires alpha in (0,1]");
    ThresholdReport<T> rep;
    rep.rule = "holder-sharp";
    rep.bound_kind = "b_max";
    rep.bound = p * (s - T(1) + alpha) + p * (n - T(1) + alpha) * (T(1) / q - T(1) / p);
    return rep;
}

// The interval of nu > 0 for which the truncated norm integral of x_n^{-nu}
// diverges while the truncated seminorm integral stays finite:
//   nu >= (1 + (n-1)/alpha)/q   and   nu < (1 + (b+(1-s)p+n-1)/alpha)/p - 1.
// Nonempty exactly when b exceeds the sharp cusp bound.
template <class T>
NuWindow<T> cusp_nu_window(const T& n, const T& alpha, const T& p, const T& q, const T& s,
                           const T& b) {
    validate_common(n, s, T(0));
    detail::require(p >= T(1), "requires p >= 1");
    detail::require(q >= T(1), "requires q >= 1");
    detail::require(alpha > T(0) && alpha <= T(1), "requires alpha in (0,1]");
    NuWindow<T> w;
    w.lo = (T(1) + (n - T(1)) / alpha) / q;
    w.hi = (T(1) + (b + (T(1) - s) * p + n - T(1)) / alpha) / p - T(1);
    w.nonempty = w.lo < w.hi;
    return w;
}

// Predicted scaling exponents of the mushroom quotient study, per unit of the
// norm (lhs) and of seminorm^{1/p} (rhs dominant, other non-dominant).
template <class T>
MushroomExponents<T> mushroom_scaling_exponents(const T& n, const T& p, const T& s, const T& beta,
                                                const T& a, const T& b, const T& q) {
    validate_common(n, s, a);
    detail::require(p >= T(1), "requires p >= 1");
    detail::require(q >= T(1), "requires q >= 1");
    detail::require(beta >= T(1), "requires beta >= 1");
    MushroomExponents<T> e;
    e.lhs_exp = (n + a) / q;
    e.rhs_exp = (T(1) - p + beta * (b + n - T(1) + p - s * p)) / p;
    e.other_exp = (-p + beta * (b + n + p - s * p)) / p;
    return e;
}

} // namespace fraclab::thresholds
