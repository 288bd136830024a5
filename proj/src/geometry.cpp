#include "fraclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fraclab/mc.hpp"

namespace fraclab::geom {

namespace {

constexpr double kPi = std::numbers::pi;

double seg_dist2(double px, double py, double ax, double ay, double dx, double dy,
                 double inv_len2) {
    double t = ((px - ax) * dx + (py - ay) * dy) * inv_len2;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = ax + t * dx - px;
    const double cy = ay + t * dy - py;
    return cx * cx + cy * cy;
}

double box_dist2(double px, double py, double lox, double loy, double hix, double hiy) {
    const double dx = std::max({lox - px, 0.0, px - hix});
    const double dy = std::max({loy - py, 0.0, py - hiy});
    return dx * dx + dy * dy;
}

} // namespace

double Polyline2D::max_segment_length() const {
    double m = 0.0;
    for (const auto& s : segs)
        m = std::max(m, std::hypot(s.bx - s.ax, s.by - s.ay));
    return m;
}

std::vector<std::array<double, 2>> Polyline2D::vertices() const {
    std::vector<std::array<double, 2>> v;
    v.reserve(2 * segs.size());
    for (const auto& s : segs) {
        v.push_back({s.ax, s.ay});
        v.push_back({s.bx, s.by});
    }
    return v;
}

// --------------------------------------------------------------------------
// SegmentBVH
// --------------------------------------------------------------------------

SegmentBVH::SegmentBVH(const Polyline2D& poly) {
    const std::size_t m = poly.segs.size();
    if (m == 0) return;
    std::vector<std::array<double, 4>> raw(m);
    for (std::size_t i = 0; i < m; ++i)
        raw[i] = {poly.segs[i].ax, poly.segs[i].ay, poly.segs[i].bx, poly.segs[i].by};
    std::vector<std::int32_t> ids(m);
    for (std::size_t i = 0; i < m; ++i) ids[i] = static_cast<std::int32_t>(i);
    nodes_.reserve(2 * m);
    build(ids, 0, static_cast<std::int32_t>(m), raw);
    // pack segments in leaf order
    segs_.reserve(m);
    std::vector<PackedSeg> packed(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& r = raw[static_cast<std::size_t>(ids[i])];
        const double dx = r[2] - r[0], dy = r[3] - r[1];
        const double len2 = dx * dx + dy * dy;
        packed[i] = {r[0], r[1], dx, dy, len2 > 0.0 ? 1.0 / len2 : 0.0};
    }
    segs_ = std::move(packed);
}

std::int32_t SegmentBVH::build(std::vector<std::int32_t>& ids, std::int32_t begin, std::int32_t end,
                               const std::vector<std::array<double, 4>>& raw) {
    Node node;
    node.lox = node.loy = std::numeric_limits<double>::infinity();
    node.hix = node.hiy = -std::numeric_limits<double>::infinity();
    for (std::int32_t i = begin; i < end; ++i) {
        const auto& r = raw[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])];
        node.lox = std::min({node.lox, r[0], r[2]});
        node.loy = std::min({node.loy, r[1], r[3]});
        node.hix = std::max({node.hix, r[0], r[2]});
        node.hiy = std::max({node.hiy, r[1], r[3]});
    }
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= 4) {
        nodes_[static_cast<std::size_t>(id)].first = begin;
        nodes_[static_cast<std::size_t>(id)].count = end - begin;
        return id;
    }
    const int axis = (node.hix - node.lox >= node.hiy - node.loy) ? 0 : 1;
    const std::int32_t mid = (begin + end) / 2;
    std::nth_element(ids.begin() + begin, ids.begin() + mid, ids.begin() + end,
                     [&](std::int32_t a, std::int32_t b) {
                         const auto& ra = raw[static_cast<std::size_t>(a)];
                         const auto& rb = raw[static_cast<std::size_t>(b)];
                         const double ca = axis == 0 ? ra[0] + ra[2] : ra[1] + ra[3];
                         const double cb = axis == 0 ? rb[0] + rb[2] : rb[1] + rb[3];
                         return ca < cb;
                     });
    const std::int32_t l = build(ids, begin, mid, raw);
    const std::int32_t r = build(ids, mid, end, raw);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
}

double SegmentBVH::distance(double x, double y) const {
    if (nodes_.empty()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    std::int32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& nd = nodes_[static_cast<std::size_t>(stack[--top])];
        if (box_dist2(x, y, nd.lox, nd.loy, nd.hix, nd.hiy) >= best) continue;
        if (nd.count > 0) {
            for (std::int32_t i = nd.first; i < nd.first + nd.count; ++i) {
                const PackedSeg& s = segs_[static_cast<std::size_t>(i)];
                best = std::min(best, seg_dist2(x, y, s.ax, s.ay, s.dx, s.dy, s.inv_len2));
            }
            continue;
        }
        const Node& lc = nodes_[static_cast<std::size_t>(nd.left)];
        const Node& rc = nodes_[static_cast<std::size_t>(nd.right)];
        const double dl = box_dist2(x, y, lc.lox, lc.loy, lc.hix, lc.hiy);
        const double dr = box_dist2(x, y, rc.lox, rc.loy, rc.hix, rc.hiy);
        // visit the nearer child last so it is processed first
        if (dl < dr) {
            if (dr < best) stack[top++] = nd.right;
            if (dl < best) stack[top++] = nd.left;
        } else {
            if (dl < best) stack[top++] = nd.left;
            if (dr < best) stack[top++] = nd.right;
        }
    }
    return std::sqrt(best);
}

// --------------------------------------------------------------------------
// Helpers
// --------------------------------------------------------------------------

double unit_ball_volume(int n) {
    return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double sphere_surface_area(int n) {
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double cusp_band_area(double alpha, double lo, double hi) {
    const double e = 1.0 + 1.0 / alpha;
    return 2.0 / e * (std::pow(hi, e) - std::pow(lo, e));
}

void write_polyline_csv(const Polyline2D& poly, std::ostream& os) {
    os << "x,y\n";
    char buf[80];
    for (const auto& s : poly.segs) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", s.ax, s.ay);
        os << buf;
    }
    if (!poly.segs.empty()) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", poly.segs.back().bx, poly.segs.back().by);
        os << buf;
    }
}

// --------------------------------------------------------------------------
// Domain factories
// --------------------------------------------------------------------------

Domain Domain::unit_cube(int n) {
    if (n < 2) throw std::invalid_argument("unit_cube: dimension must be >= 2");
    Domain d;
    d.kind_ = DomainKind::Cube;
    d.n_ = n;
    d.box_.lo.assign(static_cast<std::size_t>(n), 0.0);
    d.box_.hi.assign(static_cast<std::size_t>(n), 1.0);
    d.measure_ = 1.0;
    d.diameter_ = std::sqrt(static_cast<double>(n));
    if (n == 2) {
        d.poly_.segs = {{0, 0, 1, 0}, {1, 0, 1, 1}, {1, 1, 0, 1}, {0, 1, 0, 0}};
    }
    return d;
}

Domain Domain::ball(int n, double radius) {
    if (n < 2) throw std::invalid_argument("ball: dimension must be >= 2");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
    Domain d;
    d.kind_ = DomainKind::Ball;
    d.n_ = n;
    d.radius_ = radius;
    d.box_.lo.assign(static_cast<std::size_t>(n), -radius);
    d.box_.hi.assign(static_cast<std::size_t>(n), radius);
    d.measure_ = unit_ball_volume(n) * std::pow(radius, n);
    d.diameter_ = 2.0 * radius;
    if (n == 2) {
        const int m = 512; // export-only polygon
        d.poly_.segs.reserve(m);
        for (int i = 0; i < m; ++i) {
            const double a0 = 2.0 * kPi * i / m;
            const double a1 = 2.0 * kPi * (i + 1) / m;
            d.poly_.segs.push_back({radius * std::cos(a0), radius * std::sin(a0),
                                    radius * std::cos(a1), radius * std::sin(a1)});
        }
    }
    return d;
}

Domain Domain::cusp(double alpha, int boundary_resolution) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("cusp: alpha must be in (0,1]");
    if (boundary_resolution < 8) throw std::invalid_argument("cusp: resolution too small");
    Domain d;
    d.kind_ = DomainKind::Cusp;
    d.n_ = 2;
    d.alpha_ = alpha;
    d.resolution_ = boundary_resolution;
    d.box_.lo = {-1.0, 0.0};
    d.box_.hi = {1.0, 1.0};
    d.measure_ = cusp_band_area(alpha, 0.0, 1.0);

    // Lateral profile |x'| = x_n^{1/alpha}, both branches discretized at
    // `boundary_resolution` segments each, plus the top lid.
    const int m = boundary_resolution;
    auto profile = [&](double t) { return std::pow(t, 1.0 / alpha); };
    d.poly_.segs.reserve(static_cast<std::size_t>(2 * m + 1));
    for (int i = 0; i < m; ++i) {
        const double t0 = static_cast<double>(i) / m;
        const double t1 = static_cast<double>(i + 1) / m;
        d.poly_.segs.push_back({profile(t0), t0, profile(t1), t1});
    }
    for (int i = 0; i < m; ++i) {
        const double t0 = static_cast<double>(i) / m;
        const double t1 = static_cast<double>(i + 1) / m;
        d.poly_.segs.push_back({-profile(t0), t0, -profile(t1), t1});
    }
    d.poly_.segs.push_back({-1.0, 1.0, 1.0, 1.0});
    d.finalize_polyline_domain();
    return d;
}

Domain Domain::mushroom(double beta, double cube_side, std::vector<double> stem_radii,
                        int boundary_resolution) {
    if (!(beta >= 1.0)) throw std::invalid_argument("mushroom: beta must be >= 1");
    if (!(cube_side > 0.0)) throw std::invalid_argument("mushroom: cube_side must be positive");
    if (stem_radii.empty()) throw std::invalid_argument("mushroom: need at least one stem");
    if (boundary_resolution < 8) throw std::invalid_argument("mushroom: resolution too small");
    double footprint = 0.0;
    for (std::size_t i = 0; i < stem_radii.size(); ++i) {
        const double r = stem_radii[i];
        if (!(r > 0.0 && r < 1.0))
            throw std::invalid_argument("mushroom: stem radii must lie in (0,1)");
        if (i > 0 && !(r < stem_radii[i - 1]))
            throw std::invalid_argument("mushroom: stem radii must be strictly decreasing");
        footprint += 2.0 * r;
    }
    if (!(footprint < cube_side))
        throw std::invalid_argument("mushroom: mushrooms do not fit on the cube top "
                                    "(sum of footprint widths >= cube_side)");

    Domain d;
    d.kind_ = DomainKind::Mushroom;
    d.n_ = 2;
    d.beta_ = beta;
    d.side_ = cube_side;
    d.resolution_ = boundary_resolution;
    d.stem_r_ = std::move(stem_radii);

    // Evenly spaced placement along the top side; disjointness follows from
    // footprint < cube_side.
    const double gap = (cube_side - footprint) / static_cast<double>(d.stem_r_.size() + 1);
    double cursor = gap;
    for (double r : d.stem_r_) {
        MushroomPart p;
        p.center = cursor + r;
        p.cap_r = r;
        p.stem_hw = std::pow(r, beta);
        p.cap_cy = r + std::sqrt(std::max(0.0, r * r - p.stem_hw * p.stem_hw));
        d.mush_.push_back(p);
        cursor += 2.0 * r + gap;
    }

    double ymax = 0.0;
    for (const auto& p : d.mush_) ymax = std::max(ymax, p.cap_cy + p.cap_r);
    d.box_.lo = {0.0, -cube_side};
    d.box_.hi = {cube_side, ymax};

    // Boundary: cube walls, top side split at the stem openings, stem walls,
    // and one cap arc per mushroom through the stem top corners.
    auto& segs = d.poly_.segs;
    segs.push_back({0.0, -cube_side, cube_side, -cube_side});
    segs.push_back({0.0, -cube_side, 0.0, 0.0});
    segs.push_back({cube_side, -cube_side, cube_side, 0.0});
    double xprev = 0.0;
    for (const auto& p : d.mush_) {
        segs.push_back({xprev, 0.0, p.center - p.stem_hw, 0.0});
        xprev = p.center + p.stem_hw;
    }
    segs.push_back({xprev, 0.0, cube_side, 0.0});
    const int m = boundary_resolution;
    for (const auto& p : d.mush_) {
        segs.push_back({p.center - p.stem_hw, 0.0, p.center - p.stem_hw, p.cap_r});
        segs.push_back({p.center + p.stem_hw, 0.0, p.center + p.stem_hw, p.cap_r});
        const double dd = p.cap_cy - p.cap_r; // chord offset below the center
        const double phi_r = std::atan2(-dd, p.stem_hw);
        const double phi_l = std::atan2(-dd, -p.stem_hw) + 2.0 * kPi;
        for (int i = 0; i < m; ++i) {
            const double a0 = phi_r + (phi_l - phi_r) * i / m;
            const double a1 = phi_r + (phi_l - phi_r) * (i + 1) / m;
            segs.push_back({p.center + p.cap_r * std::cos(a0), p.cap_cy + p.cap_r * std::sin(a0),
                            p.center + p.cap_r * std::cos(a1), p.cap_cy + p.cap_r * std::sin(a1)});
        }
    }
    d.finalize_polyline_domain();
    return d;
}

void Domain::finalize_polyline_domain() {
    bvh_ = SegmentBVH(poly_);

    // Diameter: supremum of pairwise distances over the boundary vertices (a
    // lower bound converging with resolution).
    const auto verts = poly_.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
            const double dx = verts[i][0] - verts[j][0];
            const double dy = verts[i][1] - verts[j][1];
            best = std::max(best, dx * dx + dy * dy);
        }
    }
    diameter_ = std::sqrt(best);

    if (kind_ == DomainKind::Mushroom) {
        // |Omega| by Monte Carlo over the bounding box, fixed internal stream.
        const std::int64_t n = 4'000'000;
        mc::RngStream rng(mc::split_seed(0x6d65617375726531ull, describe()));
        std::int64_t inside = 0;
        std::array<double, 2> x{};
        for (std::int64_t i = 0; i < n; ++i) {
            x[0] = box_.lo[0] + (box_.hi[0] - box_.lo[0]) * rng.u01();
            x[1] = box_.lo[1] + (box_.hi[1] - box_.lo[1]) * rng.u01();
            if (contains(x)) ++inside;
        }
        const double p = static_cast<double>(inside) / static_cast<double>(n);
        const double bv = box_.volume();
        measure_ = bv * p;
        measure_se_ = bv * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    }
}

// --------------------------------------------------------------------------
// Queries
// --------------------------------------------------------------------------

bool Domain::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("contains: point dimension does not match the domain");
    switch (kind_) {
    case DomainKind::Cube:
        for (double c : x)
            if (!(c > 0.0 && c < 1.0)) return false;
        return true;
    case DomainKind::Ball: {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return r2 < radius_ * radius_;
    }
    case DomainKind::Cusp: {
        const double t = x[1];
        if (!(t > 0.0 && t < 1.0)) return false;
        return std::abs(x[0]) < std::pow(t, 1.0 / alpha_);
    }
    case DomainKind::Mushroom: {
        const double px = x[0], py = x[1];
        if (px > 0.0 && px < side_ && py > -side_ && py < 0.0) return true;
        if (py < 0.0) return false;
        for (const auto& p : mush_) {
            if (py < p.cap_r && std::abs(px - p.center) < p.stem_hw) return true;
            const double ddx = px - p.center, ddy = py - p.cap_cy;
            if (ddx * ddx + ddy * ddy < p.cap_r * p.cap_r) return true;
        }
        return false;
    }
    }
    return false;
}

double Domain::dist_boundary(std::span<const double> x) const {
    if (!contains(x)) throw std::domain_error("dist_boundary: point is not interior");
    switch (kind_) {
    case DomainKind::Cube: {
        double d = 1.0;
        for (double c : x) d = std::min({d, c, 1.0 - c});
        return d;
    }
    case DomainKind::Ball: {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        return radius_ - std::sqrt(r2);
    }
    case DomainKind::Cusp:
    case DomainKind::Mushroom:
        return bvh_.distance(x[0], x[1]);
    }
    return 0.0;
}

SampleResult Domain::sample_interior(std::int64_t count, std::uint64_t seed,
                                     double min_acceptance) const {
    if (count < 1) throw std::invalid_argument("sample_interior: count must be >= 1");
    SampleResult out;
    out.points.reserve(static_cast<std::size_t>(count));
    mc::RngStream rng(mc::split_seed(seed, "sample_interior"));
    const std::int64_t max_tries =
        std::max<std::int64_t>(65536, static_cast<std::int64_t>(static_cast<double>(count) / min_acceptance));
    std::int64_t tries = 0;
    Point x(static_cast<std::size_t>(n_));
    while (static_cast<std::int64_t>(out.points.size()) < count) {
        if (++tries > max_tries) {
            std::ostringstream msg;
            msg << "sample_interior: acceptance rate below floor " << min_acceptance << " ("
                << out.points.size() << "/" << tries << " accepted) for " << describe();
            throw std::runtime_error(msg.str());
        }
        for (int k = 0; k < n_; ++k)
            x[static_cast<std::size_t>(k)] =
                box_.lo[static_cast<std::size_t>(k)] +
                (box_.hi[static_cast<std::size_t>(k)] - box_.lo[static_cast<std::size_t>(k)]) * rng.u01();
        if (contains(x)) out.points.push_back(x);
    }
    out.acceptance_rate = static_cast<double>(count) / static_cast<double>(tries);
    return out;
}

std::string Domain::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case DomainKind::Cube:
        os << "cube(n=" << n_ << ")";
        break;
    case DomainKind::Ball:
        os << "ball(n=" << n_ << ",R=" << radius_ << ")";
        break;
    case DomainKind::Cusp:
        os << "cusp(alpha=" << alpha_ << ",res=" << resolution_ << ")";
        break;
    case DomainKind::Mushroom:
        os << "mushroom(beta=" << beta_ << ",side=" << side_ << ",r=";
        for (std::size_t i = 0; i < stem_r_.size(); ++i) os << (i ? "," : "") << stem_r_[i];
        os << ",res=" << resolution_ << ")";
        break;
    }
    return os.str();
}

} // namespace fraclab::geom
