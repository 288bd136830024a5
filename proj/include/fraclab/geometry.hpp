#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fraclab::geom {

using Point = std::vector<double>;

struct BBox {
    std::vector<double> lo, hi;
    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }
};

// Planar boundary polyline: a list of straight segments with vertices on the
// true boundary. Curved features (cap arcs, cusp profile) are discretized at
// the spec's boundary resolution; straight walls are exact single segments.
struct Polyline2D {
    struct Seg {
        double ax, ay, bx, by;
    };
    std::vector<Seg> segs;

    double max_segment_length() const;
    std::vector<std::array<double, 2>> vertices() const;
};

// Axis-aligned-box BVH over polyline segments for nearest-distance queries.
// Queries are exact (minimum over all segments) and thread-safe.
class SegmentBVH {
public:
    SegmentBVH() = default;
    explicit SegmentBVH(const Polyline2D& poly);

    bool empty() const { return nodes_.empty(); }
    double distance(double x, double y) const;

private:
    struct Node {
        double lox, loy, hix, hiy;
        std::int32_t left = -1, right = -1; // internal children
        std::int32_t first = 0, count = 0;  // leaf segment range
    };
    struct PackedSeg {
        double ax, ay, dx, dy, inv_len2;
    };
    std::int32_t build(std::vector<std::int32_t>& ids, std::int32_t begin, std::int32_t end,
                       const std::vector<std::array<double, 4>>& raw);
    std::vector<Node> nodes_;
    std::vector<PackedSeg> segs_;
};

enum class DomainKind { Cube, Ball, Cusp, Mushroom };

// Resolved geometry of a single attached mushroom: an open stem rectangle
// |x - center| < stem_hw, 0 <= y < cap_r, plus an open cap disk of radius
// cap_r centered at (center, cap_cy). The cap circle passes through the stem
// top corners, so cap_cy = cap_r + sqrt(cap_r^2 - stem_hw^2).
struct MushroomPart {
    double center = 0.0;
    double cap_r = 0.0;   // cap radius; also the stem height
    double stem_hw = 0.0; // stem half-width = cap_r^beta
    double cap_cy = 0.0;
};

struct SampleResult {
    std::vector<Point> points;
    double acceptance_rate = 0.0;
};

class Domain {
public:
    static Domain unit_cube(int n);
    static Domain ball(int n, double radius);
    static Domain cusp(double alpha, int boundary_resolution = 2048);
    static Domain mushroom(double beta, double cube_side, std::vector<double> stem_radii,
                           int boundary_resolution = 2048);

    DomainKind kind() const { return kind_; }
    int dim() const { return n_; }
    double radius() const { return radius_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double cube_side() const { return side_; }
    int boundary_resolution() const { return resolution_; }
    const std::vector<double>& stem_radii() const { return stem_r_; }
    const std::vector<MushroomPart>& mushrooms() const { return mush_; }

    bool contains(std::span<const double> x) const;
    // d(x): distance to the boundary; exact for cube/ball, polyline distance
    // for cusp/mushroom. Throws std::domain_error for points outside.
    double dist_boundary(std::span<const double> x) const;

    double measure() const { return measure_; }
    double measure_std_error() const { return measure_se_; }
    double diameter() const { return diameter_; }
    const BBox& bounding_box() const { return box_; }
    const Polyline2D& boundary_polyline() const { return poly_; }

    SampleResult sample_interior(std::int64_t count, std::uint64_t seed,
                                 double min_acceptance = 1e-4) const;

    std::string describe() const;

private:
    Domain() = default;
    void finalize_polyline_domain();

    DomainKind kind_ = DomainKind::Cube;
    int n_ = 2;
    double radius_ = 0.0, alpha_ = 0.0, beta_ = 0.0, side_ = 0.0;
    int resolution_ = 0;
    std::vector<double> stem_r_;
    std::vector<MushroomPart> mush_;
    BBox box_;
    double measure_ = 0.0, measure_se_ = 0.0, diameter_ = 0.0;
    Polyline2D poly_;
    SegmentBVH bvh_;
};

double unit_ball_volume(int n);
double sphere_surface_area(int n); // |S^{n-1}|

// Closed-form area of the cusp slab {lo < x_n <= hi} (n = 2).
double cusp_band_area(double alpha, double lo, double hi);

void write_polyline_csv(const Polyline2D& poly, std::ostream& os);

} // namespace fraclab::geom
