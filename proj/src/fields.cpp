#include "fraclab/fields.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fraclab::fields {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double Field::eval(std::span<const double> x) const {
    struct V {
        std::span<const double> x;

        double operator()(const Constant& c) const { return c.value; }

        double operator()(const Coordinate& c) const {
            const std::size_t k = static_cast<std::size_t>(c.axis - 1);
            if (c.axis < 1 || k >= x.size())
                throw std::invalid_argument("coordinate field: axis out of range");
            return x[k];
        }

        double operator()(const Sine& s) const {
            const std::size_t k = static_cast<std::size_t>(s.axis - 1);
            if (s.axis < 1 || k >= x.size())
                throw std::invalid_argument("sine field: axis out of range");
            return std::sin(kTwoPi * s.freq * x[k]);
        }

        double operator()(const GaussianBump& g) const {
            if (g.center.size() != x.size())
                throw std::invalid_argument("gaussian bump: center dimension mismatch");
            double r2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - g.center[i];
                r2 += d * d;
            }
            return std::exp(-r2 / (g.width * g.width));
        }

        double operator()(const CuspPower& c) const {
            const double t = x[x.size() - 1];
            if (!(t > 0.0))
                throw std::domain_error("cusp power field: evaluation outside the domain (x_n <= 0)");
            return std::pow(t, -c.nu);
        }

        double operator()(const MushroomBump& b) const {
            const double px = x[0], py = x[1];
            const auto& p = b.part;
            if (py >= p.cap_r) {
                const double dx = px - p.center, dy = py - p.cap_cy;
                if (dx * dx + dy * dy < p.cap_r * p.cap_r) return 1.0;
                return 0.0;
            }
            if (py >= 0.0 && std::abs(px - p.center) < p.stem_hw) return py / p.cap_r;
            return 0.0;
        }
    };
    return std::visit(V{x}, desc_);
}

std::optional<double> Field::lipschitz_bound() const {
    struct V {
        std::optional<double> operator()(const Constant&) const { return 0.0; }
        std::optional<double> operator()(const Coordinate&) const { return 1.0; }
        std::optional<double> operator()(const Sine& s) const { return kTwoPi * std::abs(s.freq); }
        std::optional<double> operator()(const GaussianBump& g) const {
            // max |grad| of exp(-r^2/w^2) is sqrt(2/e)/w
            return std::sqrt(2.0 / std::numbers::e) / g.width;
        }
        std::optional<double> operator()(const CuspPower&) const { return std::nullopt; }
        std::optional<double> operator()(const MushroomBump&) const { return std::nullopt; }
    };
    return std::visit(V{}, desc_);
}

std::string Field::describe() const {
    std::ostringstream os;
    struct V {
        std::ostringstream& os;
        void operator()(const Constant& c) const { os << "constant(" << c.value << ")"; }
        void operator()(const Coordinate& c) const { os << "coordinate(axis=" << c.axis << ")"; }
        void operator()(const Sine& s) const { os << "sine(axis=" << s.axis << ",freq=" << s.freq << ")"; }
        void operator()(const GaussianBump& g) const {
            os << "gaussian(center=";
            for (std::size_t i = 0; i < g.center.size(); ++i) os << (i ? "," : "") << g.center[i];
            os << ";width=" << g.width << ")";
        }
        void operator()(const CuspPower& c) const { os << "cusp_power(nu=" << c.nu << ")"; }
        void operator()(const MushroomBump& b) const { os << "mushroom_bump(index=" << b.index << ")"; }
    };
    std::visit(V{os}, desc_);
    return os.str();
}

Field constant(double value) { return Field(Constant{value}); }

Field coordinate(int axis) {
    if (axis < 1) throw std::invalid_argument("coordinate: axis must be >= 1");
    return Field(Coordinate{axis});
}

Field sine(int axis, double freq) {
    if (axis < 1) throw std::invalid_argument("sine: axis must be >= 1");
    return Field(Sine{axis, freq});
}

Field gaussian_bump(std::vector<double> center, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be positive");
    return Field(GaussianBump{std::move(center), width});
}

Field cusp_power(double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("cusp_power: nu must be positive");
    return Field(CuspPower{nu});
}

Field mushroom_bump(const geom::Domain& mushroom_domain, int index) {
    if (mushroom_domain.kind() != geom::DomainKind::Mushroom)
        throw std::invalid_argument("mushroom_bump: domain is not a mushroom");
    const auto& parts = mushroom_domain.mushrooms();
    if (index < 0 || static_cast<std::size_t>(index) >= parts.size())
        throw std::out_of_range("mushroom_bump: stem index out of range");
    return Field(MushroomBump{parts[static_cast<std::size_t>(index)], index});
}

} // namespace fraclab::fields
