#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fraclab/geometry.hpp"

namespace fraclab::fields {

// Named scalar-field families. Fields are immutable value objects; eval is
// pure and reentrant.
struct Constant {
    double value = 0.0;
};

struct Coordinate {
    int axis = 1; // 1-based
};

struct Sine {
    int axis = 1;    // 1-based
    double freq = 1; // f = sin(2*pi*freq*x_axis)
};

struct GaussianBump {
    std::vector<double> center;
    double width = 1.0; // f = exp(-|x-c|^2 / width^2)
};

struct CuspPower {
    double nu = 1.0; // f = x_n^{-nu}, defined for x_n > 0
};

// 0 on the cube and other mushrooms, 1 on the cap, linear in the stem-axis
// coordinate along the stem (ramp normalized by the stem height).
struct MushroomBump {
    geom::MushroomPart part;
    int index = 0;
};

class Field {
public:
    using Desc = std::variant<Constant, Coordinate, Sine, GaussianBump, CuspPower, MushroomBump>;

    explicit Field(Desc d) : desc_(std::move(d)) {}

    double eval(std::span<const double> x) const;

    // Global Lipschitz bound when one is available (required by the
    // deterministic grid oracle).
    std::optional<double> lipschitz_bound() const;

    const Desc& descriptor() const { return desc_; }
    std::string describe() const;

private:
    Desc desc_;
};

Field constant(double value);
Field coordinate(int axis);
Field sine(int axis, double freq);
Field gaussian_bump(std::vector<double> center, double width);
Field cusp_power(double nu);
Field mushroom_bump(const geom::Domain& mushroom_domain, int index);

} // namespace fraclab::fields
