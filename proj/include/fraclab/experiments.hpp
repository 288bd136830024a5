#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclab/fields.hpp"
#include "fraclab/functionals.hpp"
#include "fraclab/geometry.hpp"
#include "fraclab/mc.hpp"
#include "fraclab/scaling.hpp"
#include "fraclab/thresholds.hpp"

namespace fraclab::experiments {

using nlohmann::json;

// Every check tolerance is a configuration value; these are the defaults the
// acceptance suite runs with.
struct Tolerances {
    double sigma = 3.0;            // MC slack in standard errors
    double num_slope = 0.10;       // norm-side scaling slope
    double semi_slope = 0.15;      // seminorm-side scaling slope
    double trend_dead = 0.05;      // dead zone of the quotient-trend detector
    double trend_increasing = 0.10; // |slope| needed to call the quotient increasing
    double exponent = 0.15;        // truncated-integral divergence exponents
    double mushroom_q = 0.15;      // |empirical - analytic| for the q bisection
    double cusp_b = 0.10;          // |empirical - analytic| for the b bisection
    double convergent_floor = -0.05; // fitted exponent above this counts as convergent
};

struct Verdict {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ExperimentReport {
    std::string name;
    json parameters;
    json measured;
    json predicted;
    std::vector<Verdict> verdicts;
    double runtime_seconds = 0.0;

    bool passed() const;
    json to_json() const;
    // Everything except the runtime: bit-exact reproducible from the config.
    json fingerprint() const;
};

json estimate_json(const mc::Estimate& e);
json threshold_report_json(const thresholds::ThresholdReport<double>& r);
json scaling_fit_json(const scaling::ScalingFit& f);

// Explicit-constant inequality check: for each field,
//   inf_c ||f-c||_p^p  <=  diam^{n+sp}/|Omega| * [f]_{s,p, full}^p
// with sigma-slack on both Monte Carlo sides.
ExperimentReport verify_explicit_constant(const geom::Domain& dom,
                                          const std::vector<fields::Field>& test_fields, double s,
                                          double p, const mc::McConfig& cfg,
                                          const Tolerances& tol = {});

// Generates `count` gaussian bumps with centers in the domain and widths
// drawn from [0.15, 0.5] * diam, deterministically from the seed.
std::vector<fields::Field> random_bump_fields(const geom::Domain& dom, int count,
                                              std::uint64_t seed);

struct MushroomStudyConfig {
    double beta = 2.0;
    double p = 2.0;
    double q = 2.0;
    double s = 0.5;
    double a = 0.0;
    double b = 0.0;
    double cube_side = 1.0;
    std::vector<double> r_list = {0.25, 0.125, 0.0625, 0.03125};
    int resolution = 2048;
    mc::McConfig mc;
    Tolerances tol;
};

// Single-mushroom scaling family: fits the norm and seminorm slopes against
// the predicted exponents and classifies the quotient trend.
ExperimentReport mushroom_scaling_study(const MushroomStudyConfig& cfg);

struct CuspStudyConfig {
    double alpha = 0.5;
    double p = 2.0;
    double q = 2.0;
    double s = 0.5;
    double b = 0.5;
    double nu = 1.75;
    std::vector<double> eps_list = {0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625,
                                    0.001953125};
    int resolution = 2048;
    mc::McConfig mc;
    Tolerances tol;
};

// Truncated power integrals of x_n^{-nu} over {x_n > eps}; fits the eps-decay
// exponents of both sides and compares them with the analytic values.
ExperimentReport cusp_divergence_study(const CuspStudyConfig& cfg);

enum class BisectionStudy { MushroomQ, CuspB };

struct BisectionConfig {
    BisectionStudy study = BisectionStudy::MushroomQ;
    double lo = 1.1, hi = 2.0; // bracket for the free exponent (q or b)
    double tol = 0.02;         // bracket width at which bisection stops
    // mushroom study fixed parameters
    MushroomStudyConfig mushroom;
    // cusp study fixed parameters; nu is scanned over nu_grid
    CuspStudyConfig cusp;
    std::vector<double> nu_grid; // empty: built from [0.5, 3.0] step 0.05
};

ExperimentReport threshold_bisection(const BisectionConfig& cfg);

struct SweepConfig {
    geom::Domain domain = geom::Domain::unit_cube(2);
    fields::Field field = fields::coordinate(1);
    std::vector<double> s_list = {0.5};
    std::vector<double> p_list = {2.0};
    std::vector<double> q_list = {2.0};
    std::vector<double> a_list = {0.0};
    std::vector<double> b_list = {0.0};
    double tau = 0.5;
    mc::McConfig mc;
};

// Evaluates the quotient and all applicable thresholds over the grid; one CSV
// row per tuple. Individual cell failures are recorded in-row.
void sweep(const SweepConfig& cfg, std::ostream& csv_out);

} // namespace fraclab::experiments
