#pragma once

// The two case-study plants with their attack scenarios.

#include <cmath>
#include <string>
#include <vector>

#include "zdsim/design_toolbox.hpp"
#include "zdsim/sim_engine.hpp"
#include "zdsim/zero_dynamics.hpp"

namespace zdsim::presets {

// Published zero and direction for the quadruple tank.
inline constexpr double kTankZero = 0.01273;
inline Vector tank_x0_reference() { return (Vector(4) << 0.0, 0.0, -0.63597, 0.618476).finished(); }
inline Vector tank_a0_reference() { return (Vector(2) << 0.33778, -0.314538).finished(); }

// Published zero and direction for the aircraft throttle-to-speed loop.
inline constexpr double kAircraftZero = 0.0601;
inline Vector aircraft_x0_reference() { return (Vector(2) << 0.4327, 0.9001).finished(); }
inline constexpr double kAircraftA0 = 0.0507;

/// Linearized quadruple-tank process in its non-minimum-phase operating
/// point (tank areas 28/32 cm^2, outlet areas 0.071/0.057 cm^2, levels
/// 12.6/13.0/4.8/4.9 cm, pump gains 3.14/3.29, valve splits 0.43/0.34,
/// sensor gain 0.5 V/cm).
inline LtiSystem quadruple_tank() {
    const double g = 981.0, kc = 0.5;
    const double area[4] = {28.0, 32.0, 28.0, 32.0};
    const double outlet[4] = {0.071, 0.057, 0.071, 0.057};
    const double level[4] = {12.6, 13.0, 4.8, 4.9};
    const double k1 = 3.14, k2 = 3.29, g1 = 0.43, g2 = 0.34;
    double T[4];
    for (int i = 0; i < 4; ++i) T[i] = area[i] / outlet[i] * std::sqrt(2.0 * level[i] / g);

    Matrix A = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) A(i, i) = -1.0 / T[i];
    A(0, 2) = area[2] / (area[0] * T[2]);
    A(1, 3) = area[3] / (area[1] * T[3]);
    Matrix B = Matrix::Zero(4, 2);
    B(0, 0) = g1 * k1 / area[0];
    B(1, 1) = g2 * k2 / area[1];
    B(2, 1) = (1.0 - g2) * k2 / area[2];
    B(3, 0) = (1.0 - g1) * k1 / area[3];
    Matrix C = Matrix::Zero(2, 4);
    C(0, 0) = kc;
    C(1, 1) = kc;
    return LtiSystem::make(A, B, C);
}

/// Two-state throttle-to-speed realization whose input matrix is built so
/// that (s0, x0, a0) above is an exact zero direction.
inline LtiSystem aircraft_throttle() {
    Matrix A(2, 2);
    A << -0.032, -0.16, 0.16, 0.0;
    const Vector x0 = aircraft_x0_reference();
    const Matrix B = (kAircraftZero * Matrix::Identity(2, 2) - A) * x0 / kAircraftA0;
    Matrix C(1, 2);
    C << 0.9001, -0.4327;
    return LtiSystem::make(A, B, C);
}

inline EventConstants constants() { return {0.1, 10.0, 0.5, 1e-4, 20.0, 1e-4}; }

inline Matrix tank_k() { return (Matrix(2, 2) << 0.0094, 0.0295, -0.0042, 0.0344).finished(); }

inline DesignBundle tank_bundle() {
    DesignOptions opts;
    opts.K = tank_k();
    opts.L = -9.0 * Matrix::Identity(2, 2);
    return design_gains(quadruple_tank(), -1.0, opts);
}

inline DesignBundle aircraft_bundle() {
    DesignOptions opts;
    opts.K = Matrix::Constant(1, 1, -0.05);
    opts.L = Matrix::Constant(1, 1, -9.0);
    return design_gains(aircraft_throttle(), -1.0, opts);
}

// 3 x max attack-free res_x (500 s, seed 42, noise on) + noise std,
// computed by calibrate_gamma_x and frozen here.
inline constexpr double kTankGammaX = 1.30852;
inline constexpr double kAircraftGammaX = 1.28278;

inline SimConfig tank_base() {
    SimConfig c;
    c.plant = quadruple_tank();
    c.bundle = tank_bundle();
    c.dt = 1e-3;
    c.horizon = 1000.0;
    c.seed = 42;
    c.constants = constants();
    c.thresholds = {0.01, kTankGammaX, 0.0};
    c.noise = {true, 0.1, 0.1, false};
    c.record_stride = 10;
    return c;
}

inline SimConfig aircraft_base() {
    SimConfig c;
    c.plant = aircraft_throttle();
    c.bundle = aircraft_bundle();
    c.dt = 1e-3;
    c.horizon = 300.0;
    c.seed = 42;
    c.constants = constants();
    c.thresholds = {0.01, kAircraftGammaX, 0.0};
    c.noise = {true, 0.1, 0.1, false};
    c.record_stride = 10;
    return c;
}

inline ZdInputAttack zd_attack(const LtiSystem& plant, double start = 10.0) {
    const auto zeros = unstable_zeros(plant);
    if (zeros.empty()) throw ConfigError("plant has no unstable invariant zero");
    return {attack_direction(plant, zeros.front()), start};
}

inline SimConfig with_zd(SimConfig c, AuxAttackKind aux) {
    c.scenario.zd = zd_attack(c.plant);
    c.scenario.aux = aux;
    return c;
}

/// Additive constant FDI on both input and output channels.
inline SimConfig with_bias(SimConfig c) {
    const Eigen::Index m = c.plant.inputs(), p = c.plant.outputs();
    c.scenario.input_bias = BiasAttack{Vector::Constant(m, 0.5), 10.0};
    c.scenario.output_bias = BiasAttack{Vector::Constant(p, 5.0), 10.0};
    return c;
}

inline const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"case1-s1",      "case1-s2",   "case1-s3",      "case2",
                                            "case1-nominal", "case1-bias", "case2-nominal", "case2-bias"};
    return n;
}

/// case1-s1: ZD attack, clean auxiliary channel
/// case1-s2: ZD attack, naive a_z = -a_u
/// case1-s3: ZD attack, covert a_z
/// case2:    aircraft, ZD attack with covert a_z
inline SimConfig by_name(const std::string& name) {
    SimConfig c;
    if (name == "case1-s1") c = with_zd(tank_base(), AuxAttackKind::none);
    else if (name == "case1-s2") c = with_zd(tank_base(), AuxAttackKind::naive_negation);
    else if (name == "case1-s3") c = with_zd(tank_base(), AuxAttackKind::covert);
    else if (name == "case2") c = with_zd(aircraft_base(), AuxAttackKind::covert);
    else if (name == "case1-nominal") c = tank_base();
    else if (name == "case1-bias") c = with_bias(tank_base());
    else if (name == "case2-nominal") c = aircraft_base();
    else if (name == "case2-bias") c = with_bias(aircraft_base());
    else throw ConfigError("unknown preset '" + name + "'");
    c.preset = name;
    return c;
}

}  // namespace zdsim::presets
