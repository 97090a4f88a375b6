#include <cmath>

#include <gtest/gtest.h>

#include "zdsim/attack_models.hpp"
#include "zdsim/presets.hpp"

using namespace zdsim;

namespace {

LtiSystem first_order_aux(Eigen::Index m) {
    return LtiSystem::make(-Matrix::Identity(m, m), Matrix::Identity(m, m), Matrix::Identity(m, m));
}

}  // namespace

TEST(AttackU, NoneIsZero) {
    const AttackScenario scn;
    EXPECT_TRUE(scn.attack_free());
    for (double t : {0.0, 10.0, 1e3}) EXPECT_EQ(a_u(scn, t, 2).norm(), 0.0);
}

TEST(AttackU, TankPresetOnsetEqualsA0) {
    const auto plant = presets::quadruple_tank();
    AttackScenario scn;
    scn.zd = ZdInputAttack{attack_direction(plant, unstable_zeros(plant).front()), 10.0};
    EXPECT_EQ(a_u(scn, 9.999, 2).norm(), 0.0);
    const Vector at = a_u(scn, 10.0, 2);
    EXPECT_EQ(at, scn.zd->zero.a0_real());
    // The reconstructed plant puts s0 0.4% off the published zero.
    EXPECT_NEAR(at(0), 0.33778, 1e-3);
    EXPECT_NEAR(at(1), -0.314538, 1e-3);
    const Vector later = a_u(scn, 110.0, 2);
    EXPECT_NEAR(later(0) / at(0), std::exp(scn.zd->zero.s0.real() * 100.0), 1e-12);
}

TEST(AttackU, AircraftPresetOnsetEqualsA0) {
    const auto plant = presets::aircraft_throttle();
    AttackScenario scn;
    scn.zd = ZdInputAttack{attack_direction(plant, unstable_zeros(plant).front(), {presets::kAircraftA0}), 10.0};
    EXPECT_NEAR(a_u(scn, 10.0, 1)(0), 0.0507, 1e-12);
}

TEST(AttackU, BiasAddsAfterOnset) {
    AttackScenario scn;
    scn.input_bias = BiasAttack{Vector::Constant(2, 0.5), 5.0};
    scn.output_bias = BiasAttack{Vector::Constant(1, 2.0), 6.0};
    EXPECT_EQ(a_u(scn, 4.0, 2).norm(), 0.0);
    EXPECT_EQ(a_u(scn, 5.0, 2)(1), 0.5);
    EXPECT_EQ(a_y(scn, 5.5, 1)(0), 0.0);
    EXPECT_EQ(a_y(scn, 6.0, 1)(0), 2.0);
}

TEST(CovertStep, UnforcedAtOriginStaysZero) {
    AttackScenario scn;
    scn.aux = AuxAttackKind::covert;
    scn.covert_state = {Vector::Zero(2), 0.0};
    const auto aux = first_order_aux(2);
    for (int i = 0; i < 100; ++i) scn = covert_step(scn, aux, Vector::Zero(2), 1e-2);
    EXPECT_EQ(scn.covert_state.values.norm(), 0.0);
    EXPECT_EQ(a_z_at_event(scn, aux, Vector::Zero(2)).norm(), 0.0);
}

TEST(CovertStep, FirstOrderLagSteadyState) {
    AttackScenario scn;
    scn.aux = AuxAttackKind::covert;
    scn.covert_state = {Vector::Zero(2), 0.0};
    const auto aux = first_order_aux(2);
    Vector c(2);
    c << 0.7, -0.2;
    for (int i = 0; i < 20000; ++i) scn = covert_step(scn, aux, c, 1e-3);
    // x_a(t) = c (1 - e^{-t}), t = 20.
    EXPECT_NEAR(scn.covert_state.values(0), 0.7 * (1.0 - std::exp(-20.0)), 1e-9);
    EXPECT_LT((a_z_at_event(scn, aux, c) + c).norm(), 1e-8);
}

TEST(CovertStep, CancelsAttackFootprintOnAuxOutput) {
    // z driven by a_u, x_a driven identically: C_z z + a_z == 0.
    const auto aux = LtiSystem::make((Matrix(2, 2) << -1.0, 0.3, 0.0, -2.0).finished(), Matrix::Identity(2, 2),
                                     Matrix::Identity(2, 2));
    AttackScenario scn;
    scn.aux = AuxAttackKind::covert;
    scn.covert_state = {Vector::Zero(2), 0.0};
    StateVector z{Vector::Zero(2), 0.0};
    const auto sig = [](double t) { return Vector::Constant(2, std::exp(0.05 * t)); };
    for (int i = 0; i < 3000; ++i) {
        z = integrate_step_with(aux, z, sig, 1e-3);
        scn = covert_step_with(scn, aux, aux.B, sig, 1e-3);
    }
    EXPECT_LT((aux.C * z.values + a_z_at_event(scn, aux, Vector::Zero(2))).norm(), 1e-14);
}

TEST(CovertStep, PlantInputMatrixOption) {
    AttackScenario scn;
    scn.aux = AuxAttackKind::covert;
    scn.covert_uses_plant_b = true;
    const auto aux = first_order_aux(2);
    const auto plant = presets::quadruple_tank();
    EXPECT_THROW(covert_input_matrix(scn, aux, plant), ConfigError);
    const auto square = LtiSystem::make(-Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2));
    EXPECT_EQ(covert_input_matrix(scn, aux, square)(0, 0), 2.0);
    scn.covert_uses_plant_b = false;
    EXPECT_EQ(covert_input_matrix(scn, aux, plant)(0, 0), 1.0);
}

TEST(AttackZ, EventValues) {
    const auto aux = first_order_aux(2);
    AttackScenario scn;
    Vector au(2);
    au << 0.1, -0.2;
    EXPECT_EQ(a_z_at_event(scn, aux, au).norm(), 0.0);
    scn.aux = AuxAttackKind::naive_negation;
    EXPECT_EQ(a_z_at_event(scn, aux, au), -au);
    scn.aux = AuxAttackKind::covert;
    scn.covert_state = {(Vector(2) << 0.3, 0.4).finished(), 0.0};
    const Vector az = a_z_at_event(scn, aux, au);
    EXPECT_EQ(az(0), -0.3);
    EXPECT_EQ(az(1), -0.4);
}

TEST(AttackZ, LeadPropagatesCovertState) {
    const auto aux = first_order_aux(1);
    AttackScenario scn;
    scn.aux = AuxAttackKind::covert;
    scn.covert_state = {Vector::Ones(1), 0.0};
    const Vector az = a_z_at_event(scn, aux, Vector::Zero(1), aux.B, 0.01);
    EXPECT_NEAR(az(0), -std::exp(-0.01), 1e-11);
    EXPECT_EQ(a_z_at_event(scn, aux, Vector::Zero(1), aux.B, 0.0)(0), -1.0);
}

TEST(AttackScenario, Validation) {
    AttackScenario scn;
    scn.input_bias = BiasAttack{Vector::Zero(3), 0.0};
    EXPECT_THROW(scn.validate(2, 2, 2), ConfigError);
    scn.input_bias.reset();
    scn.output_bias = BiasAttack{Vector::Zero(2), -1.0};
    EXPECT_THROW(scn.validate(2, 2, 2), ConfigError);
    scn.output_bias.reset();
    scn.aux = AuxAttackKind::covert;
    scn.covert_state = {Vector::Zero(3), 0.0};
    EXPECT_THROW(scn.validate(2, 2, 2), ConfigError);
    scn.covert_state = {};
    EXPECT_NO_THROW(scn.validate(2, 2, 2));
}

TEST(StealthGap, AbsoluteDifference) {
    EXPECT_EQ(stealth_equality_gap(0.02, 0.02), 0.0);
    EXPECT_NEAR(stealth_equality_gap(0.018, 0.02), 0.002, 1e-15);
    EXPECT_NEAR(stealth_equality_gap(0.02, 0.018), 0.002, 1e-15);
}
