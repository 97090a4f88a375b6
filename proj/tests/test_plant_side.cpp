#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "zdsim/plant_side.hpp"
#include "zdsim/presets.hpp"

using namespace zdsim;

namespace {

PlantSideConfig tank_config() {
    return {presets::quadruple_tank(), presets::tank_bundle().aux, presets::constants(), 1e-3};
}

}  // namespace

TEST(Noise, DisabledIsZero) {
    auto n = NoiseSource::disabled(2);
    EXPECT_FALSE(n.enabled());
    EXPECT_EQ(n.sample(3.0).norm(), 0.0);
}

TEST(Noise, HeldWithinPeriodAndIndexedByTime) {
    NoiseSource a(42, 0.1, 0.1, 2), b(42, 0.1, 0.1, 2);
    const Vector first = a.sample(0.0);
    EXPECT_EQ(a.sample(0.05), first);
    const Vector at = a.sample(0.73);
    EXPECT_NE(at, first);
    // b jumps straight to the same period without visiting the others.
    EXPECT_EQ(b.sample(0.7), at);
    // Rewinding reproduces the earlier draw.
    EXPECT_EQ(a.sample(0.01), first);
    NoiseSource c(43, 0.1, 0.1, 2);
    EXPECT_NE(c.sample(0.0), first);
}

TEST(Noise, MomentsMatchConfiguredDeviation) {
    NoiseSource n(7, 0.1, 0.1, 1);
    double sum = 0.0, sq = 0.0;
    const int count = 20000;
    for (int i = 0; i < count; ++i) {
        const double v = n.sample(0.1 * i)(0);
        sum += v;
        sq += v * v;
    }
    EXPECT_NEAR(sum / count, 0.0, 4.0 * 0.1 / std::sqrt(count));
    EXPECT_NEAR(std::sqrt(sq / count), 0.1, 0.003);
}

TEST(Noise, RejectsBadParameters) {
    EXPECT_THROW(NoiseSource(1, 0.1, 0.0, 1), ConfigError);
    EXPECT_THROW(NoiseSource(1, -0.1, 0.1, 1), ConfigError);
}

TEST(PlantSide, EquilibriumOnlyPeriodicAuxEvents) {
    PlantSide ps(tank_config(), Vector::Zero(4), Vector::Zero(2), 1e-3);
    AttackScenario scn;
    auto noise = NoiseSource::disabled(2);
    std::vector<ChannelMessage> log;
    for (std::int64_t k = 0; k <= 5000; ++k) {
        auto msgs = plant_step(ps, scn, noise, k, [](const Vector& y) { return Vector(presets::tank_k() * y); });
        log.insert(log.end(), msgs.begin(), msgs.end());
    }
    std::vector<std::int64_t> aux_ticks;
    int outputs = 0;
    for (const auto& m : log) {
        if (m.channel == Channel::output) {
            ++outputs;
            EXPECT_EQ(m.tick, 0);
        } else {
            aux_ticks.push_back(m.tick);
            EXPECT_EQ(m.value.norm(), 0.0);
        }
    }
    EXPECT_EQ(outputs, 1);
    // y_z = 0 and u* = 0 collapse the interval to 1/||A_z|| = 1 s.
    EXPECT_EQ(aux_ticks, (std::vector<std::int64_t>{0, 1000, 2000, 3000, 4000, 5000}));
    EXPECT_EQ(ps.state().x.values.norm(), 0.0);
}

TEST(PlantSide, OutputMessageCarriesChannelInjection) {
    PlantSide ps(tank_config(), Vector::Ones(4), Vector::Zero(2), 1e-3);
    Vector ay(2);
    ay << 5.0, -5.0;
    const auto msg = ps.check_output(0, Vector::Zero(2), ay);
    ASSERT_TRUE(msg.has_value());
    EXPECT_EQ(msg->value, ps.y_true() + ay);
    // The trigger itself tracks the uncorrupted measurement.
    EXPECT_EQ(ps.state().output_trigger.last_sent_y, ps.y_true());
}

TEST(PlantSide, AuxEmissionsLandOnScheduledTicks) {
    PlantSide ps(tank_config(), Vector::Constant(4, 2.0), Vector::Zero(2), 1e-3);
    AttackScenario scn;
    NoiseSource noise(42, 0.1, 0.1, 2);
    double scheduled = 0.0;
    int checked = 0;
    for (std::int64_t k = 0; k <= 20000; ++k) {
        const auto msgs = plant_step(ps, scn, noise, k, [](const Vector& y) { return Vector(presets::tank_k() * y); });
        // An output event in the same tick recomputes the schedule first.
        const bool recomputed = std::any_of(msgs.begin(), msgs.end(),
                                            [](const ChannelMessage& m) { return m.channel == Channel::output; });
        for (const auto& m : msgs) {
            if (m.channel != Channel::auxiliary) continue;
            if (m.index > 0) {
                if (!recomputed) EXPECT_NEAR(m.time, scheduled, 1e-12);
                EXPECT_EQ(m.tick, emission_tick(m.time, 1e-3, 0));
                ++checked;
            }
        }
        // Output events may recompute the schedule, so track it every tick.
        if (ps.state().aux_events > 0) scheduled = ps.state().aux_trigger.next_time;
        // No emission strictly between schedules.
        if (ps.state().aux_events > 0 && k + 1 < ps.state().aux_due_tick) {
            EXPECT_FALSE(ps.aux_due(k + 1));
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(PlantSide, NoInputAttackMeansHeldInputActs) {
    // Integrating with a_u = 0 must equal integrating the plant with held_u.
    auto cfg = tank_config();
    PlantSide ps(cfg, Vector::Ones(4), Vector::Zero(2), 1e-3);
    Vector u(2);
    u << 0.2, -0.1;
    ps.apply_control(u, 0, Vector::Zero(2));
    ps.integrate([](double) { return Vector::Zero(2); });
    const auto ref = integrate_step(cfg.plant, {Vector::Ones(4), 0.0}, u, 1e-3);
    EXPECT_EQ(ps.state().x.values, ref.values);
}

TEST(PlantSide, ZdAttackGrowsAtZeroRate) {
    const auto plant = presets::quadruple_tank();
    AttackScenario scn;
    const auto zd = attack_direction(plant, unstable_zeros(plant).front());
    scn.zd = ZdInputAttack{zd, 0.0};
    PlantSide ps(tank_config(), zd.x0_real(), Vector::Zero(2), 1e-3);
    auto noise = NoiseSource::disabled(2);
    double n100 = 0.0, ymax = 0.0;
    int outputs = 0;
    for (std::int64_t k = 0; k < 200000; ++k) {
        const auto msgs = plant_step(ps, scn, noise, k, [](const Vector& y) { return Vector(presets::tank_k() * y); });
        for (const auto& m : msgs) outputs += m.channel == Channel::output;
        if (k == 100000) n100 = ps.state().x.values.norm();
        ymax = std::max(ymax, ps.y_true().norm());
    }
    const double rate = std::log(ps.state().x.values.norm() / n100) / 100.0;
    EXPECT_NEAR(rate, presets::kTankZero, 0.1 * presets::kTankZero);
    EXPECT_LT(ymax, 1e-6);
    EXPECT_EQ(outputs, 1);
}

TEST(PlantSide, AttackFreeEventsAreSparse) {
    PlantSide ps(tank_config(), Vector::Zero(4), Vector::Zero(2), 1e-3);
    AttackScenario scn;
    NoiseSource noise(42, 0.1, 0.1, 2);
    const std::int64_t steps = 500000;
    for (std::int64_t k = 0; k < steps; ++k)
        plant_step(ps, scn, noise, k, [](const Vector& y) { return Vector(presets::tank_k() * y); });
    EXPECT_GT(ps.state().output_events, 1);
    EXPECT_LT(ps.state().output_events, steps);
    EXPECT_GT(ps.state().aux_events, 1);
    EXPECT_LT(ps.state().aux_events, steps);
}
