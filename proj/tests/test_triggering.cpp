#include <cmath>

#include <gtest/gtest.h>

#include "zdsim/triggering.hpp"

using namespace zdsim;

namespace {

const EventConstants kPaper{};
const AuxNorms kUnit{1.0, 1.0};

SelfTriggerState fresh(double delta = 20.0, double eps2 = 1e-4) {
    SelfTriggerState s;
    s.delta = delta;
    s.eps2 = eps2;
    return s;
}

}  // namespace

TEST(EventConstants, PaperValuesValidate) {
    EXPECT_NO_THROW(kPaper.validate());
    EXPECT_NEAR(kPaper.g_floor(), 9.9502e-6, 1e-10);
}

TEST(EventConstants, RangeViolationsRejected) {
    auto bad = kPaper;
    bad.sigma = 1.5;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = kPaper;
    bad.c1 = 1.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = kPaper;
    bad.c2 = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = kPaper;
    bad.delta = 0.5;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = kPaper;
    bad.eps2 = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(UpdateG, EquilibriumHolds) {
    auto s = DynamicEventState::from(kPaper, kPaper.eps / kPaper.c1, Vector::Zero(1), 0.0);
    for (int i = 0; i < 5000; ++i) s = update_g(s, Vector::Zero(1), 1e-3);
    EXPECT_NEAR(s.g, 1e-5, 1e-15);
}

TEST(UpdateG, HomogeneousDecay) {
    auto k = kPaper;
    k.eps = 0.0;
    auto s = DynamicEventState::from(k, 1.0, Vector::Zero(1), 0.0);
    for (int i = 0; i < 1000; ++i) s = update_g(s, Vector::Zero(1), 1e-3);
    EXPECT_NEAR(s.g, std::exp(-10.0), 1e-10);
}

TEST(UpdateG, StaysAboveLemmaFloorUnderEventCondition) {
    // Worst case allowed by the event condition: ||e_y||^2 just below sigma g.
    auto s = DynamicEventState::from(kPaper, 1e-3, Vector::Zero(1), 0.0);
    double lowest = s.g;
    for (int i = 0; i < 20000; ++i) {
        const Vector e = Vector::Constant(1, std::sqrt(0.999 * s.sigma * s.g));
        s = update_g(s, e, 1e-3);
        lowest = std::min(lowest, s.g);
    }
    EXPECT_GT(lowest, kPaper.g_floor());
    EXPECT_NEAR(s.g, kPaper.eps / (kPaper.c1 + 0.999 * kPaper.sigma * kPaper.c2), 1e-10);
}

TEST(OutputEvent, ConditionAndReset) {
    auto s = DynamicEventState::from(kPaper, 1e-5, Vector::Zero(2), 0.0);
    EXPECT_FALSE(output_event_violated(s, Vector::Zero(2)));
    Vector y(2);
    y << std::sqrt(2e-6), 0.0;
    EXPECT_TRUE(output_event_violated(s, y));
    s = record_output_event(s, y, 0.7);
    EXPECT_FALSE(output_event_violated(s, y));
    EXPECT_EQ(s.last_event_time, 0.7);
}

TEST(SelfTrigger, ZeroOutputGivesUnitInterval) {
    const auto s = self_trigger_schedule(fresh(), Vector::Zero(2), 0.0, kUnit, 3.0);
    EXPECT_NEAR(s.s_j, std::sqrt(2e-4) / std::sqrt(4.0 + 1600.0), 1e-15);
    EXPECT_NEAR(s.s_j, 3.5311e-4, 1e-8);
    EXPECT_DOUBLE_EQ(s.omega_j, s.s_j);
    EXPECT_DOUBLE_EQ(s.next_time - s.t_j, 1.0);
    EXPECT_NEAR(s.m_term(kUnit), 0.0, 1e-18);
}

TEST(SelfTrigger, FormulaByHand) {
    const AuxNorms norms{2.0, 0.5};
    Vector yz(2);
    yz << 0.3, 0.4;
    const auto s = self_trigger_schedule(fresh(), yz, 2.0, norms, 1.0);
    const double sj = (0.5 + std::sqrt(2e-4)) / std::sqrt(4.0 + 1600.0);
    const double m = 2.0 * 0.5 + 0.5 * 2.0;
    EXPECT_NEAR(s.s_j, sj, 1e-15);
    EXPECT_NEAR(s.m_term(norms), m, 1e-12);
    EXPECT_NEAR(s.next_time, 1.0 + sj / (2.0 * sj + m), 1e-15);
}

TEST(SelfTrigger, IntervalAboveLinearFloor) {
    const AuxNorms norms{1.7, 0.9};
    const double m2 = std::sqrt(2e-4) / std::sqrt(4.0 + 1600.0);
    for (double yz : {0.0, 1e-3, 0.1, 1.0, 10.0})
        for (double u : {0.0, 1e-2, 1.0, 100.0}) {
            const auto s = self_trigger_schedule(fresh(), Vector::Constant(1, yz), u, norms, 0.0);
            const double m = s.m_term(norms);
            EXPECT_GT(s.interval(), 0.0);
            EXPECT_GE(s.interval(), m2 / (1.7 * m2 + m) - 1e-15);
        }
}

// The rule bounds the error growth linearly, so with y_z(t_j) = 0 it fires
// before the exponential bound on ||e_z|| reaching M2 would allow:
// interval = x/(1+x)/a < ln(1+x)/a with x = a M2 / M.
TEST(SelfTrigger, RuleIntervalCanUndercutLogBound) {
    const AuxNorms norms{1.7, 0.9};
    const auto s = self_trigger_schedule(fresh(), Vector::Zero(1), 1.0, norms, 0.0);
    const double m = 0.9;
    const double x = 1.7 * s.s_j / m;
    EXPECT_NEAR(s.interval(), x / (1.0 + x) / 1.7, 1e-15);
    EXPECT_LT(s.interval(), zeno_gap_bound(1.7, m, 20.0, 1e-4));
    EXPECT_GT(s.interval(), 0.99 * zeno_gap_bound(1.7, m, 20.0, 1e-4));
}

TEST(SelfTrigger, ZeroAzRejected) {
    EXPECT_THROW(self_trigger_schedule(fresh(), Vector::Zero(1), 0.0, {0.0, 1.0}, 0.0), ConfigError);
}

TEST(SelfTriggerRecompute, SameInputLeavesScheduleUnchanged) {
    const auto s = self_trigger_schedule(fresh(), Vector::Constant(1, 0.2), 0.5, kUnit, 0.0);
    const auto r = self_trigger_recompute_on_control_update(s, 0.5, kUnit, 0.3 * s.interval());
    EXPECT_NEAR(r.next_time, s.next_time, 1e-15);
}

TEST(SelfTriggerRecompute, AtEventMatchesFreshSchedule) {
    const auto s = self_trigger_schedule(fresh(), Vector::Constant(1, 0.2), 0.5, kUnit, 4.0);
    const auto r = self_trigger_recompute_on_control_update(s, 1.5, kUnit, 4.0);
    const auto f = self_trigger_schedule(fresh(), Vector::Constant(1, 0.2), 1.5, kUnit, 4.0);
    EXPECT_NEAR(r.next_time, f.next_time, 1e-15);
}

TEST(SelfTriggerRecompute, DoubledRateHalfwayLeavesQuarter) {
    // omega = ||A_z|| s + ||A_z|| |y_z| + ||C_z B_z|| u; choose u so it doubles.
    const auto s = self_trigger_schedule(fresh(), Vector::Zero(1), 0.0, kUnit, 0.0);
    const double total = s.interval();
    const double u_new = s.omega_j;  // adds omega_j to M
    const auto r = self_trigger_recompute_on_control_update(s, u_new, kUnit, 0.5 * total);
    EXPECT_NEAR(r.omega_j, 2.0 * s.omega_j, 1e-18);
    EXPECT_NEAR(r.next_time - 0.5 * total, 0.25 * total, 1e-12);
}

TEST(SelfTriggerRecompute, ExhaustedBudgetFiresImmediately) {
    const auto s = self_trigger_schedule(fresh(), Vector::Zero(1), 0.0, kUnit, 0.0);
    const auto r = self_trigger_recompute_on_control_update(s, 3.0, kUnit, 2.0 * s.interval());
    EXPECT_EQ(r.next_time, 2.0 * s.interval());
}

TEST(SelfTriggerRecompute, PiecewiseBudgetAcrossTwoUpdates) {
    const auto s = self_trigger_schedule(fresh(), Vector::Zero(1), 0.0, kUnit, 0.0);
    const double w0 = s.omega_j;
    auto r = self_trigger_recompute_on_control_update(s, w0, kUnit, 0.25);  // rate 2 w0
    r = self_trigger_recompute_on_control_update(r, 0.0, kUnit, 0.5);       // back to w0
    const double used = w0 * 0.25 + 2.0 * w0 * 0.25;
    EXPECT_NEAR(r.next_time, 0.5 + (s.s_j - used) / w0, 1e-12);
}

TEST(ZenoBound, ClosedForms) {
    const double m2 = std::sqrt(2e-4) / std::sqrt(4.0 + 1600.0);
    EXPECT_NEAR(zeno_gap_bound(1.0, m2, 20.0, 1e-4), std::log(2.0), 1e-15);
    EXPECT_NEAR(zeno_gap_bound(1.0, 1.0, 20.0, 1e-4), 3.5305e-4, 1e-8);
    const double huge = zeno_gap_bound(1.0, 1e12, 20.0, 1e-4);
    EXPECT_GT(huge, 0.0);
    EXPECT_LT(huge, 1e-15);
}

TEST(EmissionTick, FloorsAndClamps) {
    EXPECT_EQ(emission_tick(0.0125, 1e-3, 0), 12);
    EXPECT_EQ(emission_tick(0.012, 1e-3, 0), 12);
    EXPECT_EQ(emission_tick(0.005, 1e-3, 9), 9);
}
