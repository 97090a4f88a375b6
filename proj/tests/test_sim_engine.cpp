#include <cmath>

#include <gtest/gtest.h>

#include "zdsim/presets.hpp"
#include "zdsim/sim_engine.hpp"

using namespace zdsim;

namespace {

SimConfig short_run(const std::string& preset, double horizon) {
    SimConfig c = presets::by_name(preset);
    c.horizon = horizon;
    return c;
}

}  // namespace

TEST(Run, ZeroHorizonRecordsInitialRow) {
    const auto tr = run(short_run("case1-nominal", 0.0));
    EXPECT_EQ(tr.rows(), 1u);
    EXPECT_EQ(tr.at(0, tr.column("t")), 0.0);
    EXPECT_EQ(tr.status, SimStatus::completed);
}

TEST(Run, ColumnLayoutAndIncreasingTime) {
    auto cfg = short_run("case1-nominal", 5.0);
    cfg.record_stride = 7;
    const auto tr = run(cfg);
    for (const char* name : {"t", "x_0", "x_3", "z_1", "zhat_0", "zc_1", "xhat_3", "g", "u_1", "ustar_0", "y_1",
                             "yz_0", "x_norm", "z_norm", "res_z", "dis_t", "res_x", "output_event", "aux_event"})
        EXPECT_NO_THROW(tr.column(name)) << name;
    EXPECT_THROW(tr.column("nope"), ConfigError);
    const auto t = tr.series("t");
    for (std::size_t i = 1; i < t.size(); ++i) EXPECT_LT(t[i - 1], t[i]);
    EXPECT_DOUBLE_EQ(t.back(), 5.0);
    EXPECT_EQ(tr.residuals.size(), tr.rows());
    for (const auto& e : tr.events) EXPECT_NEAR(e.arrival_time, e.tick * cfg.dt, 1e-12);
}

TEST(Run, InvalidConstantsRejectedBeforeStepping) {
    auto cfg = short_run("case1-nominal", 1.0);
    cfg.constants.sigma = 1.5;
    EXPECT_THROW(run(cfg), ConfigError);
    cfg = short_run("case1-nominal", 1.0);
    cfg.dt = 2.0;
    EXPECT_THROW(run(cfg), ConfigError);
    cfg = short_run("case1-nominal", 1.0);
    cfg.x0 = Vector::Zero(3);
    EXPECT_THROW(run(cfg), ConfigError);
}

TEST(Run, DeterministicTraces) {
    const auto cfg = short_run("case1-s3", 40.0);
    const auto a = run(cfg);
    const auto b = run(cfg);
    EXPECT_EQ(a.columns, b.columns);
    EXPECT_TRUE(a.data == b.data);
    ASSERT_EQ(a.events.size(), b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        EXPECT_EQ(a.events[i].tick, b.events[i].tick);
        EXPECT_TRUE(a.events[i].value == b.events[i].value);
    }
}

TEST(Run, SeedChangesNoiseRealization) {
    auto cfg = short_run("case1-nominal", 5.0);
    const auto a = run(cfg);
    cfg.seed = 43;
    const auto b = run(cfg);
    EXPECT_FALSE(a.data == b.data);
}

TEST(Run, AttackFreeMonitorsHold) {
    const auto tr = run(short_run("case1-nominal", 100.0));
    EXPECT_TRUE(tr.monitors.valid());
    EXPECT_EQ(tr.monitors.lemma1_violations, 0);
    EXPECT_EQ(tr.monitors.event_condition_violations, 0);
    EXPECT_EQ(tr.monitors.lemma2_violations, 0);
    EXPECT_GT(tr.monitors.min_g, tr.monitors.g_floor);
    EXPECT_EQ(tr.summary.nonzero_dis_t_events, 0);
    EXPECT_EQ(tr.summary.verdict(), Verdict::no_attack);
}

TEST(Run, DivergenceCapTruncates) {
    auto cfg = short_run("case1-s1", 1000.0);
    cfg.divergence_cap = 5.0;
    const auto tr = run(cfg);
    EXPECT_EQ(tr.status, SimStatus::diverged);
    EXPECT_LT(tr.summary.final_time, 1000.0);
    EXPECT_NE(tr.message.find("divergence cap"), std::string::npos);
    EXPECT_DOUBLE_EQ(tr.series("t").back(), tr.summary.final_time);
}

TEST(Run, ZdAlarmTimeStableUnderHalvedStep) {
    auto coarse = short_run("case1-s1", 30.0);
    auto fine = coarse;
    fine.dt = coarse.dt / 2.0;
    fine.record_stride = 2 * coarse.record_stride;
    const auto a = run(coarse);
    const auto b = run(fine);
    ASSERT_TRUE(a.summary.res_z_latched());
    ASSERT_TRUE(b.summary.res_z_latched());
    EXPECT_LT(std::abs(a.summary.first_res_z_alarm - b.summary.first_res_z_alarm), 2.0 * coarse.dt);
}

TEST(Batch, EmptyInEmptyOut) { EXPECT_TRUE(batch({}).empty()); }

TEST(Batch, CaseOneScenariosKeepOrderAndOutcomes) {
    std::vector<SimConfig> cfgs{short_run("case1-s1", 60.0), short_run("case1-s2", 60.0),
                                short_run("case1-s3", 60.0), short_run("case1-s1", 60.0)};
    cfgs.push_back(cfgs[0]);
    cfgs.back().constants.c1 = 0.5;  // invalid: isolated to this entry
    const auto out = batch(cfgs, 3);
    ASSERT_EQ(out.size(), 5u);
    for (std::size_t i = 0; i < 4; ++i) ASSERT_TRUE(out[i].ok()) << out[i].error;
    EXPECT_FALSE(out[4].ok());
    EXPECT_NE(out[4].error.find("c1"), std::string::npos);

    EXPECT_EQ(out[0].trace->summary.verdict(), Verdict::zd_attack);
    EXPECT_TRUE(out[1].trace->summary.res_z_latched());
    EXPECT_LE(out[2].trace->summary.max_res_z, 0.01);
    EXPECT_TRUE(out[2].trace->summary.dis_t_latched());
    // Same config twice in one batch.
    EXPECT_TRUE(out[0].trace->data == out[3].trace->data);
    // Channel injection does not move trigger times.
    EXPECT_TRUE(out[0].trace->series("dis_t") == out[1].trace->series("dis_t"));
}

TEST(Calibration, NoiseFreeMarginIsTiny) {
    auto cfg = short_run("case1-nominal", 10.0);
    cfg.noise.enabled = false;
    const double g = calibrate_gamma_x(cfg, 10.0);
    EXPECT_GT(g, 0.0);
    const auto tr = run([&] {
        auto c = cfg;
        c.thresholds.gamma_x = 1e300;
        return c;
    }());
    EXPECT_NEAR(g, 3.0 * tr.summary.max_res_x + 1e-9, 1e-12);
}

TEST(Calibration, FrozenTankThreshold) {
    EXPECT_NEAR(calibrate_gamma_x(presets::tank_base()), presets::kTankGammaX, 1e-5);
}
