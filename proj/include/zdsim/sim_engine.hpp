#pragma once

// Lockstep scheduler for the plant side and the C&C center on one shared
// clock, with attack/noise injection, trace recording and online monitors.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "zdsim/attack_models.hpp"
#include "zdsim/command_center.hpp"
#include "zdsim/design_toolbox.hpp"
#include "zdsim/plant_side.hpp"
#include "zdsim/triggering.hpp"

namespace zdsim {

struct NoiseConfig {
    bool enabled = false;
    double stddev = 0.1;   // per output component
    double period = 0.1;   // redraw period, seconds
    bool on_aux = false;   // also perturb the auxiliary channel
};

struct SimConfig {
    std::string preset;
    LtiSystem plant;
    DesignBundle bundle;
    double dt = 1e-3;
    double horizon = 100.0;
    std::uint64_t seed = 42;
    EventConstants constants;
    Thresholds thresholds;
    double settle_time = 0.0;        // alarms before this time are not latched
    AttackScenario scenario;
    NoiseConfig noise;
    double divergence_cap = 1e9;
    std::int64_t record_stride = 1;
    double g0 = 1e-3;
    Vector x0, z0, z_hat0, x_hat0;   // empty means zero
    bool zd_state_offset = true;     // place x on the zero direction at ZD onset

    Eigen::Index n() const { return plant.states(); }
    Eigen::Index nz() const { return bundle.aux.states(); }

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive, got " + std::to_string(dt));
        if (!(horizon >= 0.0) || !std::isfinite(horizon))
            throw ConfigError("horizon must be >= 0, got " + std::to_string(horizon));
        if (horizon > 0.0 && dt > horizon) throw ConfigError("dt must not exceed the horizon");
        constants.validate();
        if (!(thresholds.gamma_z > 0.0)) throw ConfigError("gamma_z must be positive");
        if (!(thresholds.gamma_x > 0.0)) throw ConfigError("gamma_x must be positive");
        if (!(thresholds.latency >= 0.0)) throw ConfigError("latency threshold must be >= 0");
        if (!(divergence_cap > 0.0)) throw ConfigError("divergence_cap must be positive");
        if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
        if (!(g0 > 0.0)) throw ConfigError("g0 must be positive");
        if (noise.enabled && (!(noise.stddev >= 0.0) || !(noise.period > 0.0)))
            throw ConfigError("noise needs stddev >= 0 and period > 0");
        plant.validate("plant");
        bundle.aux.validate("auxiliary system");
        build_augmented(plant, bundle.aux, bundle.K, bundle.L);
        if (bundle.L2.rows() != plant.states() || bundle.L2.cols() != plant.outputs())
            throw ConfigError("L2 must be " + std::to_string(plant.states()) + "x" +
                              std::to_string(plant.outputs()) + ", got " + shape_of(bundle.L2));
        const auto check = [](const Vector& v, Eigen::Index dim, const char* what) {
            if (v.size() != 0 && v.size() != dim)
                throw ConfigError(std::string(what) + " must have " + std::to_string(dim) + " entries");
        };
        check(x0, n(), "x0");
        check(z0, nz(), "z0");
        check(z_hat0, nz(), "z_hat0");
        check(x_hat0, n(), "x_hat0");
        scenario.validate(plant.inputs(), plant.outputs(), nz());
        if (scenario.aux == AuxAttackKind::naive_negation && bundle.aux.outputs() != plant.inputs())
            throw ConfigError("naive negation needs the auxiliary output dimension to equal the input dimension");
        if (scenario.aux == AuxAttackKind::covert) covert_input_matrix(scenario, bundle.aux, plant);
    }
};

struct EventRecord {
    Channel channel = Channel::output;
    std::int64_t index = 0;
    std::int64_t tick = 0;
    double arrival_time = 0.0;
    double scheduled_time = 0.0;      // C&C computed time (aux) or arrival (output)
    double plant_next_time = 0.0;     // real-valued next time computed at this event (aux)
    double m_term = 0.0;              // M at this event (aux)
    Vector value;
};

struct MonitorReport {
    std::int64_t lemma1_violations = 0;
    std::int64_t event_condition_violations = 0;
    std::int64_t lemma2_violations = 0;
    std::int64_t budget_violations = 0;     // ||e_z|| >= s_j (informational)
    std::int64_t per_event_zeno_violations = 0;  // gap < bound(M at that event) (informational)
    double min_g = std::numeric_limits<double>::infinity();
    double g_floor = 0.0;
    double min_aux_gap = std::numeric_limits<double>::infinity();       // between computed event instants
    double min_aux_tick_gap = std::numeric_limits<double>::infinity();  // between emission ticks (grid-quantized)
    double min_output_gap = std::numeric_limits<double>::infinity();
    double max_m = 0.0;
    double zeno_bound = std::numeric_limits<double>::infinity();
    double max_lemma2_ratio = 0.0;           // max ||e_z||^2 / (delta ||y_z||^2 + eps2)

    bool zeno_ok() const { return min_aux_gap >= zeno_bound; }
    bool valid() const {
        return lemma1_violations == 0 && event_condition_violations == 0 && lemma2_violations == 0 && zeno_ok() &&
               min_output_gap > 0.0;
    }
};

enum class SimStatus { completed, diverged };

inline const char* to_string(SimStatus s) { return s == SimStatus::completed ? "completed" : "diverged"; }

struct RunSummary {
    double max_res_z = 0.0;
    double max_res_x = 0.0;
    double max_abs_dis_t = 0.0;
    double first_res_z_alarm = std::numeric_limits<double>::quiet_NaN();
    double first_dis_t_alarm = std::numeric_limits<double>::quiet_NaN();
    double first_res_x_alarm = std::numeric_limits<double>::quiet_NaN();
    std::int64_t res_z_alarm_steps = 0;
    std::int64_t dis_t_alarm_steps = 0;
    std::int64_t res_x_alarm_steps = 0;
    std::int64_t nonzero_dis_t_events = 0;  // aux arrivals with dis_t != 0
    std::int64_t output_events = 0;
    std::int64_t aux_events = 0;
    std::int64_t steps = 0;
    double final_time = 0.0;

    bool res_z_latched() const { return !std::isnan(first_res_z_alarm); }
    bool dis_t_latched() const { return !std::isnan(first_dis_t_alarm); }
    bool res_x_latched() const { return !std::isnan(first_res_x_alarm); }
    Verdict verdict() const { return isolate(res_x_latched(), res_z_latched(), dis_t_latched()); }
};

struct SimTrace {
    std::vector<std::string> columns;
    std::vector<double> data;  // row-major, columns.size() per row
    std::vector<ResidualRecord> residuals;
    std::vector<EventRecord> events;
    MonitorReport monitors;
    RunSummary summary;
    SimStatus status = SimStatus::completed;
    std::string message;

    std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
    std::size_t column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) throw ConfigError("trace has no column '" + name + "'");
        return static_cast<std::size_t>(it - columns.begin());
    }
    double at(std::size_t row, std::size_t col) const { return data[row * columns.size() + col]; }
    std::vector<double> series(const std::string& name) const {
        const auto c = column(name);
        std::vector<double> out(rows());
        for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, c);
        return out;
    }
    std::vector<const EventRecord*> events_on(Channel ch) const {
        std::vector<const EventRecord*> out;
        for (const auto& e : events)
            if (e.channel == ch) out.push_back(&e);
        return out;
    }
};

namespace detail {

inline void add_columns(std::vector<std::string>& cols, const std::string& prefix, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) cols.push_back(prefix + "_" + std::to_string(i));
}

inline void append(std::vector<double>& row, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
}

inline Vector or_zero(const Vector& v, Eigen::Index dim) { return v.size() == 0 ? Vector::Zero(dim) : v; }

}  // namespace detail

inline SimTrace run(const SimConfig& cfg) {
    cfg.validate();
    const LtiSystem& plant = cfg.plant;
    const LtiSystem& aux = cfg.bundle.aux;
    const Eigen::Index n = plant.states(), m = plant.inputs(), p = plant.outputs();
    const Eigen::Index nz = aux.states(), pz = aux.outputs();
    const double dt = cfg.dt;
    const auto steps = static_cast<std::int64_t>(std::llround(cfg.horizon / dt));

    const Vector x0 = detail::or_zero(cfg.x0, n);
    const Vector z0 = detail::or_zero(cfg.z0, nz);
    PlantSide ps({plant, aux, cfg.constants, dt}, x0, z0, cfg.g0);
    CommandCenter cc({plant, aux, cfg.bundle.K, cfg.bundle.L, cfg.bundle.L2, cfg.constants, cfg.thresholds, dt}, z0,
                     detail::or_zero(cfg.z_hat0, nz), detail::or_zero(cfg.x_hat0, n));
    NoiseSource noise = cfg.noise.enabled ? NoiseSource(cfg.seed, cfg.noise.stddev, cfg.noise.period, p)
                                          : NoiseSource::disabled(p);
    NoiseSource aux_noise = cfg.noise.enabled && cfg.noise.on_aux
                                ? NoiseSource(cfg.seed ^ 0x9e3779b97f4a7c15ULL, cfg.noise.stddev, cfg.noise.period, pz)
                                : NoiseSource::disabled(pz);
    AttackScenario scn = cfg.scenario;
    if (scn.aux == AuxAttackKind::covert && scn.covert_state.values.size() == 0)
        scn.covert_state = {Vector::Zero(nz), 0.0};
    const Matrix covert_b = scn.aux == AuxAttackKind::covert ? covert_input_matrix(scn, aux, plant) : aux.B;
    const auto a_u_fn = [&](double tau) { return a_u(scn, tau, m); };

    SimTrace trace;
    auto& cols = trace.columns;
    cols.push_back("t");
    detail::add_columns(cols, "x", n);
    detail::add_columns(cols, "z", nz);
    detail::add_columns(cols, "zhat", nz);
    detail::add_columns(cols, "zc", nz);
    detail::add_columns(cols, "xhat", n);
    cols.push_back("g");
    detail::add_columns(cols, "u", m);
    detail::add_columns(cols, "ustar", m);
    detail::add_columns(cols, "y", p);
    detail::add_columns(cols, "yz", pz);
    for (const char* c : {"x_norm", "z_norm", "res_z", "dis_t", "res_x", "output_event", "aux_event"})
        cols.push_back(c);
    std::vector<double> row;
    row.reserve(cols.size());

    auto& mon = trace.monitors;
    auto& sum = trace.summary;
    mon.g_floor = cfg.constants.g_floor();
    const double az_norm = ps.norms().az;
    bool zd_offset_done = !cfg.zd_state_offset || !scn.zd;
    std::int64_t prev_aux_tick = -1, prev_out_tick = -1;
    double prev_aux_anchor = 0.0;

    for (std::int64_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (!zd_offset_done && t >= scn.zd->start_time) {
            ps.offset_state(zd_state(scn.zd->zero, t - scn.zd->start_time));
            zd_offset_done = true;
        }

        // (1) attack signals at t
        const Vector au = a_u(scn, t, m);
        const Vector ay = a_y(scn, t, p);

        // (2)-(3) output channel: event check, controller update, plant input hold
        bool out_event = false;
        if (auto msg = ps.check_output(k, noise.sample(t), ay)) {
            out_event = true;
            const Vector u = cc.receive_output(*msg);
            ps.apply_control(u, k, au);
            if (prev_out_tick >= 0) mon.min_output_gap = std::min(mon.min_output_gap, (k - prev_out_tick) * dt);
            prev_out_tick = k;
            trace.events.push_back({Channel::output, msg->index, k, t, t, t, 0.0, msg->value});
        }

        // auxiliary channel: self-triggered emission and C&C arrival
        bool aux_event = false;
        const double prev_s = ps.state().aux_trigger.s_j;
        const Vector yz_now = ps.yz_true();
        if (ps.aux_due(k)) {
            const double anchor = ps.aux_event_time(k);
            const Vector az = a_z_at_event(scn, aux, au, covert_b, anchor - t);
            const Vector dz = aux_noise.sample(t);
            auto msg = ps.check_auxiliary(k, au, az, dz);
            aux_event = true;
            const double cc_sched = cc.state().arrivals == 0 ? t : cc.state().predicted_tick * dt;
            cc.receive_auxiliary(*msg);
            if (cc.state().dis_t != 0.0) ++sum.nonzero_dis_t_events;
            const auto& st = ps.state().aux_trigger;
            const double mterm = st.m_term(ps.norms());
            mon.max_m = std::max(mon.max_m, mterm);
            if (prev_aux_tick >= 0) {
                mon.min_aux_gap = std::min(mon.min_aux_gap, anchor - prev_aux_anchor);
                mon.min_aux_tick_gap = std::min(mon.min_aux_tick_gap, (k - prev_aux_tick) * dt);
            }
            prev_aux_tick = k;
            prev_aux_anchor = anchor;
            trace.events.push_back({Channel::auxiliary, msg->index, k, t, cc_sched, st.next_time, mterm, msg->value});
        }
        cc.check_overdue(k);

        // track M after output-driven recomputation as well
        if (out_event && ps.state().aux_events > 0)
            mon.max_m = std::max(mon.max_m, ps.state().aux_trigger.m_term(ps.norms()));

        // (5) residuals and monitors at t
        const ResidualRecord rec = cc.residuals(t);
        const auto& pst = ps.state();
        const double g = pst.output_trigger.g;
        mon.min_g = std::min(mon.min_g, g);
        if (!(g > mon.g_floor)) ++mon.lemma1_violations;
        if (!out_event && !(pst.e_y.squaredNorm() < cfg.constants.sigma * g)) ++mon.event_condition_violations;
        if (!aux_event && pst.aux_events > 0) {
            const double ez2 = (pst.aux_trigger.last_sent_yz - yz_now).squaredNorm();
            const double rhs = cfg.constants.delta * yz_now.squaredNorm() + cfg.constants.eps2;
            mon.max_lemma2_ratio = std::max(mon.max_lemma2_ratio, ez2 / rhs);
            if (!(ez2 < rhs)) ++mon.lemma2_violations;
            if (!(std::sqrt(ez2) < prev_s)) ++mon.budget_violations;
        }

        sum.max_res_z = std::max(sum.max_res_z, rec.res_z);
        sum.max_res_x = std::max(sum.max_res_x, rec.res_x);
        sum.max_abs_dis_t = std::max(sum.max_abs_dis_t, std::abs(rec.dis_t));
        if (t >= cfg.settle_time) {
            if (rec.res_z_alarm) {
                ++sum.res_z_alarm_steps;
                if (std::isnan(sum.first_res_z_alarm)) sum.first_res_z_alarm = t;
            }
            if (rec.dis_t_alarm) {
                ++sum.dis_t_alarm_steps;
                if (std::isnan(sum.first_dis_t_alarm)) sum.first_dis_t_alarm = t;
            }
            if (rec.res_x_alarm) {
                ++sum.res_x_alarm_steps;
                if (std::isnan(sum.first_res_x_alarm)) sum.first_res_x_alarm = t;
            }
        }

        // Built every step so a divergence stop can still record its last step.
        const bool on_stride = k % cfg.record_stride == 0 || k == steps;
        {
            row.clear();
            row.push_back(t);
            detail::append(row, pst.x.values);
            detail::append(row, pst.z.values);
            detail::append(row, cc.state().z_hat.values);
            detail::append(row, cc.state().z_c.values);
            detail::append(row, cc.state().x_hat.values);
            row.push_back(g);
            detail::append(row, pst.held_u);
            detail::append(row, pst.held_u + au);
            detail::append(row, pst.y_meas);
            detail::append(row, yz_now);
            row.push_back(pst.x.values.norm());
            row.push_back(pst.z.values.norm());
            row.push_back(rec.res_z);
            row.push_back(rec.dis_t);
            row.push_back(rec.res_x);
            row.push_back(out_event ? 1.0 : 0.0);
            row.push_back(aux_event ? 1.0 : 0.0);
            if (on_stride) {
                trace.data.insert(trace.data.end(), row.begin(), row.end());
                trace.residuals.push_back(rec);
            }
        }
        sum.steps = k + 1;
        sum.final_time = t;
        if (k == steps) break;

        // (4) integrate all continuous states over [t, t + dt]
        ps.integrate(a_u_fn);
        if (scn.aux == AuxAttackKind::covert) {
            AttackScenario next = covert_step_with(scn, aux, covert_b, a_u_fn, dt);
            scn.covert_state = std::move(next.covert_state);
        }
        cc.integrate();

        const auto& s2 = ps.state();
        const auto& c2 = cc.state();
        const double biggest = std::max({max_abs(s2.x.values), max_abs(s2.z.values), max_abs(c2.z_hat.values),
                                         max_abs(c2.x_hat.values), max_abs(c2.z_c.values)});
        if (!std::isfinite(biggest) || biggest > cfg.divergence_cap) {
            trace.status = SimStatus::diverged;
            if (!on_stride) {
                trace.data.insert(trace.data.end(), row.begin(), row.end());
                trace.residuals.push_back(rec);
            }
            trace.message = "state magnitude exceeded the divergence cap at t=" + std::to_string(t + dt);
            break;
        }
    }

    sum.output_events = ps.state().output_events;
    sum.aux_events = ps.state().aux_events;
    if (mon.max_m > 0.0) mon.zeno_bound = zeno_gap_bound(az_norm, mon.max_m, cfg.constants.delta, cfg.constants.eps2);

    // Per-event check: each gap against the bound evaluated at the M that
    // scheduled it.
    const EventRecord* prev = nullptr;
    for (const auto& e : trace.events) {
        if (e.channel != Channel::auxiliary) continue;
        if (prev) {
            const double gap = e.arrival_time - prev->arrival_time;
            if (gap < zeno_gap_bound(az_norm, prev->m_term, cfg.constants.delta, cfg.constants.eps2))
                ++mon.per_event_zeno_violations;
        }
        prev = &e;
    }
    return trace;
}

struct BatchEntry {
    std::optional<SimTrace> trace;
    std::string error;
    bool ok() const { return trace.has_value(); }
};

/// Independent runs, possibly concurrent; results keep input order and a
/// failing entry does not affect the others.
inline std::vector<BatchEntry> batch(const std::vector<SimConfig>& configs, unsigned max_threads = 0) {
    std::vector<BatchEntry> out(configs.size());
    if (configs.empty()) return out;
    unsigned workers = max_threads != 0 ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                out[i].trace = run(configs[i]);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    return out;
}

/// gamma_x = 3 * max attack-free res_x over a calibration run, plus the
/// noise standard deviation as margin.
inline double calibrate_gamma_x(SimConfig cfg, double calibration_horizon = 500.0) {
    cfg.scenario = AttackScenario{};
    cfg.horizon = calibration_horizon;
    cfg.thresholds.gamma_x = std::numeric_limits<double>::max();
    cfg.record_stride = std::max<std::int64_t>(cfg.record_stride, 1000);
    const SimTrace tr = run(cfg);
    const double margin = cfg.noise.enabled ? cfg.noise.stddev : 1e-9;
    return 3.0 * tr.summary.max_res_x + margin;
}

}  // namespace zdsim
