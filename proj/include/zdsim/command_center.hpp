#pragma once

// Command & Control half: controller, auxiliary-state observer, plant-state
// observer, replica auxiliary system with its own trigger schedule, the
// three residuals, and isolation.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include "zdsim/lti_core.hpp"
#include "zdsim/plant_side.hpp"
#include "zdsim/triggering.hpp"

namespace zdsim {

enum class Verdict { no_attack, non_zd_attack, zd_attack, zd_attack_covert_aux, unclassified };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::no_attack: return "no-attack";
        case Verdict::non_zd_attack: return "non-ZD attack";
        case Verdict::zd_attack: return "ZD attack";
        case Verdict::zd_attack_covert_aux: return "ZD attack with covert aux channel";
        case Verdict::unclassified: return "unclassified";
    }
    return "?";
}

/// Isolation table over the three alarm flags. Combinations the table does
/// not cover are reported as unclassified rather than guessed.
inline Verdict isolate(bool res_x_alarm, bool res_z_alarm, bool dis_t_alarm) {
    if (!res_x_alarm && !res_z_alarm && !dis_t_alarm) return Verdict::no_attack;
    if (res_x_alarm && res_z_alarm && dis_t_alarm) return Verdict::non_zd_attack;
    if (!res_x_alarm && res_z_alarm && dis_t_alarm) return Verdict::zd_attack;
    if (!res_x_alarm && !res_z_alarm && dis_t_alarm) return Verdict::zd_attack_covert_aux;
    return Verdict::unclassified;
}

struct Thresholds {
    double gamma_z = 0.01;
    double gamma_x = 1.0;
    double latency = 0.0;  // |dis_t| threshold, seconds
};

struct ResidualRecord {
    double t = 0.0;
    double res_z = 0.0;
    double dis_t = 0.0;
    double res_x = 0.0;
    bool res_z_alarm = false;
    bool dis_t_alarm = false;
    bool res_x_alarm = false;
    Verdict verdict = Verdict::no_attack;
};

inline ResidualRecord classify(double t, double res_z, double dis_t, double res_x, const Thresholds& th) {
    ResidualRecord r{t, res_z, dis_t, res_x};
    r.res_z_alarm = res_z > th.gamma_z;
    r.dis_t_alarm = std::abs(dis_t) > th.latency;
    r.res_x_alarm = res_x > th.gamma_x;
    r.verdict = isolate(r.res_x_alarm, r.res_z_alarm, r.dis_t_alarm);
    return r;
}

struct CcState {
    StateVector z_hat;
    StateVector x_hat;
    StateVector z_c;
    Vector held_yz_star;
    Vector held_y;
    Vector u;
    SelfTriggerState schedule;      // replica schedule (t_i^C, s_i^C, omega_i^C)
    std::int64_t predicted_tick = 0;
    std::int64_t last_arrival_tick = -1;
    std::int64_t arrivals = 0;
    double dis_t = 0.0;
    double last_cc_ratio = 0.0;     // s_i^C / omega_i^C at the latest fresh schedule
};

struct CommandCenterConfig {
    LtiSystem plant;
    LtiSystem aux;
    Matrix K;   // m x p output feedback
    Matrix L;   // auxiliary observer gain
    Matrix L2;  // plant observer gain
    EventConstants constants;
    Thresholds thresholds;
    double dt = 1e-3;
};

class CommandCenter {
public:
    CommandCenter(CommandCenterConfig cfg, Vector z0, Vector z_hat0, Vector x_hat0)
        : cfg_(std::move(cfg)), norms_(AuxNorms::of(cfg_.aux)) {
        const auto& aux = cfg_.aux;
        const auto& pl = cfg_.plant;
        // z_hat' = (A_z + L C_z) z_hat + [B_z, -L] [u; y_z*]
        Matrix bz_obs(aux.A.rows(), aux.B.cols() + cfg_.L.cols());
        bz_obs << aux.B, -cfg_.L;
        z_observer_ = {aux.A + cfg_.L * aux.C, bz_obs, aux.C};
        // x_hat' = (A + L2 C) x_hat + [B, -L2] [u; y(t_k)]
        Matrix bx_obs(pl.A.rows(), pl.B.cols() + cfg_.L2.cols());
        bx_obs << pl.B, -cfg_.L2;
        x_observer_ = {pl.A + cfg_.L2 * pl.C, bx_obs, pl.C};

        state_.z_c = {std::move(z0), 0.0};
        state_.z_hat = {std::move(z_hat0), 0.0};
        state_.x_hat = {std::move(x_hat0), 0.0};
        state_.held_yz_star = Vector::Zero(aux.C.rows());
        state_.held_y = Vector::Zero(pl.C.rows());
        state_.u = Vector::Zero(pl.B.cols());
        state_.schedule.delta = cfg_.constants.delta;
        state_.schedule.eps2 = cfg_.constants.eps2;
    }

    const CcState& state() const { return state_; }
    const AuxNorms& norms() const { return norms_; }
    const CommandCenterConfig& config() const { return cfg_; }

    Vector yz_replica() const { return cfg_.aux.C * state_.z_c.values; }

    /// Output-channel arrival: u = K y(t_k), and the replica schedule is
    /// recomputed exactly as the plant side does.
    Vector receive_output(const ChannelMessage& msg) {
        state_.held_y = msg.value;
        state_.u = cfg_.K * state_.held_y;
        if (state_.arrivals > 0) {
            state_.schedule = self_trigger_recompute_on_control_update(state_.schedule, state_.u.norm(), norms_,
                                                                       msg.time);
            state_.predicted_tick =
                emission_tick(state_.schedule.next_time, cfg_.dt, state_.last_arrival_tick + 1);
        }
        return state_.u;
    }

    /// Auxiliary-channel arrival: dis_t = t_i^C - t_j compares the computed
    /// time with the arrival clock (both on the grid); the next time is then
    /// computed from the replica output, chained on the message timestamp
    /// (no a_u is visible here).
    void receive_auxiliary(const ChannelMessage& msg) {
        state_.held_yz_star = msg.value;
        state_.dis_t = state_.arrivals == 0 ? 0.0
                                            : static_cast<double>(state_.predicted_tick - msg.tick) * cfg_.dt;
        const Vector yz_c =
            cfg_.aux.C * sample_ahead(cfg_.aux, state_.z_c, state_.u, msg.time - msg.tick * cfg_.dt);
        state_.schedule = self_trigger_schedule(state_.schedule, yz_c, state_.u.norm(), norms_, msg.time);
        state_.last_cc_ratio = state_.schedule.interval();
        state_.last_arrival_tick = msg.tick;
        state_.predicted_tick = emission_tick(state_.schedule.next_time, cfg_.dt, msg.tick + 1);
        ++state_.arrivals;
    }

    /// A computed event time that passes without an arrival counts as a
    /// (negative) discrepancy from that tick on.
    void check_overdue(std::int64_t tick) {
        if (state_.arrivals > 0 && tick > state_.predicted_tick && state_.last_arrival_tick < tick)
            state_.dis_t = static_cast<double>(state_.predicted_tick - tick) * cfg_.dt;
    }

    ResidualRecord residuals(double t) const {
        const double res_z = (state_.held_yz_star - cfg_.aux.C * state_.z_hat.values).norm();
        const double res_x = (state_.held_y - cfg_.plant.C * state_.x_hat.values).norm();
        return classify(t, res_z, state_.dis_t, res_x, cfg_.thresholds);
    }

    /// Advances z_hat, x_hat and the replica z_C one RK4 step with held inputs.
    void integrate() {
        Vector in_z(state_.u.size() + state_.held_yz_star.size());
        in_z << state_.u, state_.held_yz_star;
        Vector in_x(state_.u.size() + state_.held_y.size());
        in_x << state_.u, state_.held_y;
        state_.z_hat = integrate_step(z_observer_, state_.z_hat, in_z, cfg_.dt);
        state_.x_hat = integrate_step(x_observer_, state_.x_hat, in_x, cfg_.dt);
        state_.z_c = integrate_step(cfg_.aux, state_.z_c, state_.u, cfg_.dt);
    }

private:
    CommandCenterConfig cfg_;
    AuxNorms norms_;
    LtiSystem z_observer_;
    LtiSystem x_observer_;
    CcState state_;
};

}  // namespace zdsim
