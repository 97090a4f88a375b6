#pragma once

// Physical-plant half of the loop: plant, auxiliary system, held control
// input, both outgoing channels and measurement noise.

#include <cstdint>
#include <optional>
#include <random>
#include <utility>

#include "zdsim/attack_models.hpp"
#include "zdsim/lti_core.hpp"
#include "zdsim/triggering.hpp"

namespace zdsim {

enum class Channel { output, auxiliary };

inline const char* to_string(Channel c) { return c == Channel::output ? "output" : "auxiliary"; }

/// A timestamped transmission on one of the two plant-to-C&C channels. For
/// the auxiliary channel `time` is the computed event time t_j; `tick` is
/// the grid step on which the message was sent and received.
struct ChannelMessage {
    Channel channel = Channel::output;
    std::int64_t index = 0;
    std::int64_t tick = 0;
    double time = 0.0;
    Vector value;
};

/// Zero-mean Gaussian measurement noise, redrawn every `period` seconds and
/// held in between. Draws are indexed by time, not by integration step, so
/// the realization does not depend on dt.
class NoiseSource {
public:
    NoiseSource() = default;
    NoiseSource(std::uint64_t seed, double stddev, double period, Eigen::Index dim)
        : seed_(seed), stddev_(stddev), period_(period), dim_(dim), rng_(seed), current_(Vector::Zero(dim)) {
        if (!(period > 0.0)) throw ConfigError("noise period must be positive");
        if (!(stddev >= 0.0)) throw ConfigError("noise standard deviation must be >= 0");
    }

    static NoiseSource disabled(Eigen::Index dim) {
        NoiseSource n;
        n.dim_ = dim;
        n.current_ = Vector::Zero(dim);
        return n;
    }

    bool enabled() const { return period_ > 0.0 && stddev_ > 0.0; }

    const Vector& sample(double t) {
        if (!enabled()) return current_;
        const auto idx = static_cast<std::int64_t>(std::floor(t / period_ + 1e-9));
        if (idx < index_) {
            rng_.seed(seed_);
            index_ = -1;
        }
        while (index_ < idx) {
            for (Eigen::Index i = 0; i < dim_; ++i) current_(i) = stddev_ * normal_(rng_);
            ++index_;
        }
        return current_;
    }

private:
    std::uint64_t seed_ = 0;
    double stddev_ = 0.0;
    double period_ = 0.0;
    Eigen::Index dim_ = 0;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::int64_t index_ = -1;
    Vector current_;
};

struct PlantState {
    StateVector x;
    StateVector z;
    Vector held_u;
    DynamicEventState output_trigger;
    SelfTriggerState aux_trigger;
    Vector y_meas;        // latest (noisy) output sample
    Vector e_y;           // event error held over the current step
    std::int64_t output_events = 0;
    std::int64_t aux_events = 0;
    std::int64_t last_output_tick = -1;
    std::int64_t last_aux_tick = -1;
    std::int64_t aux_due_tick = 0;
};

struct PlantSideConfig {
    LtiSystem plant;
    LtiSystem aux;
    EventConstants constants;
    double dt = 1e-3;
};

class PlantSide {
public:
    PlantSide(PlantSideConfig cfg, Vector x0, Vector z0, double g0)
        : cfg_(std::move(cfg)), norms_(AuxNorms::of(cfg_.aux)) {
        const auto p = cfg_.plant.outputs();
        state_.x = {std::move(x0), 0.0};
        state_.z = {std::move(z0), 0.0};
        state_.held_u = Vector::Zero(cfg_.plant.inputs());
        state_.output_trigger = DynamicEventState::from(cfg_.constants, g0, Vector::Zero(p), 0.0);
        state_.aux_trigger.delta = cfg_.constants.delta;
        state_.aux_trigger.eps2 = cfg_.constants.eps2;
        state_.y_meas = Vector::Zero(p);
        state_.e_y = Vector::Zero(p);
    }

    const PlantState& state() const { return state_; }
    const AuxNorms& norms() const { return norms_; }
    const PlantSideConfig& config() const { return cfg_; }

    Vector y_true() const { return cfg_.plant.C * state_.x.values; }
    Vector yz_true() const { return cfg_.aux.C * state_.z.values; }

    /// Adds a state offset (used to place the plant on the zero direction at
    /// attack onset).
    void offset_state(const Vector& dx) { state_.x.values += dx; }

    /// Samples y + noise and evaluates the output event condition. Tick 0
    /// always transmits.
    std::optional<ChannelMessage> check_output(std::int64_t tick, const Vector& noise, const Vector& a_y) {
        const double now = tick * cfg_.dt;
        state_.y_meas = y_true() + noise;
        const bool fire = tick == 0 || output_event_violated(state_.output_trigger, state_.y_meas);
        if (!fire) {
            state_.e_y = state_.output_trigger.last_sent_y - state_.y_meas;
            return std::nullopt;
        }
        state_.output_trigger = record_output_event(state_.output_trigger, state_.y_meas, now);
        state_.e_y.setZero();
        state_.last_output_tick = tick;
        return ChannelMessage{Channel::output, state_.output_events++, tick, now, state_.y_meas + a_y};
    }

    /// New control value from the C&C. Reschedules the auxiliary channel
    /// because omega_j depends on ||u*||.
    void apply_control(const Vector& u, std::int64_t tick, const Vector& a_u_now) {
        state_.held_u = u;
        if (state_.aux_events == 0) return;
        const double now = tick * cfg_.dt;
        state_.aux_trigger = self_trigger_recompute_on_control_update(state_.aux_trigger, u_star_norm(a_u_now),
                                                                      norms_, now);
        state_.aux_due_tick = emission_tick(state_.aux_trigger.next_time, cfg_.dt, state_.last_aux_tick + 1);
    }

    bool aux_due(std::int64_t tick) const { return state_.aux_events == 0 || tick >= state_.aux_due_tick; }

    /// Computed time t_j of the auxiliary event served at `tick`.
    double aux_event_time(std::int64_t tick) const {
        return state_.aux_events == 0 ? tick * cfg_.dt : state_.aux_trigger.next_time;
    }

    /// Emits y_z(t_j) + a_z(t_j) when the self-triggered schedule is due and
    /// computes the next event time.
    std::optional<ChannelMessage> check_auxiliary(std::int64_t tick, const Vector& a_u_now, const Vector& a_z,
                                                  const Vector& channel_noise) {
        if (!aux_due(tick)) return std::nullopt;
        // The schedule chains on the computed event times; the grid tick only
        // decides when the message goes out. y_z is sampled at the computed
        // instant (a partial step ahead of the tick with u* held).
        const double anchor = aux_event_time(tick);
        const Vector yz = cfg_.aux.C * sample_ahead(cfg_.aux, state_.z, state_.held_u + a_u_now,
                                                    anchor - tick * cfg_.dt);
        state_.aux_trigger = self_trigger_schedule(state_.aux_trigger, yz, u_star_norm(a_u_now), norms_, anchor);
        state_.last_aux_tick = tick;
        state_.aux_due_tick = emission_tick(state_.aux_trigger.next_time, cfg_.dt, tick + 1);
        return ChannelMessage{Channel::auxiliary, state_.aux_events++, tick, anchor, yz + channel_noise + a_z};
    }

    /// Advances x, z and g by one step; u* = held_u + a_u(t) with a_u
    /// sampled at the RK4 stage times.
    template <class AttackFn>
    void integrate(AttackFn&& a_u_of_t) {
        const auto u_star = [&](double t) -> Vector { return state_.held_u + a_u_of_t(t); };
        state_.x = integrate_step_with(cfg_.plant, state_.x, u_star, cfg_.dt);
        state_.z = integrate_step_with(cfg_.aux, state_.z, u_star, cfg_.dt);
        state_.output_trigger = update_g(state_.output_trigger, state_.e_y, cfg_.dt);
    }

    double u_star_norm(const Vector& a_u_now) const { return (state_.held_u + a_u_now).norm(); }

private:
    PlantSideConfig cfg_;
    AuxNorms norms_;
    PlantState state_;
};

/// One full plant-side step with an explicit controller callback
/// u = controller(received y). Returns the messages emitted at this tick.
/// The simulation engine interleaves the same calls with the C&C half.
template <class Controller>
std::vector<ChannelMessage> plant_step(PlantSide& ps, const AttackScenario& scn, NoiseSource& noise,
                                       std::int64_t tick, Controller&& controller) {
    const auto& cfg = ps.config();
    const double t = tick * cfg.dt;
    const Eigen::Index m = cfg.plant.inputs(), p = cfg.plant.outputs();
    const Vector au = a_u(scn, t, m);
    std::vector<ChannelMessage> out;
    if (auto msg = ps.check_output(tick, noise.sample(t), a_y(scn, t, p))) {
        ps.apply_control(controller(msg->value), tick, au);
        out.push_back(std::move(*msg));
    }
    const Vector az = a_z_at_event(scn, cfg.aux, au);
    if (auto msg = ps.check_auxiliary(tick, au, az, Vector::Zero(cfg.aux.outputs()))) out.push_back(std::move(*msg));
    ps.integrate([&](double tau) { return a_u(scn, tau, m); });
    return out;
}

}  // namespace zdsim
