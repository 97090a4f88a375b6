#pragma once

// Output-channel dynamic event triggering and auxiliary-channel
// self-triggering.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "zdsim/lti_core.hpp"

namespace zdsim {

/// Event-condition constants shared by both channels.
struct EventConstants {
    double sigma = 0.1;  // output threshold scale, in (0, 1)
    double c1 = 10.0;    // g decay rate, > 1
    double c2 = 0.5;     // e_y feedback into g, in (0, 1)
    double eps = 1e-4;   // g forcing, > 0
    double delta = 20.0; // auxiliary condition gain, > 1
    double eps2 = 1e-4;  // auxiliary condition offset, > 0

    void validate() const {
        if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0,1), got " + std::to_string(sigma));
        if (!(c1 > 1.0)) throw ConfigError("c1 must be > 1, got " + std::to_string(c1));
        if (!(c2 > 0.0 && c2 < 1.0)) throw ConfigError("c2 must lie in (0,1), got " + std::to_string(c2));
        if (!(eps > 0.0)) throw ConfigError("eps must be > 0, got " + std::to_string(eps));
        if (!(delta > 1.0)) throw ConfigError("delta must be > 1, got " + std::to_string(delta));
        if (!(eps2 > 0.0)) throw ConfigError("eps2 must be > 0, got " + std::to_string(eps2));
    }

    /// Lower bound eps / (c1 + sigma c2) that g never crosses.
    double g_floor() const { return eps / (c1 + sigma * c2); }

    /// sqrt(2 eps2) / sqrt(4 + 4 delta^2): the smallest possible budget s_j.
    double budget_floor() const { return std::sqrt(2.0 * eps2) / std::sqrt(4.0 + 4.0 * delta * delta); }
};

// ---------------------------------------------------------------------------
// Output channel

struct DynamicEventState {
    double g = 1e-3;
    double sigma = 0.1;
    double c1 = 10.0;
    double c2 = 0.5;
    double eps = 1e-4;
    Vector last_sent_y;
    double last_event_time = 0.0;

    static DynamicEventState from(const EventConstants& k, double g0, Vector y0, double t0) {
        return {g0, k.sigma, k.c1, k.c2, k.eps, std::move(y0), t0};
    }
};

/// One RK4 step of g' = -c1 g - c2 ||e_y||^2 + eps with e_y held over the step.
inline DynamicEventState update_g(DynamicEventState state, const Vector& e_y, double dt) {
    if (!(dt > 0.0)) throw ConfigError("update_g: dt must be positive");
    const double forcing = state.eps - state.c2 * e_y.squaredNorm();
    const auto f = [&](double g) { return -state.c1 * g + forcing; };
    const double g = state.g;
    const double k1 = f(g);
    const double k2 = f(g + 0.5 * dt * k1);
    const double k3 = f(g + 0.5 * dt * k2);
    const double k4 = f(g + dt * k3);
    state.g = g + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return state;
}

/// True iff ||y(t_k) - y_now||^2 >= sigma g, i.e. the event condition is
/// violated and y_now must be transmitted.
inline bool output_event_violated(const DynamicEventState& state, const Vector& y_now) {
    return (state.last_sent_y - y_now).squaredNorm() >= state.sigma * state.g;
}

inline DynamicEventState record_output_event(DynamicEventState state, const Vector& y_now, double now) {
    state.last_sent_y = y_now;
    state.last_event_time = now;
    return state;
}

// ---------------------------------------------------------------------------
// Auxiliary channel

/// Operator norms of the auxiliary system that enter the schedule.
struct AuxNorms {
    double az = 1.0;    // ||A_z||
    double czbz = 1.0;  // ||C_z B_z||

    static AuxNorms of(const LtiSystem& aux) {
        AuxNorms n{spectral_norm(aux.A), spectral_norm(aux.C * aux.B)};
        if (!(n.az > 0.0)) throw ConfigError("self-triggering requires a nonzero A_z");
        return n;
    }
};

/// Self-triggered schedule for the auxiliary channel. Budget consumption is
/// tracked piecewise so that several control updates inside one interval
/// are handled: on each segment the error grows at most at rate omega_j.
struct SelfTriggerState {
    double t_j = 0.0;
    double next_time = 0.0;
    double s_j = 0.0;
    double omega_j = 0.0;
    double delta = 20.0;
    double eps2 = 1e-4;
    Vector last_sent_yz;
    double yz_norm = 0.0;       // ||y_z(t_j)||
    double budget_used = 0.0;   // integral of omega over [t_j, last_update)
    double last_update = 0.0;

    double interval() const { return next_time - t_j; }
    /// M = ||A_z|| ||y_z(t_j)|| + ||C_z B_z|| ||u*||, recovered from omega.
    double m_term(const AuxNorms& norms) const { return omega_j - norms.az * s_j; }
};

inline double self_trigger_budget(double yz_norm, double delta, double eps2) {
    return (yz_norm + std::sqrt(2.0 * eps2)) / std::sqrt(4.0 + 4.0 * delta * delta);
}

/// Fresh schedule at an auxiliary event:
///   s_j = (||y_z(t_j)|| + sqrt(2 eps2)) / sqrt(4 + 4 delta^2)
///   M   = ||A_z|| ||y_z(t_j)|| + ||C_z B_z|| ||u*||
///   omega_j = ||A_z|| s_j + M,  next = t_j + s_j / omega_j.
inline SelfTriggerState self_trigger_schedule(SelfTriggerState state, const Vector& yz_at_event,
                                              double u_star_norm, const AuxNorms& norms, double now) {
    if (!(norms.az > 0.0)) throw ConfigError("self_trigger_schedule: ||A_z|| must be positive");
    state.t_j = now;
    state.last_sent_yz = yz_at_event;
    state.yz_norm = yz_at_event.norm();
    state.s_j = self_trigger_budget(state.yz_norm, state.delta, state.eps2);
    const double m = norms.az * state.yz_norm + norms.czbz * u_star_norm;
    state.omega_j = norms.az * state.s_j + m;
    state.next_time = now + state.s_j / state.omega_j;
    state.budget_used = 0.0;
    state.last_update = now;
    return state;
}

/// Reschedules after a control update at `now`: the budget consumed so far
/// is charged at the previous rate, the remainder at the new one. When the
/// budget is exhausted the event is due immediately.
inline SelfTriggerState self_trigger_recompute_on_control_update(SelfTriggerState state,
                                                                 double new_u_star_norm,
                                                                 const AuxNorms& norms, double now) {
    const double elapsed = std::max(0.0, now - state.last_update);
    state.budget_used += state.omega_j * elapsed;
    const double remaining = std::max(0.0, state.s_j - state.budget_used);
    const double m = norms.az * state.yz_norm + norms.czbz * new_u_star_norm;
    state.omega_j = norms.az * state.s_j + m;
    state.last_update = now;
    state.next_time = remaining > 0.0 ? now + remaining / state.omega_j : now;
    return state;
}

/// Lower bound on the auxiliary inter-event time for a given M:
///   (1/||A_z||) ln(||A_z|| M2 / M + 1),  M2 = sqrt(2 eps2)/sqrt(4 + 4 delta^2).
inline double zeno_gap_bound(double az_norm, double m, double delta, double eps2) {
    if (!(m > 0.0)) return std::numeric_limits<double>::infinity();
    const double m2 = std::sqrt(2.0 * eps2) / std::sqrt(4.0 + 4.0 * delta * delta);
    return std::log1p(az_norm * m2 / m) / az_norm;
}

// ---------------------------------------------------------------------------
// Simulation grid

/// Tick at which a scheduled time is served: the last grid point not after
/// `time`, but never earlier than `earliest`. Both the plant and the C&C
/// replica use this so identical schedules land on identical ticks.
inline std::int64_t emission_tick(double time, double dt, std::int64_t earliest) {
    const auto k = static_cast<std::int64_t>(std::floor(time / dt + 1e-9));
    return std::max(k, earliest);
}

}  // namespace zdsim
