#pragma once

// Attack signal generators: the zero-dynamics input attack, additive bias
// FDI on the input/output channels, and naive or covert FDI on the
// auxiliary channel.

#include <cmath>
#include <optional>
#include <string>

#include "zdsim/lti_core.hpp"
#include "zdsim/zero_dynamics.hpp"

namespace zdsim {

enum class AuxAttackKind { none, naive_negation, covert };

inline const char* to_string(AuxAttackKind k) {
    switch (k) {
        case AuxAttackKind::none: return "none";
        case AuxAttackKind::naive_negation: return "naive_negation";
        case AuxAttackKind::covert: return "covert";
    }
    return "?";
}

struct ZdInputAttack {
    ZeroData zero;
    double start_time = 10.0;
};

/// Constant additive injection switched on at start_time.
struct BiasAttack {
    Vector value;
    double start_time = 10.0;
};

struct AttackScenario {
    std::optional<ZdInputAttack> zd;
    std::optional<BiasAttack> input_bias;
    std::optional<BiasAttack> output_bias;
    AuxAttackKind aux = AuxAttackKind::none;
    /// Drive the covert generator with the plant's B instead of B_z
    /// (literal reading of the covert design; requires matching dimensions).
    bool covert_uses_plant_b = false;
    /// Covert generator state x_a (empty means zero).
    StateVector covert_state;

    bool attack_free() const {
        return !zd && !input_bias && !output_bias && aux == AuxAttackKind::none;
    }
    bool has_input_attack() const { return zd.has_value() || input_bias.has_value(); }

    void validate(Eigen::Index m, Eigen::Index p, Eigen::Index nz) const {
        if (zd) {
            if (zd->start_time < 0.0) throw ConfigError("attack.input.start_time must be >= 0");
            if (zd->zero.a0.size() != m) throw ConfigError("zero-dynamics a0 has wrong dimension");
        }
        if (input_bias) {
            if (input_bias->start_time < 0.0) throw ConfigError("attack.input.start_time must be >= 0");
            if (input_bias->value.size() != m)
                throw ConfigError("attack.input.value must have " + std::to_string(m) + " entries");
        }
        if (output_bias) {
            if (output_bias->start_time < 0.0) throw ConfigError("attack.output.start_time must be >= 0");
            if (output_bias->value.size() != p)
                throw ConfigError("attack.output.value must have " + std::to_string(p) + " entries");
        }
        if (aux == AuxAttackKind::covert && covert_state.values.size() != 0 &&
            covert_state.values.size() != nz)
            throw ConfigError("covert attack state must match the auxiliary state dimension");
    }
};

/// Input-channel injection a_u(t): zero before onset, then the ZD signal
/// a0 e^{s0 (t - start)} plus any constant bias.
inline Vector a_u(const AttackScenario& scn, double t, Eigen::Index m) {
    Vector out = Vector::Zero(m);
    if (scn.zd && t >= scn.zd->start_time) out += zd_signal(scn.zd->zero, t - scn.zd->start_time);
    if (scn.input_bias && t >= scn.input_bias->start_time) out += scn.input_bias->value;
    return out;
}

/// Output-channel injection a_y(t).
inline Vector a_y(const AttackScenario& scn, double t, Eigen::Index p) {
    if (scn.output_bias && t >= scn.output_bias->start_time) return scn.output_bias->value;
    return Vector::Zero(p);
}

/// Input matrix of the covert generator x_a' = A_z x_a + B a_u.
inline const Matrix& covert_input_matrix(const AttackScenario& scn, const LtiSystem& aux,
                                         const LtiSystem& plant) {
    if (!scn.covert_uses_plant_b) return aux.B;
    if (plant.B.rows() != aux.A.rows() || plant.B.cols() != aux.B.cols())
        throw ConfigError("covert_uses_plant_b requires B to be " + shape_of(aux.B) + ", got " +
                          shape_of(plant.B));
    return plant.B;
}

/// Advances the covert generator one RK4 step with a_u sampled at the stage
/// times (the same sampling the plant uses, so the injected signal cancels
/// the attack's footprint on y_z to rounding error).
template <class AttackFn>
AttackScenario covert_step_with(AttackScenario scn, const LtiSystem& aux, const Matrix& input_matrix,
                                AttackFn&& a_u_of_t, double dt) {
    if (scn.aux != AuxAttackKind::covert) return scn;
    const LtiSystem gen{aux.A, input_matrix, aux.C};
    scn.covert_state = integrate_step_with(gen, scn.covert_state, a_u_of_t, dt);
    return scn;
}

/// Zero-order-hold variant.
inline AttackScenario covert_step(AttackScenario scn, const LtiSystem& aux, const Vector& a_u_now,
                                  double dt) {
    return covert_step_with(std::move(scn), aux, aux.B, [&](double) { return a_u_now; }, dt);
}

/// Value injected on the auxiliary channel at an event t_j; held until the
/// next event.
inline Vector a_z_at_event(const AttackScenario& scn, const LtiSystem& aux, const Vector& a_u_now) {
    switch (scn.aux) {
        case AuxAttackKind::none: return Vector::Zero(aux.C.rows());
        case AuxAttackKind::naive_negation: return -a_u_now;
        case AuxAttackKind::covert: return -(aux.C * scn.covert_state.values);
    }
    return Vector::Zero(aux.C.rows());
}

/// Covert injection for an event whose computed time lies `lead` seconds
/// after the current grid point: the generator is propagated to that instant
/// the same way the plant side samples y_z.
inline Vector a_z_at_event(const AttackScenario& scn, const LtiSystem& aux, const Vector& a_u_now,
                           const Matrix& input_matrix, double lead) {
    if (scn.aux != AuxAttackKind::covert || !(lead > 0.0)) return a_z_at_event(scn, aux, a_u_now);
    const LtiSystem gen{aux.A, input_matrix, aux.C};
    return -(aux.C * sample_ahead(gen, scn.covert_state, a_u_now, lead));
}

/// |s_j/omega_j - s_i^C/omega_i^C|: what a stealthy auxiliary-channel
/// attacker would need to drive to zero.
inline double stealth_equality_gap(double plant_side_ratio, double cc_ratio) {
    return std::abs(plant_side_ratio - cc_ratio);
}

}  // namespace zdsim
