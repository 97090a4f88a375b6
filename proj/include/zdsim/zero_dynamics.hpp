#pragma once

// Invariant zeros of square LTI systems and zero-dynamics attack synthesis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "zdsim/lti_core.hpp"

namespace zdsim {

/// Zero frequency s0 together with the state/input pair (x0, a0) that keeps
/// the output identically zero under x(0) = x0, a(t) = a0 e^{s0 t}.
struct ZeroData {
    Complex s0;
    CVector x0;
    CVector a0;

    bool is_real() const { return s0.imag() == 0.0; }
    Vector x0_real() const { return x0.real(); }
    Vector a0_real() const { return a0.real(); }
};

/// Rosenbrock system matrix [sI - A, -B; C, 0] evaluated at s.
inline CMatrix rosenbrock_at(const LtiSystem& sys, Complex s) {
    const Eigen::Index n = sys.states(), m = sys.inputs(), p = sys.outputs();
    CMatrix out = CMatrix::Zero(n + p, n + m);
    out.topLeftCorner(n, n) = s * CMatrix::Identity(n, n) - sys.A.cast<Complex>();
    out.topRightCorner(n, m) = -sys.B.cast<Complex>();
    out.bottomLeftCorner(p, n) = sys.C.cast<Complex>();
    return out;
}

/// Real-valued Rosenbrock matrix for real s.
inline Matrix rosenbrock_at(const LtiSystem& sys, double s) {
    const Eigen::Index n = sys.states(), m = sys.inputs(), p = sys.outputs();
    Matrix out = Matrix::Zero(n + p, n + m);
    out.topLeftCorner(n, n) = s * Matrix::Identity(n, n) - sys.A;
    out.topRightCorner(n, m) = -sys.B;
    out.bottomLeftCorner(p, n) = sys.C;
    return out;
}

inline constexpr double kZeroRankTolerance = 1e-8;

/// Normal rank of the pencil, estimated as the maximum numerical rank over
/// five pseudo-random complex frequencies of magnitude about one.
inline Eigen::Index normal_rank(const LtiSystem& sys, std::uint64_t seed = 0x5eed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> radius(0.5, 1.5);
    Eigen::Index best = 0;
    for (int i = 0; i < 5; ++i) {
        const Complex s = std::polar(radius(rng), angle(rng));
        best = std::max(best, numeric_rank(rosenbrock_at(sys, s), kZeroRankTolerance));
    }
    return best;
}

/// Finite invariant zeros of a square (m == p) system: finite generalized
/// eigenvalues of ([A, B; -C, 0], diag(I, 0)) that pass the rank-drop test.
inline std::vector<Complex> invariant_zeros(const LtiSystem& sys) {
    sys.validate("invariant_zeros");
    if (sys.inputs() != sys.outputs())
        throw UnsupportedError("invariant_zeros: only square systems (m == p) are supported, got m=" +
                               std::to_string(sys.inputs()) + ", p=" + std::to_string(sys.outputs()));
    const Eigen::Index n = sys.states(), m = sys.inputs();
    Matrix pencil = Matrix::Zero(n + m, n + m);
    pencil.topLeftCorner(n, n) = sys.A;
    pencil.topRightCorner(n, m) = sys.B;
    pencil.bottomLeftCorner(m, n) = -sys.C;
    Matrix mass = Matrix::Zero(n + m, n + m);
    mass.topLeftCorner(n, n).setIdentity();

    Eigen::GeneralizedEigenSolver<Matrix> ges(pencil, mass, /*computeEigenvectors=*/false);
    if (ges.info() != Eigen::Success) throw NumericalError("invariant_zeros: QZ iteration failed");

    const Eigen::Index nrank = normal_rank(sys);
    std::vector<Complex> zeros;
    for (Eigen::Index i = 0; i < ges.alphas().size(); ++i) {
        const Complex alpha = ges.alphas()(i);
        const double beta = ges.betas()(i);
        // Infinite eigenvalues come from the singular mass matrix.
        if (std::abs(beta) < 1e-10 * std::max(1.0, std::abs(alpha))) continue;
        const Complex s = alpha / beta;
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) continue;
        if (numeric_rank(rosenbrock_at(sys, s), kZeroRankTolerance) < nrank) zeros.push_back(s);
    }
    std::sort(zeros.begin(), zeros.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
    });
    return zeros;
}

/// Invariant zeros with strictly positive real part.
inline std::vector<Complex> unstable_zeros(const LtiSystem& sys) {
    std::vector<Complex> out;
    for (const auto& z : invariant_zeros(sys))
        if (z.real() > 0.0) out.push_back(z);
    return out;
}

struct AttackScaling {
    /// When set, rescale so that ||a0|| equals this value. Otherwise the pair
    /// [x0; a0] is returned with unit joint norm.
    std::optional<double> a0_norm;
};

/// Extracts (x0, a0) from the null space of P(s0). The pair is real when s0
/// is real; its sign (phase) is fixed so the largest-magnitude entry of a0
/// is real and positive.
inline ZeroData attack_direction(const LtiSystem& sys, Complex s0, AttackScaling scaling = {}) {
    sys.validate("attack_direction");
    const Eigen::Index n = sys.states(), m = sys.inputs();
    CVector v;
    if (s0.imag() == 0.0) {
        const auto basis = null_space(rosenbrock_at(sys, s0.real()), kZeroRankTolerance);
        if (basis.empty()) throw NotAZeroError("attack_direction: P(s0) has full column rank");
        v = basis.front().cast<Complex>();
    } else {
        const auto basis = null_space(rosenbrock_at(sys, s0), kZeroRankTolerance);
        if (basis.empty()) throw NotAZeroError("attack_direction: P(s0) has full column rank");
        v = basis.front();
    }
    v /= v.norm();

    CVector a0 = v.tail(m);
    Eigen::Index pivot = 0;
    a0.cwiseAbs().maxCoeff(&pivot);
    if (std::abs(a0(pivot)) > 0.0) v *= std::conj(a0(pivot)) / std::abs(a0(pivot));
    if (s0.imag() == 0.0) v = v.real().cast<Complex>();

    ZeroData zd{s0, v.head(n), v.tail(m)};
    if (scaling.a0_norm) {
        const double an = zd.a0.norm();
        if (!(an > 0.0)) throw NotAZeroError("attack_direction: zero direction has no input component");
        const double k = *scaling.a0_norm / an;
        zd.x0 *= k;
        zd.a0 *= k;
    }
    return zd;
}

/// a(t) = Re(a0 e^{s0 t}).
inline Vector zd_signal(const ZeroData& zd, double t) {
    return (zd.a0 * std::exp(zd.s0 * t)).real();
}

/// x0 e^{s0 t}: the state component the attack excites.
inline Vector zd_state(const ZeroData& zd, double t) { return (zd.x0 * std::exp(zd.s0 * t)).real(); }

}  // namespace zdsim
