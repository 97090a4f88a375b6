#pragma once

// Dense small-matrix linear algebra and fixed-step integration of LTI systems.
//
// Everything here is value-semantic and free of shared state, so scenario
// runs may call into it concurrently.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "zdsim/errors.hpp"

namespace zdsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline std::string shape_of(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

/// State-space triple (A, B, C) of a continuous-time LTI system
///   x' = A x + B u,  y = C x.
struct LtiSystem {
    Matrix A;
    Matrix B;
    Matrix C;

    Eigen::Index states() const { return A.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return C.rows(); }

    /// Throws ConfigError unless A is square, B has n rows, C has n columns
    /// and every entry is finite.
    void validate(const std::string& name = "system") const {
        if (A.rows() == 0 || A.rows() != A.cols())
            throw ConfigError(name + ": A must be square and non-empty, got " + shape_of(A));
        if (B.rows() != A.rows() || B.cols() == 0)
            throw ConfigError(name + ": B must have " + std::to_string(A.rows()) +
                              " rows, got " + shape_of(B));
        if (C.cols() != A.rows() || C.rows() == 0)
            throw ConfigError(name + ": C must have " + std::to_string(A.rows()) +
                              " columns, got " + shape_of(C));
        if (!all_finite(A) || !all_finite(B) || !all_finite(C))
            throw ConfigError(name + ": matrices contain non-finite entries");
    }

    static LtiSystem make(Matrix a, Matrix b, Matrix c, const std::string& name = "system") {
        LtiSystem s{std::move(a), std::move(b), std::move(c)};
        s.validate(name);
        return s;
    }
};

struct StateVector {
    Vector values;
    double time = 0.0;
};

/// Largest absolute entry; used for the divergence cap.
inline double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// One classical RK4 step of x' = A x + B u(t) where the input is sampled at
/// the stage times t, t + dt/2, t + dt. Use this form when the input is a
/// known function of time (e.g. an exponential attack signal) so that the
/// integration error stays at O(dt^5) per step instead of O(dt^2).
template <class InputFn>
StateVector integrate_step_with(const LtiSystem& sys, const StateVector& state, InputFn&& input,
                                double dt) {
    if (!(dt > 0.0)) throw ConfigError("integrate_step: dt must be positive");
    if (state.values.size() != sys.states())
        throw ConfigError("integrate_step: state dimension " + std::to_string(state.values.size()) +
                          " does not match A (" + shape_of(sys.A) + ")");
    const double t = state.time;
    const Vector& x = state.values;
    const Vector u1 = input(t);
    const Vector u2 = input(t + 0.5 * dt);
    const Vector u3 = input(t + dt);
    if (u1.size() != sys.inputs())
        throw ConfigError("integrate_step: input dimension " + std::to_string(u1.size()) +
                          " does not match B (" + shape_of(sys.B) + ")");

    const Vector k1 = sys.A * x + sys.B * u1;
    const Vector k2 = sys.A * (x + (0.5 * dt) * k1) + sys.B * u2;
    const Vector k3 = sys.A * (x + (0.5 * dt) * k2) + sys.B * u2;
    const Vector k4 = sys.A * (x + dt * k3) + sys.B * u3;
    return {x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), t + dt};
}

/// One classical RK4 step with the input held constant over the step
/// (zero-order hold between samples).
inline StateVector integrate_step(const LtiSystem& sys, const StateVector& state, const Vector& input,
                                  double dt) {
    return integrate_step_with(sys, state, [&input](double) -> const Vector& { return input; }, dt);
}

/// State advanced by `lead` seconds (one RK4 step, input held) when
/// lead > 0; otherwise the state itself.
inline Vector sample_ahead(const LtiSystem& sys, const StateVector& state, const Vector& input, double lead) {
    if (!(lead > 0.0)) return state.values;
    return integrate_step(sys, state, input, lead).values;
}

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw ConfigError(std::string(what) + ": matrix must be square, got " + shape_of(m));
}

/// All eigenvalues of a real square matrix (Hessenberg reduction + shifted QR).
inline std::vector<Complex> eigenvalues(const Matrix& m) {
    require_square(m, "eigenvalues");
    Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalues: QR iteration did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

/// max Re(lambda) over the spectrum.
inline double spectral_abscissa(const Matrix& m) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& l : eigenvalues(m)) best = std::max(best, l.real());
    return best;
}

inline bool is_hurwitz(const Matrix& m) { return spectral_abscissa(m) < 0.0; }

/// Largest singular value.
inline double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

/// Eigenvalues of a symmetric matrix, ascending.
inline Vector symmetric_eigenvalues(const Matrix& m) {
    require_square(m, "symmetric_eigenvalues");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

/// Solves A^T P + P A = -Q for symmetric P (Bartels-Stewart on the complex
/// Schur form of A). Throws InfeasibleError if A is not Hurwitz.
inline Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
    require_square(a, "solve_lyapunov(A)");
    require_square(q, "solve_lyapunov(Q)");
    if (q.rows() != a.rows())
        throw ConfigError("solve_lyapunov: Q is " + shape_of(q) + " but A is " + shape_of(a));
    const double abscissa = spectral_abscissa(a);
    if (!(abscissa < 0.0))
        throw InfeasibleError("solve_lyapunov: A is not Hurwitz (spectral abscissa " +
                              std::to_string(abscissa) + ")");

    const Eigen::Index n = a.rows();
    Eigen::ComplexSchur<Matrix> schur(a);
    const CMatrix& t = schur.matrixT();
    const CMatrix& u = schur.matrixU();
    // With A = U T U^H the equation becomes T^H Y + Y T = -U^H Q U, P = U Y U^H.
    const CMatrix rhs = -(u.adjoint() * q.cast<Complex>() * u);
    CMatrix y = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        CVector col = rhs.col(j);
        for (Eigen::Index k = 0; k < j; ++k) col -= y.col(k) * t(k, j);
        // (T^H + t_jj I) is lower triangular: forward substitution.
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex acc = col(i);
            for (Eigen::Index k = 0; k < i; ++k) acc -= std::conj(t(k, i)) * y(k, j);
            y(i, j) = acc / (std::conj(t(i, i)) + t(j, j));
        }
    }
    const Matrix p = (u * y * u.adjoint()).real();
    return 0.5 * (p + p.transpose());
}

namespace detail {

template <class MatrixT>
auto null_space_impl(const MatrixT& m, double tol) {
    using VectorT = Eigen::Matrix<typename MatrixT::Scalar, Eigen::Dynamic, 1>;
    std::vector<VectorT> basis;
    if (m.cols() == 0) return basis;
    Eigen::JacobiSVD<MatrixT> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double largest = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (largest > 0.0 && sv(i) >= tol * largest) ++rank;
    // Columns of V beyond the numerical rank span the null space; this also
    // covers wide matrices where V has more columns than singular values.
    for (Eigen::Index i = rank; i < m.cols(); ++i) basis.push_back(svd.matrixV().col(i));
    return basis;
}

}  // namespace detail

/// Orthonormal basis of the numerical null space: right singular vectors
/// whose singular value is below tol times the largest one.
inline std::vector<Vector> null_space(const Matrix& m, double tol) {
    if (!(tol > 0.0)) throw ConfigError("null_space: tol must be positive");
    return detail::null_space_impl(m, tol);
}

inline std::vector<CVector> null_space(const CMatrix& m, double tol) {
    if (!(tol > 0.0)) throw ConfigError("null_space: tol must be positive");
    return detail::null_space_impl(m, tol);
}

/// Numerical rank with singular values compared relative to the largest.
template <class MatrixT>
Eigen::Index numeric_rank(const MatrixT& m, double rel_tol = 1e-8) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<MatrixT> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) >= rel_tol * sv(0)) ++r;
    return r;
}

/// Block-diagonal assembly helper.
inline Matrix block_diag(const std::vector<Matrix>& blocks) {
    Eigen::Index rows = 0, cols = 0;
    for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out = Matrix::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

}  // namespace zdsim
