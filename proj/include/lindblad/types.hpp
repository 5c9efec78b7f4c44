// types.hpp — shared aliases, tolerance set, error types, vec/unvec helpers

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace lindblad {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// All numeric tolerances live here so every module checks against the same set.
namespace tol {
// relative Hermiticity tolerance: ||A - A†||_F <= hermiticity_rel * (1 + ||A||_F)
inline constexpr double hermiticity_rel = 1e-10;
// eigenpair residual contract: ||A v - λ v|| <= eigen_residual_rel * ||A||_F
inline constexpr double eigen_residual_rel = 1e-8;
// |λ| <= stationary_rel * ||L|| classifies a mode as stationary
inline constexpr double stationary_rel = 1e-8;
// unit-trace tolerance for density matrices
inline constexpr double trace_abs = 1e-10;
// density-matrix eigenvalues may dip this far below zero
inline constexpr double positivity_floor = -1e-9;
// integrator aborts once an eigenvalue falls below this
inline constexpr double positivity_abort = -1e-6;
// absolute threshold separating decaying modes from stationary ones in decay_gap
inline constexpr double decay_threshold = 1e-8;
// entropy-condition defect is a "pass" below entropy_condition_rel * (1 + Σ||L_n||_F²)
inline constexpr double entropy_condition_rel = 1e-10;
// certification defects pass below certification_rel * (1 + operator norm scale)
inline constexpr double certification_rel = 1e-8;
// two columns of ell count as degenerate within degeneracy_rel * (1 + max|ell|)
inline constexpr double degeneracy_rel = 1e-8;
// basis orthonormality: max entrywise |Gram - I|
inline constexpr double gram_abs = 1e-8;
// basis projector invariants (orthogonality, completeness, unit trace)
inline constexpr double basis_abs = 1e-10;
// probabilities in [prob_clamp, 0) are clamped to zero
inline constexpr double prob_clamp = -1e-12;
// probability vector must sum to 1 within this
inline constexpr double prob_sum_abs = 1e-10;
// the two algebraic decay-rate formulas must agree within this
inline constexpr double decay_selfcheck_abs = 1e-12;
// propagate_spectral refuses eigenvector matrices with condition number above this
inline constexpr double eigenbasis_condition_max = 1e8;
// eigenvalues within this distance are reported as one cluster
inline constexpr double cluster_abs = 1e-6;
}  // namespace tol

// Failure of a numerical procedure (eigensolver, conditioning, integrator).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integration stopped because the state left the positive cone.
struct integration_abort : numerical_error {
    double time;
    integration_abort(const std::string& msg, double t) : numerical_error(msg), time(t) {}
};

// Malformed or invariant-violating scenario document.
struct scenario_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Column-stacking vectorization; with it, vec(A X B) = (Bᵀ ⊗ A) vec(X).
inline Vector vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index d) {
    if (v.size() != d * d) throw std::invalid_argument("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

inline double hermiticity_defect(const Matrix& a) {
    return (a - a.adjoint()).norm();
}

inline bool is_hermitian(const Matrix& a) {
    return hermiticity_defect(a) <= tol::hermiticity_rel * (1.0 + a.norm());
}

}  // namespace lindblad
