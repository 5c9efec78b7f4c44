// dynamics.hpp — time evolution of density matrices: fixed-step 4th-order
// integration of the master equation, spectral propagation through the
// superoperator eigenbasis, entropy, and the t → ∞ stationary projection.

#pragma once

#include "lindblad/liouvillian.hpp"
#include "lindblad/types.hpp"

#include <Eigen/LU>

#include <functional>
#include <vector>

namespace lindblad {

// Hermitian, unit-trace, positive within tolerance. The positivity floor is
// -1e-9 by default; states produced mid-integration are admitted down to the
// integrator's abort threshold of -1e-6.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m, double positivity_floor = tol::positivity_floor);
    const Matrix& matrix() const { return mat_; }
    Eigen::Index dim() const { return mat_.rows(); }

private:
    Matrix mat_;
};

// Defects are measured on the raw step result, before re-Hermitization and
// trace renormalization; min eigenvalue and entropy on the corrected state.
struct StepDiagnostics {
    double trace_defect;
    double hermiticity_defect;
    double min_eigenvalue;
    double entropy;
};

struct Trajectory {
    std::vector<double> times;  // strictly increasing from 0
    std::vector<DensityMatrix> states;
    std::vector<StepDiagnostics> diagnostics;
};

// Classical 4th-order Runge-Kutta with fixed step dt (a short final step
// lands exactly on t_end). Each recorded state is re-Hermitized and
// trace-renormalized with the pre-correction defects logged. Aborts if any
// eigenvalue falls below -1e-6. t_end = 0 yields the single-sample
// trajectory {0, rho0}.
Trajectory integrate(const LindbladSystem& sys, const DensityMatrix& rho0,
                     double t_end, double dt);

// The sample times integrate() records for a given schedule: every
// ceil(steps/1000)-th step plus the final one, at most 1001 samples.
std::vector<double> sample_times(double t_end, double dt);

// Builds a trajectory by evaluating state_at on the given times, logging the
// same diagnostics integrate() would.
Trajectory tabulate_trajectory(const std::function<Matrix(double)>& state_at,
                               const std::vector<double>& times);

// One-time eigendecomposition of a superoperator, reused across times.
// Refuses eigenvector matrices with condition number above 1e8 (nearly
// defective generator); integrate() is the fallback for those.
class SpectralPropagator {
public:
    explicit SpectralPropagator(const Superoperator& super);

    Matrix state_at(const Matrix& rho0, double t) const;
    double condition() const { return condition_; }
    const Vector& eigenvalues() const { return values_; }

private:
    Eigen::Index dim_;
    double super_norm_;
    Vector values_;
    Matrix vectors_;
    Eigen::PartialPivLU<Matrix> lu_;
    double condition_;

    friend DensityMatrix asymptotic_state(const LindbladSystem& sys, const DensityMatrix& rho0);
};

// Expands vec(rho0) in the superoperator eigenbasis, scales each coefficient
// by exp(λ_k t), reshapes.
DensityMatrix propagate_spectral(const Superoperator& super, const DensityMatrix& rho0, double t);

// -Σ p ln p over the eigenvalues, in nats; 0·ln 0 = 0, eigenvalues in
// [-1e-9, 0) are clamped to zero, anything lower is an error.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const Matrix& rho);

// Projection of rho0 onto the stationary eigenspace (|Re λ| within tolerance
// of zero) along the decaying modes; the t → ∞ limit of propagate_spectral.
// Refuses systems whose stationary eigenvalues have nonzero imaginary part.
DensityMatrix asymptotic_state(const LindbladSystem& sys, const DensityMatrix& rho0);

// min(1e-2, 0.1/||S||_F), the step used when a scenario does not fix one.
double default_time_step(const LindbladSystem& sys);

}  // namespace lindblad
