#include "lindblad/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lindblad {

namespace {

struct StepGrid {
    double dt;
    double t_end;
    std::size_t full_steps;   // steps of size dt
    bool has_tail;            // extra short step landing on t_end
    std::size_t stride;

    std::size_t total_steps() const { return full_steps + (has_tail ? 1 : 0); }

    double time_at(std::size_t i) const {
        if (i == total_steps()) return t_end;
        return static_cast<double>(i) * dt;
    }

    double step_size(std::size_t i) const {  // size of the step ending at index i
        if (has_tail && i == total_steps()) return t_end - static_cast<double>(full_steps) * dt;
        return dt;
    }

    bool sampled(std::size_t i) const {
        return i % stride == 0 || i == total_steps();
    }
};

StepGrid make_grid(double t_end, double dt) {
    if (t_end < 0.0) throw std::invalid_argument("integrate: t_end must be >= 0");
    if (dt <= 0.0) throw std::invalid_argument("integrate: dt must be > 0");
    if (t_end > 0.0 && dt > t_end * (1.0 + 1e-12)) {
        throw std::invalid_argument("integrate: dt must not exceed t_end");
    }
    StepGrid g;
    g.dt = dt;
    g.t_end = t_end;
    g.full_steps = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
    const double covered = static_cast<double>(g.full_steps) * dt;
    g.has_tail = (t_end - covered) > 1e-12 * std::max(1.0, t_end);
    const std::size_t total = g.full_steps + (g.has_tail ? 1 : 0);
    g.stride = total == 0 ? 1 : (total + 999) / 1000;
    return g;
}

double entropy_from_eigenvalues(const RealVector& w, double floor) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        double p = w(i);
        if (p < floor) {
            std::ostringstream os;
            os << "von_neumann_entropy: eigenvalue " << p << " below floor " << floor;
            throw std::invalid_argument(os.str());
        }
        if (p <= 0.0) continue;  // 0 ln 0 = 0
        s -= p * std::log(p);
    }
    return s;
}

RealVector hermitian_eigenvalues(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw numerical_error("hermitian eigenvalue computation failed");
    }
    return solver.eigenvalues();
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix m, double positivity_floor) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols() || mat_.rows() < 1) {
        throw std::invalid_argument("DensityMatrix: matrix must be square, d >= 1");
    }
    const double herm = hermiticity_defect(mat_);
    const double herm_limit = tol::hermiticity_rel * (1.0 + mat_.norm());
    if (herm > herm_limit) {
        std::ostringstream os;
        os << "DensityMatrix: Hermiticity defect " << herm << " exceeds " << herm_limit;
        throw std::invalid_argument(os.str());
    }
    const double trace_defect = std::abs(mat_.trace() - Complex(1.0, 0.0));
    if (trace_defect > tol::trace_abs) {
        std::ostringstream os;
        os << "DensityMatrix: trace defect " << trace_defect << " exceeds " << tol::trace_abs;
        throw std::invalid_argument(os.str());
    }
    const double min_eig = hermitian_eigenvalues(0.5 * (mat_ + mat_.adjoint())).minCoeff();
    if (min_eig < positivity_floor) {
        std::ostringstream os;
        os << "DensityMatrix: minimum eigenvalue " << min_eig << " below floor " << positivity_floor;
        throw std::invalid_argument(os.str());
    }
}

std::vector<double> sample_times(double t_end, double dt) {
    const StepGrid g = make_grid(t_end, dt);
    std::vector<double> out;
    for (std::size_t i = 0; i <= g.total_steps(); ++i) {
        if (g.sampled(i)) out.push_back(g.time_at(i));
    }
    return out;
}

Trajectory integrate(const LindbladSystem& sys, const DensityMatrix& rho0,
                     double t_end, double dt) {
    if (rho0.dim() != sys.dim()) throw std::invalid_argument("integrate: dimension mismatch");
    const StepGrid grid = make_grid(t_end, dt);

    Trajectory traj;
    Matrix rho = rho0.matrix();

    auto record = [&](std::size_t i, const RealVector& w, double trace_defect,
                      double herm_defect) {
        StepDiagnostics diag;
        diag.trace_defect = trace_defect;
        diag.hermiticity_defect = herm_defect;
        diag.min_eigenvalue = w.minCoeff();
        diag.entropy = entropy_from_eigenvalues(w, tol::positivity_abort);
        traj.times.push_back(grid.time_at(i));
        traj.states.emplace_back(rho, tol::positivity_abort);
        traj.diagnostics.push_back(diag);
    };

    record(0, hermitian_eigenvalues(rho), std::abs(rho.trace() - Complex(1.0, 0.0)),
           hermiticity_defect(rho));

    for (std::size_t i = 1; i <= grid.total_steps(); ++i) {
        const double h = grid.step_size(i);
        const Matrix k1 = apply_liouvillian(sys, rho);
        const Matrix k2 = apply_liouvillian(sys, Matrix(rho + 0.5 * h * k1));
        const Matrix k3 = apply_liouvillian(sys, Matrix(rho + 0.5 * h * k2));
        const Matrix k4 = apply_liouvillian(sys, Matrix(rho + h * k3));
        Matrix raw = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double trace_defect = std::abs(raw.trace() - Complex(1.0, 0.0));
        const double herm_defect = hermiticity_defect(raw);
        rho = 0.5 * (raw + raw.adjoint());
        rho /= rho.trace().real();

        const RealVector w = hermitian_eigenvalues(rho);
        if (w.minCoeff() < tol::positivity_abort) {
            std::ostringstream os;
            os << "integrate: positivity violated at t = " << grid.time_at(i)
               << " (min eigenvalue " << w.minCoeff() << "); reduce dt or check the system";
            throw integration_abort(os.str(), grid.time_at(i));
        }
        if (grid.sampled(i)) record(i, w, trace_defect, herm_defect);
    }
    return traj;
}

Trajectory tabulate_trajectory(const std::function<Matrix(double)>& state_at,
                               const std::vector<double>& times) {
    Trajectory traj;
    for (double t : times) {
        Matrix raw = state_at(t);
        const double trace_defect = std::abs(raw.trace() - Complex(1.0, 0.0));
        const double herm_defect = hermiticity_defect(raw);
        Matrix rho = 0.5 * (raw + raw.adjoint());
        rho /= rho.trace().real();
        const RealVector w = hermitian_eigenvalues(rho);
        StepDiagnostics diag;
        diag.trace_defect = trace_defect;
        diag.hermiticity_defect = herm_defect;
        diag.min_eigenvalue = w.minCoeff();
        diag.entropy = entropy_from_eigenvalues(w, tol::positivity_abort);
        traj.times.push_back(t);
        traj.states.emplace_back(std::move(rho), tol::positivity_abort);
        traj.diagnostics.push_back(diag);
    }
    return traj;
}

SpectralPropagator::SpectralPropagator(const Superoperator& super)
    : dim_(super.dim), super_norm_(super.norm()) {
    const GeneralEigenSystem eig = general_eigen(super.matrix);
    values_ = eig.eigenvalues;
    vectors_ = eig.eigenvectors;

    Eigen::BDCSVD<Matrix> svd(vectors_);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    condition_ = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
    if (!(condition_ <= tol::eigenbasis_condition_max)) {
        std::ostringstream os;
        os << "spectral propagation refused: eigenvector matrix condition number "
           << condition_ << " exceeds " << tol::eigenbasis_condition_max
           << " (nearly defective generator); use integrate() instead";
        throw numerical_error(os.str());
    }
    lu_.compute(vectors_);
}

Matrix SpectralPropagator::state_at(const Matrix& rho0, double t) const {
    if (t < 0.0) throw std::invalid_argument("propagate_spectral: t must be >= 0");
    Vector coeffs = lu_.solve(vec(rho0));
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs(k) *= std::exp(values_(k) * t);
    }
    return unvec(vectors_ * coeffs, dim_);
}

DensityMatrix propagate_spectral(const Superoperator& super, const DensityMatrix& rho0, double t) {
    if (rho0.dim() != super.dim) throw std::invalid_argument("propagate_spectral: dimension mismatch");
    const SpectralPropagator prop(super);
    Matrix out = prop.state_at(rho0.matrix(), t);
    out = 0.5 * (out + out.adjoint());
    out /= out.trace().real();
    return DensityMatrix(std::move(out), tol::positivity_abort);
}

double von_neumann_entropy(const Matrix& rho) {
    return entropy_from_eigenvalues(hermitian_eigenvalues(0.5 * (rho + rho.adjoint())),
                                    tol::positivity_floor);
}

double von_neumann_entropy(const DensityMatrix& rho) {
    return von_neumann_entropy(rho.matrix());
}

DensityMatrix asymptotic_state(const LindbladSystem& sys, const DensityMatrix& rho0) {
    if (rho0.dim() != sys.dim()) throw std::invalid_argument("asymptotic_state: dimension mismatch");
    const Superoperator super = build_superoperator(sys);
    const SpectralPropagator prop(super);

    const double zero_limit = tol::stationary_rel * prop.super_norm_;
    for (Eigen::Index k = 0; k < prop.values_.size(); ++k) {
        const Complex lam = prop.values_(k);
        if (std::abs(lam.real()) <= zero_limit && std::abs(lam.imag()) > zero_limit) {
            std::ostringstream os;
            os << "asymptotic_state: oscillatory stationary mode with eigenvalue ("
               << lam.real() << ", " << lam.imag() << "); no time-independent limit exists";
            throw numerical_error(os.str());
        }
    }

    Vector coeffs = prop.lu_.solve(vec(rho0.matrix()));
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        if (std::abs(prop.values_(k).real()) > zero_limit) coeffs(k) = 0.0;
    }
    Matrix out = unvec(prop.vectors_ * coeffs, sys.dim());
    out = 0.5 * (out + out.adjoint());
    out /= out.trace().real();
    return DensityMatrix(std::move(out), tol::positivity_abort);
}

double default_time_step(const LindbladSystem& sys) {
    const double nrm = build_superoperator(sys).norm();
    if (nrm <= 0.0) return 1e-2;
    return std::min(1e-2, 0.1 / nrm);
}

}  // namespace lindblad
