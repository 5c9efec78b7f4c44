#include "lindblad/liouvillian.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace lindblad {

namespace {

const Complex kI(0.0, 1.0);

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Canonical eigenmatrix: unit Frobenius norm, largest-modulus entry real positive.
Matrix canonicalize(Matrix v) {
    const double nrm = v.norm();
    if (nrm > 0.0) v /= nrm;
    Eigen::Index r = 0, c = 0;
    v.cwiseAbs().maxCoeff(&r, &c);
    const Complex pivot = v(r, c);
    const double mag = std::abs(pivot);
    if (mag > 0.0) v *= std::conj(pivot) / mag;
    return v;
}

}  // namespace

LindbladSystem::LindbladSystem(Matrix h, std::vector<Matrix> ls)
    : hamiltonian(std::move(h)), jumps(std::move(ls)) {
    if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() < 1) {
        throw std::invalid_argument("LindbladSystem: hamiltonian must be square, d >= 1");
    }
    const double defect = hermiticity_defect(hamiltonian);
    const double limit = tol::hermiticity_rel * (1.0 + hamiltonian.norm());
    if (defect > limit) {
        std::ostringstream os;
        os << "LindbladSystem: hamiltonian not Hermitian, defect " << defect
           << " exceeds tolerance " << limit;
        throw std::invalid_argument(os.str());
    }
    for (std::size_t n = 0; n < jumps.size(); ++n) {
        if (jumps[n].rows() != hamiltonian.rows() || jumps[n].cols() != hamiltonian.cols()) {
            std::ostringstream os;
            os << "LindbladSystem: jump operator " << n << " has dimension "
               << jumps[n].rows() << "x" << jumps[n].cols() << ", expected "
               << hamiltonian.rows() << "x" << hamiltonian.cols();
            throw std::invalid_argument(os.str());
        }
    }
}

Matrix apply_liouvillian(const LindbladSystem& sys, const Matrix& v) {
    if (v.rows() != sys.dim() || v.cols() != sys.dim()) {
        throw std::invalid_argument("apply_liouvillian: dimension mismatch");
    }
    Matrix out = -kI * commutator(sys.hamiltonian, v);
    for (const Matrix& l : sys.jumps) {
        const Matrix ldl = l.adjoint() * l;
        out += l * v * l.adjoint() - 0.5 * (ldl * v) - 0.5 * (v * ldl);
    }
    return out;
}

Superoperator build_superoperator(const LindbladSystem& sys) {
    const Eigen::Index d = sys.dim();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix& h = sys.hamiltonian;
    Matrix s = -kI * (kron(id, h) - kron(h.transpose(), id));
    for (const Matrix& l : sys.jumps) {
        const Matrix ldl = l.adjoint() * l;
        s += kron(l.conjugate(), l) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id);
    }
    return Superoperator{d, std::move(s)};
}

std::vector<SpectralMode> spectrum(const LindbladSystem& sys) {
    const Superoperator super = build_superoperator(sys);
    const GeneralEigenSystem eig = general_eigen(super.matrix);
    const Eigen::Index d = sys.dim();

    std::vector<SpectralMode> modes;
    modes.reserve(static_cast<std::size_t>(eig.eigenvalues.size()));
    bool has_stationary = false;
    const double zero_limit = tol::stationary_rel * super.norm();
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        SpectralMode mode;
        mode.eigenvalue = eig.eigenvalues(k);
        mode.eigenmatrix = canonicalize(unvec(eig.eigenvectors.col(k), d));
        mode.residual = (apply_liouvillian(sys, mode.eigenmatrix) - mode.eigenvalue * mode.eigenmatrix).norm();
        if (std::abs(mode.eigenvalue) <= zero_limit) has_stationary = true;
        modes.push_back(std::move(mode));
    }
    if (!has_stationary) {
        throw numerical_error("spectrum: no stationary eigenvalue found; trace preservation "
                              "guarantees one, so the eigensolve is unreliable");
    }
    return modes;
}

double entropy_condition_defect(const LindbladSystem& sys) {
    const Eigen::Index d = sys.dim();
    Matrix balance = Matrix::Zero(d, d);
    for (const Matrix& l : sys.jumps) {
        balance += l.adjoint() * l - l * l.adjoint();
    }
    return balance.norm();
}

bool entropy_condition_holds(const LindbladSystem& sys) {
    double scale = 0.0;
    for (const Matrix& l : sys.jumps) scale += l.squaredNorm();
    return entropy_condition_defect(sys) <= tol::entropy_condition_rel * (1.0 + scale);
}

EigenvalueIdentity eigenvalue_identity_check(const LindbladSystem& sys, const SpectralMode& mode) {
    const Matrix& v = mode.eigenmatrix;
    if (v.rows() != sys.dim() || v.cols() != sys.dim()) {
        throw std::invalid_argument("eigenvalue_identity_check: dimension mismatch");
    }
    const double norm2 = v.squaredNorm();  // Tr(v†v)
    if (norm2 <= 0.0) {
        throw std::invalid_argument("eigenvalue_identity_check: zero-norm eigenmatrix");
    }

    const Eigen::Index d = sys.dim();
    double comm_term = 0.0;       // -½ Tr Σ [v,L†]†[v,L†]
    Matrix balance = Matrix::Zero(d, d);
    double im_jump_term = 0.0;    // Im Tr Σ L v† [v, L†]
    for (const Matrix& l : sys.jumps) {
        const Matrix c = commutator(v, Matrix(l.adjoint()));
        comm_term -= 0.5 * c.squaredNorm();
        balance += l.adjoint() * l - l * l.adjoint();
        im_jump_term += (l * v.adjoint() * c).trace().imag();
    }
    const double balance_term = -0.5 * (v * v.adjoint() * balance).trace().real();
    const double h_term = (v.adjoint() * commutator(sys.hamiltonian, v)).trace().real();

    EigenvalueIdentity out;
    out.rhs_real = (comm_term + balance_term) / norm2;
    out.rhs_imag = (im_jump_term - h_term) / norm2;
    out.max_deviation = std::max(std::abs(out.rhs_real - mode.eigenvalue.real()),
                                 std::abs(out.rhs_imag - mode.eigenvalue.imag()));
    return out;
}

double decay_gap(const std::vector<SpectralMode>& modes) {
    if (modes.empty()) throw std::invalid_argument("decay_gap: empty mode list");
    double gap = std::numeric_limits<double>::infinity();
    for (const SpectralMode& mode : modes) {
        if (mode.eigenvalue.real() < -tol::decay_threshold) {
            gap = std::min(gap, std::abs(mode.eigenvalue.real()));
        }
    }
    return gap;
}

std::vector<std::vector<int>> eigenvalue_clusters(const std::vector<SpectralMode>& modes,
                                                  double tolerance) {
    const int n = static_cast<int>(modes.size());
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
            i = parent[static_cast<std::size_t>(i)];
        }
        return i;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(modes[static_cast<std::size_t>(i)].eigenvalue -
                         modes[static_cast<std::size_t>(j)].eigenvalue) <= tolerance) {
                parent[static_cast<std::size_t>(find(i))] = find(j);
            }
        }
    }
    std::vector<std::vector<int>> clusters;
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        const int root = find(i);
        if (label[static_cast<std::size_t>(root)] < 0) {
            label[static_cast<std::size_t>(root)] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(label[static_cast<std::size_t>(root)])].push_back(i);
    }
    return clusters;
}

}  // namespace lindblad
