#include "lindblad/matrix_ops.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lindblad {

namespace {

void require_square(const Matrix& a, const char* fn) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw std::invalid_argument(std::string(fn) + ": matrix must be square, d >= 1");
    }
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* fn) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << fn << ": dimension mismatch (" << a.rows() << "x" << a.cols()
           << " vs " << b.rows() << "x" << b.cols() << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

Matrix adjoint(const Matrix& a) {
    require_square(a, "adjoint");
    return a.adjoint();
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_square(a, "commutator");
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

Complex frobenius_inner(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "frobenius_inner");
    return (a.adjoint() * b).trace();
}

HermitianEigenSystem hermitian_eigen(const Matrix& a) {
    require_square(a, "hermitian_eigen");
    const double defect = hermiticity_defect(a);
    const double limit = tol::hermiticity_rel * (1.0 + a.norm());
    if (defect > limit) {
        std::ostringstream os;
        os << "hermitian_eigen: input not Hermitian, defect " << defect
           << " exceeds tolerance " << limit;
        throw std::invalid_argument(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
    if (solver.info() != Eigen::Success) {
        throw numerical_error("hermitian_eigen: eigensolver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

GeneralEigenSystem general_eigen(const Matrix& a) {
    require_square(a, "general_eigen");
    Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        throw numerical_error(
            "general_eigen: eigensolver did not converge within its iteration "
            "budget; no eigenpairs (and hence no residuals) are available");
    }
    const Eigen::Index n = a.rows();
    const Vector values = solver.eigenvalues();
    const Matrix vectors = solver.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        if (values(i).real() != values(j).real()) return values(i).real() > values(j).real();
        return values(i).imag() < values(j).imag();
    });

    GeneralEigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    out.residuals.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = values(src);
        out.eigenvectors.col(k) = vectors.col(src);
        out.residuals(k) = (a * out.eigenvectors.col(k) - out.eigenvalues(k) * out.eigenvectors.col(k)).norm();
    }
    return out;
}

double min_eigenvalue_hermitian(const Matrix& a) {
    return hermitian_eigen(a).eigenvalues(0);
}

Matrix identity(Eigen::Index d) {
    return Matrix::Identity(d, d);
}

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0),
         Complex(0.0, 1.0), 0.0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0,
         0.0, -1.0;
    return m;
}

}  // namespace lindblad
