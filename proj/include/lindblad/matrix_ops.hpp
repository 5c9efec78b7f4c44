// matrix_ops.hpp — dense complex matrix kernel: adjoints, commutators,
// Frobenius pairing, Hermitian and general eigendecompositions.
// Sized for d ≤ 32; everything is dense and double precision.

#pragma once

#include "lindblad/types.hpp"

#include <vector>

namespace lindblad {

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
// eigenvector columns orthonormal, A = V diag(w) V†.
struct HermitianEigenSystem {
    RealVector eigenvalues;
    Matrix eigenvectors;
};

// Eigendecomposition of a general square matrix. Eigenvalues sorted by
// descending real part, ties by ascending imaginary part; eigenvector
// columns have unit 2-norm; residuals[k] = ||A v_k - λ_k v_k||₂.
struct GeneralEigenSystem {
    Vector eigenvalues;
    Matrix eigenvectors;
    RealVector residuals;
};

Matrix adjoint(const Matrix& a);
Matrix commutator(const Matrix& a, const Matrix& b);
Complex frobenius_inner(const Matrix& a, const Matrix& b);  // Tr(A†B)

HermitianEigenSystem hermitian_eigen(const Matrix& a);
GeneralEigenSystem general_eigen(const Matrix& a);
double min_eigenvalue_hermitian(const Matrix& a);

// 2×2 Pauli matrices and identity, used all over the test systems.
Matrix identity(Eigen::Index d);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();

}  // namespace lindblad
