// liouvillian.hpp — the Lindblad generator: term-by-term application,
// d²×d² matrix realization, spectral decomposition, the entropy-balance
// condition on the jump operators, and per-mode eigenvalue cross-checks.

#pragma once

#include "lindblad/matrix_ops.hpp"
#include "lindblad/types.hpp"

#include <vector>

namespace lindblad {

// Hamiltonian (Hermitian, units 1/time) plus jump operators (units 1/sqrt(time)).
// All matrices d×d; validated at construction.
struct LindbladSystem {
    Matrix hamiltonian;
    std::vector<Matrix> jumps;

    LindbladSystem(Matrix h, std::vector<Matrix> ls);
    Eigen::Index dim() const { return hamiltonian.rows(); }
};

// Matrix realization of the generator under the column-stacking convention
// vec(A X B) = (Bᵀ ⊗ A) vec(X):
//   S = -i(I⊗H - Hᵀ⊗I) + Σ_n [conj(L_n)⊗L_n - ½ I⊗(L_n†L_n) - ½ (L_n†L_n)ᵀ⊗I]
// Column j is the generator applied to the j-th vectorization basis matrix.
struct Superoperator {
    Eigen::Index dim;    // d; matrix is d²×d²
    Matrix matrix;

    double norm() const { return matrix.norm(); }
};

// One eigenpair of the generator: S vec(v) = λ vec(v), reshaped to a d×d
// eigenmatrix with unit Frobenius norm and the largest-modulus entry made
// real positive. residual = ||generator(v) - λ v||_F.
struct SpectralMode {
    Complex eigenvalue;
    Matrix eigenmatrix;
    double residual;
};

// Right sides of the real/imaginary eigenvalue identities, both divided by
// Tr(v†v), plus the worst deviation from the mode's eigenvalue.
struct EigenvalueIdentity {
    double rhs_real;
    double rhs_imag;
    double max_deviation;
};

// -i[H, v] + Σ_n (L_n v L_n† - ½ L_n†L_n v - ½ v L_n†L_n), term by term.
Matrix apply_liouvillian(const LindbladSystem& sys, const Matrix& v);

Superoperator build_superoperator(const LindbladSystem& sys);

// All d² modes, sorted by descending Re λ (ties by ascending Im λ).
// At least one eigenvalue with |λ| <= stationary_rel * ||S||_F always exists.
std::vector<SpectralMode> spectrum(const LindbladSystem& sys);

// ||Σ_n L_n†L_n - Σ_n L_nL_n†||_F. Zero means the von Neumann entropy of any
// evolved state is non-decreasing.
double entropy_condition_defect(const LindbladSystem& sys);
bool entropy_condition_holds(const LindbladSystem& sys);

EigenvalueIdentity eigenvalue_identity_check(const LindbladSystem& sys, const SpectralMode& mode);

// Smallest |Re λ| over modes with Re λ < -decay_threshold; +inf if none decay.
double decay_gap(const std::vector<SpectralMode>& modes);

// Groups mode indices whose eigenvalues sit within cluster_abs of each other
// (transitively); degenerate eigenvalues are reported, never Jordan-resolved.
std::vector<std::vector<int>> eigenvalue_clusters(const std::vector<SpectralMode>& modes,
                                                  double tolerance = tol::cluster_abs);

}  // namespace lindblad
